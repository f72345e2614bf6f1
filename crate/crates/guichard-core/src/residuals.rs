//! Residual evaluation of candidate nets against the first-order system
//! (A)–(F) and the original second-order equations.
//!
//! With distinct indices i, j, k and ε₁ = ε₃ = +1, ε₂ = −1:
//!
//! ```text
//! (A)  εᵢlᵢ² + εⱼlⱼ² + εₖlₖ² = 0
//! (B)  lᵢ,ⱼ − hᵢⱼ lⱼ = 0
//! (C)  εᵢlᵢ,ᵢ + εⱼhⱼᵢlⱼ + εₖhₖᵢlₖ = 0
//! (D)  hᵢⱼ,ₖ − hᵢₖhₖⱼ = 0
//! (E)  hᵢⱼ,ⱼ + hⱼᵢ,ᵢ + hᵢₖhⱼₖ = 0
//! (F)  εᵢhᵢⱼ,ᵢ + εⱼhⱼᵢ,ⱼ + εₖhₖᵢhₖⱼ = 0
//! ```
//!
//! Derivatives of h are taken by central differences with step
//! 1e-5·(domain extent per axis); the second-order equations difference the
//! net's first derivatives the same way ("nested" differencing).

use alloc::string::String;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::Result;
use crate::math;
use crate::net::{check_singular, HMatrix, NetField, NetSample, EPSILON};

/// Per-equation-family residual statistics over a grid.
#[derive(Debug, Clone)]
pub struct FamilyResidual {
    pub name: String,
    pub max_abs: f64,
    pub mean_abs: f64,
    pub worst_point: [f64; 3],
}

impl FamilyResidual {
    pub(crate) fn stub(name: &str) -> Self {
        FamilyResidual {
            name: name.to_string(),
            max_abs: 0.0,
            mean_abs: 0.0,
            worst_point: [f64::NAN; 3],
        }
    }

    pub(crate) fn record(&mut self, value: f64, p: [f64; 3]) {
        let a = math::abs(value);
        self.mean_abs += a;
        if a > self.max_abs || self.worst_point[0].is_nan() {
            self.max_abs = a;
            self.worst_point = p;
        }
    }

    pub fn pass(&self, tol: f64) -> bool {
        self.max_abs <= tol
    }
}

#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub tolerance: f64,
    pub families: Vec<FamilyResidual>,
}

impl ResidualReport {
    pub fn pass(&self) -> bool {
        self.families.iter().all(|f| f.pass(self.tolerance))
    }

    pub fn max_abs(&self) -> f64 {
        self.families
            .iter()
            .fold(0.0, |m, f| math::max(m, f.max_abs))
    }

    pub fn family(&self, name: &str) -> Option<&FamilyResidual> {
        self.families.iter().find(|f| f.name == name)
    }
}

/// The Guichard defect `l₁² − l₂² + l₃²` at a point.
pub fn guichard_residual<F: NetField + ?Sized>(net: &F, p: [f64; 3]) -> Result<f64> {
    let l = net.l_at(p)?;
    Ok(l[0] * l[0] - l[1] * l[1] + l[2] * l[2])
}

/// `h[i][j] = (∂lᵢ/∂xⱼ)/lⱼ` at a point.
pub fn h_from_l<F: NetField + ?Sized>(net: &F, p: [f64; 3]) -> Result<HMatrix> {
    let s = net.sample(p)?;
    HMatrix::from_sample(&s, p)
}

fn shifted(p: [f64; 3], axis: usize, delta: f64) -> [f64; 3] {
    let mut q = p;
    q[axis] += delta;
    q
}

/// Samples at `p ± step` along every axis, for nested differencing.
fn axis_probes<F: NetField + ?Sized>(
    net: &F,
    p: [f64; 3],
    h: &[f64; 3],
) -> Result<[[NetSample; 2]; 3]> {
    let mut probes = [[NetSample {
        l: [0.0; 3],
        dl: [[0.0; 3]; 3],
    }; 2]; 3];
    for axis in 0..3 {
        probes[axis][0] = net.sample(shifted(p, axis, h[axis]))?;
        probes[axis][1] = net.sample(shifted(p, axis, -h[axis]))?;
    }
    Ok(probes)
}

fn other_two(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Evaluates the six first-order families over a grid.
pub fn first_order_residuals<F: NetField + ?Sized>(
    net: &F,
    grid: &[[f64; 3]],
    tol: f64,
) -> Result<ResidualReport> {
    let mut fams = [
        FamilyResidual::stub("A"),
        FamilyResidual::stub("B"),
        FamilyResidual::stub("C"),
        FamilyResidual::stub("D"),
        FamilyResidual::stub("E"),
        FamilyResidual::stub("F"),
    ];
    let mut counts = [0usize; 6];
    let h_step = [0, 1, 2].map(|i| net.h_step(i));

    for &p in grid {
        let s = net.sample(p)?;
        check_singular(&s.l, p)?;
        let hm = HMatrix::from_sample(&s, p)?.h;

        // dh[i][j][k] = ∂h_ij/∂x_k by central differences of the h field.
        let probes = axis_probes(net, p, &h_step)?;
        let mut dh = [[[0.0; 3]; 3]; 3];
        for axis in 0..3 {
            let hp = HMatrix::from_sample(&probes[axis][0], p)?.h;
            let hn = HMatrix::from_sample(&probes[axis][1], p)?.h;
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        dh[i][j][axis] = (hp[i][j] - hn[i][j]) / (2.0 * h_step[axis]);
                    }
                }
            }
        }

        // (A) over every distinct triple is the same expression.
        fams[0].record(s.l[0] * s.l[0] - s.l[1] * s.l[1] + s.l[2] * s.l[2], p);
        counts[0] += 1;

        for i in 0..3 {
            let (j0, k0) = other_two(i);
            // (C), symmetric in the pair {j, k}.
            fams[2].record(
                EPSILON[i] * s.dl[i][i]
                    + EPSILON[j0] * hm[j0][i] * s.l[j0]
                    + EPSILON[k0] * hm[k0][i] * s.l[k0],
                p,
            );
            counts[2] += 1;

            for j in 0..3 {
                if i == j {
                    continue;
                }
                let k = 3 - i - j;
                // (B)
                fams[1].record(s.dl[i][j] - hm[i][j] * s.l[j], p);
                counts[1] += 1;
                // (D)
                fams[3].record(dh[i][j][k] - hm[i][k] * hm[k][j], p);
                counts[3] += 1;
                // (E)
                fams[4].record(dh[i][j][j] + dh[j][i][i] + hm[i][k] * hm[j][k], p);
                counts[4] += 1;
                // (F)
                fams[5].record(
                    EPSILON[i] * dh[i][j][i]
                        + EPSILON[j] * dh[j][i][j]
                        + EPSILON[k] * hm[k][i] * hm[k][j],
                    p,
                );
                counts[5] += 1;
            }
        }
    }

    for (f, n) in fams.iter_mut().zip(counts) {
        if n > 0 {
            f.mean_abs /= n as f64;
        }
    }
    Ok(ResidualReport {
        tolerance: tol,
        families: fams.into_iter().collect(),
    })
}

/// Evaluates the original second-order equations:
///
/// ```text
/// (S1)  lᵢ,ⱼₖ − lᵢ,ⱼ lⱼ,ₖ / lⱼ − lᵢ,ₖ lₖ,ⱼ / lₖ = 0
/// (S2)  (lᵢ,ⱼ/lⱼ),ⱼ + (lⱼ,ᵢ/lᵢ),ᵢ + lᵢ,ₖ lⱼ,ₖ / lₖ² = 0
/// ```
pub fn second_order_residuals<F: NetField + ?Sized>(
    net: &F,
    grid: &[[f64; 3]],
    tol: f64,
) -> Result<ResidualReport> {
    let mut s1 = FamilyResidual::stub("S1");
    let mut s2 = FamilyResidual::stub("S2");
    let mut n1 = 0usize;
    let mut n2 = 0usize;
    let h_step = [0, 1, 2].map(|i| net.h_step(i));

    for &p in grid {
        let s = net.sample(p)?;
        check_singular(&s.l, p)?;
        let probes = axis_probes(net, p, &h_step)?;

        // ddl[i][j][k] = ∂ₖ(∂lᵢ/∂xⱼ), nested central difference of dl.
        let mut ddl = [[[0.0; 3]; 3]; 3];
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    ddl[i][j][k] =
                        (probes[k][0].dl[i][j] - probes[k][1].dl[i][j]) / (2.0 * h_step[k]);
                }
            }
        }

        for i in 0..3 {
            let (j, k) = other_two(i);
            s1.record(
                ddl[i][j][k] - s.dl[i][j] * s.dl[j][k] / s.l[j] - s.dl[i][k] * s.dl[k][j] / s.l[k],
                p,
            );
            n1 += 1;
        }

        for i in 0..2 {
            for j in (i + 1)..3 {
                let k = 3 - i - j;
                let q_j = (probes[j][0].dl[i][j] / probes[j][0].l[j]
                    - probes[j][1].dl[i][j] / probes[j][1].l[j])
                    / (2.0 * h_step[j]);
                let q_i = (probes[i][0].dl[j][i] / probes[i][0].l[i]
                    - probes[i][1].dl[j][i] / probes[i][1].l[i])
                    / (2.0 * h_step[i]);
                s2.record(q_j + q_i + s.dl[i][k] * s.dl[j][k] / (s.l[k] * s.l[k]), p);
                n2 += 1;
            }
        }
    }

    if n1 > 0 {
        s1.mean_abs /= n1 as f64;
        s2.mean_abs /= n2 as f64;
    }
    Ok(ResidualReport {
        tolerance: tol,
        families: alloc::vec![s1, s2],
    })
}
