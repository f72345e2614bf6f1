//! Differential geometry of Guichard nets and the associated conformally
//! flat hypersurface metrics.
//!
//! Christoffel symbols of the diagonal metric `g = Σ lᵢ² dxᵢ²`, Gaussian
//! curvature of the coordinate surfaces, geodesic parallelism of the level
//! surfaces ξ = const, recovery of the angle function φ and its defining
//! ODEs, the cyclicity test on mixed partials of φ, and the fundamental
//! forms of the flat surfaces (hyperbolic and spherical cases) behind the
//! two-variable families.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::families::one_constant::{OneConstantCase, OneConstantFamily};
use crate::math;
use crate::net::{GuichardNet, NetField};
use crate::residuals::{FamilyResidual, ResidualReport};
use crate::rng::SplitMix64;

/// Christoffel symbols `Γ[k][i][j]` of `g = Σ lᵢ² dxᵢ²` at a point.
///
/// Nonzero entries of a diagonal metric: `Γᵏᵢᵢ = −lᵢ lᵢ,ₖ / lₖ²` (k ≠ i),
/// `Γⁱᵢⱼ = Γⁱⱼᵢ = lᵢ,ⱼ / lᵢ`, and `Γⁱᵢᵢ = lᵢ,ᵢ / lᵢ`.
pub fn christoffel(net: &GuichardNet, p: [f64; 3]) -> Result<[[[f64; 3]; 3]; 3]> {
    let s = net.sample(p)?;
    crate::net::check_singular(&s.l, p)?;
    let mut gamma = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            if k == i {
                continue;
            }
            gamma[k][i][i] = -s.l[i] * s.dl[i][k] / (s.l[k] * s.l[k]);
            gamma[i][i][k] = s.dl[i][k] / s.l[i];
            gamma[i][k][i] = gamma[i][i][k];
        }
        gamma[i][i][i] = s.dl[i][i] / s.l[i];
    }
    Ok(gamma)
}

/// Gaussian curvature `Kᵢ = (lₖ,ᵢ lⱼ,ᵢ) / (lⱼ lₖ lᵢ²)` of the coordinate
/// surface `xᵢ = const` through `p` (0-based `i`).
pub fn coordinate_surface_curvature(net: &GuichardNet, i: usize, p: [f64; 3]) -> Result<f64> {
    let s = net.sample(p)?;
    crate::net::check_singular(&s.l, p)?;
    let (j, k) = match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    Ok(s.dl[k][i] * s.dl[j][i] / (s.l[j] * s.l[k] * s.l[i] * s.l[i]))
}

/// All three coordinate-surface curvatures at `p`.
pub fn coordinate_curvatures(net: &GuichardNet, p: [f64; 3]) -> Result<[f64; 3]> {
    Ok([
        coordinate_surface_curvature(net, 0, p)?,
        coordinate_surface_curvature(net, 1, p)?,
        coordinate_surface_curvature(net, 2, p)?,
    ])
}

fn require_alpha(net: &GuichardNet) -> Result<[f64; 3]> {
    net.xi_invariant().ok_or(Error::Unsupported {
        what: String::from("operation requires a translation-invariant net (carrying alpha)"),
    })
}

/// `|grad h| = √(Σ αⱼ²/lⱼ²)` for the level function h(x) = Σ αⱼxⱼ.
pub fn level_surface_grad_norm(net: &GuichardNet, p: [f64; 3]) -> Result<f64> {
    let alpha = require_alpha(net)?;
    let l = net.l_at(p)?;
    crate::net::check_singular(&l, p)?;
    let mut sum = 0.0;
    for j in 0..3 {
        sum += alpha[j] * alpha[j] / (l[j] * l[j]);
    }
    Ok(math::sqrt(sum))
}

/// A point of the plane ξ = ξ₀ inside the domain: the box center projected
/// along α onto the plane.
pub fn point_on_level(net: &GuichardNet, xi0: f64) -> Result<[f64; 3]> {
    let alpha = require_alpha(net)?;
    let c = net.domain().center();
    let n2: f64 = alpha.iter().map(|a| a * a).sum();
    let xi_c = alpha[0] * c[0] + alpha[1] * c[1] + alpha[2] * c[2];
    let p = [0, 1, 2].map(|i| c[i] + alpha[i] * (xi0 - xi_c) / n2);
    if !net.domain().contains(p) {
        return Err(Error::OutOfDomain { point: p });
    }
    Ok(p)
}

/// Mean curvature of the level surface through `p`:
/// `H = (1/|grad h|) Σᵢₖ Γᵏᵢᵢ αₖ / lᵢ²`, constant along each level set.
pub fn mean_curvature_at(net: &GuichardNet, p: [f64; 3]) -> Result<f64> {
    let alpha = require_alpha(net)?;
    let gamma = christoffel(net, p)?;
    let l = net.l_at(p)?;
    let w = level_surface_grad_norm(net, p)?;
    let mut sum = 0.0;
    for i in 0..3 {
        for k in 0..3 {
            sum += gamma[k][i][i] * alpha[k] / (l[i] * l[i]);
        }
    }
    Ok(sum / w)
}

/// Mean curvature of the level surface ξ = ξ₀, evaluated at its
/// representative point.
pub fn level_surface_mean_curvature(net: &GuichardNet, xi0: f64) -> Result<f64> {
    let p = point_on_level(net, xi0)?;
    mean_curvature_at(net, p)
}

/// Orthonormal (Euclidean) frame spanning the planes ξ = const.
pub fn level_surface_frame(alpha: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let n = math::sqrt(alpha.iter().map(|a| a * a).sum());
    let an = alpha.map(|a| a / n);
    // Cross with the least-aligned axis.
    let mut axis = [0.0; 3];
    let m = if math::abs(an[0]) <= math::abs(an[1]) && math::abs(an[0]) <= math::abs(an[2]) {
        0
    } else if math::abs(an[1]) <= math::abs(an[2]) {
        1
    } else {
        2
    };
    axis[m] = 1.0;
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let e1r = cross(an, axis);
    let n1 = math::sqrt(e1r.iter().map(|v| v * v).sum());
    let e1 = e1r.map(|v| v / n1);
    let e2 = cross(an, e1);
    (e1, e2)
}

/// Deterministic sample of `count` in-domain points of the level plane
/// ξ = ξ₀, within `radius` of its representative point.
pub fn sample_level_surface(
    net: &GuichardNet,
    xi0: f64,
    count: usize,
    radius: f64,
    seed: u64,
) -> Result<Vec<[f64; 3]>> {
    let alpha = require_alpha(net)?;
    let p0 = point_on_level(net, xi0)?;
    let (e1, e2) = level_surface_frame(alpha);
    let mut rng = SplitMix64::new(seed);
    let mut pts = Vec::with_capacity(count);
    let mut attempts = 0;
    while pts.len() < count && attempts < 100 * count {
        attempts += 1;
        let s = rng.next_range(-radius, radius);
        let t = rng.next_range(-radius, radius);
        let p = [0, 1, 2].map(|i| p0[i] + s * e1[i] + t * e2[i]);
        if net.domain().contains(p) {
            pts.push(p);
        }
    }
    if pts.len() < count {
        return Err(Error::Validation {
            message: String::from("level-surface sampling radius exceeds the domain"),
        });
    }
    Ok(pts)
}

/// Which presentation of the net metric the angle function refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiForm {
    /// `l₁ = l₂ cos φ`, `l₃ = l₂ sin φ`.
    CosType,
    /// `l₂ = l₃ cosh φ̃`, `l₁ = l₃ sinh φ̃`; recovered as artanh(l₁/l₂).
    CoshType,
}

/// Recovers the angle function at a point.
pub fn phi_recover(net: &GuichardNet, p: [f64; 3], form: PhiForm) -> Result<f64> {
    let l = net.l_at(p)?;
    crate::net::check_singular(&l, p)?;
    match form {
        PhiForm::CosType => Ok(math::atan2(l[2], l[0])),
        PhiForm::CoshType => {
            let r = l[0] / l[1];
            if math::abs(r) >= 1.0 {
                return Err(Error::Validation {
                    message: alloc::format!(
                        "cosh-type angle needs |l1/l2| < 1, got {r} at ({}, {}, {})",
                        p[0],
                        p[1],
                        p[2]
                    ),
                });
            }
            Ok(math::atanh(r))
        }
    }
}

/// φ and its exact ξ-derivative along a translation trajectory.
fn phi_and_derivative(net: &GuichardNet, xi: f64) -> Result<(f64, f64)> {
    let t = net.translation().ok_or(Error::Unsupported {
        what: String::from("phi ODE residuals require the elliptic translation family"),
    })?;
    let l = t.l_of_xi(xi)?;
    let d = t.dl_dxi(xi)?;
    let phi = math::atan2(l[2], l[0]);
    let dphi = (d[2] * l[0] - d[0] * l[2]) / (l[0] * l[0] + l[2] * l[2]);
    Ok((phi, dphi))
}

/// Deviations from the φ-structure of the elliptic family:
///
/// * `phi_xi_l2`: `φ_ξ l₂ − c` with c read off mid-range;
/// * `phi_ode`:   `φ_ξ² − c(c₂cos²φ − c₁)`;
/// * `phi_second`: `φ_ξξ + (c·c₂/2)·sin 2φ`, with φ_ξξ differenced from the
///   exact first derivative.
pub fn phi_ode_residuals(
    net: &GuichardNet,
    xi_samples: &[f64],
    tol: f64,
) -> Result<ResidualReport> {
    let t = net.translation().ok_or(Error::Unsupported {
        what: String::from("phi ODE residuals require the elliptic translation family"),
    })?;
    let (lo, hi) = t.xi_range();
    let mid = 0.5 * (lo + hi);
    let (_, dphi_mid) = phi_and_derivative(net, mid)?;
    let c_const = dphi_mid * t.l_of_xi(mid)?[1];
    let [c1, c2, _] = t.constants().c;

    if dphi_mid == 0.0 {
        return Err(Error::Validation {
            message: String::from("phi is constant; the family degenerates"),
        });
    }

    let mut fams = [
        FamilyResidual::stub("phi_xi_l2"),
        FamilyResidual::stub("phi_ode"),
        FamilyResidual::stub("phi_second"),
    ];
    let h = 1e-4 * (hi - lo);
    let mut n = 0usize;
    for &xi in xi_samples {
        let xi = xi.clamp(lo + h, hi - h);
        let (phi, dphi) = phi_and_derivative(net, xi)?;
        let l2 = t.l_of_xi(xi)?[1];
        let p = t.point_at_xi(xi);
        fams[0].record(dphi * l2 - c_const, p);
        let cphi = math::cos(phi);
        fams[1].record(dphi * dphi - c_const * (c2 * cphi * cphi - c1), p);
        let (_, dp) = phi_and_derivative(net, xi + h)?;
        let (_, dm) = phi_and_derivative(net, xi - h)?;
        let ddphi = (dp - dm) / (2.0 * h);
        fams[2].record(ddphi + 0.5 * c_const * c2 * math::sin(2.0 * phi), p);
        n += 1;
    }
    for f in fams.iter_mut() {
        if n > 0 {
            f.mean_abs /= n as f64;
        }
    }
    Ok(ResidualReport {
        tolerance: tol,
        families: fams.into_iter().collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cyclicity {
    /// Both relevant mixed partials nonvanishing.
    NonCyclic,
    /// Both relevant mixed partials vanish on the grid.
    CyclicCompatible,
    /// Mixed pattern; no classification claimed.
    Indeterminate,
}

#[derive(Debug, Clone, Copy)]
pub struct MixedPartial {
    pub axes: (usize, usize),
    pub max_abs: f64,
    pub vanishes: bool,
}

#[derive(Debug, Clone)]
pub struct CyclicityReport {
    pub form: PhiForm,
    pub pairs: [MixedPartial; 3],
    pub classification: Cyclicity,
}

/// Mixed-partial test on the recovered angle function. A net is cyclic-
/// compatible when the two form-relevant mixed partials vanish (< 1e-9 on
/// the grid) and non-cyclic when both are nonzero.
pub fn cyclicity_check(
    net: &GuichardNet,
    grid: &[[f64; 3]],
    form: PhiForm,
) -> Result<CyclicityReport> {
    const VANISH_TOL: f64 = 1e-9;
    let step = [0, 1, 2].map(|i| 0.02 * net.domain().extent(i));
    let pairs_idx = [(0usize, 1usize), (0, 2), (1, 2)];
    let mut max_abs = [0.0f64; 3];
    for &p in grid {
        for (m, &(i, j)) in pairs_idx.iter().enumerate() {
            let at = |si: f64, sj: f64| -> Result<f64> {
                let mut q = p;
                q[i] += si * step[i];
                q[j] += sj * step[j];
                phi_recover(net, q, form)
            };
            let cross = (at(1.0, 1.0)? - at(1.0, -1.0)? - at(-1.0, 1.0)? + at(-1.0, -1.0)?)
                / (4.0 * step[i] * step[j]);
            max_abs[m] = math::max(max_abs[m], math::abs(cross));
        }
    }
    let pairs = [0, 1, 2].map(|m| MixedPartial {
        axes: pairs_idx[m],
        max_abs: max_abs[m],
        vanishes: max_abs[m] < VANISH_TOL,
    });
    let relevant = match form {
        PhiForm::CosType => [(0usize, 1usize), (1, 2)],
        PhiForm::CoshType => [(0usize, 2usize), (1, 2)],
    };
    let states: Vec<bool> = relevant
        .iter()
        .map(|r| pairs.iter().find(|p| p.axes == *r).unwrap().vanishes)
        .collect();
    let classification = if states.iter().all(|v| !v) {
        Cyclicity::NonCyclic
    } else if states.iter().all(|v| *v) {
        Cyclicity::CyclicCompatible
    } else {
        Cyclicity::Indeterminate
    };
    Ok(CyclicityReport {
        form,
        pairs,
        classification,
    })
}

/// Metric of the associated hypersurface, `diag(e^{2P}lᵢ²)`; `conformal`
/// defaults to P ≡ 0.
pub fn hypersurface_metric(
    net: &GuichardNet,
    p: [f64; 3],
    conformal: Option<&dyn Fn([f64; 3]) -> f64>,
) -> Result<[f64; 3]> {
    let l = net.l_at(p)?;
    let factor = math::exp(2.0 * conformal.map_or(0.0, |f| f(p)));
    let g = [0, 1, 2].map(|i| factor * l[i] * l[i]);
    if g.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Validation {
            message: String::from("hypersurface metric lost positive definiteness"),
        });
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ambient {
    H3,
    S3,
}

/// First and second fundamental forms of the flat surface behind a
/// two-variable family, with the Gauss-equation check.
#[derive(Debug, Clone)]
pub struct FundamentalForms {
    pub ambient: Ambient,
    pub first: [[f64; 2]; 2],
    pub second: [[f64; 2]; 2],
    /// `−1 + det II / det I` in H³, `+1 + det II / det I` in S³; zero for a
    /// flat surface.
    pub intrinsic_curvature: f64,
    /// `θ_uu + θ_vv` of the profile in the surface coordinates.
    pub harmonic_residual: f64,
}

/// Fundamental forms at a surface point `q` (coordinates `(x₁,x₂)` for the
/// hyperbolic case c, `(x₁,x₃)` for the spherical case b):
///
/// * H³: `I = diag(sinh²θ, cosh²θ)`, `II = sinhθ·coshθ·diag(1, 1)`;
/// * S³: `I = diag(sin²θ, cos²θ)`,  `II = sinθ·cosθ·diag(1, −1)`.
pub fn flat_surface_forms(family: &OneConstantFamily, q: [f64; 2]) -> Result<FundamentalForms> {
    family.validate()?;
    let (ambient, active) =
        match family.case {
            OneConstantCase::C => (Ambient::H3, (0usize, 1usize)),
            OneConstantCase::B1 | OneConstantCase::B2 => (Ambient::S3, (0usize, 2usize)),
            OneConstantCase::A => return Err(Error::Unsupported {
                what: String::from(
                    "fundamental forms are stated for case b (spherical) and case c (hyperbolic)",
                ),
            }),
        };
    let (au, av) = (family.alpha[active.0], family.alpha[active.1]);
    let xi = au * q[0] + av * q[1];
    let theta = family.phi_at(xi);

    // Second ξ-derivative of the profile (zero for the linear cases).
    let h = 1e-6;
    let ddphi = (family.dphi_at(xi + h) - family.dphi_at(xi - h)) / (2.0 * h);
    let harmonic_residual = (au * au + av * av) * ddphi;

    let (first, second, k_int) = match ambient {
        Ambient::H3 => {
            let (sh, ch) = (math::sinh(theta), math::cosh(theta));
            if sh * sh <= 0.0 {
                return Err(Error::PositivityViolation {
                    factor: "sinh",
                    at: xi,
                });
            }
            let first = [[sh * sh, 0.0], [0.0, ch * ch]];
            let second = [[sh * ch, 0.0], [0.0, sh * ch]];
            let ratio = (second[0][0] * second[1][1]) / (first[0][0] * first[1][1]);
            (first, second, -1.0 + ratio)
        }
        Ambient::S3 => {
            let (sn, cs) = (math::sin(theta), math::cos(theta));
            if sn * sn <= 0.0 || cs * cs <= 0.0 {
                return Err(Error::PositivityViolation {
                    factor: "sin or cos",
                    at: xi,
                });
            }
            let first = [[sn * sn, 0.0], [0.0, cs * cs]];
            let second = [[sn * cs, 0.0], [0.0, -sn * cs]];
            let ratio = (second[0][0] * second[1][1]) / (first[0][0] * first[1][1]);
            (first, second, 1.0 + ratio)
        }
    };
    Ok(FundamentalForms {
        ambient,
        first,
        second,
        intrinsic_curvature: k_int,
        harmonic_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::one_constant::{build_one_constant_family, PhiFunction};
    use crate::families::translation::{build_translation_family_maximal, TranslationConstants};
    use crate::net::Box3;

    fn elliptic_net() -> GuichardNet {
        let tc = TranslationConstants {
            alpha: [3.0f64.sqrt(), 1.0, 2.0],
            c: [1.0, -1.0, -2.0],
            lambda: -4.0,
            l1_0: 1.0,
            sign_l1prime: 1,
        };
        build_translation_family_maximal(tc, (-10.0, 10.0)).unwrap()
    }

    fn case_a_net() -> GuichardNet {
        let fam = OneConstantFamily {
            case: OneConstantCase::A,
            lambda_const: 1.0,
            b: 1.0,
            xi0: 0.0,
            alpha: [0.0, 1.0, 1.0],
            user_phi: None,
        };
        build_one_constant_family(fam, Box3::new([0.0, 0.3, 0.3], [1.0, 1.0, 1.0]).unwrap())
            .unwrap()
    }

    #[test]
    fn christoffel_zero_for_constant_net() {
        let net = GuichardNet::from_closures(
            Box3::new([0.0; 3], [1.0; 3]).unwrap(),
            |_| [1.0, 2.0f64.sqrt(), 1.0],
            |_| [[0.0; 3]; 3],
        );
        let g = christoffel(&net, [0.5; 3]).unwrap();
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(g[k][i][j], 0.0);
                }
            }
        }
    }

    #[test]
    fn christoffel_symmetric_in_lower_indices() {
        let net = elliptic_net();
        let p = net.domain().center();
        let g = christoffel(&net, p).unwrap();
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(g[k][i][j], g[k][j][i]);
                }
            }
        }
    }

    #[test]
    fn christoffel_metric_compatibility() {
        // ∂ₖ g_ii = 2 Γⁱₖᵢ g_ii, finite-differenced metric against symbols.
        let net = elliptic_net();
        let p = net.domain().center();
        let g = christoffel(&net, p).unwrap();
        let h = [0, 1, 2].map(|i| 1e-5 * net.domain().extent(i));
        let l = net.l_at(p).unwrap();
        for i in 0..3 {
            for k in 0..3 {
                let mut pp = p;
                let mut pm = p;
                pp[k] += h[k];
                pm[k] -= h[k];
                let lp = net.l_at(pp).unwrap();
                let lm = net.l_at(pm).unwrap();
                let dg = (lp[i] * lp[i] - lm[i] * lm[i]) / (2.0 * h[k]);
                let expected = 2.0 * g[i][k][i] * l[i] * l[i];
                assert!(
                    (dg - expected).abs() < 1e-6,
                    "i={i} k={k}: {dg} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn curvatures_of_example_family() {
        let net = elliptic_net();
        let p = net.domain().center();
        let ks = coordinate_curvatures(&net, p).unwrap();
        // K_i = c_j c_k alpha_i² with c = (1, −1, −2), alpha² = (3, 1, 4).
        assert!((ks[0] - 6.0).abs() < 1e-9, "K1 = {}", ks[0]);
        assert!((ks[1] + 2.0).abs() < 1e-9, "K2 = {}", ks[1]);
        assert!((ks[2] + 4.0).abs() < 1e-9, "K3 = {}", ks[2]);
        assert!((ks[0] + ks[1] + ks[2]).abs() < 1e-10);
    }

    #[test]
    fn curvatures_vanish_for_one_constant_family() {
        let net = case_a_net();
        for p in net.domain().grid([3, 3, 3], 0.1) {
            for k in coordinate_curvatures(&net, p).unwrap() {
                assert!(k.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn grad_norm_example_value() {
        let net = elliptic_net();
        // At ξ = 0 the triple is (1, √3, √2): Σ αⱼ²/lⱼ² = 3 + 1/3 + 2.
        let p = point_on_level(&net, 0.0).unwrap();
        let w = level_surface_grad_norm(&net, p).unwrap();
        assert!((w - (16.0f64 / 3.0).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn grad_norm_two_variable_specialization() {
        // alpha = (0, 1, 1): the norm collapses to sqrt(1/l2^2 + 1/l3^2).
        let net = case_a_net();
        let p = net.domain().center();
        let l = net.l_at(p).unwrap();
        let w = level_surface_grad_norm(&net, p).unwrap();
        let expected = (1.0 / (l[1] * l[1]) + 1.0 / (l[2] * l[2])).sqrt();
        assert!((w - expected).abs() < 1e-14);
    }

    #[test]
    fn grad_norm_and_h_constant_on_level_sets() {
        let net = elliptic_net();
        let pts = sample_level_surface(&net, 0.05, 50, 0.01, 7).unwrap();
        let w0 = level_surface_grad_norm(&net, pts[0]).unwrap();
        for p in &pts {
            let w = level_surface_grad_norm(&net, *p).unwrap();
            assert!((w - w0).abs() < 1e-12);
        }
        // H recomputed from a different point of the same level set agrees.
        let h = level_surface_mean_curvature(&net, 0.05).unwrap();
        let q = pts[17];
        let gamma = christoffel(&net, q).unwrap();
        let l = net.l_at(q).unwrap();
        let alpha = net.xi_invariant().unwrap();
        let mut sum = 0.0;
        for i in 0..3 {
            for k in 0..3 {
                sum += gamma[k][i][i] * alpha[k] / (l[i] * l[i]);
            }
        }
        let h2 = sum / level_surface_grad_norm(&net, q).unwrap();
        assert!((h - h2).abs() < 1e-12);
    }

    #[test]
    fn mean_curvature_zero_for_constant_net() {
        let net = GuichardNet::from_closures(
            Box3::new([-1.0; 3], [1.0; 3]).unwrap(),
            |_| [1.0, 2.0f64.sqrt(), 1.0],
            |_| [[0.0; 3]; 3],
        )
        .with_xi_symmetry([0.0, 1.0, 1.0]);
        let h = level_surface_mean_curvature(&net, 0.1).unwrap();
        assert_eq!(h, 0.0);
    }

    #[test]
    fn mean_curvature_matches_divergence_oracle() {
        // Independent oracle: H = −div(grad h)/|grad h|, with the divergence
        // div X = (1/√g) ∂ᵢ(√g Xⁱ) taken by central differences and the
        // constant |grad h| of the level surface.
        let net = elliptic_net();
        let xi0 = 0.02;
        let h_val = level_surface_mean_curvature(&net, xi0).unwrap();
        let alpha = net.xi_invariant().unwrap();
        let p = point_on_level(&net, xi0).unwrap();
        let w = level_surface_grad_norm(&net, p).unwrap();
        let fd = 1e-5;
        let sqrt_g = |q: [f64; 3]| -> f64 {
            let l = net.l_at(q).unwrap();
            l[0] * l[1] * l[2]
        };
        let comp = |q: [f64; 3], i: usize| -> f64 {
            let l = net.l_at(q).unwrap();
            sqrt_g(q) * alpha[i] / (l[i] * l[i])
        };
        let mut div = 0.0;
        for i in 0..3 {
            let mut pp = p;
            let mut pm = p;
            pp[i] += fd;
            pm[i] -= fd;
            div += (comp(pp, i) - comp(pm, i)) / (2.0 * fd);
        }
        div /= sqrt_g(p);
        let oracle = -div / w;
        assert!(
            (h_val - oracle).abs() < 1e-6,
            "H = {h_val} vs oracle {oracle}"
        );
    }

    #[test]
    fn phi_recovery_inverts_the_constructions() {
        // Case b family: φ = bξ + ξ₀ exactly.
        let fam = OneConstantFamily {
            case: OneConstantCase::B1,
            lambda_const: 1.0,
            b: 1.0,
            xi0: 0.1,
            alpha: [1.0, 0.0, 2.0],
            user_phi: None,
        };
        let net =
            build_one_constant_family(fam, Box3::new([0.05, 0.0, 0.05], [0.3, 1.0, 0.4]).unwrap())
                .unwrap();
        for p in net.domain().grid([4, 4, 4], 0.05) {
            let xi = p[0] + 2.0 * p[2];
            let phi = phi_recover(&net, p, PhiForm::CosType).unwrap();
            assert!((phi - (xi + 0.1)).abs() < 1e-13);
        }

        // Case c family under the cosh form: φ̃ = artanh(l1/l2) = bξ + ξ₀.
        let fam = OneConstantFamily {
            case: OneConstantCase::C,
            lambda_const: 1.0,
            b: 1.0,
            xi0: 0.0,
            alpha: [1.0, 1.0, 0.0],
            user_phi: None,
        };
        let net =
            build_one_constant_family(fam, Box3::new([0.2, 0.2, 0.0], [0.8, 0.8, 1.0]).unwrap())
                .unwrap();
        for p in net.domain().grid([4, 4, 4], 0.05) {
            let xi = p[0] + p[1];
            let phi = phi_recover(&net, p, PhiForm::CoshType).unwrap();
            assert!((phi - xi).abs() < 1e-12);
        }
    }

    #[test]
    fn cosh_type_rejects_ratio_at_one() {
        let net = GuichardNet::from_closures(
            Box3::new([0.0; 3], [1.0; 3]).unwrap(),
            |_| [2.0, 2.0, 1.0],
            |_| [[0.0; 3]; 3],
        );
        assert!(matches!(
            phi_recover(&net, [0.5; 3], PhiForm::CoshType),
            Err(Error::Validation { .. })
        ));
    }

    #[test]
    fn phi_ode_residuals_small_on_elliptic_family() {
        let net = elliptic_net();
        let t = net.translation().unwrap();
        let (lo, hi) = t.xi_range();
        let xis: Vec<f64> = (0..40)
            .map(|n| lo + (hi - lo) * (n as f64 + 0.5) / 40.0)
            .collect();
        let rep = phi_ode_residuals(&net, &xis, 1e-7).unwrap();
        assert!(rep.pass(), "{rep:?}");
    }

    #[test]
    fn phi_ode_coefficients_recoverable_by_least_squares() {
        // Fit φ_ξ² = p·cos²φ + q over the trajectory and check the
        // coefficients recover a = c₂ and b = c₁ (p = c·a, q = −c·b).
        let net = elliptic_net();
        let t = net.translation().unwrap();
        let (lo, hi) = t.xi_range();
        let mid = 0.5 * (lo + hi);
        let (_, dphi_mid) = phi_and_derivative(&net, mid).unwrap();
        let c_const = dphi_mid * t.l_of_xi(mid).unwrap()[1];

        let (mut s_xx, mut s_x1, mut s_11) = (0.0, 0.0, 0.0);
        let (mut s_xy, mut s_1y) = (0.0, 0.0);
        for n in 0..200 {
            let xi = lo + (hi - lo) * (n as f64 + 0.5) / 200.0;
            let (phi, dphi) = phi_and_derivative(&net, xi).unwrap();
            let x = phi.cos().powi(2);
            let y = dphi * dphi;
            s_xx += x * x;
            s_x1 += x;
            s_11 += 1.0;
            s_xy += x * y;
            s_1y += y;
        }
        let det = s_xx * s_11 - s_x1 * s_x1;
        let p = (s_xy * s_11 - s_1y * s_x1) / det;
        let q = (s_xx * s_1y - s_x1 * s_xy) / det;
        let [c1, c2, _] = t.constants().c;
        assert!((p / c_const - c2).abs() < 1e-6, "a = {}", p / c_const);
        assert!((-q / c_const - c1).abs() < 1e-6, "b = {}", -q / c_const);
    }

    #[test]
    fn elliptic_family_is_not_cyclic() {
        let net = elliptic_net();
        let grid = net.domain().grid([4, 4, 4], 0.1);
        let rep = cyclicity_check(&net, &grid, PhiForm::CosType).unwrap();
        assert_eq!(rep.classification, Cyclicity::NonCyclic);
    }

    #[test]
    fn linear_phi_family_is_cyclic_compatible() {
        let fam = OneConstantFamily {
            case: OneConstantCase::B1,
            lambda_const: 1.0,
            b: 1.0,
            xi0: 0.1,
            alpha: [1.0, 0.0, 2.0],
            user_phi: None,
        };
        let net =
            build_one_constant_family(fam, Box3::new([0.05, 0.0, 0.05], [0.3, 1.0, 0.4]).unwrap())
                .unwrap();
        let grid = net.domain().grid([4, 4, 4], 0.1);
        let rep = cyclicity_check(&net, &grid, PhiForm::CosType).unwrap();
        assert_eq!(rep.classification, Cyclicity::CyclicCompatible);
        for pair in rep.pairs {
            assert!(pair.vanishes);
        }
    }

    #[test]
    fn dilation_net_mixed_partials_reported() {
        use crate::families::dilation::{build_dilation_family, DilationCase, DilationConstants};
        let d = DilationConstants {
            case: DilationCase::A,
            a_vec: [0.0, 1.0, 0.0],
            b_vec: [0.0, 0.0, 1.0],
            lambda_const: 1.0,
            k0: 1.0,
            k1: 0.0,
        };
        let net = build_dilation_family(d, Box3::new([0.0, -2.0, 1.0], [1.0, -0.5, 2.0]).unwrap())
            .unwrap();
        let grid = net.domain().grid([3, 3, 3], 0.1);
        let rep = cyclicity_check(&net, &grid, PhiForm::CoshType).unwrap();
        // Report only: the x1 pairs vanish (the profile ignores x1), the
        // (x2, x3) pair does not.
        assert!(rep.pairs[0].vanishes);
        assert!(rep.pairs[1].vanishes);
        assert!(!rep.pairs[2].vanishes);
    }

    #[test]
    fn hypersurface_metric_matches_net_and_scales() {
        let net = elliptic_net();
        let p = net.domain().center();
        let l = net.l_at(p).unwrap();
        let g0 = hypersurface_metric(&net, p, None).unwrap();
        for i in 0..3 {
            assert!((g0[i] - l[i] * l[i]).abs() < 1e-14);
        }
        let pfn = |q: [f64; 3]| 0.1 * q[0];
        let g1 = hypersurface_metric(&net, p, Some(&pfn)).unwrap();
        let factor = (0.2 * p[0]).exp();
        for i in 0..3 {
            assert!((g1[i] - factor * l[i] * l[i]).abs() < 1e-13);
            assert!(g1[i] > 0.0);
        }
        // Cos-type presentation: diag = l2²·(cos²φ, 1, sin²φ).
        let phi = phi_recover(&net, p, PhiForm::CosType).unwrap();
        assert!((g0[0] - g0[1] * phi.cos().powi(2)).abs() < 1e-12);
        assert!((g0[2] - g0[1] * phi.sin().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn flat_surface_forms_hyperbolic() {
        let fam = OneConstantFamily {
            case: OneConstantCase::C,
            lambda_const: 1.0,
            b: 1.0,
            xi0: 0.0,
            alpha: [1.0, 1.0, 0.0],
            user_phi: None,
        };
        // ξ + ξ₀ = 1 at q = (0.5, 0.5).
        let f = flat_surface_forms(&fam, [0.5, 0.5]).unwrap();
        assert_eq!(f.ambient, Ambient::H3);
        let (sh, ch) = (1.0f64.sinh(), 1.0f64.cosh());
        assert!((f.first[0][0] - sh * sh).abs() < 1e-14);
        assert!((f.first[1][1] - ch * ch).abs() < 1e-14);
        assert!((f.second[0][0] - sh * ch).abs() < 1e-14);
        assert!(f.intrinsic_curvature.abs() < 1e-12);
        assert!(f.harmonic_residual.abs() < 1e-9);
    }

    #[test]
    fn flat_surface_forms_spherical() {
        let fam = OneConstantFamily {
            case: OneConstantCase::B1,
            lambda_const: 1.0,
            b: 1.0,
            xi0: 0.0,
            alpha: [1.0, 0.0, 2.0],
            user_phi: None,
        };
        let f = flat_surface_forms(&fam, [0.3, 0.4]).unwrap();
        assert_eq!(f.ambient, Ambient::S3);
        let det_ratio = (f.second[0][0] * f.second[1][1]) / (f.first[0][0] * f.first[1][1]);
        assert!((det_ratio + 1.0).abs() < 1e-12);
        assert!(f.intrinsic_curvature.abs() < 1e-12);
    }

    #[test]
    fn flat_surface_forms_reject_case_a() {
        let fam = OneConstantFamily {
            case: OneConstantCase::A,
            lambda_const: 1.0,
            b: 1.0,
            xi0: 0.5,
            alpha: [0.0, 1.0, 1.0],
            user_phi: None,
        };
        assert!(matches!(
            flat_surface_forms(&fam, [0.1, 0.1]),
            Err(Error::Unsupported { .. })
        ));
    }

    #[test]
    fn user_phi_forms_report_harmonic_defect() {
        let fam = OneConstantFamily {
            case: OneConstantCase::B2,
            lambda_const: 1.0,
            b: 0.0,
            xi0: 0.0,
            alpha: [1.0, 0.0, 1.0],
            user_phi: Some(PhiFunction::polynomial(&[0.0, 0.0, 1.0])),
        };
        let f = flat_surface_forms(&fam, [0.3, 0.4]).unwrap();
        // θ = ξ², θ'' = 2, weighted by α₁² + α₃² = 2.
        assert!((f.harmonic_residual - 4.0).abs() < 1e-6);
        assert!(f.intrinsic_curvature.abs() < 1e-12);
    }
}
