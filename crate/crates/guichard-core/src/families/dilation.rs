//! Families invariant under combined translations and dilations.
//!
//! The invariant is `η = (a₁x₁+a₂x₂+a₃x₃)/(b₁x₁+b₂x₂+b₃x₃)` with `(a, b)`
//! linearly independent; one pair `(aₛ, bₛ)` must vanish and the matching
//! coefficient is the constant one. With `Nᵢ = aᵢ − bᵢη` and
//! `β = Σ bₛxₛ`, so `∂η/∂xᵢ = Nᵢ/β`:
//!
//! * case a, `(a₁,b₁) = 0`: `l = λ₁(1, cosh φ, sinh φ)` with an arctan
//!   profile `φ(η) = C₀/(a₂b₃−a₃b₂) · arctan[(b₂²+b₃²)/(a₃b₂−a₂b₃) ·
//!   (η − (a₂b₂+a₃b₃)/(b₂²+b₃²))] + C₁`;
//! * case b, `(a₂,b₂) = 0`: `l = λ₂(cos φ, 1, sin φ)` with a log profile —
//!   `φ = D₀/(2b(a₃−a₁))·log(2bη−a₁−a₃) + D₁` when `b₁ = b₃ = b` (b.1) and
//!   `φ = D₂/(2(a₁b₃−a₃b₁))·log[((b₃+b₁)η−(a₃+a₁))/((b₃−b₁)η−(a₃−a₁))] + D₃`
//!   when `b₁ ≠ b₃` (b.2);
//! * case c, `(a₃,b₃) = 0`: `l = λ₃(sinh φ, cosh φ, 1)` with the arctan
//!   profile in indices (1, 2).
//!
//! β must not vanish on the box. Because η is linear-fractional it attains
//! its extremes at box corners, and every profile is monotone in η, so
//! argument validity and coefficient positivity over the whole box reduce to
//! endpoint checks. If those fail, the constructor shrinks the box about its
//! center to the largest valid scale and records that it did.

use alloc::format;

use crate::error::{Error, Result};
use crate::families::one_constant::check_trig_window;
use crate::math;
use crate::net::{Box3, DerivativeMode, GuichardNet, NetKind, NetSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DilationCase {
    A,
    B1,
    B2,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilationConstants {
    pub case: DilationCase,
    pub a_vec: [f64; 3],
    pub b_vec: [f64; 3],
    /// The constant coefficient λ₁/λ₂/λ₃.
    pub lambda_const: f64,
    /// Profile constants: (C₀, C₁), (D₀, D₁), (D₂, D₃) or (E₀, E₁).
    pub k0: f64,
    pub k1: f64,
}

impl DilationConstants {
    fn dead_axis(&self) -> usize {
        match self.case {
            DilationCase::A => 0,
            DilationCase::B1 | DilationCase::B2 => 1,
            DilationCase::C => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_const > 0.0) {
            return Err(Error::Validation {
                message: format!("lambda must be positive, got {}", self.lambda_const),
            });
        }
        let dead = self.dead_axis();
        if self.a_vec[dead] != 0.0 || self.b_vec[dead] != 0.0 {
            return Err(Error::Validation {
                message: format!("case requires (a{0}, b{0}) = (0, 0)", dead + 1),
            });
        }
        let cross = [
            self.a_vec[1] * self.b_vec[2] - self.a_vec[2] * self.b_vec[1],
            self.a_vec[2] * self.b_vec[0] - self.a_vec[0] * self.b_vec[2],
            self.a_vec[0] * self.b_vec[1] - self.a_vec[1] * self.b_vec[0],
        ];
        if cross.iter().all(|c| math::abs(*c) < 1e-14) {
            return Err(Error::Validation {
                message: "a_vec and b_vec must be linearly independent".into(),
            });
        }
        match self.case {
            DilationCase::B1 => {
                if self.b_vec[0] != self.b_vec[2] {
                    return Err(Error::Validation {
                        message: "case b.1 requires b1 = b3".into(),
                    });
                }
                if self.b_vec[0] == 0.0 || self.a_vec[0] == self.a_vec[2] {
                    return Err(Error::Validation {
                        message: "case b.1 requires b != 0 and a1 != a3".into(),
                    });
                }
            }
            DilationCase::B2 if self.b_vec[0] == self.b_vec[2] => {
                return Err(Error::Validation {
                    message: "case b.2 requires b1 != b3; use case b.1".into(),
                });
            }
            _ => {}
        }
        Ok(())
    }

    pub fn beta_of(&self, p: [f64; 3]) -> f64 {
        self.b_vec[0] * p[0] + self.b_vec[1] * p[1] + self.b_vec[2] * p[2]
    }

    pub fn eta_of(&self, p: [f64; 3]) -> f64 {
        (self.a_vec[0] * p[0] + self.a_vec[1] * p[1] + self.a_vec[2] * p[2]) / self.beta_of(p)
    }

    /// Profile value at η, exactly the published closed forms.
    pub fn phi_at(&self, eta: f64) -> f64 {
        let a = self.a_vec;
        let b = self.b_vec;
        match self.case {
            DilationCase::A => {
                let det = a[1] * b[2] - a[2] * b[1];
                let s = b[1] * b[1] + b[2] * b[2];
                let t = a[1] * b[1] + a[2] * b[2];
                self.k0 / det * math::atan(s / (a[2] * b[1] - a[1] * b[2]) * (eta - t / s))
                    + self.k1
            }
            DilationCase::B1 => {
                let bb = b[0];
                self.k0 / (2.0 * bb * (a[2] - a[0])) * math::ln(2.0 * bb * eta - a[0] - a[2])
                    + self.k1
            }
            DilationCase::B2 => {
                let g = a[0] * b[2] - a[2] * b[0];
                let u = (b[2] + b[0]) * eta - (a[2] + a[0]);
                let v = (b[2] - b[0]) * eta - (a[2] - a[0]);
                self.k0 / (2.0 * g) * math::ln(u / v) + self.k1
            }
            DilationCase::C => {
                let det = a[1] * b[0] - a[0] * b[1];
                let s = b[0] * b[0] + b[1] * b[1];
                let t = a[0] * b[0] + a[1] * b[1];
                self.k0 / det * math::atan(s / det * (eta - t / s)) + self.k1
            }
        }
    }

    /// dφ/dη; each profile satisfies its reduced second-order ODE, which
    /// leaves these rational forms.
    pub fn dphi_at(&self, eta: f64) -> f64 {
        let n = self.n_of(eta);
        match self.case {
            DilationCase::A => -self.k0 / (n[1] * n[1] + n[2] * n[2]),
            DilationCase::B1 => self.k0 / (n[0] * n[0] - n[2] * n[2]),
            DilationCase::B2 => -self.k0 / (n[0] * n[0] - n[2] * n[2]),
            DilationCase::C => self.k0 / (n[0] * n[0] + n[1] * n[1]),
        }
    }

    /// `Nᵢ = aᵢ − bᵢ·η`.
    pub fn n_of(&self, eta: f64) -> [f64; 3] {
        [0, 1, 2].map(|i| self.a_vec[i] - self.b_vec[i] * eta)
    }

    /// Range of η over a box with sign-definite β; extremes sit at corners.
    fn eta_range(&self, domain: &Box3) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for corner in domain.corners() {
            let e = self.eta_of(corner);
            lo = math::min(lo, e);
            hi = math::max(hi, e);
        }
        (lo, hi)
    }

    /// Validity of profile arguments and coefficient positivity over the
    /// whole box (both reduce to endpoint checks; see module docs).
    fn valid_on(&self, domain: &Box3) -> core::result::Result<(), (&'static str, f64)> {
        let (e_lo, e_hi) = self.eta_range(domain);
        match self.case {
            DilationCase::A | DilationCase::C => {
                for e in [e_lo, e_hi] {
                    if self.phi_at(e) <= 0.0 {
                        return Err(("sinh", e));
                    }
                }
            }
            DilationCase::B1 => {
                let bb = self.b_vec[0];
                for e in [e_lo, e_hi] {
                    if 2.0 * bb * e - self.a_vec[0] - self.a_vec[2] <= 0.0 {
                        return Err(("log argument", e));
                    }
                }
                let (p0, p1) = (self.phi_at(e_lo), self.phi_at(e_hi));
                check_trig_window(math::min(p0, p1), math::max(p0, p1))
                    .map_err(|(f, _)| (f, e_lo))?;
            }
            DilationCase::B2 => {
                let (a, b) = (self.a_vec, self.b_vec);
                for e in [e_lo, e_hi] {
                    let u = (b[2] + b[0]) * e - (a[2] + a[0]);
                    let v = (b[2] - b[0]) * e - (a[2] - a[0]);
                    if u == 0.0 || v == 0.0 || (u / v) <= 0.0 {
                        return Err(("log argument", e));
                    }
                }
                // No sign change inside: u and v are linear in η.
                let u_lo = (b[2] + b[0]) * e_lo - (a[2] + a[0]);
                let u_hi = (b[2] + b[0]) * e_hi - (a[2] + a[0]);
                let v_lo = (b[2] - b[0]) * e_lo - (a[2] - a[0]);
                let v_hi = (b[2] - b[0]) * e_hi - (a[2] - a[0]);
                if u_lo * u_hi <= 0.0 || v_lo * v_hi <= 0.0 {
                    return Err(("log argument", 0.5 * (e_lo + e_hi)));
                }
                let (p0, p1) = (self.phi_at(e_lo), self.phi_at(e_hi));
                check_trig_window(math::min(p0, p1), math::max(p0, p1))
                    .map_err(|(f, _)| (f, e_lo))?;
            }
        }
        Ok(())
    }
}

pub struct DilationNet {
    d: DilationConstants,
    shrunk: bool,
}

impl DilationNet {
    pub fn constants(&self) -> &DilationConstants {
        &self.d
    }

    /// Whether the constructor had to shrink the requested box.
    pub fn shrunk(&self) -> bool {
        self.shrunk
    }

    pub(crate) fn l_at(&self, p: [f64; 3]) -> Result<[f64; 3]> {
        Ok(self.sample(p)?.l)
    }

    pub(crate) fn sample(&self, p: [f64; 3]) -> Result<NetSample> {
        let beta = self.d.beta_of(p);
        if math::abs(beta) < 1e-12 {
            return Err(Error::OutOfDomain { point: p });
        }
        let eta = self.d.eta_of(p);
        let phi = self.d.phi_at(eta);
        let dphi = self.d.dphi_at(eta);
        let n = self.d.n_of(eta);
        let lam = self.d.lambda_const;
        let (l, dvec): ([f64; 3], [f64; 3]) = match self.d.case {
            DilationCase::A => (
                [lam, lam * math::cosh(phi), lam * math::sinh(phi)],
                [
                    0.0,
                    lam * math::sinh(phi) * dphi,
                    lam * math::cosh(phi) * dphi,
                ],
            ),
            DilationCase::B1 | DilationCase::B2 => (
                [lam * math::cos(phi), lam, lam * math::sin(phi)],
                [
                    -lam * math::sin(phi) * dphi,
                    0.0,
                    lam * math::cos(phi) * dphi,
                ],
            ),
            DilationCase::C => (
                [lam * math::sinh(phi), lam * math::cosh(phi), lam],
                [
                    lam * math::cosh(phi) * dphi,
                    lam * math::sinh(phi) * dphi,
                    0.0,
                ],
            ),
        };
        let mut dl = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                dl[i][j] = dvec[i] * n[j] / beta;
            }
        }
        Ok(NetSample { l, dl })
    }
}

/// Builds the net. β must be sign-definite on the box; if profile arguments
/// or positivity fail there, the box is shrunk about its center to the
/// largest valid scale (reported through [`DilationNet::shrunk`]).
pub fn build_dilation_family(d: DilationConstants, domain: Box3) -> Result<GuichardNet> {
    d.validate()?;

    let corners = domain.corners();
    let beta_signs: alloc::vec::Vec<f64> = corners.iter().map(|c| d.beta_of(*c)).collect();
    if beta_signs.contains(&0.0)
        || beta_signs
            .iter()
            .any(|b| b.signum() != beta_signs[0].signum())
    {
        return Err(Error::Validation {
            message: "beta = b1 x1 + b2 x2 + b3 x3 changes sign on the domain".into(),
        });
    }

    let mut shrunk = false;
    let mut final_domain = domain;
    if let Err((factor, at)) = d.valid_on(&domain) {
        // Center must be valid for a shrink to exist.
        let tiny = domain.scaled(1e-6);
        if d.valid_on(&tiny).is_err() {
            return Err(Error::PositivityViolation { factor, at });
        }
        let (mut ok, mut bad) = (1e-6, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (ok + bad);
            if d.valid_on(&domain.scaled(mid)).is_ok() {
                ok = mid;
            } else {
                bad = mid;
            }
        }
        final_domain = domain.scaled(ok);
        shrunk = true;
    }

    Ok(GuichardNet {
        domain: final_domain,
        mode: DerivativeMode::Exact,
        kind: NetKind::Dilation(DilationNet { d, shrunk }),
    })
}

/// Residual of the reduced profile ODE at η, with φ_ηη estimated by central
/// differencing of the closed-form φ_η:
///
/// * cases a, c: `φ_ηη (Nⱼ² + Nₖ²) − 2φ_η (bⱼNⱼ + bₖNₖ)`;
/// * cases b:    `φ_ηη (N₁² − N₃²) − 2φ_η (b₁N₁ − b₃N₃)`.
pub fn dilation_ode_residual(d: &DilationConstants, eta: f64, step: f64) -> f64 {
    let ddphi = (d.dphi_at(eta + step) - d.dphi_at(eta - step)) / (2.0 * step);
    let dphi = d.dphi_at(eta);
    let n = d.n_of(eta);
    let b = d.b_vec;
    match d.case {
        DilationCase::A => {
            ddphi * (n[1] * n[1] + n[2] * n[2]) - 2.0 * dphi * (b[1] * n[1] + b[2] * n[2])
        }
        DilationCase::B1 | DilationCase::B2 => {
            ddphi * (n[0] * n[0] - n[2] * n[2]) - 2.0 * dphi * (b[0] * n[0] - b[2] * n[2])
        }
        DilationCase::C => {
            ddphi * (n[0] * n[0] + n[1] * n[1]) - 2.0 * dphi * (b[0] * n[0] + b[1] * n[1])
        }
    }
}
