//! Translation-invariant families with exactly one constant coefficient.
//!
//! With the invariant ξ missing the constant coefficient's variable:
//!
//! * case a: `l₁ = λ₁`, `l₂ = λ₁ cosh(bξ+ξ₀)`, `l₃ = λ₁ sinh(bξ+ξ₀)`,
//!   ξ = α₂x₂ + α₃x₃;
//! * case b: `l₂ = λ₂`, `l₁ = λ₂ cos φ(ξ)`, `l₃ = λ₂ sin φ(ξ)`,
//!   ξ = α₁x₁ + α₃x₃, where φ is linear for α₁² ≠ α₃² (b.1) and arbitrary
//!   for α₁² = α₃² (b.2);
//! * case c: `l₃ = λ₃`, `l₂ = λ₃ cosh(bξ+ξ₀)`, `l₁ = λ₃ sinh(bξ+ξ₀)`,
//!   ξ = α₁x₁ + α₂x₂.
//!
//! Constructors validate strict positivity of the sinh/sin/cos factors over
//! the whole box and report the invariant value where a factor vanishes.

use alloc::boxed::Box;
use alloc::format;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::math;
use crate::net::{Box3, DerivativeMode, GuichardNet, NetKind, NetSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OneConstantCase {
    A,
    B1,
    B2,
    C,
}

/// User-supplied profile for case b.2, value and derivative.
pub struct PhiFunction {
    f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    df: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl PhiFunction {
    pub fn new(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        PhiFunction {
            f: Box::new(f),
            df: Box::new(df),
        }
    }

    /// Polynomial `c₀ + c₁ξ + c₂ξ² + …` with its exact derivative.
    pub fn polynomial(coeffs: &[f64]) -> Self {
        let cs = alloc::vec::Vec::from(coeffs);
        let ds: alloc::vec::Vec<f64> = cs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| i as f64 * c)
            .collect();
        let horner = |cs: &[f64], x: f64| cs.iter().rev().fold(0.0, |acc, c| acc * x + c);
        PhiFunction {
            f: Box::new(move |x| horner(&cs, x)),
            df: Box::new(move |x| horner(&ds, x)),
        }
    }

    pub fn value(&self, xi: f64) -> f64 {
        (self.f)(xi)
    }

    pub fn derivative(&self, xi: f64) -> f64 {
        (self.df)(xi)
    }
}

impl core::fmt::Debug for PhiFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("PhiFunction(..)")
    }
}

#[derive(Debug)]
pub struct OneConstantFamily {
    pub case: OneConstantCase,
    /// The constant coefficient λ₁/λ₂/λ₃, also the overall scale.
    pub lambda_const: f64,
    pub b: f64,
    pub xi0: f64,
    /// Invariant direction; the slot matching the constant coefficient's
    /// variable must be zero.
    pub alpha: [f64; 3],
    /// Case b.2 only.
    pub user_phi: Option<PhiFunction>,
}

impl OneConstantFamily {
    fn inactive_axis(&self) -> usize {
        match self.case {
            OneConstantCase::A => 0,
            OneConstantCase::B1 | OneConstantCase::B2 => 1,
            OneConstantCase::C => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_const > 0.0) {
            return Err(Error::Validation {
                message: format!("lambda must be positive, got {}", self.lambda_const),
            });
        }
        let dead = self.inactive_axis();
        if self.alpha[dead] != 0.0 {
            return Err(Error::Validation {
                message: format!(
                    "case requires alpha{} = 0 (the invariant omits the constant coefficient's variable)",
                    dead + 1
                ),
            });
        }
        let (u, v) = match dead {
            0 => (self.alpha[1], self.alpha[2]),
            1 => (self.alpha[0], self.alpha[2]),
            _ => (self.alpha[0], self.alpha[1]),
        };
        if u == 0.0 && v == 0.0 {
            return Err(Error::Validation {
                message: "active alpha pair must not both vanish".into(),
            });
        }
        match self.case {
            OneConstantCase::B1 => {
                if self.alpha[0] * self.alpha[0] == self.alpha[2] * self.alpha[2] {
                    return Err(Error::Validation {
                        message: "case b.1 requires alpha1^2 != alpha3^2; use case b.2".into(),
                    });
                }
            }
            OneConstantCase::B2 => {
                if self.alpha[0] * self.alpha[0] != self.alpha[2] * self.alpha[2] {
                    return Err(Error::Validation {
                        message: "case b.2 requires alpha1^2 = alpha3^2".into(),
                    });
                }
                if self.user_phi.is_none() {
                    return Err(Error::Validation {
                        message: "case b.2 requires a user phi function".into(),
                    });
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn xi_of(&self, p: [f64; 3]) -> f64 {
        self.alpha[0] * p[0] + self.alpha[1] * p[1] + self.alpha[2] * p[2]
    }

    pub fn phi_at(&self, xi: f64) -> f64 {
        match (&self.case, &self.user_phi) {
            (OneConstantCase::B2, Some(phi)) => phi.value(xi),
            _ => self.b * xi + self.xi0,
        }
    }

    pub fn dphi_at(&self, xi: f64) -> f64 {
        match (&self.case, &self.user_phi) {
            (OneConstantCase::B2, Some(phi)) => phi.derivative(xi),
            _ => self.b,
        }
    }
}

pub(crate) fn xi_range_over(alpha: [f64; 3], domain: &Box3) -> (f64, f64) {
    let mut lo = 0.0;
    let mut hi = 0.0;
    for i in 0..3 {
        let (a, b) = (alpha[i] * domain.lo[i], alpha[i] * domain.hi[i]);
        lo += math::min(a, b);
        hi += math::max(a, b);
    }
    (lo, hi)
}

/// Checks that `(θ_lo, θ_hi)` stays inside one window where both sin and cos
/// are strictly positive; on failure returns the factor and the θ of its
/// nearest zero.
pub(crate) fn check_trig_window(
    theta_lo: f64,
    theta_hi: f64,
) -> core::result::Result<(), (&'static str, f64)> {
    let n = math::floor(theta_lo / (2.0 * PI));
    let lo = theta_lo - 2.0 * PI * n;
    let hi = theta_hi - 2.0 * PI * n;
    if lo <= 0.0 {
        return Err(("sin", 2.0 * PI * n));
    }
    if hi >= FRAC_PI_2 {
        return Err(("cos", 2.0 * PI * n + FRAC_PI_2));
    }
    Ok(())
}

pub struct OneConstantNet {
    fam: OneConstantFamily,
}

impl OneConstantNet {
    pub fn family(&self) -> &OneConstantFamily {
        &self.fam
    }

    pub fn alpha(&self) -> [f64; 3] {
        self.fam.alpha
    }

    pub(crate) fn l_at(&self, p: [f64; 3]) -> [f64; 3] {
        self.sample(p).l
    }

    pub(crate) fn sample(&self, p: [f64; 3]) -> NetSample {
        let xi = self.fam.xi_of(p);
        let th = self.fam.phi_at(xi);
        let dth = self.fam.dphi_at(xi);
        let lam = self.fam.lambda_const;
        let a = self.fam.alpha;
        // Rows: l values; per-row ξ-derivative factor, then chain rule.
        let (l, dvec): ([f64; 3], [f64; 3]) = match self.fam.case {
            OneConstantCase::A => (
                [lam, lam * math::cosh(th), lam * math::sinh(th)],
                [0.0, lam * math::sinh(th) * dth, lam * math::cosh(th) * dth],
            ),
            OneConstantCase::B1 | OneConstantCase::B2 => (
                [lam * math::cos(th), lam, lam * math::sin(th)],
                [-lam * math::sin(th) * dth, 0.0, lam * math::cos(th) * dth],
            ),
            OneConstantCase::C => (
                [lam * math::sinh(th), lam * math::cosh(th), lam],
                [lam * math::cosh(th) * dth, lam * math::sinh(th) * dth, 0.0],
            ),
        };
        let mut dl = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                dl[i][j] = dvec[i] * a[j];
            }
        }
        NetSample { l, dl }
    }
}

/// Builds the closed-form net, validating positivity of every coefficient
/// over the whole box.
pub fn build_one_constant_family(fam: OneConstantFamily, domain: Box3) -> Result<GuichardNet> {
    fam.validate()?;
    let (xi_lo, xi_hi) = xi_range_over(fam.alpha, &domain);

    match fam.case {
        OneConstantCase::A | OneConstantCase::C => {
            // sinh(bξ+ξ₀) must stay positive; the argument is monotone in ξ.
            let (t0, t1) = (fam.b * xi_lo + fam.xi0, fam.b * xi_hi + fam.xi0);
            if math::min(t0, t1) <= 0.0 {
                let at = if fam.b != 0.0 {
                    -fam.xi0 / fam.b
                } else {
                    xi_lo
                };
                return Err(Error::PositivityViolation { factor: "sinh", at });
            }
        }
        OneConstantCase::B1 => {
            let (t0, t1) = (fam.b * xi_lo + fam.xi0, fam.b * xi_hi + fam.xi0);
            let (t_lo, t_hi) = (math::min(t0, t1), math::max(t0, t1));
            if let Err((factor, theta)) = check_trig_window(t_lo, t_hi) {
                let at = if fam.b != 0.0 {
                    (theta - fam.xi0) / fam.b
                } else {
                    xi_lo
                };
                return Err(Error::PositivityViolation { factor, at });
            }
        }
        OneConstantCase::B2 => {
            // Arbitrary profile: dense scan of the invariant range.
            let n = 2048;
            for s in 0..=n {
                let xi = xi_lo + (xi_hi - xi_lo) * s as f64 / n as f64;
                let th = fam.phi_at(xi);
                if math::sin(th) <= 0.0 {
                    return Err(Error::PositivityViolation {
                        factor: "sin",
                        at: xi,
                    });
                }
                if math::cos(th) <= 0.0 {
                    return Err(Error::PositivityViolation {
                        factor: "cos",
                        at: xi,
                    });
                }
            }
        }
    }

    Ok(GuichardNet {
        domain,
        mode: DerivativeMode::Exact,
        kind: NetKind::OneConstant(OneConstantNet { fam }),
    })
}
