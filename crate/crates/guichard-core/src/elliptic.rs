//! Arithmetic-geometric mean, complete elliptic integral of the first kind,
//! and the Jacobi elliptic functions sn, cn, dn.
//!
//! Everything is evaluated through the descending Landen/AGM ladder
//! (Abramowitz & Stegun 16.4): unconditionally stable over the full modulus
//! range, convergence tolerance 1e-15, hard cap of 50 iterations. The
//! degenerate modulus k = 1 is a closed-form tanh/sech branch because the
//! ladder itself degenerates there.

use crate::error::{Error, Result};
use crate::math;

const LADDER_TOL: f64 = 1e-15;
const LADDER_CAP: usize = 50;

/// Elliptic modulus k with `0 ≤ k ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulus(f64);

impl EllipticModulus {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::ModulusOutOfRange { k });
        }
        Ok(EllipticModulus(k))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Arithmetic-geometric mean of two positive reals.
pub fn agm(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::NonPositiveAgmInput { a, b });
    }
    let (mut x, mut y) = (a, b);
    for _ in 0..LADDER_CAP {
        let (xn, yn) = (0.5 * (x + y), math::sqrt(x * y));
        if math::abs(xn - yn) <= LADDER_TOL * xn {
            return Ok(0.5 * (xn + yn));
        }
        x = xn;
        y = yn;
    }
    Ok(0.5 * (x + y))
}

/// Complete elliptic integral of the first kind, `K(k) = π / (2·agm(1, k'))`.
pub fn complete_k(k: EllipticModulus) -> Result<f64> {
    let k = k.get();
    if k == 1.0 {
        return Err(Error::CompleteKDivergent);
    }
    let kc = math::sqrt((1.0 - k) * (1.0 + k));
    Ok(core::f64::consts::PI / (2.0 * agm(1.0, kc)?))
}

/// Jacobi elliptic functions `(sn(u, k), cn(u, k), dn(u, k))`.
///
/// Arguments with `|u| > 4K(k)` are reduced modulo the full period before the
/// ladder runs, so accuracy does not decay over long invariant ranges.
pub fn jacobi_scd(u: f64, k: EllipticModulus) -> (f64, f64, f64) {
    let k = k.get();
    if k == 1.0 {
        let sech = 1.0 / math::cosh(u);
        return (math::tanh(u), sech, sech);
    }
    if k == 0.0 {
        return (math::sin(u), math::cos(u), 1.0);
    }

    // AGM ladder; k < 1 here so the complementary modulus is positive.
    let kc = math::sqrt((1.0 - k) * (1.0 + k));
    let mut a = [0.0f64; LADDER_CAP + 1];
    let mut c = [0.0f64; LADDER_CAP + 1];
    a[0] = 1.0;
    c[0] = k;
    let mut b = kc;
    let mut n = 0;
    while c[n] > LADDER_TOL * a[n] && n < LADDER_CAP {
        let (an, bn, cn) = (0.5 * (a[n] + b), math::sqrt(a[n] * b), 0.5 * (a[n] - b));
        n += 1;
        a[n] = an;
        c[n] = cn;
        b = bn;
    }

    // Reduce modulo the period 4K, then to [-K, K] via the half-period shift
    // sn(u ± 2K) = -sn(u), cn(u ± 2K) = -cn(u), dn(u ± 2K) = dn(u).
    let big_k = core::f64::consts::PI / (2.0 * a[n]);
    let mut u = u - 4.0 * big_k * math::round(u / (4.0 * big_k));
    let mut sign = 1.0;
    if u > big_k {
        u -= 2.0 * big_k;
        sign = -1.0;
    } else if u < -big_k {
        u += 2.0 * big_k;
        sign = -1.0;
    }

    // Backward phase recurrence (A&S 16.4.2-16.4.4).
    let mut phi = math::powi(2.0, n as i32) * a[n] * u;
    let mut phi_next = phi;
    for m in (1..=n).rev() {
        let s = c[m] / a[m] * math::sin(phi);
        let prev = 0.5 * (phi + math::asin(s.clamp(-1.0, 1.0)));
        if m == 1 {
            phi_next = phi;
        }
        phi = prev;
    }

    let sn = math::sin(phi);
    let cn = math::cos(phi);
    let dn = if n == 0 {
        1.0
    } else {
        cn / math::cos(phi_next - phi)
    };
    (sign * sn, sign * cn, dn)
}
