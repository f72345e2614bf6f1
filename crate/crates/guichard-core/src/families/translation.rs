//! Translation-invariant family with no constant coefficient.
//!
//! With ξ = Σ αₛxₛ the system reduces to the autonomous ODEs
//! `l₁,ξ = c₁l₂l₃`, `l₂,ξ = c₂l₁l₃`, `l₃,ξ = c₃l₁l₂` subject to
//!
//! ```text
//! c₁ − c₂ + c₃ = 0
//! α₁²c₂c₃ + α₂²c₁c₃ + α₃²c₁c₂ = 0
//! ```
//!
//! and the first integrals pin `l₂², l₃²` to `l₁²`:
//!
//! ```text
//! l₂² = (c₂/c₁)(l₁² − λ/c₂),       l₃² = ((c₂−c₁)/c₁)(l₁² − λ/(c₂−c₁))
//! l₁,ξ² = c₂(c₂−c₁)(l₁² − λ/c₂)(l₁² − λ/(c₂−c₁))
//! ```
//!
//! The coupled system is the primary evaluator (RK4, fixed step, dense table
//! with cubic Hermite interpolation); the quartic ODE serves as cross-check
//! and closed-form route. Integration stops where any lᵢ² drops below 1e-12
//! and the net is clipped to the interval on which the metric stays positive
//! definite.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::elliptic::{complete_k, jacobi_scd, EllipticModulus};
use crate::error::{Error, Result};
use crate::math;
use crate::net::{Box3, DerivativeMode, GuichardNet, NetKind, NetSample};

const RK_STEP: f64 = 1e-4;
const POSITIVITY_FLOOR: f64 = 1e-12;
const BLOWUP_GUARD: f64 = 1e8;
const MAX_NODES: usize = 4_000_000;
const CONSTRAINT_TOL: f64 = 1e-10;

/// Defining constants of the elliptic translation family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationConstants {
    pub alpha: [f64; 3],
    pub c: [f64; 3],
    pub lambda: f64,
    /// Initial value l₁(0) > 0.
    pub l1_0: f64,
    /// Sign of l₁,ξ(0). When it disagrees with sign(c₁) the trajectory is the
    /// ξ-reflected family, i.e. the solution with constants (−c, −λ).
    pub sign_l1prime: i8,
}

impl TranslationConstants {
    fn fail(message: String) -> Error {
        Error::Validation { message }
    }

    /// Constraints that involve only (c, λ, l₁(0)) — what the ODE-level
    /// routes need.
    pub fn validate_ode(&self) -> Result<()> {
        for (i, ci) in self.c.iter().enumerate() {
            if *ci == 0.0 || !ci.is_finite() {
                return Err(Self::fail(format!("c{} must be nonzero", i + 1)));
            }
        }
        let sum = self.c[0] - self.c[1] + self.c[2];
        let scale = math::abs(self.c[0]) + math::abs(self.c[1]) + math::abs(self.c[2]);
        if math::abs(sum) > CONSTRAINT_TOL * scale {
            return Err(Self::fail(format!("c1 - c2 + c3 = {sum}, expected 0")));
        }
        if !(self.l1_0 > 0.0) {
            return Err(Self::fail(format!(
                "l1(0) must be positive, got {}",
                self.l1_0
            )));
        }
        if self.sign_l1prime != 1 && self.sign_l1prime != -1 {
            return Err(Self::fail(format!(
                "sign_l1prime must be +1 or -1, got {}",
                self.sign_l1prime
            )));
        }
        let (l2sq, l3sq) = self.initial_squares();
        if !(l2sq > 0.0) {
            return Err(Self::fail(format!(
                "l2(0)^2 = (c2/c1)(l1(0)^2 - lambda/c2) = {l2sq} is not positive"
            )));
        }
        if !(l3sq > 0.0) {
            return Err(Self::fail(format!(
                "l3(0)^2 = ((c2-c1)/c1)(l1(0)^2 - lambda/(c2-c1)) = {l3sq} is not positive"
            )));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_ode()?;
        if self.alpha == [0.0; 3] {
            return Err(Self::fail("alpha must be a nonzero vector".into()));
        }
        let [a1, a2, a3] = self.alpha;
        let [c1, c2, c3] = self.c;
        let rel = a1 * a1 * c2 * c3 + a2 * a2 * c1 * c3 + a3 * a3 * c1 * c2;
        let scale = math::abs(a1 * a1 * c2 * c3)
            + math::abs(a2 * a2 * c1 * c3)
            + math::abs(a3 * a3 * c1 * c2);
        if math::abs(rel) > CONSTRAINT_TOL * math::max(scale, 1.0) {
            return Err(Self::fail(format!(
                "alpha1^2 c2 c3 + alpha2^2 c1 c3 + alpha3^2 c1 c2 = {rel}, expected 0"
            )));
        }
        Ok(())
    }

    /// `(l₂²(0), l₃²(0))` from the first integrals.
    pub fn initial_squares(&self) -> (f64, f64) {
        let [c1, c2, _] = self.c;
        let y0 = self.l1_0 * self.l1_0;
        let l2sq = c2 / c1 * (y0 - self.lambda / c2);
        let l3sq = (c2 - c1) / c1 * (y0 - self.lambda / (c2 - c1));
        (l2sq, l3sq)
    }

    /// Initial triple with the positive square-root branch.
    pub fn initial_l(&self) -> Result<[f64; 3]> {
        self.validate_ode()?;
        let (l2sq, l3sq) = self.initial_squares();
        Ok([self.l1_0, math::sqrt(l2sq), math::sqrt(l3sq)])
    }

    /// +1 when the trajectory runs the stated constants, −1 for the
    /// reflected (−c, −λ) family.
    fn sigma(&self) -> f64 {
        if (self.sign_l1prime as f64) * self.c[0] > 0.0 {
            1.0
        } else {
            -1.0
        }
    }
}

fn rhs(c: [f64; 3], sigma: f64, l: [f64; 3]) -> [f64; 3] {
    [
        sigma * c[0] * l[1] * l[2],
        sigma * c[1] * l[0] * l[2],
        sigma * c[2] * l[0] * l[1],
    ]
}

fn rk4_step(c: [f64; 3], sigma: f64, l: [f64; 3], h: f64) -> [f64; 3] {
    let k1 = rhs(c, sigma, l);
    let mid1 = [0, 1, 2].map(|i| l[i] + 0.5 * h * k1[i]);
    let k2 = rhs(c, sigma, mid1);
    let mid2 = [0, 1, 2].map(|i| l[i] + 0.5 * h * k2[i]);
    let k3 = rhs(c, sigma, mid2);
    let end = [0, 1, 2].map(|i| l[i] + h * k3[i]);
    let k4 = rhs(c, sigma, end);
    [0, 1, 2].map(|i| l[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

fn acceptable(l: &[f64; 3]) -> bool {
    // Positive branch only: a sign change means the coefficient crossed zero.
    l.iter()
        .all(|v| v.is_finite() && *v > 0.0 && v * v >= POSITIVITY_FLOOR && *v < BLOWUP_GUARD)
}

/// One-sided march from ξ=0; returns nodes excluding the start value.
fn march(c: [f64; 3], sigma: f64, start: [f64; 3], h: f64, max_nodes: usize) -> Vec<[f64; 3]> {
    let mut out = Vec::new();
    let mut cur = start;
    for _ in 0..max_nodes {
        let next = rk4_step(c, sigma, cur, h);
        if !acceptable(&next) {
            break;
        }
        out.push(next);
        cur = next;
    }
    out
}

/// Dense trajectory on a uniform ξ-grid containing 0.
pub struct TranslationNet {
    tc: TranslationConstants,
    sigma: f64,
    step: f64,
    /// Node values at ξ = (i − base) · step.
    nodes: Vec<[f64; 3]>,
    base: usize,
    clipped: bool,
    richardson: f64,
}

impl TranslationNet {
    pub fn alpha(&self) -> [f64; 3] {
        self.tc.alpha
    }

    pub fn constants(&self) -> &TranslationConstants {
        &self.tc
    }

    /// The constants actually driving the trajectory: `σ·c`, where σ = −1
    /// realizes the reflected family.
    pub fn effective_c(&self) -> [f64; 3] {
        self.tc.c.map(|v| self.sigma * v)
    }

    pub fn clipped(&self) -> bool {
        self.clipped
    }

    /// Max endpoint discrepancy between the build integration and a re-run
    /// at half the step.
    pub fn richardson_error(&self) -> f64 {
        self.richardson
    }

    pub fn xi_range(&self) -> (f64, f64) {
        (
            -(self.base as f64) * self.step,
            (self.nodes.len() - 1 - self.base) as f64 * self.step,
        )
    }

    pub fn xi_of(&self, p: [f64; 3]) -> f64 {
        let a = self.tc.alpha;
        a[0] * p[0] + a[1] * p[1] + a[2] * p[2]
    }

    /// A representative point of the level plane ξ = ξ₀.
    pub fn point_at_xi(&self, xi0: f64) -> [f64; 3] {
        let a = self.tc.alpha;
        let n2 = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
        [a[0] * xi0 / n2, a[1] * xi0 / n2, a[2] * xi0 / n2]
    }

    pub fn l_of_xi(&self, xi: f64) -> Result<[f64; 3]> {
        let (lo, hi) = self.xi_range();
        let slack = 1e-9 * (hi - lo);
        if xi < lo - slack || xi > hi + slack {
            return Err(Error::OutOfDomain {
                point: self.point_at_xi(xi),
            });
        }
        let t_abs = (xi - lo) / self.step;
        let mut cell = t_abs as usize;
        if cell + 1 >= self.nodes.len() {
            cell = self.nodes.len() - 2;
        }
        let t = t_abs - cell as f64;
        let y0 = self.nodes[cell];
        let y1 = self.nodes[cell + 1];
        let k0 = rhs(self.tc.c, self.sigma, y0);
        let k1 = rhs(self.tc.c, self.sigma, y1);
        let h = self.step;
        // Cubic Hermite basis.
        let (t2, t3) = (t * t, t * t * t);
        let (h00, h10) = (2.0 * t3 - 3.0 * t2 + 1.0, t3 - 2.0 * t2 + t);
        let (h01, h11) = (-2.0 * t3 + 3.0 * t2, t3 - t2);
        Ok([0, 1, 2].map(|i| h00 * y0[i] + h10 * h * k0[i] + h01 * y1[i] + h11 * h * k1[i]))
    }

    /// Exact ξ-derivative through the defining ODE.
    pub fn dl_dxi(&self, xi: f64) -> Result<[f64; 3]> {
        Ok(rhs(self.tc.c, self.sigma, self.l_of_xi(xi)?))
    }

    /// First integrals `I₁₂ = c₂l₁² − c₁l₂²`, `I₁₃ = c₃l₁² − c₁l₃²`,
    /// `I₂₃ = c₃l₂² − c₂l₃²`; all three equal λ on a valid family.
    pub fn conserved(&self, xi: f64) -> Result<[f64; 3]> {
        let l = self.l_of_xi(xi)?;
        let [c1, c2, c3] = self.tc.c;
        Ok([
            c2 * l[0] * l[0] - c1 * l[1] * l[1],
            c3 * l[0] * l[0] - c1 * l[2] * l[2],
            c3 * l[1] * l[1] - c2 * l[2] * l[2],
        ])
    }

    /// `l₁,ξ² − c₂(c₂−c₁)(l₁² − λ/c₂)(l₁² − λ/(c₂−c₁))` at ξ.
    pub fn quartic_defect(&self, xi: f64) -> Result<f64> {
        let l = self.l_of_xi(xi)?;
        let d = self.dl_dxi(xi)?;
        let [c1, c2, _] = self.tc.c;
        let y = l[0] * l[0];
        let rhs = c2 * (c2 - c1) * (y - self.tc.lambda / c2) * (y - self.tc.lambda / (c2 - c1));
        Ok(d[0] * d[0] - rhs)
    }

    pub(crate) fn l_at(&self, p: [f64; 3]) -> Result<[f64; 3]> {
        self.l_of_xi(self.xi_of(p))
    }

    pub(crate) fn sample(&self, p: [f64; 3]) -> Result<NetSample> {
        let xi = self.xi_of(p);
        let l = self.l_of_xi(xi)?;
        let d = rhs(self.tc.c, self.sigma, l);
        let a = self.tc.alpha;
        let mut dl = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                dl[i][j] = a[j] * d[i];
            }
        }
        Ok(NetSample { l, dl })
    }
}

struct BuiltTable {
    nodes: Vec<[f64; 3]>,
    base: usize,
    clipped: bool,
    richardson: f64,
}

fn integrate_table(tc: &TranslationConstants, xi_lo: f64, xi_hi: f64) -> Result<BuiltTable> {
    if !(xi_lo <= 0.0 && xi_hi >= 0.0) {
        return Err(Error::Validation {
            message: format!("xi_range ({xi_lo}, {xi_hi}) must contain 0"),
        });
    }
    let want_fwd = math::ceil(xi_hi / RK_STEP) as usize;
    let want_bwd = math::ceil(-xi_lo / RK_STEP) as usize;
    if want_fwd + want_bwd > MAX_NODES {
        return Err(Error::Validation {
            message: format!("xi_range ({xi_lo}, {xi_hi}) is too large to tabulate"),
        });
    }
    let sigma = tc.sigma();
    let start = tc.initial_l()?;
    let fwd = march(tc.c, sigma, start, RK_STEP, want_fwd);
    let bwd = march(tc.c, sigma, start, -RK_STEP, want_bwd);
    let clipped = fwd.len() < want_fwd || bwd.len() < want_bwd;

    // Step-halved re-run for the Richardson consistency estimate.
    let fine_fwd = march(tc.c, sigma, start, RK_STEP / 2.0, 2 * fwd.len());
    let fine_bwd = march(tc.c, sigma, start, -RK_STEP / 2.0, 2 * bwd.len());
    let mut richardson = 0.0f64;
    if let (Some(a), Some(b)) = (fwd.last(), fine_fwd.last()) {
        if fine_fwd.len() == 2 * fwd.len() {
            for i in 0..3 {
                richardson = math::max(richardson, math::abs(a[i] - b[i]));
            }
        }
    }
    if let (Some(a), Some(b)) = (bwd.last(), fine_bwd.last()) {
        if fine_bwd.len() == 2 * bwd.len() {
            for i in 0..3 {
                richardson = math::max(richardson, math::abs(a[i] - b[i]));
            }
        }
    }

    let mut nodes = Vec::with_capacity(bwd.len() + 1 + fwd.len());
    nodes.extend(bwd.iter().rev());
    nodes.push(start);
    nodes.extend(fwd.iter());
    if nodes.len() < 2 {
        return Err(Error::DomainShrunk {
            admissible: (0.0, 0.0),
        });
    }
    // Degenerate-family runtime check: every component must actually move.
    let mut max_rate = [0.0f64; 3];
    for n in &nodes {
        let d = rhs(tc.c, sigma, *n);
        for i in 0..3 {
            max_rate[i] = math::max(max_rate[i], math::abs(d[i]));
        }
    }
    if max_rate.iter().any(|r| *r < 1e-12) {
        return Err(Error::Validation {
            message: "family is degenerate: some l_i stays constant".into(),
        });
    }
    Ok(BuiltTable {
        nodes,
        base: bwd.len(),
        clipped,
        richardson,
    })
}

fn box_for_alpha(alpha: [f64; 3], xi_lo: f64, xi_hi: f64) -> Box3 {
    let mid = 0.5 * (xi_lo + xi_hi);
    let span = xi_hi - xi_lo;
    let n2: f64 = alpha.iter().map(|a| a * a).sum();
    let l1: f64 = alpha.iter().map(|a| math::abs(*a)).sum();
    let center = [0, 1, 2].map(|i| alpha[i] * mid / n2);
    let w = 0.995 * span / (2.0 * l1);
    Box3 {
        lo: [0, 1, 2].map(|i| center[i] - w),
        hi: [0, 1, 2].map(|i| center[i] + w),
    }
}

fn net_from_table(tc: TranslationConstants, table: BuiltTable) -> GuichardNet {
    let tnet = TranslationNet {
        sigma: tc.sigma(),
        tc,
        step: RK_STEP,
        nodes: table.nodes,
        base: table.base,
        clipped: table.clipped,
        richardson: table.richardson,
    };
    let (lo, hi) = tnet.xi_range();
    GuichardNet {
        domain: box_for_alpha(tnet.tc.alpha, lo, hi),
        mode: DerivativeMode::Exact,
        kind: NetKind::Translation(tnet),
    }
}

/// Builds the family on exactly the requested ξ-range; errors with the
/// admissible sub-interval if the metric loses positivity inside it.
pub fn build_translation_family(
    tc: TranslationConstants,
    xi_range: (f64, f64),
) -> Result<GuichardNet> {
    tc.validate()?;
    let table = integrate_table(&tc, xi_range.0, xi_range.1)?;
    if table.clipped {
        let lo = -(table.base as f64) * RK_STEP;
        let hi = (table.nodes.len() - 1 - table.base) as f64 * RK_STEP;
        return Err(Error::DomainShrunk {
            admissible: (lo, hi),
        });
    }
    Ok(net_from_table(tc, table))
}

/// Builds the family on the maximal admissible sub-interval of a probe
/// range, clipping where positivity fails.
pub fn build_translation_family_maximal(
    tc: TranslationConstants,
    xi_probe: (f64, f64),
) -> Result<GuichardNet> {
    tc.validate()?;
    let table = integrate_table(&tc, xi_probe.0, xi_probe.1)?;
    Ok(net_from_table(tc, table))
}

/// First integrals of a translation net at ξ; see
/// [`TranslationNet::conserved`].
pub fn conserved_quantities(net: &GuichardNet, xi: f64) -> Result<[f64; 3]> {
    match net.translation() {
        Some(t) => t.conserved(xi),
        None => Err(Error::Unsupported {
            what: "conserved quantities require a translation family".into(),
        }),
    }
}

/// Closed-form l₁(ξ) through a Jacobi elliptic reduction of the quartic ODE.
///
/// Writing y = l₁² and P = c₂(c₂−c₁) with roots r_lo ≤ r_hi among λ/c₂,
/// λ/(c₂−c₁), the supported regimes (classified empirically) are:
///
/// * λ = 0, P > 0 — the quartic is separable;
///   `l₁(ξ) = l₁(0)/(1 − s√P l₁(0) ξ)` with s the sign of l₁,ξ(0).
/// * P > 0, 0 < y₀ < r_lo — oscillation through l₁ = 0;
///   `l₁ = √r_lo · sn(s·√(P·r_hi)·ξ + δ, √(r_lo/r_hi))`.
/// * P < 0 — the roots then straddle zero, r_lo < 0 < r_hi, and for
///   y₀ ≤ r_hi the motion oscillates through l₁ = 0 with amplitude √r_hi:
///   `l₁ = √r_hi · cn(√(−P·(r_hi−r_lo))·ξ − s·δ, √(r_hi/(r_hi−r_lo)))`.
///
/// The remaining regime (P > 0 with y₀ > r_hi) is unbounded; it is reported
/// as unsupported and the integrator route stays available there.
pub fn closed_form_l1(tc: &TranslationConstants, xi: f64) -> Result<f64> {
    tc.validate_ode()?;
    let [c1, c2, _] = tc.c;
    let p_coef = c2 * (c2 - c1);
    let s = tc.sign_l1prime as f64;
    let y0 = tc.l1_0 * tc.l1_0;

    if tc.lambda == 0.0 {
        if p_coef <= 0.0 {
            return Err(Error::UnsupportedRegime {
                message: format!("lambda = 0 requires c2(c2-c1) > 0, got {p_coef}"),
            });
        }
        return Ok(tc.l1_0 / (1.0 - s * math::sqrt(p_coef) * tc.l1_0 * xi));
    }

    let r1 = tc.lambda / c2;
    let r2 = tc.lambda / (c2 - c1);
    let (r_lo, r_hi) = (math::min(r1, r2), math::max(r1, r2));

    if p_coef > 0.0 {
        if !(r_lo > 0.0 && y0 < r_lo) {
            return Err(Error::UnsupportedRegime {
                message: format!(
                    "sn branch needs 0 < l1(0)^2 < {r_lo} with positive roots, got l1(0)^2 = {y0}"
                ),
            });
        }
        let k = EllipticModulus::new(math::sqrt(r_lo / r_hi))?;
        let omega = math::sqrt(p_coef * r_hi);
        let delta = invert_sn(tc.l1_0 / math::sqrt(r_lo), k)?;
        let (sn, _, _) = jacobi_scd(s * omega * xi + delta, k);
        Ok(math::sqrt(r_lo) * sn)
    } else {
        if !(r_hi > 0.0 && y0 <= r_hi) {
            return Err(Error::UnsupportedRegime {
                message: format!("cn branch needs 0 < l1(0)^2 <= {r_hi}, got {y0}"),
            });
        }
        let k = EllipticModulus::new(math::sqrt(r_hi / (r_hi - r_lo)))?;
        let omega = math::sqrt(-p_coef * (r_hi - r_lo));
        // cn is even and decreasing on [0, K]; the phase sign selects the
        // initial slope.
        let delta = invert_cn(tc.l1_0 / math::sqrt(r_hi), k)?;
        let (_, cn, _) = jacobi_scd(omega * xi - s * delta, k);
        Ok(math::sqrt(r_hi) * cn)
    }
}

/// u ∈ [0, K] with sn(u, k) = t, by bisection (sn is increasing there).
fn invert_sn(t: f64, k: EllipticModulus) -> Result<f64> {
    let big_k = complete_k(k)?;
    let (mut lo, mut hi) = (0.0, big_k);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if jacobi_scd(mid, k).0 < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// u ∈ [0, K] with cn(u, k) = t, by bisection (cn is decreasing there).
fn invert_cn(t: f64, k: EllipticModulus) -> Result<f64> {
    let big_k = complete_k(k)?;
    let (mut lo, mut hi) = (0.0, big_k);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if jacobi_scd(mid, k).1 > t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::NetField;

    /// The worked example: c = (1, −1, −2), α = (√3, 1, 2), λ = −4, l₁(0) = 1.
    pub(crate) fn example_constants() -> TranslationConstants {
        TranslationConstants {
            alpha: [3.0f64.sqrt(), 1.0, 2.0],
            c: [1.0, -1.0, -2.0],
            lambda: -4.0,
            l1_0: 1.0,
            sign_l1prime: 1,
        }
    }

    #[test]
    fn example_initial_data() {
        let tc = example_constants();
        tc.validate().unwrap();
        let l0 = tc.initial_l().unwrap();
        assert!((l0[1] - 3.0f64.sqrt()).abs() < 1e-15);
        assert!((l0[2] - 2.0f64.sqrt()).abs() < 1e-15);
        // l1'(0) = c1 l2 l3 = sqrt(6), and its square matches the quartic RHS
        // c2(c2-c1)(l1²-λ/c2)(l1²-λ/(c2-c1)) = (−1)(−2)(1−4)(1−2) = 6.
        let d0 = rhs(tc.c, tc.sigma(), l0);
        assert!((d0[0] - 6.0f64.sqrt()).abs() < 1e-14);
        assert!((d0[0] * d0[0] - 6.0).abs() < 1e-13);
    }

    #[test]
    fn constraint_gate_rejects_bad_c() {
        let mut tc = example_constants();
        tc.c = [1.0, -1.0, -1.0]; // c1 - c2 + c3 = 1
        assert!(matches!(tc.validate(), Err(Error::Validation { .. })));
    }

    #[test]
    fn constraint_gate_rejects_bad_alpha() {
        let mut tc = example_constants();
        tc.alpha = [1.0, 1.0, 1.0];
        assert!(matches!(tc.validate(), Err(Error::Validation { .. })));
    }

    #[test]
    fn maximal_build_clips_at_positivity_boundary() {
        let net = build_translation_family_maximal(example_constants(), (-10.0, 10.0)).unwrap();
        let t = net.translation().unwrap();
        assert!(t.clipped());
        let (lo, hi) = t.xi_range();
        // l1 -> 0 backwards, l3 -> 0 forwards; both interval ends are finite.
        assert!(lo > -0.5 && lo < -0.2);
        assert!(hi > 0.3 && hi < 0.5);
        assert!(t.richardson_error() < 1e-10);
        // Endpoints keep all coefficients positive.
        for xi in [lo, hi] {
            let l = t.l_of_xi(xi).unwrap();
            assert!(l.iter().all(|v| *v > 0.0));
        }
    }

    #[test]
    fn strict_build_reports_admissible_interval() {
        let err = build_translation_family(example_constants(), (-1.0, 1.0)).unwrap_err();
        match err {
            Error::DomainShrunk { admissible } => {
                assert!(admissible.0 > -0.5 && admissible.1 < 0.5);
            }
            other => panic!("expected DomainShrunk, got {other:?}"),
        }
    }

    #[test]
    fn conserved_quantities_match_lambda_and_stay_flat() {
        let net = build_translation_family_maximal(example_constants(), (-10.0, 10.0)).unwrap();
        let t = net.translation().unwrap();
        let i0 = t.conserved(0.0).unwrap();
        for v in i0 {
            assert!((v + 4.0).abs() < 1e-12, "I(0) = {i0:?}");
        }
        let (lo, hi) = t.xi_range();
        for n in 0..50 {
            let xi = lo + (hi - lo) * n as f64 / 49.0;
            let iv = t.conserved(xi).unwrap();
            for (a, b) in iv.iter().zip(i0) {
                assert!((a - b).abs() < 1e-8, "drift at xi={xi}: {iv:?}");
            }
        }
    }

    #[test]
    fn guichard_holds_along_trajectory() {
        let net = build_translation_family_maximal(example_constants(), (-10.0, 10.0)).unwrap();
        let t = net.translation().unwrap();
        let (lo, hi) = t.xi_range();
        for n in 0..200 {
            let xi = lo + (hi - lo) * n as f64 / 199.0;
            let l = t.l_of_xi(xi).unwrap();
            let g = l[0] * l[0] - l[1] * l[1] + l[2] * l[2];
            assert!(g.abs() < 1e-10, "guichard defect {g} at xi={xi}");
        }
    }

    #[test]
    fn quartic_ode_cross_check() {
        let net = build_translation_family_maximal(example_constants(), (-10.0, 10.0)).unwrap();
        let t = net.translation().unwrap();
        let (lo, hi) = t.xi_range();
        for n in 0..100 {
            let xi = lo + (hi - lo) * n as f64 / 99.0;
            assert!(t.quartic_defect(xi).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn closed_form_matches_integrator() {
        let tc = example_constants();
        let net = build_translation_family_maximal(tc, (-10.0, 10.0)).unwrap();
        let t = net.translation().unwrap();
        assert!((closed_form_l1(&tc, 0.0).unwrap() - 1.0).abs() < 1e-14);
        let (lo, hi) = t.xi_range();
        for n in 0..60 {
            let xi = lo + (hi - lo) * n as f64 / 59.0;
            let cf = closed_form_l1(&tc, xi).unwrap();
            let tab = t.l_of_xi(xi).unwrap()[0];
            assert!(
                (cf - tab).abs() < 1e-8,
                "xi={xi}: closed {cf} vs table {tab}"
            );
        }
    }

    #[test]
    fn closed_form_lambda_zero_is_rational() {
        let tc = TranslationConstants {
            alpha: [0.0; 3], // not used by the ODE route
            c: [1.0, 2.0, 1.0],
            lambda: 0.0,
            l1_0: 0.5,
            sign_l1prime: 1,
        };
        // P = c2(c2-c1) = 2; l1 = l1_0 / (1 - sqrt(2) l1_0 xi).
        for &xi in &[-0.4, -0.1, 0.0, 0.2, 0.5] {
            let got = closed_form_l1(&tc, xi).unwrap();
            let expect = 0.5 / (1.0 - 2.0f64.sqrt() * 0.5 * xi);
            assert!((got - expect).abs() < 1e-14);
        }
        // Against a direct march of the coupled system.
        let start = tc.initial_l().unwrap();
        let fwd = march(tc.c, 1.0, start, 1e-4, 2000);
        let l1_at = |n: usize| fwd[n - 1][0];
        let xi = 0.2;
        assert!((l1_at(2000) - closed_form_l1(&tc, xi).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn unsupported_regime_is_reported() {
        let tc = TranslationConstants {
            alpha: [0.0; 3],
            c: [1.0, 2.0, 1.0],
            lambda: -1.0, // roots negative: no bounded positive branch
            l1_0: 0.5,
            sign_l1prime: 1,
        };
        assert!(matches!(
            closed_form_l1(&tc, 0.1),
            Err(Error::UnsupportedRegime { .. })
        ));
    }

    #[test]
    fn cn_branch_matches_integrator() {
        // P = c2(c2-c1) = −0.25 < 0; roots −2 and 2 straddle zero, so the
        // bounded branch is the cn form. The alpha relation
        // −0.25α₁² − 0.5α₂² + 0.5α₃² = 0 has the real solution below.
        let tc = TranslationConstants {
            alpha: [2.0f64.sqrt(), 1.0, 2.0f64.sqrt()],
            c: [1.0, 0.5, -0.5],
            lambda: -1.0,
            l1_0: 1.0,
            sign_l1prime: 1,
        };
        let net = build_translation_family_maximal(tc, (-10.0, 10.0)).unwrap();
        let t = net.translation().unwrap();
        let (lo, hi) = t.xi_range();
        for n in 0..60 {
            let xi = lo + (hi - lo) * n as f64 / 59.0;
            let cf = closed_form_l1(&tc, xi).unwrap();
            let tab = t.l_of_xi(xi).unwrap()[0];
            assert!(
                (cf - tab).abs() < 1e-8,
                "xi={xi}: closed {cf} vs table {tab}"
            );
        }
        let grid = net.domain().grid([5, 5, 5], 0.05);
        let rep = crate::residuals::first_order_residuals(&net, &grid, 1e-8).unwrap();
        assert!(rep.pass(), "{rep:?}");
    }

    #[test]
    fn reflected_sign_family_still_solves_system() {
        let mut tc = example_constants();
        tc.sign_l1prime = -1;
        let net = build_translation_family_maximal(tc, (-10.0, 10.0)).unwrap();
        let t = net.translation().unwrap();
        let d = t.dl_dxi(0.0).unwrap();
        assert!(d[0] < 0.0, "l1 must initially decrease");
        let grid = net.domain().grid([5, 5, 5], 0.05);
        let rep = crate::residuals::first_order_residuals(&net, &grid, 1e-8).unwrap();
        assert!(rep.pass(), "{rep:?}");
    }

    #[test]
    fn net_evaluates_with_chain_rule_derivatives() {
        let net = build_translation_family_maximal(example_constants(), (-10.0, 10.0)).unwrap();
        let s = net.sample([0.0, 0.0, 0.0]).unwrap();
        // h12 = dl1/dx2 / l2 = α2 l1' / l2 = sqrt(6)/sqrt(3) = sqrt(2).
        let h12 = s.dl[0][1] / s.l[1];
        assert!((h12 - 2.0f64.sqrt()).abs() < 1e-12);
    }
}
