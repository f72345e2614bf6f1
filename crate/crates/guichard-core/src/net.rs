//! Guichard nets as evaluable fields.
//!
//! A net is a map `x ↦ (l₁, l₂, l₃, ∂lᵢ/∂xⱼ)` on an axis-aligned box. The
//! residual engine, the geometry module and the CLI all consume nets through
//! the [`NetField`] trait, so group-action transforms can wrap a net without
//! copying it.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::families::dilation::DilationNet;
use crate::families::one_constant::OneConstantNet;
use crate::families::translation::TranslationNet;
use crate::math;

/// Signs ε₁ = ε₃ = +1, ε₂ = −1, fixed for the whole system (0-based index).
pub const EPSILON: [f64; 3] = [1.0, -1.0, 1.0];

/// Metric coefficients below this magnitude abort with a located error
/// instead of producing huge residuals.
pub const SINGULARITY_GUARD: f64 = 1e-9;

/// Axis-aligned box in ℝ³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Box3 {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl Box3 {
    pub fn new(lo: [f64; 3], hi: [f64; 3]) -> Result<Self> {
        if (0..3).any(|i| !(lo[i] < hi[i]) || !lo[i].is_finite() || !hi[i].is_finite()) {
            return Err(Error::InvalidBox { lo, hi });
        }
        Ok(Box3 { lo, hi })
    }

    pub fn contains(&self, p: [f64; 3]) -> bool {
        (0..3).all(|i| {
            let slack = 1e-9 * self.extent(i);
            p[i] >= self.lo[i] - slack && p[i] <= self.hi[i] + slack
        })
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }

    pub fn center(&self) -> [f64; 3] {
        [0, 1, 2].map(|i| 0.5 * (self.lo[i] + self.hi[i]))
    }

    pub fn corners(&self) -> [[f64; 3]; 8] {
        let mut out = [[0.0; 3]; 8];
        for (m, corner) in out.iter_mut().enumerate() {
            for i in 0..3 {
                corner[i] = if m >> i & 1 == 0 {
                    self.lo[i]
                } else {
                    self.hi[i]
                };
            }
        }
        out
    }

    /// Box scaled by `s` about its center.
    pub fn scaled(&self, s: f64) -> Box3 {
        let c = self.center();
        Box3 {
            lo: [0, 1, 2].map(|i| c[i] - 0.5 * s * self.extent(i)),
            hi: [0, 1, 2].map(|i| c[i] + 0.5 * s * self.extent(i)),
        }
    }

    /// Uniform grid with a fractional inset from every face. `counts` of 1
    /// degenerate to the axis midpoint.
    pub fn grid(&self, counts: [usize; 3], inset: f64) -> Vec<[f64; 3]> {
        let coord = |axis: usize, j: usize| -> f64 {
            let n = counts[axis];
            let t = if n <= 1 {
                0.5
            } else {
                inset + (1.0 - 2.0 * inset) * j as f64 / (n - 1) as f64
            };
            self.lo[axis] + t * self.extent(axis)
        };
        let mut pts = Vec::with_capacity(counts[0] * counts[1] * counts[2]);
        for i in 0..counts[0] {
            for j in 0..counts[1] {
                for k in 0..counts[2] {
                    pts.push([coord(0, i), coord(1, j), coord(2, k)]);
                }
            }
        }
        pts
    }
}

/// Net evaluation at a point: coefficients and their first derivatives,
/// `dl[i][j] = ∂lᵢ/∂xⱼ`.
#[derive(Debug, Clone, Copy)]
pub struct NetSample {
    pub l: [f64; 3],
    pub dl: [[f64; 3]; 3],
}

/// Off-diagonal matrix `h[i][j] = (∂lᵢ/∂xⱼ)/lⱼ`, diagonal unused (zero).
#[derive(Debug, Clone, Copy)]
pub struct HMatrix {
    pub h: [[f64; 3]; 3],
}

impl HMatrix {
    /// Requires every `lⱼ` above the singularity guard; `p` only locates the
    /// error.
    pub fn from_sample(s: &NetSample, p: [f64; 3]) -> Result<Self> {
        check_singular(&s.l, p)?;
        let mut h = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    h[i][j] = s.dl[i][j] / s.l[j];
                }
            }
        }
        Ok(HMatrix { h })
    }
}

pub(crate) fn check_singular(l: &[f64; 3], p: [f64; 3]) -> Result<()> {
    for (j, lj) in l.iter().enumerate() {
        if math::abs(*lj) < SINGULARITY_GUARD {
            return Err(Error::Singularity { point: p, index: j });
        }
    }
    Ok(())
}

/// How `dl` is produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeMode {
    Exact,
    FiniteDifference { step: f64 },
}

/// Anything that evaluates like a Guichard net.
pub trait NetField {
    fn domain(&self) -> &Box3;
    fn sample(&self, p: [f64; 3]) -> Result<NetSample>;

    /// Coefficients only; default goes through [`NetField::sample`].
    fn l_at(&self, p: [f64; 3]) -> Result<[f64; 3]> {
        Ok(self.sample(p)?.l)
    }

    /// Step for central differences of derived fields (h and the nested
    /// second-order quantities). Never smaller than the net's own
    /// finite-difference step, or differencing would amplify its noise.
    fn h_step(&self, axis: usize) -> f64 {
        1e-5 * self.domain().extent(axis)
    }
}

pub(crate) enum NetKind {
    Translation(TranslationNet),
    OneConstant(OneConstantNet),
    Dilation(DilationNet),
    Closure(ClosureNet),
}

type LClosure = Box<dyn Fn([f64; 3]) -> [f64; 3] + Send + Sync>;
type DlClosure = Box<dyn Fn([f64; 3]) -> [[f64; 3]; 3] + Send + Sync>;

pub(crate) struct ClosureNet {
    pub(crate) l: LClosure,
    pub(crate) dl: Option<DlClosure>,
    pub(crate) alpha: Option<[f64; 3]>,
}

/// An evaluable Guichard-net candidate on a box domain.
pub struct GuichardNet {
    pub(crate) domain: Box3,
    pub(crate) mode: DerivativeMode,
    pub(crate) kind: NetKind,
}

impl core::fmt::Debug for GuichardNet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let kind = match &self.kind {
            NetKind::Translation(_) => "translation",
            NetKind::OneConstant(_) => "one_constant",
            NetKind::Dilation(_) => "dilation",
            NetKind::Closure(_) => "closure",
        };
        f.debug_struct("GuichardNet")
            .field("kind", &kind)
            .field("domain", &self.domain)
            .field("mode", &self.mode)
            .finish()
    }
}

impl GuichardNet {
    /// Net from a coefficient closure; derivatives by central differences.
    pub fn from_closure(
        domain: Box3,
        step: f64,
        l: impl Fn([f64; 3]) -> [f64; 3] + Send + Sync + 'static,
    ) -> Self {
        GuichardNet {
            domain,
            mode: DerivativeMode::FiniteDifference { step },
            kind: NetKind::Closure(ClosureNet {
                l: Box::new(l),
                dl: None,
                alpha: None,
            }),
        }
    }

    /// Net from coefficient and derivative closures (exact mode).
    pub fn from_closures(
        domain: Box3,
        l: impl Fn([f64; 3]) -> [f64; 3] + Send + Sync + 'static,
        dl: impl Fn([f64; 3]) -> [[f64; 3]; 3] + Send + Sync + 'static,
    ) -> Self {
        GuichardNet {
            domain,
            mode: DerivativeMode::Exact,
            kind: NetKind::Closure(ClosureNet {
                l: Box::new(l),
                dl: Some(Box::new(dl)),
                alpha: None,
            }),
        }
    }

    /// Tag a closure net as invariant along planes `Σ αₛxₛ = const`, which
    /// unlocks the level-surface geometry operations.
    pub fn with_xi_symmetry(mut self, alpha: [f64; 3]) -> Self {
        if let NetKind::Closure(c) = &mut self.kind {
            c.alpha = Some(alpha);
        }
        self
    }

    pub fn with_derivative_mode(mut self, mode: DerivativeMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn derivative_mode(&self) -> DerivativeMode {
        self.mode
    }

    /// Direction α when the net depends on x only through ξ = Σ αₛxₛ.
    pub fn xi_invariant(&self) -> Option<[f64; 3]> {
        match &self.kind {
            NetKind::Translation(t) => Some(t.alpha()),
            NetKind::OneConstant(o) => Some(o.alpha()),
            NetKind::Dilation(_) => None,
            NetKind::Closure(c) => c.alpha,
        }
    }

    pub fn translation(&self) -> Option<&TranslationNet> {
        match &self.kind {
            NetKind::Translation(t) => Some(t),
            _ => None,
        }
    }

    pub fn one_constant(&self) -> Option<&OneConstantNet> {
        match &self.kind {
            NetKind::OneConstant(o) => Some(o),
            _ => None,
        }
    }

    pub fn dilation(&self) -> Option<&DilationNet> {
        match &self.kind {
            NetKind::Dilation(d) => Some(d),
            _ => None,
        }
    }

    /// Evaluation without the domain check; closed forms extend smoothly a
    /// little past the box, which finite-difference probes rely on.
    pub(crate) fn raw_l(&self, p: [f64; 3]) -> Result<[f64; 3]> {
        match &self.kind {
            NetKind::Translation(t) => t.l_at(p),
            NetKind::OneConstant(o) => Ok(o.l_at(p)),
            NetKind::Dilation(d) => d.l_at(p),
            NetKind::Closure(c) => Ok((c.l)(p)),
        }
    }

    pub(crate) fn raw_sample(&self, p: [f64; 3]) -> Result<NetSample> {
        if let DerivativeMode::FiniteDifference { step } = self.mode {
            let l = self.raw_l(p)?;
            let mut dl = [[0.0; 3]; 3];
            for j in 0..3 {
                let mut pp = p;
                let mut pm = p;
                pp[j] += step;
                pm[j] -= step;
                let lp = self.raw_l(pp)?;
                let lm = self.raw_l(pm)?;
                for i in 0..3 {
                    dl[i][j] = (lp[i] - lm[i]) / (2.0 * step);
                }
            }
            return Ok(NetSample { l, dl });
        }
        match &self.kind {
            NetKind::Translation(t) => t.sample(p),
            NetKind::OneConstant(o) => Ok(o.sample(p)),
            NetKind::Dilation(d) => d.sample(p),
            NetKind::Closure(c) => {
                let l = (c.l)(p);
                match &c.dl {
                    Some(df) => Ok(NetSample { l, dl: (df)(p) }),
                    None => Err(Error::Unsupported {
                        what: alloc::string::String::from(
                            "closure net without derivative closure in exact mode",
                        ),
                    }),
                }
            }
        }
    }

    /// Transformed net under translation of the independent variables.
    pub fn translated(&self, v: [f64; 3]) -> TransformedNet<'_> {
        let domain = Box3 {
            lo: [0, 1, 2].map(|i| self.domain.lo[i] + v[i]),
            hi: [0, 1, 2].map(|i| self.domain.hi[i] + v[i]),
        };
        TransformedNet {
            inner: self,
            shift: v,
            scale: 1.0,
            l_scale: 1.0,
            domain,
        }
    }

    /// Transformed net under dilation of the independent variables.
    pub fn dilated_x(&self, lambda: f64) -> Result<TransformedNet<'_>> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::Validation {
                message: format!("dilation factor must be nonzero, got {lambda}"),
            });
        }
        let a = [0, 1, 2].map(|i| self.domain.lo[i] * lambda);
        let b = [0, 1, 2].map(|i| self.domain.hi[i] * lambda);
        let domain = Box3 {
            lo: [0, 1, 2].map(|i| math::min(a[i], b[i])),
            hi: [0, 1, 2].map(|i| math::max(a[i], b[i])),
        };
        Ok(TransformedNet {
            inner: self,
            shift: [0.0; 3],
            scale: lambda,
            l_scale: 1.0,
            domain,
        })
    }

    /// Transformed net under dilation of the dependent variables.
    pub fn dilated_l(&self, rho: f64) -> Result<TransformedNet<'_>> {
        if rho == 0.0 || !rho.is_finite() {
            return Err(Error::Validation {
                message: format!("dependent dilation factor must be nonzero, got {rho}"),
            });
        }
        Ok(TransformedNet {
            inner: self,
            shift: [0.0; 3],
            scale: 1.0,
            l_scale: rho,
            domain: self.domain,
        })
    }
}

impl NetField for GuichardNet {
    fn domain(&self) -> &Box3 {
        &self.domain
    }

    fn sample(&self, p: [f64; 3]) -> Result<NetSample> {
        if !self.domain.contains(p) {
            return Err(Error::OutOfDomain { point: p });
        }
        self.raw_sample(p)
    }

    fn l_at(&self, p: [f64; 3]) -> Result<[f64; 3]> {
        if !self.domain.contains(p) {
            return Err(Error::OutOfDomain { point: p });
        }
        self.raw_l(p)
    }

    fn h_step(&self, axis: usize) -> f64 {
        let base = 1e-5 * self.domain.extent(axis);
        match self.mode {
            DerivativeMode::Exact => base,
            DerivativeMode::FiniteDifference { step } => math::max(base, step),
        }
    }
}

/// View of a net under the symmetry group's action: `x̃ = scale·x + shift`
/// on the independent variables, `l̃ = l_scale·l` on the dependent ones.
pub struct TransformedNet<'a> {
    inner: &'a GuichardNet,
    shift: [f64; 3],
    scale: f64,
    l_scale: f64,
    domain: Box3,
}

impl TransformedNet<'_> {
    fn pull_back(&self, p: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|i| (p[i] - self.shift[i]) / self.scale)
    }
}

impl NetField for TransformedNet<'_> {
    fn domain(&self) -> &Box3 {
        &self.domain
    }

    fn sample(&self, p: [f64; 3]) -> Result<NetSample> {
        if !self.domain.contains(p) {
            return Err(Error::OutOfDomain { point: p });
        }
        let s = self.inner.raw_sample(self.pull_back(p))?;
        let mut out = NetSample {
            l: s.l.map(|v| self.l_scale * v),
            dl: [[0.0; 3]; 3],
        };
        for i in 0..3 {
            for j in 0..3 {
                out.dl[i][j] = s.dl[i][j] * self.l_scale / self.scale;
            }
        }
        Ok(out)
    }

    fn l_at(&self, p: [f64; 3]) -> Result<[f64; 3]> {
        if !self.domain.contains(p) {
            return Err(Error::OutOfDomain { point: p });
        }
        Ok(self
            .inner
            .raw_l(self.pull_back(p))?
            .map(|v| self.l_scale * v))
    }

    fn h_step(&self, axis: usize) -> f64 {
        self.inner.h_step(axis) * math::abs(self.scale)
    }
}
