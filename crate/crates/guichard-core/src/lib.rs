//! Guichard nets for the first-order Lamé system.
//!
//! A triply orthogonal coordinate system with metric `g = Σ lᵢ² dxᵢ²` is a
//! Guichard net when its coefficients satisfy `l₁² − l₂² + l₃² = 0` together
//! with Lamé's flatness equations. This crate builds the group-invariant
//! solution families of that system (translation-invariant families in terms
//! of Jacobi elliptic functions, one-constant families, translation-dilation
//! families), verifies candidates against the full first- and second-order
//! systems on sample grids, computes the differential geometry of the
//! resulting nets, and re-checks the system's point symmetry generator with
//! an exact rational symbolic engine.
//!
//! The crate is `no_std` (with `alloc`); all floating-point math goes through
//! [`math`]. IO, file formats and the command-line driver live in the
//! companion `guichard-cli` crate.

#![cfg_attr(not(test), no_std)]
// Index-heavy tensor arithmetic and NaN-rejecting comparisons are the norm
// here; frozen reference constants keep their full printed digits.
#![allow(clippy::needless_range_loop)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

extern crate alloc;

pub mod elliptic;
pub mod error;
pub mod families;
pub mod geometry;
pub mod math;
pub mod net;
pub mod residuals;
pub mod rng;
pub mod symmetry;

pub use error::{Error, Result};
pub use net::{Box3, DerivativeMode, GuichardNet, HMatrix, NetField, NetSample, EPSILON};
pub use residuals::{
    first_order_residuals, second_order_residuals, FamilyResidual, ResidualReport,
};
