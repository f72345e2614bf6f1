//! Group-invariant solution families of the first-order system.
//!
//! Three constructions, one per 2-dimensional subgroup reduction:
//! translation-invariant nets `lᵢ(ξ)`, `ξ = Σ αₛxₛ` (the general family in
//! Jacobi elliptic functions, plus the one-constant closed forms), and
//! translation-dilation nets `lᵢ(η)`, `η = Σ aₛxₛ / Σ bₛxₛ`.

pub mod dilation;
pub mod one_constant;
pub mod translation;

pub use dilation::{build_dilation_family, DilationCase, DilationConstants};
pub use one_constant::{
    build_one_constant_family, OneConstantCase, OneConstantFamily, PhiFunction,
};
pub use translation::{
    build_translation_family, build_translation_family_maximal, closed_form_l1,
    conserved_quantities, TranslationConstants,
};
