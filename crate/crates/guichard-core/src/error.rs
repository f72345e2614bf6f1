//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `agm` requires strictly positive arguments.
    NonPositiveAgmInput {
        a: f64,
        b: f64,
    },
    /// Elliptic modulus outside `[0, 1]`.
    ModulusOutOfRange {
        k: f64,
    },
    /// `K(k)` diverges as `k → 1`.
    CompleteKDivergent,
    /// Point lies outside the net's domain box.
    OutOfDomain {
        point: [f64; 3],
    },
    /// A metric coefficient `l_j` vanished (|l_j| < 1e-9) at `point`.
    Singularity {
        point: [f64; 3],
        index: usize,
    },
    /// A constructor constraint failed; the message names the violated relation.
    Validation {
        message: String,
    },
    /// Requested ξ-range exceeds the interval on which the metric stays
    /// positive definite; the admissible sub-interval is reported.
    DomainShrunk {
        admissible: (f64, f64),
    },
    /// A closed-form factor (sin/sinh/cos) loses positivity inside the domain
    /// at the reported invariant value.
    PositivityViolation {
        factor: &'static str,
        at: f64,
    },
    /// Degenerate box (lo ≥ hi on some axis).
    InvalidBox {
        lo: [f64; 3],
        hi: [f64; 3],
    },
    /// Operation does not apply to this net or family case.
    Unsupported {
        what: String,
    },
    /// The quartic ODE reduction has no supported elliptic branch for these
    /// parameters; fall back to the integrator.
    UnsupportedRegime {
        message: String,
    },
    /// Symbolic grammar error with byte offset into the source.
    Parse {
        offset: usize,
        message: String,
    },
    /// Identifier is not one of the declared atoms.
    UnknownAtom {
        name: String,
    },
    /// Division is only defined by rationals and monomials in l₁, l₂, l₃.
    NonMonomialDenominator,
    DivisionByZero,
    /// Total derivatives only act on jet-free expressions.
    JetInExpression,
    /// On-shell reduction failed to reach a fixpoint within the pass limit.
    ReduceLimit,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPositiveAgmInput { a, b } => {
                write!(f, "agm requires positive arguments, got ({a}, {b})")
            }
            Error::ModulusOutOfRange { k } => {
                write!(f, "elliptic modulus must lie in [0, 1], got {k}")
            }
            Error::CompleteKDivergent => write!(f, "K(k) diverges at k = 1"),
            Error::OutOfDomain { point } => {
                write!(
                    f,
                    "point ({}, {}, {}) outside domain",
                    point[0], point[1], point[2]
                )
            }
            Error::Singularity { point, index } => {
                write!(
                    f,
                    "metric coefficient l{} vanishes near ({}, {}, {})",
                    index + 1,
                    point[0],
                    point[1],
                    point[2]
                )
            }
            Error::Validation { message } => write!(f, "constraint violated: {message}"),
            Error::DomainShrunk { admissible } => {
                write!(
                    f,
                    "metric loses positivity inside the requested range; admissible xi in ({}, {})",
                    admissible.0, admissible.1
                )
            }
            Error::PositivityViolation { factor, at } => {
                write!(
                    f,
                    "{factor} vanishes at invariant value {at} inside the domain"
                )
            }
            Error::InvalidBox { lo, hi } => {
                write!(f, "degenerate box: lo = {lo:?}, hi = {hi:?}")
            }
            Error::Unsupported { what } => write!(f, "unsupported: {what}"),
            Error::UnsupportedRegime { message } => {
                write!(f, "no closed-form branch: {message}")
            }
            Error::Parse { offset, message } => {
                write!(f, "syntax error at offset {offset}: {message}")
            }
            Error::UnknownAtom { name } => write!(f, "unknown atom `{name}`"),
            Error::NonMonomialDenominator => {
                write!(f, "denominator must normalize to a monomial in l1, l2, l3")
            }
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::JetInExpression => {
                write!(f, "total derivative requires a jet-free expression")
            }
            Error::ReduceLimit => write!(f, "on-shell reduction exceeded the pass limit"),
        }
    }
}
