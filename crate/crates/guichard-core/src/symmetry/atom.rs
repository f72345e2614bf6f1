//! The fixed atom alphabet of the symbolic engine.
//!
//! Three independent variables, three coefficients, six auxiliary h's, their
//! first jets, and the five generator parameters. The engine is specialized
//! to exactly this alphabet; it is not a general CAS.

use alloc::string::String;
use alloc::vec::Vec;

/// Indices are 1-based to match the printed names (x1, h12, l1_x2, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// Independent variable xᵢ.
    X(u8),
    /// Coefficient lᵢ.
    L(u8),
    /// Auxiliary h_ij, i ≠ j.
    H(u8, u8),
    /// Jet coordinate l_{i,x_k}.
    LJet(u8, u8),
    /// Jet coordinate h_{ij,x_k}.
    HJet(u8, u8, u8),
    /// Dilation parameter of the independent variables.
    ParamA,
    /// Dilation parameter of the dependent variables.
    ParamC,
    /// Translation parameters a₁, a₂, a₃.
    ParamShift(u8),
}

impl Atom {
    pub fn is_jet(self) -> bool {
        matches!(self, Atom::LJet(..) | Atom::HJet(..))
    }

    pub fn name(self) -> String {
        match self {
            Atom::X(i) => alloc::format!("x{i}"),
            Atom::L(i) => alloc::format!("l{i}"),
            Atom::H(i, j) => alloc::format!("h{i}{j}"),
            Atom::LJet(i, k) => alloc::format!("l{i}_x{k}"),
            Atom::HJet(i, j, k) => alloc::format!("h{i}{j}_x{k}"),
            Atom::ParamA => String::from("a"),
            Atom::ParamC => String::from("c"),
            Atom::ParamShift(i) => alloc::format!("a{i}"),
        }
    }

    /// Every declared atom, for the parser's lookup table.
    pub fn all() -> Vec<Atom> {
        let mut out = Vec::new();
        for i in 1..=3u8 {
            out.push(Atom::X(i));
            out.push(Atom::L(i));
            out.push(Atom::ParamShift(i));
            for k in 1..=3u8 {
                out.push(Atom::LJet(i, k));
            }
            for j in 1..=3u8 {
                if i != j {
                    out.push(Atom::H(i, j));
                    for k in 1..=3u8 {
                        out.push(Atom::HJet(i, j, k));
                    }
                }
            }
        }
        out.push(Atom::ParamA);
        out.push(Atom::ParamC);
        out
    }
}

/// ε₁ = ε₃ = +1, ε₂ = −1 (1-based).
pub fn eps(i: u8) -> i64 {
    if i == 2 {
        -1
    } else {
        1
    }
}

/// The third index of {1, 2, 3} distinct from both arguments.
pub fn third(i: u8, j: u8) -> u8 {
    6 - i - j
}
