//! Total derivatives and the first prolongation of a point-transformation
//! ansatz.
//!
//! The total derivative on jet-free expressions is
//!
//! ```text
//! Dₖ = ∂/∂xₖ + Σⱼ l_{j,x_k} ∂/∂lⱼ + Σ_{i≠j} h_{ij,x_k} ∂/∂h_{ij}
//! ```
//!
//! and the first prolongation of `V = Σ ξⁱ∂ₓᵢ + Σ ηⁱ∂_lᵢ + Σ φⁱʲ∂_hᵢⱼ`
//! carries the jet coefficients `Dₖ(ηⁱ) − Σᵣ Dₖ(ξʳ)·l_{i,x_r}` and
//! `Dₖ(φⁱʲ) − Σᵣ Dₖ(ξʳ)·h_{ij,x_r}`.

use crate::error::{Error, Result};
use crate::symmetry::atom::Atom;
use crate::symmetry::expr::Expression;

/// Total derivative `Dₖ e` (1-based k) of a jet-free expression.
pub fn total_derivative(e: &Expression, k: u8) -> Result<Expression> {
    if e.contains_jet() {
        return Err(Error::JetInExpression);
    }
    let mut out = e.differentiate(Atom::X(k));
    for j in 1..=3u8 {
        let term = Expression::atom(Atom::LJet(j, k)).mul(&e.differentiate(Atom::L(j)));
        out = out.add(&term);
    }
    for i in 1..=3u8 {
        for j in 1..=3u8 {
            if i != j {
                let term =
                    Expression::atom(Atom::HJet(i, j, k)).mul(&e.differentiate(Atom::H(i, j)));
                out = out.add(&term);
            }
        }
    }
    Ok(out)
}

/// Coefficient functions of a candidate infinitesimal generator. All twelve
/// entries must be jet-free expressions in x, l, h and the parameters;
/// `phi[i][j]` is read with 0-based off-diagonal indices, the diagonal is
/// ignored.
pub struct VectorFieldAnsatz {
    pub xi: [Expression; 3],
    pub eta: [Expression; 3],
    pub phi: [[Expression; 3]; 3],
}

impl VectorFieldAnsatz {
    pub fn validate(&self) -> Result<()> {
        let all = self
            .xi
            .iter()
            .chain(self.eta.iter())
            .chain(self.phi.iter().flatten());
        for e in all {
            if e.contains_jet() {
                return Err(Error::JetInExpression);
            }
        }
        Ok(())
    }

    /// The generator of the full symmetry group:
    /// `ξⁱ = a·xᵢ + aᵢ`, `ηⁱ = c·lᵢ`, `φⁱʲ = −a·h_ij`.
    pub fn scaling_generator() -> Self {
        let a = Expression::atom(Atom::ParamA);
        let c = Expression::atom(Atom::ParamC);
        let xi = [1u8, 2, 3].map(|i| {
            a.mul(&Expression::atom(Atom::X(i)))
                .add(&Expression::atom(Atom::ParamShift(i)))
        });
        let eta = [1u8, 2, 3].map(|i| c.mul(&Expression::atom(Atom::L(i))));
        let mut phi: [[Expression; 3]; 3] = Default::default();
        for i in 1..=3u8 {
            for j in 1..=3u8 {
                if i != j {
                    phi[(i - 1) as usize][(j - 1) as usize] =
                        a.neg().mul(&Expression::atom(Atom::H(i, j)));
                }
            }
        }
        VectorFieldAnsatz { xi, eta, phi }
    }

    /// The zero field.
    pub fn zero() -> Self {
        VectorFieldAnsatz {
            xi: Default::default(),
            eta: Default::default(),
            phi: Default::default(),
        }
    }
}

/// First prolongation: the ansatz plus its jet coefficients.
pub struct ProlongedField {
    pub xi: [Expression; 3],
    pub eta: [Expression; 3],
    pub phi: [[Expression; 3]; 3],
    /// Coefficient of `∂/∂l_{i,x_k}` at `psi[i][k]` (0-based).
    pub psi: [[Expression; 3]; 3],
    /// Coefficient of `∂/∂h_{ij,x_k}` at `chi[i][j][k]` (0-based).
    pub chi: [[[Expression; 3]; 3]; 3],
}

/// Builds the first prolongation of a validated ansatz.
pub fn prolong_first(v: &VectorFieldAnsatz) -> Result<ProlongedField> {
    v.validate()?;
    let d_xi: [[Expression; 3]; 3] = {
        let mut out: [[Expression; 3]; 3] = Default::default();
        for r in 0..3 {
            for k in 0..3 {
                out[r][k] = total_derivative(&v.xi[r], k as u8 + 1)?;
            }
        }
        out
    };

    let mut psi: [[Expression; 3]; 3] = Default::default();
    for i in 0..3 {
        for k in 0..3 {
            let mut coeff = total_derivative(&v.eta[i], k as u8 + 1)?;
            for r in 0..3 {
                let jet = Expression::atom(Atom::LJet(i as u8 + 1, r as u8 + 1));
                coeff = coeff.sub(&d_xi[r][k].mul(&jet));
            }
            psi[i][k] = coeff;
        }
    }

    let mut chi: [[[Expression; 3]; 3]; 3] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            for k in 0..3 {
                let mut coeff = total_derivative(&v.phi[i][j], k as u8 + 1)?;
                for r in 0..3 {
                    let jet = Expression::atom(Atom::HJet(i as u8 + 1, j as u8 + 1, r as u8 + 1));
                    coeff = coeff.sub(&d_xi[r][k].mul(&jet));
                }
                chi[i][j][k] = coeff;
            }
        }
    }

    Ok(ProlongedField {
        xi: v.xi.clone(),
        eta: v.eta.clone(),
        phi: v.phi.clone(),
        psi,
        chi,
    })
}

impl ProlongedField {
    /// Applies the prolonged field to an expression on the first jet space.
    pub fn apply(&self, f: &Expression) -> Expression {
        let mut out = Expression::zero();
        for i in 0..3usize {
            let ib = i as u8 + 1;
            out = out.add(&self.xi[i].mul(&f.differentiate(Atom::X(ib))));
            out = out.add(&self.eta[i].mul(&f.differentiate(Atom::L(ib))));
            for k in 0..3usize {
                let kb = k as u8 + 1;
                out = out.add(&self.psi[i][k].mul(&f.differentiate(Atom::LJet(ib, kb))));
            }
            for j in 0..3usize {
                if i == j {
                    continue;
                }
                let jb = j as u8 + 1;
                out = out.add(&self.phi[i][j].mul(&f.differentiate(Atom::H(ib, jb))));
                for k in 0..3usize {
                    let kb = k as u8 + 1;
                    out = out.add(&self.chi[i][j][k].mul(&f.differentiate(Atom::HJet(ib, jb, kb))));
                }
            }
        }
        out
    }
}
