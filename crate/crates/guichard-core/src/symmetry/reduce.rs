//! On-shell reduction: eliminate the functional dependence among jet
//! coordinates that the system imposes.
//!
//! The substitutions, applied repeatedly until fixpoint:
//!
//! ```text
//! l_{i,x_j} = h_ij·l_j                                  (i ≠ j)
//! l_{i,x_i} = −εᵢεⱼ h_ji·l_j − εᵢεₖ h_ki·l_k
//! h_{ij,x_k} = h_ik·h_kj                                (k ∉ {i,j})
//! h_{ij,x_j} = −h_{ji,x_i} − h_ik·h_jk                  (i < j)
//! h_{ij,x_i} = −εᵢεⱼ h_{ji,x_j} − εᵢεₖ h_ki·h_kj        (i < j)
//! ```
//!
//! after which the only jets left are the free ones, `h_{ji,x_i}` and
//! `h_{ji,x_j}` for i < j. The Guichard relation is applied last as the
//! directed rewrite `l₃² → l₂² − l₁²` on the numerator, which keeps the
//! normal form canonical (it reduces modulo the single-element Gröbner
//! basis of the relation ideal).

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::symmetry::atom::{eps, third, Atom};
use crate::symmetry::expr::{rat, Expression};

/// Replacement for a bound jet atom; `None` means the atom is free.
pub fn substitution_for(atom: Atom) -> Option<Expression> {
    let h = |i: u8, j: u8| Expression::atom(Atom::H(i, j));
    let l = |i: u8| Expression::atom(Atom::L(i));
    let hjet = |i: u8, j: u8, k: u8| Expression::atom(Atom::HJet(i, j, k));
    match atom {
        Atom::LJet(i, j) if i != j => Some(h(i, j).mul(&l(j))),
        Atom::LJet(i, _) => {
            let (j, k) = match i {
                1 => (2, 3),
                2 => (1, 3),
                _ => (1, 2),
            };
            let t1 = h(j, i).mul(&l(j)).scale(&rat(-eps(i) * eps(j)));
            let t2 = h(k, i).mul(&l(k)).scale(&rat(-eps(i) * eps(k)));
            Some(t1.add(&t2))
        }
        Atom::HJet(i, j, k) if k != i && k != j => Some(h(i, k).mul(&h(k, j))),
        Atom::HJet(i, j, k) if i < j && k == j => {
            let m = third(i, j);
            Some(hjet(j, i, i).neg().sub(&h(i, m).mul(&h(j, m))))
        }
        Atom::HJet(i, j, k) if i < j && k == i => {
            let m = third(i, j);
            let t1 = hjet(j, i, j).scale(&rat(-eps(i) * eps(j)));
            let t2 = h(m, i).mul(&h(m, j)).scale(&rat(-eps(i) * eps(m)));
            Some(t1.add(&t2))
        }
        _ => None,
    }
}

/// True for the jets that survive reduction: `h_{ji,x_i}` and `h_{ji,x_j}`
/// with i < j.
pub fn is_free_jet(atom: Atom) -> bool {
    matches!(atom, Atom::HJet(p, q, k) if p > q && (k == p || k == q))
}

/// Applies the substitution families to fixpoint, then the final Guichard
/// rewrite, and normalizes.
pub fn on_shell_reduce(e: &Expression) -> Result<Expression> {
    let mut cur = e.clone();
    for _pass in 0..100 {
        let bound: Vec<Atom> = cur
            .jet_atoms()
            .into_iter()
            .filter(|a| !is_free_jet(*a))
            .collect();
        if bound.is_empty() {
            let reduced = cur.guichard_rewrite();
            debug_assert!(reduced.jet_atoms().iter().all(|a| is_free_jet(*a)));
            return Ok(reduced);
        }
        for a in bound {
            let repl = substitution_for(a).expect("bound jet has a substitution");
            cur = cur.substitute_atom(a, &repl);
        }
    }
    Err(Error::ReduceLimit)
}
