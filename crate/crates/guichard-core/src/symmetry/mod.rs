//! Mechanical verification of the system's point symmetry generator.
//!
//! An exact rational engine builds the first prolongation of a candidate
//! vector field, applies it to every instance of the six first-order
//! equation families, reduces on-shell, and reports whether each result
//! normalizes to the literal zero — the infinitesimal criterion, executed
//! symbolically with no numeric instantiation. A numeric group-action test
//! complements it: transformed nets are re-verified against the residual
//! engine.

pub mod atom;
pub mod expr;
pub mod parse;
pub mod prolong;
pub mod reduce;

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::net::{GuichardNet, NetField};
use crate::residuals::{first_order_residuals, ResidualReport};

pub use atom::{eps, Atom};
pub use expr::Expression;
pub use parse::parse;
pub use prolong::{prolong_first, total_derivative, ProlongedField, VectorFieldAnsatz};
pub use reduce::{is_free_jet, on_shell_reduce};

/// One instance of a first-order equation family, as an expression.
/// Indices are 1-based and must be a permutation of (1, 2, 3).
pub fn equation(family: char, i: u8, j: u8, k: u8) -> Expression {
    let h = |i: u8, j: u8| Expression::atom(Atom::H(i, j));
    let l = |i: u8| Expression::atom(Atom::L(i));
    let ljet = |i: u8, k: u8| Expression::atom(Atom::LJet(i, k));
    let hjet = |i: u8, j: u8, k: u8| Expression::atom(Atom::HJet(i, j, k));
    let e = |i: u8| expr::rat(eps(i));
    match family {
        'A' => l(i)
            .pow(2)
            .scale(&e(i))
            .add(&l(j).pow(2).scale(&e(j)))
            .add(&l(k).pow(2).scale(&e(k))),
        'B' => ljet(i, j).sub(&h(i, j).mul(&l(j))),
        'C' => ljet(i, i)
            .scale(&e(i))
            .add(&h(j, i).mul(&l(j)).scale(&e(j)))
            .add(&h(k, i).mul(&l(k)).scale(&e(k))),
        'D' => hjet(i, j, k).sub(&h(i, k).mul(&h(k, j))),
        'E' => hjet(i, j, j)
            .add(&hjet(j, i, i))
            .add(&h(i, k).mul(&h(j, k))),
        'F' => hjet(i, j, i)
            .scale(&e(i))
            .add(&hjet(j, i, j).scale(&e(j)))
            .add(&h(k, i).mul(&h(k, j)).scale(&e(k))),
        other => panic!("unknown equation family `{other}`"),
    }
}

/// Outcome of applying the prolonged field to one equation instance.
#[derive(Debug, Clone)]
pub struct GeneratorCheck {
    pub family: char,
    /// The (i, j, k) instantiation, 1-based.
    pub indices: [u8; 3],
    /// Canonical text of the on-shell reduced result.
    pub reduced: String,
    pub zero: bool,
}

const PERMUTATIONS: [[u8; 3]; 6] = [
    [1, 2, 3],
    [1, 3, 2],
    [2, 1, 3],
    [2, 3, 1],
    [3, 1, 2],
    [3, 2, 1],
];

/// Applies the infinitesimal criterion to every family and every index
/// instantiation: prolong, apply, reduce on-shell, test for canonical zero.
pub fn verify_generator(v: &VectorFieldAnsatz) -> Result<Vec<GeneratorCheck>> {
    let pr = prolong_first(v)?;
    let mut out = Vec::with_capacity(36);
    for family in ['A', 'B', 'C', 'D', 'E', 'F'] {
        for [i, j, k] in PERMUTATIONS {
            let eq = equation(family, i, j, k);
            let reduced = on_shell_reduce(&pr.apply(&eq))?;
            out.push(GeneratorCheck {
                family,
                indices: [i, j, k],
                zero: reduced.is_zero(),
                reduced: reduced.to_text(),
            });
        }
    }
    Ok(out)
}

pub fn all_zero(checks: &[GeneratorCheck]) -> bool {
    checks.iter().all(|c| c.zero)
}

/// A symmetry-group element acting on a net.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupAction {
    /// x̃ᵢ = xᵢ + vᵢ.
    Translate([f64; 3]),
    /// x̃ᵢ = λxᵢ, λ ≠ 0.
    DilateX(f64),
    /// l̃ᵢ = ρlᵢ, ρ ≠ 0.
    DilateL(f64),
}

/// Transforms the net by a group element and re-runs the first-order
/// residuals on a fresh grid over the transformed domain.
pub fn group_action_test(
    net: &GuichardNet,
    action: GroupAction,
    grid_counts: [usize; 3],
    tol: f64,
) -> Result<ResidualReport> {
    match action {
        GroupAction::Translate(v) => {
            let t = net.translated(v);
            let grid = t.domain().grid(grid_counts, 0.05);
            first_order_residuals(&t, &grid, tol)
        }
        GroupAction::DilateX(lambda) => {
            let t = net.dilated_x(lambda)?;
            let grid = t.domain().grid(grid_counts, 0.05);
            first_order_residuals(&t, &grid, tol)
        }
        GroupAction::DilateL(rho) => {
            let t = net.dilated_l(rho)?;
            let grid = t.domain().grid(grid_counts, 0.05);
            first_order_residuals(&t, &grid, tol)
        }
    }
}

/// Parses a user ansatz file: one `name = expression` per line, names among
/// `xi1..xi3`, `eta1..eta3`, `phi12..phi32`; unspecified entries default to
/// the built-in scaling generator. Blank lines and `#` comments allowed.
pub fn parse_ansatz(src: &str) -> Result<VectorFieldAnsatz> {
    let mut v = VectorFieldAnsatz::scaling_generator();
    for (lineno, line) in src.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, rhs) = line.split_once('=').ok_or(Error::Parse {
            offset: lineno,
            message: String::from("expected `name = expression`"),
        })?;
        let expr = parse(rhs.trim())?;
        let name = name.trim();
        let target_err = || Error::Parse {
            offset: lineno,
            message: alloc::format!("unknown coefficient `{name}`"),
        };
        if let Some(idx) = name.strip_prefix("xi") {
            let i: usize = idx.parse().map_err(|_| target_err())?;
            if !(1..=3).contains(&i) {
                return Err(target_err());
            }
            v.xi[i - 1] = expr;
        } else if let Some(idx) = name.strip_prefix("eta") {
            let i: usize = idx.parse().map_err(|_| target_err())?;
            if !(1..=3).contains(&i) {
                return Err(target_err());
            }
            v.eta[i - 1] = expr;
        } else if let Some(idx) = name.strip_prefix("phi") {
            if idx.len() != 2 {
                return Err(target_err());
            }
            let i = idx.as_bytes()[0] - b'0';
            let j = idx.as_bytes()[1] - b'0';
            if !(1..=3).contains(&i) || !(1..=3).contains(&j) || i == j {
                return Err(target_err());
            }
            v.phi[(i - 1) as usize][(j - 1) as usize] = expr;
        } else {
            return Err(target_err());
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::translation::{build_translation_family_maximal, TranslationConstants};

    fn elliptic_net() -> GuichardNet {
        let tc = TranslationConstants {
            alpha: [3.0f64.sqrt(), 1.0, 2.0],
            c: [1.0, -1.0, -2.0],
            lambda: -4.0,
            l1_0: 1.0,
            sign_l1prime: 1,
        };
        build_translation_family_maximal(tc, (-10.0, 10.0)).unwrap()
    }

    #[test]
    fn scaling_generator_annihilates_every_family() {
        let checks = verify_generator(&VectorFieldAnsatz::scaling_generator()).unwrap();
        assert_eq!(checks.len(), 36);
        for c in &checks {
            assert!(
                c.zero,
                "family {} {:?} reduced to {}",
                c.family, c.indices, c.reduced
            );
        }
    }

    #[test]
    fn sign_flipped_phi_breaks_family_d() {
        let src = "phi12 = a*h12\nphi13 = a*h13\nphi21 = a*h21\nphi23 = a*h23\nphi31 = a*h31\nphi32 = a*h32";
        let v = parse_ansatz(src).unwrap();
        let checks = verify_generator(&v).unwrap();
        let d_failures: Vec<_> = checks
            .iter()
            .filter(|c| c.family == 'D' && !c.zero)
            .collect();
        assert!(!d_failures.is_empty());
    }

    #[test]
    fn affine_eta_shift_breaks_family_c() {
        let src = "eta1 = c*l1 + 1\neta2 = c*l2 + 1\neta3 = c*l3 + 1";
        let v = parse_ansatz(src).unwrap();
        let checks = verify_generator(&v).unwrap();
        for c in checks.iter().filter(|c| c.family == 'C') {
            assert!(!c.zero, "expected nonzero C residual, got zero");
        }
        // Families untouched by eta still vanish.
        for c in checks.iter().filter(|c| c.family == 'D') {
            assert!(c.zero);
        }
    }

    #[test]
    fn group_actions_preserve_solutions() {
        let net = elliptic_net();
        let rep = group_action_test(
            &net,
            GroupAction::Translate([1.0, -2.0, 0.5]),
            [5, 5, 5],
            1e-8,
        )
        .unwrap();
        assert!(rep.pass(), "translate: {rep:?}");

        let rep = group_action_test(&net, GroupAction::DilateX(3.0), [5, 5, 5], 1e-8).unwrap();
        assert!(rep.pass(), "dilate_x: {rep:?}");

        let rep = group_action_test(&net, GroupAction::DilateL(2.0), [5, 5, 5], 1e-8).unwrap();
        assert!(rep.pass(), "dilate_l: {rep:?}");
    }

    #[test]
    fn zero_factor_actions_are_rejected() {
        let net = elliptic_net();
        assert!(group_action_test(&net, GroupAction::DilateX(0.0), [3, 3, 3], 1e-8).is_err());
        assert!(group_action_test(&net, GroupAction::DilateL(0.0), [3, 3, 3], 1e-8).is_err());
    }

    #[test]
    fn numeric_soundness_of_the_reduction() {
        // Instantiate all atoms consistently with the on-shell relations by
        // sampling a verified net; every expression that reduces to zero
        // must then evaluate near zero numerically. For a translation net
        // the h-jets have the exact closed form
        // h_{ij,x_k} = αⱼ αₖ cᵢ cₘ l_p l_q with m the third index of (i, j).
        use crate::net::HMatrix;
        use crate::rng::SplitMix64;

        let net = elliptic_net();
        let t = net.translation().unwrap();
        let alpha = t.alpha();
        let cc = t.effective_c();
        let mut rng = SplitMix64::new(0xabcdef);
        let pr = prolong_first(&VectorFieldAnsatz::scaling_generator()).unwrap();
        let d = net.domain();
        for trial in 0..20 {
            let p = [0, 1, 2].map(|i| d.lo[i] + (d.hi[i] - d.lo[i]) * (0.1 + 0.8 * rng.next_f64()));
            let s = net.sample(p).unwrap();
            let hm = HMatrix::from_sample(&s, p).unwrap().h;
            let mut dh = [[[0.0; 3]; 3]; 3];
            for i in 0..3usize {
                for j in 0..3usize {
                    if i == j {
                        continue;
                    }
                    let m = 3 - i - j;
                    let (pp, qq) = match m {
                        0 => (1, 2),
                        1 => (0, 2),
                        _ => (0, 1),
                    };
                    for k in 0..3usize {
                        dh[i][j][k] = alpha[j] * alpha[k] * cc[i] * cc[m] * s.l[pp] * s.l[qq];
                    }
                }
            }
            let params = [rng.next_range(-2.0, 2.0), rng.next_range(-2.0, 2.0)];
            let shifts = [0, 1, 2].map(|_| rng.next_range(-2.0, 2.0));
            let env = |a: Atom| -> f64 {
                match a {
                    Atom::X(i) => p[i as usize - 1],
                    Atom::L(i) => s.l[i as usize - 1],
                    Atom::H(i, j) => hm[i as usize - 1][j as usize - 1],
                    Atom::LJet(i, k) => s.dl[i as usize - 1][k as usize - 1],
                    Atom::HJet(i, j, k) => dh[i as usize - 1][j as usize - 1][k as usize - 1],
                    Atom::ParamA => params[0],
                    Atom::ParamC => params[1],
                    Atom::ParamShift(i) => shifts[i as usize - 1],
                }
            };
            for family in ['A', 'B', 'C', 'D', 'E', 'F'] {
                let eq = equation(family, 1, 2, 3);
                let applied = pr.apply(&eq);
                let reduced = on_shell_reduce(&applied).unwrap();
                if reduced.is_zero() {
                    let v = applied.eval(&env);
                    assert!(
                        v.abs() < 1e-10,
                        "trial {trial} family {family}: applied field evaluates to {v}"
                    );
                }
            }
        }
    }

    #[test]
    fn ansatz_parser_rejects_bad_targets() {
        assert!(parse_ansatz("phi11 = a*h12").is_err());
        assert!(parse_ansatz("zeta1 = x1").is_err());
        assert!(parse_ansatz("xi1 x1").is_err());
    }
}
