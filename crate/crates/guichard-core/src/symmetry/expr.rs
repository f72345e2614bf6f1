//! Exact-rational expressions in canonical form.
//!
//! An expression is an expanded multivariate polynomial over the atoms with
//! `BigRational` coefficients, divided by a monomial in l₁, l₂, l₃. Equal
//! expressions normalize to identical representations and zero normalizes to
//! the empty polynomial, so zero-testing is exact. Monomials are kept sorted
//! by the fixed total order on [`Atom`].

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::math;
use crate::symmetry::atom::Atom;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Sorted power product of atoms; exponents are strictly positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom(a: Atom) -> Self {
        Monomial(alloc::vec![(a, 1)])
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                core::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn degree_of(&self, a: Atom) -> u32 {
        self.0
            .iter()
            .find(|(at, _)| *at == a)
            .map_or(0, |(_, e)| *e)
    }

    /// Splits off one atom entirely: `(rest, exponent)`.
    pub fn without(&self, a: Atom) -> (Monomial, u32) {
        let mut rest = Vec::with_capacity(self.0.len());
        let mut exp = 0;
        for &(at, e) in &self.0 {
            if at == a {
                exp = e;
            } else {
                rest.push((at, e));
            }
        }
        (Monomial(rest), exp)
    }

    /// Replaces the exponent of `a` (0 removes it).
    fn with_degree(&self, a: Atom, e: u32) -> Monomial {
        let (rest, _) = self.without(a);
        if e == 0 {
            rest
        } else {
            rest.mul(&Monomial(alloc::vec![(a, e)]))
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = (Atom, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }
}

/// Canonical expression: expanded polynomial numerator over a monomial
/// denominator in l₁, l₂, l₃ (exponents `den[i]` for `L(i+1)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expression {
    num: BTreeMap<Monomial, Rat>,
    den: [u32; 3],
}

impl Expression {
    pub fn zero() -> Self {
        Expression {
            num: BTreeMap::new(),
            den: [0; 3],
        }
    }

    pub fn one() -> Self {
        Expression::from_rat(Rat::one())
    }

    pub fn from_int(n: i64) -> Self {
        Expression::from_rat(rat(n))
    }

    pub fn from_rat(r: Rat) -> Self {
        let mut num = BTreeMap::new();
        if !r.is_zero() {
            num.insert(Monomial::one(), r);
        }
        Expression { num, den: [0; 3] }
    }

    pub fn atom(a: Atom) -> Self {
        let mut num = BTreeMap::new();
        num.insert(Monomial::atom(a), Rat::one());
        Expression { num, den: [0; 3] }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn contains_jet(&self) -> bool {
        self.num.keys().any(|m| m.atoms().any(|(a, _)| a.is_jet()))
    }

    pub fn jet_atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        for m in self.num.keys() {
            for (a, _) in m.atoms() {
                if a.is_jet() && !out.contains(&a) {
                    out.push(a);
                }
            }
        }
        out
    }

    fn insert_term(map: &mut BTreeMap<Monomial, Rat>, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match map.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    map.remove(&m);
                }
            }
            None => {
                map.insert(m, c);
            }
        }
    }

    /// Strips l-powers common to the whole numerator and the denominator.
    fn reduce(mut self) -> Self {
        if self.num.is_empty() {
            self.den = [0; 3];
            return self;
        }
        for i in 0..3 {
            if self.den[i] == 0 {
                continue;
            }
            let a = Atom::L(i as u8 + 1);
            let common = self
                .num
                .keys()
                .map(|m| m.degree_of(a))
                .min()
                .unwrap_or(0)
                .min(self.den[i]);
            if common > 0 {
                let mut next = BTreeMap::new();
                for (m, c) in core::mem::take(&mut self.num) {
                    let e = m.degree_of(a);
                    next.insert(m.with_degree(a, e - common), c);
                }
                self.num = next;
                self.den[i] -= common;
            }
        }
        self
    }

    pub fn add(&self, other: &Expression) -> Expression {
        let den = [0, 1, 2].map(|i| math::max(self.den[i] as f64, other.den[i] as f64) as u32);
        let lift = |e: &Expression, den: &[u32; 3]| -> BTreeMap<Monomial, Rat> {
            let mut extra = Monomial::one();
            for i in 0..3 {
                let gap = den[i] - e.den[i];
                if gap > 0 {
                    extra = extra.mul(&Monomial(alloc::vec![(Atom::L(i as u8 + 1), gap)]));
                }
            }
            let mut out = BTreeMap::new();
            for (m, c) in &e.num {
                Self::insert_term(&mut out, m.mul(&extra), c.clone());
            }
            out
        };
        let mut num = lift(self, &den);
        for (m, c) in lift(other, &den) {
            Self::insert_term(&mut num, m, c);
        }
        Expression { num, den }.reduce()
    }

    pub fn neg(&self) -> Expression {
        Expression {
            num: self
                .num
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
            den: self.den,
        }
    }

    pub fn sub(&self, other: &Expression) -> Expression {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Expression) -> Expression {
        let mut num = BTreeMap::new();
        for (m1, c1) in &self.num {
            for (m2, c2) in &other.num {
                Self::insert_term(&mut num, m1.mul(m2), c1 * c2);
            }
        }
        let den = [0, 1, 2].map(|i| self.den[i] + other.den[i]);
        Expression { num, den }.reduce()
    }

    pub fn scale(&self, r: &Rat) -> Expression {
        if r.is_zero() {
            return Expression::zero();
        }
        Expression {
            num: self.num.iter().map(|(m, c)| (m.clone(), c * r)).collect(),
            den: self.den,
        }
    }

    pub fn pow(&self, n: u32) -> Expression {
        let mut acc = Expression::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Division; the divisor must normalize to a rational multiple of a
    /// monomial in l₁, l₂, l₃.
    pub fn div(&self, other: &Expression) -> Result<Expression> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if other.num.len() != 1 {
            return Err(Error::NonMonomialDenominator);
        }
        let (mono, coeff) = other.num.iter().next().unwrap();
        let mut l_pows = [0u32; 3];
        for (a, e) in mono.atoms() {
            match a {
                Atom::L(i) => l_pows[i as usize - 1] = e,
                _ => return Err(Error::NonMonomialDenominator),
            }
        }
        // self / (coeff · l^pows / l^other.den) = self · l^other.den / (coeff · l^pows)
        let mut lifted = Monomial::one();
        for i in 0..3 {
            if other.den[i] > 0 {
                lifted = lifted.mul(&Monomial(alloc::vec![(Atom::L(i as u8 + 1), other.den[i])]));
            }
        }
        let inv = Rat::one() / coeff.clone();
        let mut num = BTreeMap::new();
        for (m, c) in &self.num {
            Self::insert_term(&mut num, m.mul(&lifted), c * &inv);
        }
        let den = [0, 1, 2].map(|i| self.den[i] + l_pows[i]);
        Ok(Expression { num, den }.reduce())
    }

    /// Formal partial derivative treating all atoms as independent.
    pub fn differentiate(&self, a: Atom) -> Expression {
        // d(num/l^d) = (num' · l − d·num)/l^{d+1} when a is one of the l's.
        let mut dnum = BTreeMap::new();
        for (m, c) in &self.num {
            let e = m.degree_of(a);
            if e > 0 {
                let dm = m.with_degree(a, e - 1);
                Self::insert_term(&mut dnum, dm, c * rat(e as i64));
            }
        }
        let derived = Expression {
            num: dnum,
            den: self.den,
        }
        .reduce();
        if let Atom::L(i) = a {
            let d = self.den[i as usize - 1];
            if d > 0 {
                // num'/l^den − d·num/(l^den·l)
                let correction = Expression {
                    num: self.num.clone(),
                    den: {
                        let mut den = self.den;
                        den[i as usize - 1] += 1;
                        den
                    },
                }
                .scale(&rat(-(d as i64)));
                return derived.add(&correction);
            }
        }
        derived
    }

    /// Substitutes an atom by an expression, everywhere.
    pub fn substitute_atom(&self, a: Atom, replacement: &Expression) -> Expression {
        let mut out = Expression::zero();
        for (m, c) in &self.num {
            let (rest, e) = m.without(a);
            let mut term = Expression {
                num: {
                    let mut one = BTreeMap::new();
                    one.insert(rest, c.clone());
                    one
                },
                den: [0; 3],
            };
            if e > 0 {
                term = term.mul(&replacement.pow(e));
            }
            out = out.add(&term);
        }
        let mut den_expr = Expression::one();
        for i in 0..3 {
            if self.den[i] > 0 {
                den_expr = den_expr.mul(&Expression::atom(Atom::L(i as u8 + 1)).pow(self.den[i]));
            }
        }
        // Denominators only hold l's, which are never substituted here.
        out.div(&den_expr).expect("monomial denominator")
    }

    /// Directed rewrite `l₃² → l₂² − l₁²` on the numerator, to fixpoint.
    pub fn guichard_rewrite(&self) -> Expression {
        let l3 = Atom::L(3);
        let replacement = Expression::atom(Atom::L(2))
            .pow(2)
            .sub(&Expression::atom(Atom::L(1)).pow(2));
        let mut out = Expression::zero();
        for (m, c) in &self.num {
            let e3 = m.degree_of(l3);
            let (q, r) = (e3 / 2, e3 % 2);
            let mut term = Expression {
                num: {
                    let mut one = BTreeMap::new();
                    one.insert(m.with_degree(l3, r), c.clone());
                    one
                },
                den: [0; 3],
            };
            if q > 0 {
                term = term.mul(&replacement.pow(q));
            }
            out = out.add(&term);
        }
        out.den = [0, 1, 2].map(|i| out.den[i] + self.den[i]);
        out.reduce()
    }

    /// Numeric evaluation under an atom assignment.
    pub fn eval(&self, env: &impl Fn(Atom) -> f64) -> f64 {
        let mut total = 0.0;
        for (m, c) in &self.num {
            let mut v = c.to_f64().unwrap_or(f64::NAN);
            for (a, e) in m.atoms() {
                v *= math::powi(env(a), e as i32);
            }
            total += v;
        }
        for i in 0..3 {
            if self.den[i] > 0 {
                total /= math::powi(env(Atom::L(i as u8 + 1)), self.den[i] as i32);
            }
        }
        total
    }

    /// Canonical text; `parse` of this string reproduces the expression.
    pub fn to_text(&self) -> String {
        if self.num.is_empty() {
            return String::from("0");
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.num.iter().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c.clone() } else { c.clone() };
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let coeff_is_one = mag.is_one();
            if !coeff_is_one || m.is_one() {
                s.push_str(&alloc::format!("{mag}"));
                if !m.is_one() {
                    s.push('*');
                }
            }
            let mut first = true;
            for (a, e) in m.atoms() {
                if !first {
                    s.push('*');
                }
                first = false;
                s.push_str(&a.name());
                if e > 1 {
                    s.push_str(&alloc::format!("^{e}"));
                }
            }
        }
        if self.den != [0; 3] {
            let mut d = String::new();
            let mut first = true;
            for i in 0..3 {
                if self.den[i] > 0 {
                    if !first {
                        d.push('*');
                    }
                    first = false;
                    d.push_str(&alloc::format!("l{}", i + 1));
                    if self.den[i] > 1 {
                        d.push_str(&alloc::format!("^{}", self.den[i]));
                    }
                }
            }
            return alloc::format!("({s})/({d})");
        }
        s
    }
}

impl core::fmt::Display for Expression {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Default for Expression {
    fn default() -> Self {
        Expression::zero()
    }
}
