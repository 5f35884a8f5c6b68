//! Multisections `Γ(Λ^• A)` and their Schouten bracket.

use std::collections::BTreeMap;
use std::fmt;

use super::ChartAlgebroid;
use crate::graded::{mask, Mask};
use crate::scalar::Scalar;
use crate::symcore::{Polynomial, Vars};

#[derive(Clone, PartialEq)]
pub struct Multivector<S> {
    vars: Vars,
    rank: usize,
    terms: BTreeMap<Mask, Polynomial<S>>,
}

impl<S: Scalar> Multivector<S> {
    pub fn zero(vars: &Vars, rank: usize) -> Self {
        Multivector {
            vars: vars.clone(),
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn function(rank: usize, f: &Polynomial<S>) -> Self {
        let mut out = Self::zero(f.vars(), rank);
        out.add_term(0, f);
        out
    }

    /// `f e_I`
    pub fn monomial(vars: &Vars, rank: usize, m: Mask, f: &Polynomial<S>) -> Self {
        let mut out = Self::zero(vars, rank);
        out.add_term(m, f);
        out
    }

    pub fn basis(vars: &Vars, rank: usize, idx: &[usize]) -> Self {
        let mut out = Self::zero(vars, rank);
        if let Some((m, odd)) = mask::sort_sign(idx) {
            out.add_signed(m, &Polynomial::one(vars), odd);
        }
        out
    }

    pub fn section(vars: &Vars, s: &[Polynomial<S>]) -> Self {
        let mut out = Self::zero(vars, s.len());
        for (i, f) in s.iter().enumerate() {
            out.add_term(mask::single(i), f);
        }
        out
    }

    pub fn add_term(&mut self, m: Mask, f: &Polynomial<S>) {
        self.add_signed(m, f, false);
    }

    pub fn add_signed(&mut self, m: Mask, f: &Polynomial<S>, negate: bool) {
        if f.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(|| Polynomial::zero(&self.vars));
        if negate {
            *entry -= f;
        } else {
            *entry += f;
        }
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mask, &Polynomial<S>)> {
        self.terms.iter().map(|(m, f)| (*m, f))
    }

    pub fn coefficient(&self, m: Mask) -> Polynomial<S> {
        self.terms.get(&m).cloned().unwrap_or_else(|| Polynomial::zero(&self.vars))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Degree of a homogeneous element, `None` for zero or mixed degree.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|&m| mask::len(m));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(&self.vars, self.rank);
        for (m, f) in self.terms() {
            out.add_term(m, &f.scale(c));
        }
        out
    }

    pub fn mul_poly(&self, g: &Polynomial<S>) -> Self {
        let mut out = Self::zero(&self.vars, self.rank);
        for (m, f) in self.terms() {
            out.add_term(m, &(f * g));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, f) in other.terms() {
            out.add_term(m, f);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, f) in other.terms() {
            out.add_signed(m, f, true);
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.vars, self.rank);
        for (a, f) in self.terms() {
            for (b, g) in other.terms() {
                if let Some((m, odd)) = mask::wedge(a, b) {
                    out.add_signed(m, &(f * g), odd);
                }
            }
        }
        out
    }
}

/// `[e_I, g] = Σ_k (-1)^{p-k} ρ(e_{i_k})(g) e_{I∖i_k}` (positions from 1).
fn bracket_basis_function<S: Scalar>(alg: &ChartAlgebroid<S>, m: Mask, g: &Polynomial<S>) -> Multivector<S> {
    let p = mask::len(m);
    let mut out = Multivector::zero(alg.vars(), alg.rank());
    for (pos, i) in mask::indices(m).enumerate() {
        let k = pos + 1;
        out.add_signed(m & !mask::single(i), &alg.rho_basis_apply(i, g), (p - k) % 2 == 1);
    }
    out
}

/// `[e_I, e_J] = Σ_{a,b} (-1)^{a+b} [e_{i_a}, e_{j_b}] ∧ e_{I∖i_a} ∧ e_{J∖j_b}`
fn bracket_basis<S: Scalar>(alg: &ChartAlgebroid<S>, mi: Mask, mj: Mask) -> Multivector<S> {
    let vars = alg.vars();
    let rank = alg.rank();
    let one = Polynomial::one(vars);
    let mut out = Multivector::zero(vars, rank);
    for (a, i) in mask::indices(mi).enumerate() {
        for (b, j) in mask::indices(mj).enumerate() {
            let br = Multivector::section(vars, &alg.bracket(&alg.basis(i), &alg.basis(j)));
            let rest = Multivector::monomial(vars, rank, mi & !mask::single(i), &one)
                .wedge(&Multivector::monomial(vars, rank, mj & !mask::single(j), &one));
            let term = br.wedge(&rest);
            if (a + b) % 2 == 1 {
                out = out.sub(&term);
            } else {
                out = out.add(&term);
            }
        }
    }
    out
}

/// The Schouten bracket `[P, Q]` of multisections, extended from
/// `[f e_I, g e_J] = fg[e_I,e_J] + f[e_I,g]∧e_J - (-1)^{(p-1)(q-1)} g[e_J,f]∧e_I`.
pub fn schouten<S: Scalar>(alg: &ChartAlgebroid<S>, p: &Multivector<S>, q: &Multivector<S>) -> Multivector<S> {
    let vars = alg.vars();
    let rank = alg.rank();
    let one = Polynomial::one(vars);
    let mut out = Multivector::zero(vars, rank);
    for (mi, f) in p.terms() {
        for (mj, g) in q.terms() {
            let (dp, dq) = (mask::len(mi), mask::len(mj));
            let ei = Multivector::monomial(vars, rank, mi, &one);
            let ej = Multivector::monomial(vars, rank, mj, &one);
            let t1 = bracket_basis(alg, mi, mj).mul_poly(&(f * g));
            let t2 = bracket_basis_function(alg, mi, g).wedge(&ej).mul_poly(f);
            let t3 = bracket_basis_function(alg, mj, f).wedge(&ei).mul_poly(g);
            let odd = ((dp as i64 - 1) * (dq as i64 - 1)).rem_euclid(2) == 1;
            out = out.add(&t1).add(&t2);
            out = if odd { out.add(&t3) } else { out.sub(&t3) };
        }
    }
    out
}

impl<S: Scalar> fmt::Display for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(m, c)| {
                if m == 0 {
                    format!("({c})")
                } else {
                    let e: Vec<String> = mask::indices(m).map(|i| format!("e{}", i + 1)).collect();
                    format!("({c})*{}", e.join("∧"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<S: Scalar> fmt::Debug for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
