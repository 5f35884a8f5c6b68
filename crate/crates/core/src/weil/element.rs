use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use crate::graded::{mask, Mask};
use crate::scalar::Scalar;
use crate::symcore::{Polynomial, Vars};

/// `∂^A θ^I μ^α`, always stored in this order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeilMonomial {
    pub dx: Mask,
    pub theta: Mask,
    pub mu: Vec<u32>,
}

impl WeilMonomial {
    pub fn one(rank: usize) -> Self {
        WeilMonomial {
            dx: 0,
            theta: 0,
            mu: vec![0; rank],
        }
    }

    pub fn mu_degree(&self) -> usize {
        self.mu.iter().map(|&e| e as usize).sum()
    }

    /// `u + 2v + w`
    pub fn total_degree(&self) -> usize {
        mask::len(self.dx) + mask::len(self.theta) + 2 * self.mu_degree()
    }

    /// `(p, q) = (v + w, u + v)`
    pub fn bidegree(&self) -> (usize, usize) {
        let v = self.mu_degree();
        (mask::len(self.theta) + v, mask::len(self.dx) + v)
    }

    fn odd(&self) -> bool {
        (mask::len(self.dx) + mask::len(self.theta)) % 2 == 1
    }

    /// Product with its sign, `None` if it vanishes.
    pub fn mul(&self, other: &Self) -> Option<(Self, bool)> {
        let (dx, s1) = mask::wedge(self.dx, other.dx)?;
        let (theta, s2) = mask::wedge(self.theta, other.theta)?;
        let cross = mask::len(self.theta) * mask::len(other.dx) % 2 == 1;
        let mu = self.mu.iter().zip(&other.mu).map(|(a, b)| a + b).collect();
        Some((WeilMonomial { dx, theta, mu }, s1 ^ s2 ^ cross))
    }
}

/// An element of the Weil algebra over a chart: polynomial coefficients on
/// monomials in `∂^a` (bidegree (0,1)), `θ^i` (1,0) and `μ^i` (1,1).
#[derive(Clone, PartialEq)]
pub struct WeilElement<S> {
    vars: Vars,
    rank: usize,
    terms: BTreeMap<WeilMonomial, Polynomial<S>>,
}

impl<S: Scalar> WeilElement<S> {
    pub fn zero(vars: &Vars, rank: usize) -> Self {
        WeilElement {
            vars: vars.clone(),
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn function(vars: &Vars, rank: usize, f: &Polynomial<S>) -> Self {
        let mut out = Self::zero(vars, rank);
        out.add_term(WeilMonomial::one(rank), f);
        out
    }

    pub fn one(vars: &Vars, rank: usize) -> Self {
        Self::function(vars, rank, &Polynomial::one(vars))
    }

    pub fn monomial(vars: &Vars, m: WeilMonomial, f: &Polynomial<S>) -> Self {
        let mut out = Self::zero(vars, m.mu.len());
        out.add_term(m, f);
        out
    }

    pub fn dx(vars: &Vars, rank: usize, a: usize) -> Self {
        let mut m = WeilMonomial::one(rank);
        m.dx = mask::single(a);
        Self::monomial(vars, m, &Polynomial::one(vars))
    }

    pub fn theta(vars: &Vars, rank: usize, i: usize) -> Self {
        let mut m = WeilMonomial::one(rank);
        m.theta = mask::single(i);
        Self::monomial(vars, m, &Polynomial::one(vars))
    }

    pub fn mu(vars: &Vars, rank: usize, i: usize) -> Self {
        let mut m = WeilMonomial::one(rank);
        m.mu[i] = 1;
        Self::monomial(vars, m, &Polynomial::one(vars))
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn add_term(&mut self, m: WeilMonomial, f: &Polynomial<S>) {
        self.add_signed(m, f, false);
    }

    pub fn add_signed(&mut self, m: WeilMonomial, f: &Polynomial<S>, negate: bool) {
        if f.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(if negate { -f } else { f.clone() });
            }
            Entry::Occupied(mut o) => {
                if negate {
                    *o.get_mut() -= f;
                } else {
                    *o.get_mut() += f;
                }
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeilMonomial, &Polynomial<S>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &WeilMonomial) -> Polynomial<S> {
        self.terms.get(m).cloned().unwrap_or_else(|| Polynomial::zero(&self.vars))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.vars, self.rank);
        for (m, f) in &self.terms {
            for (n, g) in &other.terms {
                if let Some((k, odd)) = m.mul(n) {
                    out.add_signed(k, &(f * g), odd);
                }
            }
        }
        out
    }

    pub fn mul_poly(&self, g: &Polynomial<S>) -> Self {
        let mut out = Self::zero(&self.vars, self.rank);
        for (m, f) in &self.terms {
            out.add_term(m.clone(), &(f * g));
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(&self.vars, self.rank);
        for (m, f) in &self.terms {
            out.add_term(m.clone(), &f.scale(c));
        }
        out
    }

    /// Set of `(p, q)` bidegrees of the terms.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self.terms.keys().map(WeilMonomial::bidegree).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Parity of a homogeneous element; `None` for zero or mixed parity.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(WeilMonomial::odd);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    fn format_monomial(&self, m: &WeilMonomial) -> String {
        let mut parts: Vec<String> = mask::indices(m.dx).map(|a| format!("d{}", self.vars[a])).collect();
        parts.extend(mask::indices(m.theta).map(|i| format!("θ{}", i + 1)));
        for (i, &e) in m.mu.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("μ{}", i + 1)),
                _ => parts.push(format!("μ{}^{e}", i + 1)),
            }
        }
        parts.join("∧")
    }
}

impl<S: Scalar> fmt::Display for WeilElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            let word = self.format_monomial(m);
            if !word.is_empty() {
                write!(f, "*{word}")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for WeilElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weil({self})")
    }
}

impl<'a, S: Scalar> AddAssign<&'a WeilElement<S>> for WeilElement<S> {
    fn add_assign(&mut self, rhs: &'a WeilElement<S>) {
        for (m, f) in &rhs.terms {
            self.add_term(m.clone(), f);
        }
    }
}

impl<'a, S: Scalar> SubAssign<&'a WeilElement<S>> for WeilElement<S> {
    fn sub_assign(&mut self, rhs: &'a WeilElement<S>) {
        for (m, f) in &rhs.terms {
            self.add_signed(m.clone(), f, true);
        }
    }
}

impl<S: Scalar> Add for &WeilElement<S> {
    type Output = WeilElement<S>;
    fn add(self, rhs: Self) -> WeilElement<S> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<S: Scalar> Sub for &WeilElement<S> {
    type Output = WeilElement<S>;
    fn sub(self, rhs: Self) -> WeilElement<S> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<S: Scalar> Neg for &WeilElement<S> {
    type Output = WeilElement<S>;
    fn neg(self) -> WeilElement<S> {
        self.scale(&-S::one())
    }
}
