//! Free graded-commutative algebras over the polynomial ring, and derivations
//! given by their values on generators.
//!
//! Odd generators are stored as a bitmask in declaration order, even
//! generators as an exponent vector written after them. Only odd generators
//! produce signs.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::mask::{self, product_sign};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::symcore::{Polynomial, Vars};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcGenerator {
    pub name: String,
    pub bidegree: (i32, i32),
}

impl GcGenerator {
    pub fn new(name: impl Into<String>, bidegree: (i32, i32)) -> Self {
        GcGenerator {
            name: name.into(),
            bidegree,
        }
    }

    pub fn degree(&self) -> i32 {
        self.bidegree.0 + self.bidegree.1
    }

    pub fn is_odd(&self) -> bool {
        self.degree().rem_euclid(2) == 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GenRef {
    Odd(usize),
    Even(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcAlgebra {
    odd: Vec<GcGenerator>,
    even: Vec<GcGenerator>,
}

impl GcAlgebra {
    /// Generators keep their relative order within each parity.
    pub fn new(gens: Vec<GcGenerator>) -> Result<Self> {
        let (odd, even): (Vec<_>, Vec<_>) = gens.into_iter().partition(GcGenerator::is_odd);
        if odd.len() > 64 {
            return Err(Error::Invalid(format!("{} odd generators (at most 64)", odd.len())));
        }
        let mut names: Vec<&str> = odd.iter().chain(&even).map(|g| g.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("duplicate generator names".into()));
        }
        Ok(GcAlgebra { odd, even })
    }

    pub fn num_odd(&self) -> usize {
        self.odd.len()
    }

    pub fn num_even(&self) -> usize {
        self.even.len()
    }

    pub fn generator(&self, g: GenRef) -> &GcGenerator {
        match g {
            GenRef::Odd(i) => &self.odd[i],
            GenRef::Even(i) => &self.even[i],
        }
    }

    pub fn generators(&self) -> impl Iterator<Item = GenRef> + '_ {
        (0..self.odd.len())
            .map(GenRef::Odd)
            .chain((0..self.even.len()).map(GenRef::Even))
    }

    pub fn find(&self, name: &str) -> Option<GenRef> {
        self.generators().find(|&g| self.generator(g).name == name)
    }

    pub fn monomial_bidegree(&self, m: &GcMonomial) -> (i32, i32) {
        let mut p = 0;
        let mut q = 0;
        for i in mask::indices64(m.odd) {
            p += self.odd[i].bidegree.0;
            q += self.odd[i].bidegree.1;
        }
        for (g, &e) in self.even.iter().zip(&m.even) {
            p += g.bidegree.0 * e as i32;
            q += g.bidegree.1 * e as i32;
        }
        (p, q)
    }

    pub fn monomial_degree(&self, m: &GcMonomial) -> i32 {
        let (p, q) = self.monomial_bidegree(m);
        p + q
    }

    /// All monomials of total degree `n`. Every even generator must have
    /// positive degree and every odd generator nonnegative degree, otherwise
    /// the graded piece is infinite.
    pub fn basis_in_degree(&self, n: i32) -> Result<Vec<GcMonomial>> {
        if self.even.iter().any(|g| g.degree() <= 0) || self.odd.iter().any(|g| g.degree() < 0) {
            return Err(Error::UnsupportedBase(
                "graded pieces are infinite-dimensional for these generator degrees".into(),
            ));
        }
        if self.odd.len() > 24 {
            return Err(Error::Invalid("too many odd generators to enumerate".into()));
        }
        let mut out = Vec::new();
        for odd in 0..(1u64 << self.odd.len()) {
            let d: i32 = mask::indices64(odd).map(|i| self.odd[i].degree()).sum();
            if d > n {
                continue;
            }
            let mut exps = vec![0u32; self.even.len()];
            self.fill_even(0, n - d, &mut exps, odd, &mut out);
        }
        out.sort();
        Ok(out)
    }

    fn fill_even(&self, k: usize, left: i32, exps: &mut Vec<u32>, odd: u64, out: &mut Vec<GcMonomial>) {
        if k == self.even.len() {
            if left == 0 {
                out.push(GcMonomial { odd, even: exps.clone() });
            }
            return;
        }
        let d = self.even[k].degree();
        let mut e = 0;
        while e * d <= left {
            exps[k] = e as u32;
            self.fill_even(k + 1, left - e * d, exps, odd, out);
            e += 1;
        }
        exps[k] = 0;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GcMonomial {
    pub odd: u64,
    pub even: Vec<u32>,
}

impl GcMonomial {
    pub fn one(alg: &GcAlgebra) -> Self {
        GcMonomial {
            odd: 0,
            even: vec![0; alg.num_even()],
        }
    }

    pub fn generator(alg: &GcAlgebra, g: GenRef) -> Self {
        let mut m = Self::one(alg);
        match g {
            GenRef::Odd(i) => m.odd = 1 << i,
            GenRef::Even(i) => m.even[i] = 1,
        }
        m
    }

    /// Product and its sign; `None` if it vanishes.
    pub fn mul(&self, other: &GcMonomial) -> Option<(GcMonomial, bool)> {
        let odd = product_sign(self.odd, other.odd)?;
        Some((
            GcMonomial {
                odd: self.odd | other.odd,
                even: self.even.iter().zip(&other.even).map(|(a, b)| a + b).collect(),
            },
            odd,
        ))
    }
}

#[derive(Clone, PartialEq)]
pub struct GcElement<S> {
    vars: Vars,
    alg: Arc<GcAlgebra>,
    terms: BTreeMap<GcMonomial, Polynomial<S>>,
}

impl<S: Scalar> GcElement<S> {
    pub fn zero(vars: &Vars, alg: &Arc<GcAlgebra>) -> Self {
        GcElement {
            vars: vars.clone(),
            alg: alg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn function(alg: &Arc<GcAlgebra>, f: &Polynomial<S>) -> Self {
        Self::monomial(alg, GcMonomial::one(alg), f.clone())
    }

    pub fn one(vars: &Vars, alg: &Arc<GcAlgebra>) -> Self {
        Self::function(alg, &Polynomial::one(vars))
    }

    pub fn generator(vars: &Vars, alg: &Arc<GcAlgebra>, g: GenRef) -> Self {
        Self::monomial(alg, GcMonomial::generator(alg, g), Polynomial::one(vars))
    }

    pub fn monomial(alg: &Arc<GcAlgebra>, m: GcMonomial, coeff: Polynomial<S>) -> Self {
        let mut out = Self::zero(coeff.vars(), alg);
        out.add_term(m, &coeff, false);
        out
    }

    pub fn add_term(&mut self, m: GcMonomial, coeff: &Polynomial<S>, negate: bool) {
        if coeff.is_zero() {
            return;
        }
        let c = if negate { -coeff } else { coeff.clone() };
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn algebra(&self) -> &Arc<GcAlgebra> {
        &self.alg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GcMonomial, &Polynomial<S>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &GcMonomial) -> Polynomial<S> {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(&self.vars))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree if nonzero and homogeneous.
    pub fn total_degree(&self) -> Option<i32> {
        let mut it = self.terms.keys().map(|m| self.alg.monomial_degree(m));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Bidegrees occurring in the element.
    pub fn bidegrees(&self) -> Vec<(i32, i32)> {
        let mut out: Vec<_> = self.terms.keys().map(|m| self.alg.monomial_bidegree(m)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c, false);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c, true);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self::zero(&self.vars, &self.alg).sub(self)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert!(self.alg == other.alg, "elements of different algebras");
        let mut out = Self::zero(&self.vars, &self.alg);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, odd)) = ma.mul(mb) {
                    out.add_term(m, &(ca * cb), odd);
                }
            }
        }
        out
    }

    pub fn mul_poly(&self, f: &Polynomial<S>) -> Self {
        let mut out = Self::zero(&self.vars, &self.alg);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &(f * c), false);
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        self.mul_poly(&Polynomial::constant(&self.vars, c.clone()))
    }
}

impl<S: Scalar> fmt::Display for GcElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for i in mask::indices64(m.odd) {
                write!(f, "*{}", self.alg.odd[i].name)?;
            }
            for (g, &e) in self.alg.even.iter().zip(&m.even) {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", g.name)?,
                    _ => write!(f, "*{}^{e}", g.name)?,
                }
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for GcElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gc({self})")
    }
}

/// A derivation of fixed degree, determined by its values on generators and
/// on coordinate functions. The Leibniz rule is
/// `d(xy) = d(x)y + (-1)^{|d||x|} x d(y)`, and `d(f) = Σ_a ∂_a f · d(x^a)`.
#[derive(Clone, PartialEq)]
pub struct Derivation<S> {
    alg: Arc<GcAlgebra>,
    degree: i32,
    odd_images: Vec<GcElement<S>>,
    even_images: Vec<GcElement<S>>,
    coord_images: Vec<GcElement<S>>,
}

impl<S: Scalar> Derivation<S> {
    pub fn new(
        alg: &Arc<GcAlgebra>,
        degree: i32,
        odd_images: Vec<GcElement<S>>,
        even_images: Vec<GcElement<S>>,
        coord_images: Vec<GcElement<S>>,
    ) -> Result<Self> {
        if odd_images.len() != alg.num_odd() || even_images.len() != alg.num_even() {
            return Err(Error::Shape {
                block: "derivation table".into(),
                msg: "one image per generator is required".into(),
            });
        }
        let named = odd_images
            .iter()
            .enumerate()
            .map(|(i, x)| (alg.odd[i].name.clone(), alg.odd[i].degree(), x))
            .chain(
                even_images
                    .iter()
                    .enumerate()
                    .map(|(i, x)| (alg.even[i].name.clone(), alg.even[i].degree(), x)),
            )
            .chain(coord_images.iter().enumerate().map(|(a, x)| {
                let name = x.vars.get(a).cloned().unwrap_or_else(|| format!("x{a}"));
                (name, 0, x)
            }));
        for (name, d, img) in named {
            for m in img.terms.keys() {
                let found = alg.monomial_degree(m) - d;
                if found != degree {
                    return Err(Error::DegreeShift {
                        generator: name,
                        expected: degree,
                        found,
                    });
                }
            }
        }
        Ok(Derivation {
            alg: alg.clone(),
            degree,
            odd_images,
            even_images,
            coord_images,
        })
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn algebra(&self) -> &Arc<GcAlgebra> {
        &self.alg
    }

    pub fn image(&self, g: GenRef) -> &GcElement<S> {
        match g {
            GenRef::Odd(i) => &self.odd_images[i],
            GenRef::Even(i) => &self.even_images[i],
        }
    }

    pub fn coordinate_image(&self, a: usize) -> &GcElement<S> {
        &self.coord_images[a]
    }

    /// Derivative of a function.
    pub fn apply_function(&self, f: &Polynomial<S>) -> GcElement<S> {
        let mut out = GcElement::zero(f.vars(), &self.alg);
        for (a, img) in self.coord_images.iter().enumerate() {
            let df = f.deriv(a);
            if !df.is_zero() && !img.is_zero() {
                out = out.add(&img.mul_poly(&df));
            }
        }
        out
    }

    pub fn apply(&self, x: &GcElement<S>) -> GcElement<S> {
        let odd_d = self.degree.rem_euclid(2) == 1;
        let mut out = GcElement::zero(&x.vars, &self.alg);
        for (m, f) in &x.terms {
            let rest = GcElement::monomial(&self.alg, m.clone(), Polynomial::one(&x.vars));
            out = out.add(&self.apply_function(f).mul(&rest));
            let mut before: u64 = 0;
            for i in mask::indices64(m.odd) {
                let after = m.odd & !before & !(1u64 << i);
                let left = GcElement::monomial(
                    &self.alg,
                    GcMonomial {
                        odd: before,
                        even: vec![0; self.alg.num_even()],
                    },
                    f.clone(),
                );
                let right = GcElement::monomial(
                    &self.alg,
                    GcMonomial {
                        odd: after,
                        even: m.even.clone(),
                    },
                    Polynomial::one(&x.vars),
                );
                let term = left.mul(&self.odd_images[i]).mul(&right);
                let negate = odd_d && before.count_ones() % 2 == 1;
                out = if negate { out.sub(&term) } else { out.add(&term) };
                before |= 1u64 << i;
            }
            let negate = odd_d && m.odd.count_ones() % 2 == 1;
            let prefix = GcElement::monomial(
                &self.alg,
                GcMonomial {
                    odd: m.odd,
                    even: vec![0; self.alg.num_even()],
                },
                f.clone(),
            );
            for (j, &e) in m.even.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut others = m.even.clone();
                others[j] -= 1;
                let rest = GcElement::monomial(
                    &self.alg,
                    GcMonomial { odd: 0, even: others },
                    Polynomial::from_int(&x.vars, e as i64),
                );
                let term = prefix.mul(&self.even_images[j]).mul(&rest);
                out = if negate { out.sub(&term) } else { out.add(&term) };
            }
        }
        out
    }

    /// Sum of two derivations of the same degree.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        let zip = |a: &[GcElement<S>], b: &[GcElement<S>]| a.iter().zip(b).map(|(x, y)| x.add(y)).collect();
        Derivation {
            alg: self.alg.clone(),
            degree: self.degree,
            odd_images: zip(&self.odd_images, &other.odd_images),
            even_images: zip(&self.even_images, &other.even_images),
            coord_images: zip(&self.coord_images, &other.coord_images),
        }
    }

    /// Matrix of the derivation from degree `n` to degree `n + deg`, at point
    /// base (constant coefficients required).
    pub fn matrix(&self, source: &[GcMonomial], target: &[GcMonomial]) -> Result<Matrix<S>> {
        let index: BTreeMap<&GcMonomial, usize> = target.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let vars = self
            .odd_images
            .iter()
            .chain(&self.even_images)
            .map(|x| x.vars.clone())
            .next()
            .unwrap_or_else(|| Vars::from(Vec::<String>::new()));
        let mut out = Matrix::zeros(target.len(), source.len());
        for (col, m) in source.iter().enumerate() {
            let x = GcElement::monomial(&self.alg, m.clone(), Polynomial::one(&vars));
            for (tm, c) in self.apply(&x).terms() {
                let c = c.as_constant().ok_or_else(|| {
                    Error::UnsupportedBase(format!("non-constant coefficient {c} in a point-base computation"))
                })?;
                let row = *index.get(tm).ok_or_else(|| Error::Invalid("image outside the target degree".into()))?;
                out[(row, col)] = c;
            }
        }
        Ok(out)
    }
}

/// Betti numbers of a degree-1 derivation with constant coefficients, in
/// total degrees `0..=max_degree`.
pub fn derivation_cohomology<S: Scalar>(d: &Derivation<S>, max_degree: i32) -> Result<Vec<usize>> {
    if d.degree != 1 {
        return Err(Error::Invalid("cohomology needs a degree-one differential".into()));
    }
    let bases: Vec<Vec<GcMonomial>> = (-1..=max_degree + 1)
        .map(|n| if n < 0 { Ok(Vec::new()) } else { d.alg.basis_in_degree(n) })
        .collect::<Result<_>>()?;
    let ranks: Vec<usize> = (0..bases.len() - 1)
        .map(|k| d.matrix(&bases[k], &bases[k + 1]).map(|m| m.rank()))
        .collect::<Result<_>>()?;
    Ok((0..=max_degree as usize)
        .map(|n| bases[n + 1].len() - ranks[n + 1] - ranks[n])
        .collect())
}
