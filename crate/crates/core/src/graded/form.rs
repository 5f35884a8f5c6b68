//! Graded bundles, bundle-valued algebroid forms and Ω(A)-linear maps between
//! them.
//!
//! A form `f θ^I ⊗ s` is stored under the key `(I, s)` with `θ` written to the
//! left of the bundle generator. Maps are stored by their values on bundle
//! generators and extended by `T(θ^I s) = (-1)^{|I||T|} θ^I T(s)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use super::mask::{self, Mask};
use crate::error::{Error, Result};
use crate::scalar::{sign, Scalar};
use crate::symcore::{Polynomial, Vars};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBundle {
    names: Vec<String>,
    degrees: Vec<i32>,
}

pub type Bundle = Arc<GradedBundle>;

impl GradedBundle {
    pub fn new<I, T>(gens: I) -> Result<Self>
    where
        I: IntoIterator<Item = (T, i32)>,
        T: Into<String>,
    {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for (n, d) in gens {
            let n = n.into();
            if names.contains(&n) {
                return Err(Error::Invalid(format!("duplicate generator `{n}`")));
            }
            names.push(n);
            degrees.push(d);
        }
        Ok(GradedBundle { names, degrees })
    }

    /// The trivial line bundle: one generator of degree 0.
    pub fn trivial() -> Self {
        GradedBundle {
            names: vec!["1".into()],
            degrees: vec![0],
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, j: usize) -> &str {
        &self.names[j]
    }

    pub fn degree(&self, j: usize) -> i32 {
        self.degrees[j]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Generators of degree `d`, in declaration order.
    pub fn in_degree(&self, d: i32) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.degrees[j] == d).collect()
    }

    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let lo = *self.degrees.iter().min()?;
        let hi = *self.degrees.iter().max()?;
        Some((lo, hi))
    }

    /// Generators `a⊗b`, indexed `a * other.len() + b`.
    pub fn tensor(&self, other: &GradedBundle) -> Self {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for a in 0..self.len() {
            for b in 0..other.len() {
                names.push(format!("{}⊗{}", self.names[a], other.names[b]));
                degrees.push(self.degrees[a] + other.degrees[b]);
            }
        }
        GradedBundle { names, degrees }
    }

    /// Dual generators `s*` in degree `-deg s`.
    pub fn dual(&self) -> Self {
        GradedBundle {
            names: self.names.iter().map(|n| format!("{n}*")).collect(),
            degrees: self.degrees.iter().map(|d| -d).collect(),
        }
    }
}

/// An element of Ω(A; E) with polynomial coefficients.
#[derive(Clone, PartialEq)]
pub struct FormElement<S> {
    vars: Vars,
    rank: usize,
    bundle: Bundle,
    terms: BTreeMap<(Mask, usize), Polynomial<S>>,
}

impl<S: Scalar> FormElement<S> {
    pub fn zero(vars: &Vars, rank: usize, bundle: &Bundle) -> Self {
        FormElement {
            vars: vars.clone(),
            rank,
            bundle: bundle.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(vars: &Vars, rank: usize, bundle: &Bundle, m: Mask, j: usize, coeff: Polynomial<S>) -> Self {
        let mut out = Self::zero(vars, rank, bundle);
        out.add_term(m, j, &coeff);
        out
    }

    /// The generator `s_j` as a 0-form.
    pub fn generator(vars: &Vars, rank: usize, bundle: &Bundle, j: usize) -> Self {
        Self::monomial(vars, rank, bundle, 0, j, Polynomial::one(vars))
    }

    pub fn add_term(&mut self, m: Mask, j: usize, coeff: &Polynomial<S>) {
        debug_assert!(j < self.bundle.len());
        debug_assert!((m as u64) >> self.rank == 0, "form index beyond the algebroid rank");
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&(m, j)) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&(m, j));
                }
            }
            None => {
                self.terms.insert((m, j), coeff.clone());
            }
        }
    }

    /// Adds `±coeff` depending on `negate`.
    pub fn add_signed(&mut self, m: Mask, j: usize, coeff: &Polynomial<S>, negate: bool) {
        if negate {
            self.add_term(m, j, &-coeff);
        } else {
            self.add_term(m, j, coeff);
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bundle(&self) -> &Bundle {
        &self.bundle
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mask, usize, &Polynomial<S>)> {
        self.terms.iter().map(|(&(m, j), c)| (m, j, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: Mask, j: usize) -> Polynomial<S> {
        self.terms
            .get(&(m, j))
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(&self.vars))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_degree(&self, m: Mask, j: usize) -> i32 {
        mask::len(m) as i32 + self.bundle.degree(j)
    }

    /// Total degree if the element is nonzero and homogeneous.
    pub fn total_degree(&self) -> Option<i32> {
        let mut it = self.terms.keys().map(|&(m, j)| self.term_degree(m, j));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// The component of form degree `p`.
    pub fn form_part(&self, p: usize) -> Self {
        FormElement {
            vars: self.vars.clone(),
            rank: self.rank,
            bundle: self.bundle.clone(),
            terms: self
                .terms
                .iter()
                .filter(|((m, _), _)| mask::len(*m) == p)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn max_form_degree(&self) -> Option<usize> {
        self.terms.keys().map(|(m, _)| mask::len(*m)).max()
    }

    /// Multiplication by a function.
    pub fn mul_poly(&self, f: &Polynomial<S>) -> Self {
        let mut out = Self::zero(&self.vars, self.rank, &self.bundle);
        for (&(m, j), c) in &self.terms {
            out.add_term(m, j, &(f * c));
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(&self.vars, self.rank, &self.bundle);
        for (&(m, j), p) in &self.terms {
            out.add_term(m, j, &p.scale(c));
        }
        out
    }

    /// `f θ^I ∧ self`.
    pub fn wedge_left(&self, m: Mask, f: &Polynomial<S>) -> Self {
        let mut out = Self::zero(&self.vars, self.rank, &self.bundle);
        if f.is_zero() {
            return out;
        }
        for (&(n, j), c) in &self.terms {
            if let Some((k, odd)) = mask::wedge(m, n) {
                out.add_signed(k, j, &(f * c), odd);
            }
        }
        out
    }

    /// The same coefficients read in another bundle with the same generators
    /// count; used for relabelling.
    pub fn with_bundle(&self, bundle: &Bundle) -> Self {
        assert_eq!(bundle.len(), self.bundle.len());
        FormElement {
            vars: self.vars.clone(),
            rank: self.rank,
            bundle: bundle.clone(),
            terms: self.terms.clone(),
        }
    }

    /// Reindexes bundle generators through `f`, landing in `bundle`.
    pub fn map_generators(&self, bundle: &Bundle, f: impl Fn(usize) -> usize) -> Self {
        let mut out = Self::zero(&self.vars, self.rank, bundle);
        for (&(m, j), c) in &self.terms {
            out.add_term(m, f(j), c);
        }
        out
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank || self.bundle != other.bundle {
            return Err(Error::IncompatibleBundles(format!(
                "forms over {} (rank {}) and {} (rank {})",
                describe(&self.bundle),
                self.rank,
                describe(&other.bundle),
                other.rank
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (&(m, j), c) in &other.terms {
            out.add_term(m, j, c);
        }
        Ok(out)
    }
}

fn describe(b: &GradedBundle) -> String {
    let parts: Vec<String> = (0..b.len()).map(|j| format!("{}:{}", b.name(j), b.degree(j))).collect();
    format!("[{}]", parts.join(", "))
}

impl<'a, S: Scalar> AddAssign<&'a FormElement<S>> for FormElement<S> {
    fn add_assign(&mut self, rhs: &'a FormElement<S>) {
        self.check_same_space(rhs).unwrap();
        for (&(m, j), c) in &rhs.terms {
            self.add_term(m, j, c);
        }
    }
}

impl<'a, S: Scalar> SubAssign<&'a FormElement<S>> for FormElement<S> {
    fn sub_assign(&mut self, rhs: &'a FormElement<S>) {
        self.check_same_space(rhs).unwrap();
        for (&(m, j), c) in &rhs.terms {
            self.add_signed(m, j, c, true);
        }
    }
}

impl<S: Scalar> Add for &FormElement<S> {
    type Output = FormElement<S>;
    fn add(self, rhs: Self) -> FormElement<S> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<S: Scalar> Sub for &FormElement<S> {
    type Output = FormElement<S>;
    fn sub(self, rhs: Self) -> FormElement<S> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<S: Scalar> Neg for &FormElement<S> {
    type Output = FormElement<S>;
    fn neg(self) -> FormElement<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> fmt::Display for FormElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (&(m, j), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let theta: Vec<String> = mask::indices(m).map(|i| format!("θ{}", i + 1)).collect();
            write!(f, "({c})")?;
            if !theta.is_empty() {
                write!(f, "*{}", theta.join("∧"))?;
            }
            write!(f, "*{}", self.bundle.name(j))?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for FormElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form({self})")
    }
}

/// `ω ∧ η` for a scalar form `ω` (over the trivial bundle) and `η ∈ Ω(A; E)`.
pub fn wedge_scalar<S: Scalar>(omega: &FormElement<S>, eta: &FormElement<S>) -> Result<FormElement<S>> {
    check_scalar(omega)?;
    let mut out = FormElement::zero(&eta.vars, eta.rank, &eta.bundle);
    for (m, _, f) in omega.terms() {
        out += &eta.wedge_left(m, f);
    }
    Ok(out)
}

/// The right action `η ∧ ω = (-1)^{|s||I|} ...` of scalar forms on Ω(A; E).
pub fn wedge_scalar_right<S: Scalar>(eta: &FormElement<S>, omega: &FormElement<S>) -> Result<FormElement<S>> {
    check_scalar(omega)?;
    let mut out = FormElement::zero(&eta.vars, eta.rank, &eta.bundle);
    for (n, j, g) in eta.terms() {
        for (m, _, f) in omega.terms() {
            if let Some((k, odd)) = mask::wedge(n, m) {
                let twist = (eta.bundle.degree(j) * mask::len(m) as i32).rem_euclid(2) == 1;
                out.add_signed(k, j, &(g * f), odd ^ twist);
            }
        }
    }
    Ok(out)
}

fn check_scalar<S: Scalar>(omega: &FormElement<S>) -> Result<()> {
    if omega.bundle.len() != 1 || omega.bundle.degree(0) != 0 {
        return Err(Error::IncompatibleBundles(format!(
            "expected a scalar form, found values in {}",
            describe(&omega.bundle)
        )));
    }
    Ok(())
}

/// Exterior product Ω(A;E) × Ω(A;F) → Ω(A;E⊗F).
pub fn exterior<S: Scalar>(x: &FormElement<S>, y: &FormElement<S>, target: &Bundle) -> Result<FormElement<S>> {
    if x.rank != y.rank || **target != x.bundle.tensor(&y.bundle) {
        return Err(Error::IncompatibleBundles("exterior product target is not E⊗F".into()));
    }
    let nf = y.bundle.len();
    let mut out = FormElement::zero(&x.vars, x.rank, target);
    for (m, a, f) in x.terms() {
        for (n, b, g) in y.terms() {
            if let Some((k, odd)) = mask::wedge(m, n) {
                let twist = (x.bundle.degree(a) * mask::len(n) as i32).rem_euclid(2) == 1;
                out.add_signed(k, a * nf + b, &(f * g), odd ^ twist);
            }
        }
    }
    Ok(out)
}

/// An Ω(A)-linear map Ω(A;E) → Ω(A;F) of homogeneous total degree, stored by
/// its values on the generators of E.
#[derive(Clone, PartialEq)]
pub struct FormMap<S> {
    vars: Vars,
    rank: usize,
    source: Bundle,
    target: Bundle,
    degree: i32,
    images: Vec<FormElement<S>>,
}

impl<S: Scalar> FormMap<S> {
    pub fn new(
        vars: &Vars,
        rank: usize,
        source: &Bundle,
        target: &Bundle,
        degree: i32,
        images: Vec<FormElement<S>>,
    ) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::Shape {
                block: "map".into(),
                msg: format!("{} images for {} generators", images.len(), source.len()),
            });
        }
        for (j, img) in images.iter().enumerate() {
            if img.bundle != *target || img.rank != rank {
                return Err(Error::IncompatibleBundles(format!(
                    "image of `{}` lies outside the target bundle",
                    source.name(j)
                )));
            }
            for (m, k, _) in img.terms() {
                let found = img.term_degree(m, k) - source.degree(j);
                if found != degree {
                    return Err(Error::DegreeShift {
                        generator: source.name(j).to_string(),
                        expected: degree,
                        found,
                    });
                }
            }
        }
        Ok(FormMap {
            vars: vars.clone(),
            rank,
            source: source.clone(),
            target: target.clone(),
            degree,
            images,
        })
    }

    pub fn zero(vars: &Vars, rank: usize, source: &Bundle, target: &Bundle, degree: i32) -> Self {
        FormMap {
            vars: vars.clone(),
            rank,
            source: source.clone(),
            target: target.clone(),
            degree,
            images: (0..source.len()).map(|_| FormElement::zero(vars, rank, target)).collect(),
        }
    }

    pub fn identity(vars: &Vars, rank: usize, bundle: &Bundle) -> Self {
        FormMap {
            vars: vars.clone(),
            rank,
            source: bundle.clone(),
            target: bundle.clone(),
            degree: 0,
            images: (0..bundle.len()).map(|j| FormElement::generator(vars, rank, bundle, j)).collect(),
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn source(&self) -> &Bundle {
        &self.source
    }

    pub fn target(&self) -> &Bundle {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn image(&self, j: usize) -> &FormElement<S> {
        &self.images[j]
    }

    pub fn images(&self) -> &[FormElement<S>] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(FormElement::is_zero)
    }

    pub fn try_apply(&self, x: &FormElement<S>) -> Result<FormElement<S>> {
        if x.bundle != self.source {
            return Err(Error::IncompatibleBundles(format!(
                "map from {} applied to a form in {}",
                describe(&self.source),
                describe(&x.bundle)
            )));
        }
        let mut out = FormElement::zero(&self.vars, self.rank, &self.target);
        for (m, j, f) in x.terms() {
            let img = self.images[j].wedge_left(m, f);
            if (mask::len(m) as i32 * self.degree) % 2 != 0 {
                out -= &img;
            } else {
                out += &img;
            }
        }
        Ok(out)
    }

    /// Evaluation pairing `T ∧ x = T(x)`. Panics on a source mismatch.
    pub fn apply(&self, x: &FormElement<S>) -> FormElement<S> {
        self.try_apply(x).unwrap()
    }

    /// Twisted evaluation `x ∧ T = (-1)^{|x||T|} T(x)` for homogeneous `x`.
    pub fn apply_twisted(&self, x: &FormElement<S>) -> FormElement<S> {
        let mut out = self.apply(x);
        if let Some(d) = x.total_degree() {
            if (d * self.degree) % 2 != 0 {
                out = -&out;
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FormMap<S>) -> FormMap<S> {
        FormMap {
            vars: self.vars.clone(),
            rank: self.rank,
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            images: other.images.iter().map(|x| self.apply(x)).collect(),
        }
    }

    /// `[T, U] = T∘U - (-1)^{|T||U|} U∘T`.
    pub fn graded_commutator(&self, other: &FormMap<S>) -> FormMap<S> {
        let tu = self.compose(other);
        let ut = other.compose(self);
        let odd = (self.degree * other.degree) % 2 != 0;
        if odd {
            tu.add(&ut)
        } else {
            tu.sub(&ut)
        }
    }

    pub fn add(&self, other: &FormMap<S>) -> FormMap<S> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &FormMap<S>) -> FormMap<S> {
        self.combine(other, true)
    }

    fn combine(&self, other: &FormMap<S>, negate: bool) -> FormMap<S> {
        assert!(self.source == other.source && self.target == other.target, "maps between different bundles");
        assert_eq!(self.degree, other.degree, "maps of different degree");
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| if negate { a - b } else { a + b })
            .collect();
        FormMap {
            images,
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &S) -> FormMap<S> {
        FormMap {
            images: self.images.iter().map(|x| x.scale(c)).collect(),
            ..self.clone()
        }
    }

    /// `ω ∧ T` for a homogeneous scalar form `ω`.
    pub fn wedge_left(&self, omega: &FormElement<S>) -> Result<FormMap<S>> {
        let d = omega.total_degree().unwrap_or(0);
        let images = self
            .images
            .iter()
            .map(|x| wedge_scalar(omega, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(FormMap {
            images,
            degree: self.degree + d,
            ..self.clone()
        })
    }

    /// The component of form degree `p`.
    pub fn form_part(&self, p: usize) -> FormMap<S> {
        FormMap {
            images: self.images.iter().map(|x| x.form_part(p)).collect(),
            ..self.clone()
        }
    }

    /// First generator with a nonzero image, for witnesses.
    pub fn first_nonzero(&self) -> Option<(usize, &FormElement<S>)> {
        self.images.iter().enumerate().find(|(_, x)| !x.is_zero())
    }
}

impl<S: Scalar> fmt::Debug for FormMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FormMap(degree {})", self.degree)?;
        for (j, img) in self.images.iter().enumerate() {
            writeln!(f, "  {} ↦ {}", self.source.name(j), img)?;
        }
        Ok(())
    }
}

/// `(-1)^{k}` as a scalar for an integer exponent.
pub fn parity_sign<S: Scalar>(k: i32) -> S {
    sign(k.rem_euclid(2) == 1)
}
