//! Almost `k`-differentials and the cocycle equation
//! `δ[α, β] = [δα, β] + [α, δβ]`.

use std::sync::Arc;

use crate::algebroid::{schouten, ChartAlgebroid, Multivector, Section};
use crate::error::{Error, Result};
use crate::report::Witness;
use crate::scalar::Scalar;
use crate::symcore::Polynomial;

/// A candidate given by `δ(x_a) ∈ Γ(Λ^{k-1}A)` and `δ(e_i) ∈ Γ(Λ^k A)`,
/// extended by `δ(fg) = δ(f)g + fδ(g)` and `δ(fα) = δ(f) ∧ α + fδ(α)`.
#[derive(Clone)]
pub struct KDifferential<S> {
    alg: Arc<ChartAlgebroid<S>>,
    functions: Vec<Multivector<S>>,
    sections: Vec<Multivector<S>>,
}

impl<S: Scalar> std::fmt::Debug for KDifferential<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KDifferential")
            .field("functions", &self.functions)
            .field("sections", &self.sections)
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KVerdict {
    KDifferential,
    /// An almost `k`-differential failing the cocycle equation on the pair.
    AlmostOnly(Witness),
    /// Images of the wrong degree.
    NotAlmost(String),
}

impl<S: Scalar> KDifferential<S> {
    pub fn new(
        alg: &Arc<ChartAlgebroid<S>>,
        functions: Vec<Multivector<S>>,
        sections: Vec<Multivector<S>>,
    ) -> Result<Self> {
        if functions.len() != alg.dim() || sections.len() != alg.rank() {
            return Err(Error::Shape {
                block: "k-differential".into(),
                msg: format!("expected {} function images and {} section images", alg.dim(), alg.rank()),
            });
        }
        if functions.iter().chain(&sections).any(|p| p.rank() != alg.rank()) {
            return Err(Error::Shape {
                block: "k-differential".into(),
                msg: "multivectors of the wrong rank".into(),
            });
        }
        Ok(KDifferential {
            alg: alg.clone(),
            functions,
            sections,
        })
    }

    /// `δ = [α_0, ·]`, with `δ(f) = ρ(α_0)(f)`.
    pub fn inner(alg: &Arc<ChartAlgebroid<S>>, alpha0: &Multivector<S>) -> Result<Self> {
        let (vars, r) = (alg.vars(), alg.rank());
        let functions = (0..alg.dim())
            .map(|a| {
                let x = Multivector::function(r, &Polynomial::var(vars, a).expect("coordinate"));
                schouten(alg, alpha0, &x)
            })
            .collect();
        let sections = (0..r).map(|i| schouten(alg, alpha0, &Multivector::basis(vars, r, &[i]))).collect();
        Self::new(alg, functions, sections)
    }

    pub fn function(&self, f: &Polynomial<S>) -> Multivector<S> {
        let mut out = Multivector::zero(self.alg.vars(), self.alg.rank());
        for (a, img) in self.functions.iter().enumerate() {
            let df = f.deriv(a);
            if !df.is_zero() {
                out = out.add(&img.mul_poly(&df));
            }
        }
        out
    }

    pub fn section(&self, s: &[Polynomial<S>]) -> Multivector<S> {
        let (vars, r) = (self.alg.vars(), self.alg.rank());
        let mut out = Multivector::zero(vars, r);
        for (i, f) in s.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            out = out.add(&self.function(f).wedge(&Multivector::basis(vars, r, &[i])));
            out = out.add(&self.sections[i].mul_poly(f));
        }
        out
    }
}

fn degree_ok<S: Scalar>(p: &Multivector<S>, d: usize) -> bool {
    p.is_zero() || p.degree() == Some(d)
}

/// Classifies `δ` as a `k`-differential, an almost `k`-differential only,
/// or neither. The cocycle equation is checked on pairs `(e_i, e_j)` and
/// `(e_i, x_a e_j)`, which determine it by the Leibniz rules.
pub fn k_differential_check<S: Scalar>(delta: &KDifferential<S>, k: usize) -> KVerdict {
    let alg = &delta.alg;
    let (vars, r) = (alg.vars(), alg.rank());
    if k == 0 || k > r {
        return KVerdict::NotAlmost(format!("k = {k} is outside 1..={r}"));
    }
    for (a, p) in delta.functions.iter().enumerate() {
        if !degree_ok(p, k - 1) {
            return KVerdict::NotAlmost(format!("δ({}) is not of degree {}", vars[a], k - 1));
        }
    }
    for (i, p) in delta.sections.iter().enumerate() {
        if !degree_ok(p, k) {
            return KVerdict::NotAlmost(format!("δ(e{}) is not of degree {k}", i + 1));
        }
    }
    let mv = |s: &Section<S>| Multivector::section(vars, s);
    let defect = |a: &Section<S>, b: &Section<S>| {
        let lhs = delta.section(&alg.bracket(a, b));
        let rhs = schouten(alg, &delta.section(a), &mv(b)).add(&schouten(alg, &mv(a), &delta.section(b)));
        lhs.sub(&rhs)
    };
    for i in 0..r {
        for j in 0..r {
            if j > i {
                let d = defect(&alg.basis(i), &alg.basis(j));
                if !d.is_zero() {
                    return KVerdict::AlmostOnly(Witness::new(format!("(e{}, e{})", i + 1, j + 1), d));
                }
            }
            for x in 0..alg.dim() {
                let xv = Polynomial::var(vars, x).expect("coordinate");
                let b: Section<S> = alg.basis(j).iter().map(|p| p * &xv).collect();
                let d = defect(&alg.basis(i), &b);
                if !d.is_zero() {
                    return KVerdict::AlmostOnly(Witness::new(format!("(e{}, {}*e{})", i + 1, vars[x], j + 1), d));
                }
            }
        }
    }
    KVerdict::KDifferential
}
