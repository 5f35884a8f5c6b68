//! Lie algebroids on a single chart with a trivialized bundle.
//!
//! A rank-`r` algebroid over coordinates `x^1..x^m` is given by the anchor
//! `ρ(e_i) = ρ^a_i ∂_a` and structure functions `[e_j, e_k] = c^i_{jk} e_i`.
//! Sections and vector fields are coefficient vectors in the frames `e_i` and
//! `∂_a`.

mod basic;
mod connection;
mod multivector;

pub use basic::{
    basic_connection, basic_curvature, basic_curvature_value, basic_on_sections, basic_on_vectors,
    curvature_identities,
};
pub use connection::{AConnection, Connection};
pub use multivector::{schouten, Multivector};

use crate::error::{Error, Result};
use crate::graded::{mask, Bundle, FormElement, GradedBundle, Mask};
use crate::report::{Check, Witness};
use crate::scalar::Scalar;
use crate::symcore::{Polynomial, Vars};

pub type Section<S> = Vec<Polynomial<S>>;
pub type VectorField<S> = Vec<Polynomial<S>>;

#[derive(Clone, PartialEq)]
pub struct ChartAlgebroid<S> {
    vars: Vars,
    rank: usize,
    /// `anchor[i][a] = ρ^a_i`
    anchor: Vec<Vec<Polynomial<S>>>,
    /// `structure[j][k][i] = c^i_{jk}`
    structure: Vec<Vec<Vec<Polynomial<S>>>>,
}

impl<S: Scalar> ChartAlgebroid<S> {
    /// `brackets` lists `[e_j, e_k]` for some pairs; the rest of the table is
    /// filled by antisymmetry, unlisted pairs bracket to zero.
    pub fn new<I>(vars: &Vars, anchor: Vec<Vec<Polynomial<S>>>, brackets: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Section<S>)>,
    {
        let rank = anchor.len();
        if rank > 32 {
            return Err(Error::Invalid("rank above 32 is not supported".into()));
        }
        for (i, row) in anchor.iter().enumerate() {
            if row.len() != vars.len() {
                return Err(Error::Shape {
                    block: "anchor".into(),
                    msg: format!("row {} has {} entries for {} coordinates", i + 1, row.len(), vars.len()),
                });
            }
        }
        let zero = Polynomial::zero(vars);
        let mut structure = vec![vec![vec![zero; rank]; rank]; rank];
        let mut seen = std::collections::BTreeSet::new();
        for ((j, k), value) in brackets {
            if j >= rank || k >= rank {
                return Err(Error::IndexOutOfRange {
                    index: j.max(k),
                    len: rank,
                });
            }
            if j == k {
                return Err(Error::Shape {
                    block: "brackets".into(),
                    msg: format!("[e{0}, e{0}] must vanish and cannot be given", j + 1),
                });
            }
            if !seen.insert((j.min(k), j.max(k))) {
                return Err(Error::Shape {
                    block: "brackets".into(),
                    msg: format!("pair ({}, {}) given twice", j + 1, k + 1),
                });
            }
            if value.len() != rank {
                return Err(Error::Shape {
                    block: "brackets".into(),
                    msg: format!("[e{}, e{}] has {} components for rank {rank}", j + 1, k + 1, value.len()),
                });
            }
            structure[k][j] = value.iter().map(|p| -p).collect();
            structure[j][k] = value;
        }
        Ok(ChartAlgebroid {
            vars: vars.clone(),
            rank,
            anchor,
            structure,
        })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_point(&self) -> bool {
        self.vars.is_empty()
    }

    /// `ρ^a_i`
    pub fn anchor(&self, i: usize) -> &[Polynomial<S>] {
        &self.anchor[i]
    }

    /// `c^i_{jk}`
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Polynomial<S> {
        &self.structure[j][k][i]
    }

    /// Whether every structure function is constant.
    pub fn has_constant_structure(&self) -> bool {
        self.structure.iter().flatten().flatten().all(Polynomial::is_constant)
    }

    pub fn zero_section(&self) -> Section<S> {
        vec![Polynomial::zero(&self.vars); self.rank]
    }

    pub fn zero_vector(&self) -> VectorField<S> {
        vec![Polynomial::zero(&self.vars); self.dim()]
    }

    pub fn basis(&self, i: usize) -> Section<S> {
        let mut s = self.zero_section();
        s[i] = Polynomial::one(&self.vars);
        s
    }

    pub fn coordinate_field(&self, a: usize) -> VectorField<S> {
        let mut x = self.zero_vector();
        x[a] = Polynomial::one(&self.vars);
        x
    }

    pub fn rho(&self, alpha: &[Polynomial<S>]) -> VectorField<S> {
        let mut out = self.zero_vector();
        for (i, ai) in alpha.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (a, r) in self.anchor[i].iter().enumerate() {
                if !r.is_zero() {
                    out[a] += &(ai * r);
                }
            }
        }
        out
    }

    /// `ρ(e_i)(f)`
    pub fn rho_basis_apply(&self, i: usize, f: &Polynomial<S>) -> Polynomial<S> {
        f.directional(&self.anchor[i])
    }

    pub fn bracket(&self, alpha: &[Polynomial<S>], beta: &[Polynomial<S>]) -> Section<S> {
        let mut out = self.zero_section();
        for (j, aj) in alpha.iter().enumerate() {
            if aj.is_zero() {
                continue;
            }
            for (k, bk) in beta.iter().enumerate() {
                if bk.is_zero() || j == k {
                    continue;
                }
                let f = aj * bk;
                for (i, c) in self.structure[j][k].iter().enumerate() {
                    if !c.is_zero() {
                        out[i] += &(&f * c);
                    }
                }
            }
        }
        let ra = self.rho(alpha);
        let rb = self.rho(beta);
        for i in 0..self.rank {
            out[i] += &beta[i].directional(&ra);
            out[i] -= &alpha[i].directional(&rb);
        }
        out
    }

    pub fn vector_bracket(&self, x: &[Polynomial<S>], y: &[Polynomial<S>]) -> VectorField<S> {
        (0..self.dim())
            .map(|a| &y[a].directional(x) - &x[a].directional(y))
            .collect()
    }

    /// Jacobi on basis triples and `ρ[e_i, e_j] = [ρe_i, ρe_j]` on basis pairs.
    pub fn verify_axioms(&self) -> Vec<Check> {
        let mut jacobi = None;
        'outer: for i in 0..self.rank {
            for j in i + 1..self.rank {
                for k in j + 1..self.rank {
                    let (ei, ej, ek) = (self.basis(i), self.basis(j), self.basis(k));
                    let a = self.bracket(&ei, &self.bracket(&ej, &ek));
                    let b = self.bracket(&ej, &self.bracket(&ek, &ei));
                    let c = self.bracket(&ek, &self.bracket(&ei, &ej));
                    let sum: Section<S> = (0..self.rank).map(|n| &(&a[n] + &b[n]) + &c[n]).collect();
                    if sum.iter().any(|p| !p.is_zero()) {
                        jacobi = Some(Witness::new(
                            format!("(e{}, e{}, e{})", i + 1, j + 1, k + 1),
                            show_section(&sum),
                        ));
                        break 'outer;
                    }
                }
            }
        }
        let mut anchor = None;
        'outer2: for i in 0..self.rank {
            for j in i + 1..self.rank {
                let lhs = self.rho(&self.bracket(&self.basis(i), &self.basis(j)));
                let rhs = self.vector_bracket(&self.anchor[i], &self.anchor[j]);
                let diff: VectorField<S> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
                if diff.iter().any(|p| !p.is_zero()) {
                    anchor = Some(Witness::new(format!("(e{}, e{})", i + 1, j + 1), show_vector(&diff, &self.vars)));
                    break 'outer2;
                }
            }
        }
        vec![
            Check::from_option("jacobi", jacobi),
            Check::from_option("anchor is a bracket morphism", anchor),
        ]
    }

    /// `d_A f = Σ ρ(e_i)(f) θ^i`
    pub fn d_function(&self, f: &Polynomial<S>) -> Vec<(Mask, Polynomial<S>)> {
        (0..self.rank)
            .map(|i| (mask::single(i), self.rho_basis_apply(i, f)))
            .filter(|(_, p)| !p.is_zero())
            .collect()
    }

    /// `d_A θ^k = -Σ_{i<j} c^k_{ij} θ^i θ^j`
    pub fn d_theta(&self, k: usize) -> Vec<(Mask, Polynomial<S>)> {
        let mut out = Vec::new();
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                let c = &self.structure[i][j][k];
                if !c.is_zero() {
                    out.push((mask::from_indices(&[i, j]), -c));
                }
            }
        }
        out
    }

    /// `d_A θ^I` by the Leibniz rule.
    pub fn d_theta_mask(&self, m: Mask) -> Vec<(Mask, Polynomial<S>)> {
        let mut out: Vec<(Mask, Polynomial<S>)> = Vec::new();
        for (pos, k) in mask::indices(m).enumerate() {
            let below = m & ((1u32 << k) - 1);
            let above = m & !below & !(1u32 << k);
            for (dm, c) in self.d_theta(k) {
                let Some((t, s1)) = mask::wedge(below, dm) else { continue };
                let Some((t, s2)) = mask::wedge(t, above) else { continue };
                let negate = s1 ^ s2 ^ (pos % 2 == 1);
                out.push((t, if negate { -&c } else { c }));
            }
        }
        out
    }

    /// The Koszul differential applied with the frame of the bundle held
    /// fixed: `d(f θ^I ⊗ s) = d_A(f θ^I) ⊗ s`. On the trivial bundle this is
    /// `d_A`.
    pub fn d_frame(&self, x: &FormElement<S>) -> FormElement<S> {
        let mut out = FormElement::zero(&self.vars, self.rank, x.bundle());
        for (m, j, f) in x.terms() {
            for (dm, df) in self.d_function(f) {
                if let Some((t, odd)) = mask::wedge(dm, m) {
                    out.add_signed(t, j, &df, odd);
                }
            }
            for (t, c) in self.d_theta_mask(m) {
                out.add_term(t, j, &(f * &c));
            }
        }
        out
    }

    /// `d_A` on scalar forms.
    pub fn d_a(&self, x: &FormElement<S>) -> FormElement<S> {
        self.d_frame(x)
    }

    /// The bundle `A` with generators `e1..er` in degree `degree`.
    pub fn section_bundle(&self, degree: i32) -> GradedBundle {
        GradedBundle::new((0..self.rank).map(|i| (format!("e{}", i + 1), degree))).expect("distinct names")
    }

    /// The bundle `TM` with generators `∂x` (one per coordinate).
    pub fn tangent_bundle(&self, degree: i32) -> GradedBundle {
        GradedBundle::new(self.vars.iter().map(|v| (format!("∂{v}"), degree))).expect("distinct names")
    }

    /// A scalar form from `(mask, coefficient)` pairs.
    pub fn scalar_form(&self, terms: &[(Mask, Polynomial<S>)], trivial: &Bundle) -> FormElement<S> {
        let mut out = FormElement::zero(&self.vars, self.rank, trivial);
        for (m, c) in terms {
            out.add_term(*m, 0, c);
        }
        out
    }
}

pub(crate) fn show_section<S: Scalar>(s: &[Polynomial<S>]) -> String {
    let parts: Vec<String> = s
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(i, p)| format!("({p})*e{}", i + 1))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub(crate) fn show_vector<S: Scalar>(x: &[Polynomial<S>], vars: &Vars) -> String {
    let parts: Vec<String> = x
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(a, p)| format!("({p})*∂{}", vars[a]))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

impl<S: Scalar> std::fmt::Debug for ChartAlgebroid<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ChartAlgebroid")
            .field("vars", &self.vars)
            .field("rank", &self.rank)
            .field("anchor", &self.anchor)
            .field("structure", &self.structure)
            .finish()
    }
}
