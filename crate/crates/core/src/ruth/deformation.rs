//! The deformation complex: antisymmetric multiderivations of `Γ(A)`.

use std::sync::Arc;

use super::adjoint;
use crate::algebroid::{ChartAlgebroid, Connection, Section, VectorField};
use crate::error::{Error, Result};
use crate::graded::{mask, ChainComplex, FormElement, Mask};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::symcore::Polynomial;

/// Largest cochain degree enumerated by default.
pub const MAX_TUPLE_DEGREE: usize = 3;

/// A cochain of degree `k`, stored by its values on increasing basis
/// `k`-tuples and its symbol on increasing `(k-1)`-tuples. Other arguments
/// are handled by antisymmetry and `c(…, f α) = f c(…, α) + σ(…)(f) α`.
#[derive(Clone, PartialEq)]
pub struct DeformationCochain<S> {
    alg: Arc<ChartAlgebroid<S>>,
    degree: usize,
    values: Vec<(Mask, Section<S>)>,
    symbols: Vec<(Mask, VectorField<S>)>,
}

impl<S: Scalar> std::fmt::Debug for DeformationCochain<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DeformationCochain")
            .field("degree", &self.degree)
            .field("values", &self.values)
            .field("symbols", &self.symbols)
            .finish()
    }
}

fn check_bound(degree: usize, bound: usize) -> Result<()> {
    if degree > bound {
        return Err(Error::DegreeBound { degree, bound });
    }
    Ok(())
}

impl<S: Scalar> DeformationCochain<S> {
    /// `values` and `symbols` follow the order of `mask::subsets(r, k)` and
    /// `mask::subsets(r, k - 1)`; in degree zero there is no symbol.
    pub fn new(
        alg: &Arc<ChartAlgebroid<S>>,
        degree: usize,
        values: Vec<Section<S>>,
        symbols: Vec<VectorField<S>>,
    ) -> Result<Self> {
        Self::with_bound(alg, degree, values, symbols, MAX_TUPLE_DEGREE)
    }

    pub fn with_bound(
        alg: &Arc<ChartAlgebroid<S>>,
        degree: usize,
        values: Vec<Section<S>>,
        symbols: Vec<VectorField<S>>,
        bound: usize,
    ) -> Result<Self> {
        check_bound(degree, bound)?;
        let r = alg.rank();
        let tuples = mask::subsets(r, degree);
        let lower = if degree == 0 { vec![] } else { mask::subsets(r, degree - 1) };
        if values.len() != tuples.len() || values.iter().any(|v| v.len() != r) {
            return Err(Error::Shape {
                block: "cochain values".into(),
                msg: format!("expected {} sections of rank {r}", tuples.len()),
            });
        }
        if symbols.len() != lower.len() || symbols.iter().any(|v| v.len() != alg.dim()) {
            return Err(Error::Shape {
                block: "cochain symbol".into(),
                msg: format!("expected {} vector fields", lower.len()),
            });
        }
        Ok(DeformationCochain {
            alg: alg.clone(),
            degree,
            values: tuples.into_iter().zip(values).collect(),
            symbols: lower.into_iter().zip(symbols).collect(),
        })
    }

    pub fn zero(alg: &Arc<ChartAlgebroid<S>>, degree: usize) -> Result<Self> {
        let r = alg.rank();
        let nv = mask::subsets(r, degree).len();
        let ns = if degree == 0 { 0 } else { mask::subsets(r, degree - 1).len() };
        Self::new(alg, degree, vec![alg.zero_section(); nv], vec![alg.zero_vector(); ns])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn algebroid(&self) -> &Arc<ChartAlgebroid<S>> {
        &self.alg
    }

    pub fn values(&self) -> &[(Mask, Section<S>)] {
        &self.values
    }

    pub fn symbols(&self) -> &[(Mask, VectorField<S>)] {
        &self.symbols
    }

    fn lookup<'a, T>(table: &'a [(Mask, T)], idx: &[usize]) -> Option<(&'a T, bool)> {
        let (m, odd) = mask::sort_sign(idx)?;
        table.iter().find(|(t, _)| *t == m).map(|(_, v)| (v, odd))
    }

    /// `c(e_{i_1}, …, e_{i_k})` for any index order.
    pub fn basis_value(&self, idx: &[usize]) -> Section<S> {
        match Self::lookup(&self.values, idx) {
            Some((v, odd)) if odd => v.iter().map(|p| -p).collect(),
            Some((v, _)) => v.clone(),
            None => self.alg.zero_section(),
        }
    }

    /// `σ(e_{i_1}, …, e_{i_{k-1}})`.
    pub fn basis_symbol(&self, idx: &[usize]) -> VectorField<S> {
        match Self::lookup(&self.symbols, idx) {
            Some((v, odd)) if odd => v.iter().map(|p| -p).collect(),
            Some((v, _)) => v.clone(),
            None => self.alg.zero_vector(),
        }
    }

    /// Evaluates on arbitrary sections, expanding multilinearly.
    pub fn eval(&self, args: &[Section<S>]) -> Section<S> {
        assert_eq!(args.len(), self.degree, "wrong number of arguments");
        let r = self.alg.rank();
        let vars = self.alg.vars();
        let k = self.degree;
        let mut out = self.alg.zero_section();
        let mut idx = vec![0usize; k];
        loop {
            let fs: Vec<&Polynomial<S>> = (0..k).map(|l| &args[l][idx[l]]).collect();
            if fs.iter().all(|f| !f.is_zero()) {
                let mut prod = Polynomial::one(vars);
                for f in &fs {
                    prod = &prod * *f;
                }
                let v = self.basis_value(&idx);
                for (i, c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        out[i] += &(&prod * c);
                    }
                }
                for l in 0..k {
                    let rest: Vec<usize> = (0..k).filter(|&m| m != l).map(|m| idx[m]).collect();
                    let sym = self.basis_symbol(&rest);
                    let lf = fs[l].directional(&sym);
                    if lf.is_zero() {
                        continue;
                    }
                    let mut term = lf;
                    for (m, f) in fs.iter().enumerate() {
                        if m != l {
                            term = &term * *f;
                        }
                    }
                    if (k - 1 - l) % 2 == 1 {
                        out[idx[l]] -= &term;
                    } else {
                        out[idx[l]] += &term;
                    }
                }
            }
            // next index tuple
            let mut pos = k;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < r {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    /// `δc(α_1, …, α_{k+1})` by the Koszul formula.
    pub fn eval_differential(&self, args: &[Section<S>]) -> Section<S> {
        let n = args.len();
        assert_eq!(n, self.degree + 1, "wrong number of arguments");
        let alg = &self.alg;
        let mut out = alg.zero_section();
        let mut acc = |v: Section<S>, negate: bool| {
            for (o, p) in out.iter_mut().zip(&v) {
                if negate {
                    *o -= p;
                } else {
                    *o += p;
                }
            }
        };
        for i in 0..n {
            for j in i + 1..n {
                let mut rest = vec![alg.bracket(&args[i], &args[j])];
                rest.extend((0..n).filter(|&m| m != i && m != j).map(|m| args[m].clone()));
                acc(self.eval(&rest), (i + j) % 2 == 1);
            }
        }
        for i in 0..n {
            let rest: Vec<Section<S>> = (0..n).filter(|&m| m != i).map(|m| args[m].clone()).collect();
            acc(alg.bracket(&args[i], &self.eval(&rest)), i % 2 == 1);
        }
        out
    }

    /// `δc` with the default degree bound.
    pub fn differential(&self) -> Result<Self> {
        self.differential_with_bound(MAX_TUPLE_DEGREE)
    }

    /// `δc`; its symbol is read off from `δc(…, x_a e_1) - x_a δc(…, e_1)`.
    pub fn differential_with_bound(&self, bound: usize) -> Result<Self> {
        let k = self.degree + 1;
        check_bound(k, bound)?;
        let alg = &self.alg;
        let r = alg.rank();
        if r == 0 {
            return Ok(DeformationCochain {
                degree: k,
                values: vec![],
                symbols: vec![],
                ..self.clone()
            });
        }
        let vars = alg.vars();
        let values = mask::subsets(r, k)
            .into_iter()
            .map(|m| {
                let args: Vec<Section<S>> = mask::indices(m).map(|i| alg.basis(i)).collect();
                self.eval_differential(&args)
            })
            .collect();
        let symbols = mask::subsets(r, k - 1)
            .into_iter()
            .map(|m| {
                let mut args: Vec<Section<S>> = mask::indices(m).map(|i| alg.basis(i)).collect();
                args.push(alg.basis(0));
                let plain = self.eval_differential(&args);
                (0..alg.dim())
                    .map(|a| {
                        let x = Polynomial::var(vars, a).expect("coordinate index");
                        let last = args.len() - 1;
                        args[last] = alg.basis(0).iter().map(|p| p * &x).collect();
                        let probe = self.eval_differential(&args);
                        &probe[0] - &(&x * &plain[0])
                    })
                    .collect()
            })
            .collect();
        Self::with_bound(alg, k, values, symbols, bound)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|(_, v)| v.iter().all(Polynomial::is_zero))
            && self.symbols.iter().all(|(_, v)| v.iter().all(Polynomial::is_zero))
    }
}

/// `Ψ(c) = (c_∇, -σ_c) ∈ Ω^k(A; A) ⊕ Ω^{k-1}(A; TM)`, with
/// `c_∇(α_1, …, α_k) = c(α) + (-1)^{k-1} Σ_i (-1)^i ∇_{σ(…α̂_i…)} α_i`.
/// The result lives in the bundle of the adjoint representation.
pub fn psi_bridge<S: Scalar>(
    alg: &Arc<ChartAlgebroid<S>>,
    nabla: &Connection<S>,
    c: &DeformationCochain<S>,
) -> Result<FormElement<S>> {
    if c.alg != *alg {
        return Err(Error::IncompatibleBundles("cochain of another algebroid".into()));
    }
    let ad = adjoint(alg, nabla)?;
    let r = alg.rank();
    let k = c.degree;
    let mut out = ad.zero_form();
    for (m, v) in &c.values {
        let idx: Vec<usize> = mask::indices(*m).collect();
        let mut total = v.clone();
        for (pos, &i) in idx.iter().enumerate() {
            let rest: Vec<usize> = idx.iter().copied().filter(|&j| j != i).collect();
            let x = c.basis_symbol(&rest);
            let cov = nabla.covariant(&x, &alg.basis(i));
            // (-1)^{k-1} (-1)^{pos+1}
            let negate = (k + pos) % 2 == 1;
            for (t, p) in total.iter_mut().zip(&cov) {
                if negate {
                    *t -= p;
                } else {
                    *t += p;
                }
            }
        }
        for (i, p) in total.iter().enumerate() {
            out.add_term(*m, i, p);
        }
    }
    for (m, v) in &c.symbols {
        for (a, p) in v.iter().enumerate() {
            out.add_signed(*m, r + a, p, true);
        }
    }
    Ok(out)
}

/// `H(C_def(g))` for a Lie algebra, degrees `0..=r`.
pub fn deformation_cohomology<S: Scalar>(alg: &Arc<ChartAlgebroid<S>>, bound: usize) -> Result<Vec<(i32, usize)>> {
    if !alg.is_point() {
        return Err(Error::UnsupportedBase("deformation cohomology is computed over a point".into()));
    }
    let r = alg.rank();
    check_bound(r, bound)?;
    let dims: Vec<usize> = (0..=r).map(|k| mask::subsets(r, k).len() * r).collect();
    let mut diffs = Vec::with_capacity(r);
    for k in 0..r {
        let src = mask::subsets(r, k);
        let mut mat = Matrix::zeros(dims[k + 1], dims[k]);
        for (t, _) in src.iter().enumerate() {
            for i in 0..r {
                let values = (0..src.len())
                    .map(|s| if s == t { alg.basis(i) } else { alg.zero_section() })
                    .collect();
                let symbols = vec![vec![]; if k == 0 { 0 } else { mask::subsets(r, k - 1).len() }];
                let c = DeformationCochain::with_bound(alg, k, values, symbols, bound)?;
                let d = c.differential_with_bound(bound)?;
                for (row_t, (_, v)) in d.values.iter().enumerate() {
                    for (j, p) in v.iter().enumerate() {
                        mat[(row_t * r + j, t * r + i)] = p.as_constant().expect("constant at a point");
                    }
                }
            }
        }
        diffs.push(mat);
    }
    ChainComplex::new(0, dims, diffs).map(|c| c.cohomology_ranks())
}
