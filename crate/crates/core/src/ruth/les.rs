//! The long exact sequence of a length-one representation over a point,
//! `… → H^n(H^0) → H^n(E) → H^{n-1}(H^1) → H^{n+1}(H^0) → …`.

use std::sync::Arc;

use super::Ruth;
use crate::error::{Error, Result};
use crate::graded::{mask, Bundle, FormElement, GradedBundle, Mask};
use crate::linalg::{span_dim, Matrix};
use crate::scalar::Scalar;
use crate::symcore::Polynomial;

/// Rank bookkeeping at one node `H(W) -f→ H(X) -g→ H(Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesNode {
    /// `"H^n(H0)"`, `"H^n(E)"` or `"H^{n-1}(H1)"`.
    pub label: String,
    pub betti: usize,
    pub image_dim: usize,
    pub kernel_dim: usize,
    /// `g ∘ f = 0` in cohomology.
    pub composite_zero: bool,
}

impl LesNode {
    pub fn is_exact(&self) -> bool {
        self.composite_zero && self.image_dim == self.kernel_dim
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesReport {
    pub nodes: Vec<LesNode>,
}

impl LesReport {
    pub fn is_exact(&self) -> bool {
        self.nodes.iter().all(LesNode::is_exact)
    }

    /// Alternating sum of Betti numbers along the sequence.
    pub fn euler_defect(&self) -> i64 {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, n)| if i % 2 == 0 { n.betti as i64 } else { -(n.betti as i64) })
            .sum()
    }
}

/// Cocycles, a basis of coboundaries and the differential of one degree.
struct Level<S> {
    dim: usize,
    d: Matrix<S>,
    z: Vec<Vec<S>>,
    b: Vec<Vec<S>>,
}

fn column_basis<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<S>> {
    let (_, pivots) = m.rref();
    pivots.into_iter().map(|c| m.column(c)).collect()
}

fn levels<S: Scalar>(r: &Ruth<S>, lo: i32, hi: i32) -> Result<Vec<Level<S>>> {
    (lo..=hi)
        .map(|n| {
            let d = r.total_matrix(n)?;
            let before = r.total_matrix(n - 1)?;
            Ok(Level {
                dim: r.total_basis(n).len(),
                z: d.nullspace(),
                b: column_basis(&before),
                d,
            })
        })
        .collect()
}

fn node<S: Scalar>(
    label: String,
    x: &Level<S>,
    f_of_zw: &[Vec<S>],
    g: &dyn Fn(&[S]) -> Vec<S>,
    y: &Level<S>,
) -> LesNode {
    let bx = x.b.len();
    let betti = x.z.len() - bx;
    let mut with_b: Vec<Vec<S>> = f_of_zw.to_vec();
    with_b.extend(x.b.iter().cloned());
    let image_dim = span_dim(x.dim, &with_b) - bx;
    // {z ∈ Z_X : g(z) ∈ B_Y}
    let mut cols: Vec<Vec<S>> = x.z.iter().map(|z| g(z)).collect();
    cols.extend(y.b.iter().cloned());
    let m = Matrix::from_columns(y.dim, &cols);
    let kernel_dim = (cols.len() - m.rank()) - bx;
    let mut gf: Vec<Vec<S>> = f_of_zw.iter().map(|v| g(v)).collect();
    let by = y.b.len();
    gf.extend(y.b.iter().cloned());
    let composite_zero = span_dim(y.dim, &gf) == by;
    LesNode {
        label,
        betti,
        image_dim,
        kernel_dim,
        composite_zero,
    }
}

fn index_of(basis: &[(Mask, usize)], key: (Mask, usize)) -> usize {
    basis.binary_search(&key).expect("basis element")
}

/// Builds `C(A; H^0)`, `Ω(A; E)` and `C(A; H^1)` (the last shifted so that
/// its degree `n` is `Ω^{n-1}(A; H^1)`), the inclusion, the projection and
/// the connecting map found by the snake lemma, then checks exactness at
/// every node by rank arithmetic.
pub fn long_exact_sequence<S: Scalar>(r: &Ruth<S>) -> Result<LesReport> {
    let alg = r.algebroid();
    if !alg.is_point() {
        return Err(Error::UnsupportedBase("the exact sequence is computed over a point".into()));
    }
    let e = r.bundle();
    let e0 = e.in_degree(0);
    let e1 = e.in_degree(1);
    if e0.len() + e1.len() != e.len() {
        return Err(Error::Invalid("a length-one representation lives in degrees 0 and 1".into()));
    }
    let vars = alg.vars();
    let rank = alg.rank();
    let konst = |s: S| Polynomial::constant(vars, s);
    let coeff = |x: &FormElement<S>, m: Mask, j: usize| x.coefficient(m, j).as_constant().expect("constant at a point");

    // ∂: E0 → E1 and its kernel / cokernel
    let partial = r.partial();
    let mut p = Matrix::zeros(e1.len(), e0.len());
    for (c, &j) in e0.iter().enumerate() {
        for (row, &t) in e1.iter().enumerate() {
            p[(row, c)] = coeff(partial.image(j), 0, t);
        }
    }
    let ker = p.nullspace();
    let im = column_basis(&p);
    let mut span = im.clone();
    let mut complement = Vec::new();
    for k in 0..e1.len() {
        let mut v = vec![S::zero(); e1.len()];
        v[k] = S::one();
        span.push(v.clone());
        if span_dim(e1.len(), &span) == im.len() + complement.len() + 1 {
            complement.push(v);
        } else {
            span.pop();
        }
    }
    let split = Matrix::from_columns(e1.len(), &[im.clone(), complement.clone()].concat());
    let split_inv = split.inverse().expect("basis of E1");
    // projection E1 → H1 in complement coordinates
    let pr = |v: &[S]| -> Vec<S> {
        let c = split_inv.apply(v);
        c[im.len()..].to_vec()
    };

    let conn = r.connection()?;
    let h0: Bundle = Arc::new(GradedBundle::new((0..ker.len()).map(|t| (format!("h0.{}", t + 1), 0)))?);
    let h1: Bundle = Arc::new(GradedBundle::new((0..complement.len()).map(|t| (format!("h1.{}", t + 1), 1)))?);
    let kmat = Matrix::from_columns(e0.len(), &ker);
    let mut k_images = vec![FormElement::zero(vars, rank, &h0); ker.len()];
    let mut q_images = vec![FormElement::zero(vars, rank, &h1); complement.len()];
    for i in 0..rank {
        let g0 = |v: &[S]| -> Vec<S> {
            let mut out = vec![S::zero(); e0.len()];
            for (c, &j) in e0.iter().enumerate() {
                for (row, &t) in e0.iter().enumerate() {
                    let w = conn.coefficient(i, j)[t].as_constant().expect("constant");
                    out[row] = out[row].clone() + w * v[c].clone();
                }
            }
            out
        };
        let g1 = |v: &[S]| -> Vec<S> {
            let mut out = vec![S::zero(); e1.len()];
            for (c, &j) in e1.iter().enumerate() {
                for (row, &t) in e1.iter().enumerate() {
                    let w = conn.coefficient(i, j)[t].as_constant().expect("constant");
                    out[row] = out[row].clone() + w * v[c].clone();
                }
            }
            out
        };
        for (t, v) in ker.iter().enumerate() {
            let a = kmat
                .solve(&g0(v))
                .ok_or_else(|| Error::Invalid("∇ does not preserve ker ∂".into()))?;
            for (s, w) in a.into_iter().enumerate() {
                if !w.is_zero() {
                    k_images[t].add_term(mask::single(i), s, &konst(w));
                }
            }
        }
        for (t, v) in complement.iter().enumerate() {
            for (s, w) in pr(&g1(v)).into_iter().enumerate() {
                if !w.is_zero() {
                    q_images[t].add_term(mask::single(i), s, &konst(w));
                }
            }
        }
    }
    let k_rep = Ruth::from_generator_images(alg, &h0, k_images)?;
    let q_rep = Ruth::from_generator_images(alg, &h1, q_images)?;

    let lo = 0;
    let hi = rank as i32 + 1;
    let tl = levels(r, lo - 1, hi + 1)?;
    let kl = levels(&k_rep, lo - 1, hi + 1)?;
    let ql = levels(&q_rep, lo - 1, hi + 1)?;
    let at = |n: i32| (n - lo + 1) as usize;

    let iota = |n: i32, v: &[S]| -> Vec<S> {
        let src = k_rep.total_basis(n);
        let tgt = r.total_basis(n);
        let mut out = vec![S::zero(); tgt.len()];
        for (c, &(m, t)) in src.iter().enumerate() {
            if v[c].is_zero() {
                continue;
            }
            for (row, &j) in e0.iter().enumerate() {
                let idx = index_of(&tgt, (m, j));
                out[idx] = out[idx].clone() + ker[t][row].clone() * v[c].clone();
            }
        }
        out
    };
    let pi = |n: i32, v: &[S]| -> Vec<S> {
        let src = r.total_basis(n);
        let tgt = q_rep.total_basis(n);
        let mut out = vec![S::zero(); tgt.len()];
        for (c, &(m, j)) in src.iter().enumerate() {
            let Some(row) = e1.iter().position(|&x| x == j) else { continue };
            if v[c].is_zero() {
                continue;
            }
            let mut unit = vec![S::zero(); e1.len()];
            unit[row] = S::one();
            for (s, w) in pr(&unit).into_iter().enumerate() {
                let idx = index_of(&tgt, (m, s));
                out[idx] = out[idx].clone() + w * v[c].clone();
            }
        }
        out
    };
    // δ(q) = k where D x = ι k and π x = q
    let connecting = |n: i32, q: &[S]| -> Result<Vec<S>> {
        let (tn, kn1, qn) = (tl[at(n)].dim, kl[at(n + 1)].dim, ql[at(n)].dim);
        let tn1 = tl[at(n + 1)].dim;
        let mut m = Matrix::zeros(qn + tn1, tn + kn1);
        for c in 0..tn {
            let mut unit = vec![S::zero(); tn];
            unit[c] = S::one();
            for (row, w) in pi(n, &unit).into_iter().enumerate() {
                m[(row, c)] = w;
            }
            for row in 0..tn1 {
                m[(qn + row, c)] = tl[at(n)].d[(row, c)].clone();
            }
        }
        for c in 0..kn1 {
            let mut unit = vec![S::zero(); kn1];
            unit[c] = S::one();
            for (row, w) in iota(n + 1, &unit).into_iter().enumerate() {
                m[(qn + row, tn + c)] = -w;
            }
        }
        let mut rhs = q.to_vec();
        rhs.extend(vec![S::zero(); tn1]);
        let sol = m
            .solve(&rhs)
            .ok_or_else(|| Error::NotRegular("a cocycle of C(A; H1) does not lift".into()))?;
        Ok(sol[tn..].to_vec())
    };

    let mut nodes = Vec::new();
    for n in lo..=hi {
        let (k, t, q) = (&kl[at(n)], &tl[at(n)], &ql[at(n)]);
        let delta_in = ql[at(n - 1)]
            .z
            .iter()
            .map(|z| connecting(n - 1, z))
            .collect::<Result<Vec<_>>>()?;
        nodes.push(node(format!("H^{n}(H0)"), k, &delta_in, &|v| iota(n, v), t));
        let iota_in: Vec<Vec<S>> = k.z.iter().map(|z| iota(n, z)).collect();
        nodes.push(node(format!("H^{n}(E)"), t, &iota_in, &|v| pi(n, v), q));
        let pi_in: Vec<Vec<S>> = t.z.iter().map(|z| pi(n, z)).collect();
        let delta = |v: &[S]| connecting(n, v).expect("cocycles lift");
        nodes.push(node(format!("H^{}(H1)", n - 1), q, &pi_in, &delta, &kl[at(n + 1)]));
    }
    Ok(LesReport { nodes })
}
