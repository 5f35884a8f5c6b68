//! Serre representations of Lie algebra extensions and the extension
//! attached to a representation of length one.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::Ruth;
use crate::algebroid::ChartAlgebroid;
use crate::error::{Error, Result};
use crate::graded::{mask, Bundle, FormElement, GradedBundle, Mask};
use crate::report::{all_ok, first_failure, Check};
use crate::scalar::Scalar;
use crate::symcore::Polynomial;

/// Basis `φ^I` of `Λl*`, ordered by degree then mask.
fn cochain_basis(n: usize) -> Vec<Mask> {
    (0..=n).flat_map(|k| mask::subsets(n, k)).collect()
}

fn cochain_name(m: Mask) -> String {
    if m == 0 {
        "1".into()
    } else {
        mask::indices(m).map(|a| format!("φ{}", a + 1)).collect()
    }
}

/// Replaces the factor at position `pos` of `φ^m` by `φ^img`, with the sign of
/// a derivation of the given parity.
fn substitute(m: Mask, pos: usize, k: usize, img: Mask, odd: bool) -> Option<(Mask, bool)> {
    let below = m & ((1u32 << k) - 1);
    let above = m & !below & !(1u32 << k);
    let (t, s1) = mask::wedge(below, img)?;
    let (t, s2) = mask::wedge(t, above)?;
    Some((t, s1 ^ s2 ^ (odd && pos % 2 == 1)))
}

/// The Serre representation of `g = g̃/l` on `C(l) = Λl*`, where the first
/// `l_dim` basis vectors of `g̃` span the ideal `l` and the others span the
/// image of the splitting `σ`. `D = d_l + ∇^σ + ι(R^σ)` with
/// `∇^σ_u φ = -φ∘ad_{σu}` and `R^σ(u, v) = [σu, σv] - σ[u, v]`.
pub fn serre_rep<S: Scalar>(gt: &ChartAlgebroid<S>, l_dim: usize) -> Result<Ruth<S>> {
    if !gt.is_point() {
        return Err(Error::UnsupportedBase("extensions are taken over a point".into()));
    }
    let n = gt.rank();
    if l_dim > n {
        return Err(Error::IndexOutOfRange { index: l_dim, len: n });
    }
    if let Some(bad) = first_failure(&gt.verify_axioms()) {
        return Err(Error::NotExtension(bad.to_string()));
    }
    let c = |i: usize, j: usize, k: usize| gt.c(i, j, k).as_constant().expect("constant at a point");
    for a in 0..l_dim {
        for j in 0..n {
            for k in l_dim..n {
                if !c(k, a, j).is_zero() {
                    return Err(Error::NotExtension(format!("l is not an ideal: [e{}, e{}] leaves l", a + 1, j + 1)));
                }
            }
        }
    }
    let vars = gt.vars().clone();
    let gd = n - l_dim;
    let konst = |s: S| Polynomial::constant(&vars, s);
    let table = |lo: usize, hi: usize| {
        let mut out = Vec::new();
        for j in lo..hi {
            for k in j + 1..hi {
                let v: Vec<Polynomial<S>> = (lo..hi).map(|i| konst(c(i, j, k))).collect();
                out.push(((j - lo, k - lo), v));
            }
        }
        out
    };
    let l_alg = ChartAlgebroid::new(&vars, vec![vec![]; l_dim], table(0, l_dim))?;
    let g_alg = Arc::new(ChartAlgebroid::new(&vars, vec![vec![]; gd], table(l_dim, n))?);

    let basis = cochain_basis(l_dim);
    let index: BTreeMap<Mask, usize> = basis.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let bundle: Bundle = Arc::new(GradedBundle::new(
        basis.iter().map(|&m| (cochain_name(m), mask::len(m) as i32)),
    )?);

    let mut images = Vec::with_capacity(basis.len());
    for &m in &basis {
        let mut out = FormElement::zero(&vars, gd, &bundle);
        for (t, coef) in l_alg.d_theta_mask(m) {
            out.add_term(0, index[&t], &coef);
        }
        // ∇^σ_u φ^a = -Σ_b c̃^a_{σu, b} φ^b
        for u in 0..gd {
            for (pos, a) in mask::indices(m).enumerate() {
                for b in 0..l_dim {
                    let w = c(a, l_dim + u, b);
                    if w.is_zero() {
                        continue;
                    }
                    if let Some((t, odd)) = substitute(m, pos, a, mask::single(b), false) {
                        out.add_signed(mask::single(u), index[&t], &konst(w), !odd);
                    }
                }
            }
        }
        // ι(R^σ(u, v)) with the l-component of [σu, σv]
        for u in 0..gd {
            for v in u + 1..gd {
                for (pos, a) in mask::indices(m).enumerate() {
                    let w = c(a, l_dim + u, l_dim + v);
                    if w.is_zero() {
                        continue;
                    }
                    let rest = m & !(1u32 << a);
                    out.add_signed(mask::from_indices(&[u, v]), index[&rest], &konst(w), pos % 2 == 1);
                }
            }
        }
        images.push(out);
    }
    Ruth::from_generator_images(&g_alg, &bundle, images)
}

/// The algebroid `Hom(F, E) ⊕ A` built from a representation `E → F` of
/// length one, with the checks that decide whether it is a Lie algebroid.
#[derive(Clone)]
pub struct Extension<S> {
    pub algebroid: ChartAlgebroid<S>,
    pub checks: Vec<Check>,
}

impl<S: Scalar> std::fmt::Debug for Extension<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Extension")
            .field("algebroid", &self.algebroid)
            .field("checks", &self.checks)
            .finish()
    }
}

impl<S: Scalar> Extension<S> {
    pub fn is_ok(&self) -> bool {
        all_ok(&self.checks)
    }
}

/// `[(S, α), (T, β)] = ([S, T] + ∇_α T - ∇_β S + K(α, β), [α, β])` with
/// `[S, T] = S∂T - T∂S` and `K = -ω_2`. The basis is `E_kl : F_l ↦ E_k` at
/// index `k·dim F + l`, followed by the basis of `A`.
pub fn extension_from_length1<S: Scalar>(r: &Ruth<S>) -> Result<Extension<S>> {
    let b = r.bundle();
    let e: Vec<usize> = b.in_degree(0);
    let f: Vec<usize> = b.in_degree(1);
    if e.len() + f.len() != b.len() {
        return Err(Error::Invalid("a length-one representation lives in degrees 0 and 1".into()));
    }
    let alg = r.algebroid();
    let vars = alg.vars().clone();
    let (ne, nf, ra) = (e.len(), f.len(), alg.rank());
    let hom = ne * nf;
    let total = hom + ra;
    let idx = |k: usize, l: usize| k * nf + l;
    let conn = r.connection()?;
    let partial = r.partial();
    let omega2 = r.component(2);
    let zero = Polynomial::zero(&vars);
    // d[q][m]: coefficient of F_q in ∂E_m
    let d: Vec<Vec<Polynomial<S>>> = (0..nf)
        .map(|q| (0..ne).map(|m| partial.image(e[m]).coefficient(0, f[q])).collect())
        .collect();

    let mut table: BTreeMap<(usize, usize), Vec<Polynomial<S>>> = BTreeMap::new();
    let put = |j: usize, k: usize, i: usize, c: &Polynomial<S>, table: &mut BTreeMap<_, Vec<Polynomial<S>>>| {
        if c.is_zero() {
            return;
        }
        let entry = table.entry((j, k)).or_insert_with(|| vec![zero.clone(); total]);
        entry[i] += c;
    };
    // [E_kl, E_mn] = d_lm E_kn - d_nk E_ml
    for k in 0..ne {
        for l in 0..nf {
            for m in 0..ne {
                for n in 0..nf {
                    let (s, t) = (idx(k, l), idx(m, n));
                    if s >= t {
                        continue;
                    }
                    put(s, t, idx(k, n), &d[l][m], &mut table);
                    put(s, t, idx(m, l), &-&d[n][k], &mut table);
                }
            }
        }
    }
    // [e_i, E_mn] = ∇_i ∘ E_mn - E_mn ∘ ∇_i
    for i in 0..ra {
        for m in 0..ne {
            for n in 0..nf {
                let t = idx(m, n);
                for k in 0..ne {
                    put(hom + i, t, idx(k, n), &conn.coefficient(i, e[m])[e[k]], &mut table);
                }
                for q in 0..nf {
                    put(hom + i, t, idx(m, q), &-&conn.coefficient(i, f[q])[f[n]], &mut table);
                }
            }
        }
    }
    // [e_i, e_j] = [e_i, e_j]_A - ω_2(e_i, e_j)
    for i in 0..ra {
        for j in i + 1..ra {
            for a in 0..ra {
                put(hom + i, hom + j, hom + a, alg.c(a, i, j), &mut table);
            }
            let ij = mask::from_indices(&[i, j]);
            for q in 0..nf {
                for k in 0..ne {
                    let w = omega2.image(f[q]).coefficient(ij, e[k]);
                    put(hom + i, hom + j, idx(k, q), &-&w, &mut table);
                }
            }
        }
    }
    let anchor: Vec<Vec<Polynomial<S>>> = (0..total)
        .map(|i| {
            if i < hom {
                vec![zero.clone(); vars.len()]
            } else {
                alg.anchor(i - hom).to_vec()
            }
        })
        .collect();
    let ext = ChartAlgebroid::new(&vars, anchor, table)?;
    let mut checks = ext.verify_axioms();
    let structure = r.check_structure();
    for n in 1..=3 {
        let mut c = structure.get(n).cloned().unwrap_or_else(|| Check::pass(""));
        c.name = format!("ext{n}");
        checks.push(c);
    }
    Ok(Extension { algebroid: ext, checks })
}
