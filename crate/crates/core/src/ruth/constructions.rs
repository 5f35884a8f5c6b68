use std::sync::Arc;

use super::{Ruth, RuthMorphism};
use crate::algebroid::{basic_curvature_value, basic_on_sections, basic_on_vectors, AConnection, ChartAlgebroid, Connection};
use crate::error::{Error, Result};
use crate::graded::{exterior, mask, Bundle, FormElement, GradedBundle};
use crate::scalar::Scalar;
use crate::symcore::Polynomial;

fn adjoint_bundle<S: Scalar>(alg: &ChartAlgebroid<S>) -> Bundle {
    let a = alg.section_bundle(0);
    let t = alg.tangent_bundle(1);
    let gens = (0..a.len())
        .map(|j| (a.name(j).to_string(), 0))
        .chain((0..t.len()).map(|b| (t.name(b).to_string(), 1)));
    Arc::new(GradedBundle::new(gens).expect("distinct names"))
}

/// `Ad_∇ = ρ + ∇bas + Rbas` on `A ⊕ TM[-1]`.
pub fn adjoint<S: Scalar>(alg: &Arc<ChartAlgebroid<S>>, nabla: &Connection<S>) -> Result<Ruth<S>> {
    if nabla.rank() != alg.rank() || nabla.vars() != alg.vars() {
        return Err(Error::IncompatibleBundles("the connection must live on A".into()));
    }
    let (r, m) = (alg.rank(), alg.dim());
    let vars = alg.vars();
    let bundle = adjoint_bundle(alg);
    let mut images = Vec::with_capacity(r + m);
    for j in 0..r {
        let ej = alg.basis(j);
        let mut out = FormElement::zero(vars, r, &bundle);
        for (a, c) in alg.anchor(j).iter().enumerate() {
            out.add_term(0, r + a, c);
        }
        for i in 0..r {
            let v = basic_on_sections(alg, nabla, &alg.basis(i), &ej);
            for (k, c) in v.iter().enumerate() {
                out.add_term(mask::single(i), k, c);
            }
        }
        images.push(out);
    }
    for a in 0..m {
        let x = alg.coordinate_field(a);
        let mut out = FormElement::zero(vars, r, &bundle);
        for i in 0..r {
            let v = basic_on_vectors(alg, nabla, &alg.basis(i), &x);
            for (b, c) in v.iter().enumerate() {
                out.add_term(mask::single(i), r + b, c);
            }
        }
        for j in 0..r {
            for k in j + 1..r {
                let v = basic_curvature_value(alg, nabla, &alg.basis(j), &alg.basis(k), &x);
                for (l, c) in v.iter().enumerate() {
                    out.add_term(mask::from_indices(&[j, k]), l, c);
                }
            }
        }
        images.push(out);
    }
    Ruth::from_generator_images(alg, &bundle, images)
}

/// The isomorphism `Ad_{∇'} → Ad_∇` with `Φ_0 = Id` and
/// `Φ_1(α)X = ∇_X α - ∇'_X α`.
pub fn change_of_connection<S: Scalar>(
    alg: &Arc<ChartAlgebroid<S>>,
    nabla: &Connection<S>,
    nabla_prime: &Connection<S>,
) -> Result<RuthMorphism<S>> {
    let source = adjoint(alg, nabla_prime)?;
    let target = adjoint(alg, nabla)?;
    let (r, m) = (alg.rank(), alg.dim());
    let mut images: Vec<FormElement<S>> = (0..r + m).map(|j| source.generator(j)).collect();
    for a in 0..m {
        for i in 0..r {
            for k in 0..r {
                let c = nabla.gamma(a, k, i) - nabla_prime.gamma(a, k, i);
                images[r + a].add_term(mask::single(i), k, &c);
            }
        }
    }
    RuthMorphism::new(&source, &target, images)
}

/// `E ⊕ E[-1]` with `∂ = Id`, the connection on both copies and
/// `ω_2 = -R_∇ : E[-1] → E`.
pub fn double<S: Scalar>(alg: &Arc<ChartAlgebroid<S>>, nabla: &AConnection<S>) -> Result<Ruth<S>> {
    let e = nabla.bundle();
    if e.degrees().iter().any(|&d| d != 0) {
        return Err(Error::Invalid("the double is built from an ungraded bundle".into()));
    }
    let n = e.len();
    let r = alg.rank();
    let vars = alg.vars();
    let gens = (0..n)
        .map(|j| (e.name(j).to_string(), 0))
        .chain((0..n).map(|j| (format!("{}[1]", e.name(j)), 1)));
    let bundle: Bundle = Arc::new(GradedBundle::new(gens)?);
    let curv = nabla.curvature_map(alg);
    let mut images = Vec::with_capacity(2 * n);
    for j in 0..n {
        let conn = nabla.image(j);
        let mut out = FormElement::zero(vars, r, &bundle);
        out.add_term(0, n + j, &Polynomial::one(vars));
        for (mk, k, c) in conn.terms() {
            out.add_term(mk, k, c);
        }
        images.push(out);
    }
    for j in 0..n {
        let conn = nabla.image(j);
        let mut out = FormElement::zero(vars, r, &bundle);
        for (mk, k, c) in conn.terms() {
            out.add_term(mk, n + k, c);
        }
        for (mk, k, c) in curv.image(j).terms() {
            out.add_signed(mk, k, c, true);
        }
        images.push(out);
    }
    Ruth::from_generator_images(alg, &bundle, images)
}

/// The representation on the trivial line in degrees `0` and `n - 1`
/// induced by an `n`-form `ω`: `D(u) = ω ⊗ 1`. It is a representation iff
/// `ω` is closed.
pub fn forms_rep<S: Scalar>(alg: &Arc<ChartAlgebroid<S>>, omega: &FormElement<S>) -> Result<Ruth<S>> {
    let degrees: Vec<usize> = omega.terms().map(|(m, _, _)| mask::len(m)).collect();
    let n = match degrees.first() {
        Some(&n) if degrees.iter().all(|&d| d == n) => n,
        Some(_) => return Err(Error::Invalid("the form must be homogeneous".into())),
        None => return Err(Error::Invalid("the form must be nonzero".into())),
    };
    if n == 0 || omega.bundle().len() != 1 {
        return Err(Error::Invalid("expected a scalar form of positive degree".into()));
    }
    let bundle: Bundle = Arc::new(GradedBundle::new([("1".to_string(), 0), ("u".to_string(), n as i32 - 1)])?);
    let vars = alg.vars();
    let mut du = FormElement::zero(vars, alg.rank(), &bundle);
    for (m, _, c) in omega.terms() {
        du.add_term(m, 0, c);
    }
    Ruth::from_generator_images(alg, &bundle, vec![FormElement::zero(vars, alg.rank(), &bundle), du])
}

/// The dual representation on `E*` (generators `s*` of degree `-deg s`), with
/// `⟨θ^I s_l*, θ^J s_k⟩ = (-1)^{|J||s_l*|} θ^I θ^J δ_{lk}` and
/// `d⟨η, η'⟩ = ⟨D*η, η'⟩ + (-1)^{|η|} ⟨η, Dη'⟩`.
pub fn dualize<S: Scalar>(r: &Ruth<S>) -> Result<Ruth<S>> {
    let e = r.bundle();
    let dual: Bundle = Arc::new(e.dual());
    let alg = r.algebroid();
    let mut images: Vec<FormElement<S>> = (0..e.len())
        .map(|_| FormElement::zero(alg.vars(), alg.rank(), &dual))
        .collect();
    for l in 0..e.len() {
        for (m, j, c) in r.image(l).terms() {
            let odd = (e.degree(j) * (1 + mask::len(m) as i32)).rem_euclid(2) == 1;
            images[j].add_signed(m, l, c, !odd);
        }
    }
    Ruth::from_generator_images(alg, &dual, images)
}

/// `D(s ⊗ t) = D(s) ⊗ t + (-1)^{|s|} s ⊗ D(t)`.
pub fn tensor<S: Scalar>(a: &Ruth<S>, b: &Ruth<S>) -> Result<Ruth<S>> {
    if a.algebroid() != b.algebroid() {
        return Err(Error::IncompatibleBundles("representations of different algebroids".into()));
    }
    let (e, f) = (a.bundle(), b.bundle());
    let target: Bundle = Arc::new(e.tensor(f));
    let mut images = Vec::with_capacity(e.len() * f.len());
    for i in 0..e.len() {
        for j in 0..f.len() {
            let mut out = exterior(a.image(i), &b.generator(j), &target)?;
            let second = exterior(&a.generator(i), b.image(j), &target)?;
            if e.degree(i).rem_euclid(2) == 1 {
                out -= &second;
            } else {
                out += &second;
            }
            images.push(out);
        }
    }
    Ruth::from_generator_images(a.algebroid(), &target, images)
}

/// Sorts a word of generators into nondecreasing order using
/// `v ∧ w = -(-1)^{|v||w|} w ∧ v`; `None` if it vanishes.
fn normalize_word(word: &mut [usize], degrees: &[i32]) -> Option<bool> {
    let mut odd = false;
    for i in 1..word.len() {
        let mut k = i;
        while k > 0 && word[k - 1] > word[k] {
            let (v, w) = (degrees[word[k - 1]], degrees[word[k]]);
            odd ^= (v * w).rem_euclid(2) == 0;
            word.swap(k - 1, k);
            k -= 1;
        }
    }
    for w in word.windows(2) {
        if w[0] == w[1] && degrees[w[0]].rem_euclid(2) == 0 {
            return None;
        }
    }
    Some(odd)
}

fn words(n: usize, k: usize, degrees: &[i32]) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for w in words(n, k - 1, degrees) {
        let start = w.last().copied().unwrap_or(0);
        for j in start..n {
            if w.last() == Some(&j) && degrees[j].rem_euclid(2) == 0 {
                continue;
            }
            let mut v = w.clone();
            v.push(j);
            out.push(v);
        }
    }
    out
}

/// `Λ^k E`, the graded-antisymmetric part of `E^{⊗k}`, with `D` acting as a
/// derivation.
pub fn exterior_power<S: Scalar>(r: &Ruth<S>, k: usize) -> Result<Ruth<S>> {
    let e = r.bundle();
    let degrees = e.degrees().to_vec();
    let basis = words(e.len(), k, &degrees);
    let names = basis.iter().map(|w| {
        let name = if w.is_empty() {
            "1".to_string()
        } else {
            w.iter().map(|&j| e.name(j)).collect::<Vec<_>>().join("∧")
        };
        (name, w.iter().map(|&j| degrees[j]).sum::<i32>())
    });
    let bundle: Bundle = Arc::new(GradedBundle::new(names)?);
    let alg = r.algebroid();
    let mut images = Vec::with_capacity(basis.len());
    for w in &basis {
        let mut out = FormElement::zero(alg.vars(), alg.rank(), &bundle);
        let mut prefix = 0;
        for (slot, &j) in w.iter().enumerate() {
            for (m, t, c) in r.image(j).terms() {
                let mut word = w.clone();
                word[slot] = t;
                let Some(swap) = normalize_word(&mut word, &degrees) else { continue };
                let idx = basis.binary_search(&word).expect("normalized words are basis elements");
                let odd = ((1 + mask::len(m) as i32) * prefix).rem_euclid(2) == 1;
                out.add_signed(m, idx, c, odd ^ swap);
            }
            prefix += degrees[j];
        }
        images.push(out);
    }
    Ruth::from_generator_images(alg, &bundle, images)
}
