//! Representations on exact complexes and transfer to cohomology.

use std::sync::Arc;

use super::{Ruth, RuthMorphism};
use crate::algebroid::{AConnection, ChartAlgebroid};
use crate::error::{Error, Result};
use crate::graded::{build_contraction, ContractionData, FormElement, FormMap};
use crate::report::all_ok;
use crate::scalar::Scalar;

fn check_differential<S: Scalar>(alg: &ChartAlgebroid<S>, partial: &FormMap<S>) -> Result<()> {
    if partial.degree() != 1 || partial.source() != partial.target() || partial.rank() != alg.rank() {
        return Err(Error::Invalid("∂ must be a degree-one endomorphism".into()));
    }
    if partial.images().iter().any(|x| x.max_form_degree().unwrap_or(0) > 0) {
        return Err(Error::Invalid("∂ must have form degree zero".into()));
    }
    if !partial.compose(partial).is_zero() {
        return Err(Error::Invalid("∂² ≠ 0".into()));
    }
    Ok(())
}

/// `d_∇` on `Ω(A; E)` for a connection stored by generator images.
fn d_nabla<S: Scalar>(alg: &ChartAlgebroid<S>, conn: &FormMap<S>, x: &FormElement<S>) -> FormElement<S> {
    let mut out = alg.d_frame(x);
    out += &conn.apply(x);
    out
}

fn connection_map<S: Scalar>(alg: &ChartAlgebroid<S>, nabla: &AConnection<S>) -> Result<FormMap<S>> {
    let b = nabla.bundle();
    FormMap::new(alg.vars(), alg.rank(), b, b, 1, (0..b.len()).map(|j| nabla.image(j)).collect())
}

/// The connection `∇' = Q∇Q + ∂Q∇Qh` with `Q = -h∂`, which commutes with
/// `∂`. Here `∇` acts on forms, so `∂` and `h` pick up Koszul signs.
pub fn compatible_connection<S: Scalar>(
    alg: &ChartAlgebroid<S>,
    partial: &FormMap<S>,
    nabla: &AConnection<S>,
    h: &FormMap<S>,
) -> Result<AConnection<S>> {
    let conn = connection_map(alg, nabla)?;
    let q = h.compose(partial).scale(&-S::one());
    let b = partial.source();
    let images: Vec<FormElement<S>> = (0..b.len())
        .map(|j| {
            let s = FormElement::generator(alg.vars(), alg.rank(), b, j);
            let mut out = q.apply(&d_nabla(alg, &conn, &q.apply(&s)));
            let hs = h.apply(&s);
            out += &partial.apply(&q.apply(&d_nabla(alg, &conn, &q.apply(&hs))));
            out
        })
        .collect();
    AConnection::from_images(alg.vars(), alg.rank(), b, &images)
}

/// `D = ∂ + ∇ + Σ_{n≥2} ω_n` with `ω_n = h∘d_∇(h)^{n-2}∘R_∇` on an exact
/// complex, where `h` is the homotopy of the contraction data (`h∂ + ∂h = -Id`).
/// When `∇` does not commute with `∂` it is first replaced by
/// [`compatible_connection`].
pub fn exact_rep<S: Scalar>(
    alg: &Arc<ChartAlgebroid<S>>,
    partial: &FormMap<S>,
    nabla: &AConnection<S>,
    cd: &ContractionData<S>,
) -> Result<Ruth<S>> {
    check_differential(alg, partial)?;
    let h = &cd.h;
    let b = partial.source().clone();
    if nabla.bundle() != &b || h.source() != &b || h.target() != &b || h.degree() != -1 {
        return Err(Error::IncompatibleBundles("∂, ∇ and h must act on the same bundle".into()));
    }
    let id = FormMap::identity(alg.vars(), alg.rank(), &b);
    let homotopy = h.compose(partial).add(&partial.compose(h)).add(&id);
    if let Some((j, _)) = homotopy.first_nonzero() {
        return Err(Error::NotExact(format!("h∂ + ∂h ≠ -Id on `{}`", b.name(j))));
    }
    let conn0 = connection_map(alg, nabla)?;
    let commutes = partial.graded_commutator(&conn0).is_zero();
    let nabla = if commutes {
        nabla.clone()
    } else {
        compatible_connection(alg, partial, nabla, h)?
    };
    let conn = connection_map(alg, &nabla)?;
    // d_∇(h) = d_∇ h + h d_∇, C∞-linear of degree 0
    let dh = |x: &FormElement<S>| {
        let mut y = d_nabla(alg, &conn, &h.apply(x));
        y += &h.apply(&d_nabla(alg, &conn, x));
        y
    };
    let mut images = Vec::with_capacity(b.len());
    for j in 0..b.len() {
        let s = FormElement::generator(alg.vars(), alg.rank(), &b, j);
        let mut out = partial.image(j).clone();
        out += &nabla.image(j);
        let mut x = d_nabla(alg, &conn, &d_nabla(alg, &conn, &s));
        for _ in 2..=alg.rank() {
            if x.is_zero() {
                break;
            }
            out += &h.apply(&x);
            x = dh(&x);
        }
        images.push(out);
    }
    Ruth::from_generator_images(alg, &b, images)
}

/// The isomorphism `Φ = Id + Φ_1 + Φ_2 + …` from `source` to `target`, two
/// representations with the same `∂`, built degree by degree as
/// `Φ_n = h∘(D'Φ_{<n} - Φ_{<n}D)_n`.
pub fn exact_isomorphism<S: Scalar>(
    source: &Ruth<S>,
    target: &Ruth<S>,
    cd: &ContractionData<S>,
) -> Result<RuthMorphism<S>> {
    let h = &cd.h;
    if source.bundle() != target.bundle() || source.algebroid() != target.algebroid() {
        return Err(Error::IncompatibleBundles("both structures must live on the same bundle".into()));
    }
    if source.partial() != target.partial() {
        return Err(Error::Invalid("the two structures have different ∂".into()));
    }
    let alg = source.algebroid();
    let b = source.bundle();
    let mut phi = FormMap::identity(alg.vars(), alg.rank(), b);
    for n in 1..=alg.rank() {
        let rest: Vec<FormElement<S>> = (0..b.len())
            .map(|j| {
                let mut d = target.apply(phi.image(j));
                d -= &phi.apply(source.image(j));
                h.apply(&d.form_part(n))
            })
            .collect();
        let step = FormMap::new(alg.vars(), alg.rank(), b, b, 0, rest)?;
        phi = phi.add(&step);
    }
    RuthMorphism::new(source, target, phi.images().to_vec())
}

/// Homological perturbation: with `δ = D - ∂`,
/// `D_H = p Σ_j (δh)^j δ i` and `Φ = p Σ_j (δh)^j`. Requires contraction data
/// for `∂`; when none is given it is built from `∂` (constant coefficients
/// or an exact complex).
pub fn transfer<S: Scalar>(r: &Ruth<S>, cd: Option<&ContractionData<S>>) -> Result<(Ruth<S>, RuthMorphism<S>)> {
    let partial = r.partial();
    let built;
    let cd = match cd {
        Some(c) => c,
        None => {
            built = build_contraction(&partial)?;
            &built
        }
    };
    if cd.p.source() != r.bundle() || !all_ok(&cd.verify(&partial)) {
        return Err(Error::Invalid("contraction data do not satisfy the side conditions".into()));
    }
    let alg = r.algebroid();
    let hb = cd.harmonic().clone();
    let delta = |x: &FormElement<S>| {
        let mut y = r.apply(x);
        y -= &partial.apply(x);
        y
    };
    // Σ_j (δh)^j x; each step raises form degree, so the sum is finite
    let series = |x: &FormElement<S>| {
        let mut total = x.clone();
        let mut term = x.clone();
        for _ in 0..=alg.rank() {
            term = delta(&cd.h.apply(&term));
            if term.is_zero() {
                break;
            }
            total += &term;
        }
        total
    };
    let images: Vec<FormElement<S>> = (0..hb.len())
        .map(|t| {
            let it = cd.i.image(t).clone();
            cd.p.apply(&series(&delta(&it)))
        })
        .collect();
    let h_rep = Ruth::from_generator_images(alg, &hb, images)?;
    let phi_images: Vec<FormElement<S>> = (0..r.bundle().len())
        .map(|j| cd.p.apply(&series(&r.generator(j))))
        .collect();
    let phi = RuthMorphism::new(r, &h_rep, phi_images)?;
    Ok((h_rep, phi))
}
