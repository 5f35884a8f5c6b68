//! Basic connections and the basic curvature of a `TM`-connection on `A`.

use super::{show_section, show_vector, AConnection, ChartAlgebroid, Connection, Section, VectorField};
use crate::error::{Error, Result};
use crate::graded::{mask, Bundle, FormElement, FormMap};
use crate::report::{Check, Witness};
use crate::scalar::Scalar;
use crate::symcore::Polynomial;

fn check_rank<S: Scalar>(alg: &ChartAlgebroid<S>, nabla: &Connection<S>) -> Result<()> {
    if nabla.rank() != alg.rank() || nabla.vars() != alg.vars() {
        return Err(Error::IncompatibleBundles(format!(
            "connection of rank {} for an algebroid of rank {}",
            nabla.rank(),
            alg.rank()
        )));
    }
    Ok(())
}

/// `∇bas_α β = ∇_{ρ(β)} α + [α, β]`
pub fn basic_on_sections<S: Scalar>(
    alg: &ChartAlgebroid<S>,
    nabla: &Connection<S>,
    alpha: &[Polynomial<S>],
    beta: &[Polynomial<S>],
) -> Section<S> {
    let a = nabla.covariant(&alg.rho(beta), alpha);
    let b = alg.bracket(alpha, beta);
    a.iter().zip(&b).map(|(x, y)| x + y).collect()
}

/// `∇bas_α X = ρ(∇_X α) + [ρ(α), X]`
pub fn basic_on_vectors<S: Scalar>(
    alg: &ChartAlgebroid<S>,
    nabla: &Connection<S>,
    alpha: &[Polynomial<S>],
    x: &[Polynomial<S>],
) -> VectorField<S> {
    let a = alg.rho(&nabla.covariant(x, alpha));
    let b = alg.vector_bracket(&alg.rho(alpha), x);
    a.iter().zip(&b).map(|(p, q)| p + q).collect()
}

/// The basic `A`-connections on `A` and on `TM`, on the given bundles (whose
/// generators are `e_i` and `∂_a` in order).
pub fn basic_connection<S: Scalar>(
    alg: &ChartAlgebroid<S>,
    nabla: &Connection<S>,
    a_bundle: &Bundle,
    tm_bundle: &Bundle,
) -> Result<(AConnection<S>, AConnection<S>)> {
    check_rank(alg, nabla)?;
    let (r, m) = (alg.rank(), alg.dim());
    let on_a = (0..r)
        .map(|i| (0..r).map(|j| basic_on_sections(alg, nabla, &alg.basis(i), &alg.basis(j))).collect())
        .collect();
    let on_tm = (0..r)
        .map(|i| {
            (0..m)
                .map(|a| basic_on_vectors(alg, nabla, &alg.basis(i), &alg.coordinate_field(a)))
                .collect()
        })
        .collect();
    Ok((
        AConnection::new(alg.vars(), r, a_bundle, on_a)?,
        AConnection::new(alg.vars(), r, tm_bundle, on_tm)?,
    ))
}

/// `Rbas(α, β) X = ∇_X[α,β] - [∇_X α, β] - [α, ∇_X β] - ∇_{∇bas_β X} α + ∇_{∇bas_α X} β`
pub fn basic_curvature_value<S: Scalar>(
    alg: &ChartAlgebroid<S>,
    nabla: &Connection<S>,
    alpha: &[Polynomial<S>],
    beta: &[Polynomial<S>],
    x: &[Polynomial<S>],
) -> Section<S> {
    let t1 = nabla.covariant(x, &alg.bracket(alpha, beta));
    let t2 = alg.bracket(&nabla.covariant(x, alpha), beta);
    let t3 = alg.bracket(alpha, &nabla.covariant(x, beta));
    let t4 = nabla.covariant(&basic_on_vectors(alg, nabla, beta, x), alpha);
    let t5 = nabla.covariant(&basic_on_vectors(alg, nabla, alpha, x), beta);
    (0..alg.rank())
        .map(|i| &(&(&(&t1[i] - &t2[i]) - &t3[i]) - &t4[i]) + &t5[i])
        .collect()
}

/// `Rbas` as a map `TM → A` with values in two-forms:
/// `∂_a ↦ Σ_{j<k} θ^j θ^k Rbas(e_j, e_k) ∂_a`.
pub fn basic_curvature<S: Scalar>(
    alg: &ChartAlgebroid<S>,
    nabla: &Connection<S>,
    tm_bundle: &Bundle,
    a_bundle: &Bundle,
) -> Result<FormMap<S>> {
    check_rank(alg, nabla)?;
    let (r, m) = (alg.rank(), alg.dim());
    if tm_bundle.len() != m || a_bundle.len() != r {
        return Err(Error::IncompatibleBundles("bundle sizes do not match the algebroid".into()));
    }
    let images: Vec<FormElement<S>> = (0..m)
        .map(|a| {
            let x = alg.coordinate_field(a);
            let mut out = FormElement::zero(alg.vars(), r, a_bundle);
            for j in 0..r {
                for k in j + 1..r {
                    let v = basic_curvature_value(alg, nabla, &alg.basis(j), &alg.basis(k), &x);
                    for (l, c) in v.iter().enumerate() {
                        out.add_term(mask::from_indices(&[j, k]), l, c);
                    }
                }
            }
            out
        })
        .collect();
    let degree = match (tm_bundle.degrees().first(), a_bundle.degrees().first()) {
        (Some(&dt), Some(&da)) => 2 + da - dt,
        _ => 1,
    };
    FormMap::new(alg.vars(), r, tm_bundle, a_bundle, degree, images)
}

/// The three identities satisfied by the basic curvature:
/// `R_{∇bas}` on `A` is `-Rbas∘ρ`, on `TM` it is `-ρ∘Rbas`, and
/// `d_{∇bas} Rbas = 0`. Each is checked on basis elements.
pub fn curvature_identities<S: Scalar>(alg: &ChartAlgebroid<S>, nabla: &Connection<S>) -> Result<Vec<Check>> {
    check_rank(alg, nabla)?;
    let (r, m) = (alg.rank(), alg.dim());
    let vars = alg.vars();
    let bas_a = |a: &Section<S>, b: &Section<S>| basic_on_sections(alg, nabla, a, b);
    let bas_tm = |a: &Section<S>, x: &VectorField<S>| basic_on_vectors(alg, nabla, a, x);
    let rb = |a: &Section<S>, b: &Section<S>, x: &VectorField<S>| basic_curvature_value(alg, nabla, a, b, x);

    let mut on_a = None;
    let mut on_tm = None;
    'pairs: for i in 0..r {
        for j in i + 1..r {
            let (ei, ej) = (alg.basis(i), alg.basis(j));
            let br = alg.bracket(&ei, &ej);
            for k in 0..r {
                let g = alg.basis(k);
                let lhs = {
                    let p = bas_a(&ei, &bas_a(&ej, &g));
                    let q = bas_a(&ej, &bas_a(&ei, &g));
                    let s = bas_a(&br, &g);
                    (0..r).map(|n| &(&p[n] - &q[n]) - &s[n]).collect::<Section<S>>()
                };
                let rhs = rb(&ei, &ej, &alg.rho(&g));
                let diff: Section<S> = lhs.iter().zip(&rhs).map(|(a, b)| a + b).collect();
                if on_a.is_none() && diff.iter().any(|p| !p.is_zero()) {
                    on_a = Some(Witness::new(format!("(e{}, e{}) e{}", i + 1, j + 1, k + 1), show_section(&diff)));
                }
            }
            for a in 0..m {
                let x = alg.coordinate_field(a);
                let lhs = {
                    let p = bas_tm(&ei, &bas_tm(&ej, &x));
                    let q = bas_tm(&ej, &bas_tm(&ei, &x));
                    let s = bas_tm(&br, &x);
                    (0..m).map(|n| &(&p[n] - &q[n]) - &s[n]).collect::<VectorField<S>>()
                };
                let rhs = alg.rho(&rb(&ei, &ej, &x));
                let diff: VectorField<S> = lhs.iter().zip(&rhs).map(|(a, b)| a + b).collect();
                if on_tm.is_none() && diff.iter().any(|p| !p.is_zero()) {
                    on_tm = Some(Witness::new(
                        format!("(e{}, e{}) ∂{}", i + 1, j + 1, vars[a]),
                        show_vector(&diff, vars),
                    ));
                }
            }
            if on_a.is_some() && on_tm.is_some() {
                break 'pairs;
            }
        }
    }

    // (∇^Hom_α T)(X) = ∇bas_α (T X) - T(∇bas_α X)
    let mut bianchi = None;
    'triples: for i in 0..r {
        for j in i + 1..r {
            for k in j + 1..r {
                let e = [alg.basis(i), alg.basis(j), alg.basis(k)];
                for a in 0..m {
                    let x = alg.coordinate_field(a);
                    let mut total = alg.zero_section();
                    let others = [(1, 2), (0, 2), (0, 1)];
                    for (n, &(p, q)) in others.iter().enumerate() {
                        let t = bas_a(&e[n], &rb(&e[p], &e[q], &x));
                        let u = rb(&e[p], &e[q], &bas_tm(&e[n], &x));
                        let odd = n % 2 == 1;
                        for l in 0..r {
                            let v = &t[l] - &u[l];
                            if odd {
                                total[l] -= &v;
                            } else {
                                total[l] += &v;
                            }
                        }
                    }
                    // Σ_{p<q} (-1)^{p+q} R([e_p, e_q], e_rest)
                    for &(p, q, rest, odd) in &[(0, 1, 2, true), (0, 2, 1, false), (1, 2, 0, true)] {
                        let v = rb(&alg.bracket(&e[p], &e[q]), &e[rest], &x);
                        for l in 0..r {
                            if odd {
                                total[l] -= &v[l];
                            } else {
                                total[l] += &v[l];
                            }
                        }
                    }
                    if total.iter().any(|p| !p.is_zero()) {
                        bianchi = Some(Witness::new(
                            format!("(e{}, e{}, e{}) ∂{}", i + 1, j + 1, k + 1, vars[a]),
                            show_section(&total),
                        ));
                        break 'triples;
                    }
                }
            }
        }
    }
    Ok(vec![
        Check::from_option("basic curvature on A equals -Rbas∘ρ", on_a),
        Check::from_option("basic curvature on TM equals -ρ∘Rbas", on_tm),
        Check::from_option("d Rbas = 0", bianchi),
    ])
}
