//! Infinitesimally multiplicative forms `σ: A → T*M`.

use crate::algebroid::ChartAlgebroid;
use crate::error::{Error, Result};
use crate::report::Witness;
use crate::scalar::Scalar;
use crate::symcore::Polynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ImVerdict {
    Im,
    /// `equation` is 1 for `⟨σα, ρβ⟩ = -⟨σβ, ρα⟩` and 2 for
    /// `σ[α, β] = L_{ρα} σβ - L_{ρβ} σα + d⟨σα, ρβ⟩`.
    Fails {
        equation: usize,
        pair: (usize, usize),
        witness: Witness,
    },
}

/// `(L_X ω)_b = X(ω_b) + Σ_a ω_a ∂_b X^a`
fn lie_one_form<S: Scalar>(x: &[Polynomial<S>], omega: &[Polynomial<S>]) -> Vec<Polynomial<S>> {
    (0..omega.len())
        .map(|b| {
            let mut out = omega[b].directional(x);
            for (a, w) in omega.iter().enumerate() {
                out += &(w * &x[a].deriv(b));
            }
            out
        })
        .collect()
}

fn pairing<S: Scalar>(omega: &[Polynomial<S>], x: &[Polynomial<S>]) -> Polynomial<S> {
    let mut out = Polynomial::zero(omega[0].vars());
    for (w, v) in omega.iter().zip(x) {
        out += &(w * v);
    }
    out
}

fn show_one_form<S: Scalar>(alg: &ChartAlgebroid<S>, w: &[Polynomial<S>]) -> String {
    let parts: Vec<String> = w
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(a, p)| format!("({p})*d{}", alg.vars()[a]))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Checks both IM equations on all pairs of basis sections; `sigma[i]` holds
/// the components of `σ(e_i)` in the coordinate coframe. Given the first
/// equation, the second is tensorial and antisymmetric, so basis pairs
/// `i < j` decide it.
pub fn im_form_check<S: Scalar>(alg: &ChartAlgebroid<S>, sigma: &[Vec<Polynomial<S>>]) -> Result<ImVerdict> {
    let (r, m) = (alg.rank(), alg.dim());
    if sigma.len() != r || sigma.iter().any(|s| s.len() != m) {
        return Err(Error::Shape {
            block: "sigma".into(),
            msg: format!("expected {r} columns of {m} entries"),
        });
    }
    if m == 0 {
        return Ok(ImVerdict::Im);
    }
    let name = |i: usize, j: usize| format!("(e{}, e{})", i + 1, j + 1);
    for i in 0..r {
        for j in i..r {
            let v = &pairing(&sigma[i], alg.anchor(j)) + &pairing(&sigma[j], alg.anchor(i));
            if !v.is_zero() {
                return Ok(ImVerdict::Fails {
                    equation: 1,
                    pair: (i, j),
                    witness: Witness::new(name(i, j), v),
                });
            }
        }
    }
    for i in 0..r {
        for j in i + 1..r {
            let mut lhs = vec![Polynomial::zero(alg.vars()); m];
            for k in 0..r {
                let c = alg.c(k, i, j);
                for b in 0..m {
                    lhs[b] += &(c * &sigma[k][b]);
                }
            }
            let l1 = lie_one_form(alg.anchor(i), &sigma[j]);
            let l2 = lie_one_form(alg.anchor(j), &sigma[i]);
            let p = pairing(&sigma[i], alg.anchor(j));
            let defect: Vec<Polynomial<S>> = (0..m)
                .map(|b| &(&(&lhs[b] - &l1[b]) + &l2[b]) - &p.deriv(b))
                .collect();
            if defect.iter().any(|d| !d.is_zero()) {
                return Ok(ImVerdict::Fails {
                    equation: 2,
                    pair: (i, j),
                    witness: Witness::new(name(i, j), show_one_form(alg, &defect)),
                });
            }
        }
    }
    Ok(ImVerdict::Im)
}
