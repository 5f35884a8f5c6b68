//! Kalkman's BRST differential on `W(g) ⊗ Ω(M)`:
//! `δ = d_W ⊗ 1 + 1 ⊗ d_DR + Σ θ^a ⊗ L_a - Σ μ^b ⊗ ι_b`.

use std::sync::Arc;

use super::{build_weil, Derivation, WeilAlgebra, WeilElement, WeilMonomial};
use crate::algebroid::{ChartAlgebroid, Connection};
use crate::error::{Error, Result};
use crate::graded::mask;
use crate::scalar::Scalar;
use crate::symcore::Polynomial;

/// The BRST operator of an infinitesimal action of `g` on a chart, given by
/// the action algebroid. `∂^a` plays the role of `dx^a`.
#[derive(Clone)]
pub struct Kalkman<S> {
    alg: Arc<ChartAlgebroid<S>>,
    weil: Derivation<S>,
    iota_sign: bool,
}

impl<S: Scalar> std::fmt::Debug for Kalkman<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Kalkman").field("weil", &self.weil).field("iota_sign", &self.iota_sign).finish()
    }
}

impl<S: Scalar> Kalkman<S> {
    /// Refuses algebroids whose structure functions depend on the point.
    pub fn new(alg: &Arc<ChartAlgebroid<S>>) -> Result<Self> {
        if !alg.has_constant_structure() {
            return Err(Error::NotActionAlgebroid("structure functions are not constant".into()));
        }
        let (vars, r, m) = (alg.vars(), alg.rank(), alg.dim());
        let theta = |i| WeilElement::theta(vars, r, i);
        let mu = |i| WeilElement::mu(vars, r, i);
        let zero = || WeilElement::zero(vars, r);
        // d_W θ^i = μ^i - ½ c^i_{jk} θ^j θ^k, d_W μ^i = -c^i_{jk} θ^j μ^k
        let mut weil = Derivation {
            functions: (0..m).map(|_| zero()).collect(),
            dx: (0..m).map(|_| zero()).collect(),
            theta: Vec::with_capacity(r),
            mu: Vec::with_capacity(r),
        };
        let half = S::half();
        for i in 0..r {
            let mut t = mu(i);
            let mut u = zero();
            for j in 0..r {
                for k in 0..r {
                    let c = alg.c(i, j, k);
                    if c.is_zero() {
                        continue;
                    }
                    t -= &theta(j).mul(&theta(k)).mul_poly(&c.scale(&half));
                    u -= &theta(j).mul(&mu(k)).mul_poly(c);
                }
            }
            weil.theta.push(t);
            weil.mu.push(u);
        }
        Ok(Kalkman {
            alg: alg.clone(),
            weil,
            iota_sign: false,
        })
    }

    /// The same operator with `+ Σ μ^b ⊗ ι_b`, for mutation tests.
    pub fn with_flipped_contraction(mut self) -> Self {
        self.iota_sign = !self.iota_sign;
        self
    }

    fn form(&self, dx: u32, f: &Polynomial<S>) -> WeilElement<S> {
        let mut m = WeilMonomial::one(self.alg.rank());
        m.dx = dx;
        WeilElement::monomial(self.alg.vars(), m, f)
    }

    fn d_dr(&self, dx: u32, f: &Polynomial<S>) -> WeilElement<S> {
        let (vars, r) = (self.alg.vars(), self.alg.rank());
        let mut out = WeilElement::zero(vars, r);
        for b in 0..self.alg.dim() {
            let df = f.deriv(b);
            if !df.is_zero() {
                out += &WeilElement::dx(vars, r, b).mul(&self.form(dx, &df));
            }
        }
        out
    }

    /// `L_X (f dx^A)` for `X = ρ(e_i)`.
    fn lie(&self, i: usize, dx: u32, f: &Polynomial<S>) -> WeilElement<S> {
        let (vars, r) = (self.alg.vars(), self.alg.rank());
        let x = self.alg.anchor(i);
        let mut out = self.form(dx, &f.directional(x));
        for a in mask::indices(dx) {
            let below = dx & ((1u32 << a) - 1);
            let above = dx & !below & !(1u32 << a);
            let mut dxa = WeilElement::zero(vars, r);
            for b in 0..self.alg.dim() {
                let c = x[a].deriv(b);
                if !c.is_zero() {
                    dxa += &WeilElement::dx(vars, r, b).mul_poly(&c);
                }
            }
            out += &self.form(below, f).mul(&dxa).mul(&self.form(above, &Polynomial::one(vars)));
        }
        out
    }

    /// `ι_X (f dx^A)` for `X = ρ(e_i)`.
    fn contract(&self, i: usize, dx: u32, f: &Polynomial<S>) -> WeilElement<S> {
        let (vars, r) = (self.alg.vars(), self.alg.rank());
        let x = self.alg.anchor(i);
        let mut out = WeilElement::zero(vars, r);
        for (pos, a) in mask::indices(dx).enumerate() {
            let c = &x[a] * f;
            if c.is_zero() {
                continue;
            }
            let term = self.form(dx & !(1u32 << a), &c);
            if pos % 2 == 1 {
                out -= &term;
            } else {
                out += &term;
            }
        }
        out
    }

    /// `δ` on an arbitrary element, written as `Σ w ⊗ η` with `w ∈ W(g)` and
    /// `η ∈ Ω(M)`.
    pub fn delta(&self, e: &WeilElement<S>) -> WeilElement<S> {
        let (vars, r) = (self.alg.vars(), self.alg.rank());
        let mut out = WeilElement::zero(vars, r);
        for (m, f) in e.terms() {
            // ∂^A θ^I μ^α = (-1)^{|A||I|} (θ^I μ^α)(∂^A)
            let swap = mask::len(m.dx) * mask::len(m.theta) % 2 == 1;
            let w = WeilElement::monomial(
                vars,
                WeilMonomial {
                    dx: 0,
                    theta: m.theta,
                    mu: m.mu.clone(),
                },
                &Polynomial::one(vars),
            );
            let w_odd = mask::len(m.theta) % 2 == 1;
            let eta = self.form(m.dx, f);
            let mut t = self.weil.apply(&w).mul(&eta);
            let dr = w.mul(&self.d_dr(m.dx, f));
            if w_odd {
                t -= &dr;
            } else {
                t += &dr;
            }
            for i in 0..r {
                t += &WeilElement::theta(vars, r, i).mul(&w).mul(&self.lie(i, m.dx, f));
                let iota = WeilElement::mu(vars, r, i).mul(&w).mul(&self.contract(i, m.dx, f));
                if w_odd ^ self.iota_sign {
                    t += &iota;
                } else {
                    t -= &iota;
                }
            }
            if swap {
                out -= &t;
            } else {
                out += &t;
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BrstVerdict {
    Equal,
    Differs {
        generator: String,
        kalkman: String,
        weil: String,
    },
}

/// Compares `δ` with the total differential of `W(A, ∇flat)` on coordinates
/// and on `∂^a`, `θ^i`, `μ^i`, in that order.
pub fn brst_compare_with<S: Scalar>(k: &Kalkman<S>, w: &WeilAlgebra<S>) -> BrstVerdict {
    for g in w.generators() {
        let e = w.element(g);
        let lhs = k.delta(&e);
        let rhs = w.d(&e, super::Which::Total);
        if lhs != rhs {
            return BrstVerdict::Differs {
                generator: w.generator_name(g),
                kalkman: lhs.to_string(),
                weil: rhs.to_string(),
            };
        }
    }
    BrstVerdict::Equal
}

pub fn brst_compare<S: Scalar>(alg: &Arc<ChartAlgebroid<S>>) -> Result<BrstVerdict> {
    let k = Kalkman::new(alg)?;
    let w = build_weil(alg, &Connection::flat(alg.vars(), alg.rank()))?;
    Ok(brst_compare_with(&k, &w))
}

