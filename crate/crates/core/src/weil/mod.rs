//! The connection-dependent Weil algebra `W(A, ∇)` over a chart, its
//! horizontal and vertical differentials, Kalkman's BRST operator and IM
//! forms.

mod brst;
mod element;
mod im;

use std::sync::Arc;

pub use brst::{brst_compare, brst_compare_with, BrstVerdict, Kalkman};
pub use element::{WeilElement, WeilMonomial};
pub use im::{im_form_check, ImVerdict};

use crate::algebroid::{basic_curvature_value, ChartAlgebroid, Connection};
use crate::error::{Error, Result};
use crate::graded::{mask, ChainComplex};
use crate::linalg::Matrix;
use crate::report::{Check, Witness};
use crate::scalar::Scalar;
use crate::symcore::Polynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Hor,
    Ver,
    Total,
}

/// A generator of the Weil algebra over a chart, or a coordinate function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Generator {
    Coordinate(usize),
    Dx(usize),
    Theta(usize),
    Mu(usize),
}

/// An odd derivation given by its values on generators; on functions
/// `d(f) = Σ_a ∂_a(f) F_a`.
#[derive(Clone)]
pub struct Derivation<S> {
    pub functions: Vec<WeilElement<S>>,
    pub dx: Vec<WeilElement<S>>,
    pub theta: Vec<WeilElement<S>>,
    pub mu: Vec<WeilElement<S>>,
}

impl<S: Scalar> std::fmt::Debug for Derivation<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Derivation")
            .field("functions", &self.functions)
            .field("dx", &self.dx)
            .field("theta", &self.theta)
            .field("mu", &self.mu)
            .finish()
    }
}

impl<S: Scalar> Derivation<S> {
    pub fn on_function(&self, f: &Polynomial<S>) -> WeilElement<S> {
        let rank = self.theta.len();
        let mut out = WeilElement::zero(f.vars(), rank);
        for (a, img) in self.functions.iter().enumerate() {
            let df = f.deriv(a);
            if !df.is_zero() {
                out += &img.mul_poly(&df);
            }
        }
        out
    }

    /// Graded Leibniz extension.
    pub fn apply(&self, e: &WeilElement<S>) -> WeilElement<S> {
        let (vars, rank) = (e.vars(), e.rank());
        let mut out = WeilElement::zero(vars, rank);
        let word = |dx: u32, theta: u32, mu: Vec<u32>| {
            WeilElement::monomial(vars, WeilMonomial { dx, theta, mu }, &Polynomial::one(vars))
        };
        for (m, f) in e.terms() {
            let whole = WeilElement::monomial(vars, m.clone(), &Polynomial::one(vars));
            out += &self.on_function(f).mul(&whole);
            let mut before = 0usize;
            for a in mask::indices(m.dx) {
                let below = m.dx & ((1u32 << a) - 1);
                let above = m.dx & !below & !(1u32 << a);
                let t = word(below, 0, vec![0; rank])
                    .mul(&self.dx[a])
                    .mul(&word(above, m.theta, m.mu.clone()))
                    .mul_poly(f);
                if before % 2 == 1 {
                    out -= &t;
                } else {
                    out += &t;
                }
                before += 1;
            }
            for i in mask::indices(m.theta) {
                let below = m.theta & ((1u32 << i) - 1);
                let above = m.theta & !below & !(1u32 << i);
                let t = word(m.dx, below, vec![0; rank])
                    .mul(&self.theta[i])
                    .mul(&word(0, above, m.mu.clone()))
                    .mul_poly(f);
                if before % 2 == 1 {
                    out -= &t;
                } else {
                    out += &t;
                }
                before += 1;
            }
            for (i, &e) in m.mu.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut rest = m.mu.clone();
                rest[i] -= 1;
                let t = word(m.dx, m.theta, vec![0; rank])
                    .mul(&self.mu[i])
                    .mul(&word(0, 0, rest))
                    .mul_poly(&f.scale(&S::from_int(e as i64)));
                if before % 2 == 1 {
                    out -= &t;
                } else {
                    out += &t;
                }
            }
        }
        out
    }

    pub fn on_generator(&self, g: Generator, vars: &crate::symcore::Vars) -> WeilElement<S> {
        match g {
            Generator::Coordinate(a) => {
                self.on_function(&Polynomial::var(vars, a).expect("coordinate index"))
            }
            Generator::Dx(a) => self.dx[a].clone(),
            Generator::Theta(i) => self.theta[i].clone(),
            Generator::Mu(i) => self.mu[i].clone(),
        }
    }
}

/// `W(A, ∇)` with its generator tables.
#[derive(Clone)]
pub struct WeilAlgebra<S> {
    alg: Arc<ChartAlgebroid<S>>,
    nabla: Connection<S>,
    hor: Derivation<S>,
    ver: Derivation<S>,
}

impl<S: Scalar> std::fmt::Debug for WeilAlgebra<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WeilAlgebra").field("hor", &self.hor).field("ver", &self.ver).finish()
    }
}

/// Builds `W(A, ∇)` from the local tables
///
/// ```text
/// d_ver ∂^a = 0
/// d_ver θ^i = μ^i - Γ^i_{aj} ∂^a θ^j
/// d_ver μ^i = -Γ^i_{aj} ∂^a μ^j + ½ r^i_{abj} ∂^a ∂^b θ^j
/// d_hor ∂^a = -ρ^a_i μ^i + (∂_b ρ^a_i - Γ^j_{bi} ρ^a_j) θ^i ∂^b
/// d_hor θ^i = -½ c^i_{jk} θ^j θ^k
/// d_hor μ^i = -(c^i_{jk} + ρ^a_k Γ^i_{aj}) θ^j μ^k + ½ R^i_{jka} θ^j θ^k ∂^a
/// ```
///
/// with `d_ver f = ∂_a f ∂^a` and `d_hor f = ∂_a f ρ^a_i θ^i`.
pub fn build_weil<S: Scalar>(alg: &Arc<ChartAlgebroid<S>>, nabla: &Connection<S>) -> Result<WeilAlgebra<S>> {
    if nabla.rank() != alg.rank() || nabla.vars() != alg.vars() {
        return Err(Error::IncompatibleBundles("the connection must live on A".into()));
    }
    let vars = alg.vars();
    let (r, m) = (alg.rank(), alg.dim());
    let dx = |a| WeilElement::dx(vars, r, a);
    let theta = |i| WeilElement::theta(vars, r, i);
    let mu = |i| WeilElement::mu(vars, r, i);
    let zero = || WeilElement::zero(vars, r);
    let gamma = |a: usize, i: usize, j: usize| nabla.gamma(a, i, j);

    let mut ver = Derivation {
        functions: (0..m).map(dx).collect(),
        dx: (0..m).map(|_| zero()).collect(),
        theta: Vec::with_capacity(r),
        mu: Vec::with_capacity(r),
    };
    for i in 0..r {
        let mut t = mu(i);
        let mut u = zero();
        for a in 0..m {
            for j in 0..r {
                let g = gamma(a, i, j);
                if !g.is_zero() {
                    t -= &dx(a).mul(&theta(j)).mul_poly(g);
                    u -= &dx(a).mul(&mu(j)).mul_poly(g);
                }
            }
        }
        for a in 0..m {
            for b in a + 1..m {
                for j in 0..r {
                    let curv = nabla.curvature(&alg.coordinate_field(a), &alg.coordinate_field(b), &alg.basis(j));
                    if !curv[i].is_zero() {
                        u += &dx(a).mul(&dx(b)).mul(&theta(j)).mul_poly(&curv[i]);
                    }
                }
            }
        }
        ver.theta.push(t);
        ver.mu.push(u);
    }

    let mut hor = Derivation {
        functions: (0..m)
            .map(|a| {
                let mut out = zero();
                for i in 0..r {
                    out += &theta(i).mul_poly(&alg.anchor(i)[a]);
                }
                out
            })
            .collect(),
        dx: Vec::with_capacity(m),
        theta: Vec::with_capacity(r),
        mu: Vec::with_capacity(r),
    };
    for a in 0..m {
        let mut out = zero();
        for i in 0..r {
            out -= &mu(i).mul_poly(&alg.anchor(i)[a]);
            for b in 0..m {
                let mut coef = alg.anchor(i)[a].deriv(b);
                for j in 0..r {
                    coef -= &(gamma(b, j, i) * &alg.anchor(j)[a]);
                }
                if !coef.is_zero() {
                    out += &theta(i).mul(&dx(b)).mul_poly(&coef);
                }
            }
        }
        hor.dx.push(out);
    }
    for i in 0..r {
        let mut t = zero();
        for j in 0..r {
            for k in j + 1..r {
                let c = alg.c(i, j, k);
                if !c.is_zero() {
                    t -= &theta(j).mul(&theta(k)).mul_poly(c);
                }
            }
        }
        hor.theta.push(t);
    }
    for i in 0..r {
        let mut out = zero();
        for j in 0..r {
            for k in 0..r {
                let mut coef = alg.c(i, j, k).clone();
                for a in 0..m {
                    coef += &(&alg.anchor(k)[a] * gamma(a, i, j));
                }
                if !coef.is_zero() {
                    out -= &theta(j).mul(&mu(k)).mul_poly(&coef);
                }
            }
        }
        for j in 0..r {
            for k in j + 1..r {
                for a in 0..m {
                    let rb = basic_curvature_value(alg, nabla, &alg.basis(j), &alg.basis(k), &alg.coordinate_field(a));
                    if !rb[i].is_zero() {
                        out += &theta(j).mul(&theta(k)).mul(&dx(a)).mul_poly(&rb[i]);
                    }
                }
            }
        }
        hor.mu.push(out);
    }
    Ok(WeilAlgebra {
        alg: alg.clone(),
        nabla: nabla.clone(),
        hor,
        ver,
    })
}

pub fn weil_d<S: Scalar>(w: &WeilAlgebra<S>, e: &WeilElement<S>, which: Which) -> WeilElement<S> {
    w.d(e, which)
}

impl<S: Scalar> WeilAlgebra<S> {
    pub fn algebroid(&self) -> &Arc<ChartAlgebroid<S>> {
        &self.alg
    }

    pub fn connection(&self) -> &Connection<S> {
        &self.nabla
    }

    pub fn derivation(&self, which: Which) -> Option<&Derivation<S>> {
        match which {
            Which::Hor => Some(&self.hor),
            Which::Ver => Some(&self.ver),
            Which::Total => None,
        }
    }

    pub fn d(&self, e: &WeilElement<S>, which: Which) -> WeilElement<S> {
        match which {
            Which::Hor => self.hor.apply(e),
            Which::Ver => self.ver.apply(e),
            Which::Total => &self.hor.apply(e) + &self.ver.apply(e),
        }
    }

    /// Coordinates, then `∂^a`, `θ^i`, `μ^i`.
    pub fn generators(&self) -> Vec<Generator> {
        let (m, r) = (self.alg.dim(), self.alg.rank());
        (0..m)
            .map(Generator::Coordinate)
            .chain((0..m).map(Generator::Dx))
            .chain((0..r).map(Generator::Theta))
            .chain((0..r).map(Generator::Mu))
            .collect()
    }

    pub fn element(&self, g: Generator) -> WeilElement<S> {
        let (vars, r) = (self.alg.vars(), self.alg.rank());
        match g {
            Generator::Coordinate(a) => {
                WeilElement::function(vars, r, &Polynomial::var(vars, a).expect("coordinate index"))
            }
            Generator::Dx(a) => WeilElement::dx(vars, r, a),
            Generator::Theta(i) => WeilElement::theta(vars, r, i),
            Generator::Mu(i) => WeilElement::mu(vars, r, i),
        }
    }

    pub fn generator_name(&self, g: Generator) -> String {
        let vars = self.alg.vars();
        match g {
            Generator::Coordinate(a) => vars[a].to_string(),
            Generator::Dx(a) => format!("d{}", vars[a]),
            Generator::Theta(i) => format!("θ{}", i + 1),
            Generator::Mu(i) => format!("μ{}", i + 1),
        }
    }

    /// `(name, d(generator))` in canonical order.
    pub fn table(&self, which: Which) -> Vec<(String, WeilElement<S>)> {
        self.generators()
            .into_iter()
            .map(|g| (self.generator_name(g), self.d(&self.element(g), which)))
            .collect()
    }

    /// `d_hor² = 0`, `d_ver² = 0`, `d_hor d_ver + d_ver d_hor = 0`,
    /// `d_total² = 0` and the bidegrees on every generator and on the given
    /// functions.
    pub fn verify(&self, functions: &[Polynomial<S>]) -> Vec<Check> {
        let (vars, r) = (self.alg.vars(), self.alg.rank());
        let mut items: Vec<(String, WeilElement<S>)> = self
            .generators()
            .into_iter()
            .map(|g| (self.generator_name(g), self.element(g)))
            .collect();
        items.extend(functions.iter().map(|f| (format!("{f}"), WeilElement::function(vars, r, f))));
        let mut checks = Vec::new();
        let expect_zero = |name: String, loc: &str, v: WeilElement<S>| {
            if v.is_zero() {
                Check::pass(name)
            } else {
                Check::fail(name, Witness::new(loc.to_string(), v))
            }
        };
        for (name, e) in items {
            let h = self.hor.apply(&e);
            let v = self.ver.apply(&e);
            let base = e.bidegrees();
            let bid = |x: &WeilElement<S>, dp: usize, dq: usize| {
                x.bidegrees().iter().all(|&(p, q)| base.iter().any(|&(p0, q0)| p == p0 + dp && q == q0 + dq))
            };
            checks.push(Check::from_option(
                format!("bidegrees({name})"),
                (!(bid(&h, 1, 0) && bid(&v, 0, 1))).then(|| Witness::new(name.clone(), format!("d_hor = {h}; d_ver = {v}"))),
            ));
            let hh = self.hor.apply(&h);
            let vv = self.ver.apply(&v);
            let hv = &self.hor.apply(&v) + &self.ver.apply(&h);
            let total = &(&hh + &vv) + &hv;
            checks.push(expect_zero(format!("d_hor²({name})"), &name, hh));
            checks.push(expect_zero(format!("d_ver²({name})"), &name, vv));
            checks.push(expect_zero(format!("[d_hor, d_ver]({name})"), &name, hv));
            checks.push(expect_zero(format!("d_total²({name})"), &name, total));
        }
        checks
    }
}

/// All exponent vectors of length `r` with entries summing to `total`.
fn mu_vectors(r: usize, total: usize) -> Vec<Vec<u32>> {
    if r == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in mu_vectors(r - 1, total - first) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

fn point_basis(r: usize, n: usize) -> Vec<WeilMonomial> {
    let mut out = Vec::new();
    for v in 0..=n / 2 {
        let w = n - 2 * v;
        if w > r {
            continue;
        }
        for theta in mask::subsets(r, w) {
            for mu in mu_vectors(r, v) {
                out.push(WeilMonomial { dx: 0, theta, mu });
            }
        }
    }
    out.sort();
    out
}

/// Betti numbers of `(W(g), d_total)` in total degrees `0..=cutoff-1`.
///
/// Each total degree is finite-dimensional over a point. The symmetric
/// degree is bounded by `cutoff`, so only degrees below it are reported.
pub fn weil_cohomology<S: Scalar>(w: &WeilAlgebra<S>, cutoff: usize) -> Result<Vec<(i32, usize)>> {
    let alg = w.algebroid();
    if !alg.is_point() {
        return Err(Error::UnsupportedBase(
            "over a positive-dimensional chart each degree is infinite-dimensional".into(),
        ));
    }
    if cutoff == 0 {
        return Ok(vec![]);
    }
    let (vars, r) = (alg.vars(), alg.rank());
    let bases: Vec<Vec<WeilMonomial>> = (0..=cutoff).map(|n| point_basis(r, n)).collect();
    let mut diffs = Vec::with_capacity(cutoff);
    for n in 0..cutoff {
        let (src, tgt) = (&bases[n], &bases[n + 1]);
        let mut mat = Matrix::zeros(tgt.len(), src.len());
        for (c, mono) in src.iter().enumerate() {
            let e = WeilElement::monomial(vars, mono.clone(), &Polynomial::one(vars));
            for (m, f) in w.d(&e, Which::Total).terms() {
                let row = tgt.binary_search(m).expect("degree-raising by one");
                mat[(row, c)] = f.as_constant().expect("constant at a point");
            }
        }
        diffs.push(mat);
    }
    let dims = bases.iter().map(Vec::len).collect();
    let ranks = ChainComplex::new(0, dims, diffs)?.cohomology_ranks();
    Ok(ranks.into_iter().take(cutoff).collect())
}
