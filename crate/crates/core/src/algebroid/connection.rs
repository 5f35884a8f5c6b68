use super::{ChartAlgebroid, Section, VectorField};
use crate::error::{Error, Result};
use crate::graded::{mask, Bundle, FormElement, FormMap};
use crate::scalar::Scalar;
use crate::symcore::{Polynomial, Vars};

/// An `A`-connection on a trivialized graded bundle, given by
/// `∇_{e_i} s_j = coeffs[i][j][k] s_k`. It must preserve degree.
#[derive(Clone, PartialEq)]
pub struct AConnection<S> {
    vars: Vars,
    rank: usize,
    bundle: Bundle,
    coeffs: Vec<Vec<Vec<Polynomial<S>>>>,
}

impl<S: Scalar> AConnection<S> {
    pub fn new(vars: &Vars, rank: usize, bundle: &Bundle, coeffs: Vec<Vec<Vec<Polynomial<S>>>>) -> Result<Self> {
        let n = bundle.len();
        if coeffs.len() != rank || coeffs.iter().any(|row| row.len() != n || row.iter().any(|c| c.len() != n)) {
            return Err(Error::Shape {
                block: "connection".into(),
                msg: format!("expected {rank} x {n} x {n} coefficients"),
            });
        }
        for row in &coeffs {
            for (j, col) in row.iter().enumerate() {
                for (k, c) in col.iter().enumerate() {
                    if !c.is_zero() && bundle.degree(j) != bundle.degree(k) {
                        return Err(Error::DegreeShift {
                            generator: bundle.name(j).to_string(),
                            expected: bundle.degree(j),
                            found: bundle.degree(k),
                        });
                    }
                }
            }
        }
        Ok(AConnection {
            vars: vars.clone(),
            rank,
            bundle: bundle.clone(),
            coeffs,
        })
    }

    /// The connection with `∇ s_j = 0` for every generator.
    pub fn trivial(vars: &Vars, rank: usize, bundle: &Bundle) -> Self {
        let n = bundle.len();
        AConnection {
            vars: vars.clone(),
            rank,
            bundle: bundle.clone(),
            coeffs: vec![vec![vec![Polynomial::zero(vars); n]; n]; rank],
        }
    }

    pub fn bundle(&self) -> &Bundle {
        &self.bundle
    }

    /// Components of `∇_{e_i} s_j`.
    pub fn coefficient(&self, i: usize, j: usize) -> &[Polynomial<S>] {
        &self.coeffs[i][j]
    }

    /// `∇_α s` for sections given in components.
    pub fn covariant(&self, alg: &ChartAlgebroid<S>, alpha: &[Polynomial<S>], s: &[Polynomial<S>]) -> Section<S> {
        let n = self.bundle.len();
        let rho = alg.rho(alpha);
        let mut out: Section<S> = s.iter().map(|f| f.directional(&rho)).collect();
        for (i, ai) in alpha.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, sj) in s.iter().enumerate() {
                if sj.is_zero() {
                    continue;
                }
                let f = ai * sj;
                for k in 0..n {
                    let c = &self.coeffs[i][j][k];
                    if !c.is_zero() {
                        out[k] += &(&f * c);
                    }
                }
            }
        }
        out
    }

    /// `∇ s_j = Σ_i θ^i ⊗ ∇_{e_i} s_j` as a form of degree one.
    pub fn image(&self, j: usize) -> FormElement<S> {
        let mut out = FormElement::zero(&self.vars, self.rank, &self.bundle);
        for i in 0..self.rank {
            for (k, c) in self.coeffs[i][j].iter().enumerate() {
                out.add_term(mask::single(i), k, c);
            }
        }
        out
    }

    /// Recovers the connection from the one-forms `∇ s_j`.
    pub fn from_images(vars: &Vars, rank: usize, bundle: &Bundle, images: &[FormElement<S>]) -> Result<Self> {
        let n = bundle.len();
        if images.len() != n {
            return Err(Error::Shape {
                block: "connection".into(),
                msg: format!("{} images for {n} generators", images.len()),
            });
        }
        let mut coeffs = vec![vec![vec![Polynomial::zero(vars); n]; n]; rank];
        for (j, img) in images.iter().enumerate() {
            for (m, k, c) in img.terms() {
                if mask::len(m) != 1 {
                    return Err(Error::Invalid(format!("∇{} has a term of form degree {}", bundle.name(j), mask::len(m))));
                }
                coeffs[m.trailing_zeros() as usize][j][k] = c.clone();
            }
        }
        Self::new(vars, rank, bundle, coeffs)
    }

    /// `d_∇(f θ^I s) = d_A(f θ^I) s + (-1)^{|I|} f θ^I ∇s`
    pub fn d_nabla(&self, alg: &ChartAlgebroid<S>, x: &FormElement<S>) -> Result<FormElement<S>> {
        if x.bundle() != &self.bundle {
            return Err(Error::IncompatibleBundles(format!(
                "connection on {} generators applied to a form over {}",
                self.bundle.len(),
                x.bundle().len()
            )));
        }
        let mut out = alg.d_frame(x);
        for (m, j, f) in x.terms() {
            let img = self.image(j).wedge_left(m, f);
            if mask::len(m) % 2 == 1 {
                out -= &img;
            } else {
                out += &img;
            }
        }
        Ok(out)
    }

    /// `R(α, β) s = ∇_α ∇_β s - ∇_β ∇_α s - ∇_{[α,β]} s`.
    pub fn curvature(
        &self,
        alg: &ChartAlgebroid<S>,
        alpha: &[Polynomial<S>],
        beta: &[Polynomial<S>],
        s: &[Polynomial<S>],
    ) -> Section<S> {
        let ab = self.covariant(alg, alpha, &self.covariant(alg, beta, s));
        let ba = self.covariant(alg, beta, &self.covariant(alg, alpha, s));
        let br = self.covariant(alg, &alg.bracket(alpha, beta), s);
        (0..self.bundle.len()).map(|k| &(&ab[k] - &ba[k]) - &br[k]).collect()
    }

    /// The curvature as a degree-2 form-valued endomorphism,
    /// `s_j ↦ Σ_{i<k} θ^i θ^k R(e_i, e_k) s_j`.
    pub fn curvature_map(&self, alg: &ChartAlgebroid<S>) -> FormMap<S> {
        let n = self.bundle.len();
        let images = (0..n)
            .map(|j| {
                let s = unit(&self.vars, n, j);
                let mut out = FormElement::zero(&self.vars, self.rank, &self.bundle);
                for i in 0..self.rank {
                    for k in i + 1..self.rank {
                        let r = self.curvature(alg, &alg.basis(i), &alg.basis(k), &s);
                        for (l, c) in r.iter().enumerate() {
                            out.add_term(mask::from_indices(&[i, k]), l, c);
                        }
                    }
                }
                out
            })
            .collect();
        FormMap::new(&self.vars, self.rank, &self.bundle, &self.bundle, 2, images).expect("curvature has degree two")
    }
}

/// An ordinary connection on a trivial rank-`n` bundle over the chart, with
/// `∇_{∂_a} s_j = Γ^i_{aj} s_i`.
#[derive(Clone, PartialEq)]
pub struct Connection<S> {
    vars: Vars,
    n: usize,
    /// `gamma[a][j][i] = Γ^i_{aj}`
    gamma: Vec<Vec<Vec<Polynomial<S>>>>,
}

impl<S: Scalar> Connection<S> {
    pub fn new(vars: &Vars, n: usize, gamma: Vec<Vec<Vec<Polynomial<S>>>>) -> Result<Self> {
        if gamma.len() != vars.len() || gamma.iter().any(|g| g.len() != n || g.iter().any(|c| c.len() != n)) {
            return Err(Error::Shape {
                block: "gamma".into(),
                msg: format!("expected {} x {n} x {n} symbols", vars.len()),
            });
        }
        Ok(Connection {
            vars: vars.clone(),
            n,
            gamma,
        })
    }

    pub fn flat(vars: &Vars, n: usize) -> Self {
        Connection {
            vars: vars.clone(),
            n,
            gamma: vec![vec![vec![Polynomial::zero(vars); n]; n]; vars.len()],
        }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// `Γ^i_{aj}`
    pub fn gamma(&self, a: usize, i: usize, j: usize) -> &Polynomial<S> {
        &self.gamma[a][j][i]
    }

    pub fn is_flat_frame(&self) -> bool {
        self.gamma.iter().flatten().flatten().all(Polynomial::is_zero)
    }

    /// `∇_X s`
    pub fn covariant(&self, x: &[Polynomial<S>], s: &[Polynomial<S>]) -> Section<S> {
        let mut out: Section<S> = s.iter().map(|f| f.directional(x)).collect();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (j, sj) in s.iter().enumerate() {
                if sj.is_zero() {
                    continue;
                }
                let f = xa * sj;
                for i in 0..self.n {
                    let g = &self.gamma[a][j][i];
                    if !g.is_zero() {
                        out[i] += &(&f * g);
                    }
                }
            }
        }
        out
    }

    /// `R(X, Y) s = ∇_X ∇_Y s - ∇_Y ∇_X s - ∇_{[X,Y]} s`.
    pub fn curvature(&self, x: &[Polynomial<S>], y: &[Polynomial<S>], s: &[Polynomial<S>]) -> Section<S> {
        let xy = self.covariant(x, &self.covariant(y, s));
        let yx = self.covariant(y, &self.covariant(x, s));
        let br: VectorField<S> = (0..self.vars.len())
            .map(|a| &y[a].directional(x) - &x[a].directional(y))
            .collect();
        let b = self.covariant(&br, s);
        (0..self.n).map(|i| &(&xy[i] - &yx[i]) - &b[i]).collect()
    }

    /// The induced `A`-connection `∇_α = ∇_{ρ(α)}` on a graded bundle whose
    /// generators are the frame of this connection.
    pub fn induced(&self, alg: &ChartAlgebroid<S>, bundle: &Bundle) -> Result<AConnection<S>> {
        if bundle.len() != self.n {
            return Err(Error::IncompatibleBundles(format!(
                "connection has rank {}, bundle has {} generators",
                self.n,
                bundle.len()
            )));
        }
        let coeffs = (0..alg.rank())
            .map(|i| {
                let rho = alg.anchor(i);
                (0..self.n)
                    .map(|j| {
                        self.covariant(rho, &unit(&self.vars, self.n, j))
                    })
                    .collect()
            })
            .collect();
        AConnection::new(&self.vars, alg.rank(), bundle, coeffs)
    }
}

pub(crate) fn unit<S: Scalar>(vars: &Vars, n: usize, j: usize) -> Vec<Polynomial<S>> {
    let mut v = vec![Polynomial::zero(vars); n];
    v[j] = Polynomial::one(vars);
    v
}

impl<S: Scalar> std::fmt::Debug for AConnection<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AConnection")
            .field("bundle", &self.bundle)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl<S: Scalar> std::fmt::Debug for Connection<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Connection")
            .field("vars", &self.vars)
            .field("n", &self.n)
            .field("gamma", &self.gamma)
            .finish()
    }
}
