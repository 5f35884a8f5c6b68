//! Representations up to homotopy.
//!
//! A representation is a graded bundle `E` with an operator `D` of total
//! degree one on `Ω(A; E)`. It is stored by its values `D(s_j)` on generators
//! and extended by `D(f θ^I s) = d(f θ^I) s + (-1)^{|I|} f θ^I D(s)`, where `d`
//! is the Koszul differential with the frame held fixed. The form-degree-`p`
//! part of `D(s_j)` is `ω_p(s_j)`; `ω_0 = ∂` and `ω_1` is the connection.

mod constructions;
mod deformation;
mod exact;
mod kdiff;
mod les;
mod serre;

pub use constructions::{adjoint, change_of_connection, double, dualize, exterior_power, forms_rep, tensor};
pub use deformation::{deformation_cohomology, psi_bridge, DeformationCochain, MAX_TUPLE_DEGREE};
pub use exact::{compatible_connection, exact_isomorphism, exact_rep, transfer};
pub use kdiff::{k_differential_check, KDifferential, KVerdict};
pub use les::{long_exact_sequence, LesNode, LesReport};
pub use serre::{extension_from_length1, serre_rep, Extension};

use std::sync::Arc;

use crate::algebroid::{AConnection, ChartAlgebroid};
use crate::error::{Error, Result};
use crate::graded::{mask, poly_det, Bundle, ChainComplex, FormElement, FormMap, Mask};
use crate::linalg::Matrix;
use crate::report::{Check, Witness};
use crate::scalar::Scalar;
use crate::symcore::Polynomial;

#[derive(Clone, PartialEq)]
pub struct Ruth<S> {
    alg: Arc<ChartAlgebroid<S>>,
    op: FormMap<S>,
}

impl<S: Scalar> std::fmt::Debug for Ruth<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Ruth {:?}", self.op)
    }
}

/// Name of the structure equation collecting the form-degree-`n` part of `D²`.
pub fn equation_name(n: usize) -> String {
    match n {
        0 => "∂² = 0".into(),
        1 => "∇∂ = ∂∇".into(),
        2 => "∂(ω2) + R∇ = 0".into(),
        _ => format!("∂(ω{n}) + d∇(ω{}) + Σ ωjωk = 0", n - 1),
    }
}

impl<S: Scalar> Ruth<S> {
    /// `images[j] = D(s_j)`; each must have total degree `deg s_j + 1`.
    pub fn from_generator_images(alg: &Arc<ChartAlgebroid<S>>, bundle: &Bundle, images: Vec<FormElement<S>>) -> Result<Self> {
        let op = FormMap::new(alg.vars(), alg.rank(), bundle, bundle, 1, images)?;
        Ok(Ruth { alg: alg.clone(), op })
    }

    /// The zero representation-free operator `D = d` on a bundle.
    pub fn trivial(alg: &Arc<ChartAlgebroid<S>>, bundle: &Bundle) -> Self {
        Ruth {
            alg: alg.clone(),
            op: FormMap::zero(alg.vars(), alg.rank(), bundle, bundle, 1),
        }
    }

    pub fn algebroid(&self) -> &Arc<ChartAlgebroid<S>> {
        &self.alg
    }

    pub fn bundle(&self) -> &Bundle {
        self.op.source()
    }

    pub fn image(&self, j: usize) -> &FormElement<S> {
        self.op.image(j)
    }

    pub fn images(&self) -> &[FormElement<S>] {
        self.op.images()
    }

    /// `D` restricted to generators, as a map of degree one.
    pub fn operator(&self) -> &FormMap<S> {
        &self.op
    }

    /// `ω_p`; `p = 0` is `∂`.
    pub fn component(&self, p: usize) -> FormMap<S> {
        self.op.form_part(p)
    }

    pub fn partial(&self) -> FormMap<S> {
        self.component(0)
    }

    /// The degree-preserving connection `ω_1`.
    pub fn connection(&self) -> Result<AConnection<S>> {
        let c = self.component(1);
        AConnection::from_images(self.alg.vars(), self.alg.rank(), self.bundle(), c.images())
    }

    pub fn zero_form(&self) -> FormElement<S> {
        FormElement::zero(self.alg.vars(), self.alg.rank(), self.bundle())
    }

    pub fn generator(&self, j: usize) -> FormElement<S> {
        FormElement::generator(self.alg.vars(), self.alg.rank(), self.bundle(), j)
    }

    /// `D` on an arbitrary form.
    pub fn apply(&self, x: &FormElement<S>) -> FormElement<S> {
        let mut out = self.alg.d_frame(x);
        out += &self.op.apply(x);
        out
    }

    /// `D²` on generators.
    pub fn square(&self) -> Vec<FormElement<S>> {
        self.images().iter().map(|x| self.apply(x)).collect()
    }

    /// One check per form degree of `D²`; the form-degree-`n` part is the
    /// `n`-th structure equation.
    pub fn check_structure(&self) -> Vec<Check> {
        let sq = self.square();
        (0..=self.alg.rank())
            .map(|n| {
                let w = sq.iter().enumerate().find_map(|(j, x)| {
                    let part = x.form_part(n);
                    (!part.is_zero()).then(|| Witness::new(format!("D²({})", self.bundle().name(j)), part))
                });
                Check::from_option(equation_name(n), w)
            })
            .collect()
    }

    pub fn is_representation(&self) -> bool {
        self.check_structure().iter().all(Check::ok)
    }

    /// Lowest and highest generator degree.
    pub fn degree_window(&self) -> Option<(i32, i32)> {
        self.bundle().degree_range()
    }

    fn point_base(&self) -> Result<()> {
        if !self.alg.is_point() {
            return Err(Error::UnsupportedBase(
                "cohomology of Ω(A; E) is computed only over a point".into(),
            ));
        }
        Ok(())
    }

    /// Basis `θ^I ⊗ s_j` of total degree `n`.
    pub fn total_basis(&self, n: i32) -> Vec<(Mask, usize)> {
        let r = self.alg.rank();
        let b = self.bundle();
        let mut out = Vec::new();
        for j in 0..b.len() {
            let p = n - b.degree(j);
            if p < 0 || p as usize > r {
                continue;
            }
            for m in mask::subsets(r, p as usize) {
                out.push((m, j));
            }
        }
        out.sort_unstable();
        out
    }

    /// Matrix of `D` from total degree `n` to `n + 1` (point base only).
    pub fn total_matrix(&self, n: i32) -> Result<Matrix<S>> {
        self.point_base()?;
        let src = self.total_basis(n);
        let tgt = self.total_basis(n + 1);
        let vars = self.alg.vars();
        let mut m = Matrix::zeros(tgt.len(), src.len());
        for (col, &(mk, j)) in src.iter().enumerate() {
            let x = FormElement::monomial(vars, self.alg.rank(), self.bundle(), mk, j, Polynomial::one(vars));
            for (t, k, c) in self.apply(&x).terms() {
                let row = tgt.binary_search(&(t, k)).expect("degree one");
                m[(row, col)] = c.as_constant().expect("constant at a point");
            }
        }
        Ok(m)
    }

    /// Total degrees in which `Ω(A; E)` is nonzero.
    pub fn total_range(&self) -> Option<(i32, i32)> {
        let (lo, hi) = self.degree_window()?;
        Some((lo, hi + self.alg.rank() as i32))
    }

    /// The total complex `Ω(A; E)` at a point.
    pub fn total_complex(&self) -> Result<ChainComplex<S>> {
        self.point_base()?;
        let Some((lo, hi)) = self.total_range() else {
            return ChainComplex::new(0, vec![0], vec![]);
        };
        let dims = (lo..=hi).map(|n| self.total_basis(n).len()).collect();
        let diffs = (lo..hi).map(|n| self.total_matrix(n)).collect::<Result<Vec<_>>>()?;
        ChainComplex::new(lo, dims, diffs)
    }

    /// `(degree, dim H)` over a point.
    pub fn cohomology(&self) -> Result<Vec<(i32, usize)>> {
        Ok(self.total_complex()?.cohomology_ranks())
    }
}

/// A degree-zero `Ω(A)`-linear map `Φ = Φ_0 + Φ_1 + …` between representations.
#[derive(Clone, PartialEq)]
pub struct RuthMorphism<S> {
    source: Ruth<S>,
    target: Ruth<S>,
    map: FormMap<S>,
}

impl<S: Scalar> std::fmt::Debug for RuthMorphism<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RuthMorphism {:?}", self.map)
    }
}

impl<S: Scalar> RuthMorphism<S> {
    pub fn new(source: &Ruth<S>, target: &Ruth<S>, images: Vec<FormElement<S>>) -> Result<Self> {
        if source.alg != target.alg {
            return Err(Error::IncompatibleBundles("representations of different algebroids".into()));
        }
        let map = FormMap::new(
            source.alg.vars(),
            source.alg.rank(),
            source.bundle(),
            target.bundle(),
            0,
            images,
        )?;
        Ok(RuthMorphism {
            source: source.clone(),
            target: target.clone(),
            map,
        })
    }

    pub fn identity(r: &Ruth<S>) -> Self {
        RuthMorphism {
            source: r.clone(),
            target: r.clone(),
            map: FormMap::identity(r.alg.vars(), r.alg.rank(), r.bundle()),
        }
    }

    pub fn source(&self) -> &Ruth<S> {
        &self.source
    }

    pub fn target(&self) -> &Ruth<S> {
        &self.target
    }

    pub fn map(&self) -> &FormMap<S> {
        &self.map
    }

    /// `Φ_n`.
    pub fn component(&self, n: usize) -> FormMap<S> {
        self.map.form_part(n)
    }

    pub fn apply(&self, x: &FormElement<S>) -> FormElement<S> {
        self.map.apply(x)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &RuthMorphism<S>) -> Result<Self> {
        if other.target.bundle() != self.source.bundle() {
            return Err(Error::IncompatibleBundles("morphisms do not compose".into()));
        }
        Ok(RuthMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            map: self.map.compose(&other.map),
        })
    }

    /// `D_F Φ - Φ D_E` on generators, one check per form degree.
    pub fn check(&self) -> Vec<Check> {
        let defects: Vec<FormElement<S>> = (0..self.source.bundle().len())
            .map(|j| {
                let mut d = self.target.apply(self.map.image(j));
                d -= &self.map.apply(self.source.image(j));
                d
            })
            .collect();
        (0..=self.source.alg.rank())
            .map(|n| {
                let w = defects.iter().enumerate().find_map(|(j, x)| {
                    let part = x.form_part(n);
                    (!part.is_zero()).then(|| Witness::new(format!("(DΦ - ΦD)({})", self.source.bundle().name(j)), part))
                });
                Check::from_option(format!("morphism equation {n}"), w)
            })
            .collect()
    }

    pub fn is_morphism(&self) -> bool {
        self.check().iter().all(Check::ok)
    }

    /// Whether `Φ_0` is invertible at every point: its determinant is a
    /// nonzero constant.
    pub fn is_isomorphism(&self) -> bool {
        let (src, tgt) = (self.source.bundle(), self.target.bundle());
        if src.len() != tgt.len() {
            return false;
        }
        let vars = self.source.alg.vars();
        let phi0 = self.component(0);
        let m: Vec<Vec<Polynomial<S>>> = (0..tgt.len())
            .map(|row| (0..src.len()).map(|col| phi0.image(col).coefficient(0, row)).collect())
            .collect();
        let det = poly_det(&m, vars);
        !det.is_zero() && det.is_constant()
    }
}
