//! Complexes of bundles: the ∂² test, exact Betti numbers at point base and
//! Hodge-type contraction data.

use std::sync::Arc;

use super::form::{Bundle, FormElement, FormMap, GradedBundle};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::report::{Check, Witness};
use crate::scalar::Scalar;
use crate::symcore::{Polynomial, Vars};

/// Returns the first generator on which `∂²` does not vanish.
pub fn complex_check<S: Scalar>(d: &FormMap<S>) -> std::result::Result<(), Witness> {
    let dd = d.compose(d);
    match dd.first_nonzero() {
        None => Ok(()),
        Some((j, v)) => Err(Witness::new(format!("∂²({})", d.source().name(j)), v)),
    }
}

/// A cochain complex of finite-dimensional spaces in consecutive degrees.
#[derive(Clone, PartialEq)]
pub struct ChainComplex<S> {
    pub start: i32,
    pub dims: Vec<usize>,
    /// `diffs[k]` maps degree `start + k` to `start + k + 1`.
    pub diffs: Vec<Matrix<S>>,
}

impl<S: Scalar> std::fmt::Debug for ChainComplex<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ChainComplex(start {}, dims {:?}, {:?})", self.start, self.dims, self.diffs)
    }
}

impl<S: Scalar> ChainComplex<S> {
    pub fn new(start: i32, dims: Vec<usize>, diffs: Vec<Matrix<S>>) -> Result<Self> {
        if dims.is_empty() || diffs.len() + 1 != dims.len() {
            return Err(Error::Shape {
                block: "complex".into(),
                msg: format!("{} spaces and {} maps", dims.len(), diffs.len()),
            });
        }
        for (k, m) in diffs.iter().enumerate() {
            if m.rows() != dims[k + 1] || m.cols() != dims[k] {
                return Err(Error::Shape {
                    block: "complex".into(),
                    msg: format!("map {k} is {}x{}", m.rows(), m.cols()),
                });
            }
        }
        Ok(ChainComplex { start, dims, diffs })
    }

    /// Reads a degree-one bundle map with constant coefficients.
    pub fn from_form_map(d: &FormMap<S>) -> Result<Self> {
        let bundle = d.source();
        let Some((lo, hi)) = bundle.degree_range() else {
            return Ok(ChainComplex {
                start: 0,
                dims: vec![0],
                diffs: vec![],
            });
        };
        let layers: Vec<Vec<usize>> = (lo..=hi).map(|k| bundle.in_degree(k)).collect();
        let mut diffs = Vec::new();
        for k in 0..layers.len() - 1 {
            let mut m = Matrix::zeros(layers[k + 1].len(), layers[k].len());
            for (col, &j) in layers[k].iter().enumerate() {
                for (mask, t, c) in d.image(j).terms() {
                    if mask != 0 {
                        return Err(Error::Invalid("differential has positive form degree".into()));
                    }
                    let c = constant(c)?;
                    let row = layers[k + 1].iter().position(|&x| x == t).expect("degree-one map");
                    m[(row, col)] = c;
                }
            }
            diffs.push(m);
        }
        Ok(ChainComplex {
            start: lo,
            dims: layers.iter().map(Vec::len).collect(),
            diffs,
        })
    }

    pub fn is_complex(&self) -> bool {
        self.diffs.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    /// `(degree, dim H)` for every degree of the complex.
    pub fn cohomology_ranks(&self) -> Vec<(i32, usize)> {
        let ranks: Vec<usize> = self.diffs.iter().map(Matrix::rank).collect();
        (0..self.dims.len())
            .map(|k| {
                let out = if k < ranks.len() { ranks[k] } else { 0 };
                let inc = if k > 0 { ranks[k - 1] } else { 0 };
                (self.start + k as i32, self.dims[k] - out - inc)
            })
            .collect()
    }
}

fn constant<S: Scalar>(c: &Polynomial<S>) -> Result<S> {
    c.as_constant()
        .ok_or_else(|| Error::UnsupportedBase(format!("coefficient {c} is not constant")))
}

/// Betti numbers of a bundle complex whose coefficients are constants.
pub fn cohomology_ranks<S: Scalar>(d: &FormMap<S>) -> Result<Vec<(i32, usize)>> {
    Ok(ChainComplex::from_form_map(d)?.cohomology_ranks())
}

/// Maps `p: E → H`, `i: H → E` and a homotopy `h: E → E` of degree -1 with
/// `ip = Id + h∂ + ∂h`, `p∂ = 0`, `∂i = 0`, `h² = 0`, `ph = 0`.
#[derive(Clone)]
pub struct ContractionData<S> {
    pub p: FormMap<S>,
    pub i: FormMap<S>,
    pub h: FormMap<S>,
}

impl<S: Scalar> std::fmt::Debug for ContractionData<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "p = {:?}i = {:?}h = {:?}", self.p, self.i, self.h)
    }
}

impl<S: Scalar> ContractionData<S> {
    pub fn harmonic(&self) -> &Bundle {
        self.p.target()
    }

    pub fn verify(&self, d: &FormMap<S>) -> Vec<Check> {
        let e = d.source();
        let id = FormMap::identity(d.vars(), d.rank(), e);
        let hd = self.h.compose(d).add(&d.compose(&self.h));
        let checks = [
            ("p∂ = 0", self.p.compose(d)),
            ("∂i = 0", d.compose(&self.i)),
            ("ip = Id + h∂ + ∂h", self.i.compose(&self.p).sub(&id.add(&hd))),
            ("h² = 0", self.h.compose(&self.h)),
            ("ph = 0", self.p.compose(&self.h)),
        ];
        checks
            .into_iter()
            .map(|(name, m)| {
                Check::from_option(
                    name,
                    m.first_nonzero()
                        .map(|(j, v)| Witness::new(m.source().name(j).to_string(), v)),
                )
            })
            .collect()
    }
}

/// Contraction data for `(E, ∂)` using the declared basis as orthonormal.
///
/// With constant coefficients this is the Hodge decomposition: `H = ker Δ`,
/// `p` the orthogonal projection and `h = -G∂*` with `G` the Green operator.
/// With polynomial coefficients only exact complexes are handled, and only
/// when each Laplacian has a nonzero constant determinant; otherwise the
/// determinant is returned as a witness of a point where regularity may fail.
pub fn build_contraction<S: Scalar>(d: &FormMap<S>) -> Result<ContractionData<S>> {
    if d.degree() != 1 || d.source() != d.target() {
        return Err(Error::Invalid("contraction needs a degree-one endomorphism".into()));
    }
    if let Err(w) = complex_check(d) {
        return Err(Error::Invalid(format!("not a complex: {w}")));
    }
    let constant_coeffs = d
        .images()
        .iter()
        .all(|x| x.terms().all(|(m, _, c)| m == 0 && c.is_constant()));
    let data = if constant_coeffs {
        hodge_contraction(d)?
    } else {
        polynomial_contraction(d)?
    };
    if let Some(bad) = data.verify(d).into_iter().find(|c| !c.ok()) {
        return Err(Error::Invalid(format!(
            "contraction identity {} fails ({})",
            bad.name,
            bad.witness.unwrap()
        )));
    }
    Ok(data)
}

struct Layers {
    lo: i32,
    gens: Vec<Vec<usize>>,
}

impl Layers {
    fn of(bundle: &GradedBundle) -> Self {
        match bundle.degree_range() {
            None => Layers { lo: 0, gens: vec![] },
            Some((lo, hi)) => Layers {
                lo,
                gens: (lo..=hi).map(|k| bundle.in_degree(k)).collect(),
            },
        }
    }
}

fn hodge_contraction<S: Scalar>(d: &FormMap<S>) -> Result<ContractionData<S>> {
    let e = d.source().clone();
    let vars = d.vars().clone();
    let rank = d.rank();
    let cx = ChainComplex::from_form_map(d)?;
    let layers = Layers::of(&e);
    let n = cx.dims.len();
    let mut harmonic_gens = Vec::new();
    let mut kernels = Vec::new();
    let mut greens = Vec::new();
    for k in 0..n {
        let dim = cx.dims[k];
        let mut lap = Matrix::zeros(dim, dim);
        if k > 0 {
            let din = &cx.diffs[k - 1];
            lap = lap.add(&din.mul(&din.transpose()));
        }
        if k < cx.diffs.len() {
            let dout = &cx.diffs[k];
            lap = lap.add(&dout.transpose().mul(dout));
        }
        let kernel = lap.nullspace();
        let kmat = Matrix::from_columns(dim, &kernel);
        let proj_coords = if kernel.is_empty() {
            Matrix::zeros(0, dim)
        } else {
            let gram = kmat.transpose().mul(&kmat);
            gram.inverse().expect("kernel basis is independent").mul(&kmat.transpose())
        };
        let pi = kmat.mul(&proj_coords);
        let green = lap
            .add(&pi)
            .inverse()
            .expect("Δ + π is invertible")
            .sub(&pi);
        for idx in 0..kernel.len() {
            harmonic_gens.push((format!("H{}.{}", cx.start + k as i32, idx + 1), cx.start + k as i32));
        }
        kernels.push((kmat, proj_coords));
        greens.push(green);
    }
    let h_bundle: Bundle = Arc::new(GradedBundle::new(harmonic_gens)?);
    let mut offsets = Vec::new();
    let mut acc = 0;
    for (kmat, _) in &kernels {
        offsets.push(acc);
        acc += kmat.cols();
    }

    let mut p_images = vec![FormElement::zero(&vars, rank, &h_bundle); e.len()];
    let mut i_images = vec![FormElement::zero(&vars, rank, &e); h_bundle.len()];
    let mut h_images = vec![FormElement::zero(&vars, rank, &e); e.len()];
    for k in 0..n {
        let (kmat, proj) = &kernels[k];
        for (col, &j) in layers.gens[k].iter().enumerate() {
            for hidx in 0..kmat.cols() {
                let c = proj[(hidx, col)].clone();
                p_images[j].add_term(0, offsets[k] + hidx, &Polynomial::constant(&vars, c));
            }
        }
        for hidx in 0..kmat.cols() {
            for (row, &j) in layers.gens[k].iter().enumerate() {
                i_images[offsets[k] + hidx].add_term(0, j, &Polynomial::constant(&vars, kmat[(row, hidx)].clone()));
            }
        }
        // h: degree k+1 → degree k, h = -G_k ∂_k^T
        if k + 1 < n {
            let hmat = greens[k].mul(&cx.diffs[k].transpose()).scale(&-S::one());
            for (col, &j) in layers.gens[k + 1].iter().enumerate() {
                for (row, &t) in layers.gens[k].iter().enumerate() {
                    h_images[j].add_term(0, t, &Polynomial::constant(&vars, hmat[(row, col)].clone()));
                }
            }
        }
    }
    Ok(ContractionData {
        p: FormMap::new(&vars, rank, &e, &h_bundle, 0, p_images)?,
        i: FormMap::new(&vars, rank, &h_bundle, &e, 0, i_images)?,
        h: FormMap::new(&vars, rank, &e, &e, -1, h_images)?,
    })
}

type PolyMatrix<S> = Vec<Vec<Polynomial<S>>>;

fn poly_matrix_mul<S: Scalar>(a: &PolyMatrix<S>, b: &PolyMatrix<S>, vars: &Vars, inner: usize) -> PolyMatrix<S> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = Polynomial::zero(vars);
                    for k in 0..inner {
                        acc += &(&row[k] * &b[k][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn poly_transpose<S: Scalar>(a: &PolyMatrix<S>, rows: usize, cols: usize) -> PolyMatrix<S> {
    (0..cols).map(|j| (0..rows).map(|i| a[i][j].clone()).collect()).collect()
}

/// Determinant by cofactor expansion; intended for the small matrices that
/// occur at desk scale.
pub fn poly_det<S: Scalar>(a: &PolyMatrix<S>, vars: &Vars) -> Polynomial<S> {
    let n = a.len();
    if n == 0 {
        return Polynomial::one(vars);
    }
    if n == 1 {
        return a[0][0].clone();
    }
    let mut acc = Polynomial::zero(vars);
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let minor = minor(a, 0, j);
        let term = &a[0][j] * &poly_det(&minor, vars);
        if j % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    acc
}

fn minor<S: Scalar>(a: &PolyMatrix<S>, r: usize, c: usize) -> PolyMatrix<S> {
    a.iter()
        .enumerate()
        .filter(|(i, _)| *i != r)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != c)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Classical adjugate, `adj(A) A = det(A) Id`.
pub fn poly_adjugate<S: Scalar>(a: &PolyMatrix<S>, vars: &Vars) -> PolyMatrix<S> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = poly_det(&minor(a, j, i), vars);
                    if (i + j) % 2 == 0 {
                        c
                    } else {
                        -c
                    }
                })
                .collect()
        })
        .collect()
}

fn polynomial_contraction<S: Scalar>(d: &FormMap<S>) -> Result<ContractionData<S>> {
    let e = d.source().clone();
    let vars = d.vars().clone();
    let rank = d.rank();
    let layers = Layers::of(&e);
    let n = layers.gens.len();
    // ∂_k as a polynomial matrix from layer k to layer k+1
    let mut diffs: Vec<PolyMatrix<S>> = Vec::new();
    for k in 0..n.saturating_sub(1) {
        let mut m = vec![vec![Polynomial::zero(&vars); layers.gens[k].len()]; layers.gens[k + 1].len()];
        for (col, &j) in layers.gens[k].iter().enumerate() {
            for (mask, t, c) in d.image(j).terms() {
                if mask != 0 {
                    return Err(Error::Invalid("differential has positive form degree".into()));
                }
                let row = layers.gens[k + 1].iter().position(|&x| x == t).expect("degree-one map");
                m[row][col] = c.clone();
            }
        }
        diffs.push(m);
    }
    let h_bundle: Bundle = Arc::new(GradedBundle::new(Vec::<(String, i32)>::new())?);
    let mut h_images = vec![FormElement::zero(&vars, rank, &e); e.len()];
    for k in 0..n {
        let dim = layers.gens[k].len();
        let mut lap = vec![vec![Polynomial::zero(&vars); dim]; dim];
        if k > 0 {
            let din = &diffs[k - 1];
            let prev = layers.gens[k - 1].len();
            let t = poly_transpose(din, dim, prev);
            add_into(&mut lap, &poly_matrix_mul(din, &t, &vars, prev));
        }
        if k + 1 < n {
            let dout = &diffs[k];
            let next = layers.gens[k + 1].len();
            let t = poly_transpose(dout, next, dim);
            add_into(&mut lap, &poly_matrix_mul(&t, dout, &vars, next));
        }
        let det = poly_det(&lap, &vars);
        if det.is_zero() {
            return Err(Error::NotExact(format!(
                "the Laplacian in degree {} is singular",
                layers.lo + k as i32
            )));
        }
        let Some(c) = det.as_constant() else {
            return Err(Error::NotRegular(format!(
                "determinant of the Laplacian in degree {} is {det}, which may vanish",
                layers.lo + k as i32
            )));
        };
        if k + 1 < n {
            let next = layers.gens[k + 1].len();
            let adj = poly_adjugate(&lap, &vars);
            let t = poly_transpose(&diffs[k], next, dim);
            let hmat = poly_matrix_mul(&adj, &t, &vars, dim);
            let scale = -(S::one() / c);
            for (col, &j) in layers.gens[k + 1].iter().enumerate() {
                for (row, &tgt) in layers.gens[k].iter().enumerate() {
                    h_images[j].add_term(0, tgt, &hmat[row][col].scale(&scale));
                }
            }
        }
    }
    Ok(ContractionData {
        p: FormMap::zero(&vars, rank, &e, &h_bundle, 0),
        i: FormMap::zero(&vars, rank, &h_bundle, &e, 0),
        h: FormMap::new(&vars, rank, &e, &e, -1, h_images)?,
    })
}

fn add_into<S: Scalar>(acc: &mut PolyMatrix<S>, other: &PolyMatrix<S>) {
    for (r, o) in acc.iter_mut().zip(other) {
        for (a, b) in r.iter_mut().zip(o) {
            *a += b;
        }
    }
}
