//! Fixture algebroids and random connections shared by the integration tests.
#![allow(dead_code)]

pub mod oracle;

#[allow(unused_imports)]
pub use oracle::*;

use std::sync::Arc;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use ruth_core::algebroid::{ChartAlgebroid, Connection};
use ruth_core::graded::{Bundle, GradedBundle};
use ruth_core::symcore::{parse_poly, vars, Polynomial, Vars};
use ruth_core::Rat;

pub type P = Polynomial<Rat>;
pub type Alg = ChartAlgebroid<Rat>;

pub fn q(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn qq(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn point() -> Vars {
    vars(Vec::<String>::new())
}

pub fn poly(v: &Vars, s: &str) -> P {
    parse_poly(s, v).unwrap()
}

pub fn bundle(gens: &[(&str, i32)]) -> Bundle {
    Arc::new(GradedBundle::new(gens.iter().map(|(n, d)| (n.to_string(), *d))).unwrap())
}

/// Bracket table entry `[e_j, e_k] = Σ value_i e_i` from strings (1-based indices).
pub fn br(v: &Vars, j: usize, k: usize, value: &[&str]) -> ((usize, usize), Vec<P>) {
    ((j - 1, k - 1), value.iter().map(|s| poly(v, s)).collect())
}

pub fn anchor(v: &Vars, rows: &[&[&str]]) -> Vec<Vec<P>> {
    rows.iter().map(|r| r.iter().map(|s| poly(v, s)).collect()).collect()
}

fn lie_algebra(rank: usize, brackets: Vec<((usize, usize), Vec<P>)>) -> Alg {
    let v = point();
    ChartAlgebroid::new(&v, vec![vec![]; rank], brackets).unwrap()
}

pub fn abelian2() -> Alg {
    lie_algebra(2, vec![])
}

pub fn aff1() -> Alg {
    let v = point();
    lie_algebra(2, vec![br(&v, 1, 2, &["0", "1"])])
}

/// Basis `h, e, f`.
pub fn sl2() -> Alg {
    let v = point();
    lie_algebra(
        3,
        vec![
            br(&v, 1, 2, &["0", "2", "0"]),
            br(&v, 1, 3, &["0", "0", "-2"]),
            br(&v, 2, 3, &["1", "0", "0"]),
        ],
    )
}

/// Basis `x, y, z` with `[x, y] = z`.
pub fn h3() -> Alg {
    let v = point();
    lie_algebra(3, vec![br(&v, 1, 2, &["0", "0", "1"])])
}

/// `ℝ` acting on `ℝ` by `∂_x`.
pub fn r_on_r() -> Alg {
    let v = vars(["x"]);
    ChartAlgebroid::new(&v, anchor(&v, &[&["1"]]), vec![]).unwrap()
}

/// `aff(1)` acting on `ℝ` by `e1 ↦ -x∂_x`, `e2 ↦ ∂_x`.
pub fn aff1_on_r() -> Alg {
    let v = vars(["x"]);
    ChartAlgebroid::new(&v, anchor(&v, &[&["-x"], &["1"]]), vec![br(&v, 1, 2, &["0", "1"])]).unwrap()
}

/// Bundle of Lie algebras over `ℝ` with `[e1, e2] = x e3`.
pub fn lie_bundle() -> Alg {
    let v = vars(["x"]);
    ChartAlgebroid::new(&v, anchor(&v, &[&["0"], &["0"], &["0"]]), vec![br(&v, 1, 2, &["0", "0", "x"])]).unwrap()
}

/// `A = TM` over the given coordinates.
pub fn tangent(names: &[&str]) -> Alg {
    let v = vars(names.iter().copied());
    let m = v.len();
    let rows = (0..m)
        .map(|i| (0..m).map(|a| if a == i { P::one(&v) } else { P::zero(&v) }).collect())
        .collect();
    ChartAlgebroid::new(&v, rows, vec![]).unwrap()
}

/// The six fixtures of the curvature suite.
pub fn curvature_fixtures() -> Vec<(&'static str, Alg)> {
    vec![
        ("abelian2", abelian2()),
        ("aff(1)", aff1()),
        ("sl2", sl2()),
        ("h3", h3()),
        ("R⋉R", r_on_r()),
        ("lie bundle c3_12 = x", lie_bundle()),
    ]
}

pub fn random_rat(rng: &mut StdRng) -> Rat {
    qq(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

/// A polynomial of degree at most `deg` with small random rational coefficients.
pub fn random_poly(rng: &mut StdRng, v: &Vars, deg: u32) -> P {
    let mut out = P::constant(v, random_rat(rng));
    if deg == 0 {
        return out;
    }
    for i in 0..v.len() {
        let x = P::var(v, i).unwrap();
        out += &x.scale(&random_rat(rng));
        if deg > 1 {
            out += &(&x * &x).scale(&random_rat(rng));
        }
    }
    out
}

/// Random connection on `A` (rank `alg.rank()`); entries are affine in the coordinates.
pub fn random_connection(rng: &mut StdRng, alg: &Alg) -> Connection<Rat> {
    let v = alg.vars();
    let n = alg.rank();
    let gamma = (0..v.len())
        .map(|_| (0..n).map(|_| (0..n).map(|_| random_poly(rng, v, 1)).collect()).collect())
        .collect();
    Connection::new(v, n, gamma).unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}
