//! An independent Chevalley–Eilenberg oracle and the fixtures shared by the
//! representation tests.

use std::sync::Arc;

use num_traits::Zero;
use ruth_core::algebroid::{AConnection, ChartAlgebroid};
use ruth_core::graded::{mask, Bundle, FormElement, FormMap};
use ruth_core::ruth::{DeformationCochain, Ruth};
use ruth_core::symcore::vars;
use ruth_core::Rat;

use super::*;

// Cochains are tables on increasing index tuples, the differential is the
// textbook formula and ranks come from a separate Gaussian elimination.

pub fn oracle_rank(mut m: Vec<Vec<Rat>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone() / m[rank][c].clone();
                for k in 0..cols {
                    let d = f.clone() * m[rank][k].clone();
                    m[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for t in tuples(n, k - 1) {
        for j in t.last().map_or(0, |&l| l + 1)..n {
            let mut v = t.clone();
            v.push(j);
            out.push(v);
        }
    }
    out
}

/// Sorts `idx`, returning the permutation sign, or `None` on a repeat.
pub fn sort_sign(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut odd = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                odd = !odd;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, odd))
}

/// `c[i][j][k] = c^k_{ij}`, `rep[i]` the matrix of `x_i` on `V`.
pub struct CeOracle {
    pub n: usize,
    pub c: Vec<Vec<Vec<Rat>>>,
    pub rep: Vec<Vec<Vec<Rat>>>,
}

impl CeOracle {
    pub fn from_alg(alg: &Alg, rep: Vec<Vec<Vec<Rat>>>) -> Self {
        let n = alg.rank();
        let c = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| alg.c(k, i, j).as_constant().unwrap()).collect()).collect())
            .collect();
        CeOracle { n, c, rep }
    }

    pub fn trivial(alg: &Alg) -> Self {
        Self::from_alg(alg, vec![vec![vec![q(0)]]; alg.rank()])
    }

    pub fn adjoint(alg: &Alg) -> Self {
        let n = alg.rank();
        let rep = (0..n)
            .map(|i| (0..n).map(|k| (0..n).map(|j| alg.c(k, i, j).as_constant().unwrap()).collect()).collect())
            .collect();
        Self::from_alg(alg, rep)
    }

    pub fn dim_v(&self) -> usize {
        self.rep.first().map_or(1, Vec::len)
    }

    /// Matrix of `d: C^k → C^{k+1}`; coordinates `(tuple, v)`.
    pub fn matrix(&self, k: usize) -> Vec<Vec<Rat>> {
        let (n, m) = (self.n, self.dim_v());
        let src = tuples(n, k);
        let tgt = tuples(n, k + 1);
        let mut out = vec![vec![q(0); src.len() * m]; tgt.len() * m];
        for (si, s) in src.iter().enumerate() {
            for v in 0..m {
                // ω = δ_s ⊗ e_v
                let omega = |args: &[usize]| -> Vec<Rat> {
                    let mut r = vec![q(0); m];
                    if let Some((sorted, odd)) = sort_sign(args) {
                        if &sorted == s {
                            r[v] = if odd { q(-1) } else { q(1) };
                        }
                    }
                    r
                };
                for (ti, t) in tgt.iter().enumerate() {
                    let mut val = vec![q(0); m];
                    for i in 0..=k {
                        let rest: Vec<usize> = (0..=k).filter(|&l| l != i).map(|l| t[l]).collect();
                        let w = omega(&rest);
                        let sign = if i % 2 == 0 { q(1) } else { q(-1) };
                        for a in 0..m {
                            for b in 0..m {
                                val[a] += sign.clone() * self.rep[t[i]][a][b].clone() * w[b].clone();
                            }
                        }
                    }
                    for i in 0..=k {
                        for j in i + 1..=k {
                            let sign = if (i + j) % 2 == 0 { q(1) } else { q(-1) };
                            for l in 0..n {
                                let cl = self.c[t[i]][t[j]][l].clone();
                                if cl.is_zero() {
                                    continue;
                                }
                                let mut args = vec![l];
                                args.extend((0..=k).filter(|&x| x != i && x != j).map(|x| t[x]));
                                let w = omega(&args);
                                for a in 0..m {
                                    val[a] += sign.clone() * cl.clone() * w[a].clone();
                                }
                            }
                        }
                    }
                    for a in 0..m {
                        out[ti * m + a][si * m + v] = val[a].clone();
                    }
                }
            }
        }
        out
    }

    pub fn betti(&self) -> Vec<usize> {
        let n = self.n;
        let m = self.dim_v();
        let ranks: Vec<usize> = (0..n).map(|k| oracle_rank(self.matrix(k))).collect();
        (0..=n)
            .map(|k| {
                let dim = tuples(n, k).len() * m;
                dim - if k < n { ranks[k] } else { 0 } - if k > 0 { ranks[k - 1] } else { 0 }
            })
            .collect()
    }
}

pub fn bettis(r: &Ruth<Rat>) -> Vec<usize> {
    r.cohomology().unwrap().into_iter().map(|(_, b)| b).collect()
}

pub fn nonzero_bettis(r: &Ruth<Rat>) -> Vec<(i32, usize)> {
    r.cohomology().unwrap().into_iter().filter(|&(_, b)| b > 0).collect()
}

// ---------------------------------------------------------------------------
// Fixtures

pub fn arc(a: Alg) -> Arc<Alg> {
    Arc::new(a)
}

/// `h3` with the center first: `ẽ1 = z, ẽ2 = x, ẽ3 = y`, `[ẽ2, ẽ3] = ẽ1`.
pub fn h3_center_first() -> Alg {
    let v = point();
    ChartAlgebroid::new(&v, vec![vec![]; 3], vec![br(&v, 2, 3, &["1", "0", "0"])]).unwrap()
}

/// `aff(1)` with the ideal first: `[ẽ2, ẽ1] = ẽ1`.
pub fn aff1_ideal_first() -> Alg {
    let v = point();
    ChartAlgebroid::new(&v, vec![vec![]; 2], vec![br(&v, 1, 2, &["-1", "0"])]).unwrap()
}

/// Curved line bundle over `A = Tℝ²`: `∇_{∂x} n = y n`.
pub fn curved_line() -> (Arc<Alg>, AConnection<Rat>) {
    let alg = arc(tangent(&["x", "y"]));
    let v = alg.vars().clone();
    let e = bundle(&[("n", 0)]);
    let coeffs = vec![vec![vec![poly(&v, "y")]], vec![vec![poly(&v, "0")]]];
    (alg.clone(), AConnection::new(&v, 2, &e, coeffs).unwrap())
}

/// The exact complex `a → b1, b2 → c` with `∂a = b1`, `∂b2 = c` over
/// `A = Tℝ³`, with a connection that neither commutes with `∂` nor is flat.
pub fn curved_121() -> (Arc<Alg>, FormMap<Rat>, AConnection<Rat>) {
    let alg = arc(tangent(&["x", "y", "z"]));
    let v = alg.vars().clone();
    let e = bundle(&[("a", 0), ("b1", 1), ("b2", 1), ("c", 2)]);
    let mut d = vec![FormElement::zero(&v, 3, &e); 4];
    d[0].add_term(0, 1, &poly(&v, "1"));
    d[2].add_term(0, 3, &poly(&v, "1"));
    let partial = FormMap::new(&v, 3, &e, &e, 1, d).unwrap();
    let z = || poly(&v, "0");
    let mut coeffs = vec![vec![vec![z(); 4]; 4]; 3];
    coeffs[0][0][0] = poly(&v, "y");
    coeffs[1][1][2] = poly(&v, "x");
    coeffs[2][2][1] = poly(&v, "y");
    coeffs[2][2][2] = poly(&v, "z");
    coeffs[0][3][3] = poly(&v, "z");
    (alg, partial, AConnection::new(&v, 3, &e, coeffs).unwrap())
}

pub fn random_a_connection(seed: u64, alg: &Alg, e: &Bundle) -> AConnection<Rat> {
    let mut g = rng(seed);
    let v = alg.vars();
    let n = e.len();
    let coeffs = (0..alg.rank())
        .map(|_| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .map(|k| {
                            if e.degree(j) == e.degree(k) {
                                random_poly(&mut g, v, 1)
                            } else {
                                P::zero(v)
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    AConnection::new(v, alg.rank(), e, coeffs).unwrap()
}

/// `so(3)` acting on `ℝ³` by rotations `X_i = Σ ε_{ijk} x_j ∂_k`.
pub fn so3_on_r3() -> Alg {
    let v = vars(["x", "y", "z"]);
    let anchor = anchor(&v, &[&["0", "z", "-y"], &["-z", "0", "x"], &["y", "-x", "0"]]);
    let brackets = vec![
        br(&v, 1, 2, &["0", "0", "1"]),
        br(&v, 2, 3, &["1", "0", "0"]),
        br(&v, 3, 1, &["0", "1", "0"]),
    ];
    ChartAlgebroid::new(&v, anchor, brackets).unwrap()
}

pub fn random_cochain(seed: u64, alg: &Arc<Alg>, k: usize) -> DeformationCochain<Rat> {
    let mut g = rng(seed);
    let v = alg.vars();
    let r = alg.rank();
    let values = (0..mask::subsets(r, k).len())
        .map(|_| (0..r).map(|_| random_poly(&mut g, v, 2)).collect())
        .collect();
    let ns = if k == 0 { 0 } else { mask::subsets(r, k - 1).len() };
    let symbols = (0..ns).map(|_| (0..alg.dim()).map(|_| random_poly(&mut g, v, 2)).collect()).collect();
    DeformationCochain::new(alg, k, values, symbols).unwrap()
}
