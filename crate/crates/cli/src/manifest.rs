//! JSON manifests. Polynomials are strings over the declared chart; section
//! indices are 1-based throughout.

use std::collections::BTreeMap;
use std::sync::Arc;

use ruth_core::algebroid::{ChartAlgebroid, Connection, Multivector};
use ruth_core::graded::{mask, FormElement, GradedBundle};
use ruth_core::ruth::{adjoint, serre_rep, KDifferential, Ruth};
use ruth_core::symcore::{parse_poly, vars, Vars};
use ruth_core::{Error, Poly, Rat, Result};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    /// Coordinate names; empty for a point.
    #[serde(default)]
    pub chart: Vec<String>,
    pub rank: usize,
    /// `anchor[i]` = components of `ρ(e_i)`. May be omitted at a point.
    #[serde(default)]
    pub anchor: Vec<Vec<String>>,
    /// `"j,k"` → components of `[e_j, e_k]`, for `j < k`.
    #[serde(default)]
    pub brackets: BTreeMap<String, Vec<String>>,
    /// `gamma[a][j]` = components of `∇_{∂a} e_j`.
    #[serde(default)]
    pub connection: Option<Vec<Vec<Vec<String>>>>,
    /// A second connection for change-of-connection checks.
    #[serde(default)]
    pub connection2: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default)]
    pub representations: BTreeMap<String, RepSpec>,
    /// `sigma[i]` = components of `σ(e_i)` in `dx^a`.
    #[serde(default)]
    pub sigma: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub delta: Option<DeltaSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RepSpec {
    Adjoint,
    /// The first `ideal_dim` basis vectors span the ideal.
    Serre { ideal_dim: usize },
    /// `D(s) = Σ coeff θ^form ⊗ target`; the empty form gives `∂`, one index
    /// the connection, longer ones the curvature terms.
    Custom {
        generators: Vec<(String, i32)>,
        differential: BTreeMap<String, Vec<Term>>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    #[serde(default)]
    pub form: Vec<usize>,
    pub target: String,
    pub coeff: String,
}

/// Multivectors are maps from `"i,j,…"` (empty string for functions) to
/// coefficients.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaSpec {
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub functions: Vec<BTreeMap<String, String>>,
    pub sections: Vec<BTreeMap<String, String>>,
}

pub fn parse(text: &str) -> Result<Manifest> {
    serde_json::from_str(text).map_err(|e| Error::Syntax {
        pos: e.column(),
        msg: format!("manifest line {}: {e}", e.line()),
    })
}

fn shape(block: &str, msg: impl Into<String>) -> Error {
    Error::Shape {
        block: block.into(),
        msg: msg.into(),
    }
}

fn indices(block: &str, key: &str, bound: usize) -> Result<Vec<usize>> {
    if key.trim().is_empty() {
        return Ok(vec![]);
    }
    key.split(',')
        .map(|s| {
            let i: usize = s.trim().parse().map_err(|_| shape(block, format!("bad index list `{key}`")))?;
            if i == 0 || i > bound {
                return Err(shape(block, format!("index {i} in `{key}` outside 1..={bound}")));
            }
            Ok(i - 1)
        })
        .collect()
}

/// The chart, the algebroid and the parsed manifest.
pub struct Input {
    pub manifest: Manifest,
    pub vars: Vars,
    pub alg: Arc<ChartAlgebroid<Rat>>,
}

impl Input {
    pub fn new(manifest: Manifest) -> Result<Self> {
        let vars = vars(manifest.chart.iter().map(String::as_str));
        let (r, m) = (manifest.rank, vars.len());
        let anchor = if manifest.anchor.is_empty() && m == 0 {
            vec![vec![]; r]
        } else {
            if manifest.anchor.len() != r {
                return Err(shape("anchor", format!("expected {r} rows, found {}", manifest.anchor.len())));
            }
            let mut rows = Vec::with_capacity(r);
            for (i, row) in manifest.anchor.iter().enumerate() {
                rows.push(poly_row(&vars, &format!("anchor[{}]", i + 1), row, m)?);
            }
            rows
        };
        let mut brackets = Vec::new();
        for (key, value) in &manifest.brackets {
            let block = format!("brackets[{key}]");
            let idx = indices(&block, key, r)?;
            if idx.len() != 2 {
                return Err(shape(&block, "expected a pair `j,k`"));
            }
            brackets.push(((idx[0], idx[1]), poly_row(&vars, &block, value, r)?));
        }
        let alg = Arc::new(ChartAlgebroid::new(&vars, anchor, brackets)?);
        Ok(Input { manifest, vars, alg })
    }

    pub fn poly(&self, block: &str, text: &str) -> Result<Poly> {
        poly(&self.vars, block, text)
    }

    fn connection_from(&self, block: &str, gamma: &[Vec<Vec<String>>]) -> Result<Connection<Rat>> {
        let (r, m) = (self.alg.rank(), self.alg.dim());
        if gamma.len() != m {
            return Err(shape(block, format!("expected {m} tables, found {}", gamma.len())));
        }
        let mut out = Vec::with_capacity(m);
        for (a, table) in gamma.iter().enumerate() {
            if table.len() != r {
                return Err(shape(block, format!("table {} has {} rows for rank {r}", a + 1, table.len())));
            }
            let rows = table
                .iter()
                .enumerate()
                .map(|(j, row)| poly_row(&self.vars, &format!("{block}[{}][{}]", a + 1, j + 1), row, r))
                .collect::<Result<Vec<_>>>()?;
            out.push(rows);
        }
        Connection::new(&self.vars, r, out)
    }

    /// The manifest connection, or the flat one.
    pub fn connection(&self) -> Result<Connection<Rat>> {
        match &self.manifest.connection {
            Some(g) => self.connection_from("connection", g),
            None => Ok(Connection::flat(&self.vars, self.alg.rank())),
        }
    }

    pub fn connection2(&self) -> Result<Option<Connection<Rat>>> {
        self.manifest.connection2.as_ref().map(|g| self.connection_from("connection2", g)).transpose()
    }

    pub fn representation(&self, name: &str) -> Result<Ruth<Rat>> {
        let spec = self
            .manifest
            .representations
            .get(name)
            .ok_or_else(|| Error::Invalid(format!("no representation named `{name}`")))?;
        match spec {
            RepSpec::Adjoint => adjoint(&self.alg, &self.connection()?),
            RepSpec::Serre { ideal_dim } => serre_rep(&self.alg, *ideal_dim),
            RepSpec::Custom { generators, differential } => {
                let block = format!("representations[{name}]");
                let bundle = Arc::new(GradedBundle::new(generators.iter().map(|(n, d)| (n.clone(), *d)))?);
                let r = self.alg.rank();
                let mut images = vec![FormElement::zero(&self.vars, r, &bundle); bundle.len()];
                for (source, terms) in differential {
                    let j = bundle
                        .index_of(source)
                        .ok_or_else(|| shape(&block, format!("unknown generator `{source}`")))?;
                    for t in terms {
                        let k = bundle
                            .index_of(&t.target)
                            .ok_or_else(|| shape(&block, format!("unknown generator `{}`", t.target)))?;
                        let idx: Vec<usize> = t.form.iter().map(|&i| i.wrapping_sub(1)).collect();
                        if idx.iter().any(|&i| i >= r) {
                            return Err(shape(&block, format!("form indices {:?} outside 1..={r}", t.form)));
                        }
                        let c = self.poly(&block, &t.coeff)?;
                        let (m, negate) = sorted_mask(&idx).ok_or_else(|| shape(&block, "repeated form index"))?;
                        images[j].add_signed(m, k, &c, negate);
                    }
                }
                Ruth::from_generator_images(&self.alg, &bundle, images)
            }
        }
    }

    pub fn sigma(&self) -> Result<Vec<Vec<Poly>>> {
        let rows = self.manifest.sigma.as_ref().ok_or_else(|| shape("sigma", "missing"))?;
        let m = self.alg.dim();
        rows.iter()
            .enumerate()
            .map(|(i, row)| poly_row(&self.vars, &format!("sigma[{}]", i + 1), row, m))
            .collect()
    }

    /// The candidate and the `k` stored with it.
    pub fn delta(&self) -> Result<(KDifferential<Rat>, Option<usize>)> {
        let d = self.manifest.delta.as_ref().ok_or_else(|| shape("delta", "missing"))?;
        let functions = d
            .functions
            .iter()
            .map(|t| self.multivector("delta.functions", t))
            .collect::<Result<Vec<_>>>()?;
        let functions = if functions.is_empty() && self.alg.is_point() { vec![] } else { functions };
        let sections = d
            .sections
            .iter()
            .map(|t| self.multivector("delta.sections", t))
            .collect::<Result<Vec<_>>>()?;
        Ok((KDifferential::new(&self.alg, functions, sections)?, d.k))
    }

    fn multivector(&self, block: &str, terms: &BTreeMap<String, String>) -> Result<Multivector<Rat>> {
        let r = self.alg.rank();
        let mut out = Multivector::zero(&self.vars, r);
        for (key, coeff) in terms {
            let idx = indices(block, key, r)?;
            let (m, negate) = sorted_mask(&idx).ok_or_else(|| shape(block, format!("repeated index in `{key}`")))?;
            out.add_signed(m, &self.poly(block, coeff)?, negate);
        }
        Ok(out)
    }
}

/// The mask of `e_{i1} ∧ … ∧ e_{ik}` and whether sorting it is odd.
fn sorted_mask(idx: &[usize]) -> Option<(u32, bool)> {
    let mut m = 0u32;
    let mut odd = false;
    for &i in idx {
        let (w, s) = mask::wedge(m, mask::single(i))?;
        m = w;
        odd ^= s;
    }
    Some((m, odd))
}

fn poly(vars: &Vars, block: &str, text: &str) -> Result<Poly> {
    parse_poly(text, vars).map_err(|e| match e {
        Error::Syntax { pos, msg } => Error::Syntax {
            pos,
            msg: format!("{block}: {msg} in `{text}`"),
        },
        Error::UnknownIdentifier { name, pos } => Error::Syntax {
            pos,
            msg: format!("{block}: unknown identifier `{name}` in `{text}`"),
        },
        other => other,
    })
}

fn poly_row(vars: &Vars, block: &str, row: &[String], len: usize) -> Result<Vec<Poly>> {
    if row.len() != len {
        return Err(shape(block, format!("expected {len} entries, found {}", row.len())));
    }
    row.iter().map(|s| poly(vars, block, s)).collect()
}
