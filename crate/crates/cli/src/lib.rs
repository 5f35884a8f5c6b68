//! Manifest-driven checks behind the `ruth` binary.

pub mod manifest;
pub mod report;

use ruth_core::algebroid::curvature_identities;
use ruth_core::report::{Check, Witness};
use ruth_core::ruth::{
    change_of_connection, deformation_cohomology, k_differential_check, transfer, KVerdict, MAX_TUPLE_DEGREE,
};
use ruth_core::weil::{brst_compare, build_weil, im_form_check, weil_cohomology, BrstVerdict, ImVerdict, Which};
use ruth_core::{Error, Poly, Result};

pub use manifest::{Input, Manifest};
pub use report::Report;

pub const TUPLE_DEGREE_VAR: &str = "RUTH_MAX_TUPLE_DEGREE";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Adjoint,
    Weil,
    Brst,
    Im,
    Kdiff,
    Cohomology,
    Transfer,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Adjoint => "adjoint",
            Command::Weil => "weil",
            Command::Brst => "brst",
            Command::Im => "im",
            Command::Kdiff => "kdiff",
            Command::Cohomology => "cohomology",
            Command::Transfer => "transfer",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub max_degree: usize,
    pub cohomology: bool,
    pub rep: Option<String>,
    pub k: Option<usize>,
    /// Enumeration bound for deformation cochains.
    pub tuple_degree: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            max_degree: 6,
            cohomology: false,
            rep: None,
            k: None,
            tuple_degree: MAX_TUPLE_DEGREE,
        }
    }
}

/// Parses `text` and runs one command on it.
pub fn run(cmd: Command, text: &str, opts: &Options) -> Result<Report> {
    let input = Input::new(manifest::parse(text)?)?;
    let mut rep = Report::new(cmd.name(), text.as_bytes());
    match cmd {
        Command::Check => cmd_check(&input, &mut rep)?,
        Command::Adjoint => cmd_adjoint(&input, &mut rep)?,
        Command::Weil => cmd_weil(&input, opts, &mut rep)?,
        Command::Brst => cmd_brst(&input, &mut rep)?,
        Command::Im => cmd_im(&input, &mut rep)?,
        Command::Kdiff => cmd_kdiff(&input, opts, &mut rep)?,
        Command::Cohomology => cmd_cohomology(&input, opts, &mut rep)?,
        Command::Transfer => cmd_transfer(&input, opts, &mut rep)?,
    }
    Ok(rep)
}

fn cmd_check(input: &Input, rep: &mut Report) -> Result<()> {
    rep.extend(&input.alg.verify_axioms());
    if rep.ok {
        rep.extend(&curvature_identities(&input.alg, &input.connection()?)?);
    }
    Ok(())
}

fn cmd_adjoint(input: &Input, rep: &mut Report) -> Result<()> {
    let nabla = input.connection()?;
    let ad = ruth_core::ruth::adjoint(&input.alg, &nabla)?;
    rep.prefixed("Ad: ", &ad.check_structure());
    if let Some(other) = input.connection2()? {
        let phi = change_of_connection(&input.alg, &nabla, &other)?;
        rep.prefixed("change of connection: ", &phi.check());
    }
    Ok(())
}

fn cmd_weil(input: &Input, opts: &Options, rep: &mut Report) -> Result<()> {
    let w = build_weil(&input.alg, &input.connection()?)?;
    let v = &input.vars;
    let mut functions: Vec<Poly> = Vec::new();
    for a in 0..v.len() {
        let xa = Poly::var(v, a)?;
        for b in a..v.len() {
            functions.push(&xa * &Poly::var(v, b)?);
        }
        functions.push(xa);
    }
    rep.extend(&w.verify(&functions));
    for (key, which) in [("d_hor", Which::Hor), ("d_ver", Which::Ver)] {
        let rows: Vec<String> = w.table(which).into_iter().map(|(n, e)| format!("{n} ↦ {e}")).collect();
        rep.table(key, rows);
    }
    if opts.cohomology {
        let betti: Vec<usize> = weil_cohomology(&w, opts.max_degree)?.into_iter().map(|(_, b)| b).collect();
        rep.table("betti", betti);
    }
    Ok(())
}

fn cmd_brst(input: &Input, rep: &mut Report) -> Result<()> {
    let w = match brst_compare(&input.alg)? {
        BrstVerdict::Equal => None,
        BrstVerdict::Differs { generator, kalkman, weil } => {
            Some(Witness::new(generator, format!("δ = {kalkman}, d = {weil}")))
        }
    };
    rep.push(&Check::from_option("Kalkman δ = d_hor + d_ver (flat)", w));
    Ok(())
}

fn cmd_im(input: &Input, rep: &mut Report) -> Result<()> {
    let (equation, w) = match im_form_check(&input.alg, &input.sigma()?)? {
        ImVerdict::Im => (None, None),
        ImVerdict::Fails { equation, witness, .. } => (Some(equation), Some(witness)),
    };
    rep.push(&Check::from_option("IM equations", w));
    if let Some(e) = equation {
        rep.table("failing_equation", e);
    }
    Ok(())
}

fn cmd_kdiff(input: &Input, opts: &Options, rep: &mut Report) -> Result<()> {
    let (delta, stored) = input.delta()?;
    let k = opts
        .k
        .or(stored)
        .ok_or_else(|| Error::Invalid("k is neither given by --k nor stored in the manifest".into()))?;
    let (verdict, w) = match k_differential_check(&delta, k) {
        KVerdict::KDifferential => ("k-differential", None),
        KVerdict::AlmostOnly(w) => ("almost k-differential", Some(w)),
        KVerdict::NotAlmost(msg) => ("not almost", Some(Witness::new("degree", msg))),
    };
    rep.push(&Check::from_option(format!("{k}-differential"), w));
    rep.table("verdict", verdict);
    Ok(())
}

fn rep_name(opts: &Options) -> Result<&str> {
    opts.rep
        .as_deref()
        .ok_or_else(|| Error::Invalid("--rep NAME is required".into()))
}

fn cmd_cohomology(input: &Input, opts: &Options, rep: &mut Report) -> Result<()> {
    let name = rep_name(opts)?;
    let betti = if name == "deformation" && !input.manifest.representations.contains_key(name) {
        deformation_cohomology(&input.alg, opts.tuple_degree)?
    } else {
        let r = input.representation(name)?;
        let checks = r.check_structure();
        rep.extend(&checks);
        if !rep.ok {
            return Ok(());
        }
        r.cohomology()?
    };
    rep.table("betti", betti);
    Ok(())
}

fn cmd_transfer(input: &Input, opts: &Options, rep: &mut Report) -> Result<()> {
    let r = input.representation(rep_name(opts)?)?;
    rep.extend(&r.check_structure());
    if !rep.ok {
        return Ok(());
    }
    let (h, phi) = transfer(&r, None)?;
    rep.prefixed("transferred: ", &h.check_structure());
    rep.prefixed("Φ: ", &phi.check());
    if input.alg.is_point() {
        let (a, b) = (nonzero(r.cohomology()?), nonzero(h.cohomology()?));
        let w = (a != b).then(|| Witness::new("betti", format!("{a:?} vs {b:?}")));
        rep.push(&Check::from_option("cohomology preserved", w));
        rep.table("betti", a);
    }
    let gens: Vec<String> = (0..h.bundle().len())
        .map(|j| format!("{} (degree {})", h.bundle().name(j), h.bundle().degree(j)))
        .collect();
    rep.table("transferred_generators", gens);
    Ok(())
}

fn nonzero(b: Vec<(i32, usize)>) -> Vec<(i32, usize)> {
    b.into_iter().filter(|&(_, n)| n > 0).collect()
}
