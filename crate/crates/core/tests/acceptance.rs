//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use ruth_core::algebroid::{curvature_identities, Connection, Multivector};
use ruth_core::graded::{build_contraction, mask};
use ruth_core::report::{first_failure, Check};
use ruth_core::ruth::*;
use ruth_core::weil::*;
use ruth_core::Rat;

type Outcome = Result<String, String>;

const DRAWS: u64 = 20;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_ok(checks: &[Check], what: &str) -> Result<(), String> {
    match first_failure(checks) {
        None => Ok(()),
        Some(c) => Err(format!("{what}: {c}")),
    }
}

fn connections(alg: &Arc<Alg>, seed: u64, n: u64) -> Vec<Connection<Rat>> {
    let mut g = rng(seed);
    (0..n).map(|_| random_connection(&mut g, alg)).collect()
}

fn quadratic(g: &mut rand::rngs::StdRng, v: &ruth_core::symcore::Vars) -> P {
    let mut out = P::constant(v, random_rat(g));
    for a in 0..v.len() {
        let xa = P::var(v, a).unwrap();
        out += &xa.scale(&random_rat(g));
        for b in a..v.len() {
            out += &(&xa * &P::var(v, b).unwrap()).scale(&random_rat(g));
        }
    }
    out
}

fn curvature_suite() -> Outcome {
    let mut n = 0;
    for (i, (name, alg)) in curvature_fixtures().into_iter().enumerate() {
        let alg = Arc::new(alg);
        all_ok(&alg.verify_axioms(), name)?;
        for nabla in connections(&alg, 100 + i as u64, DRAWS) {
            all_ok(&curvature_identities(&alg, &nabla).map_err(|e| e.to_string())?, name)?;
            n += 1;
        }
    }
    Ok(format!("{n} fixture × connection pairs, 3 identities each"))
}

fn adjoint_suite() -> Outcome {
    let mut n = 0;
    for (i, (name, alg)) in curvature_fixtures().into_iter().enumerate() {
        let alg = Arc::new(alg);
        let draws = connections(&alg, 200 + i as u64, DRAWS);
        for (k, nabla) in draws.iter().enumerate() {
            let ad = adjoint(&alg, nabla).map_err(|e| e.to_string())?;
            all_ok(&ad.check_structure(), name)?;
            let other = &draws[(k + 1) % draws.len()];
            let phi = change_of_connection(&alg, nabla, other).map_err(|e| e.to_string())?;
            all_ok(&phi.check(), &format!("{name}: change of connection"))?;
            n += 1;
        }
    }
    Ok(format!("{n} adjoint structures and changes of connection"))
}

fn standard_weil_line(alg: &Alg, i: usize, hor: bool, theta: bool) -> String {
    let v = point();
    let r = alg.rank();
    let mut e = WeilElement::zero(&v, r);
    if !hor {
        if theta {
            e = WeilElement::mu(&v, r, i);
        }
    } else {
        for j in 0..r {
            for k in 0..r {
                let c = alg.c(i, j, k);
                let t = if theta {
                    WeilElement::theta(&v, r, j).mul(&WeilElement::theta(&v, r, k)).mul_poly(c).scale(&qq(-1, 2))
                } else {
                    WeilElement::theta(&v, r, j).mul(&WeilElement::mu(&v, r, k)).mul_poly(c).scale(&q(-1))
                };
                e += &t;
            }
        }
    }
    format!("{}{} ↦ {e}", if theta { "θ" } else { "μ" }, i + 1)
}

fn weil_suite() -> Outcome {
    let mut checked = 0;
    let mut fixtures = curvature_fixtures();
    fixtures.push(("aff(1) on R", aff1_on_r()));
    for (i, (name, alg)) in fixtures.into_iter().enumerate() {
        let alg = Arc::new(alg);
        let mut draws = vec![Connection::flat(alg.vars(), alg.rank())];
        draws.extend(connections(&alg, 300 + i as u64, DRAWS));
        for (k, nabla) in draws.iter().enumerate() {
            let w = build_weil(&alg, nabla).map_err(|e| e.to_string())?;
            let mut g = rng(1000 + 10 * i as u64 + k as u64);
            let mut items: Vec<(String, WeilElement<Rat>)> =
                w.generators().into_iter().map(|gen| (w.generator_name(gen), w.element(gen))).collect();
            if !alg.is_point() {
                for n in 0..50 {
                    let f = quadratic(&mut g, alg.vars());
                    items.push((format!("f{n}"), WeilElement::function(alg.vars(), alg.rank(), &f)));
                }
            }
            for (what, e) in items {
                let dd = w.d(&w.d(&e, Which::Total), Which::Total);
                ensure(dd.is_zero(), || format!("{name}: d_total²({what}) = {dd}"))?;
                checked += 1;
            }
        }
        if alg.is_point() {
            let w = build_weil(&alg, &draws[0]).map_err(|e| e.to_string())?;
            for (hor, which) in [(true, Which::Hor), (false, Which::Ver)] {
                let got: Vec<String> = w.table(which).into_iter().map(|(n, e)| format!("{n} ↦ {e}")).collect();
                let r = alg.rank();
                let want: Vec<String> = (0..r)
                    .map(|i| standard_weil_line(&alg, i, hor, true))
                    .chain((0..r).map(|i| standard_weil_line(&alg, i, hor, false)))
                    .collect();
                ensure(got == want, || format!("{name}: table {got:?} vs {want:?}"))?;
            }
        }
    }
    Ok(format!("d_total² = 0 on {checked} elements; point-base tables match"))
}

fn brst_suite() -> Outcome {
    for (name, alg) in [("R on R", r_on_r()), ("so(3) on R3", so3_on_r3())] {
        let alg = Arc::new(alg);
        all_ok(&alg.verify_axioms(), name)?;
        match brst_compare(&alg).map_err(|e| e.to_string())? {
            BrstVerdict::Equal => {}
            BrstVerdict::Differs { generator, kalkman, weil } => {
                return Err(format!("{name}: {generator}: {kalkman} vs {weil}"));
            }
        }
    }
    Ok("equal on R on R and so(3) on R3".into())
}

fn acyclicity_suite() -> Outcome {
    let line = Arc::new(ruth_core::algebroid::ChartAlgebroid::new(&point(), vec![vec![]], Vec::new()).unwrap());
    let mut out = Vec::new();
    for (name, alg, n) in [("abelian1", line, 6), ("sl2", Arc::new(sl2()), 4)] {
        let w = build_weil(&alg, &Connection::flat(alg.vars(), alg.rank())).map_err(|e| e.to_string())?;
        let b: Vec<usize> = weil_cohomology(&w, n).map_err(|e| e.to_string())?.into_iter().map(|(_, b)| b).collect();
        let mut want = vec![0; n];
        want[0] = 1;
        ensure(b == want, || format!("{name}: {b:?}"))?;
        out.push(format!("{name} {b:?}"));
    }
    Ok(out.join(", "))
}

fn transfer_suite() -> Outcome {
    let r = serre_rep(&h3_center_first(), 1).map_err(|e| e.to_string())?;
    all_ok(&r.check_structure(), "Serre rep")?;
    let oracle = CeOracle::trivial(&h3()).betti();
    ensure(oracle == vec![1, 2, 2, 1], || format!("oracle {oracle:?}"))?;
    let (h, phi) = transfer(&r, None).map_err(|e| e.to_string())?;
    all_ok(&h.check_structure(), "D_H² = 0")?;
    all_ok(&phi.check(), "Φ chain map")?;
    let b = bettis(&h);
    ensure(b == oracle, || format!("transferred {b:?} vs oracle {oracle:?}"))?;
    ensure(bettis(&r) == oracle, || "Serre rep Betti numbers".into())?;
    Ok(format!("Betti {b:?}"))
}

fn deformation_suite() -> Outcome {
    for (name, alg) in [("abelian2", abelian2()), ("aff1", aff1()), ("sl2", sl2()), ("h3", h3())] {
        let oracle = CeOracle::adjoint(&alg).betti();
        let alg = Arc::new(alg);
        let def: Vec<usize> = deformation_cohomology(&alg, MAX_TUPLE_DEGREE)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|(_, b)| b)
            .collect();
        ensure(def == oracle, || format!("{name}: {def:?} vs {oracle:?}"))?;
    }
    for (seed, alg) in [(1, aff1_on_r()), (2, r_on_r())] {
        let alg = Arc::new(alg);
        let nabla = random_connection(&mut rng(seed + 100), &alg);
        let ad = adjoint(&alg, &nabla).map_err(|e| e.to_string())?;
        for k in 1..=2 {
            for draw in 0..3 {
                let c = random_cochain(seed * 31 + 7 * k as u64 + draw, &alg, k);
                let dc = c.differential().map_err(|e| e.to_string())?;
                let lhs = psi_bridge(&alg, &nabla, &dc).map_err(|e| e.to_string())?;
                let rhs = ad.apply(&psi_bridge(&alg, &nabla, &c).map_err(|e| e.to_string())?);
                ensure(lhs == rhs, || format!("Ψδ ≠ DΨ in degree {k}"))?;
            }
        }
    }
    Ok("H_def = H(g; Ad) on 4 Lie algebras; Ψ intertwines in degrees 1-2".into())
}

fn verdict_suite() -> Outcome {
    let plane = tangent(&["x", "y"]);
    let v = plane.vars().clone();
    let sigma = vec![vec![P::zero(&v), P::one(&v)], vec![-&P::one(&v), P::zero(&v)]];
    ensure(im_form_check(&plane, &sigma).map_err(|e| e.to_string())? == ImVerdict::Im, || {
        "closed form rejected".into()
    })?;
    let space = tangent(&["x", "y", "z"]);
    let v = space.vars().clone();
    let z = poly(&v, "z");
    let mut sigma = vec![vec![P::zero(&v); 3]; 3];
    sigma[0][1] = z.clone();
    sigma[1][0] = -&z;
    match im_form_check(&space, &sigma).map_err(|e| e.to_string())? {
        ImVerdict::Fails { equation: 2, pair: (0, 1), .. } => {}
        other => return Err(format!("z dx∧dy: {other:?}")),
    }
    for (name, alg) in [("sl2", sl2()), ("aff1", aff1()), ("aff(1) on R", aff1_on_r())] {
        let alg = Arc::new(alg);
        let (v, r) = (alg.vars().clone(), alg.rank());
        let mut g = rng(r as u64 + 5);
        let mut a0 = Multivector::zero(&v, r);
        for m in mask::subsets(r, 1) {
            a0.add_term(m, &random_poly(&mut g, &v, 1));
        }
        let inner = KDifferential::inner(&alg, &a0).map_err(|e| e.to_string())?;
        ensure(k_differential_check(&inner, 1) == KVerdict::KDifferential, || format!("{name}: inner rejected"))?;
        let id = KDifferential::new(
            &alg,
            vec![Multivector::zero(&v, r); alg.dim()],
            (0..r).map(|i| Multivector::basis(&v, r, &[i])).collect(),
        )
        .map_err(|e| e.to_string())?;
        ensure(matches!(k_differential_check(&id, 1), KVerdict::AlmostOnly(_)), || {
            format!("{name}: Id accepted")
        })?;
    }
    Ok("IM accept/reject with (∂x, ∂y) witness; inner accepted, Id rejected".into())
}

fn exact_suite() -> Outcome {
    let (alg, partial, nabla) = curved_121();
    let cd = build_contraction(&partial).map_err(|e| e.to_string())?;
    let a = exact_rep(&alg, &partial, &nabla, &cd).map_err(|e| e.to_string())?;
    all_ok(&a.check_structure(), "exact rep")?;
    ensure(!a.component(2).is_zero(), || "ω₂ vanishes".into())?;
    let other = random_a_connection(33, &alg, nabla.bundle());
    let b = exact_rep(&alg, &partial, &other, &cd).map_err(|e| e.to_string())?;
    all_ok(&b.check_structure(), "second exact rep")?;
    let phi = exact_isomorphism(&a, &b, &cd).map_err(|e| e.to_string())?;
    all_ok(&phi.check(), "Id + T")?;
    ensure(phi.is_isomorphism(), || "Id + T not invertible".into())?;
    Ok("structure equations and Id + T intertwining".into())
}

fn les_suite() -> Outcome {
    let r = serre_rep(&h3_center_first(), 1).map_err(|e| e.to_string())?;
    ensure(!r.component(2).is_zero(), || "ω₂ = 0".into())?;
    let les = long_exact_sequence(&r).map_err(|e| e.to_string())?;
    ensure(les.nodes.len() >= 6, || format!("{} nodes", les.nodes.len()))?;
    for n in &les.nodes {
        ensure(n.is_exact(), || format!("{n:?}"))?;
    }
    // H^0 and H^1 of C(l) are trivial lines over g = R²
    let plane = CeOracle::trivial(&abelian2()).betti();
    let mut compared = 0;
    for n in &les.nodes {
        if let Some(rest) = n.label.strip_prefix("H^") {
            let deg: Option<usize> = rest.split('(').next().and_then(|d| d.parse().ok());
            if let (Some(d), true) = (deg, n.label.ends_with("(H0)")) {
                let want = plane.get(d).copied().unwrap_or(0);
                ensure(n.betti == want, || format!("{}: {} vs {want}", n.label, n.betti))?;
                compared += 1;
            }
        }
    }
    ensure(compared >= 3, || format!("only {compared} H0 nodes"))?;
    Ok(format!("{} nodes exact, {compared} H0 nodes match the oracle", les.nodes.len()))
}

struct Criterion {
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion {
            name: "curvature identities",
            limit: Some(Duration::from_secs(10)),
            run: curvature_suite,
        },
        Criterion {
            name: "adjoint structure",
            limit: Some(Duration::from_secs(10)),
            run: adjoint_suite,
        },
        Criterion {
            name: "Weil d² = 0",
            limit: Some(Duration::from_secs(20)),
            run: weil_suite,
        },
        Criterion {
            name: "BRST equality",
            limit: None,
            run: brst_suite,
        },
        Criterion {
            name: "Weil acyclicity at a point",
            limit: Some(Duration::from_secs(60)),
            run: acyclicity_suite,
        },
        Criterion {
            name: "transfer of the Heisenberg Serre rep",
            limit: None,
            run: transfer_suite,
        },
        Criterion {
            name: "deformation bridge",
            limit: None,
            run: deformation_suite,
        },
        Criterion {
            name: "IM and k-differential verdicts",
            limit: None,
            run: verdict_suite,
        },
        Criterion {
            name: "exact-complex builder",
            limit: None,
            run: exact_suite,
        },
        Criterion {
            name: "long exact sequence",
            limit: None,
            run: les_suite,
        },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(c.run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(l)) if took > l => Err(format!("took {took:.1?}, limit {l:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS  {:>2}  {}  ({took:.1?}): {detail}", i + 1, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}  {}  ({took:.1?}): {why}", i + 1, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
