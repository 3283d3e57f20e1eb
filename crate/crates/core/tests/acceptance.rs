//! End-to-end acceptance run. Each criterion prints one PASS/FAIL line; the
//! process exits non-zero if any criterion fails.

use dq_core::algebra::{composition_descends_check, pre_lie_check};
use dq_core::graph::{enumerate_graphs, EnumerateOptions, GraphClassKey};
use dq_core::rational::q;
use dq_core::star::{associativity_residual, b_respects_relations, gutt_star, star, LieAlgebra, Polynomial};
use dq_core::weights::{
    default_regular_value, multiplicativity_check, weight_counted, weight_mc, wheel_relation_check, zz_check,
    AngleMapKind, OneForm, SolverParams, WeightTable,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn key(s: &str) -> GraphClassKey {
    s.parse().unwrap()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn wedge_half() -> Outcome {
    let p = SolverParams::default();
    let values = [vec![q(1, 2), q(33, 64)], vec![q(1, 7), q(5, 7)], vec![q(9, 10), q(1, 10)], vec![q(2, 3), q(1, 5)]];
    for r in &values {
        for kind in [AngleMapKind::Hyperbolic, AngleMapKind::EuclideanReflection] {
            let w = weight_counted(&key("1.2:e1e2"), r, kind, &p).map_err(err)?;
            ensure(w.coefficient == q(1, 2), format!("coefficient {} at {r:?} ({kind:?})", w.coefficient))?;
        }
    }
    Ok(format!("coefficient 1/2 at {} values, both angle maps", values.len()))
}

fn order_two_trees() -> Outcome {
    let p = SolverParams::default();
    let r = default_regular_value(4);
    let mut notes = Vec::new();
    for (class, coef, positive, negative) in [("2.2:e1e2,e1e2", q(1, 8), 3, 0), ("2.2:e1e2,v1e2", q(1, 12), 3, 1)] {
        let w = weight_counted(&key(class), &r, AngleMapKind::Hyperbolic, &p).map_err(err)?;
        let signs: Vec<i64> = w.labellings.iter().filter(|l| l.preimages > 0).map(|l| l.signed).collect();
        let pos = signs.iter().filter(|&&s| s == 1).count();
        let neg = signs.iter().filter(|&&s| s == -1).count();
        ensure(w.coefficient == coef, format!("{class}: coefficient {}", w.coefficient))?;
        ensure(
            pos == positive && neg == negative && pos + neg == signs.len(),
            format!("{class}: signs {signs:?}"),
        )?;
        notes.push(format!("{class} = {} {signs:?}", w.coefficient));
    }
    Ok(notes.join(", "))
}

fn semicircle_table() -> WeightTable {
    WeightTable::semicircle(3, AngleMapKind::Hyperbolic, &SolverParams::default()).unwrap()
}

fn star_equals_gutt(t: &WeightTable) -> Outcome {
    let mut pairs = 0;
    for g in [LieAlgebra::heisenberg(), LieAlgebra::sl2()] {
        let basis = Polynomial::monomial_basis(g.dim(), 3);
        for f in &basis {
            for h in &basis {
                let a = star(t, &g, f, h, 3).map_err(err)?;
                let b = gutt_star(&g, f, h, 3).map_err(err)?;
                ensure(a == b, format!("{f} * {h}: {a} vs {b}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} monomial pairs equal through h^3"))
}

fn associativity(t: &WeightTable) -> Outcome {
    let g = LieAlgebra::sl2();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut basis_triples = 0;
    let e = Polynomial::monomial_basis(3, 1);
    for a in &e[1..] {
        for b in &e[1..] {
            for c in &e[1..] {
                let r = associativity_residual(t, &g, a, b, c, 3).map_err(err)?;
                ensure(r.is_zero(), format!("({a}, {b}, {c}): {r}"))?;
                basis_triples += 1;
            }
        }
    }
    for k in 0..50 {
        let [a, b, c] = [(); 3].map(|_| Polynomial::random(3, 3, &mut rng));
        let r = associativity_residual(t, &g, &a, &b, &c, 3).map_err(err)?;
        ensure(r.is_zero(), format!("triple {k}: ({a}, {b}, {c}) gives {r}"))?;
    }
    Ok(format!("{basis_triples} coordinate triples and 50 random triples"))
}

fn zz(t: &WeightTable) -> Outcome {
    let p = SolverParams::default();
    let tables = [
        ("semicircle", t.clone()),
        ("counted 1/2+j/64", WeightTable::counted(2, None, AngleMapKind::Hyperbolic, &p).map_err(err)?),
        (
            "counted (3,10,17,24)/23",
            WeightTable::counted(2, Some(vec![q(3, 23), q(10, 23), q(17, 23), q(24, 23)]), AngleMapKind::Hyperbolic, &p)
                .map_err(err)?,
        ),
    ];
    for (name, t) in &tables {
        for n in 0..=2 {
            let r = zz_check(t, n).map_err(err)?;
            ensure(r.zero, format!("{name}, n = {n}: {:?}", r.residual))?;
        }
    }
    Ok("zero for n ≤ 2 with three tables".into())
}

fn loop_classes_vanish() -> Outcome {
    let classes: Vec<_> = enumerate_graphs(2, 2, EnumerateOptions::default())
        .map_err(err)?
        .into_iter()
        .filter(|c| c.loop_number > 0)
        .collect();
    ensure(!classes.is_empty(), "no loop classes")?;
    let mut notes = Vec::new();
    for c in &classes {
        let w = weight_mc(&c.key, &OneForm::semicircle(), AngleMapKind::Hyperbolic, 1_000_000, 6).map_err(err)?;
        ensure(w.stderr <= 0.01, format!("{}: stderr {}", c.key, w.stderr))?;
        ensure(w.est.abs() <= 3.0 * w.stderr, format!("{}: {} ± {}", c.key, w.est, w.stderr))?;
        notes.push(format!("{} = {:.2e} ± {:.1e}", c.key, w.est, w.stderr));
    }
    Ok(notes.join(", "))
}

fn wedge_mc() -> Outcome {
    let w = weight_mc(&key("1.2:e1e2"), &OneForm::Uniform, AngleMapKind::Hyperbolic, 1_000_000, 7).map_err(err)?;
    ensure((w.est - 0.5).abs() <= 0.01, format!("{} ± {}", w.est, w.stderr))?;
    Ok(format!("{} ± {:.1e}", w.est, w.stderr))
}

fn wheel() -> Outcome {
    let forms = vec![OneForm::Uniform, "bump:0.3,0.1".parse().unwrap(), "bump:0.65,0.15".parse().unwrap()];
    let values = vec![vec![0.3, 0.55, 0.71, 0.13], vec![0.62, 0.17, 0.41, 0.88]];
    let r = wheel_relation_check(&forms, &values, 4_000_000, 8, &SolverParams::default()).map_err(err)?;
    let summary: Vec<String> =
        r.forms.iter().map(|f| format!("{}: {:.5} ± {:.5}", f.form, f.combined, f.combined_stderr)).collect();
    let count = r.counts.iter().map(|c| c.combined.to_string()).collect::<Vec<_>>().join(", ");
    ensure(r.counts_agree, format!("counts differ: {count}"))?;
    ensure(r.forms_agree, format!("forms disagree: {}", summary.join("; ")))?;
    ensure(r.matches_count, format!("forms vs count {count}: {}", summary.join("; ")))?;
    ensure(r.hat_uniform_vanishes, format!("uniform hat weight {} ± {}", r.forms[0].hat.est, r.forms[0].hat.stderr))?;
    Ok(format!("count {count}; {}", summary.join("; ")))
}

fn exact_identities() -> Outcome {
    let pl = pre_lie_check(2).map_err(err)?;
    ensure(pl.pass, format!("pre-Lie: {:?}", pl.failures.first()))?;
    let cd = composition_descends_check(2).map_err(err)?;
    ensure(cd.pass && cd.cases > 0, format!("descends: {:?}", cd.failures.first()))?;
    let g = LieAlgebra::sl2();
    let pool = Polynomial::monomial_basis(3, 2);
    let mut rels = 0;
    for (n, m) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let r = b_respects_relations(&g, n, m, &pool).map_err(err)?;
        ensure(r.pass, format!("B on ({n},{m}): {:?}", r.failures.first()))?;
        rels += r.relations;
    }
    let mc = multiplicativity_check(3, AngleMapKind::Hyperbolic, &SolverParams::default()).map_err(err)?;
    ensure(mc.pass && !mc.cases.is_empty(), "multiplicativity")?;
    Ok(format!(
        "pre-Lie {} triples, descends {} compositions, B on {rels} relations, {} products",
        pl.cases,
        cd.cases,
        mc.cases.len()
    ))
}

fn run(id: usize, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut result = f();
    let elapsed = start.elapsed();
    if let (Ok(_), Some(l)) = (&result, limit) {
        if elapsed > l {
            result = Err(format!("took {elapsed:.1?}, limit {l:?}"));
        }
    }
    let ok = result.is_ok();
    let detail = result.unwrap_or_else(|e| e);
    println!("{} criterion {id} ({name}) [{elapsed:.1?}]: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let start = Instant::now();
    let table = semicircle_table();
    println!("semicircle table through order 3 built in {:.1?}", start.elapsed());
    let results = [
        run(1, "wedge weight", secs(1), wedge_half),
        run(2, "order-two trees", secs(60), order_two_trees),
        run(3, "star product vs Gutt", secs(300), || star_equals_gutt(&table)),
        run(4, "associativity", secs(600), || associativity(&table)),
        run(5, "Z∘Z in the quotient", secs(600), || zz(&table)),
        run(6, "loop classes, semicircle form", None, loop_classes_vanish),
        run(7, "Monte-Carlo wedge", secs(120), wedge_mc),
        run(8, "two-spiked wheel", secs(900), wheel),
        run(9, "exact identities", secs(600), exact_identities),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
