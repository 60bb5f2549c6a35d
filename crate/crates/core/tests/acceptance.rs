//! Desk-scale acceptance suite: one line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use gyrolab::axioms::{check_all, check_strong_ball_invariance};
use gyrolab::instances::{
    association_gap, mobius_gyr, validate_table, EinsteinBall, Integers, MobiusDisk, MobiusPoint,
    TableGyro,
};
use gyrolab::metric::{
    ball_arithmetic_check, discrete_family_check, greedy_separated_family, precompact_witness,
    u_disjoint_check, Ball, Candidates, SampleCloud,
};
use gyrolab::suitable::{
    extend_via_open_subgyro, suitable_countable_trace, suitable_finite, suitable_nonprecompact,
    suitable_precompact_disk, verify_suitable, ConstructionConfig, SuitableSetResult,
};
use gyrolab::words::{enumerate_trees, r_set, Sign};
use gyrolab::{stream_rng, Gyrogroup};
use num_complex::Complex64;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

const SAMPLES: usize = 100_000;

fn axiom_suite<G: Gyrogroup>(g: &G) -> Result<(f64, Duration), String> {
    let start = Instant::now();
    let mut reports = check_all(g, SAMPLES, 1e-9, 1).map_err(err)?;
    reports.push(
        check_strong_ball_invariance(g, &[0.25, 0.5, 0.75, 0.9], SAMPLES / 4, 1e-9, 1)
            .map_err(err)?,
    );
    let elapsed = start.elapsed();
    let mut worst = 0.0f64;
    for r in &reports {
        ensure(r.passed(), || {
            format!("{} on {}: residual {}", r.axiom, g.name(), r.residual)
        })?;
        ensure(r.samples >= SAMPLES, || {
            format!("{} on {}: only {} samples", r.axiom, g.name(), r.samples)
        })?;
        worst = worst.max(r.residual);
    }
    ensure(elapsed < Duration::from_secs(30), || {
        format!("{} took {elapsed:?}", g.name())
    })?;
    Ok((worst, elapsed))
}

fn axioms() -> Outcome {
    let (m, tm) = axiom_suite(&MobiusDisk::new())?;
    let (e, te) = axiom_suite(&EinsteinBall::new(1.0).map_err(err)?)?;
    Ok(format!(
        "mobius max {m:.1e} in {:.2}s, einstein max {e:.1e} in {:.2}s",
        tm.as_secs_f64(),
        te.as_secs_f64()
    ))
}

fn gyration_modulus() -> Outcome {
    let g = MobiusDisk::new();
    let mut rng = stream_rng(2, 0);
    let mut worst = 0.0f64;
    for _ in 0..SAMPLES {
        let a = g.sample(&mut rng).map_err(err)?;
        let b = g.sample(&mut rng).map_err(err)?;
        let c = g.sample(&mut rng).map_err(err)?;
        let image = mobius_gyr(a, b, c).map_err(err)?;
        worst = worst.max((image.modulus() - c.modulus()).abs());
    }
    ensure(worst <= 1e-14, || format!("modulus drift {worst:e}"))?;
    Ok(format!("max drift {worst:.1e} over {SAMPLES} triples"))
}

fn nonassociativity() -> Outcome {
    // independent evaluation of (a + b) / (1 + conj(a) b)
    let plus = |a: Complex64, b: Complex64| (a + b) / (1.0 + a.conj() * b);
    let (x, y, z) = (
        Complex64::new(0.5, 0.0),
        Complex64::new(0.0, 0.5),
        Complex64::new(-0.5, 0.0),
    );
    let lhs = plus(plus(x, y), z);
    let rhs = plus(x, plus(y, z));
    let oracle = (lhs - rhs).norm();
    // frozen exact values: 4/17 + 15/34 i and 5/13 + 15/26 i
    let frozen_l = Complex64::new(4.0 / 17.0, 15.0 / 34.0);
    let frozen_r = Complex64::new(5.0 / 13.0, 15.0 / 26.0);
    ensure(
        (lhs - frozen_l).norm() < 1e-15 && (rhs - frozen_r).norm() < 1e-15,
        || format!("oracle disagrees with frozen values: {lhs} {rhs}"),
    )?;
    let p = |z: Complex64| MobiusPoint::new(z).map_err(err);
    let gap = association_gap(p(x)?, p(y)?, p(z)?).map_err(err)?;
    ensure((gap.gap - oracle).abs() < 1e-14, || {
        format!("library gap {} vs oracle {oracle}", gap.gap)
    })?;
    ensure(gap.gap > 0.01, || format!("gap {} too small", gap.gap))?;
    Ok(format!("gap {:.4}", gap.gap))
}

fn bracketings(n: usize) -> Vec<String> {
    if n == 1 {
        return vec!["x".into()];
    }
    let mut out = Vec::new();
    for k in 1..n {
        for l in bracketings(k) {
            for r in bracketings(n - k) {
                out.push(format!("({l}{r})"));
            }
        }
    }
    out
}

fn random_words_agree<G: Gyrogroup>(g: &G, trials: usize, seed: u64) -> Result<(), String> {
    let mut rng = stream_rng(seed, 0);
    for _ in 0..trials {
        let n = rng.random_range(1..=6);
        let signs: Vec<Sign> = (0..n)
            .map(|_| {
                if rng.random() {
                    Sign::Plus
                } else {
                    Sign::Minus
                }
            })
            .collect();
        let xs = (0..n)
            .map(|_| g.sample(&mut rng))
            .collect::<gyrolab::Result<Vec<_>>>()
            .map_err(err)?;
        let values = r_set(g, &signs, &xs, 0.0).map_err(err)?;
        ensure(values.len() == 1, || {
            format!("{} bracketings disagree on {}", values.len(), g.name())
        })?;
    }
    Ok(())
}

fn combinatorics() -> Outcome {
    const CATALAN: [usize; 10] = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862];
    for n in 1..=10 {
        let oracle: BTreeSet<String> = bracketings(n).into_iter().collect();
        let trees = enumerate_trees(n).map_err(err)?;
        let rendered: BTreeSet<String> = trees.iter().map(|t| t.render()).collect();
        ensure(oracle.len() == CATALAN[n - 1], || {
            format!("oracle count {} at n = {n}", oracle.len())
        })?;
        ensure(
            trees.len() == oracle.len() && rendered.len() == trees.len(),
            || {
                format!(
                    "n = {n}: {} trees, {} distinct",
                    trees.len(),
                    rendered.len()
                )
            },
        )?;
    }
    random_words_agree(&TableGyro::cyclic(7).map_err(err)?, 500, 3)?;
    random_words_agree(&TableGyro::klein(), 500, 4)?;
    random_words_agree(&Integers::new(), 500, 5)?;
    Ok("Catalan counts n = 1..10; 1500 random words agree exactly".into())
}

fn tables() -> Outcome {
    let fixtures = [
        TableGyro::cyclic(5).map_err(err)?,
        TableGyro::klein(),
        TableGyro::load(fixture("z4.json")).map_err(err)?,
        TableGyro::load(fixture("klein4.json")).map_err(err)?,
    ];
    for t in &fixtures {
        let v = validate_table(t);
        ensure(v.passed(), || format!("order {} fixture fails", t.order()))?;
        ensure(v.checks.iter().all(|c| c.residual == 0.0), || {
            "nonzero residual on a valid table".into()
        })?;
    }
    let mut rng = stream_rng(6, 0);
    let mut detected = 0;
    let trials = 100;
    for _ in 0..trials {
        let t = &fixtures[rng.random_range(0..fixtures.len())];
        let n = t.order();
        let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
        let old = t.op(i, j);
        let value = (old + rng.random_range(1..n)) % n;
        let mutant = t.with_add_entry(i, j, value).map_err(err)?;
        if !validate_table(&mutant).passed() {
            detected += 1;
        }
    }
    ensure(detected == trials, || {
        format!("{detected}/{trials} mutations detected")
    })?;
    Ok(format!(
        "4 fixtures exact; {detected}/{trials} mutants detected"
    ))
}

fn covering() -> Outcome {
    let g = MobiusDisk::new();
    let u = Ball::at_identity(&g, 0.5).map_err(err)?;
    let cloud = SampleCloud::random(&g, 10_000, 7).map_err(err)?;
    let w = precompact_witness(&g, &u, &cloud, &Candidates::FromCloud).map_err(err)?;
    ensure(w.covered_fraction == 1.0 && w.complete(), || {
        format!("covered fraction {}", w.covered_fraction)
    })?;
    ensure(!w.f.is_empty() && w.f.len() < cloud.len(), || {
        format!("|F| = {}", w.f.len())
    })?;

    let e = EinsteinBall::new(1.0).map_err(err)?;
    let mut rng = stream_rng(8, 0);
    let trials = 1000;
    let mut violations = 0;
    for t in 0..trials {
        let radius = rng.random_range(0.05..0.9);
        let count = rng.random_range(1..60);
        let seed = rng.random();
        let ok = if t % 2 == 0 {
            let cloud = SampleCloud::random(&g, 150, seed).map_err(err)?;
            let ball = Ball::at_identity(&g, radius).map_err(err)?;
            let a = greedy_separated_family(&g, &ball, count, &cloud).map_err(err)?;
            u_disjoint_check(&g, &a, &ball).map_err(err)?.disjoint
        } else {
            let cloud = SampleCloud::random(&e, 150, seed).map_err(err)?;
            let ball = Ball::at_identity(&e, radius).map_err(err)?;
            let a = greedy_separated_family(&e, &ball, count, &cloud).map_err(err)?;
            u_disjoint_check(&e, &a, &ball).map_err(err)?.disjoint
        };
        if !ok {
            violations += 1;
        }
    }
    ensure(violations == 0, || {
        format!("{violations} of {trials} families not disjoint")
    })?;
    Ok(format!(
        "|F| = {} covers 10^4 points; {trials} greedy families disjoint",
        w.f.len()
    ))
}

/// `V ⊕ V ⊂ W ⊂ ... ⊂ U` chain built from the sum bound
/// `size(p ⊕ q) ≤ (s + t) / (1 + s t)`, then checked by sampling.
fn radius_chain_family<G: Gyrogroup>(g: &G, v: f64, seed: u64) -> Result<usize, String> {
    let sum = |r: f64| 2.0 * r / (1.0 + r * r) * 1.01;
    let w = sum(v);
    let u = sum(w);
    let (bv, bw, bu) = (
        Ball::at_identity(g, v).map_err(err)?,
        Ball::at_identity(g, w).map_err(err)?,
        Ball::at_identity(g, u).map_err(err)?,
    );
    let chain = ball_arithmetic_check(g, &bv, &bw, &bu, 2000, 0.0, seed).map_err(err)?;
    ensure(chain.passed, || {
        format!("chain ({v}, {w}, {u}) excess {}", chain.worst_excess)
    })?;
    let cloud = SampleCloud::random(g, 400, seed).map_err(err)?;
    let a = greedy_separated_family(g, &bu, 40, &cloud).map_err(err)?;
    let probes = SampleCloud::random(g, 1000, seed + 1).map_err(err)?;
    let report = discrete_family_check(g, &a, &bv, &probes, 64, seed).map_err(err)?;
    ensure(report.max_count <= 1, || {
        format!("a probe meets {} translates", report.max_count)
    })?;
    Ok(a.len())
}

fn discrete_family() -> Outcome {
    let g = MobiusDisk::new();
    let e = EinsteinBall::new(1.0).map_err(err)?;
    let mut families = 0;
    for (i, v) in [0.05, 0.1, 0.15, 0.2].into_iter().enumerate() {
        families += radius_chain_family(&g, v, 10 + i as u64)?;
        families += radius_chain_family(&e, v, 20 + i as u64)?;
    }
    Ok(format!(
        "8 verified chains, {families} family members, max count ≤ 1 over 10^3 probes each"
    ))
}

/// Subgroup generated by `s` under `⊕` and `⊖`, by breadth-first search.
fn table_closure(t: &TableGyro, s: &[usize]) -> BTreeSet<usize> {
    let n = t.order();
    let neg = |a: usize| (0..n).find(|&b| t.op(a, b) == 0).expect("inverse");
    let mut set: BTreeSet<usize> = [0].into_iter().collect();
    let mut frontier: Vec<usize> = s.iter().flat_map(|&a| [a, neg(a)]).collect();
    while let Some(x) = frontier.pop() {
        if set.insert(x) {
            for y in set.clone() {
                frontier.extend([t.op(x, y), t.op(y, x), neg(x)]);
            }
        }
    }
    set
}

fn check_finite(t: &TableGyro, r: &SuitableSetResult<usize>) -> Result<(), String> {
    ensure(!r.points.contains(&0), || format!("{}: 0 ∈ S", r.method))?;
    ensure(table_closure(t, &r.points).len() == t.order(), || {
        format!("{}: ⟨S⟩ ≠ G on order {}", r.method, t.order())
    })?;
    let verdict = verify_suitable(t, &r.points, &ConstructionConfig::default()).map_err(err)?;
    ensure(
        verdict.passed && verdict.density.fraction == 1.0 && r.verified,
        || format!("{}: verification failed on order {}", r.method, t.order()),
    )
}

fn finite_pipeline() -> Outcome {
    let mut fixtures = Vec::new();
    for name in ["z4.json", "klein4.json", "trivial.json", "gyro8.json"] {
        fixtures.push(TableGyro::load(fixture(name)).map_err(err)?);
    }
    fixtures.push(TableGyro::cyclic(6).map_err(err)?);
    for t in &fixtures {
        check_finite(t, &suitable_finite(t).map_err(err)?)?;
        let order: Vec<usize> = (0..t.order()).collect();
        check_finite(t, &suitable_countable_trace(t, &order).map_err(err)?)?;
    }
    let z4 = TableGyro::load(fixture("z4.json")).map_err(err)?;
    let ext = extend_via_open_subgyro(&z4, &[0, 2], &[2]).map_err(err)?;
    check_finite(&z4, &ext)?;
    ensure(ext.points.len() == 2, || {
        format!("extension S = {:?}", ext.points)
    })?;
    Ok(format!(
        "{} fixtures through both pipelines; Z4 extension S = {:?}",
        fixtures.len(),
        ext.points
    ))
}

fn disk_pipeline() -> Outcome {
    let g = MobiusDisk::new();
    let gens = [
        MobiusPoint::from_parts(0.5, 0.0).map_err(err)?,
        MobiusPoint::from_parts(0.0, 0.5).map_err(err)?,
    ];
    let cfg = ConstructionConfig::default();
    ensure(
        cfg.radius_schedule.len() == 7
            && cfg.word_cap == 8
            && cfg.cloud_size == 1000
            && cfg.density_delta == 0.05,
        || "default configuration drifted".into(),
    )?;
    let start = Instant::now();
    let r = suitable_precompact_disk(&g, &gens, &cfg).map_err(err)?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    for step in &r.trace {
        for c in &step.checks {
            ensure(c.passed, || format!("step {}: {} failed", step.k, c.name))?;
            if c.name.starts_with("cover") {
                ensure(c.detail["fraction"] == 1.0, || {
                    format!("step {} cover {}", step.k, c.detail["fraction"])
                })?;
            }
        }
    }
    for pair in r.trace.windows(2) {
        let outer = pair[0].radius.ok_or("step without radius")?;
        ensure(pair[1].added.iter().all(|e| e.modulus() < outer), || {
            format!("step {} adds a point outside U_{}", pair[1].k, pair[0].k)
        })?;
    }
    ensure(r.density_report.fraction >= 0.95 && r.verified, || {
        format!("density {}", r.density_report.fraction)
    })?;
    let first = serde_json::to_string_pretty(&r).map_err(err)?;
    let again = suitable_precompact_disk(&g, &gens, &cfg).map_err(err)?;
    let second = serde_json::to_string_pretty(&again).map_err(err)?;
    ensure(first == second, || "two runs differ".into())?;
    Ok(format!(
        "|S| = {}, density {:.3}, {:.2}s, JSON identical",
        r.points.len(),
        r.density_report.fraction,
        elapsed.as_secs_f64()
    ))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn integers_path() -> Outcome {
    let g = Integers::new();
    let budget = 100;
    let r = suitable_nonprecompact(&g, 0.5, budget, &ConstructionConfig::default()).map_err(err)?;
    let a: Vec<i64> = r.trace.iter().filter_map(|s| s.target).collect();
    ensure(a.len() == budget, || format!("|A| = {}", a.len()))?;
    let distinct: BTreeSet<i64> = a.iter().copied().collect();
    ensure(distinct.len() == a.len(), || "A repeats a point".into())?;
    let ball = Ball::at_identity(&g, 0.5).map_err(err)?;
    ensure(
        u_disjoint_check(&g, &a, &ball).map_err(err)?.disjoint,
        || "A is not U-disjoint".into(),
    )?;
    // ⟨S⟩ = gcd(S)·ℤ
    let d = r.points.iter().fold(0, |acc, &x| gcd(acc, x));
    ensure(d == 1, || format!("gcd(S) = {d}"))?;
    let last = r.trace.last().ok_or("empty trace")?;
    ensure(last.checks.iter().all(|c| c.passed) && r.verified, || {
        "construction checks failed".into()
    })?;
    ensure(!r.points.contains(&0), || "0 ∈ S".into())?;
    Ok(format!(
        "|A| = {}, |S| = {}, gcd 1",
        a.len(),
        r.points.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("axiom suite", axioms),
        ("gyration modulus", gyration_modulus),
        ("non-associativity", nonassociativity),
        ("bracketings", combinatorics),
        ("table exactness", tables),
        ("covering", covering),
        ("discrete family", discrete_family),
        ("finite pipeline", finite_pipeline),
        ("disk pipeline", disk_pipeline),
        ("integers path", integers_path),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
