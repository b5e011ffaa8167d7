//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use kakeya::besicovitch::{b0_excess, AllConfigs};
use kakeya::gf::supported_orders;
use kakeya::report;
use kakeya::search::{min_excess_search, verify_conjectures, SearchOptions};
use kakeya::stats::{
    chebyshev_bound, exact_moments_by_enumeration, expected_cardinality, monte_carlo_with_workers,
    ratio_string, ratio_to_f64, sample_config, variance_cardinality,
};
use kakeya::{
    b0_config, conditional_check, incidence_report, normalize, triple_point_exceptions, FieldTable,
    LineConfig, Point,
};

const SEED: u64 = 0x5eed_2024;
const RANDOM_CONFIGS: u64 = 100_000;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent < limit, || format!("took {spent:.2?}, limit {limit:?}"))
}

/// Union size counted point by point, independent of multiplicities.
fn direct_cardinality(config: &LineConfig<'_>) -> u64 {
    let field = config.field();
    let lines: Vec<_> = config.lines().collect();
    let mut n = 0;
    for x in field.elements() {
        for y in field.elements() {
            let p = Point::new(x, y);
            if lines.iter().any(|l| kakeya::geom::contains(field, l, &p)) {
                n += 1;
            }
        }
    }
    n
}

/// Every configuration at q = 3, then random ones at q = 5, 7, 9.
fn for_each_odd_config(mut f: impl FnMut(&LineConfig<'_>) -> Result<(), String>) -> Result<u64, String> {
    let f3 = FieldTable::prime(3).unwrap();
    let mut n = 0;
    for c in AllConfigs::new(&f3) {
        f(&c)?;
        n += 1;
    }
    for q in [5, 7, 9] {
        let field = FieldTable::with_order(q).unwrap();
        for i in 0..RANDOM_CONFIGS {
            f(&sample_config(&field, SEED ^ q as u64, i))?;
            n += 1;
        }
    }
    Ok(n)
}

fn incidence_identity() -> Verdict {
    let start = Instant::now();
    let check = |c: &LineConfig<'_>| -> Result<(), String> {
        let q = c.field().q() as u64;
        let r = incidence_report(c).map_err(|e| e.to_string())?;
        let direct = direct_cardinality(c);
        ensure(direct == q * (q + 1) / 2 + r.excess, || {
            format!("config {c}: direct {direct}, excess {}", r.excess)
        })
    };
    let mut n = 0;
    for q in [2, 3] {
        let field = FieldTable::with_order(q).unwrap();
        for c in AllConfigs::new(&field) {
            check(&c)?;
            n += 1;
        }
    }
    for q in [4, 5, 7, 8, 9] {
        let field = FieldTable::with_order(q).unwrap();
        for i in 0..RANDOM_CONFIGS {
            check(&sample_config(&field, SEED ^ q as u64, i))?;
            n += 1;
        }
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!("{n} configurations"))
}

fn b0_golden() -> Verdict {
    let start = Instant::now();
    let mut n = 0;
    for (p, k) in supported_orders() {
        let field = FieldTable::new(p, k).map_err(|e| e.to_string())?;
        let q = field.q() as u64;
        let expected = if q % 2 == 1 { (q - 1) / 2 } else { 0 };
        let r = incidence_report(&b0_config(&field)).map_err(|e| e.to_string())?;
        ensure(r.excess == expected, || format!("GF({q}): excess {}", r.excess))?;
        ensure(r.cardinality == q * (q + 1) / 2 + expected, || {
            format!("GF({q}): cardinality {}", r.cardinality)
        })?;
        n += 1;
    }
    within(Duration::from_secs(5), start)?;
    Ok(format!("{n} fields up to q = 256"))
}

fn triple_point_lemma() -> Verdict {
    let start = Instant::now();
    let n = for_each_odd_config(|c| {
        let ex = triple_point_exceptions(c);
        ensure(ex.len() <= 1, || format!("config {c}: {} exception lines", ex.len()))
    })?;
    within(Duration::from_secs(30), start)?;
    Ok(format!("{n} configurations, no violations"))
}

fn excess_lower_bound() -> Verdict {
    let n = for_each_odd_config(|c| {
        let q = c.field().q() as u64;
        let e = incidence_report(c).map_err(|e| e.to_string())?.excess;
        ensure(e >= q.div_ceil(3), || format!("config {c}: excess {e}"))
    })?;
    for q in [3, 5, 7, 9] {
        let field = FieldTable::with_order(q).unwrap();
        let out = min_excess_search(&SearchOptions::new(&field).workers(4)).map_err(|e| e.to_string())?;
        let m = out.min_excess.unwrap();
        ensure(m >= (q as u64).div_ceil(3), || format!("q = {q}: minimum {m}"))?;
    }
    Ok(format!("{n} configurations and the minima for q = 3, 5, 7, 9"))
}

fn minimum_excess() -> Verdict {
    let mut found = Vec::new();
    for (q, expected, limit) in [
        (2, 0, 60),
        (3, 1, 60),
        (4, 0, 60),
        (5, 2, 60),
        (7, 3, 60),
        (9, 4, 1800),
    ] {
        let field = FieldTable::with_order(q).unwrap();
        let start = Instant::now();
        let out = min_excess_search(&SearchOptions::new(&field).workers(4)).map_err(|e| e.to_string())?;
        within(Duration::from_secs(limit), start)?;
        ensure(out.exhausted, || format!("q = {q} not exhausted"))?;
        ensure(out.min_excess == Some(expected), || {
            format!("q = {q}: minimum {:?}", out.min_excess)
        })?;
        let verdict = verify_conjectures(&out).map_err(|e| e.to_string())?;
        ensure(verdict.conjecture1_holds && verdict.conjecture2_holds, || {
            format!("q = {q}: conjecture falsified")
        })?;
        found.push(format!("{q}:{expected}"));
    }
    for q in [11, 13] {
        let field = FieldTable::prime(q).unwrap();
        let out = min_excess_search(&SearchOptions::new(&field).workers(4).node_budget(Some(200_000)))
            .map_err(|e| e.to_string())?;
        let text = report::search(&out, None).to_text();
        ensure(!out.exhausted && text.contains("NON-EXHAUSTIVE"), || {
            format!("q = {q}: budgeted run not labelled")
        })?;
        ensure(verify_conjectures(&out).is_err(), || {
            format!("q = {q}: conjectures judged on a partial search")
        })?;
    }
    Ok(format!("minima {}; q = 11, 13 budgeted and labelled", found.join(" ")))
}

fn oracle_equivalence() -> Verdict {
    for q in [2, 3] {
        let field = FieldTable::with_order(q).unwrap();
        let mut best = u64::MAX;
        let mut minimizers = BTreeSet::new();
        for c in AllConfigs::new(&field) {
            let e = incidence_report(&c).map_err(|e| e.to_string())?.excess;
            if e < best {
                best = e;
                minimizers.clear();
            }
            if e == best {
                minimizers.insert(normalize(&c).indices());
            }
        }
        let out = min_excess_search(&SearchOptions::new(&field)).map_err(|e| e.to_string())?;
        let found: BTreeSet<_> = out.witnesses.iter().map(|w| w.indices()).collect();
        ensure(out.min_excess == Some(best) && found == minimizers, || {
            format!("q = {q}: search {:?} vs enumeration {best}", out.min_excess)
        })?;
    }
    Ok("q = 2, 3 match".into())
}

fn exact_moments() -> Verdict {
    let start = Instant::now();
    let mut shown = Vec::new();
    for q in [2, 3, 5] {
        let field = FieldTable::prime(q).unwrap();
        let m = exact_moments_by_enumeration(&field).map_err(|e| e.to_string())?;
        let (mean, var) = (expected_cardinality(q as u64), variance_cardinality(q as u64));
        ensure(m.mean == mean && m.variance == var, || {
            format!("q = {q}: enumerated {} / {}", ratio_string(&m.mean), ratio_string(&m.variance))
        })?;
        shown.push(format!("q={q} {} {}", ratio_string(&mean), ratio_string(&var)));
    }
    within(Duration::from_secs(60), start)?;
    Ok(shown.join(", "))
}

fn asymptotics() -> Verdict {
    let start = Instant::now();
    let q = 10_000u64;
    let q2 = (q * q) as f64;
    let e = std::f64::consts::E;
    let mean = ratio_to_f64(&expected_cardinality(q)) / q2;
    let var = ratio_to_f64(&variance_cardinality(q)) / q2;
    ensure((mean - (1.0 - 1.0 / e)).abs() < 1e-3, || format!("mean/q² = {mean}"))?;
    ensure((var - (1.0 / e - 2.5 / (e * e))).abs() < 1e-3, || format!("var/q² = {var}"))?;
    within(Duration::from_secs(1), start)?;
    Ok(format!("mean/q² = {mean:.6}, var/q² = {var:.6}"))
}

fn concentration() -> Verdict {
    let start = Instant::now();
    let field = FieldTable::prime(101).unwrap();
    let r = monte_carlo_with_workers(&field, 10_000, SEED, 4).map_err(|e| e.to_string())?;
    let bound = chebyshev_bound(101);
    ensure(r.band_violation_fraction < 0.01, || {
        format!("violation fraction {}", r.band_violation_fraction)
    })?;
    ensure((bound - 0.0014).abs() < 5e-5, || format!("Chebyshev bound {bound}"))?;
    within(Duration::from_secs(60), start)?;
    Ok(format!(
        "violation fraction {}, Chebyshev bound {bound:.7}",
        r.band_violation_fraction
    ))
}

fn conditional_suite() -> Verdict {
    let mut covered = 0u64;
    let mut equality = 0u64;
    for_each_odd_config(|c| {
        let check = conditional_check(c);
        if check.covering_slope.is_none() {
            return Ok(());
        }
        covered += 1;
        let floor = b0_excess(check.q);
        ensure(check.excess >= floor as u64, || format!("config {c}: excess {}", check.excess))?;
        ensure(check.is_equality_case() == check.equality_shape(), || {
            format!("config {c}: equality case mismatch")
        })?;
        equality += check.is_equality_case() as u64;
        Ok(())
    })?;
    for q in [3, 5, 7, 9] {
        let field = FieldTable::with_order(q).unwrap();
        let check = conditional_check(&b0_config(&field));
        ensure(check.covering_slope.is_some() && check.is_equality_case(), || {
            format!("B0 over GF({q}) is not an equality case")
        })?;
    }
    Ok(format!("{covered} covered configurations, {equality} equality cases; B0 tight for q = 3, 5, 7, 9"))
}

fn determinism() -> Verdict {
    let field = FieldTable::prime(7).unwrap();
    let search = |w| {
        min_excess_search(&SearchOptions::new(&field).workers(w))
            .map(|o| report::search(&o, None).to_json())
            .map_err(|e| e.to_string())
    };
    let runs = [search(1)?, search(4)?, search(1)?, search(4)?];
    ensure(runs.iter().all(|r| *r == runs[0]), || "search output differs".into())?;

    let f31 = FieldTable::prime(31).unwrap();
    let sample = |w| {
        monte_carlo_with_workers(&f31, 20_000, SEED, w)
            .map(|s| report::sample(&f31, &s, chebyshev_bound(31)).to_json())
            .map_err(|e| e.to_string())
    };
    let runs = [sample(1)?, sample(4)?, sample(1)?, sample(4)?];
    ensure(runs.iter().all(|r| *r == runs[0]), || "sampling output differs".into())?;
    Ok("search and sampling identical for workers 1, 4 over two runs".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("incidence formula identity", incidence_identity),
        ("B0 golden values", b0_golden),
        ("triple point lemma", triple_point_lemma),
        ("excess at least ceil(q/3)", excess_lower_bound),
        ("minimum excess", minimum_excess),
        ("search oracle equivalence", oracle_equivalence),
        ("exact moments", exact_moments),
        ("moment asymptotics", asymptotics),
        ("concentration", concentration),
        ("covering-line bound", conditional_suite),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let spent = start.elapsed();
        match verdict {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({spent:.2?})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({spent:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
