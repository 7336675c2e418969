//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

mod common;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use srgsub::catalog::{build_catalog, catalog};
use srgsub::census::{binomial, brute_census, census_up_to, esu_census, pentagon_profile, CensusOptions, Method};
use srgsub::expr::{Family, Symbol};
use srgsub::formulas::FormulaBook;
use srgsub::identities::{check_all, EquationTable, Group, Status};
use srgsub::instances::{admissible_valencies, bvls243, rook9};
use srgsub::poly::{rational, Monomial, Poly, Var};
use srgsub::verify::{render_report, verify, ReportFormat, VerificationReport, VerifyOptions};
use srgsub::{Graph, SrgParams};

const THREADS: [usize; 3] = [1, 4, 8];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed <= limit, || {
        format!("{what} took {elapsed:.1?}, limit {limit:?}")
    })
}

fn bvls() -> &'static Graph {
    static G: OnceLock<Graph> = OnceLock::new();
    G.get_or_init(|| bvls243().expect("construct bvls243"))
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

fn cycle_classes() -> (usize, usize, usize) {
    let class = |m: usize| catalog(m).unwrap().classify(&Graph::cycle(m).unwrap()).unwrap();
    (class(3), class(4), class(5))
}

/// Criterion 2 report for one thread count.
#[derive(Serialize)]
struct CycleReport {
    rook9_brute: [u64; 3],
    bvls243_esu: [u64; 3],
}

fn cycle_report(threads: usize) -> srgsub::Result<CycleReport> {
    let (c3, c4, c5) = cycle_classes();
    let opts = CensusOptions {
        threads: Some(threads),
        ..CensusOptions::default()
    };
    let r = rook9();
    let b = bvls();
    Ok(CycleReport {
        rook9_brute: [
            brute_census(&r, 3, opts)?[c3],
            brute_census(&r, 4, opts)?[c4],
            brute_census(&r, 5, opts)?[c5],
        ],
        bvls243_esu: [
            esu_census(b, 3, Some(threads))?[c3],
            esu_census(b, 4, Some(threads))?[c4],
            esu_census(b, 5, Some(threads))?[c5],
        ],
    })
}

fn verify_at(g: &Graph, host: &str, threads: usize) -> srgsub::Result<VerificationReport> {
    let opts = VerifyOptions {
        census: CensusOptions {
            threads: Some(threads),
            ..CensusOptions::default()
        },
        method: Method::EsuCompletion,
    };
    verify(g, host, opts)
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).unwrap()
}

/// Serialized reports of criteria 2, 6 and 7, by thread count.
#[derive(Default)]
struct Reports {
    cycles: BTreeMap<usize, String>,
    pentagons: BTreeMap<usize, String>,
    verify: BTreeMap<usize, String>,
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let expected = [(3, 4, None), (4, 11, Some(9)), (5, 34, Some(21)), (6, 156, Some(62))];
    let mut seen = Vec::new();
    for (m, total, feasible) in expected {
        let cat = build_catalog(m).map_err(|e| e.to_string())?;
        ensure(cat.len() == total, || {
            format!("order {m}: {} classes, expected {total}", cat.len())
        })?;
        if let Some(f) = feasible {
            let got = cat.feasible_count();
            ensure(got == f, || format!("order {m}: {got} feasible, expected {f}"))?;
        }
        seen.push(format!("{}/{}", cat.len(), cat.feasible_count()));
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10), "catalog construction")?;
    Ok(format!(
        "total/feasible for orders 3..6: {} in {elapsed:.2?}",
        seen.join(" ")
    ))
}

fn criterion_2(reports: &mut Reports) -> Outcome {
    let book = FormulaBook::builtin();
    let p_rook = book.eval_p(&big(9), &big(4)).map_err(|e| e.to_string())?;
    let p_bvls = book.eval_p(&big(243), &big(22)).map_err(|e| e.to_string())?;
    ensure(p_rook == [big(6), big(9), big(0)], || {
        format!("eval_p(9,4) = {p_rook:?}")
    })?;
    ensure(p_bvls == [big(891), big(13365), big(384912)], || {
        format!("eval_p(243,22) = {p_bvls:?}")
    })?;

    let start = Instant::now();
    let r = cycle_report(4).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let rook: Vec<BigInt> = r.rook9_brute.iter().map(|&x| big(x)).collect();
    let bv: Vec<BigInt> = r.bvls243_esu.iter().map(|&x| big(x)).collect();
    ensure(rook == p_rook, || {
        format!("rook9 brute census {:?} vs eval_p {p_rook:?}", r.rook9_brute)
    })?;
    ensure(bv == p_bvls, || {
        format!("bvls243 esu census {:?} vs eval_p {p_bvls:?}", r.bvls243_esu)
    })?;
    within(elapsed, Duration::from_secs(60), "cycle censuses")?;
    reports.cycles.insert(4, json(&r));
    Ok(format!(
        "rook9 (p3,p4,p5) = {:?}, bvls243 = {:?} in {elapsed:.2?}",
        r.rook9_brute, r.bvls243_esu
    ))
}

fn binomial_poly(n: &Poly, r: u32) -> Poly {
    let mut acc = Poly::one();
    let mut fact = 1i64;
    for i in 0..r {
        acc = &acc * &(n - &Poly::integer(i));
        fact *= i64::from(i + 1);
    }
    acc.scale(&rational(1, fact))
}

fn criterion_3() -> Outcome {
    let book = FormulaBook::builtin();
    let k = Poly::var(Var::K);
    let n = &(&k * &k).scale(&rational(1, 2)) + &Poly::one();
    let mut lines = Vec::new();
    for (family, r) in [(Family::L, 4), (Family::M, 5), (Family::N, 6)] {
        let mut sum = Poly::zero();
        let mut n3_coefficients = Poly::zero();
        for i in family.indices() {
            let p = book.symbolic(Symbol::new(family, i)).map_err(|e| e.to_string())?;
            for (m, c) in p.terms() {
                if m.n3 == 1 {
                    n3_coefficients = &n3_coefficients + &Poly::var(Var::K).pow(m.k).scale(c);
                }
                ensure(m.n3 <= 1, || format!("{}{i} is not affine in n3", family.prefix()))?;
            }
            sum = &sum + &p;
        }
        let residual = &sum - &binomial_poly(&n, r);
        ensure(residual.is_zero(), || {
            format!("sum of {} forms minus C(n,{r}) = {residual}", family.prefix())
        })?;
        ensure(n3_coefficients.is_zero(), || {
            format!("{} n3 coefficients sum to {n3_coefficients}", family.prefix())
        })?;
        ensure(sum.coefficient(Monomial { k: 0, n3: 1 }) == rational(0, 1), || {
            "n3 term survives".into()
        })?;
        lines.push(format!("sum {} = C(n,{r})", family.prefix()));
    }
    Ok(format!(
        "{} identically in k and n3; n3 coefficients sum to 0",
        lines.join(", ")
    ))
}

fn criterion_4(rook: &VerificationReport, elapsed: Duration) -> Outcome {
    ensure(rook.measured_n3 == "0", || {
        format!("measured n3 = {}", rook.measured_n3)
    })?;
    let totals: Vec<&str> = rook.census[3..6].iter().map(|c| c.total.as_str()).collect();
    ensure(totals == ["126", "126", "84"], || {
        format!("order 4/5/6 totals {totals:?}")
    })?;
    let six = &rook.multiset[2];
    ensure(six.order == 6 && six.measured == ["6", "6", "36", "36"], || {
        format!("order-6 nonzero multiset {:?}", six.measured)
    })?;
    ensure(rook.multiset.iter().all(|m| m.passed), || {
        "multiset comparison failed".into()
    })?;
    ensure(rook.discrepancies.is_empty(), || {
        format!("discrepancies: {:?}", rook.discrepancies)
    })?;
    within(elapsed, Duration::from_secs(5), "verify(rook9)")?;
    Ok(format!(
        "n3 = 0, totals 126/126/84, order-6 multiset {{6,6,36,36}}, 0 discrepancies in {elapsed:.2?}"
    ))
}

fn criterion_5(rook: &VerificationReport) -> Outcome {
    let symbolic = check_all(EquationTable::builtin(), FormulaBook::builtin(), None).map_err(|e| e.to_string())?;
    let mut detail = Vec::new();
    for (group, expected, label) in [(Group::FourFive, 9, "l"), (Group::FiveSix, 21, "m")] {
        let rows: Vec<_> = rook.equations.iter().filter(|e| e.group == group).collect();
        ensure(rows.len() == expected, || {
            format!("{} {label}-equations, expected {expected}", rows.len())
        })?;
        let mut printed = 0;
        for row in &rows {
            match row.numeric {
                Some(Status::Holds) => printed += 1,
                Some(Status::HoldsRepaired) => {}
                other => {
                    return Err(format!(
                        "{} on rook9: {other:?}, residual {:?}",
                        row.name, row.printed_residual
                    ))
                }
            }
        }
        // symbolic side: holds, or the residual of the printed reading is reported
        let sym: Vec<_> = symbolic.checks.iter().filter(|c| c.group == group).collect();
        for c in &sym {
            ensure(c.status != Status::Fails || c.printed.residual != "0", || {
                format!("{} fails without a residual", c.name)
            })?;
        }
        let repaired_sym = sym.iter().filter(|c| c.status == Status::HoldsRepaired).count();
        let failed_sym = sym.iter().filter(|c| c.status == Status::Fails).count();
        detail.push(format!(
            "{expected} {label}-equations hold on rook9 ({printed} as printed); symbolically {repaired_sym} need the labeled repair, {failed_sym} fail"
        ));
    }
    Ok(detail.join("; "))
}

fn criterion_6(reports: &mut Reports) -> Outcome {
    let start = Instant::now();
    let p = pentagon_profile(bvls(), Some(4)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let p5 = FormulaBook::builtin()
        .eval_p(&big(243), &big(22))
        .map_err(|e| e.to_string())?[2]
        .clone();
    let expected: BTreeMap<u64, u64> = [(36, 53460)].into();
    ensure(p.histogram == expected, || format!("histogram {:?}", p.histogram))?;
    ensure(p.incidences == 1_924_560, || format!("incidences {}", p.incidences))?;
    ensure(big(p.incidences) == p5 * 5, || "incidences differ from 5 p5".into())?;
    within(elapsed, Duration::from_secs(600), "pentagon profile")?;
    reports.pentagons.insert(4, json(&p));
    Ok(format!(
        "histogram {{36: 53460}}, incidences 1924560 = 5 p5 in {elapsed:.2?}"
    ))
}

fn criterion_7(reports: &mut Reports) -> Outcome {
    let start = Instant::now();
    let report = verify_at(bvls(), "bvls243", 4).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let six = &report.census[5];
    let total: u128 = six.total.parse().map_err(|_| "unparsable total".to_string())?;
    ensure(six.order == 6 && total == binomial(243, 6), || {
        format!("order-6 total {total}")
    })?;
    let cat = catalog(6).unwrap();
    let infeasible: Vec<_> = cat.classes().iter().filter(|c| !c.feasible).collect();
    ensure(infeasible.len() == 94, || {
        format!("{} infeasible classes", infeasible.len())
    })?;
    let nonzero: Vec<_> = infeasible
        .iter()
        .filter(|c| six.counts[c.index] != "0")
        .map(|c| c.index)
        .collect();
    ensure(nonzero.is_empty(), || {
        format!("infeasible classes with nonzero counts: {nonzero:?}")
    })?;
    ensure(!report.measured_n3.is_empty(), || "n3 not reported".into())?;
    let mut failing = 0;
    for row in &report.equations {
        match row.numeric {
            None => return Err(format!("relation {} was not evaluated", row.name)),
            Some(Status::Fails) => {
                failing += 1;
                let listed = report
                    .discrepancies
                    .iter()
                    .any(|d| d.contains(&format!("relation {} ", row.name)));
                ensure(listed, || {
                    format!("failing relation {} has no counterexample entry", row.name)
                })?;
            }
            Some(_) => {}
        }
    }
    within(elapsed, Duration::from_secs(3600), "verify(bvls243)")?;
    let text = render_report(&report, ReportFormat::Json).map_err(|e| e.to_string())?;
    reports.verify.insert(4, text);
    Ok(format!(
        "order-6 total C(243,6) = {total}, 94 infeasible classes at 0, measured n3 = {}, {} relations evaluated, {failing} counterexamples, {} discrepancies in {elapsed:.2?}",
        report.measured_n3,
        report.equations.len(),
        report.discrepancies.len()
    ))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut compared = 0usize;
    for case in 0..50 {
        let n = rng.random_range(6..=15);
        let p = rng.random_range(0.15..0.85);
        let g = common::random_graph(&mut rng, n, p);
        let fast = census_up_to(&g, "random", 6, Method::EsuCompletion, CensusOptions::default())
            .map_err(|e| e.to_string())?;
        for m in 4..=6 {
            let brute = brute_census(&g, m, CensusOptions::default()).map_err(|e| e.to_string())?;
            if let Some(c) = (0..brute.len()).find(|&c| brute[c] != fast[m - 1].counts[c]) {
                return Err(format!(
                    "case {case} (n={n}, p={p:.2}), order {m}, class {c}: completion {} vs brute {}",
                    fast[m - 1].counts[c],
                    brute[c]
                ));
            }
            compared += brute.len();
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(120), "oracle comparison")?;
    Ok(format!(
        "50 graphs, {compared} class counts equal at orders 4,5,6 in {elapsed:.2?}"
    ))
}

fn criterion_9() -> Outcome {
    let srg = |n, k| Some(SrgParams { n, k, lambda: 1, mu: 2 });
    ensure(bvls().is_srg() == srg(243, 22), || {
        format!("bvls243: {:?}", bvls().is_srg())
    })?;
    ensure(rook9().is_srg() == srg(9, 4), || {
        format!("rook9: {:?}", rook9().is_srg())
    })?;
    let v = admissible_valencies(120);
    ensure(v == [4, 14, 22, 112], || format!("admissible_valencies(120) = {v:?}"))?;
    Ok("bvls243 = srg(243,22,1,2), rook9 = srg(9,4,1,2), admissible valencies [4, 14, 22, 112]".into())
}

fn criterion_10(reports: &mut Reports) -> Outcome {
    for t in THREADS {
        if let Entry::Vacant(e) = reports.cycles.entry(t) {
            e.insert(json(&cycle_report(t).map_err(|e| e.to_string())?));
        }
        if let Entry::Vacant(e) = reports.pentagons.entry(t) {
            e.insert(json(&pentagon_profile(bvls(), Some(t)).map_err(|e| e.to_string())?));
        }
        if let Entry::Vacant(e) = reports.verify.entry(t) {
            let r = verify_at(bvls(), "bvls243", t).map_err(|e| e.to_string())?;
            e.insert(render_report(&r, ReportFormat::Json).map_err(|e| e.to_string())?);
        }
    }
    for (name, map) in [
        ("criterion 2", &reports.cycles),
        ("criterion 6", &reports.pentagons),
        ("criterion 7", &reports.verify),
    ] {
        let first = &map[&THREADS[0]];
        for t in THREADS {
            ensure(&map[&t] == first, || {
                format!("{name} report differs between 1 and {t} threads")
            })?;
        }
    }
    Ok(format!(
        "reports of criteria 2, 6, 7 byte-identical for threads {THREADS:?} ({} bytes for the bvls243 verification)",
        reports.verify[&1].len()
    ))
}

fn run(number: usize, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    match outcome {
        Ok(detail) => {
            println!("PASS criterion {number}: {detail}");
            true
        }
        Err(why) => {
            println!("FAIL criterion {number}: {why}");
            false
        }
    }
}

fn main() -> ExitCode {
    let mut reports = Reports::default();
    let mut ok = true;
    ok &= run(1, criterion_1);
    ok &= run(2, || criterion_2(&mut reports));
    ok &= run(3, criterion_3);
    let start = Instant::now();
    let rook = verify_at(&rook9(), "rook9", 4);
    let rook_elapsed = start.elapsed();
    ok &= run(4, || {
        criterion_4(rook.as_ref().map_err(|e| e.to_string())?, rook_elapsed)
    });
    ok &= run(5, || criterion_5(rook.as_ref().map_err(|e| e.to_string())?));
    ok &= run(6, || criterion_6(&mut reports));
    ok &= run(7, || criterion_7(&mut reports));
    ok &= run(8, criterion_8);
    ok &= run(9, criterion_9);
    ok &= run(10, || criterion_10(&mut reports));
    if ok {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: some criteria FAIL");
        ExitCode::FAILURE
    }
}
