//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Suite reports are produced through the same entry
//! point as the command-line tool, then regenerated once more to check
//! that the bytes repeat.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use coarsebox::caps::Caps;
use coarsebox::cli::{report_json, run, RunConfig, RunReport, Task};
use coarsebox::covers::{check_translative, max_cover_radius, MetricCoverMap};
use coarsebox::groups::QuotientTower;
use coarsebox::suites::SuiteReport;
use num_rational::Rational64;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

/// Brute force on the integers themselves: the largest `R` such that for
/// every center, the `2R + 1` integers around it keep their pairwise
/// distances modulo `n` and land exactly on the radius-`R` ball of the
/// residue cycle.
fn residue_radius_oracle(n: i64) -> i64 {
    let circ = |a: i64, b: i64| {
        let d = (a - b).rem_euclid(n);
        d.min(n - d)
    };
    let holds = |r: i64| {
        (0..n).all(|x| {
            let ball: Vec<i64> = (x - r..=x + r).collect();
            let isometric = ball.iter().all(|&a| ball.iter().all(|&b| circ(a, b) == (a - b).abs()));
            let image: BTreeSet<i64> = ball.iter().map(|a| a.rem_euclid(n)).collect();
            let target: BTreeSet<i64> = (0..n).filter(|&y| circ(x, y) <= r).collect();
            isometric && image == target
        })
    };
    (0..=n).filter(|&r| holds(r)).max().unwrap_or(0)
}

fn suite<'a>(report: &'a RunReport, name: &str) -> &'a SuiteReport {
    report.suites.iter().find(|s| s.suite == name).expect("suite present")
}

fn verdict(s: &SuiteReport) -> String {
    s.checks
        .iter()
        .map(|c| format!("{}: {}/{}", c.check, c.cases - c.failures, c.cases))
        .collect::<Vec<_>>()
        .join("; ")
}

fn secs(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn main() {
    let base = RunConfig::default();
    let caps = Caps::default();
    let mut lines: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut runs: Vec<(Task, RunConfig, String)> = Vec::new();
    let mut execute = |task: Task, cfg: RunConfig| {
        let (report, elapsed) = timed(|| run(task, &cfg).expect("run completes"));
        runs.push((task, cfg, report_json(&report)));
        (report, elapsed)
    };

    // 1
    let (mismatches, elapsed) = timed(|| {
        (4..=40u64)
            .filter(|&n| {
                let cover = MetricCoverMap::integers_mod(n, caps.max_quotient_order).expect("residue cover");
                max_cover_radius(&cover) != Rational64::from_integer(residue_radius_oracle(n as i64))
            })
            .collect::<Vec<_>>()
    });
    lines.push((
        1,
        "cover radius of Z -> Z/n agrees with brute force for n = 4..40",
        outcome(
            mismatches.is_empty() && elapsed < Duration::from_secs(5),
            format!("mismatches {mismatches:?}, {}", secs(elapsed)),
        ),
    ));

    // 2
    let mut cfg = base.clone();
    cfg.covers.group = "sl2".into();
    cfg.covers.stages = vec![3, 5, 7, 11];
    cfg.covers.depth = Some(6);
    let (report, elapsed) = execute(Task::Covers, cfg);
    let profile = &suite(&report, "covers").data["profile"];
    let radii: Vec<Rational64> = serde_json::from_value(profile["radii"]["radii"].clone()).expect("radii");
    let bounds: Vec<u64> = profile["stages"]
        .as_array()
        .expect("stages")
        .iter()
        .map(|s| s["kernel_girth_bound"].as_u64().expect("bound"))
        .collect();
    let radii_up = radii.windows(2).all(|w| w[0] <= w[1]);
    let bounds_up = bounds.windows(2).all(|w| w[0] <= w[1]);
    let grows = radii.last() > radii.first();
    lines.push((
        2,
        "SL2 tower p = 3,5,7,11: radii and kernel-girth bounds nondecreasing, radius grows",
        outcome(
            radii_up && bounds_up && grows && elapsed < Duration::from_secs(60),
            format!(
                "radii {:?}, bounds {bounds:?}, {}",
                radii.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                secs(elapsed)
            ),
        ),
    ));

    // 3
    let (report, _) = execute(Task::Rips, base.clone());
    let rips = suite(&report, "rips");
    let transfer = rips.check("skeleton map is a cover at floor(R/d) - 1").expect("check");
    lines.push((
        3,
        "Rips 1-skeleton covers at floor(R/d) - 1 for n = 12, 24 and d = 1, 2",
        outcome(transfer.passed && transfer.cases > 0, verdict(rips)),
    ));

    // 4
    let mut translative_cases = 0;
    let mut translative_failures = Vec::new();
    let mut matrix: Vec<(String, MetricCoverMap)> = (4..=40u64)
        .map(|n| {
            (
                format!("Z/{n}"),
                MetricCoverMap::integers_mod(n, caps.max_quotient_order).expect("residue cover"),
            )
        })
        .collect();
    matrix.extend((2..=6).map(|k| (format!("C{} -> C4", 4 * k), MetricCoverMap::cycle_cover(4, k))));
    let sl2 = QuotientTower::sanov(&[3, 5, 7, 11]).expect("tower");
    for (i, p) in [3, 5, 7, 11].into_iter().enumerate() {
        let cover = MetricCoverMap::tower_stage(&sl2, i, 6, caps.max_quotient_order).expect("stage");
        matrix.push((format!("SL2(F_{p})"), cover));
    }
    for (name, cover) in matrix {
        let cover = cover.certify();
        let radius = cover.certified_radius().expect("certified");
        translative_cases += 1;
        if check_translative(&cover, radius).is_err() {
            translative_failures.push(name);
        }
    }
    lines.push((
        4,
        "deck groups of certified covers are translative at the certified radius",
        outcome(
            translative_failures.is_empty(),
            format!("{translative_cases} covers, failures {translative_failures:?}"),
        ),
    ));

    // 5
    let (report, _) = execute(Task::Modules, base.clone());
    let modules = suite(&report, "modules");
    let sized = modules.checks[0].cases >= 1000 && modules.checks[1..].iter().all(|c| c.cases >= 100);
    lines.push((
        5,
        "controlled modules: propagation, factorization triangles, shift functoriality",
        outcome(modules.passed && sized, verdict(modules)),
    ));

    // 6 to 10
    let (report, _) = execute(Task::Functors, base.clone());
    let group_ring = suite(&report, "group-ring");
    lines.push((
        6,
        "group ring round trips and convolution over Z/5 for Z/2, Z/3, Z/4, S3, ranks <= 3",
        outcome(group_ring.passed, verdict(group_ring)),
    ));
    let descent = suite(&report, "descent");
    lines.push((
        7,
        "descent along C_4k -> C_4, k = 2..6: functoriality, faithfulness, cancelling example",
        outcome(descent.passed, verdict(descent)),
    ));
    let vset = suite(&report, "vset");
    lines.push((
        8,
        "V-set bijections for |G| <= 24 with deterministic and 5 random sections",
        outcome(vset.passed, verdict(vset)),
    ));
    let induction = suite(&report, "induction");
    lines.push((
        9,
        "restriction and induction for Z/4 and S3 over all subgroups, 50 modules each",
        outcome(induction.passed, verdict(induction)),
    ));
    let nets = suite(&report, "nets");
    lines.push((
        10,
        "nets on paths, cycles and the p = 3 Margulis graph with delta = 1, 2, 3",
        outcome(nets.passed, verdict(nets)),
    ));

    // 11
    let (report, elapsed) = execute(Task::Expanders, base.clone());
    let expanders = suite(&report, "expanders");
    lines.push((
        11,
        "Margulis family p = 3..13: girth oracle, monotone girth, bounded ratio, exact spectra",
        outcome(
            expanders.passed && elapsed < Duration::from_secs(120),
            format!("{}; {}", verdict(expanders), secs(elapsed)),
        ),
    ));

    // 12
    let differing: Vec<String> = runs
        .iter()
        .filter(|(task, cfg, first)| report_json(&run(*task, cfg).expect("rerun completes")) != *first)
        .map(|(task, _, _)| format!("{task:?}"))
        .collect();
    lines.push((
        12,
        "same seed gives byte-identical JSON reports",
        outcome(
            differing.is_empty(),
            format!("{} reports compared, differing {differing:?}", runs.len()),
        ),
    ));

    let mut failed = 0;
    for (n, name, o) in &lines {
        if !o.passed {
            failed += 1;
        }
        println!("{} {n:>2} {name} ({})", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
