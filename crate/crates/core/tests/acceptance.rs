//! One PASS/FAIL line per acceptance criterion, decided by the checks the
//! experiments attach to it.

use std::collections::BTreeMap;
use std::time::Instant;

use grandlab::experiments::{run_suite, Config, ExperimentReport};

const SEED: u64 = 20241;

/// Criteria whose literal statement cannot hold, with the reason. Their
/// line still prints FAIL; the test only requires that every other check
/// of the criterion passes.
const KNOWN_UNATTAINABLE: &[(u8, &str, &str)] = &[(
    6,
    "infinite-in-(m-delta)",
    "moments of H g_m grow like p^((m+1)/m) and L(N_q) admits growth p^(1/q); for q = (m - delta)/(m + 1) the admitted growth is faster, so H g_m is finite there. The infinite flag holds for q = (m + delta)/(m + 1) instead (reported as a separate check).",
)];

#[test]
fn acceptance() {
    let config = Config::full_suite(SEED);
    let t0 = Instant::now();
    let first = run_suite(&config).expect("suite runs");
    let elapsed = t0.elapsed();

    let mut by_criterion: BTreeMap<u8, Vec<(&ExperimentReport, &grandlab::experiments::Check)>> = BTreeMap::new();
    for e in &first.experiments {
        for c in &e.checks {
            if let Some(k) = c.criterion {
                by_criterion.entry(k).or_default().push((e, c));
            }
        }
    }

    let mut unexpected = Vec::new();
    for k in 1..=10u8 {
        let checks = by_criterion.get(&k).map(Vec::as_slice).unwrap_or(&[]);
        let passed = !checks.is_empty() && checks.iter().all(|(_, c)| c.passed);
        println!("criterion {k:>2}: {}", if passed { "PASS" } else { "FAIL" });
        for (e, c) in checks {
            println!("    [{}] {}: {} ({})", if c.passed { "ok" } else { "x" }, e.id, c.name, c.detail);
        }
        if !passed {
            let known = KNOWN_UNATTAINABLE.iter().find(|(n, _, _)| *n == k);
            match known {
                Some((_, prefix, why)) => {
                    println!("    known: {why}");
                    for (e, c) in checks {
                        if !c.passed && !c.name.starts_with(prefix) {
                            unexpected.push(format!("criterion {k}: {}:{}", e.id, c.name));
                        }
                    }
                }
                None => unexpected.push(format!("criterion {k}")),
            }
        }
    }

    let t1 = Instant::now();
    let second = run_suite(&config).expect("suite runs");
    let same = first.to_json().unwrap() == second.to_json().unwrap();
    println!("criterion 11: {}", if same { "PASS" } else { "FAIL" });
    println!("    two full-suite runs with seed {SEED}: byte-identical report = {same}");
    println!("suite wall time: {:.1} s, {:.1} s", elapsed.as_secs_f64(), t1.elapsed().as_secs_f64());
    if !same {
        unexpected.push("criterion 11".into());
    }
    assert!(unexpected.is_empty(), "unexpected failures: {unexpected:?}");
}
