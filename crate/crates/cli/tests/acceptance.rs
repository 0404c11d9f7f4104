//! One line per acceptance criterion. Criteria 1–10 come from the report
//! of `gdw reproduce-paper --seed 0`; criterion 11 runs it a second time
//! and compares the bytes. Runtime limits are read from the per-criterion
//! timings the command prints on stderr.

use std::collections::HashMap;
use std::process::Command;

use serde_json::Value;

/// Wall-clock limits in seconds.
const RUNTIME_LIMITS: &[(u64, f64)] = &[(1, 600.0), (5, 60.0)];

fn reproduce() -> (Vec<u8>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gdw"))
        .args(["reproduce-paper", "--seed", "0"])
        .env_remove("GDW_BUDGET")
        .output()
        .expect("gdw runs");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    (out.stdout, String::from_utf8_lossy(&out.stderr).into_owned())
}

fn timings(stderr: &str) -> HashMap<u64, f64> {
    stderr
        .lines()
        .filter_map(|l| {
            let rest = l.strip_prefix("criterion")?;
            let mut it = rest.split_whitespace();
            let id = it.next()?.parse().ok()?;
            let secs = rest.rsplit_once('(')?.1.trim_end_matches(" s)").parse().ok()?;
            Some((id, secs))
        })
        .collect()
}

#[test]
fn acceptance() {
    let (first, stderr) = reproduce();
    let report: Value = serde_json::from_slice(&first).expect("report is JSON");
    let times = timings(&stderr);
    let mut failed = Vec::new();
    for c in report["criteria"].as_array().expect("criteria array") {
        let id = c["id"].as_u64().unwrap();
        let mut passed = c["passed"].as_bool().unwrap();
        let secs = times.get(&id).copied().unwrap_or(f64::NAN);
        let mut note = format!("{:.1} s", secs);
        if let Some(&(_, limit)) = RUNTIME_LIMITS.iter().find(|(i, _)| *i == id) {
            let in_time = secs <= limit;
            passed &= in_time;
            note = format!("{note}, limit {limit} s{}", if in_time { "" } else { " EXCEEDED" });
        }
        println!(
            "criterion {id:>2}: {} — {} ({note}) {}",
            if passed { "PASS" } else { "FAIL" },
            c["title"].as_str().unwrap(),
            c["metrics"]
        );
        if !passed {
            failed.push(id);
        }
    }
    let (second, _) = reproduce();
    let identical = first == second;
    println!(
        "criterion 11: {} — reproduce-paper --seed 0 twice gives byte-identical reports ({} bytes)",
        if identical { "PASS" } else { "FAIL" },
        first.len()
    );
    if !identical {
        failed.push(11);
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
