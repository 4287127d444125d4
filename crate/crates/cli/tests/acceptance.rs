//! Acceptance suite: one PASS/FAIL line per criterion, each judged against
//! the stated tolerance read back from the criterion's reported details.

use std::process::Command;
use std::time::{Duration, Instant};

use heightdyn_cli::verify::{self, CriterionOutcome};
use serde_json::Value;

fn num(v: &Value, path: &[&str]) -> f64 {
    path.iter()
        .fold(v, |acc, k| &acc[*k])
        .as_f64()
        .unwrap_or_else(|| panic!("missing number at {path:?} in {v}"))
}

fn text<'a>(v: &'a Value, path: &[&str]) -> &'a str {
    path.iter().fold(v, |acc, k| &acc[*k]).as_str().unwrap_or("")
}

fn within(x: f64, lo: f64, hi: f64) -> bool {
    (lo..=hi).contains(&x)
}

/// Tolerance checks restated from the criteria, applied to the details.
fn independent_check(o: &CriterionOutcome) -> bool {
    let d = &o.details;
    match o.id {
        1 => {
            num(d, &["n2", "pullbackMaxRatio"]) <= 1.0 / (0.9 * 2.0)
                && num(d, &["n2", "uniformLiminf"]) >= 0.48
                && within(num(d, &["n2", "combinedEstimate"]), 0.48, 0.52)
                && within(num(d, &["n3", "combinedEstimate"]), 0.313, 0.353)
        }
        2 => within(num(d, &["liminfEstimate"]), 1.95, 2.05) && num(d, &["largestTier"]) >= 1e6,
        3 => {
            num(d, &["samples"]) == 1e4
                && num(d, &["exactFailures"]) == 0.0
                && num(d, &["ratioFailures"]) == 0.0
                && text(d, &["imageOf025"]) == "[0, 1, 0]"
        }
        4 => {
            within(num(d, &["finalBackwardRatio"]), 0.49, 0.51)
                && num(d, &["backwardSteps"]) <= 12.0
                && num(d, &["scalingError"]) < 1e-5
                && d["relationsHold"] == Value::Bool(true)
                && d["ells"] == serde_json::json!([1, 1])
        }
        5 => {
            let boxes = d["boxes"].as_array().expect("boxes");
            let last = boxes.last().expect("two boxes");
            num(last, &["minSlackPlusC"]) >= 0.0
                && num(last, &["bound"]) == 1e4
                && d["relativeChangeOfC"][0].as_f64().is_some_and(|c| c < 0.10)
        }
        6 => {
            let target1 = 7.0 - 4.0 * 3f64.sqrt();
            let target2 = target1 * target1;
            let last = |key: &str| {
                d[key]["ratios"]
                    .as_array()
                    .and_then(|r| r.last())
                    .and_then(|r| r[1].as_f64())
                    .unwrap_or(f64::NAN)
            };
            (last("power1") - target1).abs() <= 0.05 * target1
                && (last("power2") - target2).abs() <= 0.10 * target2
                && d["exactChecks"] == Value::Bool(true)
        }
        7 => {
            let status = |m: &str, t: &str| text(d, &[m, t, "status"]).to_string();
            let verified = |m: &str, t: &str| d[m][t]["witnessVerified"] == Value::Bool(true);
            status("X^2,Y^2,XZ", "dominant") == "CertifiedYes"
                && verified("X^2,Y^2,XZ", "dominant")
                && status("X^2,Y^2,XZ", "morphism") == "ProbablyNo"
                && status("X^2,X^2,Y^2", "dominant") == "CertifiedNo"
                && verified("X^2,X^2,Y^2", "dominant")
                && status("X^2,XY,XZ", "commonFactor") == "ProbablyNo"
                && (1..=3).all(|k| {
                    let key = format!("X^{k},Y^{k},Z^{k}");
                    status(&key, "morphism") == "CertifiedYes" && verified(&key, "morphism")
                })
        }
        8 | 9 => num(d, &["trials"]) == 1e4 && num(d, &["failures"]) == 0.0,
        10 => d["identical"] == Value::Bool(true),
        _ => false,
    }
}

fn run_verify_binary() -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_heightdyn"))
        .args(["verify", "--seed", "0"])
        .output()
        .expect("binary runs");
    assert!(
        out.status.code().is_some_and(|c| c == 0 || c == 1),
        "unexpected exit: {:?}\n{}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn line(pass: bool, id: u32, name: &str, elapsed: Duration) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("{tag} criterion {id:>2}: {name} ({:.2}s)", elapsed.as_secs_f64());
}

#[test]
fn acceptance_suite() {
    let mut failed = Vec::new();
    for (i, criterion) in verify::CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let outcome = criterion(0);
        let elapsed = start.elapsed();
        let mut pass = outcome.pass && independent_check(&outcome);
        let mut name = outcome.name.to_string();
        if outcome.id == 10 {
            let first = run_verify_binary();
            let second = run_verify_binary();
            let identical = first == second && !first.is_empty();
            pass &= identical;
            name = format!("{name}; verify --seed 0 twice byte-identical: {identical}");
        }
        assert_eq!(outcome.id as usize, i + 1);
        line(pass, outcome.id, &name, start.elapsed().max(elapsed));
        if !pass {
            println!("         details: {}", outcome.details);
            failed.push(outcome.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
