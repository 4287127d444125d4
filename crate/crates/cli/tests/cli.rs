use std::fs;

use heightdyn_cli::execute;
use serde_json::Value;

fn run(args: &[&str]) -> (Value, i32) {
    let mut argv = vec!["heightdyn"];
    argv.extend_from_slice(args);
    let out = execute(argv);
    assert!(out.stderr.is_empty(), "stderr: {}", out.stderr);
    (serde_json::from_str(&out.stdout).expect("report is JSON"), out.exit_code)
}

fn tmp(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("heightdyn-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

#[test]
fn analyze_intro_map() {
    let (r, code) = run(&["analyze", "--builtin", "intro-xyz"]);
    assert_eq!(code, 0);
    let res = &r["results"];
    assert_eq!(res["degree"], 2);
    assert_eq!(res["monomialCount"], "6");
    assert_eq!(res["height"], 0.0);
    assert_eq!(res["commonFactor"]["status"], "CertifiedYes");
    assert_eq!(res["dominant"]["status"], "CertifiedYes");
    assert_eq!(res["dominant"]["witnessVerified"], true);
    assert_eq!(res["morphism"]["status"], "ProbablyNo");
    assert_eq!(r["status"], "Pass");
}

#[test]
fn mu_on_power_map_file() {
    let map = tmp("power.map", "# squares\nX0^2; X1^2;\nX2^2\n");
    let csv = map.with_extension("csv");
    let (r, code) = run(&["mu", map.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    let est = r["results"]["liminfEstimate"].as_f64().unwrap();
    assert!((est - 2.0).abs() < 0.05);
    let table = fs::read_to_string(csv).unwrap();
    assert!(table.starts_with("sampler,bound,samples"));
    assert_eq!(table.lines().count(), 6);
}

#[test]
fn usage_and_input_errors_exit_with_2() {
    let bad = tmp("bad.map", "X0^2; X1^^2");
    for args in [
        vec!["heightdyn", "analyze", bad.to_str().unwrap()],
        vec!["heightdyn", "analyze"],
        vec!["heightdyn", "analyze", "--builtin", "nope"],
        vec!["heightdyn", "orbit", "--builtin", "intro-xyz", "--point", "1,2"],
        vec!["heightdyn", "frobnicate"],
        vec!["heightdyn", "canheight", "--builtin", "power-d2", "--point", "1,2,3"],
    ] {
        let out = execute(args.clone());
        assert_eq!(out.exit_code, 2, "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn reports_are_deterministic_and_seeded() {
    let args = ["mu", "--builtin", "inversion-n2", "--tiers", "100,10000", "--samples", "50"];
    let a = execute(std::iter::once("heightdyn").chain(args));
    let b = execute(std::iter::once("heightdyn").chain(args));
    assert_eq!(a, b);
    let mut seeded: Vec<&str> = vec!["heightdyn"];
    seeded.extend(args);
    seeded.extend(["--seed", "9"]);
    let c = execute(seeded);
    assert_ne!(a.stdout, c.stdout);
    let (ra, _) = run(&args);
    let (rc, _) = run(&["mu", "--builtin", "inversion-n2", "--tiers", "100,10000", "--samples", "50", "--seed", "9"]);
    assert_eq!(ra["inputsDigest"], rc["inputsDigest"]);
    assert_eq!(rc["seed"], 9);
}

#[test]
fn orbit_reaches_the_fixed_point() {
    let csv = tmp("orbit.csv", "");
    let (r, code) = run(&[
        "orbit", "--builtin", "intro-xyz", "--point", "0,2,5", "--kmax", "2", "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let steps = r["results"]["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 3);
    assert_eq!(steps[1]["point"], "[0, 1, 0]");
    assert_eq!(steps[1]["h"], 0.0);
    assert_eq!(fs::read_to_string(csv).unwrap().lines().count(), 4);
}

#[test]
fn henon_experiments_pass() {
    let (r, code) = run(&["backward-mu", "--builtin", "henon-c1", "--point", "1,2,3"]);
    assert_eq!(code, 0, "{r}");
    assert!((r["results"]["finalRatio"].as_f64().unwrap() - 0.5).abs() < 0.01);
    let (r, code) = run(&["canheight", "--builtin", "henon-c1", "--point", "1,1,1"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["results"]["canonicalHeight"]["value"], 0.0);
    let (r, code) = run(&["kawaguchi", "--builtin", "henon-c3", "--samples", "200"]);
    assert_eq!(code, 0, "{r}");
}

#[test]
fn automorphism_from_files() {
    let fwd = tmp("henon.map", "X0^2; X0*X2; X2^2 + 2*X0^2 - X0*X1");
    let inv = tmp("henon_inv.map", "X0^2; X1^2 + 2*X0^2 - X0*X2; X0*X1");
    let (r, code) = run(&[
        "backward-mu", fwd.to_str().unwrap(), "--inverse", inv.to_str().unwrap(), "--dims", "0,0",
        "--point", "1,2,3",
    ]);
    assert_eq!(code, 0, "{r}");
    let out = execute([
        "heightdyn", "backward-mu", fwd.to_str().unwrap(), "--inverse", fwd.to_str().unwrap(),
        "--point", "1,2,3",
    ]);
    assert_eq!(out.exit_code, 2);
}

#[test]
fn wehler_find_then_mu() {
    let path = tmp("surface.txt", "");
    let (r, code) = run(&["wehler-find", "--seed", "0", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(r["results"]["surface"].as_str().unwrap().contains("Q[x0x0][y0y0] = 0"));
    let (r, code) = run(&["wehler-mu", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["results"]["exactChecks"], true);
    let (d, _) = run(&["wehler-mu"]);
    assert_eq!(d["results"]["finalRatio"], r["results"]["finalRatio"]);
    let out = execute(["heightdyn", "wehler-mu", "--a", "-1"]);
    assert_eq!(out.exit_code, 2);
}
