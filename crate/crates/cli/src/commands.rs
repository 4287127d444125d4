use std::fs;

use heightdyn::classify::{
    common_factor_test, dominance_test, morphism_test, verify_witness, ClassificationVerdict,
    Status as Verdict, Witness,
};
use heightdyn::dynamics::{
    backward_mu_sequence, canonical_height, estimate_mu, forward_orbit, kawaguchi_sweep,
    relative_change, AffineAutomorphism, CanonicalHeight, Direction, KawaguchiStats, MuConfig,
    MuEstimate, Sampler, Termination, DEFAULT_CANONICAL_KMAX, DEFAULT_CANONICAL_TOL,
    DEFAULT_MAX_BITS, DEFAULT_SAMPLES_PER_TIER, DEFAULT_TIERS,
};
use heightdyn::k3::{
    k3_mu_experiment, random_surface_through_point, wehler_iterate, SurfacePoint,
    WehlerSurface, ALPHA, DEFAULT_K3_KMAX,
};
use heightdyn::{Error, RationalMap};
use serde_json::{json, Value};

use crate::args::{Command, Common, DirectionArg, SamplerArg};
use crate::input::{self, Usage, UsageError};
use crate::report::{Inputs, Report, Status, Table};
use crate::verify;

/// Trials per probabilistic classification test.
pub const CLASSIFY_TRIALS: usize = 16;

pub struct Outcome {
    pub report: Report,
    pub table: Option<Table>,
}

pub fn run(common: &Common, command: &Command) -> Usage<Outcome> {
    let seed = common.seed;
    let mut inputs = Inputs::default();
    let (name, results, status, table) = match command {
        Command::Analyze(m) => {
            let loaded = input::load_map(common, m)?;
            inputs.set("map", &loaded.map);
            let (results, status) = analyze(&loaded.map, seed);
            ("analyze", results, status, None)
        }
        Command::Orbit { map, point } => {
            let loaded = input::load_map(common, map)?;
            let p = input::point_for(&loaded.map, point)?;
            let kmax = common.kmax.unwrap_or(10);
            let max_bits = common.max_bits.unwrap_or(DEFAULT_MAX_BITS);
            inputs.set("map", &loaded.map);
            inputs.set("point", &p);
            inputs.set("kmax", kmax);
            inputs.set("maxBits", max_bits);
            let (results, status, table) = orbit(&loaded.map, &p, kmax, max_bits);
            ("orbit", results, status, Some(table))
        }
        Command::Mu {
            map,
            sampler,
            epsilon,
            expect,
        } => {
            let loaded = input::load_map(common, map)?;
            if !(*epsilon > 0.0 && *epsilon < 1.0) {
                return Err(UsageError("--epsilon must lie in (0, 1)".into()));
            }
            let sampler = sampler.unwrap_or(match loaded.builtin {
                Some(b) if b.is_inversion() => SamplerArg::Both,
                _ => SamplerArg::Uniform,
            });
            let tiers = common.tiers.clone().unwrap_or_else(|| DEFAULT_TIERS.to_vec());
            let samples = common.samples.unwrap_or(DEFAULT_SAMPLES_PER_TIER);
            let tol = common.tol.unwrap_or(0.05);
            let expectation = match (expect, loaded.builtin) {
                (Some(v), _) => Some((*v, true)),
                (None, Some(b)) => Some(b.expected_mu()),
                (None, None) => None,
            };
            inputs.set("map", &loaded.map);
            inputs.set("exclude", format!("{:?}", loaded.exclusion.polys().iter().map(|p| p.to_string()).collect::<Vec<_>>()));
            inputs.set("sampler", format!("{sampler:?}"));
            inputs.set("epsilon", epsilon);
            inputs.set("tiers", format!("{tiers:?}"));
            inputs.set("samples", samples);
            inputs.set("tol", tol);
            inputs.set("expect", format!("{expectation:?}"));
            let cfg = MuConfig {
                tiers,
                samples_per_tier: samples,
                seed,
                sampler: Sampler::Uniform,
                ..MuConfig::default()
            };
            let (results, status, table) =
                mu(&loaded.map, &loaded.exclusion, cfg, sampler, *epsilon, expectation, tol);
            ("mu", results, status, Some(table))
        }
        Command::Canheight {
            aut,
            point,
            direction,
        } => {
            let a = input::load_automorphism(common, aut)?;
            let p = input::point_for(a.fwd(), point)?;
            let kmax = common.kmax.unwrap_or(DEFAULT_CANONICAL_KMAX);
            let tol = common.tol.unwrap_or(DEFAULT_CANONICAL_TOL);
            let max_bits = common.max_bits.unwrap_or(DEFAULT_MAX_BITS);
            if kmax < 2 {
                return Err(UsageError("--kmax must be at least 2".into()));
            }
            let dir = match direction {
                DirectionArg::Plus => Direction::Plus,
                DirectionArg::Minus => Direction::Minus,
            };
            automorphism_inputs(&mut inputs, &a);
            inputs.set("point", &p);
            inputs.set("direction", format!("{dir:?}"));
            inputs.set("kmax", kmax);
            inputs.set("tol", tol);
            inputs.set("maxBits", max_bits);
            let (results, status) = canheight(&a, &p, dir, kmax, tol, max_bits);
            ("canheight", results, status, None)
        }
        Command::Kawaguchi { aut } => {
            let a = input::load_automorphism(common, aut)?;
            let boxes = common.tiers.clone().unwrap_or_else(|| vec![1_000, 10_000]);
            let samples = common.samples.unwrap_or(1000);
            let tol = common.tol.unwrap_or(0.10);
            automorphism_inputs(&mut inputs, &a);
            inputs.set("boxes", format!("{boxes:?}"));
            inputs.set("samples", samples);
            inputs.set("tol", tol);
            let (results, status, table) = kawaguchi(&a, &boxes, samples, seed, tol)?;
            ("kawaguchi", results, status, Some(table))
        }
        Command::BackwardMu { aut, point } => {
            let a = input::load_automorphism(common, aut)?;
            let p = input::point_for(a.fwd(), point)?;
            let kmax = common.kmax.unwrap_or(12);
            let tol = common.tol.unwrap_or(0.01);
            automorphism_inputs(&mut inputs, &a);
            inputs.set("point", &p);
            inputs.set("kmax", kmax);
            inputs.set("tol", tol);
            let (results, status, table) = backward_mu(&a, &p, kmax, tol);
            ("backward-mu", results, status, Some(table))
        }
        Command::WehlerMu {
            surface,
            power,
            a,
            b,
        } => {
            let (v, p) = input::load_surface(surface)?;
            let default = 1.0 / (ALPHA - 1.0);
            let (a, b) = (a.unwrap_or(default), b.unwrap_or(default));
            if *power == 0 {
                return Err(UsageError("--power must be at least 1".into()));
            }
            if !(a > 0.0 && b > 0.0) {
                return Err(UsageError("--a and --b must be positive".into()));
            }
            let kmax = common.kmax.unwrap_or(DEFAULT_K3_KMAX);
            let tol = common.tol.unwrap_or(if *power == 1 { 0.05 } else { 0.10 });
            let max_bits = common.max_bits.unwrap_or(DEFAULT_MAX_BITS);
            inputs.set("surface", v.to_text(Some(&p)));
            inputs.set("power", power);
            inputs.set("a", a);
            inputs.set("b", b);
            inputs.set("kmax", kmax);
            inputs.set("tol", tol);
            inputs.set("maxBits", max_bits);
            let (results, status, table) = wehler_mu(&v, &p, *power, kmax, a, b, tol, max_bits);
            ("wehler-mu", results, status, Some(table))
        }
        Command::WehlerFind {
            base,
            coeff_bound,
            out,
        } => {
            let (x, y) = input::parse_base_point(base)?;
            if *coeff_bound == 0 {
                return Err(UsageError("--coeff-bound must be at least 1".into()));
            }
            inputs.set("base", format!("{x}; {y}"));
            inputs.set("coeffBound", coeff_bound);
            let (results, status) = match random_surface_through_point((&x, &y), *coeff_bound, seed) {
                Ok((v, p)) => {
                    let text = v.to_text(Some(&p));
                    if let Some(path) = out {
                        fs::write(path, &text).map_err(|e| {
                            UsageError(format!("cannot write {}: {e}", path.display()))
                        })?;
                    }
                    (json!({ "surface": text, "point": surface_point_json(&p) }), Status::Pass)
                }
                Err(e) => (error_json(&e), Status::Fail),
            };
            ("wehler-find", results, status, None)
        }
        Command::Verify => {
            inputs.set("suite", "acceptance");
            let (results, status, table) = verify::run_suite(seed);
            ("verify", results, status, Some(table))
        }
    };
    Ok(Outcome {
        report: Report::new(name, &inputs, seed, results, status),
        table,
    })
}

fn automorphism_inputs(inputs: &mut Inputs, a: &AffineAutomorphism) {
    inputs.set("forward", a.fwd());
    inputs.set("inverse", a.inv());
    inputs.set("dims", format!("{:?}", a.declared_dims()));
}

pub fn error_json(e: &Error) -> Value {
    json!({ "error": e.to_string() })
}

pub fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::JacobianModP { point, prime } => {
            json!({ "kind": "JacobianModP", "point": point, "prime": prime })
        }
        Witness::JacobianInteger { point } => json!({
            "kind": "JacobianInteger",
            "point": point.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        }),
        Witness::JacobianIdenticallyZero => json!({ "kind": "JacobianIdenticallyZero" }),
        Witness::CoprimeLine {
            base,
            direction,
            prime,
        } => json!({
            "kind": "CoprimeLine", "base": base, "direction": direction, "prime": prime,
        }),
        Witness::MacaulayModP { prime } => json!({ "kind": "MacaulayModP", "prime": prime }),
    }
}

/// Verdict with its witness; certified witnesses are re-checked here and
/// the outcome is reported alongside.
pub fn verdict_json(phi: &RationalMap, v: &ClassificationVerdict) -> (Value, bool) {
    let verified = verify_witness(phi, v);
    let mut obj = json!({ "status": v.status.label() });
    if let Verdict::ProbablyYes { confidence } | Verdict::ProbablyNo { confidence } = v.status {
        obj["confidence"] = json!(confidence);
    }
    if let Some(w) = &v.witness {
        obj["witness"] = witness_json(w);
    }
    if v.status.is_certified() {
        obj["witnessVerified"] = json!(verified);
    }
    (obj, verified)
}

pub fn analyze(phi: &RationalMap, seed: u64) -> (Value, Status) {
    let mut all_verified = true;
    let mut verdict = |v: ClassificationVerdict| {
        let (obj, ok) = verdict_json(phi, &v);
        all_verified &= ok;
        obj
    };
    let dominant = verdict(dominance_test(phi, CLASSIFY_TRIALS, seed));
    let common_factor = verdict(common_factor_test(phi, CLASSIFY_TRIALS, seed));
    let morphism = match morphism_test(phi, CLASSIFY_TRIALS, seed) {
        Ok(v) => verdict(v),
        Err(e) => error_json(&e),
    };
    let h = phi.height();
    let results = json!({
        "n": phi.n(),
        "degree": phi.degree(),
        "monomialCount": phi.monomial_count().to_string(),
        "height": h.h,
        "heightMax": h.hmax.to_string(),
        "map": phi.to_string(),
        "dominant": dominant,
        "commonFactor": common_factor,
        "morphism": morphism,
    });
    (results, Status::from_bool(all_verified))
}

fn orbit(phi: &RationalMap, p: &heightdyn::ProjPoint, kmax: usize, max_bits: u64) -> (Value, Status, Table) {
    let mut table = Table::new(vec!["k", "h", "point"]);
    match forward_orbit(phi, p, kmax, max_bits) {
        Ok(rec) => {
            let steps: Vec<Value> = rec
                .steps
                .iter()
                .map(|s| {
                    table.push(vec![s.k.to_string(), s.h.to_string(), s.point.to_string()]);
                    json!({ "k": s.k, "h": s.h, "point": s.point.to_string() })
                })
                .collect();
            let status = match rec.termination {
                Termination::HeightOverflow => Status::Inconclusive,
                _ => Status::Pass,
            };
            (
                json!({ "steps": steps, "termination": rec.termination.label() }),
                status,
                table,
            )
        }
        Err(e) => (error_json(&e), Status::Fail, table),
    }
}

fn mu_json(est: &MuEstimate, table: &mut Table, sampler: &str) -> Value {
    let tiers: Vec<Value> = est
        .tiers
        .iter()
        .map(|t| {
            table.push(vec![
                sampler.to_string(),
                t.bound.to_string(),
                t.samples.to_string(),
                t.min_ratio.to_string(),
                t.mean_ratio.to_string(),
                t.min_pair.0.to_string(),
                t.min_pair.1.to_string(),
            ]);
            json!({
                "bound": t.bound,
                "samples": t.samples,
                "minRatio": t.min_ratio,
                "meanRatio": t.mean_ratio,
                "minPair": [t.min_pair.0, t.min_pair.1],
            })
        })
        .collect();
    json!({
        "tiers": tiers,
        "liminfEstimate": est.liminf_estimate,
        "fittedC1": est.fitted_c1,
        "fittedC2": est.fitted_c2,
    })
}

#[allow(clippy::too_many_arguments)]
fn mu(
    phi: &RationalMap,
    exclusion: &heightdyn::dynamics::ExclusionSet,
    cfg: MuConfig,
    sampler: SamplerArg,
    epsilon: f64,
    expectation: Option<(f64, bool)>,
    tol: f64,
) -> (Value, Status, Table) {
    let mut table = Table::new(vec![
        "sampler", "bound", "samples", "min_ratio", "mean_ratio", "h_p", "h_phi_p",
    ]);
    let mut runs = Vec::new();
    if matches!(sampler, SamplerArg::Uniform | SamplerArg::Both) {
        runs.push(("uniform", Sampler::Uniform));
    }
    if matches!(sampler, SamplerArg::Pullback | SamplerArg::Both) {
        runs.push(("pullback", Sampler::InvolutionPullback { epsilon }));
    }
    let mut results = json!({});
    let mut combined = f64::INFINITY;
    let mut fitted_c1 = f64::INFINITY;
    for (label, s) in runs {
        let cfg = MuConfig {
            sampler: s,
            ..cfg.clone()
        };
        match estimate_mu(phi, exclusion, &cfg) {
            Ok(est) => {
                combined = combined.min(est.liminf_estimate);
                fitted_c1 = fitted_c1.min(est.fitted_c1);
                results[label] = mu_json(&est, &mut table, label);
            }
            Err(e) => {
                results[label] = error_json(&e);
                return (results, Status::Fail, table);
            }
        }
    }
    results["liminfEstimate"] = json!(combined);
    let status = match expectation {
        Some((target, true)) => {
            results["expected"] = json!(target);
            Status::from_bool((combined - target).abs() <= tol)
        }
        Some((lower, false)) => {
            results["expectedLowerBound"] = json!(lower);
            Status::from_bool(combined >= lower - tol)
        }
        None if fitted_c1 > 0.0 => Status::Pass,
        None => Status::Inconclusive,
    };
    (results, status, table)
}

fn canonical_json(c: &CanonicalHeight) -> Value {
    json!({ "value": c.value, "k": c.k, "converged": c.converged, "overflow": c.overflow })
}

fn canheight(
    a: &AffineAutomorphism,
    p: &heightdyn::ProjPoint,
    dir: Direction,
    kmax: usize,
    tol: f64,
    max_bits: u64,
) -> (Value, Status) {
    let run = || -> Result<(Value, Status), Error> {
        let here = canonical_height(a, p, dir, kmax, tol, max_bits)?;
        let image = a.step(p, dir, 1)?;
        let there = canonical_height(a, &image, dir, kmax, tol, max_bits)?;
        let d = a.degree(dir) as f64;
        let scaling_error = (there.value - d * here.value).abs();
        let status = if !(here.converged && there.converged) {
            Status::Inconclusive
        } else {
            Status::from_bool(scaling_error < 10.0 * tol)
        };
        Ok((
            json!({
                "direction": format!("{dir:?}"),
                "degree": d,
                "canonicalHeight": canonical_json(&here),
                "atImage": canonical_json(&there),
                "image": image.to_string(),
                "scalingError": scaling_error,
            }),
            status,
        ))
    };
    run().unwrap_or_else(|e| (error_json(&e), Status::Fail))
}

pub fn kawaguchi_json(sweep: &[KawaguchiStats]) -> Value {
    let boxes: Vec<Value> = sweep
        .iter()
        .map(|s| {
            json!({
                "bound": s.bound,
                "samples": s.samples,
                "minSlack": s.min_slack,
                "argmin": s.argmin.to_string(),
                "fittedC": s.fitted_c,
                "minSlackPlusC": s.min_slack + s.fitted_c,
            })
        })
        .collect();
    let changes: Vec<f64> = sweep
        .windows(2)
        .map(|w| relative_change(w[0].fitted_c, w[1].fitted_c))
        .collect();
    json!({ "boxes": boxes, "relativeChangeOfC": changes })
}

fn kawaguchi(
    a: &AffineAutomorphism,
    boxes: &[u64],
    samples: usize,
    seed: u64,
    tol: f64,
) -> Usage<(Value, Status, Table)> {
    let mut table = Table::new(vec!["bound", "samples", "min_slack", "fitted_c", "argmin"]);
    let sweep = match kawaguchi_sweep(a, boxes, samples, seed, heightdyn::Exec::Parallel) {
        Ok(s) => s,
        Err(Error::InvalidInput(msg)) => return Err(UsageError(msg)),
        Err(e) => return Ok((error_json(&e), Status::Fail, table)),
    };
    for s in &sweep {
        table.push(vec![
            s.bound.to_string(),
            s.samples.to_string(),
            s.min_slack.to_string(),
            s.fitted_c.to_string(),
            s.argmin.to_string(),
        ]);
    }
    let results = kawaguchi_json(&sweep);
    let stable = sweep
        .windows(2)
        .all(|w| relative_change(w[0].fitted_c, w[1].fitted_c) < tol);
    let bounded = sweep.iter().all(|s| s.min_slack + s.fitted_c >= 0.0);
    Ok((results, Status::from_bool(stable && bounded), table))
}

fn backward_mu(
    a: &AffineAutomorphism,
    p: &heightdyn::ProjPoint,
    kmax: usize,
    tol: f64,
) -> (Value, Status, Table) {
    let mut table = Table::new(vec!["k", "ratio"]);
    let target = 1.0 / a.d2() as f64;
    match backward_mu_sequence(a, p, kmax) {
        Ok(rows) => {
            for (k, r) in &rows {
                table.push(vec![k.to_string(), r.to_string()]);
            }
            let last = rows.last().map(|r| r.1);
            let pass = last.is_some_and(|r| (r - target).abs() <= tol);
            (
                json!({
                    "ratios": rows.iter().map(|(k, r)| json!([k, r])).collect::<Vec<_>>(),
                    "target": target,
                    "finalRatio": last,
                }),
                Status::from_bool(pass),
                table,
            )
        }
        Err(e) => (error_json(&e), Status::Fail, table),
    }
}

pub fn surface_point_json(p: &SurfacePoint) -> Value {
    json!({ "x": p.x.to_string(), "y": p.y.to_string() })
}

/// Exact checks along the backward orbit used by the experiment: every
/// point lies on `V` and both involutions square to the identity there.
pub fn wehler_exact_checks(v: &WehlerSurface, p: &SurfacePoint, kmax: usize, max_bits: u64) -> Result<bool, Error> {
    let orbit = wehler_iterate(v, p, -(kmax as i64), max_bits)?;
    for step in &orbit.steps {
        let s = &step.point;
        if !v.contains(&s.x, &s.y) {
            return Ok(false);
        }
        for idx in [1, 2] {
            let once = v.involution(s, idx)?;
            if !v.contains(&once.x, &once.y) || v.involution(&once, idx)? != *s {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn wehler_mu(
    v: &WehlerSurface,
    p: &SurfacePoint,
    power: usize,
    kmax: usize,
    a: f64,
    b: f64,
    tol: f64,
    max_bits: u64,
) -> (Value, Status, Table) {
    let mut table = Table::new(vec!["k", "ratio"]);
    let target = ALPHA.powi(-2 * power as i32);
    let mut run = || -> Result<(Value, Status), Error> {
        let rows = k3_mu_experiment(v, p, power, kmax, a, b, max_bits)?;
        for (k, r) in &rows {
            table.push(vec![k.to_string(), r.to_string()]);
        }
        let exact = wehler_exact_checks(v, p, kmax, max_bits)?;
        let last = rows.last().map(|r| r.1);
        let rel = last.map(|r| (r - target).abs() / target);
        let pass = exact && rel.is_some_and(|e| e <= tol);
        Ok((
            json!({
                "ratios": rows.iter().map(|(k, r)| json!([k, r])).collect::<Vec<_>>(),
                "target": target,
                "finalRatio": last,
                "relativeError": rel,
                "exactChecks": exact,
                "point": surface_point_json(p),
            }),
            Status::from_bool(pass),
        ))
    };
    let (results, status) = run().unwrap_or_else(|e| (error_json(&e), Status::Fail));
    (results, status, table)
}
