//! The acceptance suite behind `heightdyn verify`. Each criterion is a
//! plain function so the test harness can run and report them one by one.

use heightdyn::builtins::{self, Builtin};
use heightdyn::classify::{
    common_factor_test, dominance_test, morphism_test, Status as Verdict, Witness,
};
use heightdyn::dynamics::{
    backward_mu_sequence, canonical_height, ell_relations_hold, estimate_mu, kawaguchi_sweep,
    relative_change, sample_ratios, Direction, ExclusionSet, MuConfig, RatioSample, Sampler,
    DEFAULT_MAX_BITS,
};
use heightdyn::k3::{
    default_surface, k3_canonical_height, k3_mu_experiment, noncommutativity_witness, ALPHA,
};
use heightdyn::map::binomial;
use heightdyn::par::{map_indices, rng_for};
use heightdyn::parse::parse_map;
use heightdyn::poly::{HomogPoly, Monomial};
use heightdyn::rational::{root_coeff_bound_holds, root_coeff_gap};
use heightdyn::{BigRat, Exec, Image, Integer, Natural, ProjPoint, RationalMap};
use malachite_base::num::arithmetic::traits::Pow;
use rand::Rng;
use serde_json::{json, Value};

use crate::commands::{kawaguchi_json, verdict_json, wehler_exact_checks, CLASSIFY_TRIALS};
use crate::report::{Status, Table};

/// Epsilon for the adversarial inversion sampler.
pub const PULLBACK_EPSILON: f64 = 0.1;

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub details: Value,
}

impl CriterionOutcome {
    fn new(id: u32, name: &'static str, pass: bool, details: Value) -> Self {
        CriterionOutcome {
            id,
            name,
            pass,
            details,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "id": self.id, "name": self.name, "pass": self.pass, "details": self.details })
    }
}

pub type Criterion = fn(u64) -> CriterionOutcome;

/// Criteria in order; the determinism criterion that compares whole
/// reports byte for byte lives in the test harness, which runs the binary.
pub const CRITERIA: [Criterion; 10] = [
    inversion_map,
    morphism_mu,
    intro_example,
    regular_automorphism,
    kawaguchi_inequality,
    k3_surface,
    classification_suite,
    triangle_inequality,
    root_coefficient_bound,
    schedule_independence,
];

pub fn run_suite(seed: u64) -> (Value, Status, Table) {
    let mut table = Table::new(vec!["id", "name", "pass"]);
    let outcomes: Vec<CriterionOutcome> = CRITERIA.iter().map(|c| c(seed)).collect();
    for o in &outcomes {
        table.push(vec![o.id.to_string(), o.name.to_string(), o.pass.to_string()]);
    }
    let pass = outcomes.iter().all(|o| o.pass);
    let results = json!({
        "criteria": outcomes.iter().map(CriterionOutcome::to_json).collect::<Vec<_>>(),
        "passed": outcomes.iter().filter(|o| o.pass).count(),
        "total": outcomes.len(),
    });
    (results, Status::from_bool(pass), table)
}

fn err(e: heightdyn::Error) -> Value {
    json!({ "error": e.to_string() })
}

fn ratio_range(samples: &[RatioSample]) -> (f64, f64) {
    samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
        (lo.min(s.ratio), hi.max(s.ratio))
    })
}

struct InversionRun {
    pullback_min: f64,
    pullback_max: f64,
    uniform_liminf: f64,
}

fn inversion_run(n: usize, seed: u64, exec: Exec) -> heightdyn::Result<InversionRun> {
    let b = if n == 2 {
        Builtin::InversionN2
    } else {
        Builtin::InversionN3
    };
    let phi = b.map();
    let exclusion = b.exclusion();
    let pullback = sample_ratios(
        &phi,
        &exclusion,
        1_000_000,
        500,
        Sampler::InvolutionPullback {
            epsilon: PULLBACK_EPSILON,
        },
        seed,
        0,
        exec,
    )?;
    let (pullback_min, pullback_max) = ratio_range(&pullback);
    let uniform = estimate_mu(
        &phi,
        &exclusion,
        &MuConfig {
            seed,
            exec,
            ..MuConfig::default()
        },
    )?;
    Ok(InversionRun {
        pullback_min,
        pullback_max,
        uniform_liminf: uniform.liminf_estimate,
    })
}

/// Coordinate inversion has `mu = 1/n`: the pullback sampler stays below
/// `1/((1 - eps) n)`, uniform sampling stays above `1/n`, and the combined
/// estimate lands near `1/n`.
pub fn inversion_map(seed: u64) -> CriterionOutcome {
    let name = "inversion map mu = 1/n";
    let mut details = json!({});
    let mut pass = true;
    for (n, window) in [(2usize, (0.48, 0.52)), (3, (0.313, 0.353))] {
        let run = match inversion_run(n, seed, Exec::Parallel) {
            Ok(r) => r,
            Err(e) => return CriterionOutcome::new(1, name, false, err(e)),
        };
        let cap = 1.0 / ((1.0 - PULLBACK_EPSILON) * n as f64);
        let combined = run.uniform_liminf.min(run.pullback_min);
        let pullback_ok = run.pullback_max <= cap;
        let uniform_ok = n != 2 || run.uniform_liminf >= 0.48;
        let combined_ok = combined >= window.0 && combined <= window.1;
        pass &= pullback_ok && uniform_ok && combined_ok;
        details[format!("n{n}")] = json!({
            "pullbackMaxRatio": run.pullback_max,
            "pullbackMinRatio": run.pullback_min,
            "pullbackCap": cap,
            "uniformLiminf": run.uniform_liminf,
            "combinedEstimate": combined,
            "window": [window.0, window.1],
        });
    }
    CriterionOutcome::new(1, name, pass, details)
}

/// A morphism of degree 2 has `mu = 2`.
pub fn morphism_mu(seed: u64) -> CriterionOutcome {
    let name = "morphism mu = deg";
    let phi = builtins::power(2, 2);
    match estimate_mu(
        &phi,
        &ExclusionSet::everything(),
        &MuConfig {
            seed,
            ..MuConfig::default()
        },
    ) {
        Ok(est) => {
            let v = est.liminf_estimate;
            CriterionOutcome::new(
                2,
                name,
                (1.95..=2.05).contains(&v),
                json!({ "liminfEstimate": v, "fittedC1": est.fitted_c1, "largestTier": est.tiers.last().map(|t| t.bound) }),
            )
        }
        Err(e) => CriterionOutcome::new(2, name, false, err(e)),
    }
}

/// `[X^2, Y^2, XZ]` never lowers the height on `X != 0`, and sends
/// `[0, 2, 5]` to `[0, 1, 0]`.
pub fn intro_example(seed: u64) -> CriterionOutcome {
    let name = "intro map h(phi P) >= h(P) on X != 0";
    let b = Builtin::IntroXyz;
    let phi = b.map();
    let samples = match sample_ratios(
        &phi,
        &b.exclusion(),
        1_000_000,
        10_000,
        Sampler::Uniform,
        seed,
        0,
        Exec::Parallel,
    ) {
        Ok(s) => s,
        Err(e) => return CriterionOutcome::new(3, name, false, err(e)),
    };
    let exact_failures = samples
        .iter()
        .filter(|s| s.image_height.hmax < s.height.hmax)
        .count();
    let ratio_failures = samples.iter().filter(|s| s.ratio < 1.0 - 1e-9).count();
    let (min_ratio, _) = ratio_range(&samples);
    let start = ProjPoint::from_i64s(&[0, 2, 5]).expect("valid point");
    let image = phi.evaluate(&start).ok().and_then(Image::point);
    let expected = ProjPoint::from_i64s(&[0, 1, 0]).expect("valid point");
    let image_ok = image.as_ref().is_some_and(|q| *q == expected && q.hmax() == 1u32);
    CriterionOutcome::new(
        3,
        name,
        exact_failures == 0 && ratio_failures == 0 && image_ok && samples.len() == 10_000,
        json!({
            "samples": samples.len(),
            "exactFailures": exact_failures,
            "ratioFailures": ratio_failures,
            "minRatio": min_ratio,
            "imageOf025": image.map(|q| q.to_string()),
        }),
    )
}

/// Henon map at `c = 1`: backward ratios tend to `1/d2 = 1/2`, the forward
/// canonical height doubles under `phi`, and the declared dimensions obey
/// the degree relations.
pub fn regular_automorphism(_seed: u64) -> CriterionOutcome {
    let name = "regular affine automorphism mu = 1/2";
    let run = || -> heightdyn::Result<(bool, Value)> {
        let a = builtins::henon(1)?;
        let p = ProjPoint::from_i64s(&[1, 2, 3])?;
        let ratios = backward_mu_sequence(&a, &p, 12)?;
        let last = ratios.last().map(|r| r.1).unwrap_or(f64::NAN);
        let here = canonical_height(&a, &p, Direction::Plus, 20, 1e-6, DEFAULT_MAX_BITS)?;
        let q = a.step(&p, Direction::Plus, 1)?;
        let there = canonical_height(&a, &q, Direction::Plus, 20, 1e-6, DEFAULT_MAX_BITS)?;
        let scaling = (there.value - 2.0 * here.value).abs();
        let (l1, l2) = a.ells().unwrap_or((0, 0));
        let dims = a.declared_dims().unwrap_or((u32::MAX, u32::MAX));
        let relations = l1 + l2 == 2
            && Natural::from(a.d2()).pow(l1 as u64) == Natural::from(a.d1()).pow(l2 as u64)
            && ell_relations_hold(2, a.d1(), a.d2(), dims);
        let pass = (0.49..=0.51).contains(&last) && scaling < 1e-5 && here.value > 0.0 && relations;
        Ok((
            pass,
            json!({
                "finalBackwardRatio": last,
                "backwardSteps": ratios.last().map(|r| r.0),
                "canonicalHeight": here.value,
                "canonicalHeightAtImage": there.value,
                "scalingError": scaling,
                "ells": [l1, l2],
                "relationsHold": relations,
            }),
        ))
    };
    match run() {
        Ok((pass, details)) => CriterionOutcome::new(4, name, pass, details),
        Err(e) => CriterionOutcome::new(4, name, false, err(e)),
    }
}

/// The slack of the Kawaguchi height estimate is bounded below by a fitted
/// constant that does not drift when the sample box grows.
pub fn kawaguchi_inequality(seed: u64) -> CriterionOutcome {
    let name = "Kawaguchi inequality with stable constant";
    let run = || -> heightdyn::Result<(bool, Value)> {
        let a = builtins::henon(1)?;
        let sweep = kawaguchi_sweep(&a, &[1_000, 10_000], 1000, seed, Exec::Parallel)?;
        let last = sweep.last().expect("two boxes");
        let change = relative_change(sweep[0].fitted_c, last.fitted_c);
        let pass = last.min_slack + last.fitted_c >= 0.0 && change < 0.10;
        Ok((pass, kawaguchi_json(&sweep)))
    };
    match run() {
        Ok((pass, details)) => CriterionOutcome::new(5, name, pass, details),
        Err(e) => CriterionOutcome::new(5, name, false, err(e)),
    }
}

/// On the shipped Wehler surface, `phi^n` expands `h_D` by `alpha^(-2n)`
/// along backward orbits, with every point checked exactly.
pub fn k3_surface(_seed: u64) -> CriterionOutcome {
    let name = "K3 surface mu(phi^n) = alpha^(-2n)";
    let run = || -> heightdyn::Result<(bool, Value)> {
        let (v, p) = default_surface();
        let c = 1.0 / (ALPHA - 1.0);
        let mut pass = true;
        let mut details = json!({});
        for (n, tol) in [(1usize, 0.05), (2, 0.10)] {
            let rows = k3_mu_experiment(&v, &p, n, 4, c, c, DEFAULT_MAX_BITS)?;
            let target = ALPHA.powi(-2 * n as i32);
            let last = rows.last().map(|r| r.1).unwrap_or(f64::NAN);
            let rel = (last - target).abs() / target;
            pass &= rel <= tol;
            details[format!("power{n}")] = json!({
                "ratios": rows.iter().map(|(k, r)| json!([k, r])).collect::<Vec<_>>(),
                "target": target,
                "relativeError": rel,
                "tolerance": tol,
            });
        }
        let exact = wehler_exact_checks(&v, &p, 4, DEFAULT_MAX_BITS)?;
        let witness = noncommutativity_witness(&v, &p, 4)?;
        let h0 = k3_canonical_height(&v, &p, Direction::Plus, 4, 1e-6, DEFAULT_MAX_BITS)?;
        let q = v.step(&p, Direction::Plus)?;
        let h1 = k3_canonical_height(&v, &q, Direction::Plus, 4, 1e-6, DEFAULT_MAX_BITS)?;
        let scaling = h1.value / h0.value / (ALPHA * ALPHA) - 1.0;
        pass &= exact && witness.is_some() && scaling.abs() < 0.01;
        details["exactChecks"] = json!(exact);
        details["noncommutingAtStep"] = json!(witness.map(|w| w.0));
        details["canonicalScalingRelativeError"] = json!(scaling);
        Ok((pass, details))
    };
    match run() {
        Ok((pass, details)) => CriterionOutcome::new(6, name, pass, details),
        Err(e) => CriterionOutcome::new(6, name, false, err(e)),
    }
}

/// Dominance, common-factor and morphism verdicts on the reference maps,
/// with every certificate re-verified.
pub fn classification_suite(seed: u64) -> CriterionOutcome {
    let name = "classification verdicts with verified witnesses";
    let map = |s: &str| parse_map(s).expect("valid reference map");
    let mut pass = true;
    let mut details = json!({});

    let phi = map("X0^2; X1^2; X0*X2");
    let dom = dominance_test(&phi, CLASSIFY_TRIALS, seed);
    let morph = morphism_test(&phi, CLASSIFY_TRIALS, seed);
    let (dom_json, dom_ok) = verdict_json(&phi, &dom);
    pass &= dom.status == Verdict::CertifiedYes && dom_ok;
    let morph_json = match &morph {
        Ok(v) => {
            let (j, ok) = verdict_json(&phi, v);
            pass &= matches!(v.status, Verdict::ProbablyNo { .. }) && ok;
            j
        }
        Err(e) => {
            pass = false;
            err(e.clone())
        }
    };
    details["X^2,Y^2,XZ"] = json!({ "dominant": dom_json, "morphism": morph_json });

    let phi = map("X0^2; X0^2; X1^2");
    let dom = dominance_test(&phi, CLASSIFY_TRIALS, seed);
    let (dom_json, dom_ok) = verdict_json(&phi, &dom);
    pass &= dom.status == Verdict::CertifiedNo
        && dom.witness == Some(Witness::JacobianIdenticallyZero)
        && dom_ok;
    details["X^2,X^2,Y^2"] = json!({ "dominant": dom_json });

    let phi = map("X0^2; X0*X1; X0*X2");
    let cf = common_factor_test(&phi, CLASSIFY_TRIALS, seed);
    let (cf_json, cf_ok) = verdict_json(&phi, &cf);
    pass &= matches!(cf.status, Verdict::ProbablyNo { .. }) && cf_ok;
    details["X^2,XY,XZ"] = json!({ "commonFactor": cf_json });

    for d in 1..=3u32 {
        let phi = builtins::power(2, d);
        let entry = match morphism_test(&phi, CLASSIFY_TRIALS, seed) {
            Ok(v) => {
                let (j, ok) = verdict_json(&phi, &v);
                pass &= v.status == Verdict::CertifiedYes && ok;
                j
            }
            Err(e) => {
                pass = false;
                err(e)
            }
        };
        details[format!("X^{d},Y^{d},Z^{d}")] = json!({ "morphism": entry });
    }
    CriterionOutcome::new(7, name, pass, details)
}

fn random_map<R: Rng>(rng: &mut R) -> RationalMap {
    let n = rng.random_range(1..=3usize);
    let d = rng.random_range(1..=3u32);
    let monomials = Monomial::all_of_degree(n + 1, d);
    loop {
        let coords: Option<Vec<HomogPoly>> = (0..=n)
            .map(|_| {
                let mut terms = Vec::new();
                for m in &monomials {
                    if rng.random_bool(0.5) {
                        terms.push((m.clone(), Integer::from(rng.random_range(-1000i64..=1000))));
                    }
                }
                HomogPoly::from_terms(n + 1, terms).filter(|f| !f.is_zero())
            })
            .collect();
        if let Some(map) = coords.and_then(|c| RationalMap::new(c).ok()) {
            return map;
        }
    }
}

/// `Hmax(phi P) <= N Hmax(phi) Hmax(P)^d` for random maps and points,
/// compared exactly.
pub fn triangle_inequality(seed: u64) -> CriterionOutcome {
    let name = "exact triangle inequality";
    const TRIALS: usize = 10_000;
    let failures: usize = map_indices(TRIALS, Exec::Parallel, |i| {
        let mut rng = rng_for(seed, &[8, i as u64]);
        let phi = random_map(&mut rng);
        let p = loop {
            let coords: Vec<i64> = (0..=phi.n())
                .map(|_| rng.random_range(-1_000_000i64..=1_000_000))
                .collect();
            if let Ok(p) = ProjPoint::from_i64s(&coords) {
                break p;
            }
        };
        let bound = binomial((phi.n() as u64) + phi.degree() as u64, phi.n() as u64)
            * phi.height().hmax
            * p.hmax().pow(phi.degree() as u64);
        let raw = phi.evaluate_raw(&p).expect("dimensions agree");
        let raw_ok = raw.iter().all(|v| v.unsigned_abs_ref().clone() <= bound);
        let normalized_ok = match phi.evaluate(&p).expect("dimensions agree") {
            Image::Point(q) => q.hmax() <= bound,
            Image::Indeterminate => true,
        };
        usize::from(!(raw_ok && normalized_ok))
    })
    .into_iter()
    .sum();
    CriterionOutcome::new(
        8,
        name,
        failures == 0,
        json!({ "trials": TRIALS, "failures": failures }),
    )
}

/// A root of a monic polynomial has height at most the coefficient height
/// plus `d ln 2`; tested on polynomials with a planted rational root.
pub fn root_coefficient_bound(seed: u64) -> CriterionOutcome {
    let name = "root-coefficient height bound";
    const TRIALS: usize = 10_000;
    let gaps: Vec<Option<f64>> = map_indices(TRIALS, Exec::Parallel, |i| {
        let mut rng = rng_for(seed, &[9, i as u64]);
        let d = rng.random_range(1..=6usize);
        let root = BigRat::from_signeds(
            rng.random_range(-10_000i64..=10_000),
            rng.random_range(1i64..=10_000),
        );
        // (X - root) * (X^(d-1) + c1 X^(d-2) + ... )
        let mut cofactor = vec![BigRat::from(1)];
        cofactor.extend((1..d).map(|_| {
            BigRat::from_signeds(rng.random_range(-10_000i64..=10_000), rng.random_range(1i64..=100))
        }));
        let coeffs: Vec<BigRat> = (1..=d)
            .map(|k| {
                let carry = cofactor.get(k).cloned().unwrap_or_else(|| BigRat::from(0));
                carry - &root * &cofactor[k - 1]
            })
            .collect();
        let exact = root_coeff_bound_holds(&coeffs, &root).ok()?;
        let gap = root_coeff_gap(&coeffs, &root).ok()?;
        (exact && gap >= 0.0).then_some(gap)
    });
    let failures = gaps.iter().filter(|g| g.is_none()).count();
    let min_gap = gaps.iter().flatten().fold(f64::INFINITY, |a, &b| a.min(b));
    CriterionOutcome::new(
        9,
        name,
        failures == 0,
        json!({ "trials": TRIALS, "failures": failures, "minGap": min_gap }),
    )
}

/// Sample loops give identical results whether run sequentially or on the
/// thread pool.
pub fn schedule_independence(seed: u64) -> CriterionOutcome {
    let name = "results independent of scheduling";
    let run = |exec| inversion_run(2, seed, exec);
    match (run(Exec::Sequential), run(Exec::Parallel)) {
        (Ok(a), Ok(b)) => {
            let same = a.pullback_min.to_bits() == b.pullback_min.to_bits()
                && a.pullback_max.to_bits() == b.pullback_max.to_bits()
                && a.uniform_liminf.to_bits() == b.uniform_liminf.to_bits();
            CriterionOutcome::new(10, name, same, json!({ "identical": same }))
        }
        (Err(e), _) | (_, Err(e)) => CriterionOutcome::new(10, name, false, err(e)),
    }
}
