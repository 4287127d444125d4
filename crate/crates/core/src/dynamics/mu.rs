//! Empirical estimation of the height expansion coefficient
//! `mu(phi) = liminf h(phi P) / h(P)` over a Zariski open set `U`.

use malachite_nz::integer::Integer;
use rand::Rng;

use crate::error::{Error, Result};
use crate::map::{Image, RationalMap};
use crate::par::{map_indices, rng_for, Exec};
use crate::poly::HomogPoly;
use crate::rational::{HeightValue, ProjPoint};

pub const DEFAULT_TIERS: [u64; 5] = [100, 1_000, 10_000, 100_000, 1_000_000];
pub const DEFAULT_SAMPLES_PER_TIER: usize = 500;

/// Draws per accepted sample before the region is declared empty (a
/// rejection rate above 99.9%).
const MAX_ATTEMPTS_PER_SAMPLE: usize = 1000;

/// The open set `U` is the complement of the zero sets of these forms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExclusionSet {
    polys: Vec<HomogPoly>,
}

impl ExclusionSet {
    pub fn new(polys: Vec<HomogPoly>) -> Result<Self> {
        if polys.iter().any(|p| p.is_zero()) {
            return Err(Error::InvalidInput(
                "an excluded form must be nonzero".into(),
            ));
        }
        Ok(ExclusionSet { polys })
    }

    /// All of projective space.
    pub fn everything() -> Self {
        ExclusionSet::default()
    }

    pub fn polys(&self) -> &[HomogPoly] {
        &self.polys
    }

    /// True when the point lies outside `U`.
    pub fn excludes(&self, p: &ProjPoint) -> bool {
        self.polys.iter().any(|f| f.eval(p.coords()) == 0u32)
    }
}

/// How sample points are drawn for a tier with bound `T`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Sampler {
    /// Coordinates uniform in `[-T, T]`.
    Uniform,
    /// Pairwise coprime `a_i` uniform in `(T^(1-epsilon), T)`, and the sample
    /// is `P = phi([a_0, ..., a_n])`. For an involution such as coordinate
    /// inversion this hits the points where `h(phi P)/h(P)` is smallest.
    InvolutionPullback { epsilon: f64 },
}

#[derive(Clone, Debug)]
pub struct MuConfig {
    pub tiers: Vec<u64>,
    pub samples_per_tier: usize,
    pub seed: u64,
    pub sampler: Sampler,
    pub exec: Exec,
}

impl Default for MuConfig {
    fn default() -> Self {
        MuConfig {
            tiers: DEFAULT_TIERS.to_vec(),
            samples_per_tier: DEFAULT_SAMPLES_PER_TIER,
            seed: 0,
            sampler: Sampler::Uniform,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioSample {
    pub point: ProjPoint,
    pub height: HeightValue,
    pub image_height: HeightValue,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TierStats {
    pub bound: u64,
    pub samples: usize,
    pub min_ratio: f64,
    pub mean_ratio: f64,
    /// `(h(P), h(phi P))` at the sample achieving `min_ratio`.
    pub min_pair: (f64, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MuEstimate {
    pub tiers: Vec<TierStats>,
    /// Minimum ratio in the largest tier.
    pub liminf_estimate: f64,
    /// Lower envelope `h(phi P) >= c1 h(P) - c2` through the tier minima.
    pub fitted_c1: f64,
    pub fitted_c2: f64,
}

fn uniform_point<R: Rng>(rng: &mut R, nvars: usize, bound: u64) -> Option<ProjPoint> {
    let b = bound as i64;
    let coords: Vec<Integer> = (0..nvars)
        .map(|_| Integer::from(rng.random_range(-b..=b)))
        .collect();
    ProjPoint::from_integers(coords).ok()
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn pullback_point<R: Rng>(
    rng: &mut R,
    phi: &RationalMap,
    bound: u64,
    epsilon: f64,
) -> Option<ProjPoint> {
    let lo = (bound as f64).powf(1.0 - epsilon).floor() as u64 + 1;
    let hi = bound.checked_sub(1)?;
    if lo > hi {
        return None;
    }
    let a: Vec<u64> = (0..=phi.n()).map(|_| rng.random_range(lo..=hi)).collect();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if gcd_u64(a[i], a[j]) != 1 {
                return None;
            }
        }
    }
    let base = ProjPoint::from_integers(a.into_iter().map(Integer::from).collect()).ok()?;
    phi.evaluate(&base).ok()?.point()
}

fn draw_sample(
    phi: &RationalMap,
    exclude: &ExclusionSet,
    bound: u64,
    sampler: Sampler,
    seed: u64,
    tier: u64,
    index: u64,
) -> Result<RatioSample> {
    let mut rng = rng_for(seed, &[tier, index]);
    let nvars = phi.n() + 1;
    for _ in 0..MAX_ATTEMPTS_PER_SAMPLE {
        let candidate = match sampler {
            Sampler::Uniform => uniform_point(&mut rng, nvars, bound),
            Sampler::InvolutionPullback { epsilon } => pullback_point(&mut rng, phi, bound, epsilon),
        };
        let Some(p) = candidate else { continue };
        if exclude.excludes(&p) {
            continue;
        }
        let height = p.height();
        if height.h == 0.0 {
            continue;
        }
        let Image::Point(image) = phi.evaluate(&p)? else {
            continue;
        };
        let image_height = image.height();
        return Ok(RatioSample {
            ratio: image_height.h / height.h,
            point: p,
            height,
            image_height,
        });
    }
    Err(Error::EmptyRegion)
}

/// `count` accepted samples with height bound `bound`. Sample `i` depends
/// only on `(seed, tier, i)`.
#[allow(clippy::too_many_arguments)]
pub fn sample_ratios(
    phi: &RationalMap,
    exclude: &ExclusionSet,
    bound: u64,
    count: usize,
    sampler: Sampler,
    seed: u64,
    tier: u64,
    exec: Exec,
) -> Result<Vec<RatioSample>> {
    if bound == 0 {
        return Err(Error::InvalidInput("tier bound must be positive".into()));
    }
    for f in exclude.polys() {
        if f.nvars() != phi.n() + 1 {
            return Err(Error::DimensionMismatch {
                expected: phi.n() + 1,
                found: f.nvars(),
            });
        }
    }
    map_indices(count, exec, |i| {
        draw_sample(phi, exclude, bound, sampler, seed, tier, i as u64)
    })
    .into_iter()
    .collect()
}

/// Least-squares line `y = c1 x - c2` through the points; `c1` is clamped at
/// zero. With fewer than two distinct abscissae the line passes through the
/// origin.
pub fn fit_lower_envelope(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    if points.is_empty() {
        return (0.0, 0.0);
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 1e-12 * (1.0 + mx * mx) {
        let c1 = if mx > 0.0 { (my / mx).max(0.0) } else { 0.0 };
        return (c1, 0.0);
    }
    let c1 = (sxy / sxx).max(0.0);
    (c1, c1 * mx - my)
}

pub fn estimate_mu(
    phi: &RationalMap,
    exclude: &ExclusionSet,
    config: &MuConfig,
) -> Result<MuEstimate> {
    if config.tiers.is_empty() || config.samples_per_tier == 0 {
        return Err(Error::InvalidInput(
            "need at least one tier and one sample per tier".into(),
        ));
    }
    if config.tiers.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("tier bounds must increase".into()));
    }
    let mut tiers = Vec::with_capacity(config.tiers.len());
    for (t, &bound) in config.tiers.iter().enumerate() {
        let samples = sample_ratios(
            phi,
            exclude,
            bound,
            config.samples_per_tier,
            config.sampler,
            config.seed,
            t as u64,
            config.exec,
        )?;
        let argmin = samples
            .iter()
            .min_by(|a, b| a.ratio.total_cmp(&b.ratio))
            .expect("at least one sample");
        let mean = samples.iter().map(|s| s.ratio).sum::<f64>() / samples.len() as f64;
        tiers.push(TierStats {
            bound,
            samples: samples.len(),
            min_ratio: argmin.ratio,
            mean_ratio: mean,
            min_pair: (argmin.height.h, argmin.image_height.h),
        });
    }
    let envelope: Vec<(f64, f64)> = tiers.iter().map(|t| t.min_pair).collect();
    let (fitted_c1, fitted_c2) = fit_lower_envelope(&envelope);
    Ok(MuEstimate {
        liminf_estimate: tiers.last().expect("nonempty").min_ratio.max(0.0),
        tiers,
        fitted_c1,
        fitted_c2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_forms, parse_map};

    #[test]
    fn power_map_ratio_is_exactly_the_degree() {
        let phi = parse_map("X0^2; X1^2; X2^2").unwrap();
        let cfg = MuConfig {
            tiers: vec![100, 10_000],
            samples_per_tier: 50,
            ..MuConfig::default()
        };
        let est = estimate_mu(&phi, &ExclusionSet::everything(), &cfg).unwrap();
        assert!((est.liminf_estimate - 2.0).abs() < 1e-12);
        assert!((est.fitted_c1 - 2.0).abs() < 1e-9);
        assert!(est.fitted_c2.abs() < 1e-6);
    }

    #[test]
    fn exclusions_are_respected() {
        let phi = parse_map("X0^2; X1^2; X0*X2").unwrap();
        let u = ExclusionSet::new(parse_forms("X0", 3).unwrap()).unwrap();
        let samples =
            sample_ratios(&phi, &u, 20, 200, Sampler::Uniform, 3, 0, Exec::Sequential).unwrap();
        assert!(samples.iter().all(|s| s.point.coords()[0] != 0u32));
    }

    #[test]
    fn empty_region_is_reported() {
        // with bound 1 every coordinate is in {-1, 0, 1}, so h(P) = 0 always
        let phi = parse_map("X0; X1; X2").unwrap();
        let r = sample_ratios(
            &phi,
            &ExclusionSet::everything(),
            1,
            1,
            Sampler::Uniform,
            0,
            0,
            Exec::Sequential,
        );
        assert_eq!(r, Err(Error::EmptyRegion));
    }

    #[test]
    fn pullback_sampler_brackets_inverse_dimension() {
        let phi = parse_map("X1*X2; X0*X2; X0*X1").unwrap();
        let eps = 0.1;
        let samples = sample_ratios(
            &phi,
            &ExclusionSet::everything(),
            1_000_000,
            100,
            Sampler::InvolutionPullback { epsilon: eps },
            0,
            0,
            Exec::Sequential,
        )
        .unwrap();
        for s in samples {
            assert!(s.ratio >= 0.5 - 1e-12);
            assert!(s.ratio <= 1.0 / ((1.0 - eps) * 2.0));
        }
    }

    #[test]
    fn rejects_bad_tiers() {
        let phi = parse_map("X0; X1").unwrap();
        let cfg = MuConfig {
            tiers: vec![100, 10],
            ..MuConfig::default()
        };
        assert!(estimate_mu(&phi, &ExclusionSet::everything(), &cfg).is_err());
    }

    #[test]
    fn envelope_fit() {
        let (c1, c2) = fit_lower_envelope(&[(1.0, 1.5), (2.0, 3.5), (3.0, 5.5)]);
        assert!((c1 - 2.0).abs() < 1e-12 && (c2 - 0.5).abs() < 1e-12);
        let (c1, c2) = fit_lower_envelope(&[(4.0, 2.0)]);
        assert_eq!((c1, c2), (0.5, 0.0));
        let (c1, _) = fit_lower_envelope(&[(1.0, 3.0), (2.0, 1.0)]);
        assert_eq!(c1, 0.0);
    }
}
