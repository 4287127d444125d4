//! Regular affine automorphisms of `P^n` (Hénon-type maps) and their
//! canonical heights.

use malachite_base::num::arithmetic::traits::Pow;
use malachite_nz::integer::Integer;
use malachite_nz::natural::Natural;
use rand::Rng;

use crate::error::{Error, Result};
use crate::map::{Image, RationalMap};
use crate::par::{map_indices, rng_for, Exec};
use crate::rational::ProjPoint;

pub const DEFAULT_CANONICAL_TOL: f64 = 1e-6;
pub const DEFAULT_CANONICAL_KMAX: usize = 20;

/// Number of random affine points on which the inverse is checked.
const INVERSE_CHECK_POINTS: u64 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Iterate the forward map.
    Plus,
    /// Iterate the inverse map.
    Minus,
}

/// A pair `(phi, phi^-1)` checked to be mutually inverse on the affine chart
/// `X0 = 1`, with optionally declared dimensions of the indeterminacy loci.
#[derive(Clone, Debug)]
pub struct AffineAutomorphism {
    fwd: RationalMap,
    inv: RationalMap,
    declared_dims: Option<(u32, u32)>,
}

/// `l1 + l2 = n` and `d2^l1 = d1^l2` with `l = 1 + dim Z`.
pub fn ell_relations_hold(n: usize, d1: u32, d2: u32, dims: (u32, u32)) -> bool {
    let l1 = 1 + dims.0;
    let l2 = 1 + dims.1;
    if (l1 + l2) as usize != n {
        return false;
    }
    Natural::from(d2).pow(l1 as u64) == Natural::from(d1).pow(l2 as u64)
}

impl AffineAutomorphism {
    /// Verifies `inv(fwd(P)) = P` and `fwd(inv(P)) = P` with both images in
    /// the chart, on 32 random affine points drawn from `seed`; when
    /// `declared_dims` is given, also checks the degree relations.
    pub fn new(
        fwd: RationalMap,
        inv: RationalMap,
        declared_dims: Option<(u32, u32)>,
        seed: u64,
    ) -> Result<Self> {
        if fwd.n() != inv.n() {
            return Err(Error::DimensionMismatch {
                expected: fwd.n(),
                found: inv.n(),
            });
        }
        let a = AffineAutomorphism {
            fwd,
            inv,
            declared_dims,
        };
        for i in 0..INVERSE_CHECK_POINTS {
            let mut rng = rng_for(seed, &[i]);
            let mut coords = vec![Integer::from(1)];
            coords.extend((0..a.n()).map(|_| Integer::from(rng.random_range(-50i64..=50))));
            let p = ProjPoint::from_integers(coords)?;
            for (first, second) in [(&a.fwd, &a.inv), (&a.inv, &a.fwd)] {
                let q = match first.evaluate(&p)? {
                    Image::Point(q) if q.is_affine() => q,
                    _ => {
                        return Err(Error::NotAutomorphism(format!(
                            "{p} leaves the affine chart"
                        )))
                    }
                };
                if second.evaluate(&q)? != Image::Point(p.clone()) {
                    return Err(Error::NotAutomorphism(format!(
                        "maps are not mutually inverse at {p}"
                    )));
                }
            }
        }
        if let Some(dims) = declared_dims {
            if !ell_relations_hold(a.n(), a.d1(), a.d2(), dims) {
                return Err(Error::NotAutomorphism(format!(
                    "declared indeterminacy dimensions {dims:?} violate l1 + l2 = n, d2^l1 = d1^l2"
                )));
            }
        }
        Ok(a)
    }

    pub fn n(&self) -> usize {
        self.fwd.n()
    }

    pub fn fwd(&self) -> &RationalMap {
        &self.fwd
    }

    pub fn inv(&self) -> &RationalMap {
        &self.inv
    }

    pub fn d1(&self) -> u32 {
        self.fwd.degree()
    }

    pub fn d2(&self) -> u32 {
        self.inv.degree()
    }

    pub fn declared_dims(&self) -> Option<(u32, u32)> {
        self.declared_dims
    }

    /// `(l1, l2) = (1 + dim Z_phi, 1 + dim Z_phi^-1)` when declared.
    pub fn ells(&self) -> Option<(u32, u32)> {
        self.declared_dims.map(|(a, b)| (1 + a, 1 + b))
    }

    pub fn map(&self, dir: Direction) -> &RationalMap {
        match dir {
            Direction::Plus => &self.fwd,
            Direction::Minus => &self.inv,
        }
    }

    pub fn degree(&self, dir: Direction) -> u32 {
        self.map(dir).degree()
    }

    /// One step in the given direction; `step_index` is only used to label
    /// a chart error.
    pub fn step(&self, p: &ProjPoint, dir: Direction, step_index: i64) -> Result<ProjPoint> {
        match self.map(dir).evaluate(p)? {
            Image::Point(q) if q.is_affine() => Ok(q),
            _ => Err(Error::OrbitLeftChart { step: step_index }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalHeight {
    pub value: f64,
    /// Number of iterations behind `value`.
    pub k: usize,
    pub converged: bool,
    /// True when iteration stopped at the coordinate-width cap.
    pub overflow: bool,
}

/// `lim h(psi^k P) / deg(psi)^k` for `psi = phi` (plus) or `phi^-1`
/// (minus). Iteration stops once successive estimates differ by less than
/// `tol` (checked from `k = 2`), at `kmax`, or before a coordinate would
/// exceed `max_bits` bits.
pub fn canonical_height(
    a: &AffineAutomorphism,
    p: &ProjPoint,
    dir: Direction,
    kmax: usize,
    tol: f64,
    max_bits: u64,
) -> Result<CanonicalHeight> {
    if kmax < 2 {
        return Err(Error::InvalidInput("kmax must be at least 2".into()));
    }
    if !p.is_affine() {
        return Err(Error::OrbitLeftChart { step: 0 });
    }
    let deg = a.degree(dir) as f64;
    let sign = if dir == Direction::Plus { 1 } else { -1 };
    let mut point = p.clone();
    let mut prev = p.height().h;
    let mut scale = 1.0;
    for k in 1..=kmax {
        let next = a.step(&point, dir, sign * k as i64)?;
        if next.max_bits() > max_bits {
            return Ok(CanonicalHeight {
                value: prev,
                k: k - 1,
                converged: false,
                overflow: true,
            });
        }
        scale *= deg;
        let est = next.height().h / scale;
        point = next;
        if k >= 2 && (est - prev).abs() < tol {
            return Ok(CanonicalHeight {
                value: est,
                k,
                converged: true,
                overflow: false,
            });
        }
        prev = est;
    }
    Ok(CanonicalHeight {
        value: prev,
        k: kmax,
        converged: false,
        overflow: false,
    })
}

/// `h(phi P)/d1 + h(phi^-1 P)/d2 - (1 + 1/(d1 d2)) h(P)`.
pub fn kawaguchi_slack(a: &AffineAutomorphism, p: &ProjPoint) -> Result<f64> {
    if !p.is_affine() {
        return Err(Error::OrbitLeftChart { step: 0 });
    }
    let d1 = a.d1() as f64;
    let d2 = a.d2() as f64;
    let hf = a.step(p, Direction::Plus, 1)?.height().h;
    let hb = a.step(p, Direction::Minus, -1)?.height().h;
    Ok(hf / d1 + hb / d2 - (1.0 + 1.0 / (d1 * d2)) * p.height().h)
}

#[derive(Clone, Debug, PartialEq)]
pub struct KawaguchiStats {
    pub bound: u64,
    pub samples: usize,
    pub min_slack: f64,
    pub argmin: ProjPoint,
    /// Smallest `C >= 0` with `slack + C >= 0` on every sample.
    pub fitted_c: f64,
}

/// Slack over `samples` random affine points with coordinates in
/// `[-bound, bound]`.
pub fn kawaguchi_experiment(
    a: &AffineAutomorphism,
    bound: u64,
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<KawaguchiStats> {
    if samples == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    let b = bound as i64;
    let results = map_indices(samples, exec, |i| {
        let mut rng = rng_for(seed, &[bound, i as u64]);
        let mut coords = vec![Integer::from(1)];
        coords.extend((0..a.n()).map(|_| Integer::from(rng.random_range(-b..=b))));
        let p = ProjPoint::from_integers(coords)?;
        kawaguchi_slack(a, &p).map(|s| (s, p))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (min_slack, argmin) = results
        .into_iter()
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .expect("nonempty");
    Ok(KawaguchiStats {
        bound,
        samples,
        min_slack,
        argmin,
        fitted_c: (-min_slack).max(0.0),
    })
}

/// Runs [`kawaguchi_experiment`] on each box of an increasing sequence and
/// pools the samples: box `i` contains every smaller box, so its statistics
/// (and fitted `C`) cover all samples drawn so far.
pub fn kawaguchi_sweep(
    a: &AffineAutomorphism,
    bounds: &[u64],
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<Vec<KawaguchiStats>> {
    if bounds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("box bounds must increase".into()));
    }
    let mut out: Vec<KawaguchiStats> = Vec::with_capacity(bounds.len());
    for &bound in bounds {
        let mut stats = kawaguchi_experiment(a, bound, samples, seed, exec)?;
        if let Some(prev) = out.last() {
            stats.samples += prev.samples;
            if prev.min_slack < stats.min_slack {
                stats.min_slack = prev.min_slack;
                stats.argmin = prev.argmin.clone();
                stats.fitted_c = prev.fitted_c;
            }
        }
        out.push(stats);
    }
    Ok(out)
}

/// `|new - old| / old`, taken as 0 when both are 0.
pub fn relative_change(old: f64, new: f64) -> f64 {
    if old == new {
        0.0
    } else if old == 0.0 {
        f64::INFINITY
    } else {
        (new - old).abs() / old.abs()
    }
}

/// Ratios `h(phi Q_k) / h(Q_k)` along the backward orbit `Q_k = phi^-k P`
/// for `k = 0..=kmax` (entries with `h(Q_k) = 0` are skipped).
pub fn backward_mu_sequence(
    a: &AffineAutomorphism,
    p: &ProjPoint,
    kmax: usize,
) -> Result<Vec<(usize, f64)>> {
    if !p.is_affine() {
        return Err(Error::OrbitLeftChart { step: 0 });
    }
    let mut q = p.clone();
    let mut heights = Vec::with_capacity(kmax + 1);
    let mut out = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        if k > 0 {
            q = a.step(&q, Direction::Minus, -(k as i64))?;
        }
        let h = q.height().h;
        heights.push(h);
        if k == 5 && heights[..5].iter().all(|&earlier| h <= earlier) {
            return Err(Error::BoundedOrbit);
        }
        if h == 0.0 {
            continue;
        }
        let image = a.step(&q, Direction::Plus, 1 - k as i64)?;
        out.push((k, image.height().h / h));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn pt(c: &[i64]) -> ProjPoint {
        ProjPoint::from_i64s(c).unwrap()
    }

    #[test]
    fn henon_pair_verifies() {
        let a = builtins::henon(1).unwrap();
        assert_eq!((a.d1(), a.d2()), (2, 2));
        assert_eq!(a.ells(), Some((1, 1)));
        assert!(ell_relations_hold(2, 2, 2, (0, 0)));
        assert!(!ell_relations_hold(2, 2, 2, (1, 0)));
        assert!(ell_relations_hold(3, 2, 4, (0, 1)));
        assert!(!ell_relations_hold(3, 4, 2, (0, 1)));
    }

    #[test]
    fn mismatched_inverse_rejected() {
        let a = builtins::henon(1).unwrap();
        let wrong = builtins::henon(3).unwrap();
        let r = AffineAutomorphism::new(a.fwd().clone(), wrong.inv().clone(), None, 0);
        assert!(matches!(r, Err(Error::NotAutomorphism(_))));
        let r = AffineAutomorphism::new(a.fwd().clone(), a.inv().clone(), Some((1, 0)), 0);
        assert!(matches!(r, Err(Error::NotAutomorphism(_))));
    }

    #[test]
    fn fixed_point_has_zero_canonical_heights() {
        let a = builtins::henon(1).unwrap();
        let p = pt(&[1, 1, 1]);
        for dir in [Direction::Plus, Direction::Minus] {
            let c = canonical_height(&a, &p, dir, 20, 1e-6, 1 << 20).unwrap();
            assert_eq!(c.value, 0.0);
            assert!(c.converged);
        }
        assert_eq!(kawaguchi_slack(&a, &p).unwrap(), 0.0);
        assert_eq!(backward_mu_sequence(&a, &p, 8), Err(Error::BoundedOrbit));
    }

    #[test]
    fn kmax_two_is_the_coarse_estimate() {
        let a = builtins::henon(1).unwrap();
        let p = pt(&[1, 2, 3]);
        let c = canonical_height(&a, &p, Direction::Plus, 2, 0.0, 1 << 20).unwrap();
        // (2,3) -> (3,8) -> (8,62)
        assert_eq!(c.k, 2);
        assert!((c.value - 62f64.ln() / 4.0).abs() < 1e-15);
        assert!(canonical_height(&a, &p, Direction::Plus, 1, 0.0, 1 << 20).is_err());
    }

    #[test]
    fn slack_at_a_generic_point() {
        let a = builtins::henon(1).unwrap();
        // phi(2,3) = (3,8); phi^-1(2,3) = (4+1-3, 2) = (2,2)
        let s = kawaguchi_slack(&a, &pt(&[1, 2, 3])).unwrap();
        let expected = 8f64.ln() / 2.0 + 2f64.ln() / 2.0 - 1.25 * 3f64.ln();
        assert!((s - expected).abs() < 1e-12);
    }

    #[test]
    fn backward_sequence_starts_with_the_forward_ratio() {
        let a = builtins::henon(1).unwrap();
        let p = pt(&[1, 2, 3]);
        let seq = backward_mu_sequence(&a, &p, 6).unwrap();
        assert_eq!(seq[0], (0, 8f64.ln() / 3f64.ln()));
        assert_eq!(seq.len(), 7);
    }

    #[test]
    fn chart_is_enforced() {
        let a = builtins::henon(1).unwrap();
        assert_eq!(
            kawaguchi_slack(&a, &pt(&[0, 1, 1])),
            Err(Error::OrbitLeftChart { step: 0 })
        );
    }
}
