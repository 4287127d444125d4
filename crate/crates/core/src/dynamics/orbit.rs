use crate::error::Result;
use crate::map::{Image, RationalMap};
use crate::rational::ProjPoint;

/// Coordinate width at which orbit computations stop.
pub const DEFAULT_MAX_BITS: u64 = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Completed,
    HitIndeterminacy,
    HeightOverflow,
}

impl Termination {
    pub fn label(self) -> &'static str {
        match self {
            Termination::Completed => "Completed",
            Termination::HitIndeterminacy => "HitIndeterminacy",
            Termination::HeightOverflow => "HeightOverflow",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitStep {
    pub k: usize,
    pub point: ProjPoint,
    pub h: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitRecord {
    pub steps: Vec<OrbitStep>,
    pub termination: Termination,
}

impl OrbitRecord {
    pub fn last(&self) -> &OrbitStep {
        self.steps.last().expect("orbit always holds its starting point")
    }
}

/// `P, phi(P), ..., phi^kmax(P)`, stopping early at an indeterminate point
/// or once a coordinate would exceed `max_bits` bits. Points past the stop
/// are not recorded.
pub fn forward_orbit(
    phi: &RationalMap,
    start: &ProjPoint,
    kmax: usize,
    max_bits: u64,
) -> Result<OrbitRecord> {
    let mut steps = vec![OrbitStep {
        k: 0,
        h: start.height().h,
        point: start.clone(),
    }];
    let mut termination = Termination::Completed;
    for k in 1..=kmax {
        let next = match phi.evaluate(&steps[k - 1].point)? {
            Image::Point(q) => q,
            Image::Indeterminate => {
                termination = Termination::HitIndeterminacy;
                break;
            }
        };
        if next.max_bits() > max_bits {
            termination = Termination::HeightOverflow;
            break;
        }
        steps.push(OrbitStep {
            k,
            h: next.height().h,
            point: next,
        });
    }
    Ok(OrbitRecord { steps, termination })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_map;

    fn pt(c: &[i64]) -> ProjPoint {
        ProjPoint::from_i64s(c).unwrap()
    }

    #[test]
    fn fixed_point_orbit_is_constant() {
        let phi = parse_map("X0^2; X1^2; X0*X2").unwrap();
        let orbit = forward_orbit(&phi, &pt(&[1, 1, 2]), 5, DEFAULT_MAX_BITS).unwrap();
        assert_eq!(orbit.steps.len(), 6);
        assert_eq!(orbit.termination, Termination::Completed);
        for s in &orbit.steps {
            assert_eq!(s.point, pt(&[1, 1, 2]));
            assert!((s.h - 2f64.ln()).abs() < 1e-15);
        }
    }

    #[test]
    fn orbit_lands_on_fixed_point() {
        let phi = parse_map("X0^2; X1^2; X0*X2").unwrap();
        let orbit = forward_orbit(&phi, &pt(&[0, 2, 5]), 4, DEFAULT_MAX_BITS).unwrap();
        assert_eq!(orbit.termination, Termination::Completed);
        assert!(orbit.steps[1..].iter().all(|s| s.point == pt(&[0, 1, 0]) && s.h == 0.0));
    }

    #[test]
    fn zero_steps_and_indeterminacy() {
        let phi = parse_map("X0^2; X1^2; X0*X2").unwrap();
        let orbit = forward_orbit(&phi, &pt(&[3, 5, 7]), 0, DEFAULT_MAX_BITS).unwrap();
        assert_eq!(orbit.steps.len(), 1);
        assert_eq!(orbit.steps[0].k, 0);
        assert_eq!(orbit.termination, Termination::Completed);
        let orbit = forward_orbit(&phi, &pt(&[0, 0, 1]), 3, DEFAULT_MAX_BITS).unwrap();
        assert_eq!(orbit.termination, Termination::HitIndeterminacy);
        assert_eq!(orbit.steps.len(), 1);
    }

    #[test]
    fn overflow_stops_the_orbit() {
        let phi = parse_map("X0^2; X1^2; X2^2").unwrap();
        let orbit = forward_orbit(&phi, &pt(&[1, 2, 3]), 30, 64).unwrap();
        assert_eq!(orbit.termination, Termination::HeightOverflow);
        assert!(orbit.steps.iter().all(|s| s.point.max_bits() <= 64));
        // 3^(2^k) fits in 64 bits up to k = 5
        assert_eq!(orbit.last().k, 5);
    }
}
