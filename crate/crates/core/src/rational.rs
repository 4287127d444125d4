//! Exact integers and rationals, normalized projective points over Q, and
//! logarithmic Weil heights.

use std::cmp::Ordering;
use std::fmt;

use malachite_base::num::arithmetic::traits::{DivExact, Gcd, Lcm};
use malachite_base::num::basic::traits::{One, Zero};
use malachite_base::num::logic::traits::SignificantBits;
use malachite_nz::integer::Integer;
use malachite_nz::natural::Natural;
use malachite_q::Rational;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type BigRat = Rational;

/// Natural logarithm of a positive natural number.
///
/// Numbers wider than 64 bits are reduced to their leading 64 bits plus a
/// power-of-two exponent, so the result stays accurate to a relative error
/// far below 1e-12 regardless of size. `ln(0)` is reported as 0.
pub fn ln_natural(n: &Natural) -> f64 {
    let bits = n.significant_bits();
    if bits == 0 {
        return 0.0;
    }
    if bits <= 64 {
        return (u64::try_from(n).expect("fits in u64") as f64).ln();
    }
    let shift = bits - 64;
    let top = u64::try_from(&(n >> shift)).expect("fits in u64");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln |x|`, with `ln 0 = 0`.
pub fn ln_abs(x: &Integer) -> f64 {
    ln_natural(x.unsigned_abs_ref())
}

/// Height of a rational number `p/q`, i.e. `ln max(|p|, q)`.
pub fn rational_height(x: &BigRat) -> f64 {
    let num = x.numerator_ref();
    let den = x.denominator_ref();
    ln_natural(if num > den { num } else { den })
}

/// Weil height of a point, with the multiplicative height kept exact.
#[derive(Clone, Debug, PartialEq)]
pub struct HeightValue {
    /// `ln(hmax)`.
    pub h: f64,
    /// `max |coordinate|` of the normalized representative.
    pub hmax: Natural,
}

impl HeightValue {
    pub fn from_hmax(hmax: Natural) -> Self {
        HeightValue {
            h: ln_natural(&hmax),
            hmax,
        }
    }
}

/// A point of `P^n(Q)` stored as its canonical integer representative:
/// coprime coordinates whose first nonzero entry is positive.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<Integer>,
}

impl ProjPoint {
    /// Canonical representative of the class of `raw` (clears denominators,
    /// removes the content, fixes the sign).
    pub fn normalize(raw: &[BigRat]) -> Result<ProjPoint> {
        if raw.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a projective point needs at least 2 coordinates, got {}",
                raw.len()
            )));
        }
        let mut den = Natural::ONE;
        for r in raw {
            den = den.lcm(r.denominator_ref());
        }
        let den = Integer::from(den);
        let ints: Vec<Integer> = raw
            .iter()
            .map(|r| {
                let num = Integer::from_sign_and_abs_ref(*r >= 0u32, r.numerator_ref());
                let scale = (&den).div_exact(Integer::from(r.denominator_ref()));
                num * scale
            })
            .collect();
        Self::from_integers(ints)
    }

    /// Canonical representative of the class of an integer vector.
    pub fn from_integers(mut coords: Vec<Integer>) -> Result<ProjPoint> {
        if coords.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a projective point needs at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        let g = content(&coords);
        if g == 0u32 {
            return Err(Error::AllZero);
        }
        if g != 1u32 {
            let g = Integer::from(g);
            for c in coords.iter_mut() {
                if *c != 0u32 {
                    *c = (&*c).div_exact(&g);
                }
            }
        }
        let first_negative = coords
            .iter()
            .find(|c| **c != 0u32)
            .is_some_and(|c| *c < 0u32);
        if first_negative {
            for c in coords.iter_mut() {
                *c = -&*c;
            }
        }
        Ok(ProjPoint { coords })
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64s(coords: &[i64]) -> Result<ProjPoint> {
        Self::from_integers(coords.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn coords(&self) -> &[Integer] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Integer> {
        self.coords
    }

    /// Dimension `n` of the ambient `P^n`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Largest absolute coordinate, i.e. the multiplicative height.
    pub fn hmax(&self) -> Natural {
        self.coords
            .iter()
            .map(|c| c.unsigned_abs_ref())
            .max()
            .cloned()
            .unwrap_or(Natural::ZERO)
    }

    pub fn height(&self) -> HeightValue {
        HeightValue::from_hmax(self.hmax())
    }

    /// Bit length of the widest coordinate.
    pub fn max_bits(&self) -> u64 {
        self.coords
            .iter()
            .map(|c| c.significant_bits())
            .max()
            .unwrap_or(0)
    }

    /// True when the point lies in the affine chart `X0 != 0`.
    pub fn is_affine(&self) -> bool {
        self.coords[0] != 0u32
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// gcd of the absolute values of all entries; 0 when every entry is 0.
///
/// Starts from the narrowest nonzero entry and stops as soon as the running
/// gcd reaches 1, which keeps points with a unit coordinate cheap to
/// normalize no matter how wide the other coordinates are.
pub fn content(values: &[Integer]) -> Natural {
    let mut nonzero: Vec<&Natural> = values
        .iter()
        .filter(|c| **c != 0u32)
        .map(|c| c.unsigned_abs_ref())
        .collect();
    nonzero.sort_by_key(|n| n.significant_bits());
    let mut iter = nonzero.into_iter();
    let Some(first) = iter.next() else {
        return Natural::ZERO;
    };
    let mut g = first.clone();
    for n in iter {
        if g == 1u32 {
            break;
        }
        g = (&g).gcd(n);
    }
    g
}

/// Evaluates `X^d + A1 X^(d-1) + ... + Ad` exactly at `x`.
pub fn eval_monic(coeffs: &[BigRat], x: &BigRat) -> BigRat {
    let mut acc = BigRat::ONE;
    for a in coeffs {
        acc = acc * x + a;
    }
    acc
}

/// `h([1, A1, ..., Ad]) + d ln 2 - h(root)` for a root of the monic
/// polynomial with coefficients `A1..Ad`. The value is never negative.
pub fn root_coeff_gap(coeffs: &[BigRat], root: &BigRat) -> Result<f64> {
    if eval_monic(coeffs, root) != 0u32 {
        return Err(Error::NotARoot);
    }
    let mut point = Vec::with_capacity(coeffs.len() + 1);
    point.push(BigRat::ONE);
    point.extend(coeffs.iter().cloned());
    let hcoeff = ProjPoint::normalize(&point)?.height().h;
    Ok(hcoeff + coeffs.len() as f64 * std::f64::consts::LN_2 - rational_height(root))
}

/// Exact comparison `H(root) <= 2^d H([1, A1..Ad])` underlying
/// [`root_coeff_gap`], free of any floating point.
pub fn root_coeff_bound_holds(coeffs: &[BigRat], root: &BigRat) -> Result<bool> {
    if eval_monic(coeffs, root) != 0u32 {
        return Err(Error::NotARoot);
    }
    let mut point = Vec::with_capacity(coeffs.len() + 1);
    point.push(BigRat::ONE);
    point.extend(coeffs.iter().cloned());
    let hcoeff = ProjPoint::normalize(&point)?.hmax();
    let num = root.numerator_ref();
    let den = root.denominator_ref();
    let hroot = if num > den { num } else { den };
    let bound = hcoeff << (coeffs.len() as u64);
    Ok(hroot.cmp(&bound) != Ordering::Greater)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRat {
        BigRat::from_signeds(n, d)
    }

    #[test]
    fn normalize_examples() {
        let p = ProjPoint::normalize(&[q(2, 3), q(-1, 3), q(0, 1)]).unwrap();
        assert_eq!(p, ProjPoint::from_i64s(&[2, -1, 0]).unwrap());
        assert_eq!(
            p.coords(),
            &[Integer::from(2), Integer::from(-1), Integer::from(0)]
        );
        let p = ProjPoint::normalize(&[q(0, 1), q(-5, 1), q(10, 1)]).unwrap();
        assert_eq!(
            p.coords(),
            &[Integer::from(0), Integer::from(1), Integer::from(-2)]
        );
        let p = ProjPoint::normalize(&[q(7, 1), q(7, 1), q(7, 1)]).unwrap();
        assert_eq!(p.coords(), &[Integer::ONE, Integer::ONE, Integer::ONE]);
    }

    #[test]
    fn all_zero_rejected() {
        assert!(matches!(
            ProjPoint::normalize(&[q(0, 1), q(0, 5)]),
            Err(Error::AllZero)
        ));
    }

    #[test]
    fn height_examples() {
        let h = ProjPoint::from_i64s(&[0, 1, 0]).unwrap().height();
        assert_eq!(h.h, 0.0);
        assert_eq!(h.hmax, 1u32);
        let h = ProjPoint::from_i64s(&[3, 4, 12]).unwrap().height();
        assert_eq!(h.hmax, 12u32);
        assert!((h.h - 12f64.ln()).abs() < 1e-15);
        let h = ProjPoint::from_i64s(&[15, 10, 6]).unwrap().height();
        assert_eq!(h.hmax, 15u32);
    }

    #[test]
    fn ln_of_wide_numbers() {
        // 3^5000 has an exactly known logarithm.
        let n = (0..5000).fold(Natural::ONE, |acc, _| acc * Natural::from(3u32));
        let expected = 5000.0 * 3f64.ln();
        assert!(((ln_natural(&n) - expected) / expected).abs() < 1e-12);
        let n = Natural::ONE << 100_000u64;
        let expected = 100_000.0 * std::f64::consts::LN_2;
        assert!(((ln_natural(&n) - expected) / expected).abs() < 1e-12);
    }

    #[test]
    fn root_coeff_gap_examples() {
        let gap = root_coeff_gap(&[q(-3, 1), q(2, 1)], &q(2, 1)).unwrap();
        assert!((gap - 6f64.ln()).abs() < 1e-12);
        for d in 1..6 {
            let zeros = vec![q(0, 1); d];
            let gap = root_coeff_gap(&zeros, &q(0, 1)).unwrap();
            assert!((gap - d as f64 * std::f64::consts::LN_2).abs() < 1e-12);
        }
        assert!(matches!(
            root_coeff_gap(&[q(-3, 1), q(2, 1)], &q(3, 1)),
            Err(Error::NotARoot)
        ));
    }

    #[test]
    fn rational_height_matches_point_height() {
        for (n, d) in [(3, 7), (-22, 7), (0, 1), (5, 1), (1, 9)] {
            let x = q(n, d);
            let p = ProjPoint::normalize(&[x.clone(), BigRat::ONE]).unwrap();
            assert_eq!(rational_height(&x), p.height().h);
        }
    }
}
