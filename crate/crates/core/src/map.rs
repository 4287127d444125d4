//! Rational self-maps of `P^n` given by `n+1` forms of a common degree.

use std::fmt;

use malachite_base::num::basic::traits::{One, Zero};
use malachite_nz::integer::Integer;
use malachite_nz::natural::Natural;

use crate::error::{Error, Result};
use crate::poly::{power_table, HomogPoly};
use crate::rational::{HeightValue, ProjPoint};

/// Largest `n` for which the Jacobian determinant is expanded symbolically.
pub const MAX_EXACT_JACOBIAN_DIM: usize = 4;

/// A rational map `[phi_0, ..., phi_n]` in canonical form: the coefficients
/// of all coordinates together have content 1, and the first nonzero
/// coefficient (coordinate 0 first, leading monomial first) is positive.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMap {
    n: usize,
    d: u32,
    coords: Vec<HomogPoly>,
}

/// Result of evaluating a map at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Image {
    Point(ProjPoint),
    /// The point lies in the indeterminacy locus.
    Indeterminate,
}

impl Image {
    pub fn point(self) -> Option<ProjPoint> {
        match self {
            Image::Point(p) => Some(p),
            Image::Indeterminate => None,
        }
    }
}

impl RationalMap {
    /// Builds and canonicalizes a map. Every coordinate must live in `n+1`
    /// variables with `n+1` coordinates in total, and all coordinates must
    /// share one degree `d >= 1`.
    pub fn new(coords: Vec<HomogPoly>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidInput(
                "a self-map of P^n needs at least 2 coordinates".into(),
            ));
        }
        let nvars = coords.len();
        for c in &coords {
            if c.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: c.nvars(),
                });
            }
        }
        let Some(d) = coords.iter().find(|c| !c.is_zero()).map(|c| c.degree()) else {
            return Err(Error::AllZero);
        };
        if d == 0 {
            return Err(Error::InvalidInput("map degree must be at least 1".into()));
        }
        let mut coords = coords;
        for (i, c) in coords.iter_mut().enumerate() {
            if c.is_zero() {
                *c = HomogPoly::zero(nvars, d);
            } else if c.degree() != d {
                return Err(Error::DegreeMismatch {
                    coord: i,
                    expected: d,
                    found: c.degree(),
                });
            }
        }
        Ok(Self::canonicalize(nvars - 1, d, coords))
    }

    fn canonicalize(n: usize, d: u32, coords: Vec<HomogPoly>) -> Self {
        let all: Vec<Integer> = coords
            .iter()
            .flat_map(|c| c.terms().map(|(_, k)| k.clone()).collect::<Vec<_>>())
            .collect();
        let content = crate::rational::content(&all);
        let negative = all.first().is_some_and(|k| *k < 0u32);
        let mut divisor = Integer::from(content);
        if negative {
            divisor = -divisor;
        }
        let coords = if divisor == 1u32 {
            coords
        } else {
            coords.iter().map(|c| c.div_exact(&divisor)).collect()
        };
        RationalMap { n, d, coords }
    }

    /// Dimension of the ambient `P^n`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn coords(&self) -> &[HomogPoly] {
        &self.coords
    }

    /// Number of monomials of degree `d` in `n+1` variables, `C(n+d, n)`.
    pub fn monomial_count(&self) -> Natural {
        binomial((self.n as u64) + self.d as u64, self.n as u64)
    }

    /// Height of the coefficient point of the map.
    pub fn height(&self) -> HeightValue {
        let hmax = self
            .coords
            .iter()
            .flat_map(|c| c.terms().map(|(_, k)| k.unsigned_abs_ref().clone()))
            .max()
            .unwrap_or(Natural::ZERO);
        HeightValue::from_hmax(hmax)
    }

    /// The values `phi_i(P)` on the integer representative of `P`, before
    /// normalization.
    pub fn evaluate_raw(&self, p: &ProjPoint) -> Result<Vec<Integer>> {
        if p.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.dim(),
            });
        }
        let powers = power_table(p.coords(), self.d);
        Ok(self
            .coords
            .iter()
            .map(|c| c.eval_with_powers(&powers))
            .collect())
    }

    pub fn evaluate(&self, p: &ProjPoint) -> Result<Image> {
        let values = self.evaluate_raw(p)?;
        match ProjPoint::from_integers(values) {
            Ok(q) => Ok(Image::Point(q)),
            Err(Error::AllZero) => Ok(Image::Indeterminate),
            Err(e) => Err(e),
        }
    }

    /// `self ∘ inner`, by substitution. Common factors of the resulting
    /// coordinates are kept.
    pub fn compose(&self, inner: &RationalMap) -> Result<RationalMap> {
        if self.n != inner.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: inner.n,
            });
        }
        let coords = self
            .coords
            .iter()
            .map(|c| c.substitute(&inner.coords))
            .collect();
        RationalMap::new(coords)
    }

    /// Matrix of partial derivatives `d phi_i / d X_j`.
    pub fn jacobian_matrix(&self) -> Vec<Vec<HomogPoly>> {
        self.coords
            .iter()
            .map(|c| (0..=self.n).map(|j| c.derivative(j)).collect())
            .collect()
    }

    /// Symbolic Jacobian determinant, homogeneous of degree `(n+1)(d-1)`.
    pub fn jacobian_det(&self) -> Result<HomogPoly> {
        if self.n > MAX_EXACT_JACOBIAN_DIM {
            return Err(Error::DimensionTooLarge(format!(
                "symbolic Jacobian supports n <= {MAX_EXACT_JACOBIAN_DIM}, got n = {}",
                self.n
            )));
        }
        let m = self.jacobian_matrix();
        let size = self.n + 1;
        let nvars = size;
        let out_degree = (self.n as u32 + 1) * (self.d - 1);
        let mut total = HomogPoly::zero(nvars, out_degree);
        for (perm, sign) in permutations(size) {
            let mut prod = HomogPoly::constant(nvars, Integer::ONE);
            for (row, &col) in perm.iter().enumerate() {
                let entry = &m[row][col];
                if entry.is_zero() {
                    prod = HomogPoly::zero(nvars, out_degree);
                    break;
                }
                prod = prod.mul(entry);
            }
            if prod.is_zero() {
                continue;
            }
            if sign < 0 {
                prod = prod.neg();
            }
            total = total.add(&prod);
        }
        Ok(total)
    }

    /// Jacobian matrix evaluated modulo `p`.
    pub fn jacobian_mod(&self, x: &[u64], p: u64) -> Vec<Vec<u64>> {
        self.jacobian_matrix()
            .iter()
            .map(|row| row.iter().map(|e| e.eval_mod(x, p)).collect())
            .collect()
    }

    /// Jacobian matrix evaluated exactly at an integer point.
    pub fn jacobian_at(&self, x: &[Integer]) -> Vec<Vec<Integer>> {
        self.jacobian_matrix()
            .iter()
            .map(|row| row.iter().map(|e| e.eval(x)).collect())
            .collect()
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMap[{self}]")
    }
}

pub fn binomial(n: u64, k: u64) -> Natural {
    if k > n {
        return Natural::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = Natural::ONE;
    for i in 0..k {
        acc *= Natural::from(n - i);
        acc /= Natural::from(i + 1);
    }
    acc
}

/// All permutations of `0..n` with their signs (Heap's algorithm).
fn permutations(n: usize) -> Vec<(Vec<usize>, i8)> {
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1i8;
    let mut out = vec![(a.clone(), sign)];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            out.push((a.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Exact determinant of an integer matrix (fraction-free Bareiss
/// elimination).
pub fn integer_det(m: &[Vec<Integer>]) -> Integer {
    use malachite_base::num::arithmetic::traits::DivExact;
    let n = m.len();
    if n == 0 {
        return Integer::ONE;
    }
    let mut a: Vec<Vec<Integer>> = m.to_vec();
    let mut sign = false;
    let mut prev = Integer::ONE;
    for k in 0..n - 1 {
        if a[k][k] == 0u32 {
            let Some(swap) = (k + 1..n).find(|&r| a[r][k] != 0u32) else {
                return Integer::ZERO;
            };
            a.swap(k, swap);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_map;

    fn pt(c: &[i64]) -> ProjPoint {
        ProjPoint::from_i64s(c).unwrap()
    }

    #[test]
    fn intro_map_evaluation() {
        let phi = parse_map("X0^2; X1^2; X0*X2").unwrap();
        assert_eq!(phi.evaluate(&pt(&[0, 2, 5])).unwrap(), Image::Point(pt(&[0, 1, 0])));
        assert_eq!(phi.evaluate(&pt(&[1, 1, 2])).unwrap(), Image::Point(pt(&[1, 1, 2])));
        assert_eq!(phi.evaluate(&pt(&[0, 0, 1])).unwrap(), Image::Indeterminate);
        assert!(matches!(
            phi.evaluate(&pt(&[1, 2])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn map_heights() {
        assert_eq!(parse_map("X0^2; X1^2; X0*X2").unwrap().height().h, 0.0);
        let h = parse_map("2*X0^2; X1^2; X0*X2").unwrap().height();
        assert_eq!(h.hmax, 2u32);
        assert!((h.h - 2f64.ln()).abs() < 1e-15);
        assert_eq!(parse_map("X0^2; X0^2; X1^2").unwrap().height().h, 0.0);
        let phi = parse_map("X0^2; X1^2; X0*X2").unwrap();
        assert_eq!(phi.monomial_count(), 6u32);
    }

    #[test]
    fn jacobian_examples() {
        let j = parse_map("X0^2; X1^2; X0*X2").unwrap().jacobian_det().unwrap();
        assert_eq!(j.to_string(), "4*X0^2*X1");
        let j = parse_map("X0^2; X0^2; X1^2").unwrap().jacobian_det().unwrap();
        assert!(j.is_zero());
        let j = parse_map("X0; X1; X2").unwrap().jacobian_det().unwrap();
        assert_eq!(j.to_string(), "1");
        let big = parse_map("X0; X1; X2; X3; X4; X5").unwrap();
        assert!(matches!(big.jacobian_det(), Err(Error::DimensionTooLarge(_))));
    }

    #[test]
    fn composition_examples() {
        let id = parse_map("X0; X1; X2").unwrap();
        let phi = parse_map("X0^2; X1^2; X0*X2").unwrap();
        assert_eq!(id.compose(&phi).unwrap(), phi);
        assert_eq!(phi.compose(&id).unwrap(), phi);
        let inv = parse_map("X1*X2; X0*X2; X0*X1").unwrap();
        let twice = inv.compose(&inv).unwrap();
        assert_eq!(twice.degree(), 4);
        assert_eq!(
            twice.to_string(),
            "X0^2*X1*X2; X0*X1^2*X2; X0*X1*X2^2"
        );
    }

    #[test]
    fn permutations_have_correct_signs() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        for (p, s) in perms {
            let inversions = (0..3)
                .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            assert_eq!(s, if inversions % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn bareiss_determinant() {
        let m: Vec<Vec<Integer>> = [[2, 0, 1], [1, 3, 2], [1, 1, 1]]
            .iter()
            .map(|r| r.iter().map(|&v| Integer::from(v)).collect())
            .collect();
        assert_eq!(integer_det(&m), 2 + (1 - 3));
        let m: Vec<Vec<Integer>> = [[0, 1], [1, 0]]
            .iter()
            .map(|r| r.iter().map(|&v| Integer::from(v)).collect())
            .collect();
        assert_eq!(integer_det(&m), -1);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6u32);
        assert_eq!(binomial(5, 2), 10u32);
        assert_eq!(binomial(3, 0), 1u32);
    }
}
