//! Homogeneous multivariate polynomials with integer coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use malachite_base::num::arithmetic::traits::Mod;
use malachite_base::num::basic::traits::{One, Zero};
use malachite_nz::integer::Integer;

use crate::modp;

/// Exponent vector over the variables `X0..Xn`.
///
/// Ordered graded-lexicographically with `X0 > X1 > ... > Xn`, so the
/// largest monomial of a map coordinate is its leading term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// The monomial `Xi`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    /// All monomials of total degree `degree` in `nvars` variables, largest
    /// first.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        fn rec(prefix: &mut Vec<u32>, left: usize, remaining: u32, out: &mut Vec<Monomial>) {
            if left == 1 {
                prefix.push(remaining);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=remaining).rev() {
                prefix.push(e);
                rec(prefix, left - 1, remaining - e, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            return out;
        }
        rec(&mut Vec::with_capacity(nvars), nvars, degree, &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Homogeneous polynomial of fixed degree. Only nonzero coefficients are
/// stored; the zero polynomial still remembers its nominal degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomogPoly {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, Integer>,
}

impl HomogPoly {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        HomogPoly {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Integer) -> Self {
        let mut p = Self::zero(nvars, 0);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn monomial(m: Monomial, c: Integer) -> Self {
        let mut p = Self::zero(m.nvars(), m.degree());
        p.add_term(m, c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i), Integer::ONE)
    }

    /// Builds a polynomial from terms, summing repeated monomials. Returns
    /// `None` when the terms do not all share one total degree.
    pub fn from_terms(nvars: usize, terms: Vec<(Monomial, Integer)>) -> Option<Self> {
        let degree = terms.first().map_or(0, |(m, _)| m.degree());
        let mut p = Self::zero(nvars, degree);
        for (m, c) in terms {
            if m.degree() != degree || m.nvars() != nvars {
                return None;
            }
            p.add_term(m, c);
        }
        Some(p)
    }

    /// Adds `c * m`; `m` must have this polynomial's degree.
    pub fn add_term(&mut self, m: Monomial, c: Integer) {
        debug_assert_eq!(m.degree(), self.degree);
        if c == 0u32 {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if *existing == 0u32 {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in decreasing monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Integer)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Integer {
        self.terms.get(m).cloned().unwrap_or(Integer::ZERO)
    }

    pub fn leading_coefficient(&self) -> Option<&Integer> {
        self.terms.values().next_back()
    }

    pub fn add(&self, other: &HomogPoly) -> HomogPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> HomogPoly {
        HomogPoly {
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &HomogPoly) -> HomogPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Integer) -> HomogPoly {
        if *k == 0u32 {
            return HomogPoly::zero(self.nvars, self.degree);
        }
        HomogPoly {
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    /// Divides every coefficient exactly by `k`.
    pub fn div_exact(&self, k: &Integer) -> HomogPoly {
        use malachite_base::num::arithmetic::traits::DivExact;
        HomogPoly {
            nvars: self.nvars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.div_exact(k)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &HomogPoly) -> HomogPoly {
        let mut out = HomogPoly::zero(self.nvars, self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> HomogPoly {
        let mut result = HomogPoly::constant(self.nvars, Integer::ONE);
        for _ in 0..e {
            result = result.mul(self);
        }
        result
    }

    /// Partial derivative with respect to `Xi`.
    pub fn derivative(&self, i: usize) -> HomogPoly {
        let mut out = HomogPoly::zero(self.nvars, self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Monomial(exps), c * Integer::from(e));
        }
        out
    }

    /// Exact value at an integer point.
    pub fn eval(&self, x: &[Integer]) -> Integer {
        let powers = power_table(x, self.degree);
        self.eval_with_powers(&powers)
    }

    /// Evaluates using precomputed powers `powers[i][e] = x_i^e`.
    pub fn eval_with_powers(&self, powers: &[Vec<Integer>]) -> Integer {
        let mut acc = Integer::ZERO;
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            acc += t;
        }
        acc
    }

    /// Value modulo the prime `p` at a point of `F_p^(n+1)`.
    pub fn eval_mod(&self, x: &[u64], p: u64) -> u64 {
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = reduce_mod(c, p);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = modp::mul(t, modp::pow(x[i], e as u64, p), p);
                }
            }
            acc = modp::add(acc, t, p);
        }
        acc
    }

    /// Substitutes `Xi -> subs[i]`. All substituted forms share one degree
    /// `e`, so the result is homogeneous of degree `deg * e`.
    pub fn substitute(&self, subs: &[HomogPoly]) -> HomogPoly {
        assert_eq!(subs.len(), self.nvars);
        let inner_nvars = subs[0].nvars;
        let inner_degree = subs[0].degree;
        let powers: Vec<Vec<HomogPoly>> = subs
            .iter()
            .map(|s| {
                let mut v = vec![HomogPoly::constant(inner_nvars, Integer::ONE)];
                for e in 1..=self.degree {
                    v.push(v[e as usize - 1].mul(s));
                }
                v
            })
            .collect();
        let mut out = HomogPoly::zero(inner_nvars, self.degree * inner_degree);
        for (m, c) in &self.terms {
            let mut t = HomogPoly::constant(inner_nvars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&powers[i][e as usize]);
                }
            }
            if t.is_zero() {
                continue;
            }
            out = out.add(&t);
        }
        out
    }

    /// Integer content of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> malachite_nz::natural::Natural {
        let coeffs: Vec<Integer> = self.terms.values().cloned().collect();
        crate::rational::content(&coeffs)
    }
}

/// `x_i^e` for every coordinate and every `e <= max_exp`.
pub fn power_table(x: &[Integer], max_exp: u32) -> Vec<Vec<Integer>> {
    x.iter()
        .map(|xi| {
            let mut v = Vec::with_capacity(max_exp as usize + 1);
            v.push(Integer::ONE);
            for e in 1..=max_exp as usize {
                let next = &v[e - 1] * xi;
                v.push(next);
            }
            v
        })
        .collect()
}

/// Least nonnegative residue of `c` modulo `p`.
pub fn reduce_mod(c: &Integer, p: u64) -> u64 {
    let r = c.mod_op(Integer::from(p));
    u64::try_from(&r).expect("residue fits in u64")
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms().enumerate() {
            let negative = *c < 0u32;
            let abs = if negative { -c } else { c.clone() };
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("X{i}")
                    } else {
                        format!("X{i}^{e}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs == 1u32 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
