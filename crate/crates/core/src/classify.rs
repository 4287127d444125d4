//! Membership of a map in the parameter spaces of rational maps (no common
//! factor), dominant maps (Jacobian not identically zero), and morphisms
//! (Macaulay resultant nonzero).
//!
//! Every test works modulo random 62-bit primes, so certainty is one-sided:
//! a nonzero residue certifies a nonzero integer, while a run of zero
//! residues only makes vanishing likely. Certified answers always carry a
//! witness that [`verify_witness`] re-checks by an independent exact route.

use malachite_nz::integer::Integer;
use rand::Rng;

use crate::error::{Error, Result};
use crate::map::{integer_det, RationalMap, MAX_EXACT_JACOBIAN_DIM};
use crate::modp;
use crate::par::rng_for;
use crate::poly::{reduce_mod, HomogPoly, Monomial};

/// Largest Macaulay matrix (number of degree-ν monomials) we build.
pub const MAX_MACAULAY_SIZE: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    CertifiedYes,
    CertifiedNo,
    ProbablyYes { confidence: f64 },
    ProbablyNo { confidence: f64 },
}

impl Status {
    pub fn is_certified(&self) -> bool {
        matches!(self, Status::CertifiedYes | Status::CertifiedNo)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::CertifiedYes => "CertifiedYes",
            Status::CertifiedNo => "CertifiedNo",
            Status::ProbablyYes { .. } => "ProbablyYes",
            Status::ProbablyNo { .. } => "ProbablyNo",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// `J_phi(point) != 0 (mod prime)`.
    JacobianModP { point: Vec<u64>, prime: u64 },
    /// `J_phi(point) != 0` over the integers.
    JacobianInteger { point: Vec<Integer> },
    /// The symbolic Jacobian determinant is the zero polynomial.
    JacobianIdenticallyZero,
    /// Restricted to `t -> base + t*direction` over `F_prime`, every nonzero
    /// coordinate keeps full degree and their gcd is constant.
    CoprimeLine {
        base: Vec<u64>,
        direction: Vec<u64>,
        prime: u64,
    },
    /// The Macaulay matrix has nonzero determinant modulo `prime`.
    MacaulayModP { prime: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationVerdict {
    pub status: Status,
    pub witness: Option<Witness>,
}

impl ClassificationVerdict {
    fn certified_yes(w: Witness) -> Self {
        ClassificationVerdict {
            status: Status::CertifiedYes,
            witness: Some(w),
        }
    }
}

fn random_point<R: Rng>(rng: &mut R, len: usize, p: u64) -> Vec<u64> {
    (0..len).map(|_| rng.random_range(0..p)).collect()
}

/// Dominance: is `J_phi` nonzero as a polynomial?
///
/// Each trial evaluates the Jacobian determinant at a fresh random point
/// modulo a fresh random prime. If every trial vanishes and `n <= 4`, the
/// symbolic determinant decides the question exactly.
pub fn dominance_test(phi: &RationalMap, trials: usize, seed: u64) -> ClassificationVerdict {
    let trials = trials.max(1);
    let mut smallest_prime = u64::MAX;
    for t in 0..trials {
        let mut rng = rng_for(seed, &[t as u64]);
        let p = modp::random_prime(&mut rng);
        smallest_prime = smallest_prime.min(p);
        let x = random_point(&mut rng, phi.n() + 1, p);
        if modp::det(phi.jacobian_mod(&x, p), p) != 0 {
            return ClassificationVerdict::certified_yes(Witness::JacobianModP { point: x, prime: p });
        }
    }
    if phi.n() <= MAX_EXACT_JACOBIAN_DIM {
        return dominance_exact(phi).expect("dimension checked");
    }
    let jdeg = (phi.n() as f64 + 1.0) * (phi.degree() as f64 - 1.0);
    ClassificationVerdict {
        status: Status::ProbablyNo {
            confidence: 1.0 - (jdeg / smallest_prime as f64).powi(trials as i32),
        },
        witness: None,
    }
}

/// Exact dominance decision through the symbolic Jacobian (`n <= 4`).
pub fn dominance_exact(phi: &RationalMap) -> Result<ClassificationVerdict> {
    let j = phi.jacobian_det()?;
    if j.is_zero() {
        return Ok(ClassificationVerdict {
            status: Status::CertifiedNo,
            witness: Some(Witness::JacobianIdenticallyZero),
        });
    }
    // A nonzero form of degree D cannot vanish on all of {0..D}^(n+1).
    let point = nonzero_grid_point(&j).expect("nonzero form has a nonvanishing grid point");
    Ok(ClassificationVerdict::certified_yes(Witness::JacobianInteger { point }))
}

fn nonzero_grid_point(f: &HomogPoly) -> Option<Vec<Integer>> {
    let nvars = f.nvars();
    let side = f.degree() as u64 + 1;
    let mut idx = vec![0u64; nvars];
    loop {
        let x: Vec<Integer> = idx.iter().map(|&v| Integer::from(v)).collect();
        if f.eval(&x) != 0u32 {
            return Some(x);
        }
        let mut k = 0;
        loop {
            if k == nvars {
                return None;
            }
            idx[k] += 1;
            if idx[k] < side {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Restriction of each nonzero coordinate to the line `base + t*direction`
/// over `F_p`, computed by interpolation through `d+1` values.
fn restrict_by_interpolation(phi: &RationalMap, base: &[u64], dir: &[u64], p: u64) -> Vec<Vec<u64>> {
    let d = phi.degree() as u64;
    let ts: Vec<u64> = (0..=d).collect();
    phi.coords()
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| {
            let ys: Vec<u64> = ts
                .iter()
                .map(|&t| {
                    let x: Vec<u64> = base
                        .iter()
                        .zip(dir)
                        .map(|(&b, &q)| modp::add(b, modp::mul(t, q, p), p))
                        .collect();
                    c.eval_mod(&x, p)
                })
                .collect();
            modp::interpolate(&ts, &ys, p)
        })
        .collect()
}

/// Same restriction by exact symbolic substitution over the integers,
/// reduced modulo `p` at the end.
fn restrict_by_substitution(phi: &RationalMap, base: &[u64], dir: &[u64], p: u64) -> Vec<Vec<u64>> {
    // X_j -> base_j * S + dir_j * T, then read off coefficients of S^(d-k) T^k.
    let subs: Vec<HomogPoly> = base
        .iter()
        .zip(dir)
        .map(|(&b, &q)| {
            let mut f = HomogPoly::zero(2, 1);
            f.add_term(Monomial::new(vec![1, 0]), Integer::from(b));
            f.add_term(Monomial::new(vec![0, 1]), Integer::from(q));
            f
        })
        .collect();
    let d = phi.degree();
    phi.coords()
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| {
            let binary = c.substitute(&subs);
            (0..=d)
                .map(|k| reduce_mod(&binary.coefficient(&Monomial::new(vec![d - k, k])), p))
                .collect()
        })
        .collect()
}

/// Outcome of one line restriction.
enum LineTrial {
    Coprime,
    CommonFactor,
    Inconclusive,
}

fn line_trial(restrictions: &[Vec<u64>], d: u32, p: u64) -> LineTrial {
    if restrictions
        .iter()
        .any(|r| modp::degree(r) != Some(d as usize))
    {
        return LineTrial::Inconclusive;
    }
    let g = restrictions
        .iter()
        .skip(1)
        .fold(restrictions[0].clone(), |g, r| modp::gcd(&g, r, p));
    if modp::degree(&g) == Some(0) {
        LineTrial::Coprime
    } else {
        LineTrial::CommonFactor
    }
}

/// Is the map in `Rat`, i.e. do its coordinates share no nonconstant
/// factor? Certified through a line on which the restrictions keep full
/// degree and are coprime.
pub fn common_factor_test(phi: &RationalMap, trials: usize, seed: u64) -> ClassificationVerdict {
    let trials = trials.max(1);
    let mut nontrivial = 0;
    for t in 0..trials {
        let mut rng = rng_for(seed, &[t as u64]);
        let p = modp::random_prime(&mut rng);
        let base = random_point(&mut rng, phi.n() + 1, p);
        let direction = random_point(&mut rng, phi.n() + 1, p);
        let restrictions = restrict_by_interpolation(phi, &base, &direction, p);
        match line_trial(&restrictions, phi.degree(), p) {
            LineTrial::Coprime => {
                return ClassificationVerdict::certified_yes(Witness::CoprimeLine {
                    base,
                    direction,
                    prime: p,
                })
            }
            LineTrial::CommonFactor => nontrivial += 1,
            LineTrial::Inconclusive => {}
        }
    }
    ClassificationVerdict {
        status: Status::ProbablyNo {
            confidence: 1.0 - 0.5f64.powi(nontrivial),
        },
        witness: None,
    }
}

/// Macaulay matrix of the coordinates at degree `ν = (n+1)(d-1)+1`, with
/// the index set of the extraneous minor.
pub struct MacaulayMatrix {
    pub monomials: Vec<Monomial>,
    pub rows: Vec<Vec<Integer>>,
    /// Indices of monomials divisible by `X_i^d` for at least two `i`.
    pub minor: Vec<usize>,
}

pub fn macaulay_matrix(phi: &RationalMap) -> Result<MacaulayMatrix> {
    let nvars = phi.n() + 1;
    let d = phi.degree();
    let nu = nvars as u32 * (d - 1) + 1;
    let size = crate::map::binomial(nu as u64 + phi.n() as u64, phi.n() as u64);
    if size > MAX_MACAULAY_SIZE as u64 {
        return Err(Error::DimensionTooLarge(format!(
            "Macaulay matrix would have {size} rows (limit {MAX_MACAULAY_SIZE})"
        )));
    }
    let monomials = Monomial::all_of_degree(nvars, nu);
    let index: std::collections::HashMap<&Monomial, usize> =
        monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::with_capacity(monomials.len());
    let mut minor = Vec::new();
    for (r, m) in monomials.iter().enumerate() {
        let big: Vec<usize> = (0..nvars).filter(|&i| m.exponents()[i] >= d).collect();
        if big.len() >= 2 {
            minor.push(r);
        }
        let i = big[0];
        let mut pow = vec![0u32; nvars];
        pow[i] = d;
        let shift = m.div(&Monomial::new(pow)).expect("divisible");
        let mut row = vec![Integer::from(0); monomials.len()];
        for (mono, c) in phi.coords()[i].terms() {
            row[index[&shift.mul(mono)]] = c.clone();
        }
        rows.push(row);
    }
    Ok(MacaulayMatrix {
        monomials,
        rows,
        minor,
    })
}

impl MacaulayMatrix {
    fn det_mod(&self, p: u64) -> u64 {
        modp::det(
            self.rows
                .iter()
                .map(|r| r.iter().map(|c| reduce_mod(c, p)).collect())
                .collect(),
            p,
        )
    }

    fn minor_det_mod(&self, p: u64) -> u64 {
        let m = self
            .minor
            .iter()
            .map(|&r| self.minor.iter().map(|&c| reduce_mod(&self.rows[r][c], p)).collect())
            .collect();
        modp::det(m, p)
    }

    /// Resultant modulo `p`, or `None` when the extraneous minor vanishes
    /// there (unlucky prime).
    pub fn resultant_mod(&self, p: u64) -> Option<u64> {
        let minor = self.minor_det_mod(p);
        if minor == 0 {
            return None;
        }
        Some(modp::mul(self.det_mod(p), modp::inv(minor, p), p))
    }
}

/// Is the map a morphism (no common zero of the coordinates)? Decided by
/// the Macaulay resultant modulo random primes.
pub fn morphism_test(phi: &RationalMap, prime_count: usize, seed: u64) -> Result<ClassificationVerdict> {
    let mm = macaulay_matrix(phi)?;
    let prime_count = prime_count.max(1);
    let budget = 4 * prime_count + 8;
    let mut lucky = 0;
    for attempt in 0..budget {
        if lucky == prime_count {
            break;
        }
        let mut rng = rng_for(seed, &[attempt as u64]);
        let p = modp::random_prime(&mut rng);
        if mm.det_mod(p) != 0 {
            // det M = Res * minor, so Res != 0 over the integers.
            return Ok(ClassificationVerdict::certified_yes(Witness::MacaulayModP { prime: p }));
        }
        if mm.minor_det_mod(p) != 0 {
            lucky += 1;
        }
    }
    if lucky == 0 {
        return Err(Error::UnluckyPrimeExhaustion);
    }
    Ok(ClassificationVerdict {
        status: Status::ProbablyNo {
            confidence: 1.0 - 0.5f64.powi(lucky as i32),
        },
        witness: None,
    })
}

/// Re-checks a certified verdict's witness by an independent exact route.
/// Uncertified verdicts verify trivially.
pub fn verify_witness(phi: &RationalMap, verdict: &ClassificationVerdict) -> bool {
    if !verdict.status.is_certified() {
        return true;
    }
    let Some(w) = &verdict.witness else {
        return false;
    };
    match (w, &verdict.status) {
        (Witness::JacobianModP { point, prime }, Status::CertifiedYes) => {
            let x: Vec<Integer> = point.iter().map(|&v| Integer::from(v)).collect();
            reduce_mod(&integer_det(&phi.jacobian_at(&x)), *prime) != 0
        }
        (Witness::JacobianInteger { point }, Status::CertifiedYes) => {
            integer_det(&phi.jacobian_at(point)) != 0u32
        }
        (Witness::JacobianIdenticallyZero, Status::CertifiedNo) => {
            phi.jacobian_det().is_ok_and(|j| j.is_zero())
        }
        (Witness::CoprimeLine { base, direction, prime }, Status::CertifiedYes) => {
            let r = restrict_by_substitution(phi, base, direction, *prime);
            matches!(line_trial(&r, phi.degree(), *prime), LineTrial::Coprime)
        }
        (Witness::MacaulayModP { prime }, Status::CertifiedYes) => match macaulay_matrix(phi) {
            Ok(mm) => reduce_mod(&integer_det(&mm.rows), *prime) != 0,
            Err(_) => false,
        },
        _ => false,
    }
}
