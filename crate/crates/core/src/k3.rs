//! Wehler K3 surfaces `V = {L = Q = 0}` in `P^2 x P^2`, with `L` of bidegree
//! (1,1) and `Q` of bidegree (2,2).
//!
//! Both projections `V -> P^2` are generically 2-to-1, and swapping the two
//! sheets gives involutions `iota_1` (fixes `x`) and `iota_2` (fixes `y`).
//! The automorphism studied here is `phi = iota_1 ∘ iota_2`. Its action on
//! the span of `D1 = [H x P^2]` and `D2 = [P^2 x H]` has eigenvectors
//! `E+ = -D1 + alpha D2` (eigenvalue `alpha^2`) and `E- = alpha D1 - D2`
//! (eigenvalue `alpha^-2`) with `alpha = 2 + sqrt 3`.

use std::fmt::Write as _;

use malachite_base::num::arithmetic::traits::{DivExact, Lcm};
use malachite_base::num::basic::traits::{One, Zero};
use malachite_nz::integer::Integer;
use malachite_nz::natural::Natural;
use rand::Rng;

use crate::dynamics::{CanonicalHeight, Direction};
use crate::error::{Error, Result};
use crate::par::rng_for;
use crate::rational::{content, BigRat, ProjPoint};

/// `alpha = 2 + sqrt(3)`.
pub const ALPHA: f64 = 3.732_050_807_568_877;

/// Degree-2 monomials in three variables, in file/label order.
pub const QUAD_MONOMIALS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

/// Height growth required over the last step checked when accepting a
/// random surface.
const MIN_STEP_GROWTH: f64 = 8.0;

/// Default number of steps for K3 experiments.
pub const DEFAULT_K3_KMAX: usize = 4;

fn quad_values(v: &[Integer]) -> [Integer; 6] {
    QUAD_MONOMIALS.map(|(i, j)| &v[i] * &v[j])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WehlerSurface {
    l: [[Integer; 3]; 3],
    q: [[Integer; 6]; 6],
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurfacePoint {
    pub x: ProjPoint,
    pub y: ProjPoint,
}

/// Heights attached to the divisor classes `D1, D2, E+, E-`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct K3HeightVector {
    pub h_d1: f64,
    pub h_d2: f64,
    pub h_eplus: f64,
    pub h_eminus: f64,
}

impl K3HeightVector {
    pub fn of(p: &SurfacePoint) -> Self {
        let h_d1 = p.x.height().h;
        let h_d2 = p.y.height().h;
        K3HeightVector {
            h_d1,
            h_d2,
            h_eplus: -h_d1 + ALPHA * h_d2,
            h_eminus: ALPHA * h_d1 - h_d2,
        }
    }

    /// Height for `D = a E+ + b E-`.
    pub fn h_d(&self, a: f64, b: f64) -> f64 {
        a * self.h_eplus + b * self.h_eminus
    }

    pub fn get(&self, dir: Direction) -> f64 {
        match dir {
            Direction::Plus => self.h_eplus,
            Direction::Minus => self.h_eminus,
        }
    }
}

fn forms_content_one<const N: usize, const M: usize>(a: [[Integer; M]; N]) -> [[Integer; M]; N] {
    let flat: Vec<Integer> = a.iter().flatten().cloned().collect();
    let g = content(&flat);
    if g == 0u32 || g == 1u32 {
        return a;
    }
    let g = Integer::from(g);
    a.map(|row| row.map(|c| c.div_exact(&g)))
}

impl WehlerSurface {
    /// Builds a surface, dividing each form by its content.
    pub fn new(l: [[Integer; 3]; 3], q: [[Integer; 6]; 6]) -> Result<Self> {
        let l = forms_content_one(l);
        let q = forms_content_one(q);
        if l.iter().flatten().all(|c| *c == 0u32) || q.iter().flatten().all(|c| *c == 0u32) {
            return Err(Error::InvalidInput("both forms must be nonzero".into()));
        }
        Ok(WehlerSurface { l, q })
    }

    pub fn l(&self) -> &[[Integer; 3]; 3] {
        &self.l
    }

    pub fn q(&self) -> &[[Integer; 6]; 6] {
        &self.q
    }

    pub fn eval_l(&self, x: &[Integer], y: &[Integer]) -> Integer {
        let mut acc = Integer::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                if self.l[i][j] != 0u32 {
                    acc += &self.l[i][j] * &x[i] * &y[j];
                }
            }
        }
        acc
    }

    pub fn eval_q(&self, x: &[Integer], y: &[Integer]) -> Integer {
        let qx = quad_values(x);
        let qy = quad_values(y);
        let mut acc = Integer::ZERO;
        for m in 0..6 {
            for mp in 0..6 {
                if self.q[m][mp] != 0u32 {
                    acc += &self.q[m][mp] * &qx[m] * &qy[mp];
                }
            }
        }
        acc
    }

    pub fn contains(&self, x: &ProjPoint, y: &ProjPoint) -> bool {
        x.dim() == 2
            && y.dim() == 2
            && self.eval_l(x.coords(), y.coords()) == 0u32
            && self.eval_q(x.coords(), y.coords()) == 0u32
    }

    pub fn point(&self, x: ProjPoint, y: ProjPoint) -> Result<SurfacePoint> {
        if !self.contains(&x, &y) {
            return Err(Error::NotOnSurface);
        }
        Ok(SurfacePoint { x, y })
    }

    /// Linear and quadratic forms cut out by the fiber over a fixed `x`
    /// (index 1) or fixed `y` (index 2), as forms in the other factor.
    fn fiber_forms(&self, fixed: &[Integer], index: u8) -> ([Integer; 3], [Integer; 6]) {
        let mut ell: [Integer; 3] = Default::default();
        let mut quad: [Integer; 6] = Default::default();
        let fq = quad_values(fixed);
        for a in 0..3 {
            for b in 0..3 {
                let (i, j) = if index == 1 { (a, b) } else { (b, a) };
                if self.l[i][j] != 0u32 {
                    ell[b] += &self.l[i][j] * &fixed[a];
                }
            }
        }
        for a in 0..6 {
            for b in 0..6 {
                let (m, mp) = if index == 1 { (a, b) } else { (b, a) };
                if self.q[m][mp] != 0u32 {
                    quad[b] += &self.q[m][mp] * &fq[a];
                }
            }
        }
        (ell, quad)
    }

    /// `iota_1` (index 1, keeps `x`) or `iota_2` (index 2, keeps `y`).
    pub fn involution(&self, p: &SurfacePoint, index: u8) -> Result<SurfacePoint> {
        match index {
            1 => {
                let (ell, quad) = self.fiber_forms(p.x.coords(), 1);
                let y = swap_in_fiber(&ell, &quad, &p.y)?;
                Ok(SurfacePoint { x: p.x.clone(), y })
            }
            2 => {
                let (ell, quad) = self.fiber_forms(p.y.coords(), 2);
                let x = swap_in_fiber(&ell, &quad, &p.x)?;
                Ok(SurfacePoint { x, y: p.y.clone() })
            }
            _ => Err(Error::InvalidInput(format!("involution index must be 1 or 2, got {index}"))),
        }
    }

    /// `phi = iota_1 ∘ iota_2` (plus) or `phi^-1 = iota_2 ∘ iota_1` (minus).
    pub fn step(&self, p: &SurfacePoint, dir: Direction) -> Result<SurfacePoint> {
        match dir {
            Direction::Plus => self.involution(&self.involution(p, 2)?, 1),
            Direction::Minus => self.involution(&self.involution(p, 1)?, 2),
        }
    }

    /// Key-value text form; see [`parse_surface`].
    pub fn to_text(&self, point: Option<&SurfacePoint>) -> String {
        let mut s = String::from("# Wehler surface L = Q = 0 in P2 x P2\n");
        for i in 0..3 {
            for j in 0..3 {
                let _ = writeln!(s, "L[{i}][{j}] = {}", self.l[i][j]);
            }
        }
        for (m, &(a, b)) in QUAD_MONOMIALS.iter().enumerate() {
            for (mp, &(c, d)) in QUAD_MONOMIALS.iter().enumerate() {
                let _ = writeln!(s, "Q[x{a}x{b}][y{c}y{d}] = {}", self.q[m][mp]);
            }
        }
        if let Some(p) = point {
            let fmt = |v: &ProjPoint| {
                v.coords()
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let _ = writeln!(s, "x = {}", fmt(&p.x));
            let _ = writeln!(s, "y = {}", fmt(&p.y));
        }
        s
    }
}

/// Other root of `A s^2 + B s t + C t^2` given one root `(s0 : t0)`, over
/// the integers. A double root is returned unchanged.
fn other_root_int(
    a: &Integer,
    b: &Integer,
    c: &Integer,
    s0: &Integer,
    t0: &Integer,
) -> Result<(Integer, Integer)> {
    if *a == 0u32 && *b == 0u32 && *c == 0u32 {
        return Err(Error::DegenerateForm);
    }
    if *s0 == 0u32 && *t0 == 0u32 {
        return Err(Error::InvalidInput("(0 : 0) is not a projective point".into()));
    }
    if a * s0 * s0 + b * s0 * t0 + c * t0 * t0 != 0u32 {
        return Err(Error::NotARoot);
    }
    // Writing the form as (t0 s - s0 t)(alpha s + beta t), the other root is
    // (-beta : alpha).
    if *t0 != 0u32 {
        Ok((-(b * t0 + a * s0), a * t0))
    } else {
        Ok((c * s0, -(b * s0)))
    }
}

/// Conjugate root of a binary quadratic form with rational coefficients,
/// as a normalized point of `P^1`.
///
/// Conventions: if `A = 0` the form has a root at `(1 : 0)`, so a known
/// finite root maps to `(1 : 0)` and `(1 : 0)` maps to the root of
/// `B s + C t`; a double root maps to itself.
pub fn other_root_binary_quadratic(
    a: &BigRat,
    b: &BigRat,
    c: &BigRat,
    known: &ProjPoint,
) -> Result<ProjPoint> {
    if known.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: known.dim(),
        });
    }
    let den = [a, b, c]
        .iter()
        .fold(Natural::ONE, |acc, r| acc.lcm(r.denominator_ref()));
    let clear = |r: &BigRat| {
        Integer::from_sign_and_abs_ref(*r >= 0u32, r.numerator_ref())
            * Integer::from(&den).div_exact(Integer::from(r.denominator_ref()))
    };
    let (s0, t0) = (&known.coords()[0], &known.coords()[1]);
    let (s1, t1) = other_root_int(&clear(a), &clear(b), &clear(c), s0, t0)?;
    ProjPoint::from_integers(vec![s1, t1])
}

fn eval_quad(quad: &[Integer; 6], v: &[Integer; 3]) -> Integer {
    let qv = quad_values(v);
    let mut acc = Integer::ZERO;
    for m in 0..6 {
        if quad[m] != 0u32 {
            acc += &quad[m] * &qv[m];
        }
    }
    acc
}

/// Second intersection of the line `ell = 0` with the conic `quad = 0`,
/// given the first intersection `known`.
fn swap_in_fiber(ell: &[Integer; 3], quad: &[Integer; 6], known: &ProjPoint) -> Result<ProjPoint> {
    let Some(p) = (0..3).find(|&i| ell[i] != 0u32) else {
        return Err(Error::LinearFormVanishes);
    };
    let others: Vec<usize> = (0..3).filter(|&i| i != p).collect();
    let (qi, ri) = (others[0], others[1]);
    // kernel basis u = ell_p e_q - ell_q e_p, v = ell_p e_r - ell_r e_p
    let mut u: [Integer; 3] = Default::default();
    let mut v: [Integer; 3] = Default::default();
    u[qi] = ell[p].clone();
    u[p] = -&ell[qi];
    v[ri] = ell[p].clone();
    v[p] = -&ell[ri];
    let a = eval_quad(quad, &u);
    let c = eval_quad(quad, &v);
    let uv: [Integer; 3] = [&u[0] + &v[0], &u[1] + &v[1], &u[2] + &v[2]];
    let b = eval_quad(quad, &uv) - &a - &c;
    // known = s u + t v has components (s ell_p, t ell_p) at (q, r)
    let s0 = &known.coords()[qi];
    let t0 = &known.coords()[ri];
    let (s1, t1) = match other_root_int(&a, &b, &c, s0, t0) {
        Err(Error::DegenerateForm) => return Err(Error::DegenerateFiber),
        Err(Error::NotARoot) => return Err(Error::NotOnSurface),
        other => other?,
    };
    let g = content(&[s1.clone(), t1.clone()]);
    let (s1, t1) = if g == 1u32 {
        (s1, t1)
    } else {
        let g = Integer::from(g);
        (s1.div_exact(&g), t1.div_exact(&g))
    };
    let coords = (0..3).map(|i| &s1 * &u[i] + &t1 * &v[i]).collect();
    ProjPoint::from_integers(coords)
}

#[derive(Clone, Debug, PartialEq)]
pub struct WehlerStep {
    pub k: usize,
    pub point: SurfacePoint,
    pub heights: K3HeightVector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WehlerOrbit {
    pub direction: Direction,
    pub steps: Vec<WehlerStep>,
    /// True when iteration stopped early at the coordinate-width cap.
    pub overflow: bool,
}

impl SurfacePoint {
    pub fn max_bits(&self) -> u64 {
        self.x.max_bits().max(self.y.max_bits())
    }
}

/// Orbit `P, phi^s P, ..., phi^m P` (`s` the sign of `m`), with heights at
/// every step. Stops early, flagging `overflow`, before a coordinate would
/// exceed `max_bits` bits.
pub fn wehler_iterate(
    v: &WehlerSurface,
    p: &SurfacePoint,
    m: i64,
    max_bits: u64,
) -> Result<WehlerOrbit> {
    let direction = if m >= 0 { Direction::Plus } else { Direction::Minus };
    let mut steps = vec![WehlerStep {
        k: 0,
        point: p.clone(),
        heights: K3HeightVector::of(p),
    }];
    let mut overflow = false;
    for k in 1..=m.unsigned_abs() as usize {
        let next = v.step(&steps[k - 1].point, direction)?;
        if next.max_bits() > max_bits {
            overflow = true;
            break;
        }
        steps.push(WehlerStep {
            k,
            heights: K3HeightVector::of(&next),
            point: next,
        });
    }
    Ok(WehlerOrbit {
        direction,
        steps,
        overflow,
    })
}

/// `lim h_{E+}(phi^k P) / alpha^(2k)` (plus) or
/// `lim h_{E-}(phi^-k P) / alpha^(2k)` (minus). A periodic orbit has
/// canonical height 0.
pub fn k3_canonical_height(
    v: &WehlerSurface,
    p: &SurfacePoint,
    dir: Direction,
    kmax: usize,
    tol: f64,
    max_bits: u64,
) -> Result<CanonicalHeight> {
    if kmax < 1 {
        return Err(Error::InvalidInput("kmax must be at least 1".into()));
    }
    let scale_step = ALPHA * ALPHA;
    let mut point = p.clone();
    let mut prev = K3HeightVector::of(p).get(dir);
    let mut scale = 1.0;
    for k in 1..=kmax {
        let next = v.step(&point, dir)?;
        if next == *p {
            return Ok(CanonicalHeight {
                value: 0.0,
                k,
                converged: true,
                overflow: false,
            });
        }
        if next.max_bits() > max_bits {
            if k == 1 {
                return Err(Error::HeightOverflow { max_bits });
            }
            return Ok(CanonicalHeight {
                value: prev,
                k: k - 1,
                converged: false,
                overflow: true,
            });
        }
        scale *= scale_step;
        let est = K3HeightVector::of(&next).get(dir) / scale;
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

/// Ratios `h_D(phi^n Q_k) / h_D(Q_k)` along `Q_k = phi^-k P`, `k = 0..=kmax`,
/// for `D = a E+ + b E-`. Rows where `h_D(Q_k) <= 0` are skipped.
pub fn k3_mu_experiment(
    v: &WehlerSurface,
    p: &SurfacePoint,
    power: usize,
    kmax: usize,
    a: f64,
    b: f64,
    max_bits: u64,
) -> Result<Vec<(usize, f64)>> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidInput(
            "D = a E+ + b E- is ample only for a > 0 and b > 0".into(),
        ));
    }
    let backward = wehler_iterate(v, p, -(kmax as i64), max_bits)?;
    if backward.overflow {
        return Err(Error::HeightOverflow { max_bits });
    }
    let mut rows = Vec::with_capacity(kmax + 1);
    for (k, step) in backward.steps.iter().enumerate() {
        let mut image = step.point.clone();
        for _ in 0..power {
            image = v.step(&image, Direction::Plus)?;
        }
        if k >= power {
            assert_eq!(image, backward.steps[k - power].point, "phi ∘ phi^-1 != id");
        }
        let denom = step.heights.h_d(a, b);
        if denom <= 0.0 {
            continue;
        }
        rows.push((k, K3HeightVector::of(&image).h_d(a, b) / denom));
    }
    Ok(rows)
}

/// Draws a random surface through `base`: coefficients uniform in
/// `[-coeff_bound, coeff_bound]`, then one coefficient of each form is
/// corrected so the form vanishes at `base`. Surfaces whose first few orbit
/// steps hit a degenerate fiber, return to `base`, or fail to grow in height
/// are rejected.
pub fn random_surface_through_point(
    base: (&ProjPoint, &ProjPoint),
    coeff_bound: u64,
    seed: u64,
) -> Result<(WehlerSurface, SurfacePoint)> {
    const ATTEMPTS: usize = 500;
    const CHECK_STEPS: i64 = 3;
    if coeff_bound == 0 {
        return Err(Error::InvalidInput("coefficient bound must be at least 1".into()));
    }
    let (x, y) = base;
    if x.dim() != 2 || y.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: if x.dim() != 2 { x.dim() } else { y.dim() },
        });
    }
    let b = coeff_bound as i64;
    let xv = x.coords();
    let yv = y.coords();
    let xq = quad_values(xv);
    let yq = quad_values(yv);
    for attempt in 0..ATTEMPTS {
        let mut rng = rng_for(seed, &[attempt as u64]);
        let mut l: [[Integer; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| Integer::from(rng.random_range(-b..=b))));
        let mut q: [[Integer; 6]; 6] =
            std::array::from_fn(|_| std::array::from_fn(|_| Integer::from(rng.random_range(-b..=b))));
        correct_form(&mut l, |i, j| &xv[i] * &yv[j]);
        correct_form(&mut q, |m, mp| &xq[m] * &yq[mp]);
        let Ok(v) = WehlerSurface::new(l, q) else { continue };
        let p = v.point(x.clone(), y.clone()).expect("corrected forms vanish at base");
        if acceptable(&v, &p, CHECK_STEPS) {
            return Ok((v, p));
        }
    }
    Err(Error::SearchExhausted { attempts: ATTEMPTS })
}

/// Surface shipped with the experiments: the seed-0 draw through
/// `([1:0:0], [1:0:0])` with coefficients in `[-3, 3]`.
pub fn default_surface() -> (WehlerSurface, SurfacePoint) {
    let e0 = ProjPoint::from_i64s(&[1, 0, 0]).expect("valid point");
    random_surface_through_point((&e0, &e0), 3, 0).expect("seed 0 yields a surface")
}

/// First orbit point `phi^k P`, `k = 0..=steps`, where the involutions
/// fail to commute, with both compositions evaluated there.
pub fn noncommutativity_witness(
    v: &WehlerSurface,
    p: &SurfacePoint,
    steps: usize,
) -> Result<Option<(usize, SurfacePoint, SurfacePoint)>> {
    let mut point = p.clone();
    for k in 0..=steps {
        let a = v.involution(&v.involution(&point, 2)?, 1)?;
        let b = v.involution(&v.involution(&point, 1)?, 2)?;
        if a != b {
            return Ok(Some((k, a, b)));
        }
        point = a;
    }
    Ok(None)
}

/// Makes `sum c_ij w(i,j)` vanish by scaling every coefficient by the pivot
/// weight and solving for the pivot coefficient (keeps integrality).
fn correct_form<const N: usize, const M: usize>(
    coeffs: &mut [[Integer; M]; N],
    weight: impl Fn(usize, usize) -> Integer,
) {
    let pivot = (0..N)
        .flat_map(|i| (0..M).map(move |j| (i, j)))
        .find(|&(i, j)| weight(i, j) != 0u32)
        .expect("a point has a nonzero monomial");
    let w = weight(pivot.0, pivot.1);
    let mut rest = Integer::ZERO;
    for i in 0..N {
        for j in 0..M {
            if (i, j) == pivot {
                continue;
            }
            let wij = weight(i, j);
            if wij != 0u32 {
                rest += &coeffs[i][j] * wij;
            }
            if w != 1u32 {
                coeffs[i][j] *= &w;
            }
        }
    }
    coeffs[pivot.0][pivot.1] = -rest;
}

fn acceptable(v: &WehlerSurface, p: &SurfacePoint, steps: i64) -> bool {
    let Ok(i1) = v.involution(p, 1) else { return false };
    let Ok(i2) = v.involution(p, 2) else { return false };
    if i1 == *p || i2 == *p {
        return false;
    }
    for m in [steps, -steps] {
        let Ok(orbit) = wehler_iterate(v, p, m, 1 << 20) else {
            return false;
        };
        if orbit.overflow || orbit.steps[1..].iter().any(|s| s.point == *p) {
            return false;
        }
        // the last step should already show the eventual growth rate alpha^2
        let h: Vec<f64> = orbit.steps.iter().map(|s| s.heights.h_d1 + s.heights.h_d2).collect();
        let n = h.len();
        if h[n - 2] <= 0.0 || h[n - 1] < MIN_STEP_GROWTH * h[n - 2] {
            return false;
        }
    }
    true
}

fn parse_index_label(label: &str, var: char) -> Option<usize> {
    let b = label.as_bytes();
    if b.len() != 4 || b[0] as char != var || b[2] as char != var {
        return None;
    }
    let i = (b[1] as char).to_digit(10)? as usize;
    let j = (b[3] as char).to_digit(10)? as usize;
    QUAD_MONOMIALS.iter().position(|&m| m == (i.min(j), i.max(j)))
}

/// Parses the key-value surface format written by
/// [`WehlerSurface::to_text`]: `L[i][j] = k` for `i, j` in `0..3`,
/// `Q[xaxb][ycyd] = k` over the six degree-2 monomial labels, and
/// optionally `x = a b c` / `y = a b c`. Missing coefficients are zero;
/// `#` starts a comment.
pub fn parse_surface(text: &str) -> Result<(WehlerSurface, Option<SurfacePoint>)> {
    let mut l: [[Integer; 3]; 3] = Default::default();
    let mut q: [[Integer; 6]; 6] = Default::default();
    let mut x = None;
    let mut y = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::InvalidInput(format!("line {}: {msg}", lineno + 1));
        let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
        let key: String = key.chars().filter(|c| !c.is_whitespace()).collect();
        let value = value.trim();
        let parse_int =
            |s: &str| s.parse::<Integer>().map_err(|_| bad(&format!("bad integer '{s}'")));
        if key == "x" || key == "y" {
            let coords = value
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(parse_int)
                .collect::<Result<Vec<_>>>()?;
            if coords.len() != 3 {
                return Err(bad("a point in P2 needs 3 coordinates"));
            }
            let pt = ProjPoint::from_integers(coords)?;
            if key == "x" {
                x = Some(pt);
            } else {
                y = Some(pt);
            }
            continue;
        }
        let inner = key
            .strip_prefix("L[")
            .map(|s| ('L', s))
            .or_else(|| key.strip_prefix("Q[").map(|s| ('Q', s)))
            .ok_or_else(|| bad(&format!("unknown key '{key}'")))?;
        let parts: Vec<&str> = inner
            .1
            .strip_suffix(']')
            .ok_or_else(|| bad("missing ']'"))?
            .split("][")
            .collect();
        if parts.len() != 2 {
            return Err(bad("expected two indices"));
        }
        let val = parse_int(value)?;
        match inner.0 {
            'L' => {
                let i: usize = parts[0].parse().map_err(|_| bad("bad index"))?;
                let j: usize = parts[1].parse().map_err(|_| bad("bad index"))?;
                if i > 2 || j > 2 {
                    return Err(bad("L index out of range"));
                }
                l[i][j] = val;
            }
            _ => {
                let m = parse_index_label(parts[0], 'x').ok_or_else(|| bad("bad x label"))?;
                let mp = parse_index_label(parts[1], 'y').ok_or_else(|| bad("bad y label"))?;
                q[m][mp] = val;
            }
        }
    }
    let v = WehlerSurface::new(l, q)?;
    let point = match (x, y) {
        (Some(x), Some(y)) => Some(v.point(x, y)?),
        (None, None) => None,
        _ => return Err(Error::InvalidInput("a point needs both x and y".into())),
    };
    Ok((v, point))
}
