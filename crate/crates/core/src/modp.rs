//! Prime-field arithmetic for word-sized primes: random 62-bit primes,
//! determinants, and univariate polynomial gcds over `F_p`.

use rand::Rng;

#[inline]
pub fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue (Fermat).
pub fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow(a, p - 2, p)
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Uniformly drawn prime in `[2^61, 2^62)`.
pub fn random_prime<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    loop {
        let candidate = rng.random_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime(candidate) {
            return candidate;
        }
    }
}

/// Determinant of a square matrix over `F_p` by Gaussian elimination.
pub fn det(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mut result = 1u64;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if pivot != col {
            m.swap(pivot, col);
            result = sub(0, result, p);
        }
        let pv = m[col][col];
        result = mul(result, pv, p);
        let pinv = inv(pv, p);
        for r in col + 1..n {
            if m[r][col] == 0 {
                continue;
            }
            let factor = mul(m[r][col], pinv, p);
            for c in col..n {
                let t = mul(factor, m[col][c], p);
                m[r][c] = sub(m[r][c], t, p);
            }
        }
    }
    result
}

/// Drops trailing zero coefficients (coefficients are stored constant term
/// first).
pub fn trim(poly: &mut Vec<u64>) {
    while poly.last() == Some(&0) {
        poly.pop();
    }
}

/// Degree of a trimmed univariate polynomial; `None` for zero.
pub fn degree(poly: &[u64]) -> Option<usize> {
    poly.iter().rposition(|&c| c != 0)
}

/// Remainder of `a` modulo the nonzero polynomial `b`.
pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = inv(b[db], p);
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let factor = mul(r[dr], lead_inv, p);
        let shift = dr - db;
        for (i, &bc) in b[..=db].iter().enumerate() {
            let t = mul(factor, bc, p);
            r[i + shift] = sub(r[i + shift], t, p);
        }
        trim(&mut r);
    }
    r
}

/// Monic gcd of two univariate polynomials over `F_p` (zero if both are).
pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(d) = degree(&a) {
        let li = inv(a[d], p);
        for c in a.iter_mut() {
            *c = mul(*c, li, p);
        }
    }
    a
}

/// Coefficients of the unique polynomial of degree `< xs.len()` through the
/// points `(xs[i], ys[i])`.
pub fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let n = xs.len();
    let mut out = vec![0u64; n];
    for i in 0..n {
        // basis numerator prod_{j != i} (t - x_j)
        let mut basis = vec![1u64];
        let mut denom = 1u64;
        for j in 0..n {
            if j == i {
                continue;
            }
            let mut next = vec![0u64; basis.len() + 1];
            for (k, &c) in basis.iter().enumerate() {
                next[k + 1] = add(next[k + 1], c, p);
                next[k] = sub(next[k], mul(c, xs[j], p), p);
            }
            basis = next;
            denom = mul(denom, sub(xs[i], xs[j], p), p);
        }
        let scale = mul(ys[i], inv(denom, p), p);
        for (k, &c) in basis.iter().enumerate() {
            out[k] = add(out[k], mul(c, scale, p), p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    const P: u64 = 1_000_000_007;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(P));
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(561));
        assert!(!is_prime(3_215_031_751));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let p = random_prime(&mut rng);
        assert!((1 << 61..1 << 62).contains(&p) && is_prime(p));
    }

    #[test]
    fn determinant() {
        let m = vec![vec![2, 0, 0], vec![0, 3, 0], vec![1, 0, 5]];
        assert_eq!(det(m, P), 30);
        let m = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(det(m, P), P - 1);
        let m = vec![vec![1, 2], vec![2, 4]];
        assert_eq!(det(m, P), 0);
    }

    #[test]
    fn gcd_and_interpolation() {
        // (t-1)(t-2) and (t-1)(t-3)
        let a = vec![2, P - 3, 1];
        let b = vec![3, P - 4, 1];
        assert_eq!(gcd(&a, &b, P), vec![P - 1, 1]);
        let c = vec![5, 1];
        assert_eq!(gcd(&a, &c, P), vec![1]);
        let xs = [0, 1, 2];
        let ys: Vec<u64> = xs.iter().map(|&t| (t * t + 3 * t + 2) % P).collect();
        assert_eq!(interpolate(&xs, &ys, P), vec![2, 3, 1]);
    }
}
