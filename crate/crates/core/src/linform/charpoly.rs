//! Exact characteristic polynomials by multi-modular Hessenberg reduction.
//!
//! The rational matrix is scaled to an integer matrix `A = D·M`. The monic
//! polynomial `det(λ·Id − A)` has integer coefficients bounded through
//! Hadamard's inequality, so computing it modulo enough 62-bit primes and
//! recombining with the Chinese remainder theorem recovers it exactly.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{IntMatrix, Poly, RatMatrix, Rational};

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn reduce_mod(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

fn is_prime_u64(n: u64) -> bool {
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
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

static PRIMES: Mutex<Vec<u64>> = Mutex::new(Vec::new());

/// The first `k` primes below `2^62`, descending.
pub(crate) fn primes(k: usize) -> Vec<u64> {
    let mut cache = PRIMES.lock().expect("prime cache poisoned");
    let mut candidate = cache.last().map_or((1u64 << 62) - 1, |&p| p - 2);
    while cache.len() < k {
        if is_prime_u64(candidate) {
            cache.push(candidate);
        }
        candidate -= 2;
    }
    cache[..k].to_vec()
}

/// Coefficients (ascending) of `det(λ·Id − A) mod p`.
fn charpoly_mod(a: &[u64], n: usize, p: u64) -> Vec<u64> {
    let mut h = a.to_vec();
    let sub = |x: u64, y: u64| if x >= y { x - y } else { x + p - y };
    // Reduce to upper Hessenberg form by similarity transforms.
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = ((j + 1)..n).find(|&i| h[i * n + j] != 0) else {
            continue;
        };
        if piv != j + 1 {
            for k in 0..n {
                h.swap(piv * n + k, (j + 1) * n + k);
            }
            for k in 0..n {
                h.swap(k * n + piv, k * n + j + 1);
            }
        }
        let inv = inv_mod(h[(j + 1) * n + j], p);
        for i in (j + 2)..n {
            let u = mul_mod(h[i * n + j], inv, p);
            if u == 0 {
                continue;
            }
            for k in 0..n {
                let t = mul_mod(u, h[(j + 1) * n + k], p);
                h[i * n + k] = sub(h[i * n + k], t);
            }
            for k in 0..n {
                let t = mul_mod(u, h[k * n + i], p);
                h[k * n + j + 1] = (h[k * n + j + 1] + t) % p;
            }
        }
    }
    // p_{m+1} = (λ − h_mm) p_m − Σ_{i<m} h_im (h_{i+1,i} ⋯ h_{m,m−1}) p_i
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 0..n {
        let pm = &polys[m];
        let mut next = vec![0u64; m + 2];
        for (k, &c) in pm.iter().enumerate() {
            next[k + 1] = (next[k + 1] + c) % p;
            next[k] = sub(next[k], mul_mod(h[m * n + m], c, p));
        }
        let mut t = 1u64;
        for i in (0..m).rev() {
            t = mul_mod(t, h[(i + 1) * n + i], p);
            if t == 0 {
                break;
            }
            let f = mul_mod(h[i * n + m], t, p);
            if f == 0 {
                continue;
            }
            for (k, &c) in polys[i].iter().enumerate() {
                next[k] = sub(next[k], mul_mod(f, c, p));
            }
        }
        polys.push(next);
    }
    polys.pop().expect("n + 1 polynomials")
}

/// Coefficients (ascending, monic) of `det(λ·Id − A)` for an integer matrix.
pub fn char_poly_integer(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "square matrix required");
    if n == 0 {
        return vec![BigInt::one()];
    }
    let need_bits = a.charpoly_coeff_bits() + 2.0;
    let k = (need_bits / 61.0).ceil() as usize + 1;
    let ps = primes(k);
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    let mut modulus = BigInt::one();
    for &p in &ps {
        let res = charpoly_mod(&a.reduced(p), n, p);
        let m_mod = reduce_mod(&modulus, p);
        let m_inv = inv_mod(m_mod, p);
        for (c, &r) in acc.iter_mut().zip(&res) {
            // Garner step: c + modulus·t ≡ r (mod p).
            let cur = reduce_mod(c, p);
            let diff = if r >= cur { r - cur } else { r + p - cur };
            let t = mul_mod(diff, m_inv, p);
            *c += &modulus * BigInt::from(t);
        }
        modulus *= BigInt::from(p);
    }
    let half: BigInt = &modulus >> 1;
    for c in acc.iter_mut() {
        if *c > half {
            *c -= &modulus;
        }
    }
    acc
}

/// Exact `det(M − λ·Id)` of a rational matrix.
pub fn char_poly(m: &RatMatrix) -> Poly {
    let n = m.rows();
    let (a, d) = m.to_integer();
    let ints = char_poly_integer(&a);
    // det(λ − M) = D^{-n} det(Dλ − A): coefficient k is c_k / D^{n−k}.
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut dpow = BigInt::one();
    let mut scaled = vec![Rational::zero(); n + 1];
    for k in (0..=n).rev() {
        scaled[k] = Rational::new(ints[k].clone(), dpow.clone());
        dpow *= &d;
    }
    let sign_flip = n % 2 == 1;
    for c in scaled {
        coeffs.push(if sign_flip { -c } else { c });
    }
    Poly::from_coeffs(coeffs)
}

/// Integer roots (with multiplicity) of an integer polynomial inside
/// `[−bound, bound]`, plus the cofactor left after dividing them out.
/// The input is ascending and must have a unit leading coefficient.
pub fn integer_roots(coeffs: &[BigInt], bound: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut poly = coeffs.to_vec();
    let mut roots = Vec::new();
    let mut r = -bound.clone();
    while &r <= bound {
        loop {
            if poly.len() <= 1 {
                break;
            }
            // Synthetic division by (λ − r).
            let deg = poly.len() - 1;
            let mut quot = vec![BigInt::zero(); deg];
            let mut carry = BigInt::zero();
            for k in (0..=deg).rev() {
                let v = &poly[k] + &carry * &r;
                if k == 0 {
                    carry = v;
                } else {
                    quot[k - 1] = v.clone();
                    carry = v;
                }
            }
            if carry.is_zero() {
                roots.push(r.clone());
                poly = quot;
            } else {
                break;
            }
        }
        r += 1;
    }
    (roots, poly)
}
