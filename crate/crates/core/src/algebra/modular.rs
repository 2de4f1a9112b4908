//! Word-sized modular arithmetic and the multi-modular gcd over `Z[t]`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::int_poly::mod_u64;
use super::IntPolynomial;

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `a` must be nonzero mod `p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const PRIME_POOL: usize = 1024;

/// Primes just below 2^62, largest first.
pub(crate) fn large_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(PRIME_POOL);
        let mut n = (1u64 << 62) - 1;
        while out.len() < PRIME_POOL {
            if is_prime_u64(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

pub(crate) fn reduce(f: &IntPolynomial, p: u64) -> Vec<u64> {
    let mut v: Vec<u64> = f.coeffs().iter().map(|c| mod_u64(c, p)).collect();
    trim(&mut v);
    v
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn make_monic(v: &mut [u64], p: u64) {
    if let Some(&lc) = v.last() {
        let inv = inv_mod(lc, p);
        for c in v.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
}

/// `a mod b` in `F_p[t]`, `b` nonzero.
fn rem_mod(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let inv = inv_mod(*b.last().unwrap(), p);
    while a.len() > db {
        let top = mul_mod(*a.last().unwrap(), inv, p);
        let shift = a.len() - 1 - db;
        if top != 0 {
            for (i, &bc) in b.iter().enumerate() {
                a[shift + i] = sub_mod(a[shift + i], mul_mod(top, bc, p), p);
            }
        }
        a.pop();
        trim(&mut a);
    }
    a
}

/// Monic gcd in `F_p[t]`; the empty vector stands for zero.
pub(crate) fn gcd_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem_mod(a, &b, p);
        a = b;
        b = r;
    }
    make_monic(&mut a, p);
    a
}

fn symmetric(x: BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Combines `h ≡ acc (mod m)` with `h ≡ image (mod p)`; coefficients are kept
/// in the symmetric range modulo `m * p`.
fn crt_combine(acc: &[BigInt], m: &BigInt, image: &[u64], p: u64) -> Vec<BigInt> {
    let m_mod_p = mod_u64(m, p);
    let m_inv = inv_mod(m_mod_p, p);
    let mp = m * p;
    acc.iter()
        .zip(image)
        .map(|(a, &r)| {
            let a_mod = mod_u64(a, p);
            let k = mul_mod(sub_mod(r, a_mod, p), m_inv, p);
            symmetric(a + m * BigInt::from(k), &mp)
        })
        .collect()
}

/// Greatest common divisor in `Q[t]`, returned as a primitive integer
/// polynomial with positive leading coefficient (the constant `1` when the
/// inputs are coprime, zero only when both inputs are zero).
///
/// Multi-modular: images modulo primes near 2^62 that do not divide either
/// leading coefficient, recombined by CRT until the lift stabilizes and then
/// confirmed by exact division.
pub fn gcd(f: &IntPolynomial, g: &IntPolynomial) -> IntPolynomial {
    if f.is_zero() {
        return g.primitive_part();
    }
    if g.is_zero() {
        return f.primitive_part();
    }
    if f.is_constant() || g.is_constant() {
        return IntPolynomial::one();
    }
    let a = f.primitive_part();
    let b = g.primitive_part();
    let lc_a = a.leading_coefficient().unwrap().clone();
    let lc_b = b.leading_coefficient().unwrap().clone();
    let scale = lc_a.gcd(&lc_b);

    let mut best_deg = usize::MAX;
    let mut acc: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    for &p in large_primes() {
        if mod_u64(&lc_a, p) == 0 || mod_u64(&lc_b, p) == 0 {
            continue;
        }
        let mut h = gcd_mod(&reduce(&a, p), &reduce(&b, p), p);
        let deg = h.len() - 1;
        if deg == 0 {
            return IntPolynomial::one();
        }
        let s = mod_u64(&scale, p);
        for c in h.iter_mut() {
            *c = mul_mod(*c, s, p);
        }
        if deg > best_deg {
            continue;
        }
        if deg < best_deg {
            best_deg = deg;
            let pb = BigInt::from(p);
            acc = h.iter().map(|&c| symmetric(BigInt::from(c), &pb)).collect();
            modulus = pb;
            continue;
        }
        let next = crt_combine(&acc, &modulus, &h, p);
        modulus *= p;
        let stable = next == acc;
        acc = next;
        if stable {
            let cand = IntPolynomial::new(acc.clone()).primitive_part();
            if a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some() {
                return cand;
            }
        }
    }
    // Only reachable if every prime in the pool was unlucky.
    euclid_fallback(&a, &b)
}

/// Primitive Euclidean gcd; slow but independent of the prime pool.
pub(crate) fn euclid_fallback(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let mut a = a.primitive_part();
    let mut b = b.primitive_part();
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = a.pseudo_remainder(&b).expect("nonzero divisor");
        a = b;
        b = r.primitive_part();
    }
    if a.is_constant() {
        IntPolynomial::one()
    } else {
        a.primitive_part()
    }
}

/// True when `f` and `g` share no nonconstant factor.
pub fn coprime(f: &IntPolynomial, g: &IntPolynomial) -> bool {
    gcd(f, g).is_constant()
}
