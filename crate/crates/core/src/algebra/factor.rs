//! Integer factoring: trial division, Miller-Rabin, then Pollard-Brent rho
//! under an iteration budget. Running out of budget yields a partial result.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorBudget {
    /// Trial division covers every prime up to this bound (capped at 10^6).
    pub trial_bound: u64,
    /// Total rho iterations across all splitting attempts.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: TRIAL_LIMIT,
            rho_iterations: 2_000_000,
        }
    }
}

/// `n = (-1)^negative * prod p^e * unfactored`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub negative: bool,
    /// Primes in increasing order with positive exponents.
    pub factors: Vec<(BigUint, u32)>,
    /// Composite cofactor left over when the budget ran out.
    pub unfactored: Option<BigUint>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_none()
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }

    /// `|n|` recomputed from the pieces.
    pub fn product(&self) -> BigUint {
        let mut acc = self.unfactored.clone().unwrap_or_else(BigUint::one);
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        acc
    }
}

const TRIAL_LIMIT: u64 = 1_000_000;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut composite = vec![false; n + 1];
        let mut out = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

const MR_BASES: [u32; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Miller-Rabin with the first twenty prime bases: exact below 3.3e24 and a
/// probable-prime test above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return super::modular::is_prime_u64(small);
    }
    for &b in &MR_BASES {
        if (n % b).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for &b in &MR_BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// One Pollard-Brent attempt with increment `c`; returns a proper factor or
/// `None`, charging iterations against `budget`.
fn brent(n: &BigUint, c: u64, budget: &mut u64) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(2u32);
    let mut r: u64 = 1;
    let mut q = BigUint::one();
    let mut x;
    let mut ys;
    loop {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r {
            ys = y.clone();
            let steps = BATCH.min(r - k);
            for _ in 0..steps {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            *budget = budget.saturating_sub(steps);
            let g = q.gcd(n);
            if !g.is_one() {
                if &g != n {
                    return Some(g);
                }
                // Batch overshot: replay one step at a time.
                loop {
                    ys = f(&ys);
                    let diff = if x > ys { &x - &ys } else { &ys - &x };
                    let g = diff.gcd(n);
                    if !g.is_one() {
                        return (&g != n).then_some(g);
                    }
                }
            }
            k += steps;
            if *budget == 0 {
                return None;
            }
        }
        r *= 2;
    }
}

/// Splits a composite into prime powers, pushing primes to `out` and
/// unsplittable cofactors to `rest`.
fn split(n: BigUint, budget: &mut u64, out: &mut Vec<BigUint>, rest: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    let root = n.sqrt();
    if &root * &root == n {
        split(root.clone(), budget, out, rest);
        split(root, budget, out, rest);
        return;
    }
    let mut c = 1u64;
    while *budget > 0 {
        if let Some(d) = brent(&n, c, budget) {
            let other = &n / &d;
            split(d, budget, out, rest);
            split(other, budget, out, rest);
            return;
        }
        c += 1;
    }
    rest.push(n);
}

/// Factors a nonzero integer within the given budget.
pub fn factor_integer(n: &BigInt, budget: &FactorBudget) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("cannot factor zero".into()));
    }
    let negative = n.is_negative();
    let mut m = n.magnitude().clone();
    let mut primes: Vec<BigUint> = Vec::new();
    let bound = budget.trial_bound.min(TRIAL_LIMIT);
    for &p in small_primes() {
        if p as u64 > bound {
            break;
        }
        let pp = BigUint::from(p);
        if &pp * &pp > m {
            break;
        }
        while (&m % p).is_zero() {
            m /= p;
            primes.push(pp.clone());
        }
    }
    let mut rest = Vec::new();
    if !m.is_one() {
        let trial_done = BigUint::from(bound) * BigUint::from(bound);
        if m < trial_done || is_probable_prime(&m) {
            primes.push(m);
        } else {
            let mut iters = budget.rho_iterations;
            split(m, &mut iters, &mut primes, &mut rest);
        }
    }
    primes.sort();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    let unfactored = (!rest.is_empty()).then(|| rest.into_iter().product());
    Ok(Factorization {
        negative,
        factors,
        unfactored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fac(n: i64) -> Vec<(u64, u32)> {
        let f = factor_integer(&BigInt::from(n), &FactorBudget::default()).unwrap();
        assert!(f.is_complete());
        f.factors
            .iter()
            .map(|(p, e)| (p.to_u64().unwrap(), *e))
            .collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(fac(26), vec![(2, 1), (13, 1)]);
        assert_eq!(fac(677), vec![(677, 1)]);
        let f = factor_integer(&BigInt::from(-5), &FactorBudget::default()).unwrap();
        assert!(f.negative);
        assert_eq!(f.factors, vec![(BigUint::from(5u32), 1)]);
        assert!(fac(1).is_empty());
        assert!(factor_integer(&BigInt::zero(), &FactorBudget::default()).is_err());
    }

    #[test]
    fn rho_splits_semiprime() {
        // two primes above the trial bound
        let p: BigUint = "1000000007".parse().unwrap();
        let q: BigUint = "998244353".parse().unwrap();
        let n = BigInt::from(&p * &q * &p);
        let f = factor_integer(&n, &FactorBudget::default()).unwrap();
        assert!(f.is_complete());
        assert_eq!(f.exponent_of(&p), 2);
        assert_eq!(f.exponent_of(&q), 1);
    }

    #[test]
    fn orbit_value_of_x2_plus_1() {
        // gamma_8(0) for x^2 + 1
        let n: BigInt = "44127887745906175987802".parse().unwrap();
        let f = factor_integer(&n, &FactorBudget::default()).unwrap();
        assert!(f.is_complete());
        assert_eq!(BigInt::from(f.product()), n);
    }

    #[test]
    fn partial_when_budget_exhausted() {
        let p: BigUint = "1000000000000000003".parse().unwrap();
        let q: BigUint = "1000000000000000009".parse().unwrap();
        let n = BigInt::from(&p * &q);
        let budget = FactorBudget {
            trial_bound: 1000,
            rho_iterations: 10,
        };
        let f = factor_integer(&n, &budget).unwrap();
        assert!(!f.is_complete());
        assert_eq!(BigInt::from(f.product()), n);
    }

    #[test]
    fn probable_primes() {
        let m61: BigUint = (BigUint::one() << 61u32) - 1u32;
        assert!(is_probable_prime(&m61));
        let m127: BigUint = (BigUint::one() << 127u32) - 1u32;
        assert!(is_probable_prime(&m127));
        assert!(!is_probable_prime(&(&m127 * &m61)));
    }

    proptest! {
        #[test]
        fn remultiplies(n in 1i64..i64::MAX) {
            let f = factor_integer(&BigInt::from(n), &FactorBudget::default()).unwrap();
            prop_assert!(f.is_complete());
            prop_assert_eq!(f.product(), BigUint::from(n as u64));
            for (p, _) in &f.factors {
                prop_assert!(is_probable_prime(p));
            }
        }
    }
}
