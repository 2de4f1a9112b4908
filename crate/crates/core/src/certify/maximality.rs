//! Sufficient maximality criteria: a place dividing `gamma_n(0)` to odd
//! order that divides no earlier `gamma_m(0)`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{
    factor_integer, squarefree_decomposition, FactorBudget, IntPolynomial, RatPolynomial,
};
use crate::dynamics::{critical_orbit, GeneratorSet, Ring, SequenceCoding};
use crate::error::{Error, Result};
use crate::serde_util::display;

/// A re-checkable witness for the valuation criterion at level `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PrimeWitness {
    /// An odd prime `p` with `v_p(gamma_n(0))` odd and `p` dividing no
    /// earlier `gamma_m(0)`.
    Prime {
        #[serde(serialize_with = "display")]
        p: BigUint,
        valuation: u32,
    },
    /// An odd integer `r > 1`, not a square, coprime to every earlier
    /// `gamma_m(0)`, whose primes all divide `gamma_n(0)` to the same order
    /// as they divide `r`. Some prime divides `r` to odd order.
    OddPart {
        #[serde(serialize_with = "display")]
        r: BigUint,
    },
    /// A square-free `f` in `Q[t]` of positive degree, coprime to every
    /// earlier `gamma_m(0)`, each of whose irreducible factors divides
    /// `gamma_n(0)` to odd order.
    Factor {
        #[serde(serialize_with = "display")]
        f: IntPolynomial,
    },
}

/// Outcome of a sufficient criterion at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CriterionOutcome {
    Witness(PrimeWitness),
    Fails,
}

impl CriterionOutcome {
    pub fn witness(&self) -> Option<&PrimeWitness> {
        match self {
            CriterionOutcome::Witness(w) => Some(w),
            CriterionOutcome::Fails => None,
        }
    }
}

fn check_level(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "the valuation criterion needs level at least 2, got {n}"
        )));
    }
    Ok(())
}

/// Divides out of `r` every prime that divides the nonzero `v`.
fn strip_common(mut r: BigUint, v: &BigUint) -> BigUint {
    loop {
        let g = r.gcd(v);
        if g.is_one() {
            return r;
        }
        r /= g;
    }
}

/// The primitive odd part of `values[n-1]`: the largest divisor of
/// `|gamma_n(0)|` built from odd primes dividing no earlier value. An
/// earlier zero value is divisible by every prime, leaving 1.
pub(crate) fn integer_primitive_odd_part(values: &[BigInt]) -> Result<BigUint> {
    let (last, earlier) = values.split_last().expect("nonempty orbit");
    if last.is_zero() {
        return Err(Error::Precondition("gamma_n(0) = 0 is degenerate".into()));
    }
    let mut r = last.magnitude().clone();
    let tz = r.trailing_zeros().unwrap_or(0);
    r >>= tz;
    if earlier.iter().any(Zero::is_zero) {
        return Ok(BigUint::one());
    }
    for v in earlier {
        r = strip_common(r, v.magnitude());
    }
    Ok(r)
}

pub(crate) fn integer_criterion(values: &[BigInt], budget: &FactorBudget) -> Result<CriterionOutcome> {
    let r = integer_primitive_odd_part(values)?;
    let root = r.sqrt();
    if &root * &root == r {
        // every primitive odd prime appears to even order, or none exists
        return Ok(CriterionOutcome::Fails);
    }
    let fac = factor_integer(&BigInt::from(r.clone()), budget)?;
    let found = fac.factors.iter().find(|(_, e)| e % 2 == 1);
    Ok(CriterionOutcome::Witness(match found {
        Some((p, e)) => PrimeWitness::Prime {
            p: p.clone(),
            valuation: *e,
        },
        None => PrimeWitness::OddPart { r },
    }))
}

pub(crate) fn polynomial_criterion(values: &[IntPolynomial]) -> Result<CriterionOutcome> {
    let (last, earlier) = values.split_last().expect("nonempty orbit");
    if last.is_zero() {
        return Err(Error::Precondition("gamma_n(0) = 0 is degenerate".into()));
    }
    if earlier.iter().any(IntPolynomial::is_zero) {
        return Ok(CriterionOutcome::Fails);
    }
    let mut r = squarefree_decomposition(&RatPolynomial::from(last.clone()))?.odd_part();
    for v in earlier {
        let v = RatPolynomial::from(v.clone());
        loop {
            let g = r.gcd(&v);
            if g.degree().unwrap_or(0) == 0 {
                break;
            }
            r = r.div_exact(&g)?;
        }
    }
    Ok(match r.degree() {
        Some(d) if d > 0 => CriterionOutcome::Witness(PrimeWitness::Factor {
            f: r.primitive_part(),
        }),
        _ => CriterionOutcome::Fails,
    })
}

/// Primitive odd prime to odd valuation in `gamma_n(0)` over the integers.
/// A witness proves maximality at level `n` only when `gamma_1 .. gamma_{n-1}`
/// are irreducible; [`crate::certify::certify_chain`] checks that first.
///
/// Never inconclusive: when the budget cannot isolate a prime, the
/// primitive odd part itself is returned as an [`PrimeWitness::OddPart`].
pub fn maximality_by_primitive_odd_prime(
    set: &GeneratorSet,
    coding: &SequenceCoding,
    n: usize,
    budget: &FactorBudget,
) -> Result<CriterionOutcome> {
    check_level(n)?;
    if set.ring() != Ring::Integers {
        return Err(Error::UnsupportedRing("integer critical sets only".into()));
    }
    set.critical_constants()?;
    let orbit = critical_orbit(set, coding, n)?;
    let values: Vec<BigInt> = orbit.iter().map(|v| v.as_constant().unwrap_or_default()).collect();
    integer_criterion(&values, budget)
}

/// The valuation criterion over `Q(t)` by square-free decomposition and gcd
/// stripping; exact without irreducible factorization. Like the integer
/// version, a witness implies maximality only below a stable level.
pub fn maximality_qt(
    set: &GeneratorSet,
    coding: &SequenceCoding,
    n: usize,
) -> Result<CriterionOutcome> {
    check_level(n)?;
    set.critical_constants()?;
    let orbit = critical_orbit(set, coding, n)?;
    polynomial_criterion(&orbit)
}

/// Re-checks a witness against the orbit values `gamma_1(0) .. gamma_n(0)`.
pub fn verify_witness(values: &[IntPolynomial], w: &PrimeWitness) -> bool {
    let Some((last, earlier)) = values.split_last() else {
        return false;
    };
    match w {
        PrimeWitness::Prime { p, valuation } => {
            let p = BigInt::from(p.clone());
            if p.is_even() || valuation % 2 == 0 || earlier.iter().any(IntPolynomial::is_zero) {
                return false;
            }
            let val = |v: &IntPolynomial| {
                let mut x = v.as_constant().unwrap_or_default();
                let mut k = 0u32;
                while !x.is_zero() && (&x % &p).is_zero() {
                    x /= &p;
                    k += 1;
                }
                k
            };
            val(last) == *valuation && earlier.iter().all(|v| val(v) == 0)
        }
        PrimeWitness::OddPart { r } => {
            let ints: Vec<BigInt> = values.iter().map(|v| v.as_constant().unwrap_or_default()).collect();
            let sqrt = r.sqrt();
            !r.is_one()
                && &sqrt * &sqrt != *r
                && integer_primitive_odd_part(&ints).is_ok_and(|full| &full == r)
        }
        PrimeWitness::Factor { f } => {
            let f = RatPolynomial::from(f.clone());
            let last = RatPolynomial::from(last.clone());
            if f.degree().unwrap_or(0) == 0 || !f.gcd(&f.derivative()).is_constant() {
                return false;
            }
            let coprime = earlier.iter().all(|v| {
                !v.is_zero() && f.gcd(&RatPolynomial::from(v.clone())).is_constant()
            });
            // each factor of f divides gamma_n(0) to odd order
            let odd = squarefree_decomposition(&last).is_ok_and(|dec| {
                dec.odd_part().div_rem(&f).is_ok_and(|(_, rem)| rem.is_zero())
            });
            coprime && odd
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn witness_prime(o: CriterionOutcome) -> u64 {
        match o {
            CriterionOutcome::Witness(PrimeWitness::Prime { p, .. }) => p.try_into().unwrap(),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn integer_examples() {
        let b = FactorBudget::default();
        let c = SequenceCoding::constant(0);
        let s = GeneratorSet::critical_i64(&[1]).unwrap();
        assert_eq!(witness_prime(maximality_by_primitive_odd_prime(&s, &c, 3, &b).unwrap()), 5);
        assert_eq!(witness_prime(maximality_by_primitive_odd_prime(&s, &c, 4, &b).unwrap()), 13);
        let s = GeneratorSet::critical_i64(&[-2]).unwrap();
        assert_eq!(maximality_by_primitive_odd_prime(&s, &c, 3, &b).unwrap(), CriterionOutcome::Fails);
        assert!(maximality_by_primitive_odd_prime(&s, &c, 1, &b).is_err());
        let s = GeneratorSet::critical_i64(&[0]).unwrap();
        assert!(matches!(
            maximality_by_primitive_odd_prime(&s, &c, 2, &b),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn odd_part_when_budget_is_tiny() {
        let tiny = FactorBudget {
            trial_bound: 2,
            rho_iterations: 1,
        };
        // 3 * 1000003 * 1000033 with no earlier factor in common
        let big = BigInt::from(3u64) * BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64);
        let values = vec![BigInt::from(2), big.clone()];
        match integer_criterion(&values, &tiny).unwrap() {
            CriterionOutcome::Witness(PrimeWitness::OddPart { r }) => {
                assert_eq!(BigInt::from(r), big)
            }
            CriterionOutcome::Witness(PrimeWitness::Prime { p, .. }) => {
                assert!(big.magnitude() % p == BigUint::zero())
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn squares_fail() {
        // 2 * 9: the only primitive odd prime has even order
        let values = vec![BigInt::from(2), BigInt::from(18)];
        assert_eq!(integer_criterion(&values, &FactorBudget::default()).unwrap(), CriterionOutcome::Fails);
    }

    #[test]
    fn polynomial_examples() {
        let s = GeneratorSet::parse_critical("t", Ring::IntPolynomials).unwrap();
        let c = SequenceCoding::constant(0);
        let f = |n| match maximality_qt(&s, &c, n).unwrap() {
            CriterionOutcome::Witness(PrimeWitness::Factor { f }) => f,
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(f(2), "t+1".parse().unwrap());
        assert_eq!(f(3), "t^3+2t^2+t+1".parse().unwrap());
        assert!(maximality_qt(&s, &c, 1).is_err());
        let orbit = critical_orbit(&s, &c, 5).unwrap();
        let w = polynomial_criterion(&orbit).unwrap();
        assert!(verify_witness(&orbit, w.witness().unwrap()));
    }

    #[test]
    fn witnesses_recheck() {
        let s = GeneratorSet::critical_i64(&[1]).unwrap();
        let orbit = critical_orbit(&s, &SequenceCoding::constant(0), 5).unwrap();
        let ints: Vec<BigInt> = orbit.iter().map(|v| v.as_constant().unwrap()).collect();
        let w = integer_criterion(&ints, &FactorBudget::default()).unwrap();
        assert!(verify_witness(&orbit, w.witness().unwrap()));
        let bad = PrimeWitness::Prime {
            p: 5u32.into(),
            valuation: 1,
        };
        assert!(!verify_witness(&orbit, &bad));
    }
}
