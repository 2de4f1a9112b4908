//! The valuation lemma for preperiodic points and Eisenstein stability at 2.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use super::orbit::gamma_polynomial;
use super::{GeneratorSet, SequenceCoding};
use crate::algebra::{padic_valuation, IntPolynomial, Rational};
use crate::error::{Error, Result};

/// For `alpha` preperiodic under `x^d + c` with `v_p(c) < 0`, checks
/// `v_p(c) = d * v_p(alpha)`. A `false` result falsifies the lemma.
///
/// Preperiodicity is verified by iterating at most `cap` steps.
pub fn valuation_lemma_check(
    c: &Rational,
    alpha: &Rational,
    p: &BigInt,
    d: u32,
    cap: usize,
) -> Result<bool> {
    if d < 2 {
        return Err(Error::InvalidArgument("degree must be at least 2".into()));
    }
    let vc = padic_valuation(c, p)?;
    if vc >= 0 {
        return Err(Error::Precondition(format!(
            "v_{p}(c) = {vc} is not negative"
        )));
    }
    let mut seen = HashSet::new();
    let mut z = alpha.clone();
    let mut periodic = false;
    for _ in 0..=cap {
        if !seen.insert(z.clone()) {
            periodic = true;
            break;
        }
        z = Pow::pow(&z, d) + c;
    }
    if !periodic {
        return Err(Error::Precondition(format!(
            "{alpha} is not preperiodic within {cap} iterations"
        )));
    }
    let va = padic_valuation(alpha, p)?;
    Ok(vc == i64::from(d) * va)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EisensteinCase {
    /// `f(0) = 2 mod 4` and `f` is Eisenstein at 2.
    Direct,
    /// `f(0) = ±1 mod 4` and `f(x+1)` is Eisenstein at 2.
    Shifted,
    Failure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinOutcome {
    pub case: EisensteinCase,
    /// The polynomial on which the criterion was tested.
    pub tested: IntPolynomial,
}

/// Leading coefficient odd, all others even, constant term `2 mod 4`.
pub fn is_eisenstein_at_2(f: &IntPolynomial) -> bool {
    let Some(n) = f.degree() else {
        return false;
    };
    if n == 0 || f.coefficient(n).is_even() {
        return false;
    }
    let four = BigInt::from(4);
    f.coeffs()[..n].iter().all(Integer::is_even)
        && f.coefficient(0).mod_floor(&four) == BigInt::from(2)
}

/// Eisenstein test at 2 on `gamma_n` or on `gamma_n(x+1)`.
pub fn eisenstein_stability(
    set: &GeneratorSet,
    coding: &SequenceCoding,
    n: usize,
) -> Result<EisensteinOutcome> {
    set.critical_constants()?;
    let f = gamma_polynomial(set, coding, n)?;
    Ok(eisenstein_on(&f))
}

pub(crate) fn eisenstein_on(f: &IntPolynomial) -> EisensteinOutcome {
    let r = f.coefficient(0).mod_floor(&BigInt::from(4));
    let (tested, case) = if r == BigInt::from(2) {
        (f.clone(), EisensteinCase::Direct)
    } else if r.is_odd() {
        (f.shift(&BigInt::one()), EisensteinCase::Shifted)
    } else {
        return EisensteinOutcome {
            case: EisensteinCase::Failure,
            tested: f.clone(),
        };
    };
    let case = if is_eisenstein_at_2(&tested) {
        case
    } else {
        EisensteinCase::Failure
    };
    EisensteinOutcome { case, tested }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn valuation_lemma() {
        let two = BigInt::from(2);
        assert_eq!(valuation_lemma_check(&q(-3, 4), &q(3, 2), &two, 2, 64), Ok(true));
        assert_eq!(valuation_lemma_check(&q(-3, 4), &q(-1, 2), &two, 2, 64), Ok(true));
        assert!(matches!(
            valuation_lemma_check(&q(-2, 1), &q(2, 1), &two, 2, 64),
            Err(Error::Precondition(_))
        ));
        // 5/2 escapes under x^2 - 3/4
        assert!(matches!(
            valuation_lemma_check(&q(-3, 4), &q(5, 2), &two, 2, 16),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn eisenstein_cases() {
        let s = GeneratorSet::critical_i64(&[-2, -3]).unwrap();
        let out = eisenstein_stability(&s, &SequenceCoding::constant(1), 1).unwrap();
        assert_eq!(out.case, EisensteinCase::Shifted);
        assert_eq!(out.tested, "t^2+2t-2".parse().unwrap());

        let s = GeneratorSet::critical_i64(&[-2, -6]).unwrap();
        let out = eisenstein_stability(&s, &SequenceCoding::constant(0), 2).unwrap();
        assert_eq!(out.case, EisensteinCase::Direct);

        let s = GeneratorSet::critical_i64(&[-1]).unwrap();
        let out = eisenstein_stability(&s, &SequenceCoding::constant(0), 1).unwrap();
        assert_eq!(out.case, EisensteinCase::Failure);
        assert_eq!(out.tested, "t^2+2t".parse().unwrap());
    }
}
