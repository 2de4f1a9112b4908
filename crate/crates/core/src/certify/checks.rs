//! Independent checks: the maximality-tool conditions, the exact level-2
//! oracle, the discriminant identity and the degree law.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Zero};
use serde::Serialize;

use crate::algebra::{
    discriminant, reduce_mod2, resultant, square_in_quadratic_extension, IntPolynomial,
    RatPolynomial, Rational,
};
use crate::dynamics::{critical_orbit, gamma_polynomial, GeneratorSet, Ring, SequenceCoding};
use crate::error::{Error, Result};

/// Indices (0-based) meeting each of the two conditions:
/// `derivative`: `d/dt` of `c_j mod 2` equals 1 in `F_2[t]`;
/// `leading`: `deg c_k` is maximal and its leading coefficient is odd.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToolConditions {
    pub derivative: Vec<usize>,
    pub leading: Vec<usize>,
}

impl ToolConditions {
    /// Smallest `(j, k)`, if both conditions are met.
    pub fn pair(&self) -> Option<(usize, usize)> {
        Some((*self.derivative.first()?, *self.leading.first()?))
    }

    pub fn holds(&self) -> bool {
        self.pair().is_some()
    }
}

pub fn tool_conditions(set: &GeneratorSet) -> Result<ToolConditions> {
    let cs = set.critical_constants()?;
    let d = cs.iter().filter_map(IntPolynomial::degree).max();
    let derivative = (0..cs.len())
        .filter(|&i| reduce_mod2(&cs[i]).derivative().is_one())
        .collect();
    let leading = (0..cs.len())
        .filter(|&i| {
            cs[i].degree() == d
                && d.is_some_and(|d| d > 0)
                && cs[i].leading_coefficient().is_some_and(Integer::is_odd)
        })
        .collect();
    Ok(ToolConditions { derivative, leading })
}

fn as_rat(v: &IntPolynomial) -> RatPolynomial {
    RatPolynomial::from(v.clone())
}

/// Whether `[K_2 : K_1] = 4`, i.e. `gamma_2(0)` is not a square in
/// `K_1 = K(sqrt(-gamma_1(0)))`.
pub fn level2_oracle(set: &GeneratorSet, coding: &SequenceCoding) -> Result<bool> {
    let orbit = critical_orbit(set, coding, 2)?;
    oracle_from_orbit(set.ring(), &orbit[0], &orbit[1])
}

pub(crate) fn oracle_from_orbit(
    ring: Ring,
    g1: &IntPolynomial,
    g2: &IntPolynomial,
) -> Result<bool> {
    let m = -g1;
    let square = match ring {
        Ring::Integers => {
            let m = Rational::from_integer(m.as_constant().unwrap_or_default());
            let a = Rational::from_integer(g2.as_constant().unwrap_or_default());
            square_in_quadratic_extension(&a, &m)?
        }
        Ring::IntPolynomials => square_in_quadratic_extension(&as_rat(g2), &as_rat(&m))?,
    };
    Ok(!square)
}

/// `disc(gamma_n) = Res(gamma_{n-1}, gamma_{n-1}')^2 * 2^(2^n) * gamma_n(0)`
/// evaluated exactly over the integers, `2 <= n <= 5`.
pub fn discriminant_identity_check(
    set: &GeneratorSet,
    coding: &SequenceCoding,
    n: usize,
) -> Result<bool> {
    let (lhs, rhs) = discriminant_identity_sides(set, coding, n)?;
    Ok(lhs == rhs)
}

pub fn discriminant_identity_sides(
    set: &GeneratorSet,
    coding: &SequenceCoding,
    n: usize,
) -> Result<(Rational, Rational)> {
    if !(2..=5).contains(&n) {
        return Err(Error::InvalidArgument(format!("level {n} outside 2..=5")));
    }
    set.critical_constants()?;
    let f = as_rat(&gamma_polynomial(set, coding, n)?);
    let g = as_rat(&gamma_polynomial(set, coding, n - 1)?);
    let lhs = discriminant(&f)?;
    let res = resultant(&g, &g.derivative())?;
    let two = Rational::from_integer(BigInt::from(2));
    let rhs = &res * &res * Pow::pow(two, 1u32 << n) * f.eval(&Rational::zero());
    Ok((lhs, rhs))
}

/// `deg gamma_n(0) <= d * 2^(n-1)` always, with equality and leading term
/// `lt(theta_n(0))^(2^(n-1))` when `theta_n(0)` has the maximal degree `d`.
pub fn degree_law_check(set: &GeneratorSet, coding: &SequenceCoding, n: usize) -> Result<bool> {
    let cs = set.critical_constants()?;
    let d = cs.iter().filter_map(IntPolynomial::degree).max().unwrap_or(0);
    if d == 0 {
        return Err(Error::Precondition("the maximal degree must be positive".into()));
    }
    let orbit = critical_orbit(set, coding, n)?;
    let g = &orbit[n - 1];
    let bound = d << (n - 1);
    let deg = g.degree().unwrap_or(0);
    if deg > bound {
        return Ok(false);
    }
    let inner = &cs[coding.index(n)];
    if inner.degree() != Some(d) {
        return Ok(true);
    }
    let lt = inner.leading_coefficient().unwrap();
    let expected = Pow::pow(lt, 1u32 << (n - 1));
    Ok(deg == bound && g.leading_coefficient() == Some(&expected))
}
