//! Exact fixed-point proportions of the full automorphism groups of the
//! binary tree and the coin-flip transition of the fixed-point process.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
#[cfg(test)]
use num_traits::Signed;
use serde::Serialize;

use crate::algebra::Rational;
use crate::error::{Error, Result};
use crate::serde_util::display_seq;

/// Deepest level with an exact value: the denominator of `f_n` is
/// `2^(2^(n+1)-1)`.
pub const EXACT_FPP_MAX: usize = 16;

/// `f_n` for the full automorphism group of the level-`n` binary tree.
///
/// An element fixes a leaf iff it does not swap the two subtrees at the root
/// and one of its two restrictions fixes a leaf: `f_n = f_{n-1} - f_{n-1}^2/2`
/// with `f_0 = 1`.
pub fn fpp_full_binary(n: usize) -> Result<Rational> {
    if n == 0 || n > EXACT_FPP_MAX {
        return Err(Error::InvalidArgument(format!(
            "exact values exist for levels 1..={EXACT_FPP_MAX}"
        )));
    }
    Ok(fpp_table(n).values.pop().unwrap())
}

fn step(f: &Rational) -> Rational {
    f - f * f / BigInt::from(2)
}

fn round_dyadic(q: &Rational, bits: u32, up: bool) -> Rational {
    let scale: BigInt = BigInt::one() << bits;
    let scaled = q * &scale;
    let k = if up { scaled.ceil() } else { scaled.floor() };
    Rational::new(k.to_integer(), scale)
}

/// Rigorous bounds `lo <= f_n <= hi` for every `n <= levels`, carried as
/// dyadic rationals with `bits` fractional bits. The step
/// `f -> f - f^2/2` is increasing on `[0, 1]`, so rounding the lower bound
/// down and the upper bound up keeps both valid.
pub fn fpp_bounds(levels: usize, bits: u32) -> Vec<(Rational, Rational)> {
    let mut lo = Rational::one();
    let mut hi = Rational::one();
    (0..levels)
        .map(|_| {
            lo = round_dyadic(&step(&lo), bits, false);
            hi = round_dyadic(&step(&hi), bits, true);
            (lo.clone(), hi.clone())
        })
        .collect()
}

/// `f_n` in floating point, for every `n`.
pub fn fpp_f64(n: usize) -> f64 {
    (0..n).fold(1.0, |f, _| f - f * f / 2.0)
}

/// `f_1 .. f_n`, non-increasing; `n` should not exceed [`EXACT_FPP_MAX`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FppTable {
    #[serde(serialize_with = "display_seq")]
    pub values: Vec<Rational>,
}

pub fn fpp_table(n: usize) -> FppTable {
    // f = a / 2^e with a odd: f - f^2/2 = (a 2^(e+1) - a^2) / 2^(2e+1)
    let mut a = BigInt::one();
    let mut e = 0usize;
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        a = (&a << (e + 1)) - &a * &a;
        e = 2 * e + 1;
        values.push(Rational::new_raw(a.clone(), BigInt::one() << e));
    }
    FppTable { values }
}

fn check_even(u: u64) -> Result<()> {
    if u % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "{u} fixed points is unreachable after level 1"
        )));
    }
    Ok(())
}

fn binomial_row(u: u64) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..u {
        let next = row[k as usize].clone() * (u - k) / (k + 1);
        row.push(next);
    }
    row
}

/// `P(next = 2k) = C(u, k) / 2^u` for `k = 0..=u`.
pub fn coin_transition(u: u64) -> Result<Vec<(u64, Rational)>> {
    check_even(u)?;
    let denom: BigInt = Pow::pow(BigInt::from(2), u);
    Ok(binomial_row(u)
        .into_iter()
        .enumerate()
        .map(|(k, c)| (2 * k as u64, Rational::new(c, denom.clone())))
        .collect())
}

/// `E[next | u] = u` exactly for every even `u` in the range.
pub fn martingale_check(us: impl IntoIterator<Item = u64>) -> Result<bool> {
    for u in us {
        let mean = coin_transition(u)?
            .into_iter()
            .fold(Rational::zero(), |acc, (v, p)| acc + p * BigInt::from(v));
        if mean != Rational::from_integer(u.into()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `C(u, u/2) / 2^u`, the probability of staying at `u`; at most `1/2`.
pub fn stay_probability_bound(u: u64) -> Result<Rational> {
    check_even(u)?;
    if u == 0 {
        return Err(Error::InvalidArgument("u must be at least 2".into()));
    }
    let p = coin_transition(u)?
        .into_iter()
        .find(|(v, _)| *v == u)
        .map(|(_, p)| p)
        .unwrap();
    if p > Rational::new(BigInt::one(), BigInt::from(2)) {
        return Err(Error::Consistency(format!("stay probability {p} exceeds 1/2")));
    }
    Ok(p)
}
