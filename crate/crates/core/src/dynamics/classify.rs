//! Sets of quadratic maps whose critical semigroup orbit contains a finite
//! orbit point.
//!
//! Over `Q` these are exactly `{x^2}`, `{x^2-1}`, `{x^2-2}`, `{x^2, x^2-1}`,
//! `{x^2-2, x^2-3}` and `{x^2-2, x^2-6}`. The classifier reaches that list by
//! the integrality, size and pair-family reductions, then confirms every
//! surviving candidate by a direct orbit search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::orbit::{orbit_contains_finite_orbit_point, FiniteOrbitVerdict, OrbitCaps};
use super::GeneratorSet;
use crate::algebra::{IntPolynomial, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairFamily {
    /// `((1-y^2)/4, (1-(y+2)^2)/4)`
    A,
    /// `((1-y^2)/4, (-3-y^2)/4)`
    B,
}

impl PairFamily {
    /// Integer `y` range that over-covers the admissible parameters.
    fn window(self) -> std::ops::RangeInclusive<i64> {
        match self {
            PairFamily::A => -7..=5,
            PairFamily::B => -5..=5,
        }
    }

    fn second(self, y: &BigInt) -> Rational {
        let num = match self {
            PairFamily::A => BigInt::one() - (y + 2) * (y + 2),
            PairFamily::B => BigInt::from(-3) - y * y,
        };
        Rational::new(num, 4.into())
    }
}

/// Every `(family, y)` with `y` odd (equivalently `y = ±1 mod 4`) such that
/// `{c1, c2}` is `{(1-y^2)/4, second(y)}` in some order.
pub fn pair_family_matches(c1: &Rational, c2: &Rational) -> Vec<(PairFamily, BigInt)> {
    let mut out = Vec::new();
    for (a, b) in [(c1, c2), (c2, c1)] {
        let disc = Rational::one() - a * Rational::from_integer(4.into());
        if !disc.is_integer() || disc.is_negative() {
            continue;
        }
        let d = disc.to_integer();
        let root = d.sqrt();
        if &root * &root != d {
            continue;
        }
        let ys = if root.is_zero() {
            vec![root]
        } else {
            vec![root.clone(), -root]
        };
        for y in ys {
            if y.is_even() {
                continue;
            }
            for fam in [PairFamily::A, PairFamily::B] {
                if &fam.second(&y) == b && !out.contains(&(fam, y.clone())) {
                    out.push((fam, y.clone()));
                }
            }
        }
    }
    out
}

/// The first match of [`pair_family_matches`], if any.
pub fn pair_family_membership(c1: &Rational, c2: &Rational) -> Option<(PairFamily, BigInt)> {
    pair_family_matches(c1, c2).into_iter().next()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Classification {
    Exceptional {
        /// Canonical name such as `{x^2-2, x^2-6}`.
        name: String,
        /// A point of `Orb_S(0) ∪ {0}` with finite orbit.
        witness_point: String,
    },
    NotObstructed {
        reason: String,
    },
}

impl Classification {
    pub fn is_exceptional(&self) -> bool {
        matches!(self, Classification::Exceptional { .. })
    }
}

fn render_constant(c: &BigInt) -> String {
    match c.sign() {
        num_bigint::Sign::NoSign => "x^2".to_string(),
        num_bigint::Sign::Plus => format!("x^2+{c}"),
        num_bigint::Sign::Minus => format!("x^2{c}"),
    }
}

fn not_obstructed(reason: &str) -> Classification {
    Classification::NotObstructed {
        reason: reason.to_string(),
    }
}

/// Whether `{x^2 + c_i}` over `Q` is one of the exceptional sets.
pub fn classify_finite_orbit_obstruction(cs: &[Rational]) -> Result<Classification> {
    if cs.is_empty() {
        return Err(Error::InvalidSet("no maps given".into()));
    }
    for (i, c) in cs.iter().enumerate() {
        if cs[..i].contains(c) {
            return Err(Error::InvalidSet(format!("constant {c} listed twice")));
        }
    }
    if cs.iter().any(|c| !c.is_integer()) {
        return Ok(not_obstructed(
            "a constant is not an integer, so no finite orbit point exists",
        ));
    }
    if cs.len() >= 3 {
        return Ok(not_obstructed("three or more maps admit no finite orbit point"));
    }
    let ints: Vec<BigInt> = cs.iter().map(Rational::to_integer).collect();
    match ints.as_slice() {
        [c] => {
            let pcf = [0i64, -1, -2].iter().any(|&v| *c == BigInt::from(v));
            if !pcf {
                return Ok(not_obstructed("0 is not preperiodic for this map"));
            }
        }
        [_, _] => {
            let in_window = pair_family_matches(&cs[0], &cs[1])
                .iter()
                .any(|(fam, y)| fam.window().any(|w| BigInt::from(w) == *y));
            if !in_window {
                return Ok(not_obstructed("the pair is in no admissible family"));
            }
        }
        _ => unreachable!(),
    }
    let set = GeneratorSet::critical(
        ints.iter().cloned().map(IntPolynomial::constant).collect(),
        super::Ring::Integers,
    )?;
    match orbit_contains_finite_orbit_point(&set, &IntPolynomial::zero(), OrbitCaps::default()) {
        FiniteOrbitVerdict::Yes(w) => {
            let mut sorted = ints.clone();
            sorted.sort_by(|a, b| b.cmp(a));
            let name = format!(
                "{{{}}}",
                sorted.iter().map(render_constant).collect::<Vec<_>>().join(", ")
            );
            Ok(Classification::Exceptional {
                name,
                witness_point: w.to_string(),
            })
        }
        FiniteOrbitVerdict::No => Ok(not_obstructed(
            "the orbit search found no finite orbit point",
        )),
        FiniteOrbitVerdict::Unknown => Err(Error::Consistency(
            "exact orbit search over the integers returned unknown".into(),
        )),
    }
}

/// Classification of a critical set over the integers.
pub fn classify_set(set: &GeneratorSet) -> Result<Classification> {
    let cs: Vec<Rational> = set
        .integer_constants()?
        .into_iter()
        .map(Rational::from_integer)
        .collect();
    classify_finite_orbit_obstruction(&cs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn classify(v: &[i64]) -> Classification {
        classify_finite_orbit_obstruction(&v.iter().map(|&c| q(c)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn pair_families() {
        assert_eq!(pair_family_membership(&q(-2), &q(-6)), Some((PairFamily::A, 3.into())));
        assert_eq!(pair_family_membership(&q(0), &q(-1)), Some((PairFamily::B, 1.into())));
        assert_eq!(pair_family_membership(&q(1), &q(2)), None);
        // both orders of {0, -2} sit in family A
        assert!(pair_family_membership(&q(0), &q(-2)).is_some());
        assert!(pair_family_membership(&q(-2), &q(0)).is_some());
    }

    #[test]
    fn documented_classifications() {
        assert!(classify(&[-2, -3]).is_exceptional());
        assert!(!classify(&[1]).is_exceptional());
        assert!(!classify(&[0, -2]).is_exceptional());
        assert_eq!(
            classify(&[-6, -2]),
            Classification::Exceptional {
                name: "{x^2-2, x^2-6}".into(),
                witness_point: "-2".into()
            }
        );
        assert_eq!(
            classify(&[-1, 0]),
            Classification::Exceptional {
                name: "{x^2, x^2-1}".into(),
                witness_point: "0".into()
            }
        );
    }

    #[test]
    fn rational_and_large_sets() {
        let half = Rational::new(1.into(), 2.into());
        let c = classify_finite_orbit_obstruction(&[half]).unwrap();
        assert!(!c.is_exceptional());
        assert!(!classify(&[0, -1, -2]).is_exceptional());
        assert!(classify_finite_orbit_obstruction(&[q(1), q(1)]).is_err());
    }
}
