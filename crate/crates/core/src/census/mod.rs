//! Exact counts over coefficient boxes and the set-fraction bounds built on
//! them.
//!
//! `P_d(B)` holds the `(2B+1)^(d+1)` polynomials of degree at most `d` with
//! coefficients in `[-B, B]`; `M_d(B)` the `(2B+1)^d` monic ones of degree
//! `d`. The parity properties are the coefficient conditions under which a
//! single `c` meets the derivative condition and/or the odd-leading-term
//! condition of the maximality tool. The counts here are of sets containing
//! qualifying elements, which is what the bounds are proved from; they are
//! not counts of sets with big or surjective representations.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Rational;
use crate::error::{Error, Result};
use crate::serde_util::display;

/// Boxes up to this many tuples are also enumerated directly.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoefficientBox {
    pub d: u32,
    pub b: u64,
    pub monic: bool,
}

impl CoefficientBox {
    pub fn new(d: u32, b: u64, monic: bool) -> Result<Self> {
        if d == 0 || b == 0 {
            return Err(Error::InvalidArgument("d and B must be positive".into()));
        }
        Ok(CoefficientBox { d, b, monic })
    }

    /// `x_B = 2B + 1`.
    pub fn width(&self) -> u64 {
        2 * self.b + 1
    }

    /// Number of free coefficients.
    pub fn free(&self) -> u32 {
        if self.monic {
            self.d
        } else {
            self.d + 1
        }
    }

    pub fn cardinality(&self) -> BigInt {
        Pow::pow(BigInt::from(self.width()), self.free())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityProperty {
    /// Even `d`: `a_d`, `a_1` odd and `a_i` even for odd `3 <= i <= d-1`.
    StarEven,
    /// Odd `d`: `a_1` odd and `a_i` even for odd `3 <= i <= d`.
    OddDerivative,
    /// Odd `d`: `a_d` odd.
    OddLeading,
    /// Even `d`, monic: `a_1` odd and `a_i` even for odd `3 <= i <= d-1`.
    MonicDerivative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Parity {
    Odd,
    Even,
}

impl ParityProperty {
    fn check(self, bx: &CoefficientBox) -> Result<()> {
        let even = bx.d.is_multiple_of(2);
        let ok = match self {
            ParityProperty::StarEven => even && !bx.monic,
            ParityProperty::OddDerivative | ParityProperty::OddLeading => !even && !bx.monic,
            ParityProperty::MonicDerivative => even && bx.monic,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "{self:?} does not apply to d = {} (monic: {})",
                bx.d, bx.monic
            )))
        }
    }

    /// Constrained coefficient positions of the free coefficients.
    fn constraints(self, d: u32) -> Vec<(u32, Parity)> {
        let odd_indices = (3..=d).filter(|i| i % 2 == 1);
        match self {
            ParityProperty::StarEven => [(d, Parity::Odd), (1, Parity::Odd)]
                .into_iter()
                .chain(odd_indices.filter(|&i| i < d).map(|i| (i, Parity::Even)))
                .collect(),
            ParityProperty::OddDerivative => std::iter::once((1, Parity::Odd))
                .chain(odd_indices.map(|i| (i, Parity::Even)))
                .collect(),
            ParityProperty::OddLeading => vec![(d, Parity::Odd)],
            ParityProperty::MonicDerivative => std::iter::once((1, Parity::Odd))
                .chain(odd_indices.filter(|&i| i < d).map(|i| (i, Parity::Even)))
                .collect(),
        }
    }

    fn holds(self, d: u32, coeffs: &[i64]) -> bool {
        self.constraints(d).iter().all(|&(i, p)| {
            let odd = coeffs[i as usize].is_odd();
            odd == (p == Parity::Odd)
        })
    }
}

/// Odd integers in `[-B, B]`.
pub fn odd_count(b: u64) -> u64 {
    b.div_ceil(2) * 2
}

pub fn even_count(b: u64) -> u64 {
    2 * b + 1 - odd_count(b)
}

/// `(1/2)^(d/2+1)` for even `d`, `(1/2)^((d+1)/2)` for odd `d`.
pub fn r_d(d: u32) -> Result<Rational> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    let e = if d.is_multiple_of(2) { d / 2 + 1 } else { d.div_ceil(2) };
    Ok(half_pow(e))
}

fn half_pow(e: u32) -> Rational {
    Rational::new(BigInt::one(), Pow::pow(BigInt::from(2), e))
}

fn product_count(bx: &CoefficientBox, constraints: &[(u32, Parity)]) -> BigInt {
    let mut k = BigInt::one();
    for &(_, p) in constraints {
        k *= match p {
            Parity::Odd => odd_count(bx.b),
            Parity::Even => even_count(bx.b),
        };
    }
    let free = bx.free() - constraints.len() as u32;
    k * Pow::pow(BigInt::from(bx.width()), free)
}

/// Closed-form count: odd or even choices on constrained coefficients, all
/// `2B+1` values elsewhere.
pub fn count_property(bx: &CoefficientBox, prop: ParityProperty) -> Result<BigInt> {
    prop.check(bx)?;
    Ok(product_count(bx, &prop.constraints(bx.d)))
}

/// Polynomials with both odd-degree properties; empty unless `d = 1`, where
/// both reduce to `a_1` odd.
pub fn count_odd_intersection(bx: &CoefficientBox) -> Result<BigInt> {
    ParityProperty::OddDerivative.check(bx)?;
    let mut cs = ParityProperty::OddDerivative.constraints(bx.d);
    if cs.iter().any(|&(i, p)| i == bx.d && p == Parity::Even) {
        return Ok(BigInt::zero());
    }
    cs.retain(|&(i, _)| i != bx.d);
    cs.push((bx.d, Parity::Odd));
    Ok(product_count(bx, &cs))
}

/// Counts by visiting every coefficient tuple, or `None` above
/// [`ENUMERATION_LIMIT`].
pub fn enumerate_property(bx: &CoefficientBox, prop: ParityProperty) -> Result<Option<u64>> {
    prop.check(bx)?;
    enumerate_with(bx, |c| prop.holds(bx.d, c))
}

fn enumerate_with(bx: &CoefficientBox, pred: impl Fn(&[i64]) -> bool + Sync) -> Result<Option<u64>> {
    let total = bx.cardinality();
    if total > BigInt::from(ENUMERATION_LIMIT) {
        return Ok(None);
    }
    let b = bx.b as i64;
    let d = bx.d as usize;
    let free = bx.free() as usize;
    // the lowest coefficient is split across threads
    let count = (-b..=b)
        .into_par_iter()
        .map(|a0| {
            let mut c = vec![-b; d + 1];
            if bx.monic {
                c[d] = 1;
            }
            c[0] = a0;
            let mut n = 0u64;
            loop {
                if pred(&c) {
                    n += 1;
                }
                // odometer over positions 1..free
                let mut i = 1;
                while i < free && c[i] == b {
                    c[i] = -b;
                    i += 1;
                }
                if i >= free {
                    break;
                }
                c[i] += 1;
            }
            n
        })
        .sum();
    Ok(Some(count))
}

fn binomial(n: &BigInt, k: u32) -> BigInt {
    if n.is_negative() || *n < BigInt::from(k) {
        return BigInt::zero();
    }
    num_integer::binomial(n.clone(), BigInt::from(k))
}

/// Fraction of `s`-subsets of a `t`-set meeting a `k`-subset.
pub fn presence_fraction(t: &BigInt, k: &BigInt, s: u32) -> Result<Rational> {
    if s == 0 {
        return Err(Error::InvalidArgument("s must be positive".into()));
    }
    let total = binomial(t, s);
    if total.is_zero() {
        return Err(Error::InvalidArgument(format!("no {s}-subsets of a {t}-set")));
    }
    Ok(Rational::new(total.clone() - binomial(&(t - k), s), total))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Even `d`: some element has property (*).
    Even,
    /// Odd `d`: some element meets the derivative condition and some
    /// element has odd leading term.
    Odd,
    /// Even `d`, monic: some element meets the derivative condition.
    Monic,
}

impl Variant {
    fn check(self, d: u32) -> Result<()> {
        let even = d.is_multiple_of(2);
        if d == 0 || (self == Variant::Odd) == even {
            return Err(Error::InvalidArgument(format!(
                "variant {self:?} does not apply to d = {d}"
            )));
        }
        Ok(())
    }
}

/// The limiting lower bound for the variant.
pub fn bound_formula(d: u32, s: u32, variant: Variant) -> Result<Rational> {
    variant.check(d)?;
    let one = Rational::one();
    let half = half_pow(1);
    Ok(match variant {
        Variant::Even => &one - Pow::pow(&one - r_d(d)?, s),
        Variant::Odd => {
            let r = r_d(d)?;
            &one - Pow::pow(&one - &r, s) - Pow::pow(&half, s) + Pow::pow(&one - &r - &half, s)
        }
        Variant::Monic => &one - Pow::pow(&one - half_pow(d / 2), s),
    })
}

/// The exact fraction of `s`-element sets in the box with the variant's
/// qualifying elements.
pub fn exact_set_fraction(d: u32, s: u32, b: u64, variant: Variant) -> Result<Rational> {
    variant.check(d)?;
    match variant {
        Variant::Even => {
            let bx = CoefficientBox::new(d, b, false)?;
            presence_fraction(&bx.cardinality(), &count_property(&bx, ParityProperty::StarEven)?, s)
        }
        Variant::Monic => {
            let bx = CoefficientBox::new(d, b, true)?;
            presence_fraction(
                &bx.cardinality(),
                &count_property(&bx, ParityProperty::MonicDerivative)?,
                s,
            )
        }
        Variant::Odd => {
            if s == 0 {
                return Err(Error::InvalidArgument("s must be positive".into()));
            }
            let bx = CoefficientBox::new(d, b, false)?;
            let t = bx.cardinality();
            let k1 = count_property(&bx, ParityProperty::OddDerivative)?;
            let k2 = count_property(&bx, ParityProperty::OddLeading)?;
            let both = count_odd_intersection(&bx)?;
            let union = &k1 + &k2 - both;
            let total = binomial(&t, s);
            if total.is_zero() {
                return Err(Error::InvalidArgument(format!("no {s}-subsets of a {t}-set")));
            }
            // #(A and B) = #X - #A^c - #B^c + #(A^c and B^c)
            let num = total.clone() - binomial(&(&t - &k1), s) - binomial(&(&t - &k2), s)
                + binomial(&(&t - &union), s);
            Ok(Rational::new(num, total))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub b: u64,
    #[serde(serialize_with = "display")]
    pub fraction: Rational,
    #[serde(serialize_with = "display")]
    pub deviation: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub d: u32,
    pub s: u32,
    pub variant: Variant,
    #[serde(serialize_with = "display")]
    pub bound: Rational,
    pub rows: Vec<CensusRow>,
}

impl CensusReport {
    /// `d,s,B,fraction_num,fraction_den,bound_num,bound_den,deviation` with
    /// the deviation `fraction - bound` as an exact `num/den`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d,s,B,fraction_num,fraction_den,bound_num,bound_den,deviation\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                self.d,
                self.s,
                r.b,
                r.fraction.numer(),
                r.fraction.denom(),
                self.bound.numer(),
                self.bound.denom(),
                r.deviation
            );
        }
        out
    }
}

/// Exact fractions for each `B` against the limiting bound.
pub fn convergence_experiment(d: u32, s: u32, bs: &[u64], variant: Variant) -> Result<CensusReport> {
    if bs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("B values must increase".into()));
    }
    let bound = bound_formula(d, s, variant)?;
    let rows = bs
        .par_iter()
        .map(|&b| {
            let fraction = exact_set_fraction(d, s, b, variant)?;
            let deviation = &fraction - &bound;
            Ok(CensusRow { b, fraction, deviation })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CensusReport {
        d,
        s,
        variant,
        bound,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn bx(d: u32, b: u64, monic: bool) -> CoefficientBox {
        CoefficientBox::new(d, b, monic).unwrap()
    }

    #[test]
    fn parity_counts() {
        let odd: Vec<u64> = (1..=6).map(odd_count).collect();
        assert_eq!(odd, [2, 2, 4, 4, 6, 6]);
        let even: Vec<u64> = (1..=6).map(even_count).collect();
        assert_eq!(even, [1, 3, 3, 5, 5, 7]);
    }

    #[test]
    fn r_d_values() {
        assert_eq!(r_d(1).unwrap(), q(1, 2));
        assert_eq!(r_d(2).unwrap(), q(1, 4));
        assert_eq!(r_d(3).unwrap(), q(1, 4));
        assert_eq!(r_d(4).unwrap(), q(1, 8));
        assert!(r_d(0).is_err());
    }

    #[test]
    fn property_counts() {
        let k = |b: CoefficientBox, p| count_property(&b, p).unwrap();
        assert_eq!(k(bx(2, 1, false), ParityProperty::StarEven), 12.into());
        assert_eq!(k(bx(1, 1, false), ParityProperty::OddDerivative), 6.into());
        assert_eq!(k(bx(2, 1, true), ParityProperty::MonicDerivative), 6.into());
        assert_eq!(enumerate_property(&bx(2, 1, true), ParityProperty::MonicDerivative).unwrap(), Some(6));
        assert_eq!(bx(2, 1, true).cardinality(), 9.into());
        assert!(count_property(&bx(2, 1, false), ParityProperty::OddLeading).is_err());
        assert!(count_property(&bx(2, 1, false), ParityProperty::MonicDerivative).is_err());
        assert_eq!(enumerate_property(&bx(12, 3, false), ParityProperty::StarEven).unwrap(), None);
    }

    #[test]
    fn intersections() {
        assert_eq!(count_odd_intersection(&bx(1, 2, false)).unwrap(), 10.into());
        assert_eq!(count_odd_intersection(&bx(3, 2, false)).unwrap(), BigInt::zero());
        let direct = enumerate_with(&bx(1, 2, false), |c| {
            ParityProperty::OddDerivative.holds(1, c) && ParityProperty::OddLeading.holds(1, c)
        })
        .unwrap();
        assert_eq!(direct, Some(10));
    }

    #[test]
    fn bounds() {
        assert_eq!(bound_formula(2, 2, Variant::Even).unwrap(), q(7, 16));
        assert_eq!(bound_formula(1, 2, Variant::Odd).unwrap(), q(1, 2));
        assert_eq!(bound_formula(2, 3, Variant::Monic).unwrap(), q(7, 8));
        assert!(bound_formula(2, 2, Variant::Odd).is_err());
        assert!(bound_formula(3, 2, Variant::Monic).is_err());
        let big = bound_formula(4, 40, Variant::Even).unwrap();
        assert!(big > q(99, 100));
    }

    #[test]
    fn set_fractions() {
        let f = presence_fraction(&9.into(), &6.into(), 2).unwrap();
        assert_eq!(f, q(11, 12));
        assert_eq!(exact_set_fraction(2, 2, 1, Variant::Even).unwrap(), q(246, 351));
        assert_eq!(exact_set_fraction(2, 1, 3, Variant::Even).unwrap(), {
            let b = bx(2, 3, false);
            Rational::new(count_property(&b, ParityProperty::StarEven).unwrap(), b.cardinality())
        });
    }

    // every s-subset of the box, counted directly
    fn brute_fraction(d: u32, s: usize, b: u64, variant: Variant) -> Rational {
        let monic = variant == Variant::Monic;
        let bxx = bx(d, b, monic);
        let mut polys = Vec::new();
        let bi = b as i64;
        let free = bxx.free() as usize;
        let mut c = vec![-bi; d as usize + 1];
        if monic {
            c[d as usize] = 1;
        }
        loop {
            polys.push(c.clone());
            let mut i = 0;
            while i < free && c[i] == bi {
                c[i] = -bi;
                i += 1;
            }
            if i >= free {
                break;
            }
            c[i] += 1;
        }
        let good = |set: &[&Vec<i64>]| match variant {
            Variant::Even => set.iter().any(|c| ParityProperty::StarEven.holds(d, c)),
            Variant::Monic => set.iter().any(|c| ParityProperty::MonicDerivative.holds(d, c)),
            Variant::Odd => {
                set.iter().any(|c| ParityProperty::OddDerivative.holds(d, c))
                    && set.iter().any(|c| ParityProperty::OddLeading.holds(d, c))
            }
        };
        let n = polys.len();
        let (mut hit, mut total) = (0i64, 0i64);
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let set: Vec<&Vec<i64>> = idx.iter().map(|&i| &polys[i]).collect();
            total += 1;
            if good(&set) {
                hit += 1;
            }
            let mut j = s;
            loop {
                if j == 0 {
                    return q(hit, total);
                }
                j -= 1;
                if idx[j] < n - s + j {
                    break;
                }
            }
            idx[j] += 1;
            for m in j + 1..s {
                idx[m] = idx[m - 1] + 1;
            }
        }
    }

    #[test]
    fn fractions_match_subset_enumeration() {
        assert_eq!(brute_fraction(2, 2, 1, Variant::Even), q(246, 351));
        for (d, s, b, v) in [
            (1, 2, 1, Variant::Odd),
            (1, 3, 1, Variant::Odd),
            (1, 2, 2, Variant::Odd),
            (3, 2, 1, Variant::Odd),
            (2, 2, 2, Variant::Monic),
            (2, 3, 1, Variant::Even),
        ] {
            assert_eq!(
                exact_set_fraction(d, s as u32, b, v).unwrap(),
                brute_fraction(d, s, b, v),
                "d={d} s={s} B={b} {v:?}"
            );
        }
    }

    #[test]
    fn convergence_report() {
        let rep = convergence_experiment(2, 2, &[1, 2, 4, 8, 16], Variant::Even).unwrap();
        assert_eq!(rep.bound, q(7, 16));
        let devs: Vec<Rational> = rep.rows.iter().map(|r| r.deviation.abs()).collect();
        for w in devs[2..].windows(2) {
            assert!(w[1] < w[0]);
        }
        let csv = rep.to_csv();
        assert!(csv.starts_with("d,s,B,fraction_num"));
        assert_eq!(csv.lines().count(), 6);
        assert!(convergence_experiment(2, 2, &[2, 1], Variant::Even).is_err());
        let rep = convergence_experiment(3, 1, &[1, 2, 3], Variant::Odd).unwrap();
        assert!(rep.rows.iter().all(|r| r.fraction >= Rational::zero()));
    }

    fn property_for(d: u32, monic: bool) -> Vec<ParityProperty> {
        match (d.is_multiple_of(2), monic) {
            (true, false) => vec![ParityProperty::StarEven],
            (true, true) => vec![ParityProperty::MonicDerivative],
            (false, false) => vec![ParityProperty::OddDerivative, ParityProperty::OddLeading],
            (false, true) => vec![],
        }
    }

    proptest! {
        #[test]
        fn closed_form_matches_enumeration(d in 1u32..=5, b in 1u64..=4, monic in any::<bool>()) {
            let bx = bx(d, b, monic);
            for p in property_for(d, monic) {
                if let Some(n) = enumerate_property(&bx, p).unwrap() {
                    prop_assert_eq!(BigInt::from(n), count_property(&bx, p).unwrap());
                }
            }
        }

        // each constrained coefficient is odd with probability 1/2 +- 1/(2(2B+1))
        #[test]
        fn parity_fraction_discrepancy(d in 1u32..=8, b in 1u64..=50, monic in any::<bool>()) {
            let bx = bx(d, b, monic);
            for p in property_for(d, monic) {
                let m = p.constraints(d).len() as u32;
                let frac = Rational::new(count_property(&bx, p).unwrap(), bx.cardinality());
                let limit = half_pow(m);
                let tol = Rational::new(m.into(), bx.width().into());
                prop_assert!((frac - limit).abs() <= tol);
            }
        }

        #[test]
        fn fractions_in_unit_interval_and_monotone(d in 1u32..=4, b in 1u64..=3, s in 1u32..=5) {
            let v = if d % 2 == 0 { Variant::Even } else { Variant::Odd };
            let f = exact_set_fraction(d, s, b, v).unwrap();
            prop_assert!(f >= Rational::zero() && f <= Rational::one());
            if v == Variant::Even {
                prop_assert!(exact_set_fraction(d, s + 1, b, v).unwrap() >= f);
            }
        }

        #[test]
        fn even_bound_increases_in_s(d in 1u32..=5, s in 1u32..=20) {
            let d = 2 * d;
            prop_assert!(bound_formula(d, s + 1, Variant::Even).unwrap() > bound_formula(d, s, Variant::Even).unwrap());
        }
    }
}
