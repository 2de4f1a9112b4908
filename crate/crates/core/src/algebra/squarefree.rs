//! Square-free decomposition over `Q` by Yun's iterated gcd.

use num_traits::One;

use super::{RatPolynomial, Rational};
use crate::error::{Error, Result};

/// `f = unit * prod factor_i ^ multiplicity_i` with monic, square-free,
/// pairwise coprime, nonconstant factors and strictly increasing multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub unit: Rational,
    pub factors: Vec<(RatPolynomial, u32)>,
}

impl SquarefreeDecomposition {
    /// Multiplies the decomposition back out.
    pub fn expand(&self) -> RatPolynomial {
        let mut acc = RatPolynomial::constant(&self.unit);
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = &acc * f;
            }
        }
        acc
    }

    /// Product of the factors of odd multiplicity (monic; `1` if none).
    pub fn odd_part(&self) -> RatPolynomial {
        self.factors
            .iter()
            .filter(|(_, m)| m % 2 == 1)
            .fold(RatPolynomial::constant(&Rational::one()), |acc, (f, _)| &acc * f)
    }
}

pub fn squarefree_decomposition(f: &RatPolynomial) -> Result<SquarefreeDecomposition> {
    let unit = f.leading_coefficient().ok_or(Error::ZeroPolynomial)?;
    let mut factors = Vec::new();
    if f.is_constant() {
        return Ok(SquarefreeDecomposition { unit, factors });
    }
    let f = f.monic();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0)?;
    let c = df.div_exact(&a0)?;
    let mut d = &c - &b.derivative();
    let mut i = 1u32;
    while !b.is_constant() {
        let a = b.gcd(&d);
        let next_b = b.div_exact(&a)?;
        let c = d.div_exact(&a)?;
        d = &c - &next_b.derivative();
        if !a.is_constant() {
            factors.push((a, i));
        }
        b = next_b;
        i += 1;
    }
    Ok(SquarefreeDecomposition { unit, factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::IntPolynomial;
    use proptest::prelude::*;

    fn rp(s: &str) -> RatPolynomial {
        RatPolynomial::from(s.parse::<IntPolynomial>().unwrap())
    }

    #[test]
    fn examples() {
        let d = squarefree_decomposition(&rp("t^2+t")).unwrap();
        assert_eq!(d.factors, vec![(rp("t^2+t"), 1)]);

        let d = squarefree_decomposition(&rp("t^2(t+1)")).unwrap();
        assert_eq!(d.factors, vec![(rp("t+1"), 1), (rp("t"), 2)]);

        let d = squarefree_decomposition(&rp("5")).unwrap();
        assert!(d.factors.is_empty());
        assert_eq!(d.unit, Rational::from_integer(5.into()));

        assert!(squarefree_decomposition(&RatPolynomial::zero()).is_err());
    }

    #[test]
    fn leading_unit_and_high_multiplicity() {
        let f = rp("-6(t-1)^3(t^2+1)^4(2t+3)");
        let d = squarefree_decomposition(&f).unwrap();
        assert_eq!(d.unit, Rational::from_integer((-12).into()));
        let mults: Vec<u32> = d.factors.iter().map(|(_, m)| *m).collect();
        assert_eq!(mults, vec![1, 3, 4]);
        assert_eq!(d.expand(), f);
    }

    fn small_poly() -> impl Strategy<Value = IntPolynomial> {
        prop::collection::vec(-4i64..=4, 1..4).prop_map(|v| IntPolynomial::from_i64s(&v))
    }

    proptest! {
        #[test]
        fn expand_round_trips(a in small_poly(), b in small_poly(), e in 1u32..4, k in -5i64..=5) {
            prop_assume!(!a.is_zero() && !b.is_zero() && k != 0);
            let f = &(&a.pow(e) * &b) * &IntPolynomial::constant(k);
            let f = RatPolynomial::from(f);
            let d = squarefree_decomposition(&f).unwrap();
            prop_assert_eq!(d.expand(), f);
            for w in d.factors.windows(2) {
                prop_assert!(w[0].1 < w[1].1);
                prop_assert!(w[0].0.gcd(&w[1].0).is_constant());
            }
            for (g, _) in &d.factors {
                prop_assert!(g.gcd(&g.derivative()).is_constant());
                prop_assert_eq!(g.leading_coefficient(), Some(Rational::one()));
            }
        }
    }
}
