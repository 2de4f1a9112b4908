//! Polynomials over the rationals, stored as an integer numerator over a
//! positive common denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{modular, IntPolynomial, Rational};
use crate::error::{Error, Result};

/// `numerator / denominator` in lowest terms: the denominator is positive and
/// coprime to the content of the numerator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatPolynomial {
    numerator: IntPolynomial,
    denominator: BigInt,
}

impl RatPolynomial {
    pub fn new(numerator: IntPolynomial, denominator: BigInt) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(Self::normalized(numerator, denominator))
    }

    fn normalized(numerator: IntPolynomial, mut denominator: BigInt) -> Self {
        if numerator.is_zero() {
            return RatPolynomial {
                numerator,
                denominator: BigInt::one(),
            };
        }
        let mut num = numerator;
        if denominator.is_negative() {
            num = -num;
            denominator = -denominator;
        }
        let g = num.content().gcd(&denominator);
        if !g.is_one() {
            num = num.div_scalar_exact(&g);
            denominator /= &g;
        }
        RatPolynomial {
            numerator: num,
            denominator,
        }
    }

    pub fn zero() -> Self {
        Self::from(IntPolynomial::zero())
    }

    pub fn constant(c: &Rational) -> Self {
        Self::normalized(IntPolynomial::constant(c.numer().clone()), c.denom().clone())
    }

    pub fn numerator(&self) -> &IntPolynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn degree(&self) -> Option<usize> {
        self.numerator.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.numerator.is_constant()
    }

    pub fn coefficient(&self, i: usize) -> Rational {
        Rational::new(self.numerator.coefficient(i), self.denominator.clone())
    }

    pub fn leading_coefficient(&self) -> Option<Rational> {
        self.numerator
            .leading_coefficient()
            .map(|c| Rational::new(c.clone(), self.denominator.clone()))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::normalized(
            self.numerator.scale(k.numer()),
            &self.denominator * k.denom(),
        )
    }

    pub fn derivative(&self) -> Self {
        Self::normalized(self.numerator.derivative(), self.denominator.clone())
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            Some(lc) => self.scale(&lc.recip()),
            None => self.clone(),
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.numerator.coeffs().iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc / Rational::from_integer(self.denominator.clone())
    }

    /// Euclidean division over `Q`.
    pub fn div_rem(&self, d: &RatPolynomial) -> Result<(RatPolynomial, RatPolynomial)> {
        let dd = d.degree().ok_or(Error::ZeroPolynomial)?;
        let lc = d.leading_coefficient().unwrap();
        let mut rem: Vec<Rational> = (0..=self.degree().unwrap_or(0))
            .map(|i| self.coefficient(i))
            .collect();
        let dcoeffs: Vec<Rational> = (0..=dd).map(|i| d.coefficient(i)).collect();
        let Some(n) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if n < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![Rational::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let top = &rem[k + dd] / &lc;
            if !top.is_zero() {
                for (i, dc) in dcoeffs.iter().enumerate() {
                    rem[k + i] -= &top * dc;
                }
            }
            q[k] = top;
        }
        rem.truncate(dd);
        Ok((from_rationals(&q), from_rationals(&rem)))
    }

    /// Exact quotient; errors if `d` does not divide `self`.
    pub fn div_exact(&self, d: &RatPolynomial) -> Result<RatPolynomial> {
        if d.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        // self = N/a, d = M/b; self/d = (N/M) * (b/a) with N/M exact over Q.
        let m = &d.numerator;
        let mcont = m.content();
        let mpp = m.div_scalar_exact(&mcont);
        let q = self.numerator.div_exact(&mpp).ok_or_else(|| {
            Error::InvalidArgument("divisor does not divide dividend".into())
        })?;
        Ok(Self::normalized(
            q.scale(&d.denominator),
            &self.denominator * mcont,
        ))
    }

    /// Monic gcd over `Q` (zero only if both inputs are zero).
    pub fn gcd(&self, other: &RatPolynomial) -> RatPolynomial {
        RatPolynomial::from(modular::gcd(&self.numerator, &other.numerator)).monic()
    }

    /// Primitive integer polynomial with positive leading coefficient that is
    /// a rational multiple of `self`.
    pub fn primitive_part(&self) -> IntPolynomial {
        self.numerator.primitive_part()
    }
}

pub(crate) fn from_rationals(coeffs: &[Rational]) -> RatPolynomial {
    let den = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let num = IntPolynomial::new(
        coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect(),
    );
    RatPolynomial::normalized(num, den)
}

impl From<IntPolynomial> for RatPolynomial {
    fn from(numerator: IntPolynomial) -> Self {
        RatPolynomial {
            numerator,
            denominator: BigInt::one(),
        }
    }
}

impl fmt::Display for RatPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_one() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({})/{}", self.numerator, self.denominator)
        }
    }
}

impl fmt::Debug for RatPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPolynomial({self})")
    }
}

impl Add for &RatPolynomial {
    type Output = RatPolynomial;
    fn add(self, rhs: &RatPolynomial) -> RatPolynomial {
        let l = self.denominator.lcm(&rhs.denominator);
        let a = self.numerator.scale(&(&l / &self.denominator));
        let b = rhs.numerator.scale(&(&l / &rhs.denominator));
        RatPolynomial::normalized(&a + &b, l)
    }
}

impl Sub for &RatPolynomial {
    type Output = RatPolynomial;
    fn sub(self, rhs: &RatPolynomial) -> RatPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &RatPolynomial {
    type Output = RatPolynomial;
    fn neg(self) -> RatPolynomial {
        RatPolynomial {
            numerator: -&self.numerator,
            denominator: self.denominator.clone(),
        }
    }
}

impl Mul for &RatPolynomial {
    type Output = RatPolynomial;
    fn mul(self, rhs: &RatPolynomial) -> RatPolynomial {
        RatPolynomial::normalized(
            &self.numerator * &rhs.numerator,
            &self.denominator * &rhs.denominator,
        )
    }
}
