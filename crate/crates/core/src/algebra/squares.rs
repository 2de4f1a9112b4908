//! Square tests in `Q` and `Q(t)`, quadratic-extension squares, and p-adic
//! valuations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::factor::is_probable_prime;
use super::{RatPolynomial, Rational};
use crate::error::{Error, Result};

/// Values whose squareness in their fraction field is decidable.
pub trait SquareClass: Sized {
    fn is_square(&self) -> bool;
    fn is_zero_value(&self) -> bool;
    fn product(&self, other: &Self) -> Self;
}

pub fn is_square_integer(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

impl SquareClass for Rational {
    fn is_square(&self) -> bool {
        is_square_integer(self.numer()) && is_square_integer(self.denom())
    }

    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }

    fn product(&self, other: &Self) -> Self {
        self * other
    }
}

impl SquareClass for RatPolynomial {
    /// `Q[t]` is integrally closed, so a square in `Q(t)` is a square in
    /// `Q[t]`; by Gauss, that holds iff the leading coefficient is a rational
    /// square and the primitive part is a square in `Z[t]`.
    fn is_square(&self) -> bool {
        let Some(lc) = self.leading_coefficient() else {
            return true;
        };
        lc.is_square() && self.primitive_part().integer_sqrt().is_some()
    }

    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }

    fn product(&self, other: &Self) -> Self {
        self * other
    }
}

pub fn is_square<T: SquareClass>(value: &T) -> bool {
    value.is_square()
}

/// Whether `a` is a square in `K(sqrt m)`: for non-square `m`, exactly when
/// `a` or `a * m` is a square in `K`.
pub fn square_in_quadratic_extension<T: SquareClass>(a: &T, m: &T) -> Result<bool> {
    if m.is_zero_value() {
        return Err(Error::DegenerateExtension("m is zero".into()));
    }
    if m.is_square() {
        return Err(Error::DegenerateExtension("m is a square".into()));
    }
    Ok(a.is_square() || a.product(m).is_square())
}

fn integer_valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Exponent of the prime `p` in `q`.
pub fn padic_valuation(q: &Rational, p: &BigInt) -> Result<i64> {
    if q.is_zero() {
        return Err(Error::ZeroValuation);
    }
    if !p.is_positive() || !is_probable_prime(&p.magnitude().clone()) {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(integer_valuation(q.numer(), p) - integer_valuation(q.denom(), p))
}
