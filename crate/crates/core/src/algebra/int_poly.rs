//! Dense univariate polynomials over the integers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A polynomial in one variable with arbitrary-precision integer coefficients.
///
/// Coefficients are indexed by exponent and never carry trailing zeros, so the
/// last stored coefficient is the leading one. The zero polynomial stores no
/// coefficients and has no degree (`degree()` returns `None`, standing in for
/// minus infinity). A degree-0 polynomial doubles as a plain integer.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// The polynomial `c * t^k`.
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c.into();
        Self::new(coeffs)
    }

    /// The variable `t` itself.
    pub fn variable() -> Self {
        Self::monomial(1, 1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `t^i`, zero beyond the degree.
    pub fn coefficient(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// True for the zero polynomial and for nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// The integer value of a constant polynomial.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.coeffs.len() {
            0 => Some(BigInt::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// `|f| = max |a_i|`.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    /// Nonnegative gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// The primitive part, normalized to a positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading_coefficient().is_some_and(Signed::is_negative) {
            g = -g;
        }
        self.div_scalar_exact(&g)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Divides every coefficient by `k`; the caller guarantees exactness.
    pub fn div_scalar_exact(&self, k: &BigInt) -> Self {
        debug_assert!(self.coeffs.iter().all(|c| (c % k).is_zero()));
        Self::new(self.coeffs.iter().map(|c| c / k).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluation modulo a word-sized modulus.
    pub fn eval_mod(&self, x: u64, p: u64) -> u64 {
        let mut acc: u64 = 0;
        for c in self.coeffs.iter().rev() {
            let r = mod_u64(c, p);
            acc = ((acc as u128 * x as u128 + r as u128) % p as u128) as u64;
        }
        acc
    }

    /// `self(g(t))`.
    pub fn compose(&self, g: &IntPolynomial) -> Self {
        let mut acc = IntPolynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &IntPolynomial::constant(c.clone());
        }
        acc
    }

    /// `self(t + a)`.
    pub fn shift(&self, a: &BigInt) -> Self {
        self.compose(&IntPolynomial::new(vec![a.clone(), BigInt::one()]))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = IntPolynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Exact division in `Z[t]`: returns `q` with `self = q * d`, or `None`
    /// if `d` does not divide `self` over the integers.
    pub fn div_exact(&self, d: &IntPolynomial) -> Option<IntPolynomial> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let n = self.degree().unwrap();
        if n < dd {
            return None;
        }
        let lc = d.leading_coefficient().unwrap();
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (quo, r) = top.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &quo * dc;
            }
            q[k] = quo;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_remainder(&self, d: &IntPolynomial) -> Result<IntPolynomial> {
        let dd = d.degree().ok_or(Error::ZeroPolynomial)?;
        let Some(n) = self.degree() else {
            return Ok(Self::zero());
        };
        if n < dd {
            return Ok(self.clone());
        }
        let lc = d.leading_coefficient().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut steps = n - dd + 1;
        for k in (0..=n - dd).rev() {
            let top = rem[k + dd].clone();
            for c in rem.iter_mut().take(k + dd + 1) {
                *c *= &lc;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &top * dc;
            }
            rem.truncate(k + dd);
            steps -= 1;
        }
        debug_assert_eq!(steps, 0);
        Ok(Self::new(rem))
    }

    /// Integer square root in `Z[t]`, if `self` is the square of an integer
    /// polynomial.
    pub fn integer_sqrt(&self) -> Option<IntPolynomial> {
        let Some(n) = self.degree() else {
            return Some(Self::zero());
        };
        if n % 2 == 1 {
            return None;
        }
        let lc = self.leading_coefficient().unwrap();
        if lc.is_negative() {
            return None;
        }
        let k = n / 2;
        let top = lc.sqrt();
        if &(&top * &top) != lc {
            return None;
        }
        let two_top = &top * 2;
        let mut root = vec![BigInt::zero(); k + 1];
        root[k] = top;
        for i in (0..k).rev() {
            // coefficient of t^(k+i) contributed by the already known g_j, j > i
            let mut acc = BigInt::zero();
            for j in (i + 1)..=k {
                let l = k + i - j;
                if l > i && l <= k {
                    acc += &root[j] * &root[l];
                }
            }
            let residual = self.coefficient(k + i) - acc;
            let (q, r) = residual.div_rem(&two_top);
            if !r.is_zero() {
                return None;
            }
            root[i] = q;
        }
        let root = Self::new(root);
        (root.square() == *self).then_some(root)
    }

    /// Renders with the given variable name.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let a = c.abs();
            if i == 0 || !a.is_one() {
                out.push_str(&a.to_string());
            }
            match i {
                0 => {}
                1 => out.push_str(var),
                _ => {
                    out.push_str(var);
                    out.push('^');
                    out.push_str(&i.to_string());
                }
            }
        }
        out
    }
}

pub(crate) fn mod_u64(c: &BigInt, p: u64) -> u64 {
    let r = (c.magnitude() % p).iter_u64_digits().next().unwrap_or(0);
    if c.sign() == Sign::Minus && r != 0 {
        p - r
    } else {
        r
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t"))
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::algebra::parse::parse_int_polynomial(s)
    }
}

impl From<BigInt> for IntPolynomial {
    fn from(c: BigInt) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for IntPolynomial {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = self.coeffs.get(i).cloned().unwrap_or_default();
            if let Some(r) = rhs.coeffs.get(i) {
                c += r;
            }
            out.push(c);
        }
        IntPolynomial::new(out)
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        -&self
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(p("t^2+1").compose(&p("t")), p("t^2+1"));
        assert_eq!(p("t^2+t").compose(&p("t+1")), p("t^2+3t+2"));
        assert_eq!(IntPolynomial::zero().compose(&p("t^3-7")), IntPolynomial::zero());
    }

    #[test]
    fn compose_matches_pointwise_evaluation() {
        let f = p("t^2+t");
        let g = p("t+1");
        let h = f.compose(&g);
        for x in 0..4 {
            let x = BigInt::from(x);
            assert_eq!(h.eval(&x), f.eval(&g.eval(&x)));
        }
    }

    #[test]
    fn degree_of_zero_is_none() {
        assert_eq!(IntPolynomial::zero().degree(), None);
        assert_eq!(IntPolynomial::from_i64s(&[3, 0, 0]).degree(), Some(0));
    }

    #[test]
    fn derivative_power_rule() {
        assert_eq!(p("t^2+t").derivative(), p("2t+1"));
        assert!(p("17").derivative().is_zero());
    }

    #[test]
    fn exact_division() {
        let f = p("t^3-1");
        assert_eq!(f.div_exact(&p("t-1")), Some(p("t^2+t+1")));
        assert_eq!(f.div_exact(&p("2t-2")), None);
        assert_eq!(f.div_exact(&p("t+1")), None);
    }

    #[test]
    fn integer_sqrt() {
        assert_eq!(p("t^2+2t+1").integer_sqrt(), Some(p("t+1")));
        assert_eq!(p("4t^4+4t^2+1").integer_sqrt(), Some(p("2t^2+1")));
        assert_eq!(p("t^2+t").integer_sqrt(), None);
        assert_eq!(p("-t^2").integer_sqrt(), None);
    }

    #[test]
    fn display_round_trip() {
        for s in ["7t^4+3", "-t^2+t-1", "t", "0", "-5", "2t^3-t"] {
            assert_eq!(p(s).to_string(), s);
        }
    }

    #[test]
    fn pseudo_remainder_small() {
        // prem(t^2+1, 2t) = 4*(t^2+1) mod 2t = 4
        let r = p("t^2+1").pseudo_remainder(&p("2t")).unwrap();
        assert_eq!(r, p("4"));
    }

    #[test]
    fn mod_reduction_of_negative() {
        assert_eq!(mod_u64(&BigInt::from(-3), 5), 2);
        assert_eq!(p("-t-1").eval_mod(2, 7), 4);
    }
}
