//! Polynomials over the field with two elements, packed 64 coefficients per word.

use std::fmt;
use std::ops::{Add, Mul};

use num_integer::Integer;

use super::IntPolynomial;

/// Bit `i` of the packed words is the coefficient of `t^i`; no trailing zero
/// words, so the top word has its leading bit set unless the polynomial is zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct F2Polynomial {
    words: Vec<u64>,
}

impl F2Polynomial {
    fn normalized(mut words: Vec<u64>) -> Self {
        while words.last() == Some(&0) {
            words.pop();
        }
        F2Polynomial { words }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_bits(&[true])
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut words = vec![0u64; bits.len().div_ceil(64)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Self::normalized(words)
    }

    pub fn from_int_poly(f: &IntPolynomial) -> Self {
        let bits: Vec<bool> = f.coeffs().iter().map(|c| c.is_odd()).collect();
        Self::from_bits(&bits)
    }

    pub fn bit(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn degree(&self) -> Option<usize> {
        let top = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    /// Even-exponent terms vanish: `d/dt t^i = i t^(i-1)`.
    pub fn derivative(&self) -> Self {
        let Some(n) = self.degree() else {
            return Self::zero();
        };
        let bits: Vec<bool> = (1..=n).map(|i| i % 2 == 1 && self.bit(i)).collect();
        Self::from_bits(&bits)
    }
}

impl Add for &F2Polynomial {
    type Output = F2Polynomial;
    fn add(self, rhs: &F2Polynomial) -> F2Polynomial {
        let n = self.words.len().max(rhs.words.len());
        F2Polynomial::normalized(
            (0..n)
                .map(|i| {
                    self.words.get(i).copied().unwrap_or(0) ^ rhs.words.get(i).copied().unwrap_or(0)
                })
                .collect(),
        )
    }
}

impl Mul for &F2Polynomial {
    type Output = F2Polynomial;
    fn mul(self, rhs: &F2Polynomial) -> F2Polynomial {
        let (Some(a), Some(b)) = (self.degree(), rhs.degree()) else {
            return F2Polynomial::zero();
        };
        let mut bits = vec![false; a + b + 1];
        for i in (0..=a).filter(|&i| self.bit(i)) {
            for j in (0..=b).filter(|&j| rhs.bit(j)) {
                bits[i + j] ^= true;
            }
        }
        F2Polynomial::from_bits(&bits)
    }
}

impl fmt::Display for F2Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<i64> = (0..=self.degree().unwrap_or(0))
            .map(|i| self.bit(i) as i64)
            .collect();
        write!(f, "{}", IntPolynomial::from_i64s(&coeffs))
    }
}

impl fmt::Debug for F2Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Polynomial({self})")
    }
}
