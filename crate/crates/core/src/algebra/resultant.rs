//! Resultants by the subresultant pseudo-remainder sequence, and discriminants.
//!
//! `disc(f) = (-1)^(d(d-1)/2) * Res(f, f') / lc(f)` for `d = deg f >= 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use super::{IntPolynomial, RatPolynomial, Rational};
use crate::error::{Error, Result};

fn pow(b: &BigInt, e: usize) -> BigInt {
    Pow::pow(b, e)
}

/// Resultant over `Z`; the caller rejects zero inputs.
pub(crate) fn int_resultant(f: &IntPolynomial, g: &IntPolynomial) -> BigInt {
    let (Some(mut da), Some(mut db)) = (f.degree(), g.degree()) else {
        return BigInt::zero();
    };
    if da == 0 && db == 0 {
        return BigInt::one();
    }
    let ca = f.content();
    let cb = g.content();
    let mut a = f.div_scalar_exact(&ca);
    let mut b = g.div_scalar_exact(&cb);
    let t = pow(&ca, db) * pow(&cb, da);
    let mut s = BigInt::one();
    if da < db {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut da, &mut db);
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
    }
    let mut g_ = BigInt::one();
    let mut h = BigInt::one();
    while db > 0 {
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = a.pseudo_remainder(&b).expect("nonzero divisor");
        a = b;
        let Some(dr) = r.degree() else {
            return BigInt::zero();
        };
        b = r.div_scalar_exact(&(&g_ * pow(&h, delta)));
        da = db;
        db = dr;
        g_ = a.leading_coefficient().unwrap().clone();
        // h <- g^delta / h^(delta - 1)
        h = if delta == 0 {
            h
        } else {
            let num = pow(&g_, delta);
            let den = pow(&h, delta - 1);
            debug_assert!(num.is_multiple_of(&den));
            num / den
        };
    }
    let lb = b.leading_coefficient().unwrap();
    let hfin = if da == 0 {
        BigInt::one()
    } else {
        pow(lb, da) / pow(&h, da - 1)
    };
    s * t * hfin
}

/// Resultant of two nonzero polynomials over `Q`.
pub fn resultant(f: &RatPolynomial, g: &RatPolynomial) -> Result<Rational> {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return Err(Error::ZeroPolynomial);
    };
    let r = int_resultant(f.numerator(), g.numerator());
    let den = pow(f.denominator(), dg) * pow(g.denominator(), df);
    Ok(Rational::new(r, den))
}

/// Discriminant of a polynomial of degree at least one.
pub fn discriminant(f: &RatPolynomial) -> Result<Rational> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Err(Error::InvalidArgument(
            "discriminant needs degree at least 1".into(),
        ));
    }
    let res = resultant(f, &f.derivative())?;
    let lc = f.leading_coefficient().unwrap();
    let sign = if (d * (d - 1) / 2) % 2 == 1 { -1 } else { 1 };
    Ok(res / lc * Rational::from_integer(sign.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rp(s: &str) -> RatPolynomial {
        RatPolynomial::from(s.parse::<IntPolynomial>().unwrap())
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    /// Determinant of the Sylvester matrix by fraction-free elimination.
    fn sylvester(f: &IntPolynomial, g: &IntPolynomial) -> BigInt {
        let m = f.degree().unwrap();
        let n = g.degree().unwrap();
        let size = m + n;
        if size == 0 {
            return BigInt::one();
        }
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(size);
        for i in 0..n {
            let mut row = vec![BigInt::zero(); size];
            for (j, c) in f.coeffs().iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![BigInt::zero(); size];
            for (j, c) in g.coeffs().iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..size {
            let Some(piv) = (k..size).find(|&r| !rows[r][k].is_zero()) else {
                return BigInt::zero();
            };
            if piv != k {
                rows.swap(piv, k);
                sign = -sign;
            }
            for i in k + 1..size {
                for j in k + 1..size {
                    let v = &rows[k][k] * &rows[i][j] - &rows[i][k] * &rows[k][j];
                    rows[i][j] = v / &prev;
                }
                rows[i][k] = BigInt::zero();
            }
            prev = rows[k][k].clone();
        }
        sign * &rows[size - 1][size - 1]
    }

    #[test]
    fn documented_values() {
        assert_eq!(resultant(&rp("t^2+1"), &rp("2t")).unwrap(), q(4));
        assert_eq!(discriminant(&rp("t^2+1")).unwrap(), q(-4));
        assert_eq!(discriminant(&rp("t^4+2t^2+2")).unwrap(), q(512));
    }

    #[test]
    fn quartic_closed_form() {
        // disc(x^4 + p x^2 + q) = 16 p^4 q - 128 p^2 q^2 + 256 q^3
        for (p, qq) in [(2i64, 2i64), (-4, 2), (0, 3), (-6, 34), (3, -7)] {
            let f = IntPolynomial::from_i64s(&[qq, 0, p, 0, 1]);
            let want = 16 * p.pow(4) * qq - 128 * p * p * qq * qq + 256 * qq.pow(3);
            assert_eq!(discriminant(&RatPolynomial::from(f)).unwrap(), q(want));
        }
    }

    #[test]
    fn rational_and_constant_inputs() {
        let half = RatPolynomial::new("t-1".parse().unwrap(), 2.into()).unwrap();
        assert_eq!(
            resultant(&half, &rp("t^2+3")).unwrap(),
            Rational::new(4.into(), 4.into())
        );
        assert_eq!(resultant(&rp("3"), &rp("t^2+1")).unwrap(), q(9));
        assert_eq!(resultant(&rp("t^3+1"), &rp("5")).unwrap(), q(125));
        assert!(resultant(&RatPolynomial::zero(), &rp("t")).is_err());
        assert_eq!(discriminant(&rp("3t+1")).unwrap(), q(1));
        assert_eq!(discriminant(&rp("t^2-3t+2")).unwrap(), q(1));
    }

    fn poly(max_deg: usize) -> impl Strategy<Value = IntPolynomial> {
        prop::collection::vec(-6i64..=6, 1..=max_deg + 1)
            .prop_map(|v| IntPolynomial::from_i64s(&v))
            .prop_filter("nonzero", |p| !p.is_zero())
    }

    proptest! {
        #[test]
        fn matches_sylvester(f in poly(6), g in poly(5)) {
            prop_assert_eq!(int_resultant(&f, &g), sylvester(&f, &g));
        }

        #[test]
        fn antisymmetry(f in poly(5), g in poly(5)) {
            let (m, n) = (f.degree().unwrap(), g.degree().unwrap());
            let s = if m * n % 2 == 1 { -1 } else { 1 };
            prop_assert_eq!(int_resultant(&f, &g), int_resultant(&g, &f) * s);
        }

        #[test]
        fn vanishes_iff_common_factor(a in poly(2), b in poly(3), c in poly(3)) {
            let f = &a * &b;
            let g = &a * &c;
            let (f, g) = (RatPolynomial::from(f), RatPolynomial::from(g));
            let r = resultant(&f, &g).unwrap();
            prop_assert_eq!(r.is_zero(), !f.gcd(&g).is_constant());
            let (b, c) = (RatPolynomial::from(b), RatPolynomial::from(c));
            let r = resultant(&b, &c).unwrap();
            prop_assert_eq!(r.is_zero(), !b.gcd(&c).is_constant());
        }
    }
}
