//! Text grammar for polynomials.
//!
//! Integer coefficients, variables `t` (the coefficient ring variable) and `x`
//! (the map variable), `^` with a nonnegative integer exponent, `+`/`-`
//! between terms, optional `*`, implicit multiplication (`7t^4`, `2(t+1)`),
//! and parentheses (`-(7t^4+3)`). Whitespace is ignored.

use num_bigint::BigInt;
use num_traits::Zero;

use super::IntPolynomial;
use crate::error::{Error, Result};

/// A polynomial in `x` whose coefficients are polynomials in `t`.
/// Index `k` holds the coefficient of `x^k`; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BiPoly(pub Vec<IntPolynomial>);

impl BiPoly {
    fn normalize(mut self) -> Self {
        while self.0.last().is_some_and(IntPolynomial::is_zero) {
            self.0.pop();
        }
        self
    }

    fn constant(c: IntPolynomial) -> Self {
        BiPoly(vec![c]).normalize()
    }

    fn x() -> Self {
        BiPoly(vec![IntPolynomial::zero(), IntPolynomial::one()])
    }

    fn add(&self, o: &BiPoly) -> BiPoly {
        let n = self.0.len().max(o.0.len());
        let z = IntPolynomial::zero();
        BiPoly(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z))
                .collect(),
        )
        .normalize()
    }

    fn neg(&self) -> BiPoly {
        BiPoly(self.0.iter().map(|c| -c).collect())
    }

    fn mul(&self, o: &BiPoly) -> BiPoly {
        if self.0.is_empty() || o.0.is_empty() {
            return BiPoly(Vec::new());
        }
        let mut out = vec![IntPolynomial::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BiPoly(out).normalize()
    }

    fn pow(&self, e: u32) -> BiPoly {
        let mut acc = BiPoly::constant(IntPolynomial::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    allow_x: bool,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, allow_x: bool) -> Self {
        Parser {
            chars: src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
            allow_x,
            _src: src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or_else(|| self._src.len())
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn expr(&mut self) -> Result<BiPoly> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.bump();
                self.term()?.neg()
            }
            Some('+') => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                '-' => {
                    self.bump();
                    acc = acc.add(&self.term()?.neg());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Some(c) if c.is_ascii_digit() || c == 't' || c == 'x' || c == '(' => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<BiPoly> {
        let base = self.primary()?;
        if self.peek() == Some('^') {
            self.bump();
            let at = self.offset();
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| Error::parse(at, "exponent too large"))?;
            if e > 4096 {
                return Err(Error::parse(at, "exponent too large"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<BiPoly> {
        let at = self.offset();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(BiPoly::constant(IntPolynomial::constant(n)))
            }
            Some('t') => {
                self.bump();
                Ok(BiPoly::constant(IntPolynomial::variable()))
            }
            Some('x') => {
                if !self.allow_x {
                    return Err(Error::parse(at, "variable `x` is not allowed here"));
                }
                self.bump();
                Ok(BiPoly::x())
            }
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                if self.bump() != Some(')') {
                    return Err(Error::parse(self.offset(), "expected `)`"));
                }
                Ok(inner)
            }
            Some(c) => Err(Error::parse(at, format!("unexpected character `{c}`"))),
            None => Err(Error::parse(at, "unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let at = self.offset();
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.bump();
        }
        if digits.is_empty() {
            return Err(Error::parse(at, "expected an integer"));
        }
        Ok(digits.parse().expect("ascii digits"))
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(Error::parse(self.offset(), format!("unexpected character `{c}`"))),
        }
    }
}

fn parse_bipoly(src: &str, allow_x: bool) -> Result<BiPoly> {
    let mut p = Parser::new(src, allow_x);
    if p.peek().is_none() {
        return Err(Error::parse(0, "empty polynomial"));
    }
    let out = p.expr()?;
    p.finish()?;
    Ok(out)
}

/// Parses a polynomial in `t` with integer coefficients.
pub fn parse_int_polynomial(src: &str) -> Result<IntPolynomial> {
    let b = parse_bipoly(src, false)?;
    Ok(b.0.into_iter().next().unwrap_or_default())
}

/// Parses a map in `x` with coefficients in `Z[t]`, returning the
/// coefficient of each power of `x`.
pub fn parse_map(src: &str) -> Result<Vec<IntPolynomial>> {
    Ok(parse_bipoly(src, true)?.0)
}

/// Parses a rational constant `a` or `a/b` with an optional sign.
pub fn parse_rational(src: &str) -> Result<num_rational::BigRational> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s.as_str(), "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::parse(0, format!("not an integer: `{num}`")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::parse(s.len() - den.len(), format!("not an integer: `{den}`")))?;
    if d.is_zero() {
        return Err(Error::parse(s.len() - den.len(), "zero denominator"));
    }
    Ok(num_rational::BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar_examples() {
        let f = parse_int_polynomial("7t^4+3").unwrap();
        assert_eq!(f, IntPolynomial::from_i64s(&[3, 0, 0, 0, 7]));
        let g = parse_int_polynomial("-(7t^4+3)").unwrap();
        assert_eq!(g, -&f);
        let h = parse_int_polynomial(" t ^ 4 + 5 t ").unwrap();
        assert_eq!(h, IntPolynomial::from_i64s(&[0, 5, 0, 0, 1]));
        assert_eq!(
            parse_int_polynomial("2(t+1)^2").unwrap(),
            IntPolynomial::from_i64s(&[2, 4, 2])
        );
    }

    #[test]
    fn parses_maps() {
        let m = parse_map("x^2+(t^4+5t)").unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m[0], IntPolynomial::from_i64s(&[0, 5, 0, 0, 1]));
        assert!(m[1].is_zero());
        assert!(m[2].is_one());
        let m = parse_map("x^2-6x").unwrap();
        assert_eq!(m[1], IntPolynomial::constant(-6));
    }

    #[test]
    fn reports_position() {
        match parse_int_polynomial("t^2+&") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_int_polynomial("x+1").is_err());
        assert!(parse_int_polynomial("").is_err());
        assert!(parse_int_polynomial("(t+1").is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(
            parse_rational("-3/4").unwrap(),
            num_rational::BigRational::new((-3).into(), 4.into())
        );
        assert!(parse_rational("1/0").is_err());
    }
}
