use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{parse_int_polynomial, parse_map, IntPolynomial};
use crate::error::{Error, Result};

/// Coefficient ring of the maps and of their orbit points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ring {
    Integers,
    IntPolynomials,
}

/// A polynomial map in `x`; entry `k` is the coefficient of `x^k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Map {
    coeffs: Vec<IntPolynomial>,
}

impl Map {
    pub fn new(mut coeffs: Vec<IntPolynomial>) -> Self {
        while coeffs.last().is_some_and(IntPolynomial::is_zero) {
            coeffs.pop();
        }
        Map { coeffs }
    }

    /// `x^2 + c`.
    pub fn critical(c: IntPolynomial) -> Self {
        Map::new(vec![c, IntPolynomial::zero(), IntPolynomial::one()])
    }

    pub fn coeffs(&self) -> &[IntPolynomial] {
        &self.coeffs
    }

    /// Degree in `x` (zero for constant maps, including the zero map).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// `c` when the map is `x^2 + c`.
    pub fn critical_constant(&self) -> Option<&IntPolynomial> {
        (self.coeffs.len() == 3 && self.coeffs[1].is_zero() && self.coeffs[2].is_one())
            .then(|| &self.coeffs[0])
    }

    pub fn apply(&self, v: &IntPolynomial) -> IntPolynomial {
        if let Some(c) = self.critical_constant() {
            return &v.square() + c;
        }
        let mut acc = IntPolynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * v) + c;
        }
        acc
    }

    /// `self(g(x))` for maps with integer coefficients, as a polynomial in `x`.
    pub(crate) fn compose_integer(&self, g: &IntPolynomial) -> Option<IntPolynomial> {
        let coeffs: Option<Vec<_>> = self.coeffs.iter().map(IntPolynomial::as_constant).collect();
        Some(IntPolynomial::new(coeffs?).compose(g))
    }

    /// Largest degree in `t` among the coefficients.
    pub(crate) fn max_coefficient_degree(&self) -> usize {
        self.coeffs.iter().filter_map(IntPolynomial::degree).max().unwrap_or(0)
    }
}

fn render_coefficient(c: &IntPolynomial, first: bool, out: &mut String) {
    let multi_term = c.coeffs().iter().filter(|a| !a.is_zero()).count() > 1;
    let neg = c.leading_coefficient().is_some_and(Signed::is_negative);
    let body = if neg { -c } else { c.clone() };
    if neg {
        out.push('-');
    } else if !first {
        out.push('+');
    }
    if multi_term {
        out.push('(');
        out.push_str(&body.to_string());
        out.push(')');
    } else {
        out.push_str(&body.to_string());
    }
}

impl fmt::Display for Map {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let first = out.is_empty();
            if k == 0 {
                render_coefficient(c, first, &mut out);
                continue;
            }
            if c.is_one() {
                if !first {
                    out.push('+');
                }
            } else if (-c).is_one() {
                out.push('-');
            } else {
                render_coefficient(c, first, &mut out);
            }
            out.push('x');
            if k > 1 {
                out.push('^');
                out.push_str(&k.to_string());
            }
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for Map {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Map({self})")
    }
}

/// A finite set of pairwise distinct maps over a fixed ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    maps: Vec<Map>,
    ring: Ring,
}

impl GeneratorSet {
    pub fn new(maps: Vec<Map>, ring: Ring) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::InvalidSet("no maps given".into()));
        }
        for (i, m) in maps.iter().enumerate() {
            if maps[..i].contains(m) {
                return Err(Error::InvalidSet(format!("map {m} listed twice")));
            }
            if ring == Ring::Integers && m.coeffs.iter().any(|c| !c.is_constant()) {
                return Err(Error::InvalidSet(format!(
                    "map {m} has coefficients involving t over the integers"
                )));
            }
        }
        Ok(GeneratorSet { maps, ring })
    }

    /// `{x^2 + c_1, ..., x^2 + c_s}`.
    pub fn critical(cs: Vec<IntPolynomial>, ring: Ring) -> Result<Self> {
        Self::new(cs.into_iter().map(Map::critical).collect(), ring)
    }

    pub fn critical_i64(cs: &[i64]) -> Result<Self> {
        Self::critical(cs.iter().map(|&c| IntPolynomial::constant(c)).collect(), Ring::Integers)
    }

    /// Parses `"-2; -6"` or `"t^4+5t; -(7t^4+3)"` as critical constants.
    pub fn parse_critical(src: &str, ring: Ring) -> Result<Self> {
        let cs = split_list(src)
            .map(parse_int_polynomial)
            .collect::<Result<Vec<_>>>()?;
        Self::critical(cs, ring)
    }

    /// Parses `"x^2-2; x^2-6"` or `"x^2+x; x^2-6x"` as general maps.
    pub fn parse_maps(src: &str, ring: Ring) -> Result<Self> {
        let maps = split_list(src)
            .map(|s| parse_map(s).map(Map::new))
            .collect::<Result<Vec<_>>>()?;
        Self::new(maps, ring)
    }

    pub fn maps(&self) -> &[Map] {
        &self.maps
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn is_critical(&self) -> bool {
        self.maps.iter().all(|m| m.critical_constant().is_some())
    }

    /// The constants `c_i`; errors unless every map is `x^2 + c_i`.
    pub fn critical_constants(&self) -> Result<Vec<IntPolynomial>> {
        self.maps
            .iter()
            .map(|m| {
                m.critical_constant().cloned().ok_or_else(|| {
                    Error::InvalidSet(format!("{m} is not of the form x^2 + c"))
                })
            })
            .collect()
    }

    /// Integer constants of a critical set over the integers.
    pub(crate) fn integer_constants(&self) -> Result<Vec<num_bigint::BigInt>> {
        if self.ring != Ring::Integers {
            return Err(Error::UnsupportedRing("integer coefficients required".into()));
        }
        Ok(self
            .critical_constants()?
            .iter()
            .map(|c| c.as_constant().expect("checked at construction"))
            .collect())
    }

    /// Canonical text, maps joined by `"; "`.
    pub fn render(&self) -> String {
        self.maps
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ")
    }
}

fn split_list(src: &str) -> impl Iterator<Item = &str> {
    src.split(';').map(str::trim).filter(|s| !s.is_empty())
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering_round_trips() {
        for src in ["x^2-2; x^2-6", "x^2+x; x^2-6x", "x^2+(t^4+5t); x^2-(7t^4+3)", "x^2; x^2+t"] {
            let s = GeneratorSet::parse_maps(src, Ring::IntPolynomials).unwrap();
            assert_eq!(s.render(), src);
            let again = GeneratorSet::parse_maps(&s.render(), Ring::IntPolynomials).unwrap();
            assert_eq!(again, s);
        }
    }

    #[test]
    fn critical_shorthand() {
        let s = GeneratorSet::parse_critical("-2; -6", Ring::Integers).unwrap();
        assert_eq!(s.render(), "x^2-2; x^2-6");
        assert!(s.is_critical());
        let s = GeneratorSet::parse_critical("t^4+5t; -(7t^4+3)", Ring::IntPolynomials).unwrap();
        assert_eq!(s.critical_constants().unwrap()[1].to_string(), "-7t^4-3");
    }

    #[test]
    fn rejects_bad_sets() {
        assert!(GeneratorSet::parse_critical("1; 1", Ring::Integers).is_err());
        assert!(GeneratorSet::parse_critical("t", Ring::Integers).is_err());
        assert!(GeneratorSet::parse_critical("", Ring::Integers).is_err());
        let s = GeneratorSet::parse_maps("x^2+x", Ring::Integers).unwrap();
        assert!(s.critical_constants().is_err());
    }

    #[test]
    fn application() {
        let m = Map::new(parse_map("x^2-6x").unwrap());
        assert_eq!(m.apply(&IntPolynomial::constant(6)), IntPolynomial::zero());
        let m = Map::critical("t".parse().unwrap());
        assert_eq!(m.apply(&"t".parse().unwrap()), "t^2+t".parse().unwrap());
    }
}
