//! Exact arithmetic: big integers and rationals, polynomials over `Z`, `Q`
//! and `F_2`, square and square-free tests, valuations, resultants and
//! integer factoring.

mod f2_poly;
mod factor;
mod int_poly;
pub mod modular;
mod parse;
mod rat_poly;
mod resultant;
mod squarefree;
mod squares;

pub use f2_poly::F2Polynomial;
pub use factor::{factor_integer, FactorBudget, Factorization};
pub use int_poly::IntPolynomial;
pub(crate) use int_poly::mod_u64;
pub use parse::{parse_int_polynomial, parse_map, parse_rational};
pub use rat_poly::RatPolynomial;
pub use resultant::{discriminant, resultant};
pub use squarefree::{squarefree_decomposition, SquarefreeDecomposition};
pub use squares::{
    is_square, is_square_integer, padic_valuation, square_in_quadratic_extension, SquareClass,
};

/// Exact rational numbers in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// `f(g(t))`.
pub fn poly_compose(f: &IntPolynomial, g: &IntPolynomial) -> IntPolynomial {
    f.compose(g)
}

/// Coefficient-wise reduction modulo 2.
pub fn reduce_mod2(f: &IntPolynomial) -> F2Polynomial {
    F2Polynomial::from_int_poly(f)
}
