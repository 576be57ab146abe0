//! Exact arithmetic substrate: rationals, dense polynomials, 2×2 polynomial
//! matrices and their fractional linear action on complex values.

mod mat2;
mod poly;
pub mod rational;

pub use mat2::{mobius_apply_numeric, Mat2};
pub use poly::Poly;
pub use rational::{parse_rational, Rational};

/// Complex evaluation point or value.
pub type ComplexValue = num_complex::Complex64;

pub fn mobius_apply(t: &Mat2, w: ComplexValue, z: ComplexValue) -> crate::Result<ComplexValue> {
    t.mobius_apply(w, z)
}
