use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use super::poly::Poly;
use crate::error::{Error, Result};

/// 2×2 matrix of polynomials, acting on values by the fractional linear map
/// `w ↦ (a11·w + a12) / (a21·w + a22)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a11: Poly,
    pub a12: Poly,
    pub a21: Poly,
    pub a22: Poly,
}

impl Mat2 {
    pub fn new(a11: Poly, a12: Poly, a21: Poly, a22: Poly) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub fn identity() -> Self {
        Mat2::new(Poly::one(), Poly::zero(), Poly::zero(), Poly::one())
    }

    /// `[[0, 1], [1, 0]]`, the map `w ↦ 1/w`.
    pub fn inversion() -> Self {
        Mat2::new(Poly::zero(), Poly::one(), Poly::one(), Poly::zero())
    }

    pub fn det(&self) -> Poly {
        &self.a11 * &self.a22 - &self.a12 * &self.a21
    }

    /// The adjugate; equals the inverse whenever the determinant is 1.
    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(self.a22.clone(), -&self.a12, -&self.a21, self.a11.clone())
    }

    pub fn eval(&self, z: Complex64) -> [[Complex64; 2]; 2] {
        [
            [self.a11.eval(z), self.a12.eval(z)],
            [self.a21.eval(z), self.a22.eval(z)],
        ]
    }

    pub fn max_degree(&self) -> Option<usize> {
        [&self.a11, &self.a12, &self.a21, &self.a22]
            .iter()
            .filter_map(|p| p.degree())
            .max()
    }

    /// Applies the fractional linear map with entries evaluated at `z` to `w`.
    pub fn mobius_apply(&self, w: Complex64, z: Complex64) -> Result<Complex64> {
        mobius_apply_numeric(&self.eval(z), w)
    }
}

pub fn mobius_apply_numeric(t: &[[Complex64; 2]; 2], w: Complex64) -> Result<Complex64> {
    let num = t[0][0] * w + t[0][1];
    let den = t[1][0] * w + t[1][1];
    if den.norm() == 0.0 || !den.is_finite() {
        return Err(Error::DivisionByZero);
    }
    Ok(num / den)
}

impl<'a> Mul<&'a Mat2> for &'a Mat2 {
    type Output = Mat2;
    fn mul(self, b: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a11 * &b.a11 + &self.a12 * &b.a21,
            &self.a11 * &b.a12 + &self.a12 * &b.a22,
            &self.a21 * &b.a11 + &self.a22 * &b.a21,
            &self.a21 * &b.a12 + &self.a22 * &b.a22,
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, b: Mat2) -> Mat2 {
        &self * &b
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.a11, self.a12, self.a21, self.a22
        )
    }
}
