use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, int, sqrt_exact, to_f64, Rational};

/// Univariate polynomial in `z` with exact rational coefficients, stored
/// densely in ascending degree. The highest stored coefficient is never zero;
/// the zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Poly::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(lc) => self.scale(&lc.recip()),
            None => Poly::zero(),
        }
    }

    pub fn eval_exact(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation at a complex point; coefficients are rounded to `f64`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + to_f64(c))
    }

    /// Euclidean division. Returns `None` when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> Option<(Poly, Poly)> {
        let dd = divisor.degree()?;
        let lc_inv = divisor.leading()?.recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for shift in (0..quot.len()).rev() {
            let top = &rem[shift + dd];
            if top.is_zero() {
                continue;
            }
            let q = top * &lc_inv;
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &q * d;
            }
            quot[shift] = q;
        }
        rem.truncate(dd);
        Some((Poly::new(quot), Poly::new(rem)))
    }

    /// Monic greatest common divisor; zero only when both inputs are zero.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let mut x = a.monic();
        let mut y = b.monic();
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y).expect("nonzero divisor");
            x = y;
            y = r.monic();
        }
        x
    }

    /// Exact square root over the rationals, if `self` is a perfect square.
    pub fn sqrt(&self) -> Option<Poly> {
        let Some(deg) = self.degree() else {
            return Some(Poly::zero());
        };
        if deg % 2 == 1 {
            return None;
        }
        let half = deg / 2;
        let top = sqrt_exact(self.leading()?)?;
        let mut root = vec![Rational::zero(); half + 1];
        root[half] = top.clone();
        let two_top = &top + &top;
        for k in (0..half).rev() {
            // Coefficient of z^{half+k} in root², excluding the 2·root[half]·root[k] term.
            let mut acc = Rational::zero();
            for i in (k + 1)..half {
                let j = half + k - i;
                if j > k && j < half {
                    acc += &root[i] * &root[j];
                }
            }
            root[k] = (self.coeff(half + k) - acc) / &two_top;
        }
        let root = Poly::new(root);
        if &(&root * &root) == self {
            Some(root)
        } else {
            None
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Self {
        Poly::constant(c)
    }
}

fn add_coeffs(lhs: &[Rational], rhs: &[Rational], negate_rhs: bool) -> Poly {
    let n = lhs.len().max(rhs.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let a = lhs.get(i);
        let b = rhs.get(i);
        out.push(match (a, b) {
            (Some(a), Some(b)) if negate_rhs => a - b,
            (Some(a), Some(b)) => a + b,
            (Some(a), None) => a.clone(),
            (None, Some(b)) if negate_rhs => -b,
            (None, Some(b)) => b.clone(),
            (None, None) => unreachable!(),
        });
    }
    Poly::new(out)
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        add_coeffs(&self.coeffs, &rhs.coeffs, false)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        add_coeffs(&self.coeffs, &rhs.coeffs, true)
    }
}

/// Integer coefficients over a common denominator.
fn integer_form(p: &Poly) -> (Vec<BigInt>, BigInt) {
    let den = p
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let nums = p
        .coeffs
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    (nums, den)
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        // Convolve integer numerators so that each output coefficient is
        // reduced once instead of once per term.
        let (xs, dx) = integer_form(self);
        let (ys, dy) = integer_form(rhs);
        let mut out = vec![BigInt::zero(); xs.len() + ys.len() - 1];
        for (i, a) in xs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in ys.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        let den = dx * dy;
        Poly::new(
            out.into_iter()
                .map(|n| Rational::new(n, den.clone()))
                .collect(),
        )
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Poly> for &'a Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                f.write_str(&format_rational(&mag))?;
            }
            match i {
                0 => {}
                1 => f.write_str("z")?,
                _ => write!(f, "z^{i}")?,
            }
        }
        Ok(())
    }
}
