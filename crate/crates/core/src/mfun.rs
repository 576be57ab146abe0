//! Numeric m-functions, coefficient stripping as a function identity, and
//! exact Laurent expansion at infinity with continued fraction recovery.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::rational::{sqrt_exact, to_f64};
use crate::exactalg::{Poly, Rational};
use crate::jacobi::{reversed_periodic, JacobiPair, JacobiSequence};
use crate::orthopoly::conj_transfer;
use crate::quadratic::{periodic_quadratic, QuadraticRelation};

/// Threshold below which an imaginary part counts as zero for branch selection.
pub const BRANCH_EPS: f64 = 1e-13;
/// Offset used to resolve an ambiguous branch by continuity.
pub const BRANCH_DELTA: f64 = 1e-6;

fn check_upper(z: Complex64) -> Result<()> {
    if z.im > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::NotInUpperHalfPlane { re: z.re, im: z.im })
    }
}

/// Evaluator for the m-function of an eventually periodic sequence. Caches the
/// fixed-point relation of the periodic tail.
#[derive(Clone, Debug)]
pub struct MFunction {
    pre: Vec<(f64, f64)>,
    tail: QuadraticRelation,
}

impl MFunction {
    pub fn new(seq: &JacobiSequence) -> Result<Self> {
        Ok(MFunction {
            pre: seq
                .preperiodic()
                .iter()
                .map(|q| (to_f64(&(&q.a * &q.a)), to_f64(&q.b)))
                .collect(),
            tail: periodic_quadratic(seq.periodic())?,
        })
    }

    /// The purely periodic tail `m` at `z`.
    pub fn eval_tail(&self, z: Complex64) -> Result<Complex64> {
        check_upper(z)?;
        let roots = self.tail.roots(z)?;
        let upper: Vec<Complex64> = roots
            .iter()
            .copied()
            .filter(|r| r.im > BRANCH_EPS)
            .collect();
        if upper.len() == 1 {
            return Ok(upper[0]);
        }
        // Ambiguous: follow the upper branch down from z + iδ.
        let shifted = z + Complex64::new(0.0, BRANCH_DELTA);
        let near = self.tail.roots(shifted)?;
        let near_upper: Vec<Complex64> =
            near.iter().copied().filter(|r| r.im > BRANCH_EPS).collect();
        if near_upper.len() != 1 {
            return Err(Error::BranchAmbiguity { re: z.re, im: z.im });
        }
        let target = near_upper[0];
        let best = if (roots[0] - target).norm() <= (roots[1] - target).norm() {
            roots[0]
        } else {
            roots[1]
        };
        Ok(best)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let mut val = self.eval_tail(z)?;
        for &(a_sq, b) in self.pre.iter().rev() {
            let den = b - z - a_sq * val;
            if den.norm() == 0.0 {
                return Err(Error::DivisionByZero);
            }
            val = 1.0 / den;
        }
        Ok(val)
    }
}

/// The purely periodic m-function: the root of the fixed-point quadratic in
/// the upper half-plane.
pub fn eval_periodic_m(periodic: &[JacobiPair], z: Complex64) -> Result<Complex64> {
    let seq = JacobiSequence::purely_periodic(periodic.to_vec())?;
    MFunction::new(&seq)?.eval_tail(z)
}

/// `M(z)` for an eventually periodic sequence: the finite continued fraction
/// over the preperiodic block ending in the periodic tail.
pub fn eval_m(seq: &JacobiSequence, z: Complex64) -> Result<Complex64> {
    MFunction::new(seq)?.eval(z)
}

/// Continued fraction truncated after `depth` levels with tail value 0.
pub fn eval_truncated(seq: &JacobiSequence, z: Complex64, depth: usize) -> Result<Complex64> {
    check_upper(z)?;
    if depth == 0 {
        return Err(Error::IndexOutOfRange { index: 0, limit: 1 });
    }
    let period: Vec<(f64, f64)> = seq
        .periodic()
        .iter()
        .map(|q| (to_f64(&(&q.a * &q.a)), to_f64(&q.b)))
        .collect();
    let pre: Vec<(f64, f64)> = seq
        .preperiodic()
        .iter()
        .map(|q| (to_f64(&(&q.a * &q.a)), to_f64(&q.b)))
        .collect();
    let pair = |i: usize| {
        if i < pre.len() {
            pre[i]
        } else {
            period[(i - pre.len()) % period.len()]
        }
    };
    let mut val = Complex64::new(0.0, 0.0);
    for i in (0..depth).rev() {
        let (a_sq, b) = pair(i);
        val = 1.0 / (b - z - a_sq * val);
    }
    Ok(val)
}

/// Checks `s_L = f_T(s)` for the stripping transfer `T` over `L` pairs.
/// Both `s` and `s_L` are evaluated directly; the identity is compared in the
/// form `s = f_{adj T}(s_L)`, since pushing `s` forward through `T` amplifies
/// rounding geometrically in `L`. Returns `|difference|`.
pub fn strip_identity_check(seq: &JacobiSequence, count: usize, z: Complex64) -> Result<f64> {
    let stripped = eval_m(&seq.strip(count), z)?;
    let t = conj_transfer(&seq.stream(count), count)?;
    let via = t.adjugate().mobius_apply(stripped, z)?;
    Ok((eval_m(seq, z)? - via).norm())
}

/// `|m_{ℓ+1}(z) − m⁻(z)|` where `m` is purely periodic with the given period
/// and `m⁻` has period `reversed_periodic(period)`. Vanishes exactly when
/// `ℓ` is a doubly palindromic first length (taken mod p).
pub fn reversed_strip_residual(periodic: &[JacobiPair], ell: usize, z: Complex64) -> Result<f64> {
    let seq = JacobiSequence::purely_periodic(periodic.to_vec())?;
    let stripped = eval_m(&seq.strip(ell + 1), z)?;
    let reversed = eval_periodic_m(&reversed_periodic(periodic), z)?;
    Ok((stripped - reversed).norm())
}

/// Expansion `−c₁/z − c₂/z² − … − c_N/z^N` at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    coefficients: Vec<Rational>,
}

impl LaurentSeries {
    pub fn new(coefficients: Vec<Rational>) -> Self {
        LaurentSeries { coefficients }
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    /// `c_1 … c_N`.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    /// Partial sum at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = 1.0 / z;
        -self
            .coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| (acc + to_f64(c)) * w)
    }
}

// Truncated power series in w = 1/z, index = exponent.
fn series_mul(x: &[Rational], y: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, a) in x.iter().enumerate().take(len) {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate().take(len - i) {
            out[i + j] += a * b;
        }
    }
    out
}

fn series_add(x: &[Rational], y: &[Rational], len: usize) -> Vec<Rational> {
    (0..len)
        .map(|i| {
            let a = x.get(i).cloned().unwrap_or_else(Rational::zero);
            let b = y.get(i).cloned().unwrap_or_else(Rational::zero);
            a + b
        })
        .collect()
}

/// Multiplicative inverse of a series with nonzero constant term.
fn series_inv(x: &[Rational], len: usize) -> Vec<Rational> {
    let inv0 = x[0].recip();
    let mut out = vec![Rational::zero(); len];
    if len == 0 {
        return out;
    }
    out[0] = inv0.clone();
    for n in 1..len {
        let mut acc = Rational::zero();
        for k in 1..=n.min(x.len() - 1) {
            acc += &x[k] * &out[n - k];
        }
        out[n] = -acc * &inv0;
    }
    out
}

/// The relation rewritten for `y = −w·C(w)` and multiplied through by a power
/// of `w`: `G(C) = A·C² + B·C + K` with power series `A`, `B`, `K`.
struct SeriesEquation {
    a: Vec<Rational>,
    b: Vec<Rational>,
    k: Vec<Rational>,
}

impl SeriesEquation {
    fn new(q: &QuadraticRelation) -> Self {
        let reversed = |p: &Poly, shift: usize| {
            let mut v = vec![Rational::zero(); shift];
            v.extend(p.coeffs().iter().rev().cloned());
            v
        };
        let da = q.alpha.degree().map(|d| d as i64 - 2);
        let db = q.beta.degree().map(|d| d as i64 - 1);
        let dg = q.gamma.degree().map(|d| d as i64);
        let e = [da, db, dg].into_iter().flatten().max().unwrap_or(0);
        let shift = |d: Option<i64>| d.map(|d| (e - d) as usize).unwrap_or(0);
        SeriesEquation {
            a: reversed(&q.alpha, shift(da)),
            b: reversed(&-&q.beta, shift(db)),
            k: reversed(&q.gamma, shift(dg)),
        }
    }

    fn eval(&self, c: &[Rational], len: usize) -> Vec<Rational> {
        let c2 = series_mul(c, c, len);
        let ac2 = series_mul(&self.a, &c2, len);
        let bc = series_mul(&self.b, c, len);
        series_add(&series_add(&ac2, &bc, len), &self.k, len)
    }

    fn derivative(&self, c: &[Rational], len: usize) -> Vec<Rational> {
        let two_c: Vec<Rational> = c.iter().map(|x| x + x).collect();
        series_add(&series_mul(&self.a, &two_c, len), &self.b, len)
    }
}

fn valuation(s: &[Rational]) -> Option<usize> {
    s.iter().position(|x| !x.is_zero())
}

/// Exact expansion of the m-function branch (`y ~ −1/z`) of `q` at infinity,
/// solved coefficient by coefficient.
pub fn laurent_of_quadratic(q: &QuadraticRelation, order: usize) -> Result<LaurentSeries> {
    let eq = SeriesEquation::new(q);
    let mut c = vec![Rational::one()];
    // Enough room to see the valuation of the linearization.
    let probe = order + eq.a.len() + eq.b.len() + eq.k.len() + 2;
    let lin = eq.derivative(&c, probe);
    let v = valuation(&lin)
        .ok_or_else(|| Error::DegenerateRelation("linearization vanishes at infinity".into()))?;
    let lambda = lin[v].clone();
    let head = eq.eval(&c, v + 1);
    if head.iter().any(|x| !x.is_zero()) {
        return Err(Error::DegenerateRelation(
            "no branch with leading term −1/z".into(),
        ));
    }
    for n in 1..order {
        let r = eq.eval(&c, n + v + 1);
        c.push(-&r[n + v] / &lambda);
    }
    let check = eq.eval(&c, order + v);
    if check.iter().any(|x| !x.is_zero()) {
        return Err(Error::DegenerateRelation(
            "triangular solve did not annihilate the relation".into(),
        ));
    }
    c.truncate(order);
    Ok(LaurentSeries::new(c))
}

/// A recovered coefficient pair. `a²` and `b` are exact; `a` is exact when
/// `a²` is a rational square.
#[derive(Clone, Debug, PartialEq)]
pub struct RecoveredPair {
    pub a_squared: Rational,
    pub b: Rational,
    pub a_exact: Option<Rational>,
    pub a_approx: f64,
}

impl RecoveredPair {
    pub fn matches(&self, pair: &JacobiPair) -> bool {
        self.b == pair.b && self.a_squared == &pair.a * &pair.a
    }
}

/// Reads off `(a_j², b_j)` for `j ≤ count` by repeated stripping of the series:
/// `b_1 = c_2`, then `m_1 = (b_1 − z − 1/m)/a_1²` and so on.
pub fn recover_coefficients(series: &LaurentSeries, count: usize) -> Result<Vec<RecoveredPair>> {
    let needed = 2 * count + 1;
    if series.order() < needed {
        return Err(Error::InsufficientOrder {
            needed,
            got: series.order(),
        });
    }
    let mut cur = series.coefficients().to_vec();
    let mut out = Vec::with_capacity(count);
    for j in 1..=count {
        if !cur[0].is_one() {
            return Err(Error::NotAnMFunction(format!(
                "leading coefficient at level {j} is {}, expected 1",
                cur[0]
            )));
        }
        let b = cur[1].clone();
        // 1/m = −(1/w)·(1 + c₂w + …)^{-1}
        let inv = series_inv(&cur, cur.len());
        let a_sq = -inv[2].clone();
        if !a_sq.is_positive() {
            return Err(Error::NotAnMFunction(format!(
                "a_{j}² = {a_sq} is not positive"
            )));
        }
        out.push(RecoveredPair {
            a_exact: sqrt_exact(&a_sq),
            a_approx: to_f64(&a_sq).sqrt(),
            a_squared: a_sq.clone(),
            b,
        });
        let scale = -a_sq.recip();
        cur = inv[2..].iter().map(|x| x * &scale).collect();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::int;

    fn pairs(v: &[(i64, i64)]) -> Vec<JacobiPair> {
        v.iter().map(|&(a, b)| JacobiPair::ints(a, b)).collect()
    }

    #[test]
    fn chebyshev_at_2i() {
        let m = eval_periodic_m(&pairs(&[(1, 0)]), Complex64::new(0.0, 2.0)).unwrap();
        assert!((m - Complex64::new(0.0, 2f64.sqrt() - 1.0)).norm() < 1e-14);
    }

    #[test]
    fn lower_half_plane_rejected() {
        let seq = JacobiSequence::purely_periodic(pairs(&[(1, 0)])).unwrap();
        assert!(matches!(
            eval_m(&seq, Complex64::new(1.0, 0.0)),
            Err(Error::NotInUpperHalfPlane { .. })
        ));
        assert!(eval_truncated(&seq, Complex64::new(1.0, -1.0), 5).is_err());
    }

    #[test]
    fn decay_at_infinity() {
        let y = 1e4;
        let m = eval_periodic_m(&pairs(&[(2, 1), (1, -3)]), Complex64::new(0.0, y)).unwrap();
        assert!((Complex64::new(0.0, y) * m + 1.0).norm() < 1e-3);
    }

    #[test]
    fn preperiodic_copy_of_tail_changes_nothing() {
        let z = Complex64::new(0.4, 0.9);
        let pure = JacobiSequence::purely_periodic(pairs(&[(1, 0)])).unwrap();
        let pre = JacobiSequence::new(pairs(&[(1, 0)]), pairs(&[(1, 0)])).unwrap();
        assert!((eval_m(&pure, z).unwrap() - eval_m(&pre, z).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn truncation_depth_one() {
        let seq = JacobiSequence::purely_periodic(pairs(&[(3, 2)])).unwrap();
        let z = Complex64::new(0.5, 1.0);
        let v = eval_truncated(&seq, z, 1).unwrap();
        assert!((v - 1.0 / (2.0 - z)).norm() < 1e-15);
        assert!(eval_truncated(&seq, z, 0).is_err());
    }

    #[test]
    fn chebyshev_truncation_converges() {
        let seq = JacobiSequence::purely_periodic(pairs(&[(1, 0)])).unwrap();
        let z = Complex64::new(0.0, 2.0);
        let exact = Complex64::new(0.0, 2f64.sqrt() - 1.0);
        let v = eval_truncated(&seq, z, 60).unwrap();
        assert!((v - exact).norm() < 1e-10);
    }

    #[test]
    fn catalan_moments() {
        let q = QuadraticRelation::new(Poly::one(), Poly::z(), Poly::one()).unwrap();
        let s = laurent_of_quadratic(&q, 7).unwrap();
        let expected: Vec<Rational> = [1, 0, 1, 0, 2, 0, 5].iter().map(|&c| int(c)).collect();
        assert_eq!(s.coefficients(), expected.as_slice());
    }

    #[test]
    fn laurent_of_unnormalized_scaling() {
        // periodic_quadratic gives −(y² + zy + 1); the branch is the same.
        let q = periodic_quadratic(&pairs(&[(1, 0)])).unwrap();
        let s = laurent_of_quadratic(&q, 5).unwrap();
        assert_eq!(s.coefficients()[4], int(2));
    }

    #[test]
    fn laurent_substitution_residual_order() {
        let q = periodic_quadratic(&pairs(&[(2, 1), (1, -1), (3, 0)])).unwrap();
        let n = 9;
        let s = laurent_of_quadratic(&q, n).unwrap();
        let eq = SeriesEquation::new(&q);
        let lin = eq.derivative(&[Rational::one()], 64);
        let v = valuation(&lin).unwrap();
        let r = eq.eval(s.coefficients(), n + v + 1);
        assert!(r[..n + v].iter().all(Zero::is_zero));
        // next coefficient of the residual is generically nonzero
        assert!(!r[n + v].is_zero());
    }

    #[test]
    fn no_m_function_branch() {
        // y² − 1 = 0 has constant roots, no −1/z branch
        let q = QuadraticRelation::new(Poly::one(), Poly::zero(), Poly::constant(int(-1))).unwrap();
        assert!(matches!(
            laurent_of_quadratic(&q, 4),
            Err(Error::DegenerateRelation(_))
        ));
    }

    #[test]
    fn recover_chebyshev() {
        let q = periodic_quadratic(&pairs(&[(1, 0)])).unwrap();
        let s = laurent_of_quadratic(&q, 11).unwrap();
        let rec = recover_coefficients(&s, 5).unwrap();
        for r in rec {
            assert!(r.matches(&JacobiPair::ints(1, 0)));
            assert_eq!(r.a_exact, Some(int(1)));
        }
    }

    #[test]
    fn recover_irrational_a() {
        // −1/z − 2/z³: a₁² = 2 is not a rational square
        let c: Vec<Rational> = vec![int(1), int(0), int(2)];
        let rec = recover_coefficients(&LaurentSeries::new(c), 1).unwrap();
        assert_eq!(rec[0].a_squared, int(2));
        assert_eq!(rec[0].a_exact, None);
        assert!((rec[0].a_approx - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn recovery_errors() {
        let bad = LaurentSeries::new(vec![int(2), int(0), int(1)]);
        assert!(matches!(
            recover_coefficients(&bad, 1),
            Err(Error::NotAnMFunction(_))
        ));
        let short = LaurentSeries::new(vec![int(1), int(0)]);
        assert_eq!(
            recover_coefficients(&short, 1),
            Err(Error::InsufficientOrder { needed: 3, got: 2 })
        );
        let negative = LaurentSeries::new(vec![int(1), int(0), int(-1)]);
        assert!(matches!(
            recover_coefficients(&negative, 1),
            Err(Error::NotAnMFunction(_))
        ));
    }
}
