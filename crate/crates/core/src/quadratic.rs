//! Quadratic relations `α y² + β y + γ = 0` satisfied by eventually periodic
//! m-functions, the second solution, and the exact decision procedure for
//! the doubly palindromic identity
//!
//! ```text
//! 1 / (α_k² M̃(z)) = f_{T₃T₂T₁}(M(z)).
//! ```
//!
//! `M̃` is eliminated through the product of roots `M·M̃ = γ/α`, and the
//! resulting equation is reduced modulo the relation for `M`. What remains is
//! `P·M − Q = 0` with polynomial `P`, `Q`; since `M` is not a rational function
//! (guarded by the discriminant test) the identity holds iff `P = Q = 0`.

use std::fmt;

use num_complex::Complex64;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactalg::{Mat2, Poly, Rational};
use crate::jacobi::{JacobiPair, JacobiSequence};
use crate::mfun;
use crate::orthopoly::{build_t1, build_t2, build_t3, conj_transfer};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticRelation {
    pub alpha: Poly,
    pub beta: Poly,
    pub gamma: Poly,
}

impl QuadraticRelation {
    pub fn new(alpha: Poly, beta: Poly, gamma: Poly) -> Result<Self> {
        if alpha.is_zero() && beta.is_zero() && gamma.is_zero() {
            return Err(Error::DegenerateRelation("all coefficients vanish".into()));
        }
        Ok(QuadraticRelation { alpha, beta, gamma })
    }

    pub fn discriminant(&self) -> Poly {
        let four_ag = (&self.alpha * &self.gamma).scale(&Rational::from_integer(4.into()));
        &(&self.beta * &self.beta) - &four_ag
    }

    /// Divides out the common polynomial factor and scales so that the
    /// first nonzero coefficient polynomial is monic.
    pub fn canonical(&self) -> QuadraticRelation {
        let g = Poly::gcd(&Poly::gcd(&self.alpha, &self.beta), &self.gamma);
        let divide = |p: &Poly| {
            if g.is_constant() {
                p.clone()
            } else {
                let (q, r) = p.div_rem(&g).expect("gcd of a nonzero triple is nonzero");
                debug_assert!(r.is_zero());
                q
            }
        };
        let (a, b, c) = (divide(&self.alpha), divide(&self.beta), divide(&self.gamma));
        let lead = [&a, &b, &c]
            .iter()
            .find_map(|p| p.leading().cloned())
            .unwrap_or_else(Rational::one);
        let inv = lead.recip();
        QuadraticRelation {
            alpha: a.scale(&inv),
            beta: b.scale(&inv),
            gamma: c.scale(&inv),
        }
    }

    /// Same relation up to a rational function factor.
    pub fn is_proportional(&self, other: &QuadraticRelation) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn eval(&self, z: Complex64) -> [Complex64; 3] {
        [self.alpha.eval(z), self.beta.eval(z), self.gamma.eval(z)]
    }

    pub fn residual(&self, z: Complex64, y: Complex64) -> Complex64 {
        let [a, b, c] = self.eval(z);
        a * y * y + b * y + c
    }

    /// Both roots at `z`, computed without cancellation.
    pub fn roots(&self, z: Complex64) -> Result<[Complex64; 2]> {
        let [a, b, c] = self.eval(z);
        if a.norm() == 0.0 {
            if b.norm() == 0.0 {
                return Err(Error::DivisionByZero);
            }
            let r = -c / b;
            return Ok([r, r]);
        }
        let sq = (b * b - a * c * 4.0).sqrt();
        let s = if (b.conj() * sq).re >= 0.0 {
            b + sq
        } else {
            b - sq
        };
        if s.norm() == 0.0 {
            return Ok([Complex64::new(0.0, 0.0); 2]);
        }
        let q = -s / 2.0;
        Ok([q / a, c / q])
    }
}

impl fmt::Display for QuadraticRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})·y² + ({})·y + ({}) = 0",
            self.alpha, self.beta, self.gamma
        )
    }
}

/// Fixed-point relation of the purely periodic m-function: with
/// `T = [[A, B], [C, D]]` the transfer over one period, `m = f_T(m)` gives
/// `C m² + (D − A) m − B = 0`.
pub fn periodic_quadratic(periodic: &[JacobiPair]) -> Result<QuadraticRelation> {
    let t = conj_transfer(periodic, periodic.len())?;
    QuadraticRelation::new(t.a21.clone(), &t.a22 - &t.a11, -&t.a12)
}

/// If `y` satisfies `q` and `y = f_T(x)`, the relation satisfied by `x`,
/// with common content removed.
pub fn pullback_quadratic(q: &QuadraticRelation, t: &Mat2) -> Result<QuadraticRelation> {
    if t.det().is_zero() {
        return Err(Error::DegenerateRelation("singular transfer matrix".into()));
    }
    let (a, b, c, d) = (&t.a11, &t.a12, &t.a21, &t.a22);
    let two = Rational::from_integer(2.into());
    let x2 = &q.alpha * &(a * a) + &q.beta * &(a * c) + &q.gamma * &(c * c);
    let x1 = (&q.alpha * &(a * b)).scale(&two)
        + &q.beta * &(a * d + b * c)
        + (&q.gamma * &(c * d)).scale(&two);
    let x0 = &q.alpha * &(b * b) + &q.beta * &(b * d) + &q.gamma * &(d * d);
    Ok(QuadraticRelation::new(x2, x1, x0)?.canonical())
}

/// Relation satisfied by the m-function of an arbitrary eventually periodic
/// sequence: the periodic relation pulled back through the preperiodic block.
pub fn sequence_quadratic(seq: &JacobiSequence) -> Result<QuadraticRelation> {
    let periodic = periodic_quadratic(seq.periodic())?;
    let t = conj_transfer(seq.preperiodic(), seq.k())?;
    pullback_quadratic(&periodic, &t)
}

/// True iff `β² − 4αγ` is the square of a rational polynomial (including 0).
pub fn discriminant_is_square(q: &QuadraticRelation) -> bool {
    q.discriminant().sqrt().is_some()
}

/// The other root, `γ(z) / (α(z)·m)`.
pub fn second_solution_value(
    q: &QuadraticRelation,
    m_val: Complex64,
    z: Complex64,
) -> Result<Complex64> {
    let den = q.alpha.eval(z) * m_val;
    if den.norm() == 0.0 || !den.is_finite() {
        return Err(Error::DivisionByZero);
    }
    Ok(q.gamma.eval(z) / den)
}

/// Numeric comparison of the two sides of the identity at one point.
#[derive(Clone, Debug, PartialEq)]
/// The identity is sampled in its inverted form `M = f_{adj T}(1/(α_k² M̃))`.
/// The forward map `f_T(M)` strips the continued fraction and amplifies
/// rounding errors geometrically, while the inverse direction does not.
pub struct SampleEvaluation {
    pub z: Complex64,
    /// `M(z)` evaluated from the continued fraction.
    pub lhs: Complex64,
    /// `f_{adj T}(1/(α_k² M̃(z)))`.
    pub rhs: Complex64,
}

impl SampleEvaluation {
    /// `|lhs − rhs| / |lhs|`.
    pub fn rel_diff(&self) -> f64 {
        (self.lhs - self.rhs).norm() / self.lhs.norm()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub ell: usize,
    /// Coefficient of `M` after reduction: `αD − βC − α_k²γA`.
    pub residual_p: Poly,
    /// Constant part after reduction: `γ(C + α_k²B)`.
    pub residual_q: Poly,
    pub holds: bool,
    pub transfer_degree: Option<usize>,
    pub samples: Vec<SampleEvaluation>,
}

impl VerificationReport {
    pub fn residual_p_degree(&self) -> Option<usize> {
        self.residual_p.degree()
    }

    pub fn residual_q_degree(&self) -> Option<usize> {
        self.residual_q.degree()
    }

    pub fn max_sample_diff(&self) -> Option<f64> {
        self.samples
            .iter()
            .map(SampleEvaluation::rel_diff)
            .reduce(f64::max)
    }
}

/// Fixed diagnostic points in the upper half-plane.
pub const SAMPLE_POINTS: [(f64, f64); 3] = [(0.3, 1.1), (-0.7, 0.8), (1.5, 2.0)];

/// Per-sequence state for testing many candidate first lengths.
#[derive(Clone, Debug)]
pub struct MainIdentityVerifier {
    seq: JacobiSequence,
    t1: Mat2,
    t3: Mat2,
    relation: QuadraticRelation,
    alpha_k_sq: Rational,
}

impl MainIdentityVerifier {
    /// Requires a normalized sequence; fails with `DegenerateRelation` when
    /// the relation for `M` cannot separate `M` from rational functions.
    pub fn new(seq: &JacobiSequence) -> Result<Self> {
        let t1 = build_t1(seq)?;
        let t3 = build_t3(seq)?;
        let relation = pullback_quadratic(&periodic_quadratic(seq.periodic())?, &t1)?;
        if relation.gamma.is_zero() {
            return Err(Error::DegenerateRelation("γ vanishes identically".into()));
        }
        if relation.alpha.is_zero() || discriminant_is_square(&relation) {
            return Err(Error::DegenerateRelation(
                "discriminant is a polynomial square; M may be rational".into(),
            ));
        }
        let alpha_k = &seq.preperiodic()[seq.k() - 1].a;
        Ok(MainIdentityVerifier {
            seq: seq.clone(),
            t1,
            t3,
            relation,
            alpha_k_sq: alpha_k * alpha_k,
        })
    }

    pub fn relation(&self) -> &QuadraticRelation {
        &self.relation
    }

    /// `T₃ T₂ T₁` for first length `ell`.
    pub fn transfer(&self, ell: usize) -> Result<Mat2> {
        let t2 = build_t2(self.seq.periodic(), ell)?;
        Ok(&(&self.t3 * &t2) * &self.t1)
    }

    pub fn verify(&self, ell: usize) -> Result<VerificationReport> {
        let p = self.seq.p();
        if ell == 0 || ell + 2 > p {
            return Err(Error::IndexOutOfRange {
                index: ell,
                limit: p.saturating_sub(2),
            });
        }
        let t = self.transfer(ell)?;
        let QuadraticRelation { alpha, beta, gamma } = &self.relation;
        let residual_p =
            &(alpha * &t.a22 - beta * &t.a21) - &(gamma * &t.a11).scale(&self.alpha_k_sq);
        let residual_q = gamma * &(&t.a21 + &t.a12.scale(&self.alpha_k_sq));
        let holds = residual_p.is_zero() && residual_q.is_zero();
        let samples = SAMPLE_POINTS
            .iter()
            .filter_map(|&(re, im)| self.sample(&t, Complex64::new(re, im)).ok())
            .collect();
        Ok(VerificationReport {
            ell,
            residual_p,
            residual_q,
            holds,
            transfer_degree: t.max_degree(),
            samples,
        })
    }

    fn sample(&self, t: &Mat2, z: Complex64) -> Result<SampleEvaluation> {
        let m = mfun::eval_m(&self.seq, z)?;
        let m_tilde = second_solution_value(&self.relation, m, z)?;
        let g = 1.0 / (m_tilde * crate::exactalg::rational::to_f64(&self.alpha_k_sq));
        let rhs = t.adjugate().mobius_apply(g, z)?;
        Ok(SampleEvaluation { z, lhs: m, rhs })
    }

    /// Relative discrepancy of the identity at an arbitrary point.
    pub fn numeric_residual(&self, ell: usize, z: Complex64) -> Result<f64> {
        let t = self.transfer(ell)?;
        Ok(self.sample(&t, z)?.rel_diff())
    }
}

/// Exact decision of the identity for first length `ell` on a normalized sequence.
pub fn verify_main_identity(seq: &JacobiSequence, ell: usize) -> Result<VerificationReport> {
    MainIdentityVerifier::new(seq)?.verify(ell)
}

/// Asymptotic test of whether `1/(α_k² M̃)` behaves like an m-function at
/// infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct ReverseObstructionReport {
    /// Extrapolated limit of `z·g(z) + 1` along `z = iy`, where
    /// `g = 1/(α_k² M̃)`; vanishes for m-functions.
    pub offset: Complex64,
    /// Extrapolated limit of `z·M̃(z)` along `z = iy`.
    pub decay_constant: Complex64,
    pub m_function_like: bool,
}

/// Heights used for the asymptotic fit.
pub const REVERSE_HEIGHTS: [f64; 3] = [1e2, 1e3, 1e4];
pub const REVERSE_TOLERANCE: f64 = 1e-4;

/// Fits `v(y) ≈ v₀ + c/y` through the two largest heights and returns `v₀`.
fn extrapolate(samples: &[(f64, Complex64)]) -> Complex64 {
    let (y1, v1) = samples[samples.len() - 2];
    let (y2, v2) = samples[samples.len() - 1];
    (v2 * y2 - v1 * y1) / (y2 - y1)
}

/// `α_k` is the last preperiodic `a`, or `a_p` for a purely periodic sequence.
/// The sequence need not be normalized: the grafted single-pair case
/// `α_1 ≠ a_p` is exactly the situation this check is meant to expose.
pub fn reverse_obstruction_report(seq: &JacobiSequence) -> Result<ReverseObstructionReport> {
    let relation = sequence_quadratic(seq)?;
    let alpha_k = seq
        .preperiodic()
        .last()
        .unwrap_or_else(|| seq.periodic().last().expect("nonempty period"));
    let alpha_k_sq = crate::exactalg::rational::to_f64(&(&alpha_k.a * &alpha_k.a));
    let mut offsets = Vec::new();
    let mut decays = Vec::new();
    for &y in &REVERSE_HEIGHTS {
        let z = Complex64::new(0.0, y);
        let m = mfun::eval_m(seq, z)?;
        let m_tilde = second_solution_value(&relation, m, z)?;
        let g = 1.0 / (m_tilde * alpha_k_sq);
        let offset = z * g + 1.0;
        let decay = z * m_tilde;
        if !offset.is_finite() || !decay.is_finite() {
            return Err(Error::NumericInstability(format!(
                "non-finite asymptotic sample at y = {y}"
            )));
        }
        offsets.push((y, offset));
        decays.push((y, decay));
    }
    let offset = extrapolate(&offsets);
    let decay_constant = extrapolate(&decays);
    if !offset.is_finite() || !decay_constant.is_finite() {
        return Err(Error::NumericInstability("asymptotic fit diverged".into()));
    }
    Ok(ReverseObstructionReport {
        offset,
        decay_constant,
        m_function_like: offset.norm() < REVERSE_TOLERANCE,
    })
}

/// True iff `1/(α_k² M̃)` passes the `−1/z` asymptotic test of an m-function.
pub fn verify_reverse_obstruction(seq: &JacobiSequence) -> Result<bool> {
    Ok(reverse_obstruction_report(seq)?.m_function_like)
}
