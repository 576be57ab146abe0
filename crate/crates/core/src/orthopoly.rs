//! Orthogonal polynomials generated by Jacobi parameters and the conjugated
//! transfer matrices built from them.

use num_traits::One;

use crate::error::{Error, Result};
use crate::exactalg::{Mat2, Poly, Rational};
use crate::jacobi::{JacobiPair, JacobiSequence};

fn require(coeffs: &[JacobiPair], n: usize) -> Result<()> {
    if coeffs.len() < n {
        return Err(Error::InsufficientCoefficients {
            needed: n,
            available: coeffs.len(),
        });
    }
    Ok(())
}

/// `p_0 … p_n` from `z p_j = a_{j+1} p_{j+1} + b_{j+1} p_j + a_j p_{j-1}`,
/// with `p_{-1} = 0` and `p_0 = 1`.
pub fn first_kind_polys(coeffs: &[JacobiPair], n: usize) -> Result<Vec<Poly>> {
    require(coeffs, n)?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(Poly::one());
    let mut prev = Poly::zero();
    for j in 0..n {
        let JacobiPair { a, b } = &coeffs[j];
        let cur = &out[j];
        let shifted = Poly::new(vec![-b.clone(), Rational::one()]);
        let mut next = &shifted * cur;
        if j > 0 {
            next = &next - &prev.scale(&coeffs[j - 1].a);
        }
        let next = next.scale(&a.recip());
        prev = cur.clone();
        out.push(next);
    }
    Ok(out)
}

/// `q_0 … q_n`, where `q_0 = 0` and `q_j = p_{j-1}(shifted coefficients) / a_1`.
pub fn second_kind_polys(coeffs: &[JacobiPair], n: usize) -> Result<Vec<Poly>> {
    require(coeffs, n)?;
    let mut out = vec![Poly::zero()];
    if n == 0 {
        return Ok(out);
    }
    let inv_a1 = coeffs[0].a.recip();
    let shifted = first_kind_polys(&coeffs[1..], n - 1)?;
    out.extend(shifted.iter().map(|p| p.scale(&inv_a1)));
    Ok(out)
}

/// `[[p_n, q_n], [-a_n p_{n-1}, -a_n q_{n-1}]]` over the first `n` pairs of
/// `coeffs`. Its fractional linear action strips `n` coefficients from an
/// m-function. `n = 0` gives the identity.
pub fn conj_transfer(coeffs: &[JacobiPair], n: usize) -> Result<Mat2> {
    require(coeffs, n)?;
    if n == 0 {
        return Ok(Mat2::identity());
    }
    let ps = first_kind_polys(coeffs, n)?;
    let qs = second_kind_polys(coeffs, n)?;
    let neg_an = -coeffs[n - 1].a.clone();
    Ok(Mat2::new(
        ps[n].clone(),
        qs[n].clone(),
        ps[n - 1].scale(&neg_an),
        qs[n - 1].scale(&neg_an),
    ))
}

/// One stripping step for a single pair: `[[(z-b)/a, 1/a], [-a, 0]]`.
pub fn step_matrix(pair: &JacobiPair) -> Mat2 {
    conj_transfer(std::slice::from_ref(pair), 1).expect("one pair supplied")
}

fn require_normalized(seq: &JacobiSequence) -> Result<()> {
    if seq.k() == 0 {
        return Err(Error::NotNormalized("preperiodic part is empty".into()));
    }
    if !seq.is_normalized() {
        return Err(Error::NotNormalized(
            "last preperiodic pair differs from last periodic pair".into(),
        ));
    }
    Ok(())
}

/// Transfer over the whole preperiodic block; maps `M` to the purely
/// periodic `m`.
pub fn build_t1(seq: &JacobiSequence) -> Result<Mat2> {
    require_normalized(seq)?;
    conj_transfer(seq.preperiodic(), seq.k())
}

/// Transfer over the first `ell + 1` pairs of the period.
pub fn build_t2(periodic: &[JacobiPair], ell: usize) -> Result<Mat2> {
    if ell + 1 > periodic.len() {
        return Err(Error::IndexOutOfRange {
            index: ell,
            limit: periodic.len().saturating_sub(1),
        });
    }
    conj_transfer(periodic, ell + 1)
}

/// The index-reversed preperiodic list whose `j`-th pair is
/// `(α_{k-j}, β_{k-j+1})` for `j = 1..k`, with `α_0 = α_k`.
pub fn t3_pairs(seq: &JacobiSequence) -> Result<Vec<JacobiPair>> {
    require_normalized(seq)?;
    let pre = seq.preperiodic();
    let k = pre.len();
    Ok((1..=k)
        .map(|j| {
            let a_idx = if j == k { k } else { k - j };
            JacobiPair {
                a: pre[a_idx - 1].a.clone(),
                b: pre[k - j].b.clone(),
            }
        })
        .collect())
}

pub fn build_t3(seq: &JacobiSequence) -> Result<Mat2> {
    let pairs = t3_pairs(seq)?;
    conj_transfer(&pairs, pairs.len())
}
