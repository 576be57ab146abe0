#![allow(dead_code)]

use jacobi_cf::exactalg::rational::to_f64;
use jacobi_cf::{JacobiPair, JacobiSequence, Rational};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pairs(v: &[(i64, i64)]) -> Vec<JacobiPair> {
    v.iter().map(|&(a, b)| JacobiPair::ints(a, b)).collect()
}

/// Brute-force split oracle: render each block as a string and compare it
/// with its reversal.
pub fn brute_force_splits(period: &[JacobiPair]) -> Vec<usize> {
    let p = period.len();
    let a: Vec<String> = period.iter().map(|q| q.a.to_string()).collect();
    let b: Vec<String> = period.iter().map(|q| q.b.to_string()).collect();
    let pal = |xs: &[String]| {
        let fwd = xs.join("|");
        let rev: Vec<String> = xs.iter().rev().cloned().collect();
        fwd == rev.join("|")
    };
    let mut out = Vec::new();
    for ell in 1..p.saturating_sub(1) {
        if pal(&a[..ell]) && pal(&a[ell..]) && pal(&b[..=ell]) && pal(&b[ell + 1..]) {
            out.push(ell);
        }
    }
    out
}

/// Random rational in `(0, bound]` or `[-bound, bound]` with small denominators.
pub fn rational<R: Rng>(rng: &mut R, bound: i64, positive: bool) -> Rational {
    let den = rng.gen_range(1..=3);
    let num = if positive {
        rng.gen_range(1..=bound * den)
    } else {
        rng.gen_range(-bound * den..=bound * den)
    };
    Rational::new(num.into(), den.into())
}

pub fn random_sequence<R: Rng>(
    rng: &mut R,
    max_k: usize,
    max_p: usize,
    bound: i64,
) -> JacobiSequence {
    let k = rng.gen_range(0..=max_k);
    let p = rng.gen_range(1..=max_p);
    let mk = |rng: &mut R| JacobiPair {
        a: rational(rng, bound, true),
        b: rational(rng, bound, false),
    };
    let pre = (0..k).map(|_| mk(rng)).collect();
    let per = (0..p).map(|_| mk(rng)).collect();
    JacobiSequence::new(pre, per).unwrap()
}

pub fn upper_point<R: Rng>(rng: &mut R, min_im: f64) -> Complex64 {
    Complex64::new(
        rng.gen_range(-3.0..3.0),
        rng.gen_range(min_im..min_im + 3.0),
    )
}

/// Plain bottom-up continued fraction over an explicit list of pairs with
/// the given tail value.
pub fn finite_cf(pairs: &[JacobiPair], z: Complex64, tail: Complex64) -> Complex64 {
    pairs.iter().rev().fold(tail, |acc, q| {
        let a = to_f64(&q.a);
        1.0 / (to_f64(&q.b) - z - a * a * acc)
    })
}
