//! Random instance generators shared by the self-test command and the test suites.

use rand::Rng;

use crate::exactalg::Rational;
use crate::jacobi::{is_split, JacobiPair};

/// Numerators and denominators are drawn from `1..=bound` (numerators may be
/// negative or zero when `positive` is false).
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, bound: i64, positive: bool) -> Rational {
    let num = if positive {
        rng.gen_range(1..=bound)
    } else {
        rng.gen_range(-bound..=bound)
    };
    Rational::new(num.into(), rng.gen_range(1..=bound).into())
}

pub fn random_pair<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> JacobiPair {
    JacobiPair {
        a: random_rational(rng, bound, true),
        b: random_rational(rng, bound, false),
    }
}

pub fn random_period<R: Rng + ?Sized>(rng: &mut R, p: usize, bound: i64) -> Vec<JacobiPair> {
    (0..p).map(|_| random_pair(rng, bound)).collect()
}

/// Entries drawn from a tiny alphabet, so that accidental palindromic splits
/// show up often.
pub fn small_alphabet_period<R: Rng + ?Sized>(rng: &mut R, p: usize) -> Vec<JacobiPair> {
    (0..p)
        .map(|_| JacobiPair {
            a: Rational::from_integer(rng.gen_range(1..=2).into()),
            b: Rational::from_integer(rng.gen_range(0..=1).into()),
        })
        .collect()
}

/// A random palindrome of the given length.
pub fn palindrome<R: Rng + ?Sized>(
    rng: &mut R,
    len: usize,
    bound: i64,
    positive: bool,
) -> Vec<Rational> {
    let half: Vec<Rational> = (0..len.div_ceil(2))
        .map(|_| random_rational(rng, bound, positive))
        .collect();
    let mut out = half.clone();
    out.extend(half.into_iter().rev().skip(len % 2));
    out
}

/// `a = palindrome(ℓ) ⧺ palindrome(p−ℓ)`, `b = palindrome(ℓ+1) ⧺ palindrome(p−ℓ−1)`.
pub fn doubly_palindromic_period<R: Rng + ?Sized>(
    rng: &mut R,
    p: usize,
    ell: usize,
    bound: i64,
) -> Vec<JacobiPair> {
    assert!(
        ell >= 1 && ell + 2 <= p,
        "first length must satisfy 1 <= ell <= p-2"
    );
    let mut a = palindrome(rng, ell, bound, true);
    a.extend(palindrome(rng, p - ell, bound, true));
    let mut b = palindrome(rng, ell + 1, bound, false);
    b.extend(palindrome(rng, p - ell - 1, bound, false));
    a.into_iter()
        .zip(b)
        .map(|(a, b)| JacobiPair { a, b })
        .collect()
}

/// Changes a single entry of `period` so that `ell` is no longer a split.
pub fn break_split<R: Rng + ?Sized>(
    rng: &mut R,
    period: &[JacobiPair],
    ell: usize,
    bound: i64,
) -> Vec<JacobiPair> {
    loop {
        let mut out = period.to_vec();
        let i = rng.gen_range(0..out.len());
        if rng.gen_bool(0.5) {
            out[i].a = random_rational(rng, bound, true);
        } else {
            out[i].b = random_rational(rng, bound, false);
        }
        if !is_split(&out, ell) {
            return out;
        }
    }
}
