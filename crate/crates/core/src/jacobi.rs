//! Eventually periodic Jacobi parameter sequences.
//!
//! A sequence is a finite preperiodic block `(α_1,β_1)…(α_k,β_k)` followed by
//! a period `(a_1,b_1)…(a_p,b_p)` repeated forever. The stream of pairs is
//! what matters; the split between the two blocks is a representation choice.

use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::rational::{format_rational, parse_rational};
use crate::exactalg::Rational;

/// One continued fraction coefficient pair `(a, b)` with `a > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JacobiPair {
    pub a: Rational,
    pub b: Rational,
}

impl JacobiPair {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::Parse(format!(
                "a must be positive, got {}",
                format_rational(&a)
            )));
        }
        Ok(JacobiPair { a, b })
    }

    /// Convenience constructor from small integers; panics when `a <= 0`.
    pub fn ints(a: i64, b: i64) -> Self {
        JacobiPair::new(
            crate::exactalg::rational::int(a),
            crate::exactalg::rational::int(b),
        )
        .expect("positive a")
    }
}

impl fmt::Display for JacobiPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            format_rational(&self.a),
            format_rational(&self.b)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JacobiSequence {
    preperiodic: Vec<JacobiPair>,
    periodic: Vec<JacobiPair>,
}

/// On-disk form: lists of `[a, b]` rational strings.
#[derive(Debug, Serialize, Deserialize)]
struct SequenceDoc {
    #[serde(default)]
    preperiodic: Vec<[String; 2]>,
    periodic: Vec<[String; 2]>,
}

impl JacobiSequence {
    pub fn new(preperiodic: Vec<JacobiPair>, periodic: Vec<JacobiPair>) -> Result<Self> {
        if periodic.is_empty() {
            return Err(Error::Parse("periodic part must be nonempty".into()));
        }
        Ok(JacobiSequence {
            preperiodic,
            periodic,
        })
    }

    pub fn purely_periodic(periodic: Vec<JacobiPair>) -> Result<Self> {
        JacobiSequence::new(Vec::new(), periodic)
    }

    pub fn preperiodic(&self) -> &[JacobiPair] {
        &self.preperiodic
    }

    pub fn periodic(&self) -> &[JacobiPair] {
        &self.periodic
    }

    /// Length of the preperiodic block.
    pub fn k(&self) -> usize {
        self.preperiodic.len()
    }

    /// Period length.
    pub fn p(&self) -> usize {
        self.periodic.len()
    }

    /// Zero-based access into the infinite coefficient stream.
    pub fn stream_pair(&self, i: usize) -> &JacobiPair {
        if i < self.k() {
            &self.preperiodic[i]
        } else {
            &self.periodic[(i - self.k()) % self.p()]
        }
    }

    /// First `n` pairs of the stream.
    pub fn stream(&self, n: usize) -> Vec<JacobiPair> {
        (0..n).map(|i| self.stream_pair(i).clone()).collect()
    }

    /// True when the preperiodic block is nonempty and ends with `(a_p, b_p)`.
    pub fn is_normalized(&self) -> bool {
        self.preperiodic.last() == self.periodic.last()
    }

    /// Arranges `(α_k, β_k) = (a_p, b_p)` by moving one full period into the
    /// preperiodic block when needed. Never rotates the period.
    pub fn normalize_kp(&self) -> JacobiSequence {
        if self.is_normalized() {
            return self.clone();
        }
        let mut pre = self.preperiodic.clone();
        pre.extend(self.periodic.iter().cloned());
        JacobiSequence {
            preperiodic: pre,
            periodic: self.periodic.clone(),
        }
    }

    /// Same stream, period written twice.
    pub fn double_period(&self) -> JacobiSequence {
        let mut periodic = self.periodic.clone();
        periodic.extend(self.periodic.iter().cloned());
        JacobiSequence {
            preperiodic: self.preperiodic.clone(),
            periodic,
        }
    }

    /// Drops the first `count` pairs of the stream.
    pub fn strip(&self, count: usize) -> JacobiSequence {
        if count <= self.k() {
            return JacobiSequence {
                preperiodic: self.preperiodic[count..].to_vec(),
                periodic: self.periodic.clone(),
            };
        }
        let shift = (count - self.k()) % self.p();
        let mut periodic = self.periodic.clone();
        periodic.rotate_left(shift);
        JacobiSequence {
            preperiodic: Vec::new(),
            periodic,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        load_sequence(text)
    }

    pub fn to_json(&self) -> String {
        let enc = |pairs: &[JacobiPair]| {
            pairs
                .iter()
                .map(|p| [format_rational(&p.a), format_rational(&p.b)])
                .collect()
        };
        let doc = SequenceDoc {
            preperiodic: enc(&self.preperiodic),
            periodic: enc(&self.periodic),
        };
        serde_json::to_string(&doc).expect("sequence documents always serialize")
    }
}

impl fmt::Display for JacobiSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |pairs: &[JacobiPair]| {
            pairs
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(
            f,
            "{{{}; [{}]}}",
            join(&self.preperiodic),
            join(&self.periodic)
        )
    }
}

/// Parses the JSON input schema:
/// `{"preperiodic": [["a","b"], ...], "periodic": [["a","b"], ...]}`.
pub fn load_sequence(text: &str) -> Result<JacobiSequence> {
    let doc: SequenceDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let decode = |pairs: Vec<[String; 2]>| -> Result<Vec<JacobiPair>> {
        pairs
            .into_iter()
            .map(|[a, b]| JacobiPair::new(parse_rational(&a)?, parse_rational(&b)?))
            .collect()
    };
    JacobiSequence::new(decode(doc.preperiodic)?, decode(doc.periodic)?)
}

/// A doubly palindromic split of a period: `a_1…a_ℓ | a_{ℓ+1}…a_p` and
/// `b_1…b_{ℓ+1} | b_{ℓ+2}…b_p` are both pairs of palindromes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PalindromeSplit {
    pub p: usize,
    pub ell: usize,
}

impl PalindromeSplit {
    pub fn new(p: usize, ell: usize) -> Result<Self> {
        if ell == 0 || ell + 2 > p {
            return Err(Error::IndexOutOfRange {
                index: ell,
                limit: p.saturating_sub(2),
            });
        }
        Ok(PalindromeSplit { p, ell })
    }
}

fn is_palindrome<T: PartialEq>(xs: &[T]) -> bool {
    let n = xs.len();
    (0..n / 2).all(|i| xs[i] == xs[n - 1 - i])
}

/// Whether `ell` is a doubly palindromic first length of `periodic`.
pub fn is_split(periodic: &[JacobiPair], ell: usize) -> bool {
    let p = periodic.len();
    if ell == 0 || ell + 2 > p {
        return false;
    }
    let a: Vec<&Rational> = periodic.iter().map(|q| &q.a).collect();
    let b: Vec<&Rational> = periodic.iter().map(|q| &q.b).collect();
    is_palindrome(&a[..ell])
        && is_palindrome(&a[ell..])
        && is_palindrome(&b[..ell + 1])
        && is_palindrome(&b[ell + 1..])
}

/// All first lengths `1 ≤ ℓ ≤ p-2` at which the period is doubly palindromic,
/// in ascending order.
pub fn find_palindrome_splits(periodic: &[JacobiPair]) -> Vec<PalindromeSplit> {
    let p = periodic.len();
    (1..p.saturating_sub(1))
        .filter(|&ell| is_split(periodic, ell))
        .map(|ell| PalindromeSplit { p, ell })
        .collect()
}

/// One period of the reversed interleaving
/// `(a_{p-1}, b_p), (a_{p-2}, b_{p-1}), …, (a_1, b_2), (a_p, b_1)`.
pub fn reversed_periodic(periodic: &[JacobiPair]) -> Vec<JacobiPair> {
    let p = periodic.len();
    (1..=p)
        .map(|j| {
            // j-th entry pairs a_{p-j} (with a_0 = a_p) and b_{p-j+1}.
            let a_idx = if j == p { p } else { p - j };
            JacobiPair {
                a: periodic[a_idx - 1].a.clone(),
                b: periodic[p - j].b.clone(),
            }
        })
        .collect()
}

/// Whether two representations produce the same stream. Agreement on the
/// first `max(k) + p_x·p_y` pairs decides equality of eventually periodic streams.
pub fn same_stream(x: &JacobiSequence, y: &JacobiSequence) -> bool {
    let n = x.k().max(y.k()) + x.p() * y.p();
    (0..n).all(|i| x.stream_pair(i) == y.stream_pair(i))
}
