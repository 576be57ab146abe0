//! Python bindings. Rationals cross the boundary as `fractions.Fraction`
//! (ints and strings such as `"3/4"` are accepted on input) and evaluation
//! points as Python `complex`.

use jacobi_cf::exactalg::rational::parse_rational;
use jacobi_cf::quadratic::{reverse_obstruction_report, sequence_quadratic};
use jacobi_cf::{
    eval_m, eval_truncated, find_palindrome_splits, laurent_of_quadratic, recover_coefficients,
    JacobiPair, JacobiSequence, MainIdentityVerifier, Rational,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Ratio;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn to_py_err(e: jacobi_cf::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[derive(FromPyObject)]
enum RationalArg {
    Number(Ratio<BigInt>),
    Text(String),
}

impl RationalArg {
    fn into_rational(self) -> PyResult<Rational> {
        match self {
            RationalArg::Number(r) => Ok(r),
            RationalArg::Text(s) => parse_rational(&s).map_err(to_py_err),
        }
    }
}

fn to_pairs(raw: Vec<(RationalArg, RationalArg)>) -> PyResult<Vec<JacobiPair>> {
    raw.into_iter()
        .map(|(a, b)| JacobiPair::new(a.into_rational()?, b.into_rational()?).map_err(to_py_err))
        .collect()
}

fn from_pairs(pairs: &[JacobiPair]) -> Vec<(Rational, Rational)> {
    pairs.iter().map(|q| (q.a.clone(), q.b.clone())).collect()
}

/// An eventually periodic sequence of Jacobi parameters `(a, b)`, `a > 0`.
#[pyclass(
    name = "Sequence",
    module = "pyjacobi",
    frozen,
    eq,
    skip_from_py_object
)]
#[derive(Clone, PartialEq)]
struct PySequence {
    inner: JacobiSequence,
}

#[pymethods]
impl PySequence {
    #[new]
    #[pyo3(signature = (periodic, preperiodic = Vec::new()))]
    fn new(
        periodic: Vec<(RationalArg, RationalArg)>,
        preperiodic: Vec<(RationalArg, RationalArg)>,
    ) -> PyResult<Self> {
        let inner =
            JacobiSequence::new(to_pairs(preperiodic)?, to_pairs(periodic)?).map_err(to_py_err)?;
        Ok(PySequence { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        JacobiSequence::from_json(text)
            .map(|inner| PySequence { inner })
            .map_err(to_py_err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn periodic(&self) -> Vec<(Rational, Rational)> {
        from_pairs(self.inner.periodic())
    }

    #[getter]
    fn preperiodic(&self) -> Vec<(Rational, Rational)> {
        from_pairs(self.inner.preperiodic())
    }

    /// First `n` pairs of the stream.
    fn stream(&self, n: usize) -> Vec<(Rational, Rational)> {
        from_pairs(&self.inner.stream(n))
    }

    fn is_normalized(&self) -> bool {
        self.inner.is_normalized()
    }

    fn normalized(&self) -> Self {
        PySequence {
            inner: self.inner.normalize_kp(),
        }
    }

    fn double_period(&self) -> Self {
        PySequence {
            inner: self.inner.double_period(),
        }
    }

    fn strip(&self, count: usize) -> Self {
        PySequence {
            inner: self.inner.strip(count),
        }
    }

    /// Doubly palindromic first lengths of the period.
    fn splits(&self) -> Vec<usize> {
        find_palindrome_splits(self.inner.periodic())
            .iter()
            .map(|s| s.ell)
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("Sequence({})", self.inner)
    }
}

/// Result of the exact identity test at one first length.
#[pyclass(name = "Verification", module = "pyjacobi", frozen, get_all)]
struct PyVerification {
    ell: usize,
    holds: bool,
    residual_p: String,
    residual_q: String,
}

#[pymethods]
impl PyVerification {
    fn __repr__(&self) -> String {
        format!("Verification(ell={}, holds={})", self.ell, self.holds)
    }
}

/// Exact test at `ell`; the sequence is normalized first.
#[pyfunction]
fn verify(seq: &PySequence, ell: usize) -> PyResult<PyVerification> {
    let v = MainIdentityVerifier::new(&seq.inner.normalize_kp()).map_err(to_py_err)?;
    let r = v.verify(ell).map_err(to_py_err)?;
    Ok(PyVerification {
        ell,
        holds: r.holds,
        residual_p: r.residual_p.to_string(),
        residual_q: r.residual_q.to_string(),
    })
}

/// First lengths `1..=p-2` at which the identity holds.
#[pyfunction]
fn holds_set(seq: &PySequence) -> PyResult<Vec<usize>> {
    let p = seq.inner.p();
    let v = MainIdentityVerifier::new(&seq.inner.normalize_kp()).map_err(to_py_err)?;
    let mut out = Vec::new();
    for ell in 1..p.saturating_sub(1) {
        if v.verify(ell).map_err(to_py_err)?.holds {
            out.push(ell);
        }
    }
    Ok(out)
}

#[pyfunction(name = "eval_m")]
fn py_eval_m(seq: &PySequence, z: Complex64) -> PyResult<Complex64> {
    eval_m(&seq.inner, z).map_err(to_py_err)
}

#[pyfunction(name = "eval_truncated")]
#[pyo3(signature = (seq, z, depth = 2000))]
fn py_eval_truncated(seq: &PySequence, z: Complex64, depth: usize) -> PyResult<Complex64> {
    eval_truncated(&seq.inner, z, depth).map_err(to_py_err)
}

/// Coefficients `(α, β, γ)` of `α y² + β y + γ = 0` satisfied by the
/// m-function, each as a list of ascending polynomial coefficients.
#[pyfunction]
fn quadratic(seq: &PySequence) -> PyResult<(Vec<Rational>, Vec<Rational>, Vec<Rational>)> {
    let q = sequence_quadratic(&seq.inner).map_err(to_py_err)?;
    Ok((
        q.alpha.coeffs().to_vec(),
        q.beta.coeffs().to_vec(),
        q.gamma.coeffs().to_vec(),
    ))
}

/// Recovers `(a², b)` pairs from the Laurent expansion of order `order`
/// (default `2(k+p)+6`).
#[pyfunction]
#[pyo3(signature = (seq, order = None))]
fn recover(seq: &PySequence, order: Option<usize>) -> PyResult<Vec<(Rational, Rational)>> {
    let order = order.unwrap_or(2 * (seq.inner.k() + seq.inner.p()) + 6);
    let q = sequence_quadratic(&seq.inner).map_err(to_py_err)?;
    let series = laurent_of_quadratic(&q, order).map_err(to_py_err)?;
    let pairs = recover_coefficients(&series, order.saturating_sub(1) / 2).map_err(to_py_err)?;
    Ok(pairs.into_iter().map(|r| (r.a_squared, r.b)).collect())
}

/// `(m_function_like, decay_constant)` of the asymptotic test on `1/(α_k² M̃)`.
#[pyfunction]
fn reverse_obstruction(seq: &PySequence) -> PyResult<(bool, Complex64)> {
    let r = reverse_obstruction_report(&seq.inner).map_err(to_py_err)?;
    Ok((r.m_function_like, r.decay_constant))
}

#[pymodule]
fn pyjacobi(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySequence>()?;
    m.add_class::<PyVerification>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(holds_set, m)?)?;
    m.add_function(wrap_pyfunction!(py_eval_m, m)?)?;
    m.add_function(wrap_pyfunction!(py_eval_truncated, m)?)?;
    m.add_function(wrap_pyfunction!(quadratic, m)?)?;
    m.add_function(wrap_pyfunction!(recover, m)?)?;
    m.add_function(wrap_pyfunction!(reverse_obstruction, m)?)?;
    Ok(())
}
