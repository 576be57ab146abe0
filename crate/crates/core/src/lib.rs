//! Exact and numeric tools for discrete m-functions whose Jacobi parameters
//! are eventually periodic.
//!
//! The exact side decides, by polynomial identity testing, whether an m-function
//! `M` and the second root `M̃` of its quadratic relation satisfy
//! `1/(α_k² M̃) = f_{T₃T₂T₁}(M)`; that identity holds exactly when the period
//! is doubly palindromic with the chosen first length. The numeric side
//! evaluates m-functions in the upper half-plane and cross-checks the algebra.

pub mod cli;
pub mod error;
pub mod exactalg;
pub mod gen;
pub mod jacobi;
pub mod mfun;
pub mod orthopoly;
pub mod quadratic;

pub use error::{Error, Result};
pub use exactalg::{mobius_apply, ComplexValue, Mat2, Poly, Rational};
pub use jacobi::{
    find_palindrome_splits, load_sequence, reversed_periodic, JacobiPair, JacobiSequence,
    PalindromeSplit,
};
pub use mfun::{
    eval_m, eval_periodic_m, eval_truncated, laurent_of_quadratic, recover_coefficients,
    strip_identity_check, LaurentSeries, MFunction, RecoveredPair,
};
pub use orthopoly::{
    build_t1, build_t2, build_t3, conj_transfer, first_kind_polys, second_kind_polys,
};
pub use quadratic::{
    discriminant_is_square, periodic_quadratic, pullback_quadratic, second_solution_value,
    verify_main_identity, verify_reverse_obstruction, MainIdentityVerifier, QuadraticRelation,
    VerificationReport,
};
