//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always reach stdout.

mod common;

use std::io::Write as _;
use std::time::{Duration, Instant};

use jacobi_cf::cli::{
    cmd_analyze, cmd_verify, EllSelection, ReportBody, EXIT_OK, IDENTITY_TOLERANCE,
};
use jacobi_cf::exactalg::rational::to_f64;
use jacobi_cf::mfun::reversed_strip_residual;
use jacobi_cf::quadratic::reverse_obstruction_report;
use jacobi_cf::{
    conj_transfer, eval_m, eval_truncated, find_palindrome_splits, gen, laurent_of_quadratic,
    periodic_quadratic, recover_coefficients, strip_identity_check, verify_main_identity,
    JacobiSequence, MainIdentityVerifier, Poly,
};
use num_complex::Complex64;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn check(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn holds_set(seq: &JacobiSequence) -> Result<Vec<usize>, String> {
    let p = seq.p();
    let v = MainIdentityVerifier::new(&seq.normalize_kp()).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for ell in 1..p - 1 {
        if v.verify(ell).map_err(|e| e.to_string())?.holds {
            out.push(ell);
        }
    }
    Ok(out)
}

fn detector_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = common::rng(1001);
    let total = 240;
    let mut mismatches = 0;
    let mut positives = 0;
    for i in 0..total {
        let p = 3 + i % 10;
        let period = match i % 3 {
            0 => gen::random_period(&mut rng, p, 9),
            1 => gen::small_alphabet_period(&mut rng, p),
            _ => {
                let ell = rng.gen_range(1..=p - 2);
                gen::doubly_palindromic_period(&mut rng, p, ell, 9)
            }
        };
        let expected = common::brute_force_splits(&period);
        positives += expected.len();
        let seq = JacobiSequence::purely_periodic(period).unwrap();
        match holds_set(&seq) {
            Ok(got) if got == expected => {}
            Ok(got) => {
                mismatches += 1;
                eprintln!("  mismatch {seq}: identity {got:?}, oracle {expected:?}");
            }
            Err(e) => {
                mismatches += 1;
                eprintln!("  error {seq}: {e}");
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome::check(
        mismatches == 0 && elapsed < Duration::from_secs(60),
        format!(
            "{total} periods, p in 3..=12, {positives} oracle splits, {mismatches} mismatches, {:.1}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn constructive_positives() -> Outcome {
    let mut rng = common::rng(1002);
    let total = 120;
    let mut good = 0;
    for i in 0..total {
        let p = 3 + i % 10;
        let ell = rng.gen_range(1..=p - 2);
        let period = gen::doubly_palindromic_period(&mut rng, p, ell, 9);
        let seq = JacobiSequence::purely_periodic(period)
            .unwrap()
            .normalize_kp();
        match verify_main_identity(&seq, ell) {
            Ok(r) if r.holds && r.residual_p.is_zero() && r.residual_q.is_zero() => good += 1,
            other => eprintln!("  {seq} at {ell}: {other:?}"),
        }
    }
    Outcome::check(
        good == total,
        format!("{good}/{total} generated instances hold with zero residuals"),
    )
}

fn constructive_negatives() -> Outcome {
    let mut rng = common::rng(1003);
    let total = 120;
    let mut good = 0;
    for i in 0..total {
        let p = 3 + i % 10;
        let ell = rng.gen_range(1..=p - 2);
        let period = gen::doubly_palindromic_period(&mut rng, p, ell, 9);
        let broken = gen::break_split(&mut rng, &period, ell, 9);
        assert!(!common::brute_force_splits(&broken).contains(&ell));
        let seq = JacobiSequence::purely_periodic(broken)
            .unwrap()
            .normalize_kp();
        match verify_main_identity(&seq, ell) {
            Ok(r) if !r.holds && !(r.residual_p.is_zero() && r.residual_q.is_zero()) => good += 1,
            other => eprintln!("  {seq} at {ell}: {other:?}"),
        }
    }
    Outcome::check(
        good == total,
        format!("{good}/{total} perturbed instances give a nonzero residual"),
    )
}

fn doubled_example() -> Outcome {
    // (a₁, a₂, ã₁, b₁, b₂, b₃) = (1, 2, 3, 0, 1, −1); period a₁a₂a₂a₁ã₁ / b₁b₂b₃b₂b₁.
    let (a1, a2, at1, b1, b2, b3) = (1, 2, 3, 0, 1, -1);
    let base = common::pairs(&[(a1, b1), (a2, b2), (a2, b3), (a1, b2), (at1, b1)]);
    let doubled = JacobiSequence::purely_periodic(base)
        .unwrap()
        .double_period();
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(doubled.to_json().as_bytes()).unwrap();

    let analyzed = match cmd_analyze(file.path()).body {
        ReportBody::Analyze(a) => a.p == 10 && a.splits.contains(&4),
        _ => false,
    };
    let verify = cmd_verify(file.path(), EllSelection::One(4), IDENTITY_TOLERANCE);
    let verified = verify.exit_status == EXIT_OK;
    Outcome::check(
        analyzed && verified,
        format!("p = 10 split 4 detected: {analyzed}, verified at ell = 4: {verified}"),
    )
}

fn determinant_invariant() -> Outcome {
    let mut rng = common::rng(1005);
    let lists = 50;
    let mut bad = 0;
    for _ in 0..lists {
        let c = gen::random_period(&mut rng, 50, 9);
        for n in 0..=50 {
            if conj_transfer(&c, n).unwrap().det() != Poly::one() {
                bad += 1;
            }
        }
    }
    Outcome::check(
        bad == 0,
        format!("{lists} lists, n = 0..=50, {bad} determinants differ from 1"),
    )
}

fn chebyshev_oracle() -> Outcome {
    let seq = JacobiSequence::purely_periodic(common::pairs(&[(1, 0)])).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..5 {
        for j in 0..5 {
            let z = Complex64::new(-2.0 + i as f64, 0.5 + 3.5 * j as f64 / 4.0);
            let s = (z * z - 4.0).sqrt();
            // The m-function branch is the root inside the unit disk.
            let r1 = (-z + s) / 2.0;
            let r2 = (-z - s) / 2.0;
            let exact = if r1.norm() < 1.0 { r1 } else { r2 };
            worst = worst.max((eval_m(&seq, z).unwrap() - exact).norm());
        }
    }
    Outcome::check(
        worst < 1e-12,
        format!("5x5 grid, max error {worst:.2e} (tolerance 1e-12)"),
    )
}

fn truncation_consistency() -> Outcome {
    let mut rng = common::rng(1007);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let seq = common::random_sequence(&mut rng, 4, 6, 10);
        for _ in 0..20 {
            let z = common::upper_point(&mut rng, 0.5);
            let d = (eval_m(&seq, z).unwrap() - eval_truncated(&seq, z, 2000).unwrap()).norm();
            worst = worst.max(d);
        }
    }
    Outcome::check(
        worst < 1e-8,
        format!("20 sequences x 20 points, max difference {worst:.2e} (tolerance 1e-8)"),
    )
}

fn stripping_identities() -> Outcome {
    let mut rng = common::rng(1008);
    let mut worst_strip: f64 = 0.0;
    for _ in 0..40 {
        let seq = common::random_sequence(&mut rng, 3, 5, 9);
        for count in 1..=6 {
            let z = common::upper_point(&mut rng, 0.5);
            worst_strip = worst_strip.max(strip_identity_check(&seq, count, z).unwrap());
        }
    }
    let mut worst_split: f64 = 0.0;
    let mut best_nonsplit = f64::INFINITY;
    for i in 0..40 {
        let p = 3 + i % 8;
        let ell = rng.gen_range(1..=p - 2);
        let period = gen::doubly_palindromic_period(&mut rng, p, ell, 9);
        let splits = common::brute_force_splits(&period);
        let z = common::upper_point(&mut rng, 0.5);
        for other in 1..=p - 2 {
            let r = reversed_strip_residual(&period, other, z).unwrap();
            if splits.contains(&other) {
                worst_split = worst_split.max(r);
            } else {
                best_nonsplit = best_nonsplit.min(r);
            }
        }
    }
    Outcome::check(
        worst_strip < 1e-9 && worst_split < 1e-9 && best_nonsplit > 1e-3,
        format!(
            "stripping max {worst_strip:.2e}, splits max {worst_split:.2e} (< 1e-9), non-splits min {best_nonsplit:.2e} (> 1e-3)"
        ),
    )
}

fn round_trip_recovery() -> Outcome {
    let mut rng = common::rng(1009);
    let total = 50;
    let mut short_ok = 0;
    let mut full_ok = 0;
    let mut literal_ok = 0;
    for i in 0..total {
        let p = 1 + i % 6;
        let period = gen::random_period(&mut rng, p, 9);
        let seq = JacobiSequence::purely_periodic(period.clone()).unwrap();
        let q = periodic_quadratic(&period).unwrap();
        let matches = |order: usize, count: usize| -> bool {
            let series = laurent_of_quadratic(&q, order).unwrap();
            match recover_coefficients(&series, count) {
                Ok(rec) => {
                    rec.len() == count
                        && rec
                            .iter()
                            .enumerate()
                            .all(|(j, r)| r.matches(seq.stream_pair(j)))
                }
                Err(_) => false,
            }
        };
        // Order 2p+6 determines (2p+6-1)/2 = p+2 pairs, a full period and more.
        if matches(2 * p + 6, p + 2) {
            short_ok += 1;
        }
        // The first 2p pairs need order 4p+1.
        if matches((2 * p + 6).max(4 * p + 1), 2 * p) {
            full_ok += 1;
        }
        if matches(2 * p + 6, 2 * p) {
            literal_ok += 1;
        }
    }
    Outcome::check(
        short_ok == total && full_ok == total,
        format!(
            "{total} periods p <= 6: order 2p+6 recovers p+2 pairs exactly {short_ok}/{total}; \
             order max(2p+6, 4p+1) recovers 2p pairs exactly {full_ok}/{total}; \
             2p pairs at order 2p+6 only for p <= 2 ({literal_ok}/{total})"
        ),
    )
}

fn reverse_obstruction() -> Outcome {
    let mut rng = common::rng(1010);
    let mut grafted_ok = 0;
    let mut worst_rel: f64 = 0.0;
    let grafted = 20;
    for _ in 0..grafted {
        let tail = gen::random_pair(&mut rng, 5);
        let head = loop {
            let h = gen::random_pair(&mut rng, 5);
            if h.a != tail.a {
                break h;
            }
        };
        let ratio = to_f64(&head.a).powi(2) / to_f64(&tail.a).powi(2);
        let expected = -1.0 / (1.0 - ratio);
        let seq = JacobiSequence::new(vec![head], vec![tail]).unwrap();
        let report = reverse_obstruction_report(&seq).unwrap();
        let rel = (report.decay_constant - expected).norm() / expected.abs();
        worst_rel = worst_rel.max(rel);
        if !report.m_function_like && rel < 1e-2 {
            grafted_ok += 1;
        }
    }
    let palindromic = 20;
    let mut palindromic_ok = 0;
    for i in 0..palindromic {
        let p = 3 + i % 6;
        let ell = rng.gen_range(1..=p - 2);
        let period = gen::doubly_palindromic_period(&mut rng, p, ell, 9);
        assert!(!find_palindrome_splits(&period).is_empty());
        let seq = JacobiSequence::purely_periodic(period).unwrap();
        if reverse_obstruction_report(&seq).unwrap().m_function_like {
            palindromic_ok += 1;
        }
    }
    Outcome::check(
        grafted_ok == grafted && palindromic_ok == palindromic,
        format!(
            "grafted k=1: {grafted_ok}/{grafted} rejected, decay constant max rel. error {worst_rel:.2e} (< 1e-2); \
             doubly palindromic: {palindromic_ok}/{palindromic} accepted"
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("detector equivalence", detector_equivalence),
        ("constructive positives", constructive_positives),
        ("constructive negatives", constructive_negatives),
        ("doubled p=10 example", doubled_example),
        ("determinant invariant", determinant_invariant),
        ("Chebyshev oracle", chebyshev_oracle),
        ("truncation consistency", truncation_consistency),
        ("stripping identities", stripping_identities),
        ("round-trip recovery", round_trip_recovery),
        ("reverse obstruction", reverse_obstruction),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        if !outcome.pass {
            failed += 1;
        }
        println!("acceptance {:>2} [{tag}] {name}: {}", i + 1, outcome.detail);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
