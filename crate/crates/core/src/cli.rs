//! Command implementations behind the `jacobi-cf` binary. Each command
//! returns a [`RunReport`]; the exit status is a function of the report alone.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::exactalg::rational::format_rational;
use crate::gen;
use crate::jacobi::{find_palindrome_splits, load_sequence, JacobiSequence};
use crate::mfun::{eval_truncated, laurent_of_quadratic, recover_coefficients, MFunction};
use crate::quadratic::{second_solution_value, sequence_quadratic, MainIdentityVerifier};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Default relative tolerance for numeric samples of the identity.
pub const IDENTITY_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_DEPTH: usize = 2000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub input_digest: String,
    pub exit_status: i32,
    pub body: ReportBody,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportBody {
    Analyze(AnalyzeReport),
    Verify(VerifyReport),
    Eval(EvalReport),
    Recover(RecoverReport),
    SelfTest(SelfTestReport),
    Error { message: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub p: usize,
    pub k: usize,
    pub normalized_k: usize,
    pub normalization_applied: bool,
    pub splits: Vec<usize>,
    /// Set when the period has no split of its own but its doubled form does.
    pub doubling_applied: bool,
    pub doubled_splits: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllVerdict {
    pub ell: usize,
    pub holds: bool,
    pub residual_p_degree: Option<usize>,
    pub residual_q_degree: Option<usize>,
    pub max_sample_diff: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub p: usize,
    pub k: usize,
    pub normalization_applied: bool,
    pub requested: Vec<usize>,
    pub verdicts: Vec<EllVerdict>,
    pub holds_set: Vec<usize>,
    pub tolerance: f64,
    /// Whether every numeric sample of a holding identity is within tolerance.
    pub numeric_consistent: bool,
    pub inconclusive: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointEval {
    pub z: [f64; 2],
    pub m_full: [f64; 2],
    pub m_periodic: [f64; 2],
    pub m_second: [f64; 2],
    pub truncated: [f64; 2],
    pub truncation_diff: f64,
    pub herglotz: bool,
    /// Residual of the doubly palindromic identity at the first split, if any.
    pub identity_residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub depth: usize,
    pub tolerance: f64,
    pub identity_ell: Option<usize>,
    pub points: Vec<PointEval>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveredEntry {
    pub a_squared: String,
    pub b: String,
    pub a: f64,
    pub a_exact: Option<String>,
    pub matches_input: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoverReport {
    pub order: usize,
    pub recovered: Vec<RecoveredEntry>,
    pub round_trip_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfTestReport {
    pub seed: u64,
    pub count: usize,
    pub checked_pairs: usize,
    pub mismatches: Vec<String>,
}

fn cplx(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

struct Input {
    digest: String,
    seq: JacobiSequence,
}

fn read_input(path: &Path) -> Result<Input, (String, String)> {
    let bytes =
        std::fs::read(path).map_err(|e| (String::new(), format!("{}: {e}", path.display())))?;
    let digest = digest(&bytes);
    let text = String::from_utf8(bytes).map_err(|e| (digest.clone(), e.to_string()))?;
    let seq = load_sequence(&text).map_err(|e| (digest.clone(), e.to_string()))?;
    Ok(Input { digest, seq })
}

fn error_report(command: String, digest: String, message: String, exit_status: i32) -> RunReport {
    RunReport {
        schema: SCHEMA_VERSION,
        command,
        input_digest: digest,
        exit_status,
        body: ReportBody::Error { message },
    }
}

macro_rules! load_or_report {
    ($path:expr, $command:expr) => {
        match read_input($path) {
            Ok(input) => input,
            Err((digest, message)) => return error_report($command, digest, message, EXIT_INPUT),
        }
    };
}

pub fn cmd_analyze(path: &Path) -> RunReport {
    let command = "analyze".to_string();
    let Input { digest, seq } = load_or_report!(path, command);
    let splits: Vec<usize> = find_palindrome_splits(seq.periodic())
        .iter()
        .map(|s| s.ell)
        .collect();
    let (doubling_applied, doubled_splits) = if splits.is_empty() {
        let doubled: Vec<usize> = find_palindrome_splits(seq.double_period().periodic())
            .iter()
            .map(|s| s.ell)
            .collect();
        (!doubled.is_empty(), doubled)
    } else {
        (false, Vec::new())
    };
    let normalized = seq.normalize_kp();
    RunReport {
        schema: SCHEMA_VERSION,
        command,
        input_digest: digest,
        exit_status: EXIT_OK,
        body: ReportBody::Analyze(AnalyzeReport {
            p: seq.p(),
            k: seq.k(),
            normalized_k: normalized.k(),
            normalization_applied: normalized != seq,
            splits,
            doubling_applied,
            doubled_splits,
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EllSelection {
    One(usize),
    All,
}

pub fn cmd_verify(path: &Path, selection: EllSelection, tolerance: f64) -> RunReport {
    let command = match selection {
        EllSelection::One(ell) => format!("verify --ell {ell}"),
        EllSelection::All => "verify --all".to_string(),
    };
    let Input { digest, seq } = load_or_report!(path, command);
    let normalized = seq.normalize_kp();
    let p = seq.p();
    let requested: Vec<usize> = match selection {
        EllSelection::One(ell) => {
            if ell == 0 || ell + 2 > p {
                let msg = format!("--ell {ell} outside 1..={} for period {p}", p as i64 - 2);
                return error_report(command, digest, msg, EXIT_INPUT);
            }
            vec![ell]
        }
        EllSelection::All => (1..p.saturating_sub(1)).collect(),
    };
    let mut report = VerifyReport {
        p,
        k: normalized.k(),
        normalization_applied: normalized != seq,
        requested: requested.clone(),
        verdicts: Vec::new(),
        holds_set: Vec::new(),
        tolerance,
        numeric_consistent: true,
        inconclusive: None,
    };
    let verifier = match MainIdentityVerifier::new(&normalized) {
        Ok(v) => v,
        Err(Error::DegenerateRelation(msg)) => {
            report.inconclusive = Some(msg);
            return RunReport {
                schema: SCHEMA_VERSION,
                command,
                input_digest: digest,
                exit_status: EXIT_INCONCLUSIVE,
                body: ReportBody::Verify(report),
            };
        }
        Err(e) => return error_report(command, digest, e.to_string(), EXIT_INPUT),
    };
    for &ell in &requested {
        match verifier.verify(ell) {
            Ok(r) => {
                let max_diff = r.max_sample_diff();
                if r.holds && max_diff.is_some_and(|d| d > tolerance) {
                    report.numeric_consistent = false;
                }
                if r.holds {
                    report.holds_set.push(ell);
                }
                report.verdicts.push(EllVerdict {
                    ell,
                    holds: r.holds,
                    residual_p_degree: r.residual_p_degree(),
                    residual_q_degree: r.residual_q_degree(),
                    max_sample_diff: max_diff,
                });
            }
            Err(e) => return error_report(command, digest, e.to_string(), EXIT_INPUT),
        }
    }
    let exit_status = if report.verdicts.iter().all(|v| v.holds) && !report.verdicts.is_empty() {
        EXIT_OK
    } else {
        EXIT_FAIL
    };
    RunReport {
        schema: SCHEMA_VERSION,
        command,
        input_digest: digest,
        exit_status,
        body: ReportBody::Verify(report),
    }
}

/// Parses `"re,im;re,im;…"`.
pub fn parse_points(text: &str) -> Result<Vec<Complex64>, String> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (re, im) = item
                .split_once(',')
                .ok_or_else(|| format!("point {item:?} is not of the form re,im"))?;
            let re: f64 = re
                .trim()
                .parse()
                .map_err(|_| format!("bad real part in {item:?}"))?;
            let im: f64 = im
                .trim()
                .parse()
                .map_err(|_| format!("bad imaginary part in {item:?}"))?;
            Ok(Complex64::new(re, im))
        })
        .collect()
}

pub fn cmd_eval(path: &Path, points: &[Complex64], depth: usize, tolerance: f64) -> RunReport {
    let command = format!("eval --depth {depth}");
    let Input { digest, seq } = load_or_report!(path, command);
    if let Some(bad) = points.iter().find(|z| !z.is_finite() || z.im <= 0.0) {
        let msg = Error::NotInUpperHalfPlane {
            re: bad.re,
            im: bad.im,
        }
        .to_string();
        return error_report(command, digest, msg, EXIT_INPUT);
    }
    if points.is_empty() {
        return error_report(command, digest, "no evaluation points".into(), EXIT_INPUT);
    }
    let normalized = seq.normalize_kp();
    let identity_ell = find_palindrome_splits(seq.periodic())
        .first()
        .map(|s| s.ell);
    let evaluate = || -> crate::Result<EvalReport> {
        let mfun = MFunction::new(&seq)?;
        let relation = sequence_quadratic(&seq)?;
        let verifier = match identity_ell {
            Some(_) => Some(MainIdentityVerifier::new(&normalized)?),
            None => None,
        };
        let mut out = Vec::with_capacity(points.len());
        for &z in points {
            let m_full = mfun.eval(z)?;
            let m_periodic = mfun.eval_tail(z)?;
            let m_second = second_solution_value(&relation, m_full, z)?;
            let truncated = eval_truncated(&seq, z, depth)?;
            let identity_residual = match (&verifier, identity_ell) {
                (Some(v), Some(ell)) => Some(v.numeric_residual(ell, z)?),
                _ => None,
            };
            out.push(PointEval {
                z: cplx(z),
                m_full: cplx(m_full),
                m_periodic: cplx(m_periodic),
                m_second: cplx(m_second),
                truncated: cplx(truncated),
                truncation_diff: (m_full - truncated).norm(),
                herglotz: m_full.im > 0.0,
                identity_residual,
            });
        }
        Ok(EvalReport {
            depth,
            tolerance,
            identity_ell,
            points: out,
        })
    };
    match evaluate() {
        Ok(report) => RunReport {
            schema: SCHEMA_VERSION,
            command,
            input_digest: digest,
            exit_status: EXIT_OK,
            body: ReportBody::Eval(report),
        },
        Err(e) => error_report(command, digest, e.to_string(), EXIT_INPUT),
    }
}

/// Default Laurent order for a sequence with `n = k + p` leading pairs.
pub fn default_order(seq: &JacobiSequence) -> usize {
    2 * (seq.k() + seq.p()) + 6
}

pub fn cmd_recover(path: &Path, order: Option<usize>) -> RunReport {
    let command = match order {
        Some(n) => format!("recover --order {n}"),
        None => "recover".to_string(),
    };
    let Input { digest, seq } = load_or_report!(path, command);
    let order = order.unwrap_or_else(|| default_order(&seq));
    let span = seq.k() + seq.p();
    let needed = 2 * span + 1;
    if order < needed {
        let msg = Error::InsufficientOrder { needed, got: order }.to_string();
        return error_report(command, digest, msg, EXIT_INPUT);
    }
    let count = (order - 1) / 2;
    let run = || -> crate::Result<RecoverReport> {
        let relation = sequence_quadratic(&seq)?;
        let series = laurent_of_quadratic(&relation, order)?;
        let pairs = recover_coefficients(&series, count)?;
        let recovered: Vec<RecoveredEntry> = pairs
            .iter()
            .enumerate()
            .map(|(i, r)| RecoveredEntry {
                a_squared: format_rational(&r.a_squared),
                b: format_rational(&r.b),
                a: r.a_approx,
                a_exact: r.a_exact.as_ref().map(format_rational),
                matches_input: r.matches(seq.stream_pair(i)),
            })
            .collect();
        let round_trip_ok = recovered.iter().all(|r| r.matches_input);
        Ok(RecoverReport {
            order,
            recovered,
            round_trip_ok,
        })
    };
    match run() {
        Ok(report) => RunReport {
            schema: SCHEMA_VERSION,
            command,
            input_digest: digest,
            exit_status: if report.round_trip_ok {
                EXIT_OK
            } else {
                EXIT_FAIL
            },
            body: ReportBody::Recover(report),
        },
        // The relation of a valid sequence always has an m-function branch,
        // so failures here are implementation faults rather than input faults.
        Err(e) => error_report(command, digest, e.to_string(), EXIT_FAIL),
    }
}

/// Randomized detector-equivalence sweep: for each generated period, the set of
/// first lengths where the exact identity holds must equal the palindrome splits.
pub fn cmd_selftest(seed: u64, count: usize) -> RunReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for i in 0..count {
        let p = 3 + i % 8;
        let period = match i % 3 {
            0 => gen::random_period(&mut rng, p, 9),
            1 => gen::small_alphabet_period(&mut rng, p),
            _ => {
                let ell = 1 + i % (p - 2);
                gen::doubly_palindromic_period(&mut rng, p, ell, 9)
            }
        };
        let seq = JacobiSequence::purely_periodic(period.clone())
            .expect("nonempty period")
            .normalize_kp();
        let expected: Vec<usize> = find_palindrome_splits(&period)
            .iter()
            .map(|s| s.ell)
            .collect();
        let got = MainIdentityVerifier::new(&seq).and_then(|v| {
            (1..p - 1)
                .map(|ell| v.verify(ell).map(|r| (ell, r.holds)))
                .collect::<crate::Result<Vec<_>>>()
        });
        match got {
            Ok(verdicts) => {
                checked += verdicts.len();
                let holds: Vec<usize> = verdicts.into_iter().filter(|v| v.1).map(|v| v.0).collect();
                if holds != expected {
                    mismatches.push(format!(
                        "{}: identity holds at {holds:?}, splits {expected:?}",
                        seq.to_json()
                    ));
                }
            }
            Err(e) => mismatches.push(format!("{}: {e}", seq.to_json())),
        }
    }
    RunReport {
        schema: SCHEMA_VERSION,
        command: format!("selftest --seed {seed} --count {count}"),
        input_digest: String::new(),
        exit_status: if mismatches.is_empty() {
            EXIT_OK
        } else {
            EXIT_FAIL
        },
        body: ReportBody::SelfTest(SelfTestReport {
            seed,
            count,
            checked_pairs: checked,
            mismatches,
        }),
    }
}

fn fmt_c(v: [f64; 2]) -> String {
    format!("{:.12e} {:+.12e}i", v[0], v[1])
}

fn fmt_degree(d: Option<usize>) -> String {
    d.map_or_else(|| "zero".to_string(), |d| d.to_string())
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        if !self.input_digest.is_empty() {
            let _ = writeln!(s, "input sha256: {}", self.input_digest);
        }
        match &self.body {
            ReportBody::Analyze(r) => {
                let _ = writeln!(s, "period p = {}, preperiodic k = {}", r.p, r.k);
                if r.normalization_applied {
                    let _ = writeln!(
                        s,
                        "normalization: one period appended, k = {}",
                        r.normalized_k
                    );
                } else {
                    let _ = writeln!(s, "normalization: already normalized");
                }
                let _ = writeln!(s, "palindrome splits: {:?}", r.splits);
                if r.doubling_applied {
                    let _ = writeln!(
                        s,
                        "doubled period 2p = {}: splits {:?}",
                        2 * r.p,
                        r.doubled_splits
                    );
                }
            }
            ReportBody::Verify(r) => {
                let _ = writeln!(s, "period p = {}, normalized k = {}", r.p, r.k);
                if let Some(why) = &r.inconclusive {
                    let _ = writeln!(s, "inconclusive: {why}");
                }
                for v in &r.verdicts {
                    let _ = writeln!(
                        s,
                        "ell = {}: {} (deg P = {}, deg Q = {}{})",
                        v.ell,
                        if v.holds { "holds" } else { "fails" },
                        fmt_degree(v.residual_p_degree),
                        fmt_degree(v.residual_q_degree),
                        v.max_sample_diff
                            .map(|d| format!(", numeric diff {d:.3e}"))
                            .unwrap_or_default()
                    );
                }
                let _ = writeln!(s, "holds at: {:?}", r.holds_set);
                if !r.numeric_consistent {
                    let _ = writeln!(
                        s,
                        "warning: numeric samples exceed tolerance {:e}",
                        r.tolerance
                    );
                }
            }
            ReportBody::Eval(r) => {
                for pt in &r.points {
                    let _ = writeln!(s, "z = {}", fmt_c(pt.z));
                    let _ = writeln!(s, "  M(z)  = {}", fmt_c(pt.m_full));
                    let _ = writeln!(s, "  m(z)  = {}", fmt_c(pt.m_periodic));
                    let _ = writeln!(s, "  M~(z) = {}", fmt_c(pt.m_second));
                    let _ = writeln!(
                        s,
                        "  truncated (depth {}) diff = {:.3e}, Im M > 0: {}",
                        r.depth, pt.truncation_diff, pt.herglotz
                    );
                    if let (Some(res), Some(ell)) = (pt.identity_residual, r.identity_ell) {
                        let _ = writeln!(s, "  identity residual at ell = {ell}: {res:.3e}");
                    }
                }
            }
            ReportBody::Recover(r) => {
                let _ = writeln!(s, "Laurent order {}", r.order);
                for (j, e) in r.recovered.iter().enumerate() {
                    let _ = writeln!(
                        s,
                        "  j = {}: a^2 = {}, b = {}{}",
                        j + 1,
                        e.a_squared,
                        e.b,
                        if e.matches_input { "" } else { "  MISMATCH" }
                    );
                }
                let _ = writeln!(
                    s,
                    "round trip: {}",
                    if r.round_trip_ok { "exact" } else { "FAILED" }
                );
            }
            ReportBody::SelfTest(r) => {
                let _ = writeln!(
                    s,
                    "{} periods, {} (sequence, ell) checks, {} mismatches",
                    r.count,
                    r.checked_pairs,
                    r.mismatches.len()
                );
                for m in &r.mismatches {
                    let _ = writeln!(s, "  {m}");
                }
            }
            ReportBody::Error { message } => {
                let _ = writeln!(s, "error: {message}");
            }
        }
        let _ = writeln!(s, "exit status: {}", self.exit_status);
        s
    }
}
