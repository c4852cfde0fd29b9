//! Command-line surface: single-instance checks, fuzz campaigns and the
//! minimization run. The `logineq` binary only forwards to [`run`].
//!
//! Exit codes: 0 consistent, 1 critical violation, 2 hypothesis not
//! satisfied, 3 conjecture finding, 4 optimizer did not converge, 64 usage or
//! parse error.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::base::{PositiveVector, Tolerance};
use crate::error::{Error, Result};
use crate::expineq::{
    cardano_bound, cardano_exp_inequality, exp_sum_monotone_equiv, family_monotone_verdict,
    FamilyVariant, Polynomial, PolynomialFamily, ZeroSumTriple, DEFAULT_GRID_POINTS,
};
use crate::fuzz::{run_campaign, FuzzConfig, TheoremId};
use crate::infoineq::{
    generalized_information_sides, generalized_log_sum_sides, gibbs_forms,
    stronger_log_sum_sides, ProbabilityVector, ShiftSet, DEFAULT_GIBBS_SAMPLES,
};
use crate::majorization::{hlp_convex_test, log_implications_check, majorize, Relation};
use crate::optimize::{feasibility_check, minimize_ssli_traced, OptimizerConfig};
use crate::ssli::{
    conjecture_verdict, powered_logs_verdict, remark35_boundary, thm32_verdict, Hypothesis,
    PairingOptions, SsliInstance,
};
use crate::sympoly::elementary_symmetric_all;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CRITICAL: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_FINDING: i32 = 3;
pub const EXIT_NO_CONVERGENCE: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

/// Gap below which a minimization result counts as a conjecture finding.
pub const MINIMIZE_GAP_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "logineq", version, about = "Check, fuzz and optimize logarithmic inequalities")]
pub struct Cli {
    /// Instance file (JSON); read from stdin when omitted.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Report destination; written atomically.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Absolute and relative comparison tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Treat integer JSON numbers as exact and reject other plain decimals.
    #[arg(long, global = true)]
    exact: bool,
    /// Restrict the rearrangement to one common reindexing of a and b.
    #[arg(long, global = true)]
    common_reindex: bool,
    #[arg(long, global = true, env = "LOGINEQ_SEED")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one instance.
    Check {
        #[arg(value_enum)]
        subject: Subject,
    },
    /// Run a seeded campaign for one theorem id.
    Fuzz {
        theorem: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Fixed vector length (overrides --n-min/--n-max).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Minimize the sum of squared logs over the feasible set of `a`.
    Minimize {
        #[arg(long, default_value_t = 16)]
        starts: usize,
        #[arg(long)]
        max_iters: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Subject {
    SsliConjecture,
    SsliRearrangement,
    Powered,
    Majorize,
    Logsum,
    Gibbs,
    Cardano,
    TripleEquiv,
    Family,
}

impl Subject {
    fn name(self) -> &'static str {
        match self {
            Subject::SsliConjecture => "ssli-conjecture",
            Subject::SsliRearrangement => "ssli-rearrangement",
            Subject::Powered => "powered",
            Subject::Majorize => "majorize",
            Subject::Logsum => "logsum",
            Subject::Gibbs => "gibbs",
            Subject::Cardano => "cardano",
            Subject::TripleEquiv => "triple-equiv",
            Subject::Family => "family",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// JSON instance document. Vector entries are numbers or `"p/q"` strings.
#[derive(Debug, Default, Deserialize)]
pub struct InstanceFile {
    #[serde(alias = "x")]
    pub a: Option<Vec<Value>>,
    #[serde(alias = "y")]
    pub b: Option<Vec<Value>>,
    pub p: Option<f64>,
    pub k: Option<f64>,
    pub ks: Option<Vec<f64>>,
    pub m: Option<f64>,
    pub abc: Option<Vec<Value>>,
    pub xyz: Option<Vec<Value>>,
    pub samples: Option<usize>,
    pub family: Option<FamilySpec>,
}

#[derive(Debug, Deserialize)]
pub struct FamilySpec {
    /// Coefficients of each `f_i` in ascending degree.
    pub polys: Vec<Vec<f64>>,
    pub interval: [f64; 2],
    pub grid_points: Option<usize>,
    /// `plain` (default), `product_h` or `composed_h`.
    pub variant: Option<String>,
    pub h: Option<Vec<f64>>,
}

/// Parses `"p/q"` or `"p"` with a positive denominator.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("`{s}` is not an integer or p/q rational"));
    let (num, den) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den <= BigInt::zero() {
        return Err(Error::Parse(format!("`{s}` needs a positive denominator")));
    }
    Ok(BigRational::new(num, den))
}

fn parse_entry(v: &Value, exact_mode: bool) -> Result<(f64, Option<BigRational>)> {
    match v {
        Value::Number(n) => {
            let f = n
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("number {n} out of range")))?;
            if let Some(i) = n.as_i64().filter(|_| exact_mode) {
                return Ok((f, Some(BigRational::from_integer(i.into()))));
            }
            if exact_mode {
                return Err(Error::Parse(format!(
                    "exact mode needs \"p/q\" strings for non-integer {n}"
                )));
            }
            Ok((f, None))
        }
        Value::String(s) => {
            let r = parse_rational(s)?;
            let f = r
                .to_f64()
                .ok_or_else(|| Error::Parse(format!("`{s}` cannot be represented")))?;
            Ok((f, Some(r)))
        }
        other => Err(Error::Parse(format!("expected number or string, got {other}"))),
    }
}

/// Exact when every entry is exact; otherwise float-only.
pub fn parse_vector(values: &[Value], exact_mode: bool) -> Result<PositiveVector> {
    let parsed = values
        .iter()
        .map(|v| parse_entry(v, exact_mode))
        .collect::<Result<Vec<_>>>()?;
    if !parsed.is_empty() && parsed.iter().all(|(_, e)| e.is_some()) {
        PositiveVector::from_rationals(parsed.into_iter().filter_map(|(_, e)| e).collect())
    } else {
        PositiveVector::new(parsed.into_iter().map(|(f, _)| f).collect())
    }
}

fn parse_floats(values: &[Value]) -> Result<Vec<f64>> {
    values.iter().map(|v| parse_entry(v, false).map(|(f, _)| f)).collect()
}

fn parse_triple(values: &[Value], tol: &Tolerance) -> Result<ZeroSumTriple> {
    let f = parse_floats(values)?;
    if f.len() != 3 {
        return Err(Error::Parse(format!("a triple needs 3 entries, got {}", f.len())));
    }
    ZeroSumTriple::new(f[0], f[1], f[2], tol)
}

fn required<'a, T>(field: &'a Option<T>, name: &str) -> Result<&'a T> {
    field
        .as_ref()
        .ok_or_else(|| Error::Parse(format!("instance is missing `{name}`")))
}

/// Exit code for an error raised while evaluating a command.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::NotSorted { .. }
        | Error::HypothesisViolated(_)
        | Error::HypothesisViolatedAt { .. }
        | Error::NotProbabilityVector(_)
        | Error::NotZeroSum(_)
        | Error::SumOfSquaresMismatch { .. }
        | Error::DegenerateTriple(_)
        | Error::EntryNotAboveOne { .. }
        | Error::SearchBudgetExceeded { .. }
        | Error::RetryExhausted { .. } => EXIT_HYPOTHESIS,
        Error::DidNotConverge { .. } => EXIT_NO_CONVERGENCE,
        _ => EXIT_USAGE,
    }
}

fn verdict_name(code: i32) -> &'static str {
    match code {
        EXIT_OK => "ok",
        EXIT_CRITICAL => "critical_violation",
        EXIT_HYPOTHESIS => "hypothesis_not_satisfied",
        EXIT_FINDING => "finding",
        EXIT_NO_CONVERGENCE => "did_not_converge",
        _ => "usage_error",
    }
}

struct Outcome {
    code: i32,
    summary: Vec<(&'static str, String)>,
    result: Value,
}

fn show<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.flush().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

struct Context {
    tol: Tolerance,
    exact: bool,
    common_reindex: bool,
    seed: u64,
}

fn read_instance(input: Option<&Path>) -> Result<InstanceFile> {
    let text = match input {
        Some(p) => fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::Io(e.to_string()))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}

fn pair(inst: &InstanceFile, ctx: &Context) -> Result<(PositiveVector, PositiveVector)> {
    Ok((
        parse_vector(required(&inst.a, "a")?, ctx.exact)?,
        parse_vector(required(&inst.b, "b")?, ctx.exact)?,
    ))
}

fn profile_json(v: &PositiveVector) -> Value {
    let p = elementary_symmetric_all(v);
    json!({
        "values": p.values(),
        "exact": p.exact().map(|ex| ex.iter().map(|r| r.to_string()).collect::<Vec<_>>()),
    })
}

fn check(subject: Subject, inst: &InstanceFile, ctx: &Context) -> Result<Outcome> {
    let tol = &ctx.tol;
    match subject {
        Subject::SsliConjecture => {
            let (a, b) = pair(inst, ctx)?;
            let exact = a.is_exact() && b.is_exact();
            let pa = profile_json(&a);
            let pb = profile_json(&b);
            let residual = feasibility_check(&a, &b)?;
            let v = conjecture_verdict(&SsliInstance::new(a, b)?, tol);
            let code = if v.hypothesis == Hypothesis::None {
                EXIT_HYPOTHESIS
            } else if !v.holds {
                EXIT_FINDING
            } else {
                EXIT_OK
            };
            Ok(Outcome {
                code,
                summary: vec![
                    ("hypothesis", show(&v.hypothesis)),
                    ("lhs", v.lhs.to_string()),
                    ("rhs", v.rhs.to_string()),
                    ("slack", v.slack.to_string()),
                ],
                result: json!({
                    "verdict": v,
                    "exact": exact,
                    "e_a": pa,
                    "e_b": pb,
                    "feasibility_residual": residual,
                }),
            })
        }
        Subject::SsliRearrangement => {
            let (a, b) = pair(inst, ctx)?;
            let opts = PairingOptions {
                common_reindex: ctx.common_reindex,
                tol: ctx.tol,
                ..Default::default()
            };
            let r = thm32_verdict(&SsliInstance::new(a, b)?, &opts)?;
            let code = if r.verdict.hypothesis == Hypothesis::None {
                EXIT_HYPOTHESIS
            } else if r.is_critical() {
                EXIT_CRITICAL
            } else {
                EXIT_OK
            };
            Ok(Outcome {
                code,
                summary: vec![
                    ("hypothesis", show(&r.verdict.hypothesis)),
                    ("pairing_found", r.pairing.found.to_string()),
                    ("lhs", r.verdict.lhs.to_string()),
                    ("rhs", r.verdict.rhs.to_string()),
                    ("slack", r.verdict.slack.to_string()),
                ],
                result: json!({ "report": r, "common_reindex": ctx.common_reindex }),
            })
        }
        Subject::Powered => {
            let (a, b) = pair(inst, ctx)?;
            let p = *required(&inst.p, "p")?;
            let v = powered_logs_verdict(&a, &b, p, tol)?;
            let code = if v.hypothesis == Hypothesis::None {
                EXIT_HYPOTHESIS
            } else if v.is_violation() {
                EXIT_CRITICAL
            } else {
                EXIT_OK
            };
            Ok(Outcome {
                code,
                summary: vec![
                    ("hypothesis", show(&v.hypothesis)),
                    ("lhs", v.lhs.to_string()),
                    ("rhs", v.rhs.to_string()),
                ],
                result: json!({ "verdict": v, "p": p }),
            })
        }
        Subject::Majorize => {
            let (a, b) = pair(inst, ctx)?;
            let v = majorize(&a, &b, tol)?;
            let boundary = remark35_boundary(&a, &b, tol)?;
            let mut hlp = serde_json::Map::new();
            let mut consistent = log_implications_check(&a, &b, tol)?;
            for rel in [Relation::Strong, Relation::WeakBelow, Relation::WeakAbove] {
                let h = hlp_convex_test(&a, &b, rel, tol)?;
                consistent &= h == v.holds(rel);
                hlp.insert(show(&rel).trim_matches('"').to_string(), Value::Bool(h));
            }
            Ok(Outcome {
                code: if consistent { EXIT_OK } else { EXIT_CRITICAL },
                summary: vec![
                    ("strong", v.strong.to_string()),
                    ("weak_below", v.weak_below.to_string()),
                    ("weak_above", v.weak_above.to_string()),
                    ("log_strong", v.log_strong.to_string()),
                    ("log_weak_below", v.log_weak_below.to_string()),
                    ("log_weak_above", v.log_weak_above.to_string()),
                    ("oracles_agree", consistent.to_string()),
                    ("sum_squared_logs_a", boundary.lhs.to_string()),
                    ("sum_squared_logs_b", boundary.rhs.to_string()),
                ],
                result: json!({
                    "verdict": v,
                    "hlp": hlp,
                    "consistent": consistent,
                    "boundary": boundary,
                }),
            })
        }
        Subject::Logsum => {
            let (a, b) = pair(inst, ctx)?;
            let mut ok = true;
            let mut result = serde_json::Map::new();
            let mut summary = Vec::new();
            let k = inst.k.unwrap_or(0.0);
            if inst.ks.is_none() || inst.k.is_some() {
                let (lhs, rhs) = stronger_log_sum_sides(&a, &b, k)?;
                ok &= tol.geq(lhs, rhs);
                summary.push(("gap", (lhs - rhs).to_string()));
                result.insert("shifted".into(), json!({ "k": k, "lhs": lhs, "rhs": rhs, "gap": lhs - rhs }));
            }
            if let Some(ks) = &inst.ks {
                let set = ShiftSet::new(ks.clone())?;
                let (lhs, rhs) = generalized_log_sum_sides(&a, &b, &set)?;
                ok &= tol.geq(lhs, rhs);
                let per_shift = ks
                    .iter()
                    .map(|k| stronger_log_sum_sides(&a, &b, *k).map(|(l, r)| l - r))
                    .collect::<Result<Vec<_>>>()?;
                summary.push(("generalized_gap", (lhs - rhs).to_string()));
                result.insert(
                    "generalized".into(),
                    json!({ "ks": ks, "lhs": lhs, "rhs": rhs, "gap": lhs - rhs, "per_shift": per_shift }),
                );
                let probs = (
                    ProbabilityVector::new(a.entries().to_vec(), tol),
                    ProbabilityVector::new(b.entries().to_vec(), tol),
                );
                if let (Ok(pa), Ok(pb)) = probs {
                    let (lhs, rhs) = generalized_information_sides(&pa, &pb, &set)?;
                    ok &= tol.geq(lhs, rhs);
                    summary.push(("information_gap", (lhs - rhs).to_string()));
                    result.insert(
                        "information".into(),
                        json!({ "lhs": lhs, "rhs": rhs, "gap": lhs - rhs }),
                    );
                }
            }
            Ok(Outcome {
                code: if ok { EXIT_OK } else { EXIT_CRITICAL },
                summary,
                result: Value::Object(result),
            })
        }
        Subject::Gibbs => {
            let a = ProbabilityVector::new(parse_floats(required(&inst.a, "a")?)?, tol)?;
            let b = ProbabilityVector::new(parse_floats(required(&inst.b, "b")?)?, tol)?;
            let samples = inst.samples.unwrap_or(DEFAULT_GIBBS_SAMPLES);
            let r = gibbs_forms(&a, &b, samples, ctx.seed, tol)?;
            let ok = r.consistent && r.variational_ok && r.verdicts[0];
            Ok(Outcome {
                code: if ok { EXIT_OK } else { EXIT_CRITICAL },
                summary: vec![
                    ("cross_entropy", r.cross_entropy.to_string()),
                    ("entropy", r.entropy.to_string()),
                    ("kl", r.kl.to_string()),
                    ("forms_agree", r.consistent.to_string()),
                ],
                result: json!({ "report": r, "seed": ctx.seed }),
            })
        }
        Subject::Cardano => {
            let xyz = parse_triple(required(&inst.xyz, "xyz")?, tol)?;
            let abc = parse_triple(required(&inst.abc, "abc")?, tol)?;
            let r = cardano_exp_inequality(&xyz, &abc, tol)?;
            let ok = r.u1_log_margin >= -tol.abs_tol
                && r.u2_log_margin >= -tol.abs_tol
                && xyz.p() < cardano_bound(&xyz)
                && abc.p() < cardano_bound(&abc);
            Ok(Outcome {
                code: if ok { EXIT_OK } else { EXIT_CRITICAL },
                summary: vec![
                    ("p", r.p.to_string()),
                    ("bound_xyz", r.bound_xyz.to_string()),
                    ("u1_lhs", r.u1_lhs.to_string()),
                    ("u1_rhs", r.u1_rhs.to_string()),
                    ("u2_lhs", r.u2_lhs.to_string()),
                    ("u2_rhs", r.u2_rhs.to_string()),
                ],
                result: json!({
                    "report": r,
                    "discriminant_xyz": xyz.discriminant(),
                    "discriminant_abc": abc.discriminant(),
                }),
            })
        }
        Subject::TripleEquiv => {
            let abc = parse_triple(required(&inst.abc, "abc")?, tol)?;
            let xyz = parse_triple(required(&inst.xyz, "xyz")?, tol)?;
            let r = exp_sum_monotone_equiv(&abc, &xyz, inst.m.unwrap_or(1.0), tol)?;
            let ok = r.parametrization_ok && r.slack >= -tol.abs_tol;
            Ok(Outcome {
                code: if ok { EXIT_OK } else { EXIT_CRITICAL },
                summary: vec![
                    ("exp_sum_abc", r.exp_sum_abc.to_string()),
                    ("exp_sum_xyz", r.exp_sum_xyz.to_string()),
                    ("biconditional", r.biconditional.to_string()),
                ],
                result: json!({ "report": r }),
            })
        }
        Subject::Family => {
            let fam_spec = required(&inst.family, "family")?;
            let fam = PolynomialFamily::new(
                fam_spec.polys.iter().cloned().map(Polynomial).collect(),
                (fam_spec.interval[0], fam_spec.interval[1]),
                fam_spec.grid_points.unwrap_or(DEFAULT_GRID_POINTS),
            )?;
            let h = || required(&fam_spec.h, "family.h").map(|h| Polynomial(h.clone()));
            let variant = match fam_spec.variant.as_deref().unwrap_or("plain") {
                "plain" => FamilyVariant::Plain,
                "product_h" => FamilyVariant::ProductH(h()?),
                "composed_h" => FamilyVariant::ComposedH(h()?),
                other => return Err(Error::Parse(format!("unknown family variant `{other}`"))),
            };
            let r = family_monotone_verdict(&fam, &variant, tol)?;
            Ok(Outcome {
                code: if r.conclusion_holds { EXIT_OK } else { EXIT_CRITICAL },
                summary: vec![
                    ("direction", show(&r.direction)),
                    ("min_slack", r.min_slack.to_string()),
                ],
                result: json!({
                    "direction": r.direction,
                    "conclusion_holds": r.conclusion_holds,
                    "min_slack": r.min_slack,
                    "grid": r.grid,
                    "values": r.values,
                    "derivatives": r.derivatives,
                }),
            })
        }
    }
}

fn envelope(command: &str, subject: Option<&str>, code: i32, body: Value) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("schema".into(), json!(1));
    map.insert("command".into(), json!(command));
    if let Some(s) = subject {
        map.insert("subject".into(), json!(s));
    }
    map.insert("exit_code".into(), json!(code));
    map.insert("verdict".into(), json!(verdict_name(code)));
    if let Value::Object(extra) = body {
        map.extend(extra);
    }
    Value::Object(map)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
    s.push('\n');
    s
}

fn emit_report(out: Option<&Path>, report: &Value) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, pretty(report).as_bytes()),
        None => Ok(()),
    }
}

fn print_summary(stdout: &mut dyn Write, code: i32, summary: &[(&str, String)]) {
    for (k, v) in summary {
        let _ = writeln!(stdout, "{k}: {v}");
    }
    let _ = writeln!(stdout, "verdict: {}", verdict_name(code));
}

fn cmd_check(subject: Subject, cli: &Cli, ctx: &Context, stdout: &mut dyn Write) -> Result<i32> {
    let inst = read_instance(cli.input.as_deref())?;
    let (code, summary, body) = match check(subject, &inst, ctx) {
        Ok(o) => (o.code, o.summary, json!({ "result": o.result })),
        Err(e) => {
            let code = exit_code_for(&e);
            if code == EXIT_USAGE {
                return Err(e);
            }
            eprintln!("logineq: {e}");
            (code, vec![("reason", e.to_string())], json!({ "error": e.to_string() }))
        }
    };
    print_summary(stdout, code, &summary);
    emit_report(cli.out.as_deref(), &envelope("check", Some(subject.name()), code, body))?;
    Ok(code)
}

#[allow(clippy::too_many_arguments)]
fn cmd_fuzz(
    theorem: &str,
    trials: u64,
    n: Option<usize>,
    n_min: Option<usize>,
    n_max: Option<usize>,
    format: Format,
    cli: &Cli,
    ctx: &Context,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let id: TheoremId = theorem.parse()?;
    let defaults = FuzzConfig::default();
    let n_range = match n {
        Some(n) => (n, n),
        None => (
            n_min.unwrap_or(defaults.n_range.0),
            n_max.unwrap_or(defaults.n_range.1),
        ),
    };
    let cfg = FuzzConfig {
        trials,
        seed: ctx.seed,
        n_range,
        tol: ctx.tol,
        ..defaults
    };
    let report = run_campaign(id, &cfg)?;
    let code = if report.hypothesis_misses > 0 || report.is_critical() {
        EXIT_CRITICAL
    } else if report.has_violations() {
        EXIT_FINDING
    } else {
        EXIT_OK
    };
    let json = report.to_json()?;
    let csv = report.to_csv()?;
    match &cli.out {
        Some(out) => {
            let (json_path, csv_path) = match format {
                Format::Json => (out.clone(), out.with_extension("csv")),
                Format::Csv => (out.with_extension("json"), out.clone()),
            };
            write_atomic(&json_path, json.as_bytes())?;
            write_atomic(&csv_path, csv.as_bytes())?;
            print_summary(
                stdout,
                code,
                &[
                    ("theorem_id", id.to_string()),
                    ("trials", report.trials.to_string()),
                    ("violations", report.violations.len().to_string()),
                    ("hypothesis_misses", report.hypothesis_misses.to_string()),
                    ("min_slack", report.min_slack.to_string()),
                    ("json", json_path.display().to_string()),
                    ("csv", csv_path.display().to_string()),
                ],
            );
        }
        None => {
            let body = match format {
                Format::Json => json,
                Format::Csv => csv,
            };
            let _ = stdout.write_all(body.as_bytes());
        }
    }
    Ok(code)
}

fn cmd_minimize(
    starts: usize,
    max_iters: Option<usize>,
    cli: &Cli,
    ctx: &Context,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let inst = read_instance(cli.input.as_deref())?;
    let a = parse_vector(required(&inst.a, "a")?, ctx.exact)?;
    if a.len() < 2 {
        return Err(Error::DomainError("minimization needs n >= 2".into()));
    }
    let defaults = OptimizerConfig::default();
    let cfg = OptimizerConfig {
        starts,
        seed: ctx.seed,
        max_iters: max_iters.unwrap_or(defaults.max_iters),
        ..defaults
    };
    let (code, summary, body) = match minimize_ssli_traced(&a, &cfg)? {
        Ok(r) => {
            let code = if r.gap >= -MINIMIZE_GAP_TOL { EXIT_OK } else { EXIT_FINDING };
            (
                code,
                vec![
                    ("target", r.target_value.to_string()),
                    ("best_value", r.best_value.to_string()),
                    ("gap", r.gap.to_string()),
                    ("residual", r.feasibility_residual.to_string()),
                ],
                json!({ "config": cfg, "a": a, "result": r }),
            )
        }
        Err(trace) => (
            EXIT_NO_CONVERGENCE,
            vec![("starts", trace.len().to_string())],
            json!({ "config": cfg, "a": a, "per_start_trace": trace }),
        ),
    };
    print_summary(stdout, code, &summary);
    emit_report(cli.out.as_deref(), &envelope("minimize", None, code, body))?;
    Ok(code)
}

/// Runs the CLI on `args` (including the program name), writing
/// human-readable output to `stdout`, and returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let tol = match cli.tol.map(Tolerance::uniform).transpose() {
        Ok(t) => t.unwrap_or_default(),
        Err(e) => {
            eprintln!("logineq: {e}");
            return EXIT_USAGE;
        }
    };
    let ctx = Context {
        tol,
        exact: cli.exact,
        common_reindex: cli.common_reindex,
        seed: cli.seed.unwrap_or(0),
    };
    let result = match &cli.command {
        Command::Check { subject } => cmd_check(*subject, &cli, &ctx, stdout),
        Command::Fuzz {
            theorem,
            trials,
            n,
            n_min,
            n_max,
            format,
        } => cmd_fuzz(theorem, *trials, *n, *n_min, *n_max, *format, &cli, &ctx, stdout),
        Command::Minimize { starts, max_iters } => cmd_minimize(*starts, *max_iters, &cli, &ctx, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("logineq: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    run_with(args, &mut lock)
}
