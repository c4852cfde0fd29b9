//! Seeded campaigns that build inputs satisfying a theorem's hypothesis,
//! evaluate its conclusion and record every violation with enough data to
//! reproduce it.
//!
//! Each trial draws from its own ChaCha8 stream (`seed`, stream = trial
//! index), so a report depends only on the theorem, the seed and the config.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::base::{PositiveVector, Tolerance};
use crate::error::{Error, Result};
use crate::expineq::{
    cardano_bound, cardano_exp_inequality, exp_sum_monotone_equiv, exp_sum_weak_log,
    family_monotone_verdict, triple_domain, triple_from_x, FamilyVariant, Polynomial,
    PolynomialFamily, ZeroSumTriple,
};
use crate::infoineq::{
    generalized_information_sides, generalized_log_sum_sides, gibbs_forms, sample_simplex,
    stronger_log_sum_sides, ProbabilityVector, ShiftSet,
};
use crate::ssli::{
    conjecture_hypothesis, powered_logs_verdict, sum_squared_logs, thm32_verdict, Hypothesis,
    PairingOptions, SsliInstance,
};
use crate::sympoly::elementary_symmetric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "conj_1_2")]
    Conj1_2,
    #[serde(rename = "thm_3_2")]
    Thm3_2,
    #[serde(rename = "thm_3_4")]
    Thm3_4,
    #[serde(rename = "prop_4_1")]
    Prop4_1,
    #[serde(rename = "thm_4_2")]
    Thm4_2,
    #[serde(rename = "thm_4_4")]
    Thm4_4,
    #[serde(rename = "thm_4_8")]
    Thm4_8,
    #[serde(rename = "lemma_5_2")]
    Lemma5_2,
    #[serde(rename = "prop_5_4")]
    Prop5_4,
    #[serde(rename = "cor_5_5")]
    Cor5_5,
    #[serde(rename = "cor_5_6")]
    Cor5_6,
}

impl TheoremId {
    pub const ALL: [TheoremId; 11] = [
        TheoremId::Conj1_2,
        TheoremId::Thm3_2,
        TheoremId::Thm3_4,
        TheoremId::Prop4_1,
        TheoremId::Thm4_2,
        TheoremId::Thm4_4,
        TheoremId::Thm4_8,
        TheoremId::Lemma5_2,
        TheoremId::Prop5_4,
        TheoremId::Cor5_5,
        TheoremId::Cor5_6,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Conj1_2 => "conj_1_2",
            TheoremId::Thm3_2 => "thm_3_2",
            TheoremId::Thm3_4 => "thm_3_4",
            TheoremId::Prop4_1 => "prop_4_1",
            TheoremId::Thm4_2 => "thm_4_2",
            TheoremId::Thm4_4 => "thm_4_4",
            TheoremId::Thm4_8 => "thm_4_8",
            TheoremId::Lemma5_2 => "lemma_5_2",
            TheoremId::Prop5_4 => "prop_5_4",
            TheoremId::Cor5_5 => "cor_5_5",
            TheoremId::Cor5_6 => "cor_5_6",
        }
    }

    /// The open conjecture yields findings; everything else is proven, so a
    /// violation there is a defect.
    pub fn severity(self) -> Severity {
        match self {
            TheoremId::Conj1_2 => Severity::Finding,
            _ => Severity::Critical,
        }
    }

    pub fn sampler(self) -> &'static str {
        match self {
            TheoremId::Conj1_2 => "same_product_rejection+log_spread",
            TheoremId::Thm3_2 => "ratio_product_chains",
            TheoremId::Thm3_4 => "t_transform+increments_above_one",
            TheoremId::Prop4_1 => "log_t_transform+decrements",
            TheoremId::Thm4_2 => "distinct_zero_sum_triples",
            TheoremId::Thm4_4 => "scaled_monotone_polynomials",
            TheoremId::Thm4_8 => "parametrized_zero_sum_triples",
            TheoremId::Lemma5_2 => "log_uniform_pairs",
            TheoremId::Prop5_4 => "simplex_pairs",
            TheoremId::Cor5_5 => "log_uniform_pairs+shifts",
            TheoremId::Cor5_6 => "simplex_pairs+shifts",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Severity {
    Critical,
    Finding,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzConfig {
    pub trials: u64,
    pub seed: u64,
    /// Inclusive range of vector lengths (family sizes for polynomial families).
    pub n_range: (usize, usize),
    /// Entries are drawn as `exp(U)` with `U` uniform on this interval.
    pub magnitude: (f64, f64),
    pub tol: Tolerance,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            trials: 1000,
            seed: 0,
            n_range: (2, 8),
            magnitude: (-3.0, 3.0),
            tol: Tolerance::default(),
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.n_range;
        if lo < 2 || lo > hi {
            return Err(Error::InvalidConfig(format!(
                "n range [{lo}, {hi}] must satisfy 2 <= n_min <= n_max"
            )));
        }
        let (mlo, mhi) = self.magnitude;
        if !(mlo.is_finite() && mhi.is_finite() && mlo < mhi) {
            return Err(Error::InvalidConfig(format!(
                "bad magnitude range [{mlo}, {mhi}]"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub trial: u64,
    pub n: usize,
    pub input: serde_json::Value,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub note: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialVerdict {
    Ok,
    Violation,
    /// The sampler failed to produce an input satisfying the hypothesis.
    HypothesisMiss,
}

/// One CSV row per trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRow {
    pub theorem_id: TheoremId,
    pub trial: u64,
    pub n: usize,
    pub slack: f64,
    pub verdict: TrialVerdict,
    pub seed: u64,
}

pub const REPORT_SCHEMA: u32 = 1;
pub const PRNG_NAME: &str = "ChaCha8";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub schema: u32,
    pub theorem_id: TheoremId,
    pub severity: Severity,
    pub trials: u64,
    pub seed: u64,
    pub prng: &'static str,
    pub sampler: &'static str,
    pub n_range: (usize, usize),
    pub magnitude: (f64, f64),
    pub tol: Tolerance,
    pub hypothesis_misses: u64,
    /// Smallest normalized slack over trials with a satisfied hypothesis;
    /// `+inf` (serialized as `null`) when there are none.
    pub min_slack: f64,
    pub violations: Vec<Violation>,
    #[serde(skip)]
    pub rows: Vec<TrialRow>,
}

impl InequalityReport {
    pub fn has_violations(&self) -> bool {
        !self.violations.is_empty()
    }

    pub fn is_critical(&self) -> bool {
        self.has_violations() && self.severity == Severity::Critical
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if self.rows.is_empty() {
            w.write_record(["theorem_id", "trial", "n", "slack", "verdict", "seed"])
                .map_err(|e| Error::Io(e.to_string()))?;
        }
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Outcome of a single trial before it is folded into the report.
struct Trial {
    n: usize,
    input: serde_json::Value,
    lhs: f64,
    rhs: f64,
    /// Normalized; negative beyond `abs_tol` means the conclusion failed.
    slack: f64,
    hypothesis: bool,
    note: String,
}

impl Trial {
    fn miss(n: usize, note: String) -> Self {
        Self {
            n,
            input: serde_json::Value::Null,
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NAN,
            hypothesis: false,
            note,
        }
    }
}

/// `(rhs - lhs) / max(1, |lhs|, |rhs|)` for a conclusion `lhs <= rhs`.
fn rel_slack(lhs: f64, rhs: f64) -> f64 {
    (rhs - lhs) / 1f64.max(lhs.abs()).max(rhs.abs())
}

fn log_uniform<R: Rng + ?Sized>(rng: &mut R, n: usize, magnitude: (f64, f64)) -> Vec<f64> {
    (0..n)
        .map(|_| rng.random_range(magnitude.0..magnitude.1))
        .collect()
}

/// Applies a random number (up to `2n`) of T-transforms
/// `(x_i, x_j) -> (l x_i + (1-l) x_j, l x_j + (1-l) x_i)`; the result is
/// majorized by the input.
fn t_transforms<R: Rng + ?Sized>(rng: &mut R, v: &mut [f64]) {
    let n = v.len();
    let count = rng.random_range(0..=2 * n);
    for _ in 0..count {
        let i = rng.random_range(0..n);
        let j = (i + rng.random_range(1..n)) % n;
        let l: f64 = rng.random_range(0.0..=1.0);
        let (xi, xj) = (v[i], v[j]);
        v[i] = l * xi + (1.0 - l) * xj;
        v[j] = l * xj + (1.0 - l) * xi;
    }
}

/// `(x, y)` with `x ≺ y`: `y` log-uniform, `x` a chain of T-transforms of `y`.
pub fn sample_majorized_pair<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    magnitude: (f64, f64),
) -> Result<(PositiveVector, PositiveVector)> {
    if n < 2 {
        return Err(Error::DomainError("majorized pairs need n >= 2".into()));
    }
    let y: Vec<f64> = log_uniform(rng, n, magnitude).into_iter().map(f64::exp).collect();
    let mut x = y.clone();
    t_transforms(rng, &mut x);
    Ok((PositiveVector::new(x)?, PositiveVector::new(y)?))
}

/// `a_i = sqrt(p_i / r_i)`, `b_i = sqrt(p_i r_i)`, so that `b_i / a_i = r_i`
/// and `a_i b_i = p_i`.
pub fn instance_from_ratios_products(ratios: &[f64], products: &[f64]) -> Result<SsliInstance> {
    let a = ratios.iter().zip(products).map(|(r, p)| (p / r).sqrt()).collect();
    let b = ratios.iter().zip(products).map(|(r, p)| (p * r).sqrt()).collect();
    SsliInstance::new(PositiveVector::new(a)?, PositiveVector::new(b)?)
}

const THM32_TRIES: u32 = 100;

/// Instance satisfying the rearrangement hypothesis: nonincreasing ratio and
/// product chains with `prod r >= 1`, a common rescale to reach
/// `e_n(a) e_n(b) >= 1`, the reciprocal reversal for half of the draws (the
/// second product condition) and independent shuffles of `a` and `b`.
pub fn sample_thm32_instance<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    magnitude: (f64, f64),
) -> Result<SsliInstance> {
    for _ in 0..THM32_TRIES {
        let mut lr = log_uniform(rng, n, magnitude);
        if lr.iter().sum::<f64>() < 0.0 {
            continue;
        }
        lr.sort_by(|p, q| q.total_cmp(p));
        let mut lp = log_uniform(rng, n, magnitude);
        lp.sort_by(|p, q| q.total_cmp(p));
        // Scaling both vectors by c multiplies every product by c^2.
        let needed = (-lp.iter().sum::<f64>() / (2 * n) as f64).max(0.0);
        let extra = if rng.random_bool(0.25) { 0.0 } else { rng.random_range(0.0..0.5) };
        let ln_c = needed + extra;
        let mut a: Vec<f64> = lr.iter().zip(&lp).map(|(r, p)| ((p - r) / 2.0 + ln_c).exp()).collect();
        let mut b: Vec<f64> = lr.iter().zip(&lp).map(|(r, p)| ((p + r) / 2.0 + ln_c).exp()).collect();
        a.shuffle(rng);
        b.shuffle(rng);
        let inst = SsliInstance::new(PositiveVector::new(a)?, PositiveVector::new(b)?)?;
        return Ok(if rng.random_bool(0.5) { inst.reciprocal() } else { inst });
    }
    Err(Error::RetryExhausted {
        sampler: "ratio_product_chains",
        tries: THM32_TRIES,
    })
}

const CONJ_TRIES: usize = 64;

fn trial_conj(cfg: &FuzzConfig, rng: &mut ChaCha8Rng, n: usize) -> Result<Trial> {
    let la = log_uniform(rng, n, cfg.magnitude);
    let mean_a = la.iter().sum::<f64>() / n as f64;
    let a: Vec<f64> = la.iter().map(|x| x.exp()).collect();
    let ea = elementary_symmetric(&a);
    let mut mode = "rejection";
    let mut b = None;
    for _ in 0..CONJ_TRIES {
        let lb = log_uniform(rng, n, cfg.magnitude);
        let shift = mean_a - lb.iter().sum::<f64>() / n as f64;
        let cand: Vec<f64> = lb.iter().map(|x| (x + shift).exp()).collect();
        let eb = elementary_symmetric(&cand);
        if (0..n - 1).all(|k| ea[k] <= eb[k]) {
            b = Some(cand);
            break;
        }
    }
    let b = match b {
        Some(b) => b,
        None => {
            // Spreading a pair of log-coordinates apart keeps the product and
            // makes ln a majorized by ln b, which is sufficient for feasibility.
            mode = "log_spread";
            let mut lb = la.clone();
            for _ in 0..n {
                let i = rng.random_range(0..n);
                let j = (i + rng.random_range(1..n)) % n;
                let (hi, lo) = if lb[i] >= lb[j] { (i, j) } else { (j, i) };
                let d: f64 = rng.random_range(0.0..1.0);
                lb[hi] += d;
                lb[lo] -= d;
            }
            lb.iter().map(|x| x.exp()).collect()
        }
    };
    let inst = SsliInstance::new(PositiveVector::new(a)?, PositiveVector::new(b)?)?;
    let (lhs, rhs) = (sum_squared_logs(inst.a()), sum_squared_logs(inst.b()));
    Ok(Trial {
        n,
        input: json!({ "a": inst.a(), "b": inst.b() }),
        lhs,
        rhs,
        slack: rel_slack(lhs, rhs),
        hypothesis: conjecture_hypothesis(&inst, &cfg.tol),
        note: mode.into(),
    })
}

fn trial_thm32(cfg: &FuzzConfig, rng: &mut ChaCha8Rng, n: usize) -> Result<Trial> {
    let inst = sample_thm32_instance(n, rng, cfg.magnitude)?;
    let opts = PairingOptions {
        tol: cfg.tol,
        ..Default::default()
    };
    let report = thm32_verdict(&inst, &opts)?;
    let v = &report.verdict;
    Ok(Trial {
        n,
        input: json!({ "a": inst.a(), "b": inst.b() }),
        lhs: v.lhs,
        rhs: v.rhs,
        slack: rel_slack(v.lhs, v.rhs),
        hypothesis: v.hypothesis != Hypothesis::None,
        note: format!("{:?}", v.hypothesis),
    })
}

fn trial_thm34(cfg: &FuzzConfig, rng: &mut ChaCha8Rng, n: usize) -> Result<Trial> {
    let b: Vec<f64> = log_uniform(rng, n, cfg.magnitude)
        .into_iter()
        .map(|u| 1.0 + u.exp())
        .collect();
    let mut a = b.clone();
    t_transforms(rng, &mut a);
    // Raising entries keeps the ascending prefix sums at or above those of b.
    if rng.random_bool(0.5) {
        for x in &mut a {
            if rng.random_bool(0.5) {
                *x += 0.5 * rng.sample::<f64, _>(Exp1);
            }
        }
    }
    let p = -rng.random_range(0.1..3.0);
    let (a, b) = (PositiveVector::new(a)?, PositiveVector::new(b)?);
    let v = powered_logs_verdict(&a, &b, p, &cfg.tol)?;
    Ok(Trial {
        n,
        input: json!({ "a": a, "b": b, "p": p }),
        lhs: v.lhs,
        rhs: v.rhs,
        slack: rel_slack(v.lhs, v.rhs),
        hypothesis: v.hypothesis == Hypothesis::PoweredLogs,
        note: String::new(),
    })
}

fn trial_prop41(cfg: &FuzzConfig, rng: &mut ChaCha8Rng, n: usize) -> Result<Trial> {
    let ly = log_uniform(rng, n, cfg.magnitude);
    let mut lx = ly.clone();
    t_transforms(rng, &mut lx);
    // Lowering entries keeps the descending prefix sums at or below those of ln y.
    if rng.random_bool(0.5) {
        for u in &mut lx {
            if rng.random_bool(0.5) {
                *u -= 0.5 * rng.sample::<f64, _>(Exp1);
            }
        }
    }
    let m = [0.5, 1.0, 3.0][rng.random_range(0..3)];
    let x = PositiveVector::new(lx.iter().map(|u| u.exp()).collect())?;
    let y = PositiveVector::new(ly.iter().map(|u| u.exp()).collect())?;
    let r = exp_sum_weak_log(&x, &y, m, &cfg.tol)?;
    Ok(Trial {
        n,
        input: json!({ "x": x, "y": y, "m": m }),
        lhs: r.lhs,
        rhs: r.rhs,
        slack: rel_slack(r.lhs, r.rhs),
        hypothesis: r.hypothesis,
        note: String::new(),
    })
}

const TRIPLE_TRIES: u32 = 100;

/// Zero-sum triple with distinct entries (relative gap above `1e-6`), scaled
/// to the given sum of squares when one is supplied.
fn distinct_triple<R: Rng + ?Sized>(
    rng: &mut R,
    magnitude: f64,
    r_squared: Option<f64>,
    tol: &Tolerance,
) -> Result<ZeroSumTriple> {
    for _ in 0..TRIPLE_TRIES {
        let (u, v): (f64, f64) = (
            rng.random_range(-magnitude..magnitude),
            rng.random_range(-magnitude..magnitude),
        );
        let w = -(u + v);
        let norm = u * u + v * v + w * w;
        if norm <= 1e-12 {
            continue;
        }
        let s = r_squared.map_or(1.0, |r2| (r2 / norm).sqrt());
        let t = ZeroSumTriple::new(s * u, s * v, s * w, tol)?;
        let [x, y, z] = t.entries();
        let scale = x.abs().max(z.abs());
        if (x - y) > 1e-6 * scale && (y - z) > 1e-6 * scale {
            return Ok(t);
        }
    }
    Err(Error::RetryExhausted {
        sampler: "distinct_zero_sum_triples",
        tries: TRIPLE_TRIES,
    })
}

fn trial_thm42(cfg: &FuzzConfig, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let mag = cfg.magnitude.0.abs().max(cfg.magnitude.1.abs());
    let xyz = distinct_triple(rng, mag, None, &cfg.tol)?;
    let abc = distinct_triple(rng, mag, Some(xyz.sum_squares()), &cfg.tol)?;
    let r = cardano_exp_inequality(&xyz, &abc, &cfg.tol)?;
    let scale = xyz.sum_squares().max(1.0);
    let mut slack = f64::min(r.u1_log_margin, r.u2_log_margin) / scale;
    for t in [&xyz, &abc] {
        slack = slack.min((cardano_bound(t) - t.p()) / scale);
    }
    Ok(Trial {
        n: 3,
        input: json!({ "xyz": xyz.entries(), "abc": abc.entries() }),
        lhs: r.u1_lhs,
        rhs: r.u1_rhs,
        slack,
        hypothesis: true,
        note: String::new(),
    })
}

/// Dyadic numbers with small numerators keep every coefficient product exact,
/// so the zero-sum check on the family is exact.
fn dyadic<R: Rng + ?Sized>(rng: &mut R, lo: i32, hi: i32) -> f64 {
    rng.random_range(lo..=hi) as f64 / 1024.0
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn trial_thm44(cfg: &FuzzConfig, rng: &mut ChaCha8Rng, n: usize) -> Result<Trial> {
    const T: f64 = 2.0;
    let mut c: Vec<f64> = (0..n - 1).map(|_| dyadic(rng, -256, 256)).collect();
    c.push(-c.iter().sum::<f64>());
    let degree = rng.random_range(1..=3usize);
    let q: Vec<f64> = (0..=degree).map(|_| dyadic(rng, 0, 1024)).collect();
    let increasing = rng.random_bool(0.5);
    // q(t) = sum q_j t^j is nonnegative and nondecreasing on [0, T];
    // q(t) = sum q_j (T - t)^j is nonnegative and nonincreasing there.
    let coeffs: Vec<f64> = if increasing {
        q.clone()
    } else {
        let mut out = vec![0.0; degree + 1];
        for (j, qj) in q.iter().enumerate() {
            for l in 0..=j {
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                out[l] += qj * binomial(j, l) * T.powi((j - l) as i32) * sign;
            }
        }
        out
    };
    let polys: Vec<Polynomial> = c
        .iter()
        .map(|ci| Polynomial(coeffs.iter().map(|k| ci * k).collect()))
        .collect();
    let fam = PolynomialFamily::new(polys, (0.0, T), 33)?;
    // Largest |f_i| on the interval: max |c_i| times q at its peak.
    let q_peak: f64 = q.iter().enumerate().map(|(j, qj)| qj * T.powi(j as i32)).sum();
    let bound = c.iter().fold(0.0f64, |m, x| m.max(x.abs())) * q_peak;
    let choice = if increasing { rng.random_range(0..3) } else { 0 };
    let variant = match choice {
        0 => FamilyVariant::Plain,
        1 => FamilyVariant::ProductH(Polynomial(vec![
            rng.random_range(0.01..1.0),
            rng.random_range(0.0..1.0),
        ])),
        _ => {
            let beta = rng.random_range(0.0..0.01);
            let alpha = 2.2 * beta * bound + rng.random_range(0.01..1.0);
            FamilyVariant::ComposedH(Polynomial(vec![0.0, alpha, beta]))
        }
    };
    let input = json!({ "c": c, "q": coeffs, "interval": [0.0, T], "variant": variant });
    match family_monotone_verdict(&fam, &variant, &cfg.tol) {
        Ok(r) => Ok(Trial {
            n,
            input,
            lhs: r.values[0],
            rhs: *r.values.last().unwrap_or(&f64::NAN),
            slack: r.min_slack,
            hypothesis: true,
            note: format!("{:?}", r.direction),
        }),
        Err(e) => Ok(Trial {
            input,
            ..Trial::miss(n, e.to_string())
        }),
    }
}

fn trial_thm48(cfg: &FuzzConfig, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let r2 = 3.0 * rng.random_range(cfg.magnitude.0..cfg.magnitude.1).exp();
    let (lo, hi) = triple_domain(r2);
    let pick = |rng: &mut ChaCha8Rng| match rng.random_range(0..10) {
        0 => lo,
        1 => hi,
        _ => rng.random_range(lo..=hi),
    };
    let a = pick(rng);
    let x = if rng.random_bool(0.1) { a } else { pick(rng) };
    let abc = triple_from_x(r2, a, &cfg.tol)?;
    let xyz = triple_from_x(r2, x, &cfg.tol)?;
    let m = [0.5, 1.0, 2.0][rng.random_range(0..3)];
    let r = exp_sum_monotone_equiv(&abc, &xyz, m, &cfg.tol)?;
    Ok(Trial {
        n: 3,
        input: json!({ "r_squared": r2, "a": a, "x": x, "m": m }),
        lhs: r.exp_sum_abc,
        rhs: r.exp_sum_xyz,
        slack: r.slack,
        hypothesis: r.parametrization_ok,
        note: format!("biconditional={}", r.biconditional),
    })
}

fn positive_pair(rng: &mut ChaCha8Rng, n: usize, magnitude: (f64, f64)) -> Result<(PositiveVector, PositiveVector)> {
    let a: Vec<f64> = log_uniform(rng, n, magnitude).into_iter().map(f64::exp).collect();
    let b: Vec<f64> = if rng.random_bool(0.1) {
        let c = rng.random_range(magnitude.0..magnitude.1).exp();
        a.iter().map(|x| x * c).collect()
    } else {
        log_uniform(rng, n, magnitude).into_iter().map(f64::exp).collect()
    };
    Ok((PositiveVector::new(a)?, PositiveVector::new(b)?))
}

fn random_shifts(rng: &mut ChaCha8Rng) -> Result<ShiftSet> {
    let m = rng.random_range(1..=4);
    ShiftSet::new(
        (0..m)
            .map(|_| match rng.random_range(0..4) {
                0 => 0.0,
                1 => 1.0,
                2 => 10.0,
                _ => rng.random_range(0.0..10.0),
            })
            .collect(),
    )
}

fn simplex_pair(rng: &mut ChaCha8Rng, n: usize, tol: &Tolerance) -> Result<(ProbabilityVector, ProbabilityVector)> {
    let p = ProbabilityVector::new(sample_simplex(rng, n), tol)?;
    let q = if rng.random_bool(0.1) {
        p.clone()
    } else {
        ProbabilityVector::new(sample_simplex(rng, n), tol)?
    };
    Ok((p, q))
}

fn trial_lemma52(cfg: &FuzzConfig, rng: &mut ChaCha8Rng, n: usize, trial: u64) -> Result<Trial> {
    let (a, b) = positive_pair(rng, n, cfg.magnitude)?;
    let k = [0.0, 1.0, 10.0][(trial % 3) as usize];
    let (lhs, rhs) = stronger_log_sum_sides(&a, &b, k)?;
    Ok(Trial {
        n,
        input: json!({ "a": a, "b": b, "k": k }),
        lhs,
        rhs,
        slack: rel_slack(rhs, lhs),
        hypothesis: true,
        note: String::new(),
    })
}

fn trial_prop54(cfg: &FuzzConfig, rng: &mut ChaCha8Rng, n: usize) -> Result<Trial> {
    let (a, b) = simplex_pair(rng, n, &cfg.tol)?;
    let r = gibbs_forms(&a, &b, 16, rng.random(), &cfg.tol)?;
    let slack = [
        rel_slack(r.geometric_mean_b, r.geometric_mean_a),
        rel_slack(-r.geometric_mean_a.ln(), -r.geometric_mean_b.ln()),
        rel_slack(r.entropy, r.cross_entropy),
        rel_slack(0.0, r.kl),
        rel_slack(r.sampled_sup, r.geometric_mean_a),
        rel_slack(r.entropy, r.sampled_inf),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);
    Ok(Trial {
        n,
        input: json!({ "a": a, "b": b }),
        lhs: r.entropy,
        rhs: r.cross_entropy,
        slack,
        hypothesis: true,
        note: format!("consistent={}", r.consistent),
    })
}

fn trial_cor55(cfg: &FuzzConfig, rng: &mut ChaCha8Rng, n: usize) -> Result<Trial> {
    let (a, b) = positive_pair(rng, n, cfg.magnitude)?;
    let ks = random_shifts(rng)?;
    let (lhs, rhs) = generalized_log_sum_sides(&a, &b, &ks)?;
    Ok(Trial {
        n,
        input: json!({ "a": a, "b": b, "ks": ks }),
        lhs,
        rhs,
        slack: rel_slack(rhs, lhs),
        hypothesis: true,
        note: String::new(),
    })
}

fn trial_cor56(cfg: &FuzzConfig, rng: &mut ChaCha8Rng, n: usize) -> Result<Trial> {
    let (a, b) = simplex_pair(rng, n, &cfg.tol)?;
    let ks = random_shifts(rng)?;
    let (lhs, rhs) = generalized_information_sides(&a, &b, &ks)?;
    Ok(Trial {
        n,
        input: json!({ "a": a, "b": b, "ks": ks }),
        lhs,
        rhs,
        slack: rel_slack(rhs, lhs),
        hypothesis: true,
        note: String::new(),
    })
}

fn run_trial(case: TheoremId, cfg: &FuzzConfig, rng: &mut ChaCha8Rng, trial: u64) -> Trial {
    let n = rng.random_range(cfg.n_range.0..=cfg.n_range.1);
    let outcome = match case {
        TheoremId::Conj1_2 => trial_conj(cfg, rng, n),
        TheoremId::Thm3_2 => trial_thm32(cfg, rng, n),
        TheoremId::Thm3_4 => trial_thm34(cfg, rng, n),
        TheoremId::Prop4_1 => trial_prop41(cfg, rng, n),
        TheoremId::Thm4_2 => trial_thm42(cfg, rng),
        TheoremId::Thm4_4 => trial_thm44(cfg, rng, n),
        TheoremId::Thm4_8 => trial_thm48(cfg, rng),
        TheoremId::Lemma5_2 => trial_lemma52(cfg, rng, n, trial),
        TheoremId::Prop5_4 => trial_prop54(cfg, rng, n),
        TheoremId::Cor5_5 => trial_cor55(cfg, rng, n),
        TheoremId::Cor5_6 => trial_cor56(cfg, rng, n),
    };
    outcome.unwrap_or_else(|e| Trial::miss(n, e.to_string()))
}

pub fn run_campaign(case: TheoremId, cfg: &FuzzConfig) -> Result<InequalityReport> {
    cfg.validate()?;
    let threshold = -cfg.tol.abs_tol;
    let mut report = InequalityReport {
        schema: REPORT_SCHEMA,
        theorem_id: case,
        severity: case.severity(),
        trials: cfg.trials,
        seed: cfg.seed,
        prng: PRNG_NAME,
        sampler: case.sampler(),
        n_range: cfg.n_range,
        magnitude: cfg.magnitude,
        tol: cfg.tol,
        hypothesis_misses: 0,
        min_slack: f64::INFINITY,
        violations: Vec::new(),
        rows: Vec::with_capacity(cfg.trials.min(1 << 20) as usize),
    };
    for trial in 0..cfg.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(trial);
        let t = run_trial(case, cfg, &mut rng, trial);
        let verdict = if !t.hypothesis {
            report.hypothesis_misses += 1;
            TrialVerdict::HypothesisMiss
        } else {
            report.min_slack = report.min_slack.min(t.slack);
            // NaN slack counts as a failed conclusion.
            if t.slack >= threshold {
                TrialVerdict::Ok
            } else {
                if t.slack.is_nan() {
                    report.min_slack = f64::NEG_INFINITY;
                }
                report.violations.push(Violation {
                    trial,
                    n: t.n,
                    input: t.input,
                    lhs: t.lhs,
                    rhs: t.rhs,
                    slack: t.slack,
                    note: t.note,
                });
                TrialVerdict::Violation
            }
        };
        report.rows.push(TrialRow {
            theorem_id: case,
            trial,
            n: t.n,
            slack: t.slack,
            verdict,
            seed: cfg.seed,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorization::majorize;
    use crate::ssli::find_pairing;
    use approx::assert_abs_diff_eq;

    fn cfg(trials: u64, seed: u64) -> FuzzConfig {
        FuzzConfig {
            trials,
            seed,
            ..Default::default()
        }
    }

    #[test]
    fn theorem_ids_round_trip() {
        for t in TheoremId::ALL {
            assert_eq!(t.as_str().parse::<TheoremId>().unwrap(), t);
            assert_eq!(serde_json::to_string(&t).unwrap(), format!("\"{}\"", t.as_str()));
            let expected = if t == TheoremId::Conj1_2 { Severity::Finding } else { Severity::Critical };
            assert_eq!(t.severity(), expected);
        }
        assert!(matches!("thm_9_9".parse::<TheoremId>(), Err(Error::UnknownTheorem(_))));
    }

    #[test]
    fn config_validation() {
        assert!(FuzzConfig { n_range: (1, 3), ..Default::default() }.validate().is_err());
        assert!(FuzzConfig { n_range: (4, 3), ..Default::default() }.validate().is_err());
        assert!(FuzzConfig { magnitude: (1.0, 1.0), ..Default::default() }.validate().is_err());
    }

    #[test]
    fn empty_campaign() {
        let r = run_campaign(TheoremId::Thm3_2, &cfg(0, 1)).unwrap();
        assert_eq!(r.trials, 0);
        assert!(r.violations.is_empty() && r.rows.is_empty());
        assert_eq!(r.min_slack, f64::INFINITY);
        let json = r.to_json().unwrap();
        assert!(json.contains("\"min_slack\": null"));
        assert_eq!(r.to_csv().unwrap(), "theorem_id,trial,n,slack,verdict,seed\n");
    }

    #[test]
    fn majorized_pairs_are_majorized() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let n = rng.random_range(2..=10);
            let (x, y) = sample_majorized_pair(n, &mut rng, (-3.0, 3.0)).unwrap();
            assert!(majorize(&x, &y, &tol).unwrap().strong);
        }
    }

    #[test]
    fn single_full_transform_averages() {
        let mut v = vec![4.0, 2.0];
        let (xi, xj) = (v[0], v[1]);
        let l = 0.5;
        v[0] = l * xi + (1.0 - l) * xj;
        v[1] = l * xj + (1.0 - l) * xi;
        assert_eq!(v, vec![3.0, 3.0]);
    }

    #[test]
    fn ratio_product_reconstruction() {
        let inst = instance_from_ratios_products(&[10.0 / 6.0, 8.0 / 5.0, 3.0 / 7.0], &[60.0, 40.0, 21.0]).unwrap();
        for (x, y) in inst.a().entries().iter().zip([6.0, 5.0, 7.0]) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-12);
        }
        for (x, y) in inst.b().entries().iter().zip([10.0, 8.0, 3.0]) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-12);
        }
        let same = instance_from_ratios_products(&[1.0; 3], &[4.0, 9.0, 2.0]).unwrap();
        assert_eq!(same.a(), same.b());
    }

    #[test]
    fn thm32_sampler_is_sound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let opts = PairingOptions::default();
        for _ in 0..2000 {
            let n = rng.random_range(2..=8);
            let inst = sample_thm32_instance(n, &mut rng, (-3.0, 3.0)).unwrap();
            assert!(find_pairing(&inst, &opts).unwrap().found);
            let r = thm32_verdict(&inst, &opts).unwrap();
            assert_ne!(r.verdict.hypothesis, Hypothesis::None);
            assert!(r.verdict.holds);
        }
    }

    #[test]
    fn campaigns_are_clean_and_sound() {
        for t in TheoremId::ALL {
            let r = run_campaign(t, &cfg(300, 17)).unwrap();
            assert_eq!(r.hypothesis_misses, 0, "{t}: {:?}", r.rows.iter().find(|x| x.verdict == TrialVerdict::HypothesisMiss));
            assert!(r.violations.is_empty(), "{t}: {:?}", r.violations.first());
            assert!(r.min_slack >= -1e-9, "{t}");
            assert_eq!(r.rows.len(), 300);
        }
    }

    #[test]
    fn campaigns_are_deterministic() {
        for t in [TheoremId::Conj1_2, TheoremId::Thm4_4, TheoremId::Prop5_4] {
            let a = run_campaign(t, &cfg(50, 99)).unwrap();
            let b = run_campaign(t, &cfg(50, 99)).unwrap();
            assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
            assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
            let c = run_campaign(t, &cfg(50, 100)).unwrap();
            assert_ne!(a.to_csv().unwrap(), c.to_csv().unwrap());
        }
    }

    #[test]
    fn prefix_of_a_campaign_is_stable() {
        let short = run_campaign(TheoremId::Lemma5_2, &cfg(20, 4)).unwrap();
        let long = run_campaign(TheoremId::Lemma5_2, &cfg(40, 4)).unwrap();
        assert_eq!(short.rows[..], long.rows[..20]);
    }
}
