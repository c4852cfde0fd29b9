//! Penalized multi-start minimization of `sum (ln b_i)^2` over the set of
//! `b` with `e_k(b) >= e_k(a)` for `k < n` and `e_n(b) = e_n(a)`.
//!
//! Work happens in log coordinates `u = ln b`. The product constraint becomes
//! `sum u = ln e_n(a)` and is eliminated by solving for the last coordinate,
//! so only the first `n - 1` coordinates are free.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::base::{check_same_len, PositiveVector};
use crate::error::{Error, Result};
use crate::ssli::sum_squared_logs;
use crate::sympoly::{elementary_symmetric, symmetric_gradient};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub starts: usize,
    /// Iteration cap per penalty stage.
    pub max_iters: usize,
    pub penalty_schedule: Vec<f64>,
    pub step_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            starts: 16,
            max_iters: 5000,
            penalty_schedule: (1..=6).map(|e| 10f64.powi(e)).collect(),
            step_tol: 1e-12,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 {
            return Err(Error::InvalidConfig("starts must be >= 1".into()));
        }
        if self.penalty_schedule.is_empty()
            || self.penalty_schedule[0] <= 0.0
            || self.penalty_schedule.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::InvalidConfig(
                "penalty schedule must be positive and strictly increasing".into(),
            ));
        }
        if !(self.step_tol > 0.0) {
            return Err(Error::InvalidConfig("step_tol must be positive".into()));
        }
        Ok(())
    }
}

/// Largest normalized constraint violation:
/// `max(0, max_{k<n} (e_k(a) - e_k(b)) / e_k(a), |e_n(a) - e_n(b)| / e_n(a))`.
pub fn feasibility_check(a: &PositiveVector, b: &PositiveVector) -> Result<f64> {
    check_same_len(a.len(), b.len())?;
    Ok(residual(&elementary_symmetric(a.entries()), &elementary_symmetric(b.entries())))
}

fn residual(ea: &[f64], eb: &[f64]) -> f64 {
    let n = ea.len();
    let mut worst = 0.0f64;
    for k in 0..n.saturating_sub(1) {
        worst = worst.max((ea[k] - eb[k]) / ea[k]);
    }
    worst.max((ea[n - 1] - eb[n - 1]).abs() / ea[n - 1])
}

/// `sum u_i^2 + mu * sum_{k<n} max(0, 1 - e_k(e^u) / e_k(a))^2` as a function
/// of the free coordinates `u_1..u_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PenalizedObjective {
    ea: Vec<f64>,
    log_en: f64,
    pub mu: f64,
}

impl PenalizedObjective {
    pub fn new(a: &PositiveVector, mu: f64) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::DomainError("minimization needs n >= 2".into()));
        }
        Ok(Self {
            ea: elementary_symmetric(a.entries()),
            log_en: a.log_product(),
            mu,
        })
    }

    pub fn dim(&self) -> usize {
        self.ea.len() - 1
    }

    /// Full log vector with the last coordinate solved from the product.
    pub fn full(&self, free: &[f64]) -> Vec<f64> {
        let mut u = free.to_vec();
        u.push(self.log_en - free.iter().sum::<f64>());
        u
    }

    pub fn value(&self, free: &[f64]) -> f64 {
        let u = self.full(free);
        let b: Vec<f64> = u.iter().map(|x| x.exp()).collect();
        let eb = elementary_symmetric(&b);
        let penalty: f64 = (0..self.dim())
            .map(|k| (1.0 - eb[k] / self.ea[k]).max(0.0).powi(2))
            .sum();
        u.iter().map(|x| x * x).sum::<f64>() + self.mu * penalty
    }

    pub fn gradient(&self, free: &[f64]) -> Vec<f64> {
        let n = self.ea.len();
        let u = self.full(free);
        let b: Vec<f64> = u.iter().map(|x| x.exp()).collect();
        let eb = elementary_symmetric(&b);
        let partials = symmetric_gradient(&b);
        // d/du_i of the full objective, before the chain rule through u_n.
        let mut full_grad: Vec<f64> = u.iter().map(|x| 2.0 * x).collect();
        for k in 0..n - 1 {
            let viol = 1.0 - eb[k] / self.ea[k];
            if viol > 0.0 {
                let coeff = -2.0 * self.mu * viol / self.ea[k];
                for i in 0..n {
                    full_grad[i] += coeff * partials[k][i] * b[i];
                }
            }
        }
        (0..n - 1).map(|j| full_grad[j] - full_grad[n - 1]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StartTrace {
    pub start: usize,
    pub final_value: f64,
    pub residual: f64,
    pub iterations: usize,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimizationResult {
    pub best_b: PositiveVector,
    pub best_value: f64,
    pub target_value: f64,
    /// `best_value - target_value`, never clamped.
    pub gap: f64,
    pub feasibility_residual: f64,
    pub best_start: usize,
    pub per_start_trace: Vec<StartTrace>,
}

/// Accepted residual for a point to count as feasible.
pub const FEASIBILITY_TOL: f64 = 1e-7;

fn descend(obj: &PenalizedObjective, x: &mut Vec<f64>, cfg: &OptimizerConfig) -> usize {
    let mut f = obj.value(x);
    let mut g = obj.gradient(x);
    let mut step = 1.0;
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut iters = 0;
    let mut stalled = 0;
    while iters < cfg.max_iters {
        iters += 1;
        let gnorm2: f64 = g.iter().map(|v| v * v).sum();
        if gnorm2.sqrt() <= cfg.step_tol {
            break;
        }
        // Barzilai-Borwein initial step, then Armijo backtracking.
        if let Some((px, pg)) = &prev {
            let s: Vec<f64> = x.iter().zip(px).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = g.iter().zip(pg).map(|(a, b)| a - b).collect();
            let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
            let ss: f64 = s.iter().map(|v| v * v).sum();
            if sy > 0.0 {
                step = (ss / sy).clamp(1e-12, 1e6);
            }
        }
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - step * gi).collect();
            let ft = obj.value(&trial);
            if ft <= f - 1e-4 * step * gnorm2 {
                accepted = Some((trial, ft));
                break;
            }
            step *= 0.5;
        }
        let Some((trial, ft)) = accepted else { break };
        let moved = step * gnorm2.sqrt();
        let decrease = f - ft;
        prev = Some((std::mem::replace(x, trial), g));
        g = obj.gradient(x);
        f = ft;
        if moved <= cfg.step_tol || decrease <= cfg.step_tol * f.abs().max(1.0) {
            stalled += 1;
            if stalled >= 10 {
                break;
            }
        } else {
            stalled = 0;
        }
    }
    iters
}

/// Scales the log deviations from their mean by the smallest `s >= 1`
/// restoring `e_k(b) >= e_k(a)`. Every `e_k` is nondecreasing in `s` while
/// the product stays fixed, so bisection applies. Returns `None` if no
/// scale up to `1e3` suffices.
fn project(ea: &[f64], u: &[f64]) -> Option<Vec<f64>> {
    let n = u.len() as f64;
    let mean = u.iter().sum::<f64>() / n;
    let at = |s: f64| -> Vec<f64> { u.iter().map(|x| mean + s * (x - mean)).collect() };
    let res = |v: &[f64]| {
        let b: Vec<f64> = v.iter().map(|x| x.exp()).collect();
        residual(ea, &elementary_symmetric(&b))
    };
    let strict = |v: &[f64]| {
        let b: Vec<f64> = v.iter().map(|x| x.exp()).collect();
        let eb = elementary_symmetric(&b);
        (0..ea.len() - 1).all(|k| eb[k] >= ea[k])
    };
    if strict(u) {
        return Some(u.to_vec());
    }
    let (mut lo, mut hi) = (1.0, 2.0);
    while !strict(&at(hi)) {
        lo = hi;
        hi *= 2.0;
        if hi > 1e3 {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if strict(&at(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let out = at(hi);
    (res(&out) <= FEASIBILITY_TOL).then_some(out)
}

/// Multi-start penalized gradient descent. Start 0 is `u = ln a`; the others
/// perturb it by independent uniform draws in `[-1, 1]` per coordinate, shifted
/// to keep the product. Every start runs the penalty schedule, is projected
/// back onto the feasible set, and the lowest feasible value wins (ties by
/// lowest start index). The feasible starting point itself is a candidate.
pub fn minimize_ssli(a: &PositiveVector, cfg: &OptimizerConfig) -> Result<MinimizationResult> {
    match minimize_ssli_traced(a, cfg)? {
        Ok(result) => Ok(result),
        Err(trace) => Err(Error::DidNotConverge {
            residual: trace.iter().map(|t| t.residual).fold(f64::INFINITY, f64::min),
        }),
    }
}

/// Like [`minimize_ssli`], but a run with no feasible start returns the
/// per-start trace instead of only the smallest residual.
pub fn minimize_ssli_traced(
    a: &PositiveVector,
    cfg: &OptimizerConfig,
) -> Result<std::result::Result<MinimizationResult, Vec<StartTrace>>> {
    cfg.validate()?;
    let base = PenalizedObjective::new(a, cfg.penalty_schedule[0])?;
    let n = a.len();
    let ln_a = a.log_vector();
    let target_value = sum_squared_logs(a);
    let ea = base.ea.clone();

    let mut best: Option<(f64, Vec<f64>, f64, usize)> = None;
    let consider = |u: &[f64], start: usize, best: &mut Option<(f64, Vec<f64>, f64, usize)>| {
        let b: Vec<f64> = u.iter().map(|x| x.exp()).collect();
        let r = residual(&ea, &elementary_symmetric(&b));
        let value: f64 = u.iter().map(|x| x * x).sum();
        let feasible = r <= FEASIBILITY_TOL && value.is_finite();
        if feasible && best.as_ref().is_none_or(|(bv, ..)| value < *bv) {
            *best = Some((value, u.to_vec(), r, start));
        }
        (value, r, feasible)
    };

    let mut trace = Vec::with_capacity(cfg.starts);
    for start in 0..cfg.starts {
        let mut u = ln_a.clone();
        if start > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(start as u64);
            let delta: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let shift = delta.iter().sum::<f64>() / n as f64;
            for (ui, d) in u.iter_mut().zip(&delta) {
                *ui += d - shift;
            }
        } else {
            consider(&u, start, &mut best);
        }
        let mut free = u[..n - 1].to_vec();
        let mut iterations = 0;
        for &mu in &cfg.penalty_schedule {
            let obj = PenalizedObjective { mu, ..base.clone() };
            iterations += descend(&obj, &mut free, cfg);
        }
        let end = base.full(&free);
        let entry = match project(&ea, &end) {
            Some(p) => {
                let (value, residual, feasible) = consider(&p, start, &mut best);
                StartTrace { start, final_value: value, residual, iterations, feasible }
            }
            None => {
                let b: Vec<f64> = end.iter().map(|x| x.exp()).collect();
                StartTrace {
                    start,
                    final_value: end.iter().map(|x| x * x).sum(),
                    residual: residual(&ea, &elementary_symmetric(&b)),
                    iterations,
                    feasible: false,
                }
            }
        };
        trace.push(entry);
    }

    let Some((best_value, u, feasibility_residual, best_start)) = best else {
        return Ok(Err(trace));
    };
    let best_b = PositiveVector::new(u.iter().map(|x| x.exp()).collect())?;
    Ok(Ok(MinimizationResult {
        best_b,
        best_value,
        target_value,
        gap: best_value - target_value,
        feasibility_residual,
        best_start,
        per_start_trace: trace,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pv(v: &[f64]) -> PositiveVector {
        PositiveVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn feasibility_examples() {
        let a = pv(&[14.0, 2.0, 10.0]);
        assert_eq!(feasibility_check(&a, &a).unwrap(), 0.0);
        assert_eq!(feasibility_check(&a, &pv(&[20.0, 2.0, 7.0])).unwrap(), 0.0);
        let r = feasibility_check(&pv(&[6.0, 5.0, 7.0]), &pv(&[10.0, 8.0, 3.0])).unwrap();
        assert_abs_diff_eq!(r, 30.0 / 210.0, epsilon = 1e-15);
        assert!(feasibility_check(&a, &pv(&[1.0])).is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = OptimizerConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.penalty_schedule = vec![10.0, 10.0];
        assert!(cfg.validate().is_err());
        cfg = OptimizerConfig { starts: 0, ..Default::default() };
        assert!(cfg.validate().is_err());
        assert!(minimize_ssli(&pv(&[3.0]), &OptimizerConfig::default()).is_err());
    }

    fn fd_gradient(obj: &PenalizedObjective, x: &[f64]) -> Vec<f64> {
        let h = 1e-6;
        (0..x.len())
            .map(|j| {
                let mut p = x.to_vec();
                let mut m = x.to_vec();
                p[j] += h;
                m[j] -= h;
                (obj.value(&p) - obj.value(&m)) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..100 {
            let n = 2 + trial % 5;
            let a: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0f64..2.0).exp()).collect();
            let a = pv(&a);
            let obj = PenalizedObjective::new(&a, 10f64.powi(1 + (trial % 4) as i32)).unwrap();
            let x: Vec<f64> = a.log_vector()[..n - 1]
                .iter()
                .map(|u| u + rng.random_range(-1.0..1.0))
                .collect();
            let g = obj.gradient(&x);
            let fd = fd_gradient(&obj, &x);
            let norm = |v: &[f64]| v.iter().map(|z| z * z).sum::<f64>().sqrt();
            let diff: Vec<f64> = g.iter().zip(&fd).map(|(p, q)| p - q).collect();
            let denom = norm(&g).max(norm(&fd));
            assert!(norm(&diff) <= 1e-4 * denom, "trial {trial}: {g:?} vs {fd:?}");
        }
    }

    #[test]
    fn equal_entries_return_to_start() {
        let a = pv(&[2.0, 2.0, 2.0]);
        let r = minimize_ssli(&a, &OptimizerConfig::default()).unwrap();
        assert_abs_diff_eq!(r.target_value, 3.0 * 2f64.ln().powi(2), epsilon = 1e-12);
        assert_abs_diff_eq!(r.target_value, 1.441, epsilon = 1e-3);
        assert!(r.gap >= -1e-6 && r.gap <= 1e-4, "gap {}", r.gap);
        assert!(r.feasibility_residual <= FEASIBILITY_TOL);
        assert_eq!(r.per_start_trace.len(), 16);
        let candidate = pv(&[4.0, 2.0, 1.0]);
        assert_eq!(feasibility_check(&a, &candidate).unwrap(), 0.0);
        assert!(sum_squared_logs(&candidate) > r.best_value);
    }

    #[test]
    fn mixed_entries() {
        let a = pv(&[14.0, 2.0, 10.0]);
        let cfg = OptimizerConfig { starts: 32, seed: 5, ..Default::default() };
        let r = minimize_ssli(&a, &cfg).unwrap();
        let logs = 14f64.ln().powi(2) + 2f64.ln().powi(2) + 10f64.ln().powi(2);
        assert_abs_diff_eq!(r.target_value, logs, epsilon = 1e-12);
        assert_abs_diff_eq!(r.target_value, 12.745, epsilon = 5e-3);
        assert!(r.gap >= -1e-6 && r.gap <= 1e-4, "gap {}", r.gap);
        assert_eq!(r.per_start_trace.len(), 32);
        assert!(r.per_start_trace.iter().skip(1).any(|t| t.feasible));
    }

    #[test]
    fn deterministic_and_permutation_invariant() {
        let a = pv(&[0.3, 5.0, 1.7, 2.2]);
        let cfg = OptimizerConfig { starts: 6, seed: 9, ..Default::default() };
        let r1 = minimize_ssli(&a, &cfg).unwrap();
        let r2 = minimize_ssli(&a, &cfg).unwrap();
        assert_eq!(r1, r2);
        let p = minimize_ssli(&a.permuted(&[2, 0, 3, 1]), &cfg).unwrap();
        assert!((p.best_value - r1.best_value).abs() <= 1e-8);
    }

    #[test]
    fn projection_restores_feasibility() {
        let a = pv(&[1.0, 3.0, 9.0]);
        let ea = elementary_symmetric(a.entries());
        let mean = a.log_product() / 3.0;
        let shrunk: Vec<f64> = a.log_vector().iter().map(|u| mean + 0.5 * (u - mean)).collect();
        let b: Vec<f64> = shrunk.iter().map(|x| x.exp()).collect();
        assert!(residual(&ea, &elementary_symmetric(&b)) > 0.0);
        let p = project(&ea, &shrunk).unwrap();
        let b: Vec<f64> = p.iter().map(|x| x.exp()).collect();
        assert!(residual(&ea, &elementary_symmetric(&b)) <= FEASIBILITY_TOL);
        assert!(project(&ea, &[mean; 3]).is_none());
    }
}
