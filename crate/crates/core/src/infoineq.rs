//! Relative entropy, the shifted log-sum inequalities and the equivalent
//! forms of Gibbs' inequality.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::Serialize;

use crate::base::{check_same_len, PositiveVector, Tolerance};
use crate::error::{Error, Result};

/// Strictly positive vector summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(entries: Vec<f64>, tol: &Tolerance) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some((i, v)) = entries
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::NotProbabilityVector(format!(
                "entry {i} = {v} is not positive"
            )));
        }
        let sum: f64 = entries.iter().sum();
        if !tol.eq(sum, 1.0) {
            return Err(Error::NotProbabilityVector(format!("entries sum to {sum}")));
        }
        Ok(Self(entries))
    }

    /// Normalizes a positive vector onto the simplex.
    pub fn normalized(v: &PositiveVector) -> Self {
        let total: f64 = v.entries().iter().sum();
        Self(v.entries().iter().map(|x| x / total).collect())
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_positive(&self) -> PositiveVector {
        PositiveVector::new(self.0.clone()).expect("probability entries are positive")
    }
}

/// Nonnegative shifts `k_1..k_m`. `m` is independent of the vector length.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ShiftSet(Vec<f64>);

impl ShiftSet {
    pub fn new(ks: Vec<f64>) -> Result<Self> {
        if let Some(&k) = ks.iter().find(|k| !(k.is_finite() && **k >= 0.0)) {
            return Err(Error::NegativeShift(k));
        }
        Ok(Self(ks))
    }

    pub fn ks(&self) -> &[f64] {
        &self.0
    }
}

/// `D(p || q) = sum p_i ln(p_i / q_i)`.
pub fn kl_divergence(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<f64> {
    check_same_len(p.len(), q.len())?;
    Ok(p.0
        .iter()
        .zip(&q.0)
        .map(|(pi, qi)| if pi == qi { 0.0 } else { pi * (pi / qi).ln() })
        .sum())
}

fn check_shift(k: f64) -> Result<()> {
    if k.is_finite() && k >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeShift(k))
    }
}

/// Both sides of `sum a_i ln(a_i/b_i + k) >= A ln(A/B + k)` with
/// `A = sum a`, `B = sum b`.
pub fn stronger_log_sum_sides(a: &PositiveVector, b: &PositiveVector, k: f64) -> Result<(f64, f64)> {
    check_same_len(a.len(), b.len())?;
    check_shift(k)?;
    let (sa, sb): (f64, f64) = (a.entries().iter().sum(), b.entries().iter().sum());
    let lhs: f64 = a
        .entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| x * (x / y + k).ln())
        .sum();
    Ok((lhs, sa * (sa / sb + k).ln()))
}

/// Left side minus right side of the shifted log-sum inequality.
pub fn stronger_log_sum_gap(a: &PositiveVector, b: &PositiveVector, k: f64) -> Result<f64> {
    let (lhs, rhs) = stronger_log_sum_sides(a, b, k)?;
    Ok(lhs - rhs)
}

fn shifted_log_product(ks: &ShiftSet, ratio: f64) -> f64 {
    ks.0.iter().map(|k| ratio + k).product::<f64>().ln()
}

/// Both sides of `sum a_i ln prod_s (a_i/b_i + k_s) >= A ln prod_s (A/B + k_s)`,
/// evaluated in the product form.
pub fn generalized_log_sum_sides(
    a: &PositiveVector,
    b: &PositiveVector,
    ks: &ShiftSet,
) -> Result<(f64, f64)> {
    check_same_len(a.len(), b.len())?;
    let (sa, sb): (f64, f64) = (a.entries().iter().sum(), b.entries().iter().sum());
    let lhs: f64 = a
        .entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| x * shifted_log_product(ks, x / y))
        .sum();
    Ok((lhs, sa * shifted_log_product(ks, sa / sb)))
}

pub fn generalized_log_sum_gap(a: &PositiveVector, b: &PositiveVector, ks: &ShiftSet) -> Result<f64> {
    let (lhs, rhs) = generalized_log_sum_sides(a, b, ks)?;
    Ok(lhs - rhs)
}

/// Both sides of `sum a_i ln prod_s (a_i/b_i + k_s) >= ln prod_s (1 + k_s)`
/// on the simplex.
pub fn generalized_information_sides(
    a: &ProbabilityVector,
    b: &ProbabilityVector,
    ks: &ShiftSet,
) -> Result<(f64, f64)> {
    check_same_len(a.len(), b.len())?;
    let lhs: f64 = a
        .0
        .iter()
        .zip(&b.0)
        .map(|(x, y)| x * shifted_log_product(ks, x / y))
        .sum();
    Ok((lhs, shifted_log_product(ks, 1.0)))
}

pub fn generalized_information_gap(
    a: &ProbabilityVector,
    b: &ProbabilityVector,
    ks: &ShiftSet,
) -> Result<f64> {
    let (lhs, rhs) = generalized_information_sides(a, b, ks)?;
    Ok(lhs - rhs)
}

/// Uniform sample from the open simplex by normalized exponential spacings.
pub fn sample_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let e: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = e.iter().sum();
        if total > 0.0 && e.iter().all(|x| *x > 0.0) {
            return e.into_iter().map(|x| x / total).collect();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GibbsReport {
    /// `prod b_i^{a_i}`
    pub geometric_mean_b: f64,
    /// `prod a_i^{a_i}`
    pub geometric_mean_a: f64,
    pub cross_entropy: f64,
    pub entropy: f64,
    pub kl: f64,
    /// Verdicts of the sup form, the inf form, the cross-entropy form and
    /// the divergence form, in that order.
    pub verdicts: [bool; 4],
    pub consistent: bool,
    pub samples: usize,
    /// Largest `prod xi_i^{a_i}` over the sampled `xi`.
    pub sampled_sup: f64,
    /// Smallest `sum a_i (-ln xi_i)` over the sampled `xi`.
    pub sampled_inf: f64,
    pub variational_ok: bool,
}

pub const DEFAULT_GIBBS_SAMPLES: usize = 1000;

pub fn gibbs_forms(
    a: &ProbabilityVector,
    b: &ProbabilityVector,
    samples: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<GibbsReport> {
    check_same_len(a.len(), b.len())?;
    let geo = |x: &[f64]| a.0.iter().zip(x).map(|(w, v)| v.powf(*w)).product::<f64>();
    let cross = |x: &[f64]| a.0.iter().zip(x).map(|(w, v)| -w * v.ln()).sum::<f64>();
    let geometric_mean_b = geo(&b.0);
    let geometric_mean_a = geo(&a.0);
    let cross_entropy = cross(&b.0);
    let entropy = cross(&a.0);
    let kl = kl_divergence(a, b)?;
    let verdicts = [
        tol.leq(geometric_mean_b, geometric_mean_a),
        tol.geq(-geometric_mean_b.ln(), -geometric_mean_a.ln()),
        tol.geq(cross_entropy, entropy),
        tol.geq(kl, 0.0),
    ];
    let consistent = verdicts.iter().all(|v| *v == verdicts[0]);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sampled_sup, mut sampled_inf) = (0.0f64, f64::INFINITY);
    for _ in 0..samples {
        let xi = sample_simplex(&mut rng, a.len());
        sampled_sup = sampled_sup.max(geo(&xi));
        sampled_inf = sampled_inf.min(cross(&xi));
    }
    let variational_ok =
        samples == 0 || (tol.leq(sampled_sup, geometric_mean_a) && tol.geq(sampled_inf, entropy));
    Ok(GibbsReport {
        geometric_mean_b,
        geometric_mean_a,
        cross_entropy,
        entropy,
        kl,
        verdicts,
        consistent,
        samples,
        sampled_sup,
        sampled_inf,
        variational_ok,
    })
}
