//! Shared numeric foundation: positive vectors, the tolerance policy, sorted
//! and logarithmic views, and the Chebyshev and Jensen building blocks.
//!
//! All logarithms in this crate are natural logarithms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Comparison policy shared by every verdict-producing operation.
///
/// `u <= v` is accepted when `u <= v + max(abs_tol, rel_tol * max(|u|, |v|))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if !(abs_tol >= 0.0 && rel_tol >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerances must be nonnegative, got abs={abs_tol} rel={rel_tol}"
            )));
        }
        Ok(Self { abs_tol, rel_tol })
    }

    /// Both tolerances set to the same value.
    pub fn uniform(tol: f64) -> Result<Self> {
        Self::new(tol, tol)
    }

    /// No slack at all; comparisons reduce to plain float comparisons.
    pub fn exact() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: 0.0,
        }
    }

    pub fn margin(&self, u: f64, v: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * u.abs().max(v.abs()))
    }

    pub fn leq(&self, u: f64, v: f64) -> bool {
        u <= v + self.margin(u, v)
    }

    pub fn geq(&self, u: f64, v: f64) -> bool {
        self.leq(v, u)
    }

    pub fn eq(&self, u: f64, v: f64) -> bool {
        (u - v).abs() <= self.margin(u, v)
    }

    /// `u < v` by more than the margin.
    pub fn lt(&self, u: f64, v: f64) -> bool {
        !self.geq(u, v)
    }
}

/// Nonempty list of strictly positive reals, optionally mirrored by exact
/// rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveVector {
    entries: Vec<f64>,
    exact: Option<Vec<BigRational>>,
}

/// Serialized as the plain list of float entries.
impl Serialize for PositiveVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl PositiveVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        for (index, &value) in entries.iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositiveEntry { index, value });
            }
        }
        Ok(Self {
            entries,
            exact: None,
        })
    }

    /// Builds the vector from exact rationals; the float entries are their
    /// nearest `f64` values.
    pub fn from_rationals(exact: Vec<BigRational>) -> Result<Self> {
        if exact.is_empty() {
            return Err(Error::EmptyVector);
        }
        let mut entries = Vec::with_capacity(exact.len());
        for (index, q) in exact.iter().enumerate() {
            let value = q.to_f64().unwrap_or(f64::NAN);
            if !q.is_positive() || !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositiveEntry { index, value });
            }
            entries.push(value);
        }
        Ok(Self {
            entries,
            exact: Some(exact),
        })
    }

    /// Integer entries, stored exactly.
    pub fn from_integers(values: &[i64]) -> Result<Self> {
        Self::from_rationals(
            values
                .iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn exact(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Drops the exact mirror.
    pub fn to_float(&self) -> Self {
        Self {
            entries: self.entries.clone(),
            exact: None,
        }
    }

    /// Entries reordered as `self[order[0]], self[order[1]], ...`.
    ///
    /// `order` must be a permutation of `0..len`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        debug_assert_eq!(order.len(), self.len());
        Self {
            entries: order.iter().map(|&i| self.entries[i]).collect(),
            exact: self
                .exact
                .as_ref()
                .map(|ex| order.iter().map(|&i| ex[i].clone()).collect()),
        }
    }

    /// Indices that sort the entries nonincreasingly; ties keep index order.
    pub fn desc_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&i, &j| self.entries[j].total_cmp(&self.entries[i]));
        idx
    }

    /// Indices that sort the entries nondecreasingly; ties keep index order.
    pub fn asc_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&i, &j| self.entries[i].total_cmp(&self.entries[j]));
        idx
    }

    pub fn sort_desc(&self) -> Self {
        self.permuted(&self.desc_order())
    }

    pub fn sort_asc(&self) -> Self {
        self.permuted(&self.asc_order())
    }

    pub fn log_vector(&self) -> Vec<f64> {
        self.entries.iter().map(|x| x.ln()).collect()
    }

    /// Sum of the entrywise logarithms, i.e. `ln` of the product.
    pub fn log_product(&self) -> f64 {
        self.entries.iter().map(|x| x.ln()).sum()
    }

    /// Entrywise reciprocals of the reversed vector: `out[k] = 1 / self[n-1-k]`.
    pub fn reciprocal_reversed(&self) -> Self {
        let n = self.len();
        Self {
            entries: (0..n).map(|k| 1.0 / self.entries[n - 1 - k]).collect(),
            exact: self
                .exact
                .as_ref()
                .map(|ex| (0..n).map(|k| ex[n - 1 - k].recip()).collect()),
        }
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.entries.iter().map(|x| x * factor).collect())
    }
}

pub fn check_same_len(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::LengthMismatch { left, right })
    }
}

/// Natural logarithm of each entry of a raw slice.
pub fn log_vector(values: &[f64]) -> Result<Vec<f64>> {
    values
        .iter()
        .enumerate()
        .map(|(index, &value)| {
            if value > 0.0 {
                Ok(value.ln())
            } else {
                Err(Error::NonPositiveEntry { index, value })
            }
        })
        .collect()
}

/// The two outer terms of Chebyshev's sum inequality and the middle term
/// `(1/n)(sum a)(sum b)` they enclose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChebyshevBounds {
    /// `sum a_i b_{n+1-i}` (oppositely ordered).
    pub lower: f64,
    pub mean_product: f64,
    /// `sum a_i b_i` (similarly ordered).
    pub upper: f64,
}

impl ChebyshevBounds {
    pub fn is_ordered(&self, tol: &Tolerance) -> bool {
        tol.leq(self.lower, self.mean_product) && tol.leq(self.mean_product, self.upper)
    }
}

fn check_nondecreasing(values: &[f64], which: &'static str) -> Result<()> {
    match values.windows(2).position(|w| w[1] < w[0]) {
        Some(i) => Err(Error::NotSorted { which, index: i + 1 }),
        None => Ok(()),
    }
}

pub fn chebyshev_bounds(a_sorted: &[f64], b_sorted: &[f64]) -> Result<ChebyshevBounds> {
    check_same_len(a_sorted.len(), b_sorted.len())?;
    if a_sorted.is_empty() {
        return Err(Error::EmptyVector);
    }
    check_nondecreasing(a_sorted, "a")?;
    check_nondecreasing(b_sorted, "b")?;
    let n = a_sorted.len();
    let upper = a_sorted.iter().zip(b_sorted).map(|(x, y)| x * y).sum();
    let lower = a_sorted
        .iter()
        .zip(b_sorted.iter().rev())
        .map(|(x, y)| x * y)
        .sum();
    let sum_a: f64 = a_sorted.iter().sum();
    let sum_b: f64 = b_sorted.iter().sum();
    Ok(ChebyshevBounds {
        lower,
        mean_product: sum_a * sum_b / n as f64,
        upper,
    })
}

/// Jensen gap `sum w_i f(x_i) - f(sum w_i x_i)` for `f(x) = x ln(x + k)`.
///
/// `f` is convex on `x > -k` whenever `k >= 0`, so the gap is nonnegative.
pub fn jensen_gap(weights: &[f64], points: &[f64], k: f64, tol: &Tolerance) -> Result<f64> {
    check_same_len(weights.len(), points.len())?;
    if weights.is_empty() {
        return Err(Error::EmptyVector);
    }
    if !(k >= 0.0) {
        return Err(Error::DomainError(format!("shift k = {k} must be >= 0")));
    }
    if let Some((index, &value)) = weights.iter().enumerate().find(|(_, w)| !(**w > 0.0)) {
        return Err(Error::NonPositiveEntry { index, value });
    }
    let sum: f64 = weights.iter().sum();
    if !tol.eq(sum, 1.0) {
        return Err(Error::WeightsNotNormalized { sum });
    }
    if let Some(x) = points.iter().find(|x| !(**x + k > 0.0)) {
        return Err(Error::DomainError(format!("x + k = {} <= 0", x + k)));
    }
    let f = |x: f64| x * (x + k).ln();
    let mean: f64 = weights.iter().zip(points).map(|(w, x)| w * x).sum();
    if !(mean + k > 0.0) {
        return Err(Error::DomainError(format!("mean + k = {} <= 0", mean + k)));
    }
    let avg_f: f64 = weights.iter().zip(points).map(|(w, x)| w * f(*x)).sum();
    Ok(avg_f - f(mean))
}

/// Exact rational equality helper used by verdicts in exact mode.
pub(crate) fn rational_cmp_leq(u: &BigRational, v: &BigRational) -> bool {
    (v - u).is_positive() || (v - u).is_zero()
}
