//! Strong, weak and logarithmic majorization.
//!
//! `x ≺ y` compares descending prefix sums with equal totals, `x ≺_w y`
//! (weak from below) compares all descending prefix sums, and `x ≺^w y`
//! (weak from above) requires every ascending prefix sum of `x` to dominate
//! that of `y`. The logarithmic relations apply the same tests to `ln x` and
//! `ln y`, i.e. to prefix products of the sorted vectors.
//!
//! [`hlp_convex_test`] decides the same relations through finitely many
//! convex test functions and serves as an independent oracle.

use serde::{Deserialize, Serialize};

use crate::base::{check_same_len, PositiveVector, Tolerance};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Strong,
    WeakBelow,
    WeakAbove,
}

/// One prefix comparison: partial sum (or log of partial product) of the
/// first `k` sorted entries of each side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrefixStep {
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrefixTraces {
    pub desc_sums: Vec<PrefixStep>,
    pub asc_sums: Vec<PrefixStep>,
    pub desc_log_sums: Vec<PrefixStep>,
    pub asc_log_sums: Vec<PrefixStep>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorizationVerdict {
    pub strong: bool,
    pub weak_below: bool,
    pub weak_above: bool,
    pub log_strong: bool,
    pub log_weak_below: bool,
    pub log_weak_above: bool,
    pub traces: PrefixTraces,
}

impl MajorizationVerdict {
    pub fn holds(&self, relation: Relation) -> bool {
        match relation {
            Relation::Strong => self.strong,
            Relation::WeakBelow => self.weak_below,
            Relation::WeakAbove => self.weak_above,
        }
    }

    pub fn log_holds(&self, relation: Relation) -> bool {
        match relation {
            Relation::Strong => self.log_strong,
            Relation::WeakBelow => self.log_weak_below,
            Relation::WeakAbove => self.log_weak_above,
        }
    }
}

fn prefix_trace(x: &[f64], y: &[f64]) -> Vec<PrefixStep> {
    let (mut sx, mut sy) = (0.0, 0.0);
    x.iter()
        .zip(y)
        .enumerate()
        .map(|(i, (a, b))| {
            sx += a;
            sy += b;
            PrefixStep {
                k: i + 1,
                lhs: sx,
                rhs: sy,
            }
        })
        .collect()
}

fn sorted(values: &[f64], descending: bool) -> Vec<f64> {
    let mut v = values.to_vec();
    if descending {
        v.sort_by(|a, b| b.total_cmp(a));
    } else {
        v.sort_by(f64::total_cmp);
    }
    v
}

/// Decisions for one family of traces: `(weak_below, weak_above, strong)`.
fn decide(desc: &[PrefixStep], asc: &[PrefixStep], tol: &Tolerance) -> (bool, bool, bool) {
    let below = desc.iter().all(|s| tol.leq(s.lhs, s.rhs));
    let above = asc.iter().all(|s| tol.geq(s.lhs, s.rhs));
    let last = desc.last().expect("nonempty trace");
    let totals_equal = tol.eq(last.lhs, last.rhs);
    // x ≺ y  <=>  x ≺_w y with equal totals  <=>  x ≺^w y with equal totals;
    // requiring both keeps `strong => weak_below && weak_above` under rounding.
    (below, above, below && above && totals_equal)
}

/// Decides all six relations `x ? y` for two vectors of equal length.
pub fn majorize(
    x: &PositiveVector,
    y: &PositiveVector,
    tol: &Tolerance,
) -> Result<MajorizationVerdict> {
    check_same_len(x.len(), y.len())?;
    let (xe, ye) = (x.entries(), y.entries());
    let desc_sums = prefix_trace(&sorted(xe, true), &sorted(ye, true));
    let asc_sums = prefix_trace(&sorted(xe, false), &sorted(ye, false));
    let (lx, ly) = (x.log_vector(), y.log_vector());
    let desc_log_sums = prefix_trace(&sorted(&lx, true), &sorted(&ly, true));
    let asc_log_sums = prefix_trace(&sorted(&lx, false), &sorted(&ly, false));

    let (weak_below, weak_above, strong) = decide(&desc_sums, &asc_sums, tol);
    let (log_weak_below, log_weak_above, log_strong) =
        decide(&desc_log_sums, &asc_log_sums, tol);
    Ok(MajorizationVerdict {
        strong,
        weak_below,
        weak_above,
        log_strong,
        log_weak_below,
        log_weak_above,
        traces: PrefixTraces {
            desc_sums,
            asc_sums,
            desc_log_sums,
            asc_log_sums,
        },
    })
}

fn hinge_sum(values: &[f64], t: f64) -> f64 {
    values.iter().map(|z| (z - t).max(0.0)).sum()
}

fn reversed_hinge_sum(values: &[f64], t: f64) -> f64 {
    values.iter().map(|z| (t - z).max(0.0)).sum()
}

/// Convex-function characterization of the three relations.
///
/// `sum f(x_i) - sum f(y_i)` is piecewise linear in the hinge location `t`
/// with kinks only at data points, so testing hinges at every entry of `x`
/// and `y` is exhaustive.
///
/// * `Strong`: hinges `max(z - t, 0)` together with `f(z) = z` and `f(z) = -z`.
/// * `WeakBelow`: hinges `max(z - t, 0)` (convex, increasing).
/// * `WeakAbove`: reversed hinges `max(t - z, 0)` (convex, decreasing).
pub fn hlp_convex_test(
    x: &PositiveVector,
    y: &PositiveVector,
    relation: Relation,
    tol: &Tolerance,
) -> Result<bool> {
    check_same_len(x.len(), y.len())?;
    let (xe, ye) = (x.entries(), y.entries());
    let breakpoints = xe.iter().chain(ye).copied();
    let ok = match relation {
        Relation::Strong => {
            let (sx, sy): (f64, f64) = (xe.iter().sum(), ye.iter().sum());
            tol.leq(sx, sy)
                && tol.leq(-sx, -sy)
                && breakpoints
                    .into_iter()
                    .all(|t| tol.leq(hinge_sum(xe, t), hinge_sum(ye, t)))
        }
        Relation::WeakBelow => breakpoints
            .into_iter()
            .all(|t| tol.leq(hinge_sum(xe, t), hinge_sum(ye, t))),
        Relation::WeakAbove => breakpoints
            .into_iter()
            .all(|t| tol.leq(reversed_hinge_sum(xe, t), reversed_hinge_sum(ye, t))),
    };
    Ok(ok)
}

/// `false` iff the computed verdicts break one of the implications
/// `ln x ≺_w ln y => x ≺_w y` or `x ≺^w y => ln x ≺^w ln y`.
pub fn log_implications_check(
    x: &PositiveVector,
    y: &PositiveVector,
    tol: &Tolerance,
) -> Result<bool> {
    let v = majorize(x, y, tol)?;
    Ok((!v.log_weak_below || v.weak_below) && (!v.weak_above || v.log_weak_above))
}
