//! The sum of squared logarithms inequality `sum (ln a_i)^2 <= sum (ln b_i)^2`
//! and its sufficient conditions.
//!
//! * the conjectured hypothesis: `e_k(a) <= e_k(b)` for `k < n` and
//!   `e_n(a) = e_n(b)`;
//! * the rearrangement condition: a pairing of the entries with `b_i / a_i`
//!   and `a_i b_i` both nonincreasing, plus one of two conditions on the
//!   products `e_n(a)`, `e_n(b)`;
//! * the powered variant `sum (ln a_i)^p <= sum (ln b_i)^p` for `p < 0`.

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::base::{check_same_len, log_vector, rational_cmp_leq, PositiveVector, Tolerance};
use crate::error::{Error, Result};
use crate::majorization::majorize;
use crate::sympoly::elementary_symmetric_all;

#[derive(Debug, Clone, PartialEq)]
pub struct SsliInstance {
    a: PositiveVector,
    b: PositiveVector,
}

impl SsliInstance {
    pub fn new(a: PositiveVector, b: PositiveVector) -> Result<Self> {
        check_same_len(a.len(), b.len())?;
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &PositiveVector {
        &self.a
    }

    pub fn b(&self) -> &PositiveVector {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// `ã_k = 1 / a_{n+1-k}` and likewise for `b`. Maps instances satisfying
    /// condition (b) of the rearrangement theorem onto condition (a).
    pub fn reciprocal(&self) -> Self {
        Self {
            a: self.a.reciprocal_reversed(),
            b: self.b.reciprocal_reversed(),
        }
    }
}

pub fn sum_squared_logs(v: &PositiveVector) -> f64 {
    v.entries().iter().map(|x| x.ln().powi(2)).sum()
}

/// [`sum_squared_logs`] on an unchecked slice.
pub fn sum_squared_logs_raw(values: &[f64]) -> Result<f64> {
    Ok(log_vector(values)?.iter().map(|l| l * l).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    #[serde(rename = "conjecture_1_2")]
    Conjecture,
    #[serde(rename = "thm_3_2a")]
    RearrangementA,
    #[serde(rename = "thm_3_2b")]
    RearrangementB,
    #[serde(rename = "thm_3_4")]
    PoweredLogs,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SsliVerdict {
    pub hypothesis: Hypothesis,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// `rhs - lhs`.
    pub slack: f64,
}

impl SsliVerdict {
    fn new(hypothesis: Hypothesis, lhs: f64, rhs: f64, tol: &Tolerance) -> Self {
        Self {
            hypothesis,
            lhs,
            rhs,
            holds: tol.leq(lhs, rhs),
            slack: rhs - lhs,
        }
    }

    /// Hypothesis satisfied but the conclusion fails.
    pub fn is_violation(&self) -> bool {
        self.hypothesis != Hypothesis::None && !self.holds
    }
}

/// `e_k(a) <= e_k(b)` for `k < n` and `e_n(a) = e_n(b)`.
///
/// Exact when both vectors carry rational mirrors; otherwise the inequalities
/// and the top equality are decided with `tol`.
pub fn conjecture_hypothesis(inst: &SsliInstance, tol: &Tolerance) -> bool {
    let pa = elementary_symmetric_all(&inst.a);
    let pb = elementary_symmetric_all(&inst.b);
    let n = inst.len();
    if let (Some(ea), Some(eb)) = (pa.exact(), pb.exact()) {
        return (0..n - 1).all(|k| rational_cmp_leq(&ea[k], &eb[k])) && ea[n - 1] == eb[n - 1];
    }
    (1..n).all(|k| tol.leq(pa.e(k), pb.e(k))) && tol.eq(pa.top(), pb.top())
}

pub fn conjecture_verdict(inst: &SsliInstance, tol: &Tolerance) -> SsliVerdict {
    let hypothesis = if conjecture_hypothesis(inst, tol) {
        Hypothesis::Conjecture
    } else {
        Hypothesis::None
    };
    SsliVerdict::new(
        hypothesis,
        sum_squared_logs(&inst.a),
        sum_squared_logs(&inst.b),
        tol,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingOptions {
    /// Only allow the common reindexing `(a_i, b_i)`; no independent permutation.
    pub common_reindex: bool,
    /// Largest `n` for which the search is exhaustive.
    pub exhaustive_cutoff: usize,
    /// Node budget of the heuristic search above the cutoff.
    pub node_budget: u64,
    pub tol: Tolerance,
}

impl Default for PairingOptions {
    fn default() -> Self {
        Self {
            common_reindex: false,
            exhaustive_cutoff: 10,
            node_budget: 2_000_000,
            tol: Tolerance::default(),
        }
    }
}

/// Outcome of the pairing search. When `found`, entry `t` of each list
/// describes the pair `(a[permutation_a[t]], b[permutation_b[t]])`, listed in
/// nonincreasing ratio order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingResult {
    pub found: bool,
    /// `true` when a negative answer covers the whole search tree.
    pub exhaustive: bool,
    pub permutation_a: Vec<usize>,
    pub permutation_b: Vec<usize>,
    pub ratios: Vec<f64>,
    pub products: Vec<f64>,
    pub nodes_explored: u64,
}

impl PairingResult {
    fn not_found(exhaustive: bool, nodes_explored: u64) -> Self {
        Self {
            found: false,
            exhaustive,
            permutation_a: Vec::new(),
            permutation_b: Vec::new(),
            ratios: Vec::new(),
            products: Vec::new(),
            nodes_explored,
        }
    }

    fn from_pairs(a: &[f64], b: &[f64], pairs: Vec<(usize, usize)>, nodes_explored: u64) -> Self {
        let ratios = pairs.iter().map(|&(i, j)| b[j] / a[i]).collect();
        let products = pairs.iter().map(|&(i, j)| a[i] * b[j]).collect();
        Self {
            found: true,
            exhaustive: true,
            permutation_a: pairs.iter().map(|p| p.0).collect(),
            permutation_b: pairs.iter().map(|p| p.1).collect(),
            ratios,
            products,
            nodes_explored,
        }
    }
}

/// Orders the pairs `(a[i], b[j])` by ratio descending, breaking ratio ties
/// (within `tol`) by product descending. Returns the order if the product
/// chain is then nonincreasing as well.
pub fn chain_order(
    a: &[f64],
    b: &[f64],
    pairs: &[(usize, usize)],
    tol: &Tolerance,
) -> Option<Vec<(usize, usize)>> {
    let ratio = |p: &(usize, usize)| b[p.1] / a[p.0];
    let product = |p: &(usize, usize)| a[p.0] * b[p.1];
    let mut ordered = pairs.to_vec();
    ordered.sort_by(|p, q| ratio(q).total_cmp(&ratio(p)));
    let mut start = 0;
    while start < ordered.len() {
        let head = ratio(&ordered[start]);
        let mut end = start + 1;
        while end < ordered.len() && tol.eq(ratio(&ordered[end]), head) {
            end += 1;
        }
        ordered[start..end].sort_by(|p, q| product(q).total_cmp(&product(p)));
        start = end;
    }
    let chains_ok = ordered.windows(2).all(|w| {
        tol.geq(ratio(&w[0]), ratio(&w[1])) && tol.geq(product(&w[0]), product(&w[1]))
    });
    chains_ok.then_some(ordered)
}

/// Re-verifies a pairing independently of the search that produced it.
pub fn verify_pairing(inst: &SsliInstance, result: &PairingResult, tol: &Tolerance) -> bool {
    let n = inst.len();
    if !result.found || result.permutation_a.len() != n || result.permutation_b.len() != n {
        return false;
    }
    let is_perm = |p: &[usize]| {
        let mut seen = vec![false; n];
        p.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
    };
    if !is_perm(&result.permutation_a) || !is_perm(&result.permutation_b) {
        return false;
    }
    let pairs: Vec<_> = result
        .permutation_a
        .iter()
        .copied()
        .zip(result.permutation_b.iter().copied())
        .collect();
    chain_order(inst.a.entries(), inst.b.entries(), &pairs, tol).is_some()
}

struct PairingSearch<'a> {
    a: &'a [f64],
    b: &'a [f64],
    b_order: Vec<usize>,
    tol: Tolerance,
    heuristic: bool,
    budget: u64,
    nodes: u64,
    used: Vec<bool>,
    chosen: Vec<usize>,
}

enum Step {
    Found,
    Exhausted,
    OverBudget,
}

impl PairingSearch<'_> {
    // In any valid chain `b^2 = ratio * product` is nonincreasing, so the b
    // entries can be taken in descending order and only `a` is permuted.
    fn run(&mut self, depth: usize) -> Step {
        let n = self.a.len();
        if depth == n {
            return Step::Found;
        }
        let bj = self.b[self.b_order[depth]];
        let mut candidates: Vec<usize> = (0..n).filter(|&i| !self.used[i]).collect();
        if let Some(&prev) = self.chosen.last() {
            let prev_b = self.b[self.b_order[depth - 1]];
            let prev_ratio = prev_b / self.a[prev];
            let prev_product = prev_b * self.a[prev];
            candidates.retain(|&i| {
                self.tol.leq(bj / self.a[i], prev_ratio) && self.tol.leq(bj * self.a[i], prev_product)
            });
            if self.heuristic {
                let pivot = self.a[prev].ln();
                candidates.sort_by(|&i, &j| {
                    (self.a[i].ln() - pivot)
                        .abs()
                        .total_cmp(&(self.a[j].ln() - pivot).abs())
                });
            }
        }
        let mut tried: Vec<f64> = Vec::new();
        for i in candidates {
            // Equal entries of `a` span identical subtrees.
            if tried.contains(&self.a[i]) {
                continue;
            }
            tried.push(self.a[i]);
            self.nodes += 1;
            if self.heuristic && self.nodes > self.budget {
                return Step::OverBudget;
            }
            self.used[i] = true;
            self.chosen.push(i);
            match self.run(depth + 1) {
                Step::Exhausted => {}
                other => return other,
            }
            self.chosen.pop();
            self.used[i] = false;
        }
        Step::Exhausted
    }
}

/// Searches for a bijection between the entries of `a` and `b` whose pairs can
/// be listed with `b_i / a_i` and `a_i b_i` both nonincreasing.
pub fn find_pairing(inst: &SsliInstance, opts: &PairingOptions) -> Result<PairingResult> {
    let (a, b) = (inst.a.entries(), inst.b.entries());
    let n = a.len();
    if opts.common_reindex {
        let pairs: Vec<_> = (0..n).map(|i| (i, i)).collect();
        return Ok(match chain_order(a, b, &pairs, &opts.tol) {
            Some(order) => PairingResult::from_pairs(a, b, order, 1),
            None => PairingResult::not_found(true, 1),
        });
    }
    let heuristic = n > opts.exhaustive_cutoff;
    let mut search = PairingSearch {
        a,
        b,
        b_order: inst.b.desc_order(),
        tol: opts.tol,
        heuristic,
        budget: opts.node_budget,
        nodes: 0,
        used: vec![false; n],
        chosen: Vec::with_capacity(n),
    };
    match search.run(0) {
        Step::Found => {
            let pairs = search
                .chosen
                .iter()
                .copied()
                .zip(search.b_order.iter().copied())
                .collect();
            Ok(PairingResult::from_pairs(a, b, pairs, search.nodes))
        }
        Step::Exhausted => Ok(PairingResult::not_found(true, search.nodes)),
        Step::OverBudget => Err(Error::SearchBudgetExceeded {
            budget: opts.node_budget,
        }),
    }
}

/// Pairing, product conditions and SSLI verdict for the rearrangement theorem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RearrangementReport {
    pub verdict: SsliVerdict,
    pub pairing: PairingResult,
    pub top_a: f64,
    pub top_b: f64,
    /// `e_n(a) <= e_n(b)` and `e_n(a) e_n(b) >= 1`.
    pub condition_a: bool,
    /// `e_n(a) >= e_n(b)` and `e_n(a) e_n(b) <= 1`.
    pub condition_b: bool,
}

impl RearrangementReport {
    /// The hypothesis holds yet the inequality fails: contradicts a proven
    /// theorem, so it signals a defect.
    pub fn is_critical(&self) -> bool {
        self.verdict.is_violation()
    }
}

fn product_conditions(inst: &SsliInstance, tol: &Tolerance) -> (bool, bool) {
    if let (Some(ea), Some(eb)) = (inst.a.exact(), inst.b.exact()) {
        let na: BigRational = ea.iter().product();
        let nb: BigRational = eb.iter().product();
        let prod = &na * &nb;
        let one = BigRational::one();
        return (
            rational_cmp_leq(&na, &nb) && rational_cmp_leq(&one, &prod),
            rational_cmp_leq(&nb, &na) && rational_cmp_leq(&prod, &one),
        );
    }
    let (la, lb) = (inst.a.log_product(), inst.b.log_product());
    (
        tol.leq(la, lb) && tol.geq(la + lb, 0.0),
        tol.geq(la, lb) && tol.leq(la + lb, 0.0),
    )
}

pub fn thm32_verdict(inst: &SsliInstance, opts: &PairingOptions) -> Result<RearrangementReport> {
    let pairing = find_pairing(inst, opts)?;
    let (condition_a, condition_b) = product_conditions(inst, &opts.tol);
    let hypothesis = match (pairing.found, condition_a, condition_b) {
        (true, true, _) => Hypothesis::RearrangementA,
        (true, false, true) => Hypothesis::RearrangementB,
        _ => Hypothesis::None,
    };
    Ok(RearrangementReport {
        verdict: SsliVerdict::new(
            hypothesis,
            sum_squared_logs(&inst.a),
            sum_squared_logs(&inst.b),
            &opts.tol,
        ),
        pairing,
        top_a: inst.a.log_product().exp(),
        top_b: inst.b.log_product().exp(),
        condition_a,
        condition_b,
    })
}

/// `sum (ln a_i)^p <= sum (ln b_i)^p` for entries above one, `p < 0`, under
/// `a ≺^w b`.
pub fn powered_logs_verdict(
    a: &PositiveVector,
    b: &PositiveVector,
    p: f64,
    tol: &Tolerance,
) -> Result<SsliVerdict> {
    check_same_len(a.len(), b.len())?;
    for v in [a, b] {
        if let Some((index, &value)) = v.entries().iter().enumerate().find(|(_, x)| !(**x > 1.0)) {
            return Err(Error::EntryNotAboveOne { index, value });
        }
    }
    if !(p < 0.0) {
        return Err(Error::NonNegativeExponent(p));
    }
    let hypothesis = if majorize(a, b, tol)?.weak_above {
        Hypothesis::PoweredLogs
    } else {
        Hypothesis::None
    };
    let powered = |v: &PositiveVector| v.entries().iter().map(|x| x.ln().powf(p)).sum::<f64>();
    Ok(SsliVerdict::new(hypothesis, powered(a), powered(b), tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SsliDirection {
    /// `sum (ln a)^2 < sum (ln b)^2`
    Below,
    /// Equal within tolerance.
    Equal,
    /// `sum (ln a)^2 > sum (ln b)^2`
    Above,
}

/// How `a ≺ b` alone relates to the SSLI, and whether `a ≺ b` together with
/// `e_n(a) = e_n(b)` forces `a` and `b` to be permutations of each other.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryReport {
    pub majorized: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub direction: SsliDirection,
    pub top_equal: bool,
    pub sorted_equal: bool,
    /// `!(majorized && top_equal) || sorted_equal`.
    pub permutation_forced: bool,
}

pub fn remark35_boundary(
    a: &PositiveVector,
    b: &PositiveVector,
    tol: &Tolerance,
) -> Result<BoundaryReport> {
    let majorized = majorize(a, b, tol)?.strong;
    let (lhs, rhs) = (sum_squared_logs(a), sum_squared_logs(b));
    let direction = if tol.eq(lhs, rhs) {
        SsliDirection::Equal
    } else if lhs < rhs {
        SsliDirection::Below
    } else {
        SsliDirection::Above
    };
    let top_equal = match (a.exact(), b.exact()) {
        (Some(ea), Some(eb)) => {
            ea.iter().product::<BigRational>() == eb.iter().product::<BigRational>()
        }
        _ => tol.eq(a.log_product(), b.log_product()),
    };
    let (sa, sb) = (a.sort_desc(), b.sort_desc());
    let sorted_equal = sa
        .entries()
        .iter()
        .zip(sb.entries())
        .all(|(x, y)| tol.eq(*x, *y));
    Ok(BoundaryReport {
        majorized,
        lhs,
        rhs,
        direction,
        top_equal,
        sorted_equal,
        permutation_forced: !(majorized && top_equal) || sorted_equal,
    })
}
