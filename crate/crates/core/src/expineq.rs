//! Exponential-sum inequalities: the weak log-majorization bound, the
//! discriminant bound for zero-sum triples, monotonicity of `sum exp(f_i)`
//! over ordered polynomial families, and the parametrization of zero-sum
//! triples with a fixed sum of squares.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::base::{check_same_len, PositiveVector, Tolerance};
use crate::error::{Error, Result};
use crate::majorization::majorize;

/// Result of `sum exp(m x_i) <= sum exp(m y_i)` under `ln x ≺_w ln y`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpSumReport {
    pub hypothesis: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn exp_sum_weak_log(
    x: &PositiveVector,
    y: &PositiveVector,
    m: f64,
    tol: &Tolerance,
) -> Result<ExpSumReport> {
    check_same_len(x.len(), y.len())?;
    if !(m > 0.0) {
        return Err(Error::DomainError(format!("m = {m} must be positive")));
    }
    let hypothesis = majorize(x, y, tol)?.log_weak_below;
    let sum = |v: &PositiveVector| v.entries().iter().map(|z| (m * z).exp()).sum::<f64>();
    let (lhs, rhs) = (sum(x), sum(y));
    Ok(ExpSumReport {
        hypothesis,
        lhs,
        rhs,
        holds: tol.leq(lhs, rhs),
    })
}

/// Real triple with zero sum, stored in nonincreasing order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroSumTriple {
    u: f64,
    v: f64,
    w: f64,
}

impl ZeroSumTriple {
    /// Sorts the entries nonincreasingly and checks the sum against `tol`,
    /// scaled by the largest magnitude.
    pub fn new(a: f64, b: f64, c: f64, tol: &Tolerance) -> Result<Self> {
        let mut e = [a, b, c];
        if e.iter().any(|x| !x.is_finite()) {
            return Err(Error::DomainError(format!("non-finite entry in {e:?}")));
        }
        e.sort_by(|p, q| q.total_cmp(p));
        let sum = e[0] + e[1] + e[2];
        let scale = e.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if sum.abs() > tol.margin(scale, 0.0) {
            return Err(Error::NotZeroSum(sum));
        }
        Ok(Self {
            u: e[0],
            v: e[1],
            w: e[2],
        })
    }

    pub fn entries(&self) -> [f64; 3] {
        [self.u, self.v, self.w]
    }

    pub fn largest(&self) -> f64 {
        self.u
    }

    /// `uv + vw + wu`.
    pub fn p(&self) -> f64 {
        self.u * self.v + self.v * self.w + self.w * self.u
    }

    /// `-r^2 / 2`, which equals `p` for every zero-sum triple.
    pub fn p_from_norm(&self) -> f64 {
        -0.5 * self.sum_squares()
    }

    pub fn sum_squares(&self) -> f64 {
        self.u * self.u + self.v * self.v + self.w * self.w
    }

    pub fn product(&self) -> f64 {
        self.u * self.v * self.w
    }

    /// Discriminant `(q/2)^2 + (p/3)^3` of `X^3 + pX + q` with `q = -uvw`,
    /// the cubic whose roots are the triple.
    pub fn discriminant(&self) -> f64 {
        let q = -self.product();
        (q / 2.0).powi(2) + (self.p() / 3.0).powi(3)
    }

    pub fn is_distinct(&self, tol: &Tolerance) -> bool {
        !tol.eq(self.u, self.v) && !tol.eq(self.v, self.w)
    }

    fn exp_sum(&self, m: f64) -> f64 {
        (m * self.u).exp() + (m * self.v).exp() + (m * self.w).exp()
    }
}

/// `-3 * cbrt(u^2 v^2 w^2 / 4)`; `p` lies strictly below it when the entries
/// are distinct and touches it when two coincide.
pub fn cardano_bound(t: &ZeroSumTriple) -> f64 {
    -3.0 * (t.product().powi(2) / 4.0).cbrt()
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().fold(f64::NEG_INFINITY, |m, x| m.max(*x));
    max + terms.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Both exponential bounds built from the discriminant bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CardanoReport {
    pub p: f64,
    pub bound_xyz: f64,
    pub bound_abc: f64,
    /// `e^{xy} + e^{yz} + e^{zx}`
    pub u1_lhs: f64,
    /// `(e^{x^2} + e^{y^2} + e^{z^2}) exp(bound(abc))`
    pub u1_rhs: f64,
    pub u1_slack: f64,
    pub u2_lhs: f64,
    pub u2_rhs: f64,
    pub u2_slack: f64,
    /// `ln rhs - ln lhs` for each bound; positive means strict inequality.
    pub u1_log_margin: f64,
    pub u2_log_margin: f64,
    pub strict: bool,
}

pub fn cardano_exp_inequality(
    xyz: &ZeroSumTriple,
    abc: &ZeroSumTriple,
    tol: &Tolerance,
) -> Result<CardanoReport> {
    let (rx, ra) = (xyz.sum_squares(), abc.sum_squares());
    if !tol.eq(rx, ra) {
        return Err(Error::SumOfSquaresMismatch {
            left: rx,
            right: ra,
        });
    }
    if rx <= tol.abs_tol {
        return Err(Error::DegenerateTriple("sum of squares is zero".into()));
    }
    for t in [xyz, abc] {
        if !t.is_distinct(tol) {
            return Err(Error::DegenerateTriple(format!(
                "repeated entries in {:?}",
                t.entries()
            )));
        }
    }
    let side = |pairs: &ZeroSumTriple, squares: &ZeroSumTriple, bound: f64| {
        let [x, y, z] = pairs.entries();
        let lhs_terms = [x * y, y * z, z * x];
        let [a, b, c] = squares.entries();
        let rhs_terms = [a * a + bound, b * b + bound, c * c + bound];
        let lhs: f64 = lhs_terms.iter().map(|e| e.exp()).sum();
        let rhs: f64 = rhs_terms.iter().map(|e| e.exp()).sum();
        (lhs, rhs, log_sum_exp(&rhs_terms) - log_sum_exp(&lhs_terms))
    };
    let (bound_xyz, bound_abc) = (cardano_bound(xyz), cardano_bound(abc));
    let (u1_lhs, u1_rhs, u1_log_margin) = side(xyz, xyz, bound_abc);
    let (u2_lhs, u2_rhs, u2_log_margin) = side(abc, abc, bound_xyz);
    Ok(CardanoReport {
        p: xyz.p(),
        bound_xyz,
        bound_abc,
        u1_lhs,
        u1_rhs,
        u1_slack: u1_rhs - u1_lhs,
        u2_lhs,
        u2_rhs,
        u2_slack: u2_rhs - u2_lhs,
        u1_log_margin,
        u2_log_margin,
        strict: u1_log_margin > 0.0 && u2_log_margin > 0.0,
    })
}

/// Polynomial with coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial(pub Vec<f64>);

impl Polynomial {
    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(d, c)| c * d as f64)
                .collect(),
        )
    }

    pub fn scaled(&self, factor: f64) -> Polynomial {
        Polynomial(self.0.iter().map(|c| c * factor).collect())
    }
}

/// Polynomials `f_1..f_n` summing to the zero polynomial, sampled on a
/// uniform grid of an interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolynomialFamily {
    polys: Vec<Polynomial>,
    interval: (f64, f64),
    grid_points: usize,
}

pub const DEFAULT_GRID_POINTS: usize = 257;

impl PolynomialFamily {
    /// Checks the zero-sum property exactly, coefficient by coefficient.
    pub fn new(polys: Vec<Polynomial>, interval: (f64, f64), grid_points: usize) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::EmptyVector);
        }
        let (lo, hi) = interval;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidConfig(format!("bad interval [{lo}, {hi}]")));
        }
        if grid_points < 2 {
            return Err(Error::InvalidConfig("grid_points must be >= 2".into()));
        }
        let degree = polys.iter().map(|p| p.0.len()).max().unwrap_or(0);
        for d in 0..degree {
            let mut sum = BigRational::zero();
            for p in &polys {
                if let Some(&c) = p.0.get(d) {
                    sum += BigRational::from_float(c).ok_or_else(|| {
                        Error::InvalidConfig(format!("non-finite coefficient {c}"))
                    })?;
                }
            }
            if !sum.is_zero() {
                return Err(Error::HypothesisViolated(format!(
                    "coefficients of degree {d} do not sum to zero"
                )));
            }
        }
        Ok(Self {
            polys,
            interval,
            grid_points,
        })
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn grid(&self) -> Vec<f64> {
        let (lo, hi) = self.interval;
        let last = self.grid_points - 1;
        (0..self.grid_points)
            .map(|j| {
                if j == last {
                    hi
                } else {
                    lo + (hi - lo) * j as f64 / last as f64
                }
            })
            .collect()
    }

    /// The same family with every coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.polys.iter().map(|p| p.scaled(factor)).collect(),
            self.interval,
            self.grid_points,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "variant", content = "h")]
pub enum FamilyVariant {
    /// `g(t) = sum exp(f_i(t))`
    Plain,
    /// `g_h(t) = sum exp(h(t) f_i(t))`, `h` positive and nondecreasing on the interval.
    ProductH(Polynomial),
    /// `H(t) = sum exp(h(f_i(t)))`, `h` nondecreasing and convex on the range of the `f_i`.
    ComposedH(Polynomial),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub direction: Monotonicity,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub derivatives: Vec<f64>,
    /// Smallest normalized signed step or derivative; negative beyond the
    /// tolerance means the monotonicity conclusion failed.
    pub min_slack: f64,
    pub conclusion_holds: bool,
}

/// Whether the pairs `(value_i, slope_i)` can be listed with values
/// nondecreasing and slopes nondecreasing (`similar`) or nonincreasing.
/// The exponential sums are symmetric in the `f_i`, so any relabelling counts.
fn ordered_alike(values: &[f64], slopes: &[f64], similar: bool, tol: &Tolerance) -> bool {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let slope_key = |i: usize| if similar { slopes[i] } else { -slopes[i] };
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && tol.eq(values[idx[end]], values[idx[start]]) {
            end += 1;
        }
        idx[start..end].sort_by(|&i, &j| slope_key(i).total_cmp(&slope_key(j)));
        start = end;
    }
    idx.windows(2).all(|w| tol.leq(slope_key(w[0]), slope_key(w[1])))
}

fn first_unordered(
    fam: &PolynomialFamily,
    derivs: &[Polynomial],
    similar: bool,
    tol: &Tolerance,
) -> Option<f64> {
    fam.grid().into_iter().find(|&t| {
        let values: Vec<f64> = fam.polys.iter().map(|p| p.eval(t)).collect();
        let slopes: Vec<f64> = derivs.iter().map(|p| p.eval(t)).collect();
        !ordered_alike(&values, &slopes, similar, tol)
    })
}

fn check_h(fam: &PolynomialFamily, variant: &FamilyVariant, tol: &Tolerance) -> Result<()> {
    match variant {
        FamilyVariant::Plain => Ok(()),
        FamilyVariant::ProductH(h) => {
            let dh = h.derivative();
            for t in fam.grid() {
                if !(h.eval(t) > 0.0) {
                    return Err(Error::HypothesisViolatedAt {
                        t,
                        hypothesis: "h positive".into(),
                    });
                }
                if !tol.geq(dh.eval(t), 0.0) {
                    return Err(Error::HypothesisViolatedAt {
                        t,
                        hypothesis: "h nondecreasing".into(),
                    });
                }
            }
            Ok(())
        }
        FamilyVariant::ComposedH(h) => {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for t in fam.grid() {
                for p in &fam.polys {
                    let v = p.eval(t);
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
            let margin = 0.05 * (hi - lo).max(f64::MIN_POSITIVE);
            let (lo, hi) = (lo - margin, hi + margin);
            let (dh, ddh) = (h.derivative(), h.derivative().derivative());
            let n = fam.grid_points;
            for j in 0..n {
                let s = lo + (hi - lo) * j as f64 / (n - 1) as f64;
                if !tol.geq(dh.eval(s), 0.0) {
                    return Err(Error::HypothesisViolatedAt {
                        t: s,
                        hypothesis: "h nondecreasing on the range of f".into(),
                    });
                }
                if !tol.geq(ddh.eval(s), 0.0) {
                    return Err(Error::HypothesisViolatedAt {
                        t: s,
                        hypothesis: "h convex on the range of f".into(),
                    });
                }
            }
            Ok(())
        }
    }
}

/// Value and analytic derivative of the exponential sum at `t`, plus the
/// magnitude of the derivative's terms (for cancellation-aware tolerances).
fn exp_sum_at(
    fam: &PolynomialFamily,
    derivs: &[Polynomial],
    variant: &FamilyVariant,
    t: f64,
) -> (f64, f64, f64) {
    let (mut g, mut dg, mut scale) = (0.0, 0.0, 0.0);
    for (f, df) in fam.polys.iter().zip(derivs) {
        let (fv, dfv) = (f.eval(t), df.eval(t));
        let (expo, inner_slope) = match variant {
            FamilyVariant::Plain => (fv, dfv),
            FamilyVariant::ProductH(h) => {
                let hv = h.eval(t);
                (hv * fv, h.derivative().eval(t) * fv + hv * dfv)
            }
            FamilyVariant::ComposedH(h) => (h.eval(fv), h.derivative().eval(fv) * dfv),
        };
        let e = expo.exp();
        g += e;
        dg += inner_slope * e;
        scale += (inner_slope * e).abs();
    }
    (g, dg, scale)
}

/// Decides which monotonicity branch the family's hypotheses support on the
/// grid, then checks the exponential sum is monotone in that direction both
/// through grid differences and through the sign of its analytic derivative.
///
/// The increasing branch needs values and derivatives similarly ordered at
/// every grid point; the decreasing branch (plain variant only) needs them
/// oppositely ordered.
pub fn family_monotone_verdict(
    fam: &PolynomialFamily,
    variant: &FamilyVariant,
    tol: &Tolerance,
) -> Result<FamilyReport> {
    let derivs: Vec<Polynomial> = fam.polys.iter().map(Polynomial::derivative).collect();
    let direction = match first_unordered(fam, &derivs, true, tol) {
        None => Monotonicity::Increasing,
        Some(t_inc) => {
            let decreasing_ok = matches!(variant, FamilyVariant::Plain)
                && first_unordered(fam, &derivs, false, tol).is_none();
            if !decreasing_ok {
                return Err(Error::HypothesisViolatedAt {
                    t: t_inc,
                    hypothesis: "values and derivatives similarly ordered".into(),
                });
            }
            Monotonicity::Decreasing
        }
    };
    check_h(fam, variant, tol)?;

    let sign = match direction {
        Monotonicity::Increasing => 1.0,
        Monotonicity::Decreasing => -1.0,
    };
    let grid = fam.grid();
    let mut values = Vec::with_capacity(grid.len());
    let mut derivatives = Vec::with_capacity(grid.len());
    let mut min_slack = f64::INFINITY;
    for &t in &grid {
        let (g, dg, scale) = exp_sum_at(fam, &derivs, variant, t);
        min_slack = min_slack.min(sign * dg / scale.max(1.0));
        values.push(g);
        derivatives.push(dg);
    }
    for w in values.windows(2) {
        min_slack = min_slack.min(sign * (w[1] - w[0]) / w[0].abs().max(w[1].abs()).max(1.0));
    }
    Ok(FamilyReport {
        direction,
        grid,
        values,
        derivatives,
        min_slack,
        conclusion_holds: min_slack >= -tol.abs_tol.max(tol.rel_tol),
    })
}

/// Endpoints of `D_r = [sqrt(r^2/6), sqrt(2 r^2/3)]`.
pub fn triple_domain(r_squared: f64) -> (f64, f64) {
    ((r_squared / 6.0).sqrt(), (2.0 * r_squared / 3.0).sqrt())
}

/// The unique triple `x >= y >= z` with zero sum and `x^2 + y^2 + z^2 = r^2`
/// whose largest entry is `x`:
/// `y, z = -x/2 ± sqrt(-3x^2/4 + r^2/2)`.
pub fn triple_from_x(r_squared: f64, x: f64, tol: &Tolerance) -> Result<ZeroSumTriple> {
    if !(r_squared > 0.0) {
        return Err(Error::DomainError(format!("r^2 = {r_squared} must be positive")));
    }
    let (lo, hi) = triple_domain(r_squared);
    if !(tol.geq(x, lo) && tol.leq(x, hi)) {
        return Err(Error::OutOfDomain { x, lo, hi });
    }
    let radicand = (-0.75 * x * x + 0.5 * r_squared).max(0.0);
    let root = radicand.sqrt();
    let (y, z) = (-0.5 * x + root, -0.5 * x - root);
    Ok(ZeroSumTriple {
        u: x.max(y),
        v: x.min(y),
        w: z,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneEquivReport {
    pub m: f64,
    pub a: f64,
    pub x: f64,
    pub exp_sum_abc: f64,
    pub exp_sum_xyz: f64,
    /// `sum exp(m abc) <= sum exp(m xyz)` within tolerance.
    pub exp_order: bool,
    /// `a <= x` within tolerance.
    pub leading_order: bool,
    pub biconditional: bool,
    /// `(x - a) * (S_xyz - S_abc)` normalized by the sums; negative beyond
    /// tolerance only when the two orders strictly disagree.
    pub slack: f64,
    /// Both triples are reproduced by [`triple_from_x`] from their largest entry.
    pub parametrization_ok: bool,
}

/// `sum exp(m a_i) <= sum exp(m x_i)  <=>  a <= x` for sorted zero-sum
/// triples with equal sums of squares, `m > 0`.
pub fn exp_sum_monotone_equiv(
    abc: &ZeroSumTriple,
    xyz: &ZeroSumTriple,
    m: f64,
    tol: &Tolerance,
) -> Result<MonotoneEquivReport> {
    if !(m > 0.0) {
        return Err(Error::DomainError(format!("m = {m} must be positive")));
    }
    let (ra, rx) = (abc.sum_squares(), xyz.sum_squares());
    if !tol.eq(ra, rx) {
        return Err(Error::HypothesisViolated(format!(
            "sums of squares differ: {ra} vs {rx}"
        )));
    }
    if ra <= tol.abs_tol {
        return Err(Error::HypothesisViolated("sum of squares is zero".into()));
    }
    let (sa, sx) = (abc.exp_sum(m), xyz.exp_sum(m));
    let (a, x) = (abc.largest(), xyz.largest());
    let exp_order = tol.leq(sa, sx);
    let leading_order = tol.leq(a, x);
    let slack = (x - a) * (sx - sa) / sa.max(sx).max(1.0);

    let near = |t: &ZeroSumTriple| match triple_from_x(ra, t.largest(), tol) {
        Ok(p) => p
            .entries()
            .iter()
            .zip(t.entries())
            .all(|(u, v)| (u - v).abs() <= 1e-6 * ra.sqrt().max(1.0)),
        Err(_) => false,
    };
    Ok(MonotoneEquivReport {
        m,
        a,
        x,
        exp_sum_abc: sa,
        exp_sum_xyz: sx,
        exp_order,
        leading_order,
        biconditional: exp_order == leading_order,
        slack,
        parametrization_ok: near(abc) && near(xyz),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn t3(a: f64, b: f64, c: f64) -> ZeroSumTriple {
        ZeroSumTriple::new(a, b, c, &Tolerance::default()).unwrap()
    }

    fn example_family(lo: f64, hi: f64) -> PolynomialFamily {
        PolynomialFamily::new(
            vec![
                Polynomial(vec![1.0, 0.0, -1.0]),
                Polynomial(vec![-1.0, 1.0]),
                Polynomial(vec![0.0, -1.0, 1.0]),
            ],
            (lo, hi),
            DEFAULT_GRID_POINTS,
        )
        .unwrap()
    }

    #[test]
    fn weak_log_exp_examples() {
        let tol = Tolerance::default();
        let pv = |v: &[f64]| PositiveVector::new(v.to_vec()).unwrap();
        let r = exp_sum_weak_log(&pv(&[2.0, 1.0]), &pv(&[4.0, 0.5]), 1.0, &tol).unwrap();
        assert!(r.hypothesis && r.holds);
        assert_abs_diff_eq!(r.lhs, 10.107, epsilon = 1e-3);
        assert_abs_diff_eq!(r.rhs, 56.247, epsilon = 1e-3);
        let r = exp_sum_weak_log(&pv(&[2.0, 1.0]), &pv(&[2.0, 1.0]), 3.0, &tol).unwrap();
        assert!(r.hypothesis && r.holds && r.lhs == r.rhs);
        assert!(exp_sum_weak_log(&pv(&[1.0]), &pv(&[1.0]), 0.0, &tol).is_err());
        assert!(exp_sum_weak_log(&pv(&[1.0]), &pv(&[1.0, 2.0]), 1.0, &tol).is_err());
    }

    #[test]
    fn triple_rejects_nonzero_sum() {
        assert!(matches!(
            ZeroSumTriple::new(1.0, 1.0, 1.0, &Tolerance::default()),
            Err(Error::NotZeroSum(_))
        ));
        let t = t3(-2.0, 3.0, -1.0);
        assert_eq!(t.entries(), [3.0, -1.0, -2.0]);
    }

    #[test]
    fn cardano_bound_examples() {
        let t = t3(3.0, -1.0, -2.0);
        assert_eq!(t.p(), -7.0);
        assert_abs_diff_eq!(cardano_bound(&t), -3.0 * 9f64.cbrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(cardano_bound(&t), -6.2403, epsilon = 1e-4);
        assert!(t.p() < cardano_bound(&t));
        assert!(t.discriminant() < 0.0);

        let d = t3(2.0, -1.0, -1.0);
        assert_eq!(d.p(), -3.0);
        assert_abs_diff_eq!(cardano_bound(&d), -3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.discriminant(), 0.0, epsilon = 1e-12);
        assert_eq!(t.p(), t.p_from_norm());
    }

    #[test]
    fn cardano_exp_examples() {
        let tol = Tolerance::default();
        let t = t3(3.0, -1.0, -2.0);
        let r = cardano_exp_inequality(&t, &t, &tol).unwrap();
        let lhs = (-3f64).exp() + 2f64.exp() + (-6f64).exp();
        assert_abs_diff_eq!(r.u1_lhs, lhs, epsilon = 1e-12);
        assert_abs_diff_eq!(r.u1_lhs, 7.4418, epsilon = 1e-3);
        let rhs = (9f64.exp() + 1f64.exp() + 4f64.exp()) * (-3.0 * 9f64.cbrt()).exp();
        assert_abs_diff_eq!(r.u1_rhs, rhs, epsilon = 1e-9);
        assert_abs_diff_eq!(r.u1_rhs, 15.9076, epsilon = 1e-3);
        assert!(r.strict);
        assert_eq!(r.u1_slack, r.u2_slack);

        // Rescale (1, 0.5, -1.5) to the same sum of squares, 14.
        let s = (14.0f64 / 3.5).sqrt();
        let abc = t3(s, 0.5 * s, -1.5 * s);
        assert_abs_diff_eq!(abc.sum_squares(), 14.0, epsilon = 1e-12);
        let r = cardano_exp_inequality(&t, &abc, &tol).unwrap();
        assert!(r.strict && r.u1_slack > 0.0 && r.u2_slack > 0.0);
    }

    #[test]
    fn cardano_exp_errors() {
        let tol = Tolerance::default();
        assert!(matches!(
            cardano_exp_inequality(&t3(3.0, -1.0, -2.0), &t3(1.0, 0.0, -1.0), &tol),
            Err(Error::SumOfSquaresMismatch { .. })
        ));
        let d = t3(2.0, -1.0, -1.0);
        assert!(matches!(
            cardano_exp_inequality(&d, &d, &tol),
            Err(Error::DegenerateTriple(_))
        ));
    }

    #[test]
    fn example_family_monotonicity() {
        let tol = Tolerance::default();
        let up = family_monotone_verdict(&example_family(1.0, 4.0), &FamilyVariant::Plain, &tol)
            .unwrap();
        assert_eq!(up.direction, Monotonicity::Increasing);
        assert!(up.conclusion_holds);
        let down =
            family_monotone_verdict(&example_family(0.25, 1.0), &FamilyVariant::Plain, &tol)
                .unwrap();
        assert_eq!(down.direction, Monotonicity::Decreasing);
        assert!(down.conclusion_holds);
        assert!(matches!(
            family_monotone_verdict(&example_family(0.0, 4.0), &FamilyVariant::Plain, &tol),
            Err(Error::HypothesisViolatedAt { .. })
        ));
    }

    #[test]
    fn product_and_composed_variants() {
        let tol = Tolerance::default();
        let fam = example_family(1.0, 4.0);
        let h = FamilyVariant::ProductH(Polynomial(vec![0.0, 2.0]));
        let r = family_monotone_verdict(&fam, &h, &tol).unwrap();
        assert_eq!(r.direction, Monotonicity::Increasing);
        assert!(r.conclusion_holds);
        let plain_scaled =
            family_monotone_verdict(&fam.scaled(2.0).unwrap(), &FamilyVariant::Plain, &tol)
                .unwrap();
        assert_eq!(plain_scaled.direction, r.direction);

        // A constant h reproduces the plain variant on scaled coefficients.
        let c = family_monotone_verdict(&fam, &FamilyVariant::ProductH(Polynomial(vec![2.0])), &tol)
            .unwrap();
        for (u, v) in c.values.iter().zip(&plain_scaled.values) {
            assert_abs_diff_eq!(u, v, epsilon = 1e-9 * v.abs());
        }

        let convex = FamilyVariant::ComposedH(Polynomial(vec![0.0, 40.0, 1.0]));
        let r = family_monotone_verdict(&fam, &convex, &tol).unwrap();
        assert!(r.conclusion_holds);

        let bad = FamilyVariant::ComposedH(Polynomial(vec![0.0, 0.0, -1.0]));
        assert!(matches!(
            family_monotone_verdict(&fam, &bad, &tol),
            Err(Error::HypothesisViolatedAt { .. })
        ));
        let negative_h = FamilyVariant::ProductH(Polynomial(vec![-1.0, 0.1]));
        assert!(family_monotone_verdict(&fam, &negative_h, &tol).is_err());
    }

    #[test]
    fn constant_family() {
        let fam = PolynomialFamily::new(vec![Polynomial(vec![0.0]); 3], (0.0, 1.0), 9).unwrap();
        let r = family_monotone_verdict(&fam, &FamilyVariant::Plain, &Tolerance::default()).unwrap();
        assert!(r.values.iter().all(|v| *v == 3.0));
        assert!(r.conclusion_holds);
    }

    #[test]
    fn family_rejects_nonzero_sum() {
        assert!(PolynomialFamily::new(
            vec![Polynomial(vec![1.0]), Polynomial(vec![0.0, 1.0])],
            (0.0, 1.0),
            5
        )
        .is_err());
    }

    #[test]
    fn triple_from_x_examples() {
        let tol = Tolerance::default();
        assert_eq!(triple_from_x(6.0, 2.0, &tol).unwrap().entries(), [2.0, -1.0, -1.0]);
        assert_eq!(triple_from_x(6.0, 1.0, &tol).unwrap().entries(), [1.0, 1.0, -2.0]);
        assert_eq!(triple_from_x(14.0, 3.0, &tol).unwrap().entries(), [3.0, -1.0, -2.0]);
        assert!(matches!(
            triple_from_x(6.0, 2.5, &tol),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(triple_from_x(6.0, 0.5, &tol).is_err());
    }

    #[test]
    fn monotone_equiv_examples() {
        let tol = Tolerance::default();
        let abc = t3(1.0, 1.0, -2.0);
        let xyz = t3(2.0, -1.0, -1.0);
        let r = exp_sum_monotone_equiv(&abc, &xyz, 1.0, &tol).unwrap();
        assert!(r.leading_order && r.exp_order && r.biconditional && r.parametrization_ok);
        assert_abs_diff_eq!(r.exp_sum_abc, 2.0 * 1f64.exp() + (-2f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.exp_sum_abc, 5.572, epsilon = 1e-3);
        assert_abs_diff_eq!(r.exp_sum_xyz, 8.125, epsilon = 1e-3);
        let back = exp_sum_monotone_equiv(&xyz, &abc, 1.0, &tol).unwrap();
        assert!(!back.leading_order && !back.exp_order && back.biconditional);
        let same = exp_sum_monotone_equiv(&abc, &abc, 1.0, &tol).unwrap();
        assert!(same.biconditional && same.exp_sum_abc == same.exp_sum_xyz);
        assert!(exp_sum_monotone_equiv(&abc, &t3(3.0, -1.0, -2.0), 1.0, &tol).is_err());
    }

    #[test]
    fn monotone_equiv_sweep() {
        let tol = Tolerance::default();
        let abc = t3(1.0, 1.0, -2.0);
        let (lo, hi) = triple_domain(6.0);
        for j in 0..64 {
            let x = lo + (hi - lo) * j as f64 / 63.0;
            let xyz = triple_from_x(6.0, x, &tol).unwrap();
            let r = exp_sum_monotone_equiv(&abc, &xyz, 1.0, &tol).unwrap();
            assert!(r.biconditional, "x = {x}");
            assert!(r.parametrization_ok && r.slack >= 0.0);
        }
    }

    fn zero_sum() -> impl Strategy<Value = ZeroSumTriple> {
        (-5.0f64..5.0, -5.0f64..5.0).prop_map(|(a, b)| {
            ZeroSumTriple::new(a, b, -(a + b), &Tolerance::default()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn p_equals_minus_half_norm(t in zero_sum()) {
            let scale = t.sum_squares().max(1.0);
            prop_assert!((t.p() - t.p_from_norm()).abs() <= 1e-12 * scale);
        }

        #[test]
        fn distinct_triples_lie_below_bound(t in zero_sum()) {
            prop_assume!(t.is_distinct(&Tolerance::uniform(1e-3).unwrap()));
            prop_assert!(t.p() < cardano_bound(&t));
        }

        #[test]
        fn parametrized_triples_solve_the_cubic(r2 in 0.1f64..50.0, s in 0.0f64..=1.0) {
            let (lo, hi) = triple_domain(r2);
            let x = lo + s * (hi - lo);
            let t = triple_from_x(r2, x, &Tolerance::default()).unwrap();
            prop_assert!((t.sum_squares() - r2).abs() <= 1e-12 * r2);
            let [u, v, w] = t.entries();
            prop_assert!(u >= v && v >= w);
            let (p, q) = (t.p(), t.product());
            for root in t.entries() {
                prop_assert!((root.powi(3) + p * root - q).abs() <= 1e-9 * r2.powf(1.5).max(1.0));
            }
        }
    }

    #[test]
    fn slack_vanishes_as_entries_merge() {
        // (1 + e, 1 - e, -2) merges into (1, 1, -2) as e -> 0.
        let mut last = f64::INFINITY;
        for k in 1..=8 {
            let e = 10f64.powi(-k);
            let t = t3(1.0 + e, 1.0 - e, -2.0);
            let gap = cardano_bound(&t) - t.p();
            assert!(gap > 0.0 && gap < last);
            last = gap;
        }
        assert!(last < 1e-12);
    }
}
