//! Elementary symmetric polynomials `e_1, ..., e_n`, their gradients, and a
//! cross-check against the coefficients of `prod (t - x_i)`.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::base::PositiveVector;

/// `(e_1(x), ..., e_n(x))`, in floating point and, when the input carries an
/// exact mirror, as exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricProfile {
    values: Vec<f64>,
    exact: Option<Vec<BigRational>>,
}

impl SymmetricProfile {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn exact(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    /// `e_k` for `1 <= k <= n`.
    pub fn e(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    pub fn e_exact(&self, k: usize) -> Option<&BigRational> {
        self.exact.as_ref().map(|ex| &ex[k - 1])
    }

    /// `e_n`, the product of the entries.
    pub fn top(&self) -> f64 {
        *self.values.last().expect("profile of a nonempty vector")
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `e_1..e_n` of a raw slice by the incremental recurrence
/// `e_k <- e_k + x_i e_{k-1}`, updated from high `k` to low.
pub fn elementary_symmetric(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut e = vec![0.0; n + 1];
    e[0] = 1.0;
    for (i, &xi) in x.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] += xi * e[k - 1];
        }
    }
    e.remove(0);
    e
}

pub fn elementary_symmetric_exact(x: &[BigRational]) -> Vec<BigRational> {
    let n = x.len();
    let mut e = vec![BigRational::zero(); n + 1];
    e[0] = BigRational::one();
    for (i, xi) in x.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            let term = xi * &e[k - 1];
            e[k] += term;
        }
    }
    e.remove(0);
    e
}

pub fn elementary_symmetric_all(x: &PositiveVector) -> SymmetricProfile {
    SymmetricProfile {
        values: elementary_symmetric(x.entries()),
        exact: x.exact().map(elementary_symmetric_exact),
    }
}

/// `partials[k - 1][i] = d e_k / d x_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricGradient {
    pub partials: Vec<Vec<f64>>,
}

/// Leave-one-out evaluation: `d e_k / d x_i = e_{k-1}(x without x_i)`.
pub fn symmetric_gradient(x: &[f64]) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut partials = vec![vec![0.0; n]; n];
    let mut rest = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n {
        rest.clear();
        rest.extend(x.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v));
        let e_rest = elementary_symmetric(&rest);
        partials[0][i] = 1.0;
        for k in 2..=n {
            partials[k - 1][i] = e_rest[k - 2];
        }
    }
    partials
}

pub fn elementary_symmetric_gradient(x: &PositiveVector) -> SymmetricGradient {
    SymmetricGradient {
        partials: symmetric_gradient(x.entries()),
    }
}

/// Expands `prod (t - x_i)` by coefficient convolution and returns the largest
/// relative deviation between `(-1)^k * coeff_k` and `e_k`. Zero in exact mode
/// when the two agree.
pub fn vieta_roundtrip(x: &PositiveVector) -> f64 {
    let profile = elementary_symmetric_all(x);
    if let Some(ex) = x.exact() {
        let mut coeffs = vec![BigRational::one()];
        for xi in ex {
            let mut next = coeffs.clone();
            next.push(BigRational::zero());
            for j in 1..next.len() {
                next[j] -= xi * &coeffs[j - 1];
            }
            coeffs = next;
        }
        let e = profile.exact().expect("exact input yields exact profile");
        return (1..coeffs.len())
            .map(|k| {
                let signed = if k % 2 == 0 {
                    coeffs[k].clone()
                } else {
                    -coeffs[k].clone()
                };
                let dev = ((&signed - &e[k - 1]) / &e[k - 1]).abs();
                dev.to_f64().unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max);
    }
    let mut coeffs = vec![1.0];
    for &xi in x.entries() {
        let mut next = coeffs.clone();
        next.push(0.0);
        for j in 1..next.len() {
            next[j] -= xi * coeffs[j - 1];
        }
        coeffs = next;
    }
    (1..coeffs.len())
        .map(|k| {
            let signed = if k % 2 == 0 { coeffs[k] } else { -coeffs[k] };
            let ek = profile.e(k);
            (signed - ek).abs() / ek.abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::Tolerance;
    use num_bigint::BigInt;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn binom(n: usize, k: usize) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn ones_give_binomials() {
        for n in 1..=12 {
            let e = elementary_symmetric(&vec![1.0; n]);
            for k in 1..=n {
                assert_eq!(e[k - 1], binom(n, k).round());
            }
        }
    }

    #[test]
    fn worked_profiles() {
        let a = PositiveVector::from_integers(&[14, 2, 10]).unwrap();
        let b = PositiveVector::from_integers(&[20, 2, 7]).unwrap();
        let pa = elementary_symmetric_all(&a);
        let pb = elementary_symmetric_all(&b);
        assert_eq!(pa.values(), &[26.0, 188.0, 280.0]);
        assert_eq!(pb.values(), &[29.0, 194.0, 280.0]);
        assert_eq!(pa.exact().unwrap(), &[int(26), int(188), int(280)]);
        let c = PositiveVector::from_integers(&[6, 5, 7]).unwrap();
        let d = PositiveVector::from_integers(&[10, 8, 3]).unwrap();
        assert_eq!(elementary_symmetric_all(&c).e_exact(3), Some(&int(210)));
        assert_eq!(elementary_symmetric_all(&d).e_exact(3), Some(&int(240)));
    }

    #[test]
    fn gradient_small_cases() {
        let g = symmetric_gradient(&[2.0, 3.0]);
        assert_eq!(g[0], vec![1.0, 1.0]);
        assert_eq!(g[1], vec![3.0, 2.0]);
        let g = symmetric_gradient(&[1.0, 1.0, 1.0]);
        assert_eq!(g[1], vec![2.0, 2.0, 2.0]);
        assert_eq!(g[2], vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn gradient_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let x: Vec<f64> = (0..5).map(|_| rng.random_range(0.2..5.0)).collect();
            let g = symmetric_gradient(&x);
            let h = 1e-6;
            for i in 0..5 {
                let mut up = x.clone();
                let mut down = x.clone();
                up[i] += h;
                down[i] -= h;
                let eu = elementary_symmetric(&up);
                let ed = elementary_symmetric(&down);
                for k in 0..5 {
                    let fd = (eu[k] - ed[k]) / (2.0 * h);
                    let rel = (fd - g[k][i]).abs() / g[k][i].abs().max(1e-12);
                    assert!(rel <= 1e-5, "k={k} i={i} fd={fd} an={}", g[k][i]);
                }
            }
        }
    }

    #[test]
    fn vieta_examples() {
        let v = PositiveVector::from_integers(&[2, 2, 2]).unwrap();
        assert_eq!(vieta_roundtrip(&v), 0.0);
        let v = PositiveVector::new(vec![4.0, 2.0, 1.0]).unwrap();
        assert_eq!(elementary_symmetric_all(&v).values(), &[7.0, 14.0, 8.0]);
        assert_eq!(vieta_roundtrip(&v), 0.0);
        let v = PositiveVector::new(vec![3.0, 2.0, 2.0]).unwrap();
        assert_eq!(elementary_symmetric_all(&v).values(), &[7.0, 16.0, 12.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = rng.random_range(1..=12);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
            assert!(vieta_roundtrip(&PositiveVector::new(x).unwrap()) <= 1e-8);
        }
    }

    #[test]
    fn top_is_product() {
        let x = [1.5, 2.25, 0.75, 4.0];
        let e = elementary_symmetric(&x);
        let prod: f64 = x.iter().product();
        assert!(Tolerance::default().eq(e[3], prod));
        assert_eq!(e[0], x.iter().sum::<f64>());
    }

    fn positive_vec() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec((-3.0f64..3.0).prop_map(f64::exp), 1..10)
    }

    proptest! {
        #[test]
        fn exact_permutation_invariance(v in prop::collection::vec(1i64..50, 1..8), seed in any::<u64>()) {
            let mut shuffled = v.clone();
            shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let a = elementary_symmetric_all(&PositiveVector::from_integers(&v).unwrap());
            let b = elementary_symmetric_all(&PositiveVector::from_integers(&shuffled).unwrap());
            prop_assert_eq!(a.exact(), b.exact());
        }

        #[test]
        fn float_permutation_invariance(v in positive_vec(), seed in any::<u64>()) {
            let mut shuffled = v.clone();
            shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let tol = Tolerance::default();
            for (x, y) in elementary_symmetric(&v).iter().zip(elementary_symmetric(&shuffled)) {
                prop_assert!(tol.eq(*x, y));
            }
        }

        #[test]
        fn positive_profile_invariants(v in positive_vec()) {
            let e = elementary_symmetric(&v);
            prop_assert!(e.iter().all(|x| *x > 0.0));
            let tol = Tolerance::default();
            prop_assert!(tol.eq(e[0], v.iter().sum()));
            prop_assert!(tol.eq(*e.last().unwrap(), v.iter().product()));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn monotone_in_each_entry(
            pairs in prop::collection::vec(((-3.0f64..3.0), (0.0f64..2.0)), 1..10)
        ) {
            let x: Vec<f64> = pairs.iter().map(|p| p.0.exp()).collect();
            let y: Vec<f64> = pairs.iter().map(|p| (p.0 + p.1).exp()).collect();
            let tol = Tolerance::default();
            for (ex, ey) in elementary_symmetric(&x).iter().zip(elementary_symmetric(&y)) {
                prop_assert!(tol.leq(*ex, ey));
            }
        }
    }
}
