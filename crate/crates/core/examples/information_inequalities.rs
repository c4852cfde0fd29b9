//! Log-sum type inequalities and the equivalent forms of Gibbs' inequality.

use logineq::infoineq::{
    generalized_information_gap, generalized_log_sum_gap, gibbs_forms, kl_divergence,
    stronger_log_sum_gap, ProbabilityVector, ShiftSet, DEFAULT_GIBBS_SAMPLES,
};
use logineq::{PositiveVector, Result, Tolerance};

fn main() -> Result<()> {
    let tol = Tolerance::default();
    let a = PositiveVector::new(vec![1.0, 3.0])?;
    let b = PositiveVector::new(vec![2.0, 2.0])?;
    for k in [0.0, 1.0, 5.0] {
        println!("stronger log-sum gap, k = {k}: {:.6}", stronger_log_sum_gap(&a, &b, k)?);
    }
    let ks = ShiftSet::new(vec![0.0, 1.0])?;
    println!("generalized log-sum gap: {:.6}", generalized_log_sum_gap(&a, &b, &ks)?);

    let p = ProbabilityVector::new(vec![0.5, 0.5], &tol)?;
    let q = ProbabilityVector::new(vec![0.25, 0.75], &tol)?;
    println!("generalized information gap: {:.6}", generalized_information_gap(&p, &q, &ks)?);
    println!("kl(p, q) = {:.6}", kl_divergence(&p, &q)?);
    let g = gibbs_forms(&p, &q, DEFAULT_GIBBS_SAMPLES, 1, &tol)?;
    println!("gibbs verdicts {:?}, consistent {}", g.verdicts, g.consistent);
    println!("sampled sup {:.6} vs geometric mean {:.6}", g.sampled_sup, g.geometric_mean_b);
    Ok(())
}
