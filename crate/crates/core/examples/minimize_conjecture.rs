//! Minimize the squared-log sum over the region `e_k(b) >= e_k(a)`.

use logineq::optimize::{minimize_ssli, OptimizerConfig};
use logineq::{PositiveVector, Result};

fn main() -> Result<()> {
    let cfg = OptimizerConfig { seed: 5, ..OptimizerConfig::default() };
    for a in [vec![2.0, 2.0, 2.0], vec![14.0, 2.0, 10.0], vec![0.5, 3.0, 1.5, 7.0]] {
        let a = PositiveVector::new(a)?;
        let r = minimize_ssli(&a, &cfg)?;
        println!(
            "a = {:?}: best {:.6} target {:.6} gap {:.2e} residual {:.1e}",
            a.entries(), r.best_value, r.target_value, r.gap, r.feasibility_residual
        );
        println!("  b = {:?}", r.best_b.entries());
    }
    Ok(())
}
