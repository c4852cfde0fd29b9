//! Exponential inequalities for zero-sum triples.

use logineq::expineq::{cardano_bound, cardano_exp_inequality, exp_sum_monotone_equiv, triple_from_x, ZeroSumTriple};
use logineq::{Result, Tolerance};

fn main() -> Result<()> {
    let tol = Tolerance::default();
    let t = ZeroSumTriple::new(3.0, -1.0, -2.0, &tol)?;
    println!("triple {:?}: p = {}, discriminant {}", t.entries(), t.p(), t.discriminant());
    println!("  bound {:.6}", cardano_bound(&t));
    let r = cardano_exp_inequality(&t, &t, &tol)?;
    println!("  u1: {:.4} <= {:.4} (slack {:.4})", r.u1_lhs, r.u1_rhs, r.u1_slack);
    println!("  u2: {:.4} <= {:.4} (slack {:.4})", r.u2_lhs, r.u2_rhs, r.u2_slack);

    let r2 = 6.0;
    for (xa, xx) in [(1.0, 2.0), (1.5, 1.2), (1.9, 1.1)] {
        let abc = triple_from_x(r2, xa, &tol)?;
        let xyz = triple_from_x(r2, xx, &tol)?;
        for m in [1.0, 3.0] {
            let rep = exp_sum_monotone_equiv(&abc, &xyz, m, &tol)?;
            println!(
                "  m = {m}: abc {:?} xyz {:?} exp order {:?} biconditional {}",
                abc.entries(), xyz.entries(), rep.exp_order, rep.biconditional
            );
        }
    }
    Ok(())
}
