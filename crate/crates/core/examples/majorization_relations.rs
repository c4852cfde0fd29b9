//! Majorization relations against the convex-function characterization.

use logineq::majorization::{hlp_convex_test, log_implications_check, majorize, Relation};
use logineq::{PositiveVector, Result, Tolerance};

fn main() -> Result<()> {
    let tol = Tolerance::default();
    let pairs = [
        (vec![3.0, 2.0, 2.0], vec![4.0, 2.0, 1.0]),
        (vec![4.0, 4.0, 4.0], vec![10.0, 1.0, 1.0]),
        (vec![2.0, 2.0, 2.0], vec![1.0, 1.0, 1.0]),
        (vec![1.0, 5.0], vec![2.0, 3.0]),
    ];
    for (x, y) in pairs {
        let (px, py) = (PositiveVector::new(x.clone())?, PositiveVector::new(y.clone())?);
        let v = majorize(&px, &py, &tol)?;
        println!("{x:?} vs {y:?}");
        println!(
            "  strong {} weak_below {} weak_above {} | log: {} {} {}",
            v.strong, v.weak_below, v.weak_above, v.log_strong, v.log_weak_below, v.log_weak_above
        );
        for rel in [Relation::Strong, Relation::WeakBelow, Relation::WeakAbove] {
            let hlp = hlp_convex_test(&px, &py, rel, &tol)?;
            println!("  {rel:?}: prefix {} convex {}", v.holds(rel), hlp);
        }
        println!("  log implications consistent: {}", log_implications_check(&px, &py, &tol)?);
    }
    Ok(())
}
