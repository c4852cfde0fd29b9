//! Majorization alone does not fix the direction of the squared-log sums;
//! the powered variant needs weak majorization of the entries.

use logineq::ssli::{powered_logs_verdict, remark35_boundary};
use logineq::{PositiveVector, Result, Tolerance};

fn main() -> Result<()> {
    let tol = Tolerance::default();
    for (a, b) in [([3.0, 2.0, 2.0], [4.0, 2.0, 1.0]), ([4.0, 4.0, 4.0], [10.0, 1.0, 1.0])] {
        let r = remark35_boundary(&PositiveVector::new(a.to_vec())?, &PositiveVector::new(b.to_vec())?, &tol)?;
        println!(
            "{a:?} vs {b:?}: majorized {} lhs {:.4} rhs {:.4} direction {:?}",
            r.majorized, r.lhs, r.rhs, r.direction
        );
    }
    let e = std::f64::consts::E;
    let cases = [
        (vec![3.0, 3.0], vec![2.0, 4.0]),
        (vec![e * e, e * e], vec![e, e * e * e]),
    ];
    for p in [-1.0, -2.0] {
        for (a, b) in &cases {
            let a = PositiveVector::new(a.clone())?;
            let b = PositiveVector::new(b.clone())?;
            match powered_logs_verdict(&a, &b, p, &tol) {
                Ok(v) => println!(
                    "p = {p}: {:?} hypothesis {:?} lhs {:.4} rhs {:.4} holds {}",
                    a.entries(), v.hypothesis, v.lhs, v.rhs, v.holds
                ),
                Err(err) => println!("p = {p}: {:?} rejected: {err}", a.entries()),
            }
        }
    }
    Ok(())
}
