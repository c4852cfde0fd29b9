//! Monotonicity of exponential sums along a polynomial family.

use logineq::expineq::{family_monotone_verdict, FamilyVariant, Polynomial, PolynomialFamily, DEFAULT_GRID_POINTS};
use logineq::{Result, Tolerance};

fn main() -> Result<()> {
    let tol = Tolerance::default();
    let polys = vec![
        Polynomial(vec![1.0, 0.0, -1.0]),
        Polynomial(vec![-1.0, 1.0]),
        Polynomial(vec![0.0, -1.0, 1.0]),
    ];
    for interval in [(1.0, 4.0), (0.25, 1.0)] {
        let fam = PolynomialFamily::new(polys.clone(), interval, DEFAULT_GRID_POINTS)?;
        for variant in [
            FamilyVariant::Plain,
            FamilyVariant::ProductH(Polynomial(vec![1.0, 1.0])),
            FamilyVariant::ComposedH(Polynomial(vec![0.0, 40.0, 1.0])),
        ] {
            match family_monotone_verdict(&fam, &variant, &tol) {
                Ok(r) => println!(
                    "{interval:?} {variant:?}: {:?}, min slack {:.3e}, holds {}",
                    r.direction, r.min_slack, r.conclusion_holds
                ),
                Err(err) => println!("{interval:?} {variant:?}: {err}"),
            }
        }
    }
    Ok(())
}
