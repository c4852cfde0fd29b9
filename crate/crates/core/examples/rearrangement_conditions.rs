//! Pairing search and product conditions for a few small instances.

use logineq::ssli::{conjecture_verdict, thm32_verdict, PairingOptions, SsliInstance};
use logineq::sympoly::elementary_symmetric_all;
use logineq::{PositiveVector, Result, Tolerance};

fn show(a: &[i64], b: &[i64]) -> Result<()> {
    let inst = SsliInstance::new(PositiveVector::from_integers(a)?, PositiveVector::from_integers(b)?)?;
    let tol = Tolerance::default();
    let ea = elementary_symmetric_all(inst.a());
    let eb = elementary_symmetric_all(inst.b());
    println!("a = {a:?}, b = {b:?}");
    println!("  e(a) = {:?}, e(b) = {:?}", ea.values(), eb.values());
    let conj = conjecture_verdict(&inst, &tol);
    println!("  conjecture hypothesis: {:?}, slack {:.6}", conj.hypothesis, conj.slack);
    let rep = thm32_verdict(&inst, &PairingOptions::default())?;
    if rep.pairing.found {
        println!("  pairing ratios {:?}", rep.pairing.ratios);
        println!("  pairing products {:?}", rep.pairing.products);
    } else {
        println!("  no pairing (exhaustive: {})", rep.pairing.exhaustive);
    }
    println!("  condition a: {}, condition b: {}", rep.condition_a, rep.condition_b);
    println!("  rearrangement verdict: {:?}, holds {}", rep.verdict.hypothesis, rep.verdict.holds);
    Ok(())
}

fn main() -> Result<()> {
    show(&[14, 2, 10], &[20, 2, 7])?;
    show(&[6, 5, 7], &[10, 8, 3])?;
    show(&[2, 2, 2], &[4, 2, 1])
}
