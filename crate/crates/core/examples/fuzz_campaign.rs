//! Property campaigns over every registered inequality.

use logineq::fuzz::{run_campaign, FuzzConfig, TheoremId};
use logineq::Result;

fn main() -> Result<()> {
    let cfg = FuzzConfig { trials: 2000, seed: 42, ..FuzzConfig::default() };
    for id in TheoremId::ALL {
        let rep = run_campaign(id, &cfg)?;
        let min = if rep.min_slack.is_finite() { format!("{:.3e}", rep.min_slack) } else { "-".into() };
        println!(
            "{:<10} {:?} violations {:>3} misses {:>3} min slack {min}",
            id.as_str(), rep.severity, rep.violations.len(), rep.hypothesis_misses
        );
    }
    Ok(())
}
