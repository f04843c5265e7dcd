//! Runs every brute-force check on the desk aperture and prints the metrics.

use risbeam::config::Profile;
use risbeam::oracle::{run_validation, Thresholds, ValidationReport};
use risbeam::ScenarioConfig;

pub fn run_example() -> risbeam::Result<ValidationReport> {
    let cfg = ScenarioConfig::paper_default().with_profile(Profile::Desk);
    let report = run_validation(&cfg, &Thresholds::default())?;
    for c in &report.checks {
        let tag = if c.pass { "ok  " } else { "FAIL" };
        println!("{tag} {:<28} {:.3e} (<= {:.1e})", c.name, c.metric, c.threshold);
    }
    Ok(report)
}

fn main() -> risbeam::Result<()> {
    run_example().map(|_| ())
}
