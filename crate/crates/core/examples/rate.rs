//! Achievable rate of both profiles over a small grid of target positions.

use risbeam::evaluation::{sweep_rates, SweepRow};
use risbeam::ScenarioConfig;

pub fn run_example() -> risbeam::Result<Vec<SweepRow>> {
    let base = ScenarioConfig::paper_default();
    let rows = sweep_rates(&base, &[1.0, 10.0], &[0.0, 20.0])?;
    println!("l_dt [m]  gamma_c [deg]  narrowband  wideband  increment");
    for r in &rows {
        println!(
            "{:8.1}  {:13.1}  {:10.3}  {:8.3}  {:8.2} %",
            r.l_dt_m, r.gamma_c_deg, r.rate_nb, r.rate_wb, r.increment_pct
        );
    }
    Ok(rows)
}

fn main() -> risbeam::Result<()> {
    run_example().map(|_| ())
}
