//! Delay resolution of an LFM pulse reflected by the 1 m aperture with each
//! profile.

use risbeam::evaluation::{evaluate_ambiguity, AmbiguityReport};
use risbeam::ScenarioConfig;

pub fn run_example() -> risbeam::Result<AmbiguityReport> {
    let cfg = ScenarioConfig::paper_default();
    let run = evaluate_ambiguity(&cfg)?;
    let r = &run.report;
    println!("time-bandwidth product {:.0}", r.time_bandwidth);
    println!("LFM         {:.3} ns  {:.2} cm", r.width_lfm_s * 1e9, r.resolution_lfm_m * 100.0);
    println!("narrowband  {:.3} ns  {:.2} cm", r.width_narrowband_s * 1e9, r.resolution_narrowband_m * 100.0);
    println!("wideband    {:.3} ns  {:.2} cm", r.width_wideband_s * 1e9, r.resolution_wideband_m * 100.0);
    println!("narrowband / wideband resolution ratio {:.2}", r.resolution_ratio);
    Ok(run.report)
}

fn main() -> risbeam::Result<()> {
    run_example().map(|_| ())
}
