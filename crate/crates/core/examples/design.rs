//! Designs the narrowband and wideband phase profiles for the desk aperture
//! and prints the path-sum range and the designed curves at a few points.

use risbeam::config::Profile;
use risbeam::design::{design_wideband_profile, WidebandDesign};
use risbeam::geometry::ElementGrid;
use risbeam::ScenarioConfig;

pub fn run_example() -> risbeam::Result<WidebandDesign> {
    let cfg = ScenarioConfig::paper_default().with_profile(Profile::Desk);
    let grid = ElementGrid::build(&cfg)?;
    let design = design_wideband_profile(&cfg, &grid)?;
    let b = design.bounds;
    println!("{} elements, l in [{:.4}, {:.4}] m", grid.len(), b.l_min, b.l_max);
    for l in design.amplitude.l_grid().into_iter().step_by(1024) {
        println!(
            "l = {l:.4} m  A = {:.4}  phi' = {:+.3} rad/m  phi = {:.3} rad",
            design.amplitude.at(l),
            design.inst_freq.at(l),
            design.phase.at(l)
        );
    }
    Ok(design)
}

fn main() -> risbeam::Result<()> {
    run_example().map(|_| ())
}
