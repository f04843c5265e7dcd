//! Beam squint on a 1 m aperture: gain spread over the band of the
//! narrowband profile against the wideband one.

use risbeam::channel::{band_frequencies, beampattern};
use risbeam::design::design_wideband_profile;
use risbeam::geometry::ElementGrid;
use risbeam::ScenarioConfig;

/// Returns the narrowband and wideband in-band gain spreads in dB.
pub fn run_example() -> risbeam::Result<(f64, f64)> {
    let cfg = ScenarioConfig::paper_default().with_l_dt(10.0);
    let grid = ElementGrid::build(&cfg)?;
    let design = design_wideband_profile(&cfg, &grid)?;
    let freqs = band_frequencies(&cfg);
    let (lo, hi) = cfg.band();
    let nb = beampattern(&grid, &design.narrowband, &freqs)?;
    let wb = beampattern(&grid, &design.wideband, &freqs)?;
    let spreads = (nb.spread_db(lo, hi), wb.spread_db(lo, hi));
    println!("narrowband spread {:.2} dB, wideband spread {:.2} dB", spreads.0, spreads.1);
    for (i, f) in freqs.iter().enumerate().step_by(40) {
        println!(
            "{:.2} GHz  nb {:7.2} dB  wb {:7.2} dB",
            f / 1e9,
            nb.gain_db()[i],
            wb.gain_db()[i]
        );
    }
    Ok(spreads)
}

fn main() -> risbeam::Result<()> {
    run_example().map(|_| ())
}
