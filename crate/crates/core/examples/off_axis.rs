//! Target off boresight: the same design applied at a 30 degree tilt, where
//! the constant path-sum conics are clipped by the aperture rim.

use risbeam::channel::{band_frequencies, beampattern};
use risbeam::design::design_wideband_profile;
use risbeam::geometry::{derive_gamma_c, gamma_from_gamma_c, ElementGrid};
use risbeam::ScenarioConfig;

/// Returns the narrowband and wideband in-band gain spreads in dB.
pub fn run_example() -> risbeam::Result<(f64, f64)> {
    let cfg = ScenarioConfig::paper_default().with_gamma_c_deg(30.0);
    let gamma_c = derive_gamma_c(&cfg)?;
    let gamma = gamma_from_gamma_c(cfg.l_tx_m, cfg.l_dt_m, gamma_c)?;
    println!("gamma_c = {:.2} deg, target angle from the aperture centre = {:.2} deg", gamma_c.to_degrees(), gamma.to_degrees());
    let grid = ElementGrid::build(&cfg)?;
    let design = design_wideband_profile(&cfg, &grid)?;
    let b = design.bounds;
    println!("l in [{:.4}, {:.4}] m, minimizer inside aperture: {}", b.l_min, b.l_max, b.min_inside);
    let freqs = band_frequencies(&cfg);
    let (lo, hi) = cfg.band();
    let nb = beampattern(&grid, &design.narrowband, &freqs)?.spread_db(lo, hi);
    let wb = beampattern(&grid, &design.wideband, &freqs)?.spread_db(lo, hi);
    println!("narrowband spread {nb:.2} dB, wideband spread {wb:.2} dB");
    Ok((nb, wb))
}

fn main() -> risbeam::Result<()> {
    run_example().map(|_| ())
}
