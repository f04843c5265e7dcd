use std::io::Write;

use serde::Serialize;

use crate::channel::{beampattern, Beampattern};
use crate::config::ScenarioConfig;
use crate::design::design_wideband_profile;
use crate::error::{Error, Result};
use crate::geometry::ElementGrid;
use crate::numeric::linspace;

/// Planck constant as used by the thermal noise model (J·s).
pub const PLANCK: f64 = 6.625e-34;
/// Boltzmann constant (J/K).
pub const BOLTZMANN: f64 = 1.3806e-23;

/// Thermal noise power spectral density `hf / (exp(hf/kT) − 1)` in W/Hz.
pub fn noise_psd(f: f64, temperature: f64) -> f64 {
    let kt = BOLTZMANN * temperature;
    let x = PLANCK * f / kt;
    kt * x / x.exp_m1()
}

/// `n_sub` equally spaced subcarrier frequencies over the band, edges included.
pub fn subcarrier_frequencies(cfg: &ScenarioConfig) -> Vec<f64> {
    let (lo, hi) = cfg.band();
    linspace(lo, hi, cfg.n_sub)
}

fn snr_per_subcarrier(bp: &Beampattern, cfg: &ScenarioConfig) -> Result<Vec<f64>> {
    if bp.freqs.len() != cfg.n_sub {
        return Err(Error::Contract(format!(
            "beampattern has {} frequencies, expected {} subcarriers",
            bp.freqs.len(),
            cfg.n_sub
        )));
    }
    let delta_sub = cfg.bandwidth_hz / cfg.n_sub as f64;
    Ok(bp
        .freqs
        .iter()
        .zip(&bp.gains)
        .map(|(&f, g)| cfg.tx_power_w * g.norm_sqr() / (noise_psd(f, cfg.temperature_k) * delta_sub))
        .collect())
}

fn mean_log2(snr: &[f64]) -> f64 {
    snr.iter().map(|s| s.ln_1p()).sum::<f64>() / (snr.len() as f64 * std::f64::consts::LN_2)
}

/// Average of `log2(1 + SNR_k)` over the subcarriers in bit/s/Hz.
///
/// Every subcarrier gets `tx_power_w`.
pub fn spectral_efficiency(bp: &Beampattern, cfg: &ScenarioConfig) -> Result<f64> {
    Ok(mean_log2(&snr_per_subcarrier(bp, cfg)?))
}

#[derive(Debug, Clone, Serialize)]
pub struct RateReport {
    pub rate_wideband: f64,
    pub rate_narrowband: f64,
    pub increment_pct: f64,
    pub freqs_hz: Vec<f64>,
    pub snr_wideband: Vec<f64>,
    pub snr_narrowband: Vec<f64>,
}

impl RateReport {
    pub fn from_beampatterns(nb: &Beampattern, wb: &Beampattern, cfg: &ScenarioConfig) -> Result<Self> {
        let snr_narrowband = snr_per_subcarrier(nb, cfg)?;
        let snr_wideband = snr_per_subcarrier(wb, cfg)?;
        let rate_narrowband = mean_log2(&snr_narrowband);
        let rate_wideband = mean_log2(&snr_wideband);
        Ok(RateReport {
            rate_wideband,
            rate_narrowband,
            increment_pct: 100.0 * (rate_wideband / rate_narrowband - 1.0),
            freqs_hz: wb.freqs.clone(),
            snr_wideband,
            snr_narrowband,
        })
    }
}

/// Designs both profiles for `cfg` and compares their spectral efficiency.
pub fn evaluate_rate(cfg: &ScenarioConfig) -> Result<RateReport> {
    let grid = ElementGrid::build(cfg)?;
    let design = design_wideband_profile(cfg, &grid)?;
    let freqs = subcarrier_frequencies(cfg);
    let nb = beampattern(&grid, &design.narrowband, &freqs)?;
    let wb = beampattern(&grid, &design.wideband, &freqs)?;
    RateReport::from_beampatterns(&nb, &wb, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub l_dt_m: f64,
    pub gamma_c_deg: f64,
    pub rate_nb: f64,
    pub rate_wb: f64,
    pub increment_pct: f64,
}

/// Rate comparison over every `(l_dt, γ_c)` pair, `l_dt` outermost.
pub fn sweep_rates(base: &ScenarioConfig, l_dt_m: &[f64], gamma_c_deg: &[f64]) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(l_dt_m.len() * gamma_c_deg.len());
    for &l_dt in l_dt_m {
        for &gc in gamma_c_deg {
            let cfg = base.clone().with_l_dt(l_dt).with_gamma_c_deg(gc);
            let r = evaluate_rate(&cfg)?;
            rows.push(SweepRow {
                l_dt_m: l_dt,
                gamma_c_deg: gc,
                rate_nb: r.rate_narrowband,
                rate_wb: r.rate_wideband,
                increment_pct: r.increment_pct,
            });
        }
    }
    Ok(rows)
}

/// CSV with header `l_dt_m,gamma_c_deg,rate_nb,rate_wb,increment_pct`.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut w: W) -> Result<()> {
    writeln!(w, "l_dt_m,gamma_c_deg,rate_nb,rate_wb,increment_pct")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.l_dt_m, r.gamma_c_deg, r.rate_nb, r.rate_wb, r.increment_pct
        )?;
    }
    Ok(())
}
