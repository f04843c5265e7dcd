//! Downstream metrics for a designed profile: multicarrier spectral
//! efficiency under thermal noise, and the delay resolution of an LFM pulse
//! reflected through the surface.

mod radar;
mod rate;

pub use radar::{
    ambiguity_zero_doppler, apply_beamforming_filter, evaluate_ambiguity, lfm_baseband_spectrum,
    AmbiguityCurve, AmbiguityReport, AmbiguityRun, Spectrum,
};
pub use rate::{
    evaluate_rate, noise_psd, spectral_efficiency, subcarrier_frequencies, sweep_rates, write_sweep_csv,
    RateReport, SweepRow, BOLTZMANN, PLANCK,
};
