//! Scenario configuration.
//!
//! The on-disk form is TOML whose keys carry their units:
//!
//! ```toml
//! f_c_hz = 30e9
//! bandwidth_hz = 4e9
//! radius_m = 1.0
//! l_tx_m = 0.5
//! l_dt_m = 5.0
//! gamma_c_deg = 10.0      # or gamma_deg, never both
//! # optional: element_spacing_m, n_l_samples, n_freq_samples, tx_power_w,
//! #           n_sub, temperature_k, lfm_duration_s
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::SPEED_OF_LIGHT;

pub const DEFAULT_N_L_SAMPLES: usize = 4096;
pub const DEFAULT_N_FREQ_SAMPLES: usize = 200;
pub const DEFAULT_TX_POWER_W: f64 = 5e-3;
pub const DEFAULT_N_SUB: usize = 200;
pub const DEFAULT_TEMPERATURE_K: f64 = 290.0;
pub const DEFAULT_LFM_DURATION_S: f64 = 1e-6;

/// All physical parameters of one experiment.
///
/// Field names are the configuration-file keys. Angles stay in degrees as
/// written so that a config snapshot re-reads to the identical scenario; use
/// [`ScenarioConfig::direction`] for radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub f_c_hz: f64,
    pub bandwidth_hz: f64,
    pub radius_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element_spacing_m: Option<f64>,
    pub l_tx_m: f64,
    pub l_dt_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_deg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_c_deg: Option<f64>,
    #[serde(default = "default_n_l")]
    pub n_l_samples: usize,
    #[serde(default = "default_n_freq")]
    pub n_freq_samples: usize,
    #[serde(default = "default_tx_power")]
    pub tx_power_w: f64,
    #[serde(default = "default_n_sub")]
    pub n_sub: usize,
    #[serde(default = "default_temperature")]
    pub temperature_k: f64,
    #[serde(default = "default_lfm")]
    pub lfm_duration_s: f64,
}

fn default_n_l() -> usize {
    DEFAULT_N_L_SAMPLES
}
fn default_n_freq() -> usize {
    DEFAULT_N_FREQ_SAMPLES
}
fn default_tx_power() -> f64 {
    DEFAULT_TX_POWER_W
}
fn default_n_sub() -> usize {
    DEFAULT_N_SUB
}
fn default_temperature() -> f64 {
    DEFAULT_TEMPERATURE_K
}
fn default_lfm() -> f64 {
    DEFAULT_LFM_DURATION_S
}

/// How the target direction is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Direction {
    /// Polar angle of the target seen from the aperture center (rad).
    Gamma(f64),
    /// Tilt of the transmitter-to-target axis from boresight (rad).
    GammaC(f64),
}

/// Preset aperture sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// R = 1 m, about 1.26e5 elements at 30 GHz.
    Paper,
    /// R = 0.25 m, fast enough for CI.
    Desk,
}

impl Profile {
    pub fn radius_m(self) -> f64 {
        match self {
            Profile::Paper => 1.0,
            Profile::Desk => 0.25,
        }
    }
}

impl std::str::FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Profile::Paper),
            "desk" => Ok(Profile::Desk),
            other => Err(Error::ConfigParse(format!(
                "unknown profile `{other}` (expected `paper` or `desk`)"
            ))),
        }
    }
}

impl ScenarioConfig {
    /// Reference setup: 30 GHz carrier, 4 GHz band, R = 1 m, TX at 0.5 m,
    /// target on boresight at 1 m.
    pub fn paper_default() -> Self {
        Self::boresight(1.0, 0.5, 1.0)
    }

    /// Boresight scenario at 30 GHz / 4 GHz with the given geometry.
    pub fn boresight(radius_m: f64, l_tx_m: f64, l_dt_m: f64) -> Self {
        ScenarioConfig {
            f_c_hz: 30e9,
            bandwidth_hz: 4e9,
            radius_m,
            element_spacing_m: None,
            l_tx_m,
            l_dt_m,
            gamma_deg: None,
            gamma_c_deg: Some(0.0),
            n_l_samples: DEFAULT_N_L_SAMPLES,
            n_freq_samples: DEFAULT_N_FREQ_SAMPLES,
            tx_power_w: DEFAULT_TX_POWER_W,
            n_sub: DEFAULT_N_SUB,
            temperature_k: DEFAULT_TEMPERATURE_K,
            lfm_duration_s: DEFAULT_LFM_DURATION_S,
        }
    }

    pub fn with_gamma_c_deg(mut self, deg: f64) -> Self {
        self.gamma_deg = None;
        self.gamma_c_deg = Some(deg);
        self
    }

    pub fn with_gamma_deg(mut self, deg: f64) -> Self {
        self.gamma_c_deg = None;
        self.gamma_deg = Some(deg);
        self
    }

    pub fn with_l_dt(mut self, l_dt_m: f64) -> Self {
        self.l_dt_m = l_dt_m;
        self
    }

    pub fn with_profile(mut self, profile: Profile) -> Self {
        self.radius_m = profile.radius_m();
        self
    }

    /// Parses and validates a TOML scenario.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::ConfigParse(msg) => Error::ConfigParse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario config is always representable as TOML")
    }

    /// Carrier wavelength `c / f_c` (m).
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.f_c_hz
    }

    /// Element pitch, `λ_c / 2` unless overridden.
    pub fn spacing(&self) -> f64 {
        self.element_spacing_m.unwrap_or(self.wavelength() / 2.0)
    }

    pub fn direction(&self) -> Direction {
        match (self.gamma_deg, self.gamma_c_deg) {
            (Some(g), _) => Direction::Gamma(g.to_radians()),
            (None, Some(gc)) => Direction::GammaC(gc.to_radians()),
            (None, None) => Direction::GammaC(0.0),
        }
    }

    /// Lowest and highest in-band frequency.
    pub fn band(&self) -> (f64, f64) {
        (
            self.f_c_hz - self.bandwidth_hz / 2.0,
            self.f_c_hz + self.bandwidth_hz / 2.0,
        )
    }

    pub fn validate(&self) -> Result<()> {
        fn positive(key: &str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(key, format!("must be finite and > 0, got {v}")))
            }
        }
        positive("f_c_hz", self.f_c_hz)?;
        positive("bandwidth_hz", self.bandwidth_hz)?;
        if self.bandwidth_hz >= 2.0 * self.f_c_hz {
            return Err(Error::config(
                "bandwidth_hz",
                "must be below 2 * f_c_hz so the band stays at positive frequencies",
            ));
        }
        positive("radius_m", self.radius_m)?;
        if let Some(d) = self.element_spacing_m {
            positive("element_spacing_m", d)?;
        }
        positive("l_tx_m", self.l_tx_m)?;
        positive("l_dt_m", self.l_dt_m)?;
        match (self.gamma_deg, self.gamma_c_deg) {
            (Some(_), Some(_)) => {
                return Err(Error::config(
                    "gamma_deg",
                    "give exactly one of `gamma_deg` and `gamma_c_deg`",
                ))
            }
            (None, None) => {
                return Err(Error::config(
                    "gamma_c_deg",
                    "missing: give exactly one of `gamma_deg` and `gamma_c_deg`",
                ))
            }
            (Some(g), None) => {
                if !(g.is_finite() && g.abs() < 90.0) {
                    return Err(Error::config("gamma_deg", "must lie in (-90, 90)"));
                }
            }
            (None, Some(gc)) => {
                if !(gc.is_finite() && gc.abs() < 180.0) {
                    return Err(Error::config("gamma_c_deg", "must lie in (-180, 180)"));
                }
            }
        }
        if self.n_l_samples < 2 {
            return Err(Error::config("n_l_samples", "must be at least 2"));
        }
        if self.n_freq_samples < 1 {
            return Err(Error::config("n_freq_samples", "must be at least 1"));
        }
        if self.n_sub < 1 {
            return Err(Error::config("n_sub", "must be at least 1"));
        }
        if !(self.tx_power_w.is_finite() && self.tx_power_w >= 0.0) {
            return Err(Error::config("tx_power_w", "must be finite and >= 0"));
        }
        positive("temperature_k", self.temperature_k)?;
        positive("lfm_duration_s", self.lfm_duration_s)?;
        Ok(())
    }
}
