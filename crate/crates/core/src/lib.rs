//! Wideband phase-only beamforming for a circular reflecting surface.
//!
//! A transmitter on the boresight of a circular reflecting surface illuminates
//! a target through it. A narrowband phase profile focuses only at the carrier
//! and its gain collapses across a wide band (beam squint). This crate builds a
//! frequency-flat profile instead: every element is indexed by its path sum
//! `l = l_tx(x, y) + l_dt(x, y)`, the aperture integral becomes a Fourier
//! transform from `l` to spatial frequency `ω = 2π(f - f_c)/c`, and the stationary
//! phase method turns a flat target spectrum into a chirp-like phase `φ_des(l)`
//! added on top of the narrowband profile.
//!
//! Layout:
//!
//! * [`geometry`] lattice, path sums, spheroid/plane conic sections, aperture clipping
//! * [`channel`] near-field cascaded channel and the exact discrete beampattern
//! * [`design`] amplitude modulation `A(l)`, stationary-phase synthesis, full design pipeline
//! * [`evaluation`] multicarrier spectral efficiency and LFM delay ambiguity
//! * [`oracle`] brute-force validators for the above
//! * [`run`] the operator surface used by the `risbeam` binary
//!
//! ```no_run
//! use risbeam::{ScenarioConfig, design::design_wideband_profile, geometry::ElementGrid};
//!
//! let cfg = ScenarioConfig::paper_default();
//! let grid = ElementGrid::build(&cfg).unwrap();
//! let design = design_wideband_profile(&cfg, &grid).unwrap();
//! println!("{} elements, l in [{}, {}]", grid.len(), design.bounds.l_min, design.bounds.l_max);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod config;
pub mod design;
pub mod error;
pub mod evaluation;
pub mod geometry;
pub mod numeric;
pub mod oracle;
pub mod run;

pub use config::{Direction, ScenarioConfig};
pub use error::{Error, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
