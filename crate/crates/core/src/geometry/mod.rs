//! Scenario geometry.
//!
//! The aperture is the disk `x² + y² ≤ R²` in the `z = 0` plane. The
//! transmitter sits on boresight at `(0, 0, l_tx)` and the target at
//! `(0, l_dt·sin γ, l_dt·cos γ)`. Everything the design needs is a function of
//! the path sum `l(x, y) = l_tx(x, y) + l_dt(x, y)`; its level sets in the
//! aperture plane are the ellipses cut by a prolate spheroid with foci at the
//! transmitter and the target.

mod bounds;
mod ellipse;
mod grid;
mod spheroidal;

pub use bounds::PathSumBounds;
pub use ellipse::{clip_to_aperture, ApertureClip, Conic, EllipseSection};
pub use grid::ElementGrid;
pub use spheroidal::{SpheroidalFrame, SpheroidalPoint};

use std::f64::consts::FRAC_PI_2;

use crate::config::{Direction, ScenarioConfig};
use crate::error::{Error, Result};
use crate::numeric::find_root;

/// Resolved placement of transmitter, target and aperture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub radius: f64,
    pub l_tx: f64,
    pub l_dt: f64,
    /// Polar angle of the target from boresight (rad).
    pub gamma: f64,
    /// Tilt of the transmitter-to-target axis from boresight (rad).
    pub gamma_c: f64,
}

impl Geometry {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let (gamma, gamma_c) = resolve_angles(cfg.l_tx_m, cfg.l_dt_m, cfg.direction())?;
        Ok(Geometry {
            radius: cfg.radius_m,
            l_tx: cfg.l_tx_m,
            l_dt: cfg.l_dt_m,
            gamma,
            gamma_c,
        })
    }

    pub fn tx(&self) -> [f64; 3] {
        [0.0, 0.0, self.l_tx]
    }

    pub fn dt(&self) -> [f64; 3] {
        [0.0, self.dt_y(), self.dt_z()]
    }

    /// Target offset along y, `l_dt·sin γ`.
    pub fn dt_y(&self) -> f64 {
        self.l_dt * self.gamma.sin()
    }

    /// Target height, `l_dt·cos γ`.
    pub fn dt_z(&self) -> f64 {
        self.l_dt * self.gamma.cos()
    }

    /// Distance from the transmitter to the aperture point `(x, y, 0)`.
    pub fn l_tx_at(&self, x: f64, y: f64) -> f64 {
        (x * x + y * y + self.l_tx * self.l_tx).sqrt()
    }

    /// Distance from the aperture point `(x, y, 0)` to the target.
    pub fn l_dt_at(&self, x: f64, y: f64) -> f64 {
        let dy = y - self.dt_y();
        let z = self.dt_z();
        (x * x + dy * dy + z * z).sqrt()
    }

    /// Path sum `l_tx(x, y) + l_dt(x, y)`.
    pub fn path_sum(&self, x: f64, y: f64) -> f64 {
        self.l_tx_at(x, y) + self.l_dt_at(x, y)
    }

    /// True when the target lies on boresight to within `1e-9` rad of tilt.
    pub fn is_boresight(&self) -> bool {
        self.gamma_c.abs() < 1e-9
    }

    pub fn spheroidal_frame(&self) -> SpheroidalFrame {
        SpheroidalFrame::new(self)
    }
}

/// Tilt angle of the transmitter-to-target axis for the configured target.
///
/// Uses the two-argument arctangent of `(l_dt·sin γ, l_dt·cos γ − l_tx)`, so
/// targets lower than the transmitter get a tilt beyond π/2 instead of a sign
/// flip. When the config already gives the tilt, it is returned unchanged
/// after checking that some `γ` produces it.
pub fn derive_gamma_c(cfg: &ScenarioConfig) -> Result<f64> {
    cfg.validate()?;
    resolve_angles(cfg.l_tx_m, cfg.l_dt_m, cfg.direction()).map(|(_, gc)| gc)
}

/// Tilt angle from the target polar angle.
pub fn gamma_c_from_gamma(l_tx: f64, l_dt: f64, gamma: f64) -> f64 {
    (l_dt * gamma.sin()).atan2(l_dt * gamma.cos() - l_tx)
}

/// Target polar angle `γ ∈ (−π/2, π/2)` producing the tilt `gamma_c`.
pub fn gamma_from_gamma_c(l_tx: f64, l_dt: f64, gamma_c: f64) -> Result<f64> {
    if gamma_c == 0.0 && l_dt > l_tx {
        return Ok(0.0);
    }
    let residual = |g: f64| wrap_pi(gamma_c_from_gamma(l_tx, l_dt, g) - gamma_c);
    // The map is monotone when l_dt > l_tx, but the atan2 branch cut can
    // fake a sign change otherwise; scan for brackets and keep the first
    // root whose residual actually vanishes.
    const SCAN: usize = 2000;
    let lo = -FRAC_PI_2 + 1e-12;
    let hi = FRAC_PI_2 - 1e-12;
    let step = (hi - lo) / SCAN as f64;
    let mut prev_g = lo;
    let mut prev_r = residual(lo);
    for i in 1..=SCAN {
        let g = lo + step * i as f64;
        let r = residual(g);
        if r == 0.0 {
            return Ok(g);
        }
        if prev_r.signum() != r.signum() && (r - prev_r).abs() < 1.0 {
            let root = find_root(residual, prev_g, g, 1e-15)?;
            if residual(root).abs() < 1e-9 {
                return Ok(root);
            }
        }
        prev_g = g;
        prev_r = r;
    }
    Err(Error::NoGammaSolution {
        gamma_c_rad: gamma_c,
    })
}

fn resolve_angles(l_tx: f64, l_dt: f64, direction: Direction) -> Result<(f64, f64)> {
    match direction {
        Direction::Gamma(g) => {
            if !(g.abs() < FRAC_PI_2) {
                return Err(Error::Domain(format!("gamma {g} rad outside (-pi/2, pi/2)")));
            }
            let gc = gamma_c_from_gamma(l_tx, l_dt, g);
            if !gc.is_finite() {
                return Err(Error::Domain("derived tilt angle is not finite".into()));
            }
            Ok((g, gc))
        }
        Direction::GammaC(gc) => Ok((gamma_from_gamma_c(l_tx, l_dt, gc)?, gc)),
    }
}

fn wrap_pi(a: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let w = (a + PI).rem_euclid(TAU) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}
