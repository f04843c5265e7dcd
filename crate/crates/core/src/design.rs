//! Wideband phase design by the stationary phase method.
//!
//! The aperture integral is rewritten over the path sum `l`, which turns the
//! gain versus frequency into a Fourier transform of `A(l)·exp(jφ_des(l))`.
//! Requiring a flat transform magnitude fixes the curvature of `φ_des`
//! through `φ″(l) ∝ A(l)²`; integrating twice with the band edges as
//! boundary conditions gives the extra phase added to the narrowband design.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::io::Write;

use rayon::prelude::*;

use crate::channel::{wrap_phase, PhaseProfile, ProfileKind};
use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::geometry::{ElementGrid, Geometry, PathSumBounds};
use crate::numeric::{cumulative_trapezoid, integrate, interp_uniform};
use crate::SPEED_OF_LIGHT;

/// Relative tolerance of the arc integrals behind `A(l)`.
pub const ARC_REL_TOL: f64 = 1e-6;

/// Fraction of the path-sum span kept away from each end when evaluating
/// `A(l)`, where the constant-l conic degenerates to a point.
const ENDPOINT_OFFSET: f64 = 1e-4;

/// Fraction of the span used as the finite-difference step in `l`.
const JACOBIAN_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// Amplitude modulation `A(l)`.
    Amplitude,
    /// Instantaneous spatial frequency `φ′(l)` (rad/m).
    InstFrequency,
    /// Additional phase `φ_des(l)` (rad, unwrapped).
    Phase,
}

/// A real function sampled on a uniform grid over `[l_min, l_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub l_min: f64,
    pub l_max: f64,
    pub values: Vec<f64>,
    pub kind: CurveKind,
}

impl SampledFunction {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> f64 {
        (self.l_max - self.l_min) / (self.len() - 1) as f64
    }

    /// Sample abscissae; the last one is exactly `l_max`.
    pub fn l_grid(&self) -> Vec<f64> {
        l_grid(self.l_min, self.l_max, self.len())
    }

    /// Linear interpolation, clamped at the ends.
    pub fn at(&self, l: f64) -> f64 {
        interp_uniform(self.l_min, self.step(), &self.values, l)
    }

    /// CSV with header `l_m,value`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "l_m,value")?;
        for (l, v) in self.l_grid().iter().zip(&self.values) {
            writeln!(w, "{l},{v}")?;
        }
        Ok(())
    }
}

/// `n ≥ 2` uniform samples over `[l_min, l_max]`.
pub fn l_grid(l_min: f64, l_max: f64, n: usize) -> Vec<f64> {
    crate::numeric::linspace(l_min, l_max, n)
}

fn check_samples(n: usize, bounds: &PathSumBounds) -> Result<()> {
    if n < 2 {
        return Err(Error::Contract(format!("need at least 2 l samples, got {n}")));
    }
    if !(bounds.l_max > bounds.l_min) {
        return Err(Error::Contract("path-sum range is empty".into()));
    }
    Ok(())
}

/// Narrowband phase `2πf_c·l/c` per element, wrapped to `[0, 2π)`.
pub fn narrowband_phase(grid: &ElementGrid, f_c: f64) -> PhaseProfile {
    PhaseProfile {
        phases: grid.l_sum.iter().map(|&l| carrier_phase(f_c, l)).collect(),
        kind: ProfileKind::Narrowband,
    }
}

fn carrier_phase(f_c: f64, l: f64) -> f64 {
    let cycles = f_c * l / SPEED_OF_LIGHT;
    wrap_phase(TAU * (cycles - cycles.floor()))
}

/// Boresight amplitude modulation `a(l) = 1/l`.
///
/// The constant 2π of the full-circle integral is dropped; only the shape of
/// `A` enters the design.
pub fn amplitude_modulation_boresight(
    geom: &Geometry,
    bounds: &PathSumBounds,
    n: usize,
) -> Result<SampledFunction> {
    if !geom.is_boresight() {
        return Err(Error::Contract(format!(
            "boresight amplitude requested for tilt {} rad",
            geom.gamma_c
        )));
    }
    check_samples(n, bounds)?;
    Ok(SampledFunction {
        l_min: bounds.l_min,
        l_max: bounds.l_max,
        values: l_grid(bounds.l_min, bounds.l_max, n)
            .iter()
            .map(|l| 1.0 / l)
            .collect(),
        kind: CurveKind::Amplitude,
    })
}

/// Integrand `K(l, θ) = |∂(x,y)/∂(l,θ)| / (l_tx·l_dt)` of the amplitude.
///
/// `∂/∂l` uses central differences of the conic with step `h_l`; `∂/∂θ` is
/// exact.
pub fn jacobian_weight(geom: &Geometry, l: f64, theta: f64, h_l: f64) -> Result<f64> {
    let c = geom.conic(l)?;
    let lo = geom.conic(l - h_l)?;
    let hi = geom.conic(l + h_l)?;
    let (s, co) = theta.sin_cos();
    let dx_dl = (hi.x_e - lo.x_e + (hi.a_e - lo.a_e) * co) / (2.0 * h_l);
    let dy_dl = (hi.y_e - lo.y_e + (hi.b_e - lo.b_e) * s) / (2.0 * h_l);
    let dx_dt = -c.a_e * s;
    let dy_dt = c.b_e * co;
    let (x, y) = c.point(theta);
    let det = (dx_dl * dy_dt - dx_dt * dy_dl).abs();
    Ok(det / (geom.l_tx_at(x, y) * geom.l_dt_at(x, y)))
}

/// `A(l)`: the integral of `K` over the arcs of the conic inside the aperture.
///
/// `K(l, θ) = K(l, π − θ)`, so only the right half of each arc is integrated.
pub fn amplitude_at(geom: &Geometry, bounds: &PathSumBounds, l: f64) -> Result<f64> {
    let h_l = JACOBIAN_STEP * bounds.span();
    let section = geom.ellipse_section(l)?;
    let (a, b) = if section.clip.fully_inside {
        (-FRAC_PI_2, FRAC_PI_2)
    } else {
        (section.clip.theta_start, section.clip.theta1)
    };
    // Validate once so the integrand below cannot fail.
    jacobian_weight(geom, l, 0.5 * (a + b), h_l)?;
    let k = |t: f64| jacobian_weight(geom, l, t, h_l).unwrap_or(0.0);
    Ok(2.0 * integrate(k, a, b, ARC_REL_TOL))
}

/// `A(l)` for any target location, by quadrature over the clipped conics.
///
/// Samples at the two ends are evaluated `1e−4` of the span inside the
/// range, where the conic still has positive length.
pub fn amplitude_modulation_general(
    geom: &Geometry,
    bounds: &PathSumBounds,
    n: usize,
) -> Result<SampledFunction> {
    check_samples(n, bounds)?;
    let delta = ENDPOINT_OFFSET * bounds.span();
    let lo = bounds.l_min + delta;
    let hi = bounds.l_max - delta;
    let values = l_grid(bounds.l_min, bounds.l_max, n)
        .into_par_iter()
        .map(|l| amplitude_at(geom, bounds, l.clamp(lo, hi)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(SampledFunction {
        l_min: bounds.l_min,
        l_max: bounds.l_max,
        values,
        kind: CurveKind::Amplitude,
    })
}

/// Instantaneous frequency
/// `φ′(l) = (2πB/c)·∫_{l_min}^{l} A² / ∫_{l_min}^{l_max} A² − πB/c`.
pub fn spm_instantaneous_frequency(a: &SampledFunction, bandwidth: f64) -> Result<SampledFunction> {
    if a.kind != CurveKind::Amplitude {
        return Err(Error::Contract("expected an amplitude curve".into()));
    }
    if let Some(bad) = a.values.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::Contract(format!("non-positive amplitude sample {bad}")));
    }
    let sq: Vec<f64> = a.values.iter().map(|v| v * v).collect();
    let cum = cumulative_trapezoid(&sq, a.step());
    let total = cum[cum.len() - 1];
    let half = PI * bandwidth / SPEED_OF_LIGHT;
    let last = cum.len() - 1;
    let values = cum
        .iter()
        .enumerate()
        .map(|(i, c)| if i == last { half } else { 2.0 * half * (c / total) - half })
        .collect();
    Ok(SampledFunction {
        l_min: a.l_min,
        l_max: a.l_max,
        values,
        kind: CurveKind::InstFrequency,
    })
}

/// Additional phase `φ_des(l) = ∫_{l_min}^{l} φ′`, unwrapped.
pub fn spm_phase(phi_prime: &SampledFunction) -> Result<SampledFunction> {
    if phi_prime.kind != CurveKind::InstFrequency {
        return Err(Error::Contract("expected an instantaneous-frequency curve".into()));
    }
    Ok(SampledFunction {
        l_min: phi_prime.l_min,
        l_max: phi_prime.l_max,
        values: cumulative_trapezoid(&phi_prime.values, phi_prime.step()),
        kind: CurveKind::Phase,
    })
}

/// `φ_des(l_sum)` for every element, unwrapped.
fn phase_at_elements(phi_des: &SampledFunction, grid: &ElementGrid) -> Result<Vec<f64>> {
    if phi_des.kind != CurveKind::Phase {
        return Err(Error::Contract("expected a phase curve".into()));
    }
    let h = phi_des.step();
    let (lo, hi) = (phi_des.l_min - h, phi_des.l_max + h);
    if let Some(&l) = grid.l_sum.iter().find(|&&l| l < lo || l > hi) {
        return Err(Error::Contract(format!(
            "element path sum {l} m lies outside [{}, {}] m",
            phi_des.l_min, phi_des.l_max
        )));
    }
    Ok(grid.l_sum.iter().map(|&l| phi_des.at(l)).collect())
}

/// `φ_des(l_sum)` for every element, wrapped to `[0, 2π)`.
pub fn map_phase_to_elements(phi_des: &SampledFunction, grid: &ElementGrid) -> Result<PhaseProfile> {
    Ok(PhaseProfile::from_unwrapped(
        phase_at_elements(phi_des, grid)?,
        ProfileKind::Custom,
    ))
}

/// Everything produced by one run of the wideband design.
#[derive(Debug, Clone)]
pub struct WidebandDesign {
    pub bounds: PathSumBounds,
    pub amplitude: SampledFunction,
    pub inst_freq: SampledFunction,
    pub phase: SampledFunction,
    pub narrowband: PhaseProfile,
    pub wideband: PhaseProfile,
}

/// Path-sum bounds, `A(l)`, `φ′`, `φ_des` and the final profile
/// `(φ_std + φ_des) mod 2π` for `grid`.
pub fn design_wideband_profile(cfg: &ScenarioConfig, grid: &ElementGrid) -> Result<WidebandDesign> {
    let geom = &grid.geometry;
    let bounds = grid.path_sum_bounds()?;
    let amplitude = if geom.is_boresight() {
        amplitude_modulation_boresight(geom, &bounds, cfg.n_l_samples)?
    } else {
        amplitude_modulation_general(geom, &bounds, cfg.n_l_samples)?
    };
    let inst_freq = spm_instantaneous_frequency(&amplitude, cfg.bandwidth_hz)?;
    let phase = spm_phase(&inst_freq)?;
    let extra = phase_at_elements(&phase, grid)?;
    let wideband = PhaseProfile::from_unwrapped(
        grid.l_sum
            .iter()
            .zip(&extra)
            .map(|(&l, d)| carrier_phase(cfg.f_c_hz, l) + d),
        ProfileKind::Wideband,
    );
    Ok(WidebandDesign {
        bounds,
        amplitude,
        inst_freq,
        phase,
        narrowband: narrowband_phase(grid, cfg.f_c_hz),
        wideband,
    })
}
