//! Brute-force validators.
//!
//! Each check recomputes a quantity by a route that does not share code with
//! the one it audits: raw distance formulas for the conics, lattice
//! histograms for `A(l)`, direct transforms for the stationary-phase
//! prediction and nested 2-D quadrature for the aperture integral.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{band_frequencies, beampattern, siso_gain};
use crate::config::ScenarioConfig;
use crate::design::{amplitude_at, design_wideband_profile, spm_instantaneous_frequency, spm_phase, CurveKind, SampledFunction, WidebandDesign};
use crate::error::{Error, Result};
use crate::geometry::{gamma_c_from_gamma, gamma_from_gamma_c, ElementGrid, Geometry};
use crate::numeric::linspace;
use crate::SPEED_OF_LIGHT;

/// Pass thresholds, one per check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    pub ellipse_residual: f64,
    pub histogram_rms: f64,
    pub spm_median: f64,
    pub spm_constant_amplitude: f64,
    pub riemann: f64,
    pub one_dimensional_identity: f64,
    pub gamma_round_trip_rad: f64,
    pub convexity_slack: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            ellipse_residual: 1e-9,
            histogram_rms: 0.02,
            spm_median: 0.20,
            spm_constant_amplitude: 0.05,
            riemann: 0.02,
            one_dimensional_identity: 0.005,
            gamma_round_trip_rad: 1e-9,
            convexity_slack: 1e-12,
        }
    }
}

/// Outcome of one check: `pass` is `metric <= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub metric: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckResult {
    pub fn new(name: &str, metric: f64, threshold: f64) -> Self {
        CheckResult {
            name: name.to_string(),
            metric,
            threshold,
            pass: metric <= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl ValidationReport {
    pub fn new(checks: Vec<CheckResult>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        ValidationReport { checks, pass }
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn raw_path_sum(g: &Geometry, x: f64, y: f64) -> f64 {
    let [tx, ty, tz] = g.tx();
    let [dx, dy, dz] = g.dt();
    let a = ((x - tx).powi(2) + (y - ty).powi(2) + tz * tz).sqrt();
    let b = ((x - dx).powi(2) + (y - dy).powi(2) + dz * dz).sqrt();
    a + b
}

/// Largest relative path-sum error `|l_tx + l_dt − l| / l` over points of the
/// clipped conics, together with the rim distance of every clip endpoint
/// relative to `R`.
///
/// `n_l` levels are spread over the open range; a single level means `l_max`.
pub fn check_ellipse_residuals(cfg: &ScenarioConfig, n_l: usize, n_theta: usize, threshold: f64) -> Result<CheckResult> {
    let grid = ElementGrid::build(cfg)?;
    let g = grid.geometry;
    let b = grid.path_sum_bounds()?;
    let levels: Vec<f64> = if n_l == 1 {
        vec![b.l_max]
    } else {
        (1..=n_l)
            .map(|i| b.l_min + b.span() * i as f64 / (n_l + 1) as f64)
            .collect()
    };
    let mut worst: f64 = 0.0;
    for l in levels {
        let s = g.ellipse_section(l)?;
        for (a, e) in s.arcs() {
            for t in linspace(a, e, n_theta.max(2)) {
                let (x, y) = s.conic.point(t);
                worst = worst.max((raw_path_sum(&g, x, y) - l).abs() / l);
            }
        }
        if !s.clip.fully_inside {
            let c = s.clip;
            let mut rim = vec![c.theta1, c.theta2];
            if c.theta_start > -FRAC_PI_2 {
                rim.extend([c.theta_start, PI - c.theta_start]);
            }
            for t in rim {
                let (x, y) = s.conic.point(t);
                worst = worst.max((x.hypot(y) - g.radius).abs() / g.radius);
            }
        }
    }
    Ok(CheckResult::new("ellipse_residuals", worst, threshold))
}

/// Lattice push-forward of the aperture measure onto `l`, against `∫A` per bin.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramComparison {
    pub edges: Vec<f64>,
    pub lattice_mass: Vec<f64>,
    pub amplitude_mass: Vec<f64>,
    /// RMS relative error over the interior bins.
    pub rms: f64,
}

/// Bins the elements of a lattice with pitch `spacing` by path sum, each
/// weighted `Δ²/(l_tx·l_dt)`, and compares with the integral of `A(l)` over
/// the bin. The outer 5% of bins on either side are excluded.
pub fn amplitude_histogram(cfg: &ScenarioConfig, n_bins: usize, spacing: f64) -> Result<HistogramComparison> {
    let geom = Geometry::new(cfg)?;
    let grid = ElementGrid::with_geometry(geom, spacing)?;
    if grid.len() < 10_000 {
        return Err(Error::Inconclusive(format!(
            "histogram needs at least 1e4 elements, lattice has {}",
            grid.len()
        )));
    }
    let b = grid.path_sum_bounds()?;
    let edges = linspace(b.l_min, b.l_max, n_bins + 1);
    let w = b.span() / n_bins as f64;
    let mut lattice_mass = vec![0.0; n_bins];
    for e in 0..grid.len() {
        let k = (((grid.l_sum[e] - b.l_min) / w) as usize).min(n_bins - 1);
        lattice_mass[k] += spacing * spacing / (grid.l_tx[e] * grid.l_dt[e]);
    }
    if lattice_mass.iter().filter(|m| **m > 0.0).count() < 20 {
        return Err(Error::Inconclusive("fewer than 20 occupied bins".into()));
    }
    let skip = ((0.05 * n_bins as f64).ceil() as usize).max(1);
    let interior: Vec<usize> = (skip..n_bins - skip).collect();
    let amplitude_mass = (0..n_bins)
        .into_par_iter()
        .map(|k| {
            if k < skip || k >= n_bins - skip {
                return Ok(f64::NAN);
            }
            let (l0, l1) = (edges[k], edges[k + 1]);
            if geom.is_boresight() {
                Ok(TAU * (l1 / l0).ln())
            } else {
                gauss_legendre(|l| amplitude_at(&geom, &b, l), l0, l1)
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let sq: f64 = interior
        .iter()
        .map(|&k| (lattice_mass[k] / amplitude_mass[k] - 1.0).powi(2))
        .sum();
    Ok(HistogramComparison {
        edges,
        lattice_mass,
        amplitude_mass,
        rms: (sq / interior.len() as f64).sqrt(),
    })
}

/// Five-point Gauss–Legendre rule on `[a, b]`.
fn gauss_legendre<F: Fn(f64) -> Result<f64>>(f: F, a: f64, b: f64) -> Result<f64> {
    const X: [f64; 5] = [0.0, 0.538_469_310_105_683, -0.538_469_310_105_683, 0.906_179_845_938_664, -0.906_179_845_938_664];
    const W: [f64; 5] = [0.568_888_888_888_889, 0.478_628_670_499_366, 0.478_628_670_499_366, 0.236_926_885_056_189, 0.236_926_885_056_189];
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut acc = 0.0;
    for (x, w) in X.iter().zip(W) {
        acc += w * f(m + h * x)?;
    }
    Ok(acc * h)
}

pub fn check_amplitude_histogram(cfg: &ScenarioConfig, n_bins: usize, spacing: f64, threshold: f64) -> Result<CheckResult> {
    let h = amplitude_histogram(cfg, n_bins, spacing)?;
    Ok(CheckResult::new("amplitude_histogram", h.rms, threshold))
}

/// Relative errors of the stationary-phase prediction `2πA²/φ″` against the
/// transform `|∫A·exp(j(φ_des − ωl)) dl|²` at `ω = φ′(l)` for `n_points`
/// interior `l`.
pub fn spm_prediction_errors(a: &SampledFunction, phi: &SampledFunction, n_points: usize) -> Result<Vec<f64>> {
    if a.kind != CurveKind::Amplitude || phi.kind != CurveKind::Phase || a.len() != phi.len() {
        return Err(Error::Contract("need matching amplitude and phase curves".into()));
    }
    let n = a.len();
    let h = a.step();
    let ls = a.l_grid();
    (1..=n_points)
        .into_par_iter()
        .map(|i| {
            let k = ((n - 1) * i / (n_points + 1)).clamp(1, n - 2);
            let curvature = (phi.values[k + 1] - 2.0 * phi.values[k] + phi.values[k - 1]) / (h * h);
            let omega = (phi.values[k + 1] - phi.values[k - 1]) / (2.0 * h);
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, ((&aj, &pj), &lj)) in a.values.iter().zip(&phi.values).zip(&ls).enumerate() {
                let wt = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                acc += Complex64::from_polar(wt * aj, pj - omega * lj);
            }
            let measured = (acc * h).norm_sqr();
            let predicted = TAU * a.values[k].powi(2) / curvature;
            Ok((measured - predicted).abs() / predicted)
        })
        .collect()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn check_spm_prediction(design: &WidebandDesign, n_points: usize, threshold: f64) -> Result<CheckResult> {
    let errs = spm_prediction_errors(&design.amplitude, &design.phase, n_points)?;
    Ok(CheckResult::new("spm_prediction", median(errs), threshold))
}

/// Constant amplitude over 100 m at 4 GHz: a pure linear chirp with a
/// time-bandwidth product above 1000.
pub fn check_spm_constant_amplitude(threshold: f64) -> Result<CheckResult> {
    let a = SampledFunction {
        l_min: 0.0,
        l_max: 100.0,
        values: vec![1.0; 200_001],
        kind: CurveKind::Amplitude,
    };
    let phi = spm_phase(&spm_instantaneous_frequency(&a, 4e9)?)?;
    let errs = spm_prediction_errors(&a, &phi, 20)?;
    Ok(CheckResult::new("spm_constant_amplitude", median(errs), threshold))
}

/// Complex integral over `[a, b]` with an absolute tolerance.
fn integrate_complex<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, abs_tol: f64) -> Complex64 {
    let re = quadrature::double_exponential::integrate(|t| f(t).re, a, b, abs_tol).integral;
    let im = quadrature::double_exponential::integrate(|t| f(t).im, a, b, abs_tol).integral;
    Complex64::new(re, im)
}

/// Continuous aperture integral at `f_c` of the wideband design,
/// `∫∫ exp(jφ_des(l(x,y))) / (l_tx·l_dt) dx dy`, by nested quadrature over the disk.
pub fn aperture_integral(geom: &Geometry, phase: &SampledFunction) -> Complex64 {
    let r = geom.radius;
    let scale = PI * r * r / (geom.l_tx * geom.l_dt);
    let tol = 1e-10 * scale;
    let inner = |x: f64| {
        let ymax = (r * r - x * x).max(0.0).sqrt();
        integrate_complex(
            |y| {
                let lt = (x * x + y * y + geom.l_tx * geom.l_tx).sqrt();
                let dy = y - geom.dt_y();
                let ld = (x * x + dy * dy + geom.dt_z().powi(2)).sqrt();
                Complex64::from_polar(1.0 / (lt * ld), phase.at(lt + ld))
            },
            -ymax,
            ymax,
            tol / (2.0 * r),
        )
    };
    integrate_complex(inner, -r, r, tol)
}

/// Same integral reduced to one dimension on boresight, `2π∫exp(jφ_des(l))/l dl`.
pub fn path_sum_integral(phase: &SampledFunction) -> Complex64 {
    let scale = (phase.l_max / phase.l_min).ln() * TAU;
    integrate_complex(
        |l| Complex64::from_polar(TAU / l, phase.at(l)),
        phase.l_min,
        phase.l_max,
        1e-12 * scale,
    )
}

/// `|g(f_c)·Δ² / η(f_c) − continuous| / |continuous|` for the wideband profile
/// on a lattice of pitch `spacing`.
pub fn riemann_error(cfg: &ScenarioConfig, spacing: f64) -> Result<f64> {
    let geom = Geometry::new(cfg)?;
    if !geom.is_boresight() {
        return Err(Error::Contract("Riemann check needs a boresight scenario".into()));
    }
    let grid = ElementGrid::with_geometry(geom, spacing)?;
    let design = design_wideband_profile(cfg, &grid)?;
    let discrete = siso_gain(&grid, &design.wideband, cfg.f_c_hz)? * spacing * spacing
        / crate::channel::amplitude_coefficient(cfg.f_c_hz);
    // The carrier term of each element phase cancels the channel phase at f_c.
    let continuous = aperture_integral(&geom, &design.phase);
    Ok((discrete - continuous).norm() / continuous.norm())
}

pub fn check_riemann_consistency(cfg: &ScenarioConfig, threshold: f64) -> Result<CheckResult> {
    Ok(CheckResult::new("riemann_consistency", riemann_error(cfg, cfg.spacing())?, threshold))
}

/// Relative gap between the 1-D path-sum form and the 2-D aperture integral.
pub fn check_one_dimensional_identity(cfg: &ScenarioConfig, threshold: f64) -> Result<CheckResult> {
    let geom = Geometry::new(cfg)?;
    if !geom.is_boresight() {
        return Err(Error::Contract("path-sum reduction needs a boresight scenario".into()));
    }
    let grid = ElementGrid::build(cfg)?;
    let design = design_wideband_profile(cfg, &grid)?;
    let two = aperture_integral(&geom, &design.phase);
    let one = path_sum_integral(&design.phase);
    Ok(CheckResult::new(
        "one_dimensional_identity",
        (one - two).norm() / two.norm(),
        threshold,
    ))
}

/// Largest `|γ_c(γ(γ_c)) − γ_c|` over tilts up to 60° and targets 1 to 100 m away.
pub fn check_gamma_round_trip(l_tx: f64, threshold: f64) -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    for l_dt in [1.0, 2.5, 5.0, 10.0, 100.0] {
        for k in 0..=60 {
            let gc = (k as f64).to_radians();
            let g = gamma_from_gamma_c(l_tx, l_dt, gc)?;
            worst = worst.max((gamma_c_from_gamma(l_tx, l_dt, g) - gc).abs());
        }
    }
    Ok(CheckResult::new("gamma_round_trip", worst, threshold))
}

/// `|φ′(l_min) + πB/c| + |φ′(l_max) − πB/c|`; must vanish exactly.
pub fn check_inst_freq_endpoints(design: &WidebandDesign, bandwidth: f64) -> CheckResult {
    let half = PI * bandwidth / SPEED_OF_LIGHT;
    let v = &design.inst_freq.values;
    let dev = (v[0] + half).abs() + (v[v.len() - 1] - half).abs();
    CheckResult::new("inst_freq_endpoints", dev, 0.0)
}

/// Negated smallest second difference of `φ_des`.
pub fn check_phase_convexity(design: &WidebandDesign, slack: f64) -> CheckResult {
    let worst = design
        .phase
        .values
        .windows(3)
        .map(|w| w[0] - 2.0 * w[1] + w[2])
        .fold(f64::INFINITY, f64::min);
    CheckResult::new("phase_convexity", -worst, slack)
}

/// Beampattern CSV of the wideband design under `threads` workers.
pub fn beampattern_csv_with_threads(cfg: &ScenarioConfig, threads: usize) -> Result<Vec<u8>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Contract(e.to_string()))?;
    pool.install(|| {
        let grid = ElementGrid::build(cfg)?;
        let design = design_wideband_profile(cfg, &grid)?;
        let bp = beampattern(&grid, &design.wideband, &band_frequencies(cfg))?;
        let mut out = Vec::new();
        bp.write_csv(&mut out)?;
        design.wideband.write_csv(&grid, &mut out)?;
        Ok(out)
    })
}

/// 1 when the outputs under 1 and 4 workers differ in any byte, else 0.
pub fn check_determinism(cfg: &ScenarioConfig) -> Result<CheckResult> {
    let one = beampattern_csv_with_threads(cfg, 1)?;
    let four = beampattern_csv_with_threads(cfg, 4)?;
    Ok(CheckResult::new("determinism", if one == four { 0.0 } else { 1.0 }, 0.0))
}

/// Histogram lattice pitch: a quarter of the design pitch.
pub fn histogram_spacing(cfg: &ScenarioConfig) -> f64 {
    cfg.spacing() / 4.0
}

/// Runs every check for `cfg`. Checks that need a boresight scenario use
/// `cfg` with its tilt set to zero.
pub fn run_validation(cfg: &ScenarioConfig, t: &Thresholds) -> Result<ValidationReport> {
    let boresight = cfg.clone().with_gamma_c_deg(0.0);
    let grid = ElementGrid::build(cfg)?;
    let design = design_wideband_profile(cfg, &grid)?;
    type Job<'a> = Box<dyn Fn() -> Result<CheckResult> + Send + Sync + 'a>;
    let jobs: Vec<Job> = vec![
        Box::new(|| check_ellipse_residuals(cfg, 64, 64, t.ellipse_residual)),
        Box::new(|| check_amplitude_histogram(cfg, 64, histogram_spacing(cfg), t.histogram_rms)),
        Box::new(|| check_spm_prediction(&design, 20, t.spm_median)),
        Box::new(|| check_spm_constant_amplitude(t.spm_constant_amplitude)),
        Box::new(|| check_riemann_consistency(&boresight, t.riemann)),
        Box::new(|| check_one_dimensional_identity(&boresight, t.one_dimensional_identity)),
        Box::new(|| check_gamma_round_trip(cfg.l_tx_m, t.gamma_round_trip_rad)),
        Box::new(|| Ok(check_inst_freq_endpoints(&design, cfg.bandwidth_hz))),
        Box::new(|| Ok(check_phase_convexity(&design, t.convexity_slack))),
        Box::new(|| check_determinism(cfg)),
    ];
    let checks = jobs.par_iter().map(|j| j()).collect::<Result<Vec<_>>>()?;
    Ok(ValidationReport::new(checks))
}
