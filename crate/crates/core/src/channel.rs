//! Near-field cascaded channel and the exact discrete beampattern.
//!
//! Every designed profile is judged here, by summing the element responses
//! directly. Sums run over fixed blocks of elements that are reduced pairwise
//! in a fixed order, so results do not depend on the number of worker threads.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::geometry::{ElementGrid, Geometry};
use crate::numeric::linspace;
use crate::SPEED_OF_LIGHT;

/// Elements per partial sum.
const BLOCK: usize = 1024;
/// Frequencies between exact phasor re-evaluations on a uniform grid.
const ANCHOR: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Narrowband,
    Wideband,
    Custom,
}

impl ProfileKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProfileKind::Narrowband => "narrowband",
            ProfileKind::Wideband => "wideband",
            ProfileKind::Custom => "custom",
        }
    }
}

/// Per-element phase shifts in `[0, 2π)`, index-aligned with an [`ElementGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfile {
    pub phases: Vec<f64>,
    pub kind: ProfileKind,
}

/// Wraps an angle to `[0, 2π)`.
pub fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs.
    if w >= TAU {
        0.0
    } else {
        w
    }
}

impl PhaseProfile {
    /// Builds a profile from unwrapped phases.
    pub fn from_unwrapped(phases: impl IntoIterator<Item = f64>, kind: ProfileKind) -> Self {
        PhaseProfile {
            phases: phases.into_iter().map(wrap_phase).collect(),
            kind,
        }
    }

    pub fn zeros(n: usize) -> Self {
        PhaseProfile {
            phases: vec![0.0; n],
            kind: ProfileKind::Custom,
        }
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    fn check_aligned(&self, grid: &ElementGrid) -> Result<()> {
        if self.len() != grid.len() {
            return Err(Error::Contract(format!(
                "profile has {} phases but the grid has {} elements",
                self.len(),
                grid.len()
            )));
        }
        Ok(())
    }

    /// CSV with header `x_m,y_m,phase_rad`.
    pub fn write_csv<W: Write>(&self, grid: &ElementGrid, mut w: W) -> Result<()> {
        self.check_aligned(grid)?;
        writeln!(w, "x_m,y_m,phase_rad")?;
        for ((x, y), p) in grid.x.iter().zip(&grid.y).zip(&self.phases) {
            writeln!(w, "{x},{y},{p}")?;
        }
        Ok(())
    }

    /// Reads a `x_m,y_m,phase_rad` CSV written for `grid`.
    ///
    /// Rows must list the grid's elements in order; coordinates are matched
    /// to within a millionth of the pitch.
    pub fn read_csv<R: std::io::Read>(grid: &ElementGrid, r: R) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(r);
        let mut phases = Vec::with_capacity(grid.len());
        let tol = 1e-6 * grid.spacing;
        for (e, row) in reader.deserialize::<(f64, f64, f64)>().enumerate() {
            let (x, y, p) = row.map_err(|err| Error::ConfigParse(format!("profile CSV: {err}")))?;
            if e >= grid.len() || (x - grid.x[e]).abs() > tol || (y - grid.y[e]).abs() > tol {
                return Err(Error::Contract(format!(
                    "profile row {} at ({x}, {y}) does not match the element grid",
                    e + 1
                )));
            }
            phases.push(wrap_phase(p));
        }
        let profile = PhaseProfile {
            phases,
            kind: ProfileKind::Custom,
        };
        profile.check_aligned(grid)?;
        Ok(profile)
    }
}

/// Free-space amplitude coefficient `c² / (2πf)²` of the cascaded channel.
pub fn amplitude_coefficient(f: f64) -> f64 {
    let k = SPEED_OF_LIGHT / (2.0 * PI * f);
    k * k
}

/// Cascaded TX → element → target channel through the aperture point `(x, y)`:
/// `c²·exp(−j2πf·l/c) / ((2πf)²·l_tx·l_dt)`.
pub fn cascaded_channel(geom: &Geometry, x: f64, y: f64, f: f64) -> Complex64 {
    let l_tx = geom.l_tx_at(x, y);
    let l_dt = geom.l_dt_at(x, y);
    let mag = amplitude_coefficient(f) / (l_tx * l_dt);
    Complex64::from_polar(mag, -TAU * fractional_cycles(f, l_tx + l_dt))
}

/// `f·l/c` reduced to `[0, 1)` before it is turned into an angle.
#[inline]
fn fractional_cycles(f: f64, l: f64) -> f64 {
    let cycles = f * l / SPEED_OF_LIGHT;
    cycles - cycles.floor()
}

/// Frequency-domain SISO gain `g(f) = Σ exp(jφ_e)·h(x_e, y_e, f)`.
pub fn siso_gain(grid: &ElementGrid, profile: &PhaseProfile, f: f64) -> Result<Complex64> {
    profile.check_aligned(grid)?;
    let partials: Vec<Complex64> = (0..grid.len())
        .into_par_iter()
        .step_by(BLOCK)
        .map(|start| {
            let end = (start + BLOCK).min(grid.len());
            let mut acc = Complex64::new(0.0, 0.0);
            for e in start..end {
                acc += element_phasor(grid, profile, e, f);
            }
            acc
        })
        .collect();
    Ok(pairwise_complex(&partials) * amplitude_coefficient(f))
}

#[inline]
fn element_phasor(grid: &ElementGrid, profile: &PhaseProfile, e: usize, f: f64) -> Complex64 {
    let w = 1.0 / (grid.l_tx[e] * grid.l_dt[e]);
    let angle = profile.phases[e] - TAU * fractional_cycles(f, grid.l_sum[e]);
    Complex64::from_polar(w, angle)
}

fn pairwise_complex(xs: &[Complex64]) -> Complex64 {
    match xs.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => xs[0],
        n => pairwise_complex(&xs[..n / 2]) + pairwise_complex(&xs[n / 2..]),
    }
}

fn pairwise_vec(parts: &[Vec<Complex64>]) -> Vec<Complex64> {
    match parts.len() {
        1 => parts[0].clone(),
        n => {
            let mut left = pairwise_vec(&parts[..n / 2]);
            let right = pairwise_vec(&parts[n / 2..]);
            for (l, r) in left.iter_mut().zip(right) {
                *l += r;
            }
            left
        }
    }
}

/// Complex gain over a frequency grid, with `|g|²` in dB as a derived view.
#[derive(Debug, Clone, PartialEq)]
pub struct Beampattern {
    pub freqs: Vec<f64>,
    pub gains: Vec<Complex64>,
}

impl Beampattern {
    /// `10·log10|g(f)|²` per frequency.
    pub fn gain_db(&self) -> Vec<f64> {
        self.gains.iter().map(|g| 10.0 * g.norm_sqr().log10()).collect()
    }

    /// Max minus min of `gain_db` over frequencies inside `[lo, hi]`.
    pub fn spread_db(&self, lo: f64, hi: f64) -> f64 {
        let (mut mx, mut mn) = (f64::NEG_INFINITY, f64::INFINITY);
        for (f, db) in self.freqs.iter().zip(self.gain_db()) {
            if *f >= lo && *f <= hi {
                mx = mx.max(db);
                mn = mn.min(db);
            }
        }
        mx - mn
    }

    /// Mean of `gain_db` over frequencies inside `[lo, hi]`.
    pub fn mean_db(&self, lo: f64, hi: f64) -> f64 {
        let sel: Vec<f64> = self
            .freqs
            .iter()
            .zip(self.gain_db())
            .filter(|(f, _)| **f >= lo && **f <= hi)
            .map(|(_, db)| db)
            .collect();
        sel.iter().sum::<f64>() / sel.len() as f64
    }

    /// CSV with header `freq_hz,gain_db,gain_re,gain_im`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "freq_hz,gain_db,gain_re,gain_im")?;
        for ((f, g), db) in self.freqs.iter().zip(&self.gains).zip(self.gain_db()) {
            writeln!(w, "{f},{db},{},{}", g.re, g.im)?;
        }
        Ok(())
    }
}

/// Default evaluation grid: `n_freq_samples` points spanning the band.
pub fn band_frequencies(cfg: &ScenarioConfig) -> Vec<f64> {
    let (lo, hi) = cfg.band();
    linspace(lo, hi, cfg.n_freq_samples)
}

/// `siso_gain` at every frequency in `freqs`.
///
/// Uniform grids use a per-element phasor recurrence, re-anchored every
/// [`ANCHOR`] steps; other grids evaluate each phasor directly.
pub fn beampattern(grid: &ElementGrid, profile: &PhaseProfile, freqs: &[f64]) -> Result<Beampattern> {
    profile.check_aligned(grid)?;
    if freqs.is_empty() {
        return Err(Error::Contract("empty frequency grid".into()));
    }
    if freqs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Contract("frequencies must be strictly increasing".into()));
    }
    let uniform = is_uniform(freqs);
    let partials: Vec<Vec<Complex64>> = (0..grid.len())
        .into_par_iter()
        .step_by(BLOCK)
        .map(|start| {
            let end = (start + BLOCK).min(grid.len());
            if uniform {
                block_uniform(grid, profile, start..end, freqs)
            } else {
                block_direct(grid, profile, start..end, freqs)
            }
        })
        .collect();
    let sums = pairwise_vec(&partials);
    let gains = sums
        .into_iter()
        .zip(freqs)
        .map(|(s, &f)| s * amplitude_coefficient(f))
        .collect();
    Ok(Beampattern {
        freqs: freqs.to_vec(),
        gains,
    })
}

fn is_uniform(freqs: &[f64]) -> bool {
    if freqs.len() < 3 {
        return true;
    }
    let n = freqs.len() - 1;
    let step = (freqs[n] - freqs[0]) / n as f64;
    freqs
        .iter()
        .enumerate()
        .all(|(k, &f)| (f - (freqs[0] + step * k as f64)).abs() <= 1e-9 * step)
}

fn block_direct(
    grid: &ElementGrid,
    profile: &PhaseProfile,
    range: std::ops::Range<usize>,
    freqs: &[f64],
) -> Vec<Complex64> {
    freqs
        .iter()
        .map(|&f| {
            let mut acc = Complex64::new(0.0, 0.0);
            for e in range.clone() {
                acc += element_phasor(grid, profile, e, f);
            }
            acc
        })
        .collect()
}

fn block_uniform(
    grid: &ElementGrid,
    profile: &PhaseProfile,
    range: std::ops::Range<usize>,
    freqs: &[f64],
) -> Vec<Complex64> {
    let n = range.len();
    let f0 = freqs[0];
    let step = if freqs.len() > 1 {
        (freqs[freqs.len() - 1] - f0) / (freqs.len() - 1) as f64
    } else {
        0.0
    };
    let mut re = vec![0.0; n];
    let mut im = vec![0.0; n];
    let mut step_re = vec![0.0; n];
    let mut step_im = vec![0.0; n];
    for (i, e) in range.clone().enumerate() {
        let (s, c) = (-TAU * fractional_cycles(step, grid.l_sum[e])).sin_cos();
        step_re[i] = c;
        step_im[i] = s;
    }
    let mut out = Vec::with_capacity(freqs.len());
    for (k, &f) in freqs.iter().enumerate() {
        if k % ANCHOR == 0 {
            for (i, e) in range.clone().enumerate() {
                let z = element_phasor(grid, profile, e, f);
                re[i] = z.re;
                im[i] = z.im;
            }
        }
        let (mut sr, mut si) = (0.0, 0.0);
        for i in 0..n {
            sr += re[i];
            si += im[i];
        }
        out.push(Complex64::new(sr, si));
        if (k + 1) % ANCHOR != 0 {
            for i in 0..n {
                let (a, b) = (re[i], im[i]);
                re[i] = a * step_re[i] - b * step_im[i];
                im[i] = a * step_im[i] + b * step_re[i];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Profile;

    fn desk_grid(gamma_c_deg: f64) -> ElementGrid {
        let cfg = ScenarioConfig::paper_default()
            .with_profile(Profile::Desk)
            .with_gamma_c_deg(gamma_c_deg);
        ElementGrid::build(&cfg).unwrap()
    }

    fn std_profile(grid: &ElementGrid, f_c: f64) -> PhaseProfile {
        PhaseProfile::from_unwrapped(
            grid.l_sum.iter().map(|l| TAU * f_c * l / SPEED_OF_LIGHT),
            ProfileKind::Narrowband,
        )
    }

    #[test]
    fn origin_channel_magnitude() {
        let g = Geometry::new(&ScenarioConfig::boresight(1.0, 0.5, 5.0)).unwrap();
        let f = 30e9;
        let h = cascaded_channel(&g, 0.0, 0.0, f);
        let expected = SPEED_OF_LIGHT.powi(2) / ((TAU * f).powi(2) * 0.5 * 5.0);
        assert!((h.norm() / expected - 1.0).abs() < 1e-14);
    }

    #[test]
    fn channel_phase_is_path_delay() {
        let g = Geometry::new(&ScenarioConfig::paper_default()).unwrap();
        for k in 0..100 {
            let (x, y) = (0.9 * (k as f64 * 0.37).cos(), 0.4 * (k as f64 * 1.3).sin());
            let f = 28e9 + 4e7 * k as f64;
            let h = cascaded_channel(&g, x, y, f);
            let expected = wrap_phase(-TAU * f * g.path_sum(x, y) / SPEED_OF_LIGHT);
            let diff = (wrap_phase(h.arg()) - expected).abs();
            assert!(diff.min(TAU - diff) < 1e-9, "{diff}");
        }
    }

    #[test]
    fn doubling_frequency_quarters_magnitude() {
        let g = Geometry::new(&ScenarioConfig::paper_default()).unwrap();
        let a = cascaded_channel(&g, 0.1, 0.2, 15e9).norm();
        let b = cascaded_channel(&g, 0.1, 0.2, 30e9).norm();
        assert!((a / b - 4.0).abs() < 1e-12);
    }

    #[test]
    fn single_element_phase_cancels() {
        let mut cfg = ScenarioConfig::boresight(1.0, 0.5, 5.0);
        cfg.radius_m = cfg.spacing() / 2.0;
        let grid = ElementGrid::build(&cfg).unwrap();
        let f = 29.3e9;
        let p = PhaseProfile::from_unwrapped(
            [TAU * f * grid.l_sum[0] / SPEED_OF_LIGHT],
            ProfileKind::Custom,
        );
        let g = siso_gain(&grid, &p, f).unwrap();
        assert!(g.re > 0.0 && g.im.abs() < 1e-9 * g.re);
    }

    #[test]
    fn narrowband_gain_is_the_magnitude_sum_at_carrier() {
        let grid = desk_grid(10.0);
        let f_c = 30e9;
        let p = std_profile(&grid, f_c);
        let g = siso_gain(&grid, &p, f_c).unwrap();
        let bound: f64 = (0..grid.len())
            .map(|e| amplitude_coefficient(f_c) / (grid.l_tx[e] * grid.l_dt[e]))
            .sum();
        assert!((g.norm() / bound - 1.0).abs() < 1e-9);
        let zero = siso_gain(&grid, &PhaseProfile::zeros(grid.len()), f_c).unwrap();
        assert!(zero.norm() < g.norm());
    }

    #[test]
    fn misaligned_profile_is_rejected() {
        let grid = desk_grid(0.0);
        assert!(matches!(
            siso_gain(&grid, &PhaseProfile::zeros(3), 30e9),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn uniform_recurrence_matches_direct_evaluation() {
        let grid = desk_grid(20.0);
        let p = std_profile(&grid, 30e9);
        let freqs = linspace(28e9, 32e9, 200);
        let bp = beampattern(&grid, &p, &freqs).unwrap();
        for k in [0, 1, 63, 64, 65, 130, 199] {
            let direct = siso_gain(&grid, &p, freqs[k]).unwrap();
            assert!((bp.gains[k] - direct).norm() <= 1e-10 * direct.norm().max(1e-30));
        }
    }

    #[test]
    fn one_frequency_matches_siso_gain() {
        let grid = desk_grid(0.0);
        let p = std_profile(&grid, 30e9);
        let bp = beampattern(&grid, &p, &[31e9]).unwrap();
        assert_eq!(bp.gains[0], siso_gain(&grid, &p, 31e9).unwrap());
    }

    #[test]
    fn single_element_spread_is_the_free_space_term() {
        let mut cfg = ScenarioConfig::boresight(1.0, 0.5, 10.0);
        cfg.radius_m = cfg.spacing() / 2.0;
        let grid = ElementGrid::build(&cfg).unwrap();
        let p = std_profile(&grid, 30e9);
        let bp = beampattern(&grid, &p, &linspace(28e9, 32e9, 200)).unwrap();
        // |g|² ∝ η(f)² ∝ 1/f⁴: 40·log10(32/28) = 2.32 dB over the band.
        let spread = bp.spread_db(28e9, 32e9);
        assert!((spread - 40.0 * (32.0f64 / 28.0).log10()).abs() < 1e-9, "{spread}");
        // The amplitude coefficient alone moves by about 1.2 dB.
        let eta_db = 10.0 * (amplitude_coefficient(28e9) / amplitude_coefficient(32e9)).log10();
        assert!((eta_db - 1.2).abs() < 0.05, "{eta_db}");
    }

    #[test]
    fn rejects_bad_frequency_grids() {
        let grid = desk_grid(0.0);
        let p = PhaseProfile::zeros(grid.len());
        assert!(beampattern(&grid, &p, &[]).is_err());
        assert!(beampattern(&grid, &p, &[30e9, 29e9]).is_err());
    }

    #[test]
    fn csv_header_and_rows() {
        let bp = Beampattern {
            freqs: vec![1.0, 2.0],
            gains: vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.1)],
        };
        let mut buf = Vec::new();
        bp.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "freq_hz,gain_db,gain_re,gain_im");
        assert_eq!(lines[1], "1,0,1,0");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn profile_csv_round_trip() {
        let grid = desk_grid(10.0);
        let p = std_profile(&grid, 30e9);
        let mut buf = Vec::new();
        p.write_csv(&grid, &mut buf).unwrap();
        assert!(buf.starts_with(b"x_m,y_m,phase_rad\n"));
        let back = PhaseProfile::read_csv(&grid, buf.as_slice()).unwrap();
        assert_eq!(back.phases, p.phases);
        let other = desk_grid(0.0);
        let short = b"x_m,y_m,phase_rad\n0,0,1\n";
        assert!(PhaseProfile::read_csv(&other, &short[..]).is_err());
    }

    #[test]
    fn wrap_phase_range() {
        for v in [-1e-300, -TAU, 0.0, TAU, 7.0 * TAU + 0.1, -0.5] {
            let w = wrap_phase(v);
            assert!((0.0..TAU).contains(&w), "{v} -> {w}");
        }
    }
}
