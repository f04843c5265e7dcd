use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::io::Write;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::channel::{beampattern, Beampattern};
use crate::config::ScenarioConfig;
use crate::design::design_wideband_profile;
use crate::error::{Error, Result};
use crate::geometry::ElementGrid;
use crate::numeric::linspace;
use crate::SPEED_OF_LIGHT;

/// Sampling rate of the pulse in multiples of its bandwidth.
const OVERSAMPLING: f64 = 8.0;
/// Zero padding of the energy spectrum before the inverse transform.
const DELAY_PADDING: usize = 8;
/// Delay window half-width in units of the inverse 3-dB bandwidth.
const DELAY_WINDOW: f64 = 40.0;
/// Channel evaluation covers `f_c ± CHANNEL_SPAN·B`; outside it the channel is zero.
const CHANNEL_SPAN: f64 = 0.75;

/// Complex spectrum on a uniform, increasing baseband frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub freqs: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Set when the pulse is too short for its spectrum to be flat.
    pub warning: Option<String>,
}

impl Spectrum {
    pub fn df(&self) -> f64 {
        self.freqs[1] - self.freqs[0]
    }

    /// `Σ |S|²·df`.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.df()
    }

    /// Energy between `lo` and `hi` (Hz).
    pub fn energy_within(&self, lo: f64, hi: f64) -> f64 {
        self.freqs
            .iter()
            .zip(&self.values)
            .filter(|(f, _)| **f >= lo && **f <= hi)
            .map(|(_, v)| v.norm_sqr())
            .sum::<f64>()
            * self.df()
    }

    /// Distance between the outermost frequencies where `|S|²` reaches half its peak.
    pub fn bandwidth_3db(&self) -> f64 {
        let peak = self.values.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
        let above: Vec<f64> = self
            .freqs
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| v.norm_sqr() >= 0.5 * peak)
            .map(|(f, _)| *f)
            .collect();
        match (above.first(), above.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Spectrum {
            freqs: self.freqs.clone(),
            values: self.values.iter().map(|v| v * k).collect(),
            warning: self.warning.clone(),
        }
    }
}

/// Spectrum of the unit-amplitude chirp `exp(jπ(B/T)t²)`, `|t| ≤ T/2`.
///
/// The pulse is sampled at eight times its bandwidth and zero padded to at
/// least twice its length. Values approximate the continuous transform.
pub fn lfm_baseband_spectrum(bandwidth: f64, duration: f64) -> Result<Spectrum> {
    if !(bandwidth > 0.0 && duration > 0.0) {
        return Err(Error::Domain(format!(
            "chirp needs positive bandwidth and duration, got {bandwidth} Hz and {duration} s"
        )));
    }
    let tb = bandwidth * duration;
    let fs = OVERSAMPLING * bandwidth;
    let dt = 1.0 / fs;
    let n = (duration * fs).round() as usize + 1;
    let nfft = (2 * n).next_power_of_two();
    let t0 = -0.5 * duration;
    let rate = PI * bandwidth / duration;
    let mut buf: Vec<Complex64> = (0..nfft)
        .map(|i| {
            if i < n {
                let t = t0 + i as f64 * dt;
                Complex64::from_polar(1.0, rate * t * t)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    FftPlanner::new().plan_fft_forward(nfft).process(&mut buf);
    let df = fs / nfft as f64;
    let half = nfft / 2;
    let mut freqs = Vec::with_capacity(nfft);
    let mut values = Vec::with_capacity(nfft);
    for k in 0..nfft {
        // Ascending order: negative frequencies first.
        let idx = (k + half) % nfft;
        let f = (k as f64 - half as f64) * df;
        let shift = Complex64::from_polar(dt, -2.0 * PI * f * t0);
        freqs.push(f);
        values.push(buf[idx] * shift);
    }
    let warning = (tb < 10.0).then(|| {
        format!("time-bandwidth product {tb} is below 10; the chirp spectrum is not flat")
    });
    Ok(Spectrum {
        freqs,
        values,
        warning,
    })
}

/// `S(f)·g(f_c + f)` with `g` interpolated linearly between beampattern samples.
///
/// Outside the beampattern's frequency range the channel is taken as zero.
pub fn apply_beamforming_filter(spectrum: &Spectrum, bp: &Beampattern, f_c: f64) -> Result<Spectrum> {
    let (lo, hi) = (bp.freqs[0], bp.freqs[bp.freqs.len() - 1]);
    let first = spectrum.freqs[0] + f_c;
    let last = spectrum.freqs[spectrum.freqs.len() - 1] + f_c;
    if last < lo || first > hi {
        return Err(Error::Contract(
            "signal and channel frequency ranges do not overlap".into(),
        ));
    }
    let values = spectrum
        .freqs
        .iter()
        .zip(&spectrum.values)
        .map(|(&f, &s)| s * interp_gain(bp, f + f_c))
        .collect();
    Ok(Spectrum {
        freqs: spectrum.freqs.clone(),
        values,
        warning: spectrum.warning.clone(),
    })
}

fn interp_gain(bp: &Beampattern, f: f64) -> Complex64 {
    let xs = &bp.freqs;
    let n = xs.len();
    if f < xs[0] || f > xs[n - 1] {
        return Complex64::new(0.0, 0.0);
    }
    if n == 1 {
        return bp.gains[0];
    }
    let j = xs.partition_point(|&v| v <= f).clamp(1, n - 1);
    let t = (f - xs[j - 1]) / (xs[j] - xs[j - 1]);
    bp.gains[j - 1] * (1.0 - t) + bp.gains[j] * t
}

/// Zero-Doppler ambiguity magnitude over a window of delays.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbiguityCurve {
    pub delay_s: Vec<f64>,
    /// `|χ(τ)|` normalized to 1 at zero delay.
    pub magnitude: Vec<f64>,
    /// Width of the main lobe at `|χ| = 1/√2`.
    pub width_3db_s: f64,
}

/// `|χ(τ)|` from the inverse transform of `|S(f)|²`, over a default delay window.
pub fn ambiguity_zero_doppler(spectrum: &Spectrum) -> Result<AmbiguityCurve> {
    let bw = spectrum.bandwidth_3db().max(spectrum.df());
    ambiguity_zero_doppler_window(spectrum, DELAY_WINDOW / bw)
}

/// As [`ambiguity_zero_doppler`], keeping delays with `|τ| ≤ max_delay`.
pub fn ambiguity_zero_doppler_window(spectrum: &Spectrum, max_delay: f64) -> Result<AmbiguityCurve> {
    let n = spectrum.values.len();
    let power: Vec<f64> = spectrum.values.iter().map(|v| v.norm_sqr()).collect();
    if !power.iter().any(|p| *p > 0.0) {
        return Err(Error::UndefinedPeak);
    }
    let df = spectrum.df();
    let m = (n * DELAY_PADDING).next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    // Place each bin at its frequency index modulo m.
    let k0 = (spectrum.freqs[0] / df).round() as i64;
    for (i, p) in power.iter().enumerate() {
        let k = (k0 + i as i64).rem_euclid(m as i64) as usize;
        buf[k] = Complex64::new(*p, 0.0);
    }
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    let dtau = 1.0 / (m as f64 * df);
    let peak = buf[0].norm();
    let half = ((max_delay / dtau).floor() as usize).min(m / 2 - 1).max(1);
    let mut delay_s = Vec::with_capacity(2 * half + 1);
    let mut magnitude = Vec::with_capacity(2 * half + 1);
    for j in -(half as i64)..=(half as i64) {
        delay_s.push(j as f64 * dtau);
        magnitude.push(buf[j.rem_euclid(m as i64) as usize].norm() / peak);
    }
    let width_3db_s = mainlobe_width(&delay_s, &magnitude, half)?;
    Ok(AmbiguityCurve {
        delay_s,
        magnitude,
        width_3db_s,
    })
}

fn mainlobe_width(delay: &[f64], mag: &[f64], center: usize) -> Result<f64> {
    let crossing = |step: i64| -> Option<f64> {
        let mut i = center as i64;
        loop {
            let j = i + step;
            if j < 0 || j as usize >= mag.len() {
                return None;
            }
            let (a, b) = (mag[i as usize], mag[j as usize]);
            if b < FRAC_1_SQRT_2 {
                let t = (a - FRAC_1_SQRT_2) / (a - b);
                return Some(delay[i as usize] + t * (delay[j as usize] - delay[i as usize]));
            }
            i = j;
        }
    };
    match (crossing(-1), crossing(1)) {
        (Some(l), Some(r)) => Ok(r - l),
        _ => Err(Error::Inconclusive(
            "ambiguity main lobe wider than the delay window".into(),
        )),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AmbiguityReport {
    pub time_bandwidth: f64,
    pub width_lfm_s: f64,
    pub width_narrowband_s: f64,
    pub width_wideband_s: f64,
    /// Distance resolution `c·width/2` of each signal (m).
    pub resolution_lfm_m: f64,
    pub resolution_narrowband_m: f64,
    pub resolution_wideband_m: f64,
    /// Narrowband width over wideband width.
    pub resolution_ratio: f64,
}

/// Spectra and ambiguity curves behind an [`AmbiguityReport`].
#[derive(Debug, Clone)]
pub struct AmbiguityRun {
    pub report: AmbiguityReport,
    pub lfm: Spectrum,
    pub narrowband: Spectrum,
    pub wideband: Spectrum,
    pub curves: [AmbiguityCurve; 3],
}

impl AmbiguityRun {
    /// CSV `freq_hz,lfm,narrowband,wideband` of spectrum magnitudes within the channel span.
    pub fn write_spectra_csv<W: Write>(&self, b: f64, mut w: W) -> Result<()> {
        writeln!(w, "freq_hz,lfm,narrowband,wideband")?;
        for i in 0..self.lfm.freqs.len() {
            let f = self.lfm.freqs[i];
            if f.abs() <= CHANNEL_SPAN * b {
                writeln!(
                    w,
                    "{f},{},{},{}",
                    self.lfm.values[i].norm(),
                    self.narrowband.values[i].norm(),
                    self.wideband.values[i].norm()
                )?;
            }
        }
        Ok(())
    }

    /// CSV `delay_s,lfm,narrowband,wideband` of normalized `|χ|`.
    pub fn write_ambiguity_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "delay_s,lfm,narrowband,wideband")?;
        let [a, b, c] = &self.curves;
        for i in 0..a.delay_s.len() {
            writeln!(w, "{},{},{},{}", a.delay_s[i], a.magnitude[i], b.magnitude[i], c.magnitude[i])?;
        }
        Ok(())
    }
}

fn peak_normalized(bp: Beampattern, lo: f64, hi: f64) -> Beampattern {
    let peak = bp
        .freqs
        .iter()
        .zip(&bp.gains)
        .filter(|(f, _)| **f >= lo && **f <= hi)
        .map(|(_, g)| g.norm())
        .fold(0.0, f64::max);
    Beampattern {
        gains: bp.gains.iter().map(|g| g / peak).collect(),
        freqs: bp.freqs,
    }
}

/// Passes the configured LFM pulse through both designed profiles and compares
/// the delay resolution. Each channel is normalized to its in-band peak.
pub fn evaluate_ambiguity(cfg: &ScenarioConfig) -> Result<AmbiguityRun> {
    let b = cfg.bandwidth_hz;
    let grid = ElementGrid::build(cfg)?;
    let design = design_wideband_profile(cfg, &grid)?;
    let freqs = linspace(
        cfg.f_c_hz - CHANNEL_SPAN * b,
        cfg.f_c_hz + CHANNEL_SPAN * b,
        6 * cfg.n_freq_samples + 1,
    );
    let (lo, hi) = cfg.band();
    let nb_bp = peak_normalized(beampattern(&grid, &design.narrowband, &freqs)?, lo, hi);
    let wb_bp = peak_normalized(beampattern(&grid, &design.wideband, &freqs)?, lo, hi);

    let lfm = lfm_baseband_spectrum(b, cfg.lfm_duration_s)?;
    let narrowband = apply_beamforming_filter(&lfm, &nb_bp, cfg.f_c_hz)?;
    let wideband = apply_beamforming_filter(&lfm, &wb_bp, cfg.f_c_hz)?;

    let narrowest = [&lfm, &narrowband, &wideband]
        .iter()
        .map(|s| s.bandwidth_3db())
        .fold(f64::INFINITY, f64::min)
        .max(lfm.df());
    let window = DELAY_WINDOW / narrowest;
    let c_lfm = ambiguity_zero_doppler_window(&lfm, window)?;
    let c_nb = ambiguity_zero_doppler_window(&narrowband, window)?;
    let c_wb = ambiguity_zero_doppler_window(&wideband, window)?;
    let to_m = |w: f64| SPEED_OF_LIGHT * w / 2.0;
    let report = AmbiguityReport {
        time_bandwidth: b * cfg.lfm_duration_s,
        width_lfm_s: c_lfm.width_3db_s,
        width_narrowband_s: c_nb.width_3db_s,
        width_wideband_s: c_wb.width_3db_s,
        resolution_lfm_m: to_m(c_lfm.width_3db_s),
        resolution_narrowband_m: to_m(c_nb.width_3db_s),
        resolution_wideband_m: to_m(c_wb.width_3db_s),
        resolution_ratio: c_nb.width_3db_s / c_wb.width_3db_s,
    };
    Ok(AmbiguityRun {
        report,
        lfm,
        narrowband,
        wideband,
        curves: [c_lfm, c_nb, c_wb],
    })
}
