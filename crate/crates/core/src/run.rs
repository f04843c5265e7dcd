//! Command-line surface: subcommands, output files and run manifests.
//!
//! Every subcommand writes its outputs into `--out` together with a
//! `config.toml` snapshot and a `manifest.json` listing all of them. Existing
//! files are never overwritten unless `--force` is given.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::channel::{band_frequencies, beampattern, PhaseProfile};
use crate::config::{self, Profile, ScenarioConfig};
use crate::design::design_wideband_profile;
use crate::error::{Error, Result};
use crate::evaluation::{evaluate_ambiguity, evaluate_rate, sweep_rates, write_sweep_csv};
use crate::geometry::{derive_gamma_c, ElementGrid};
use crate::oracle::{run_validation, Thresholds, ValidationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "risbeam", version, about = "Wideband beamforming design and evaluation for circular reflecting surfaces")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Scenario TOML; defaults to the 1 m boresight reference setup.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Aperture preset overriding `radius_m`.
    #[arg(long, global = true, value_parser = parse_profile)]
    pub profile: Option<Profile>,
    /// Worker threads; all outputs are identical for any value.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Overwrite existing output files.
    #[arg(long, global = true)]
    pub force: bool,
}

fn parse_profile(s: &str) -> std::result::Result<Profile, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Selection {
    Narrowband,
    Wideband,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Design both phase profiles and write the intermediate curves.
    Design,
    /// Evaluate the gain over the band for the selected profiles.
    Beampattern {
        #[arg(long, value_enum, default_value = "both")]
        select: Selection,
        /// Evaluate a profile CSV (x_m,y_m,phase_rad) instead of designing one.
        #[arg(long, conflicts_with = "select")]
        profile_csv: Option<PathBuf>,
    },
    /// Compare spectral efficiency of both profiles, once or over a sweep.
    Rate {
        /// Comma-separated target distances for a sweep (m).
        #[arg(long, value_delimiter = ',')]
        sweep_l_dt_m: Vec<f64>,
        /// Comma-separated tilt angles for a sweep (deg).
        #[arg(long, value_delimiter = ',')]
        sweep_gamma_c_deg: Vec<f64>,
    },
    /// Delay ambiguity of an LFM pulse through both profiles.
    Ambiguity,
    /// Run the brute-force oracle checks.
    Validate {
        /// TOML overriding individual check thresholds.
        #[arg(long)]
        thresholds: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Design => "design",
            Command::Beampattern { .. } => "beampattern",
            Command::Rate { .. } => "rate",
            Command::Ambiguity => "ambiguity",
            Command::Validate { .. } => "validate",
        }
    }
}

/// Built-in defaults recorded with every run.
#[derive(Debug, Clone, Serialize)]
pub struct DefaultsUsed {
    pub crate_version: &'static str,
    pub n_l_samples: usize,
    pub n_freq_samples: usize,
    pub tx_power_w: f64,
    pub n_sub: usize,
    pub temperature_k: f64,
    pub lfm_duration_s: f64,
    pub thresholds: Thresholds,
}

impl Default for DefaultsUsed {
    fn default() -> Self {
        DefaultsUsed {
            crate_version: env!("CARGO_PKG_VERSION"),
            n_l_samples: config::DEFAULT_N_L_SAMPLES,
            n_freq_samples: config::DEFAULT_N_FREQ_SAMPLES,
            tx_power_w: config::DEFAULT_TX_POWER_W,
            n_sub: config::DEFAULT_N_SUB,
            temperature_k: config::DEFAULT_TEMPERATURE_K,
            lfm_duration_s: config::DEFAULT_LFM_DURATION_S,
            thresholds: Thresholds::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: ScenarioConfig,
    pub outputs: Vec<PathBuf>,
    pub duration_s: f64,
    pub defaults: DefaultsUsed,
    /// Only set by `validate`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation_pass: Option<bool>,
}

/// Collects output files for one run.
pub struct OutputDir {
    root: PathBuf,
    force: bool,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(root: &Path, force: bool) -> Result<Self> {
        fs::create_dir_all(root)?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            force,
            written: Vec::new(),
        })
    }

    /// Writes `name` through `fill`.
    pub fn write<F>(&mut self, name: &str, fill: F) -> Result<PathBuf>
    where
        F: FnOnce(&mut BufWriter<File>) -> Result<()>,
    {
        let path = self.root.join(name);
        if self.written.contains(&path) {
            return Err(Error::Contract(format!("output {} written twice", path.display())));
        }
        if path.exists() && !self.force {
            return Err(Error::Io(std::io::Error::new(
                std::io::ErrorKind::AlreadyExists,
                format!("{} exists (use --force to overwrite)", path.display()),
            )));
        }
        let mut w = BufWriter::new(File::create(&path)?);
        fill(&mut w)?;
        w.flush()?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn outputs(&self) -> &[PathBuf] {
        &self.written
    }
}

/// Reads the scenario, applying a `--profile` preset.
pub fn load_config(path: Option<&Path>, profile: Option<Profile>) -> Result<ScenarioConfig> {
    let cfg = match path {
        Some(p) => ScenarioConfig::from_file(p)?,
        None => ScenarioConfig::paper_default(),
    };
    let cfg = match profile {
        Some(p) => cfg.with_profile(p),
        None => cfg,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Design outputs: both profiles and the three curves.
pub fn cmd_design(cfg: &ScenarioConfig, out: &mut OutputDir) -> Result<()> {
    let grid = ElementGrid::build(cfg)?;
    let d = design_wideband_profile(cfg, &grid)?;
    out.write("profile_narrowband.csv", |w| d.narrowband.write_csv(&grid, w))?;
    out.write("profile_wideband.csv", |w| d.wideband.write_csv(&grid, w))?;
    out.write("amplitude.csv", |w| d.amplitude.write_csv(w))?;
    out.write("inst_freq.csv", |w| d.inst_freq.write_csv(w))?;
    out.write("phase_des.csv", |w| d.phase.write_csv(w))?;
    Ok(())
}

pub fn cmd_beampattern(
    cfg: &ScenarioConfig,
    select: Selection,
    profile_csv: Option<&Path>,
    out: &mut OutputDir,
) -> Result<()> {
    let grid = ElementGrid::build(cfg)?;
    let freqs = band_frequencies(cfg);
    if let Some(path) = profile_csv {
        let profile = PhaseProfile::read_csv(&grid, File::open(path)?)?;
        let bp = beampattern(&grid, &profile, &freqs)?;
        out.write("beampattern_custom.csv", |w| bp.write_csv(w))?;
        return Ok(());
    }
    let d = design_wideband_profile(cfg, &grid)?;
    if matches!(select, Selection::Narrowband | Selection::Both) {
        let bp = beampattern(&grid, &d.narrowband, &freqs)?;
        out.write("beampattern_narrowband.csv", |w| bp.write_csv(w))?;
    }
    if matches!(select, Selection::Wideband | Selection::Both) {
        let bp = beampattern(&grid, &d.wideband, &freqs)?;
        out.write("beampattern_wideband.csv", |w| bp.write_csv(w))?;
    }
    Ok(())
}

/// A single rate report, or a sweep when either axis is non-empty. A missing
/// axis stays at the configured value.
pub fn cmd_rate(cfg: &ScenarioConfig, l_dt_m: &[f64], gamma_c_deg: &[f64], out: &mut OutputDir) -> Result<()> {
    if l_dt_m.is_empty() && gamma_c_deg.is_empty() {
        let report = evaluate_rate(cfg)?;
        out.write("rate.json", |w| Ok(serde_json::to_writer_pretty(w, &report)?))?;
        return Ok(());
    }
    let l_axis = if l_dt_m.is_empty() { vec![cfg.l_dt_m] } else { l_dt_m.to_vec() };
    let g_axis = if gamma_c_deg.is_empty() {
        vec![derive_gamma_c(cfg)?.to_degrees()]
    } else {
        gamma_c_deg.to_vec()
    };
    let rows = sweep_rates(cfg, &l_axis, &g_axis)?;
    out.write("rate_sweep.csv", |w| write_sweep_csv(&rows, w))?;
    Ok(())
}

pub fn cmd_ambiguity(cfg: &ScenarioConfig, out: &mut OutputDir) -> Result<()> {
    let run = evaluate_ambiguity(cfg)?;
    if let Some(w) = &run.lfm.warning {
        eprintln!("warning: {w}");
    }
    out.write("ambiguity.json", |w| Ok(serde_json::to_writer_pretty(w, &run.report)?))?;
    out.write("ambiguity_spectra.csv", |w| run.write_spectra_csv(cfg.bandwidth_hz, w))?;
    out.write("ambiguity_curves.csv", |w| run.write_ambiguity_csv(w))?;
    Ok(())
}

pub fn cmd_validate(cfg: &ScenarioConfig, thresholds: &Thresholds, out: &mut OutputDir) -> Result<ValidationReport> {
    let report = run_validation(cfg, thresholds)?;
    out.write("validation.json", |w| Ok(serde_json::to_writer_pretty(w, &report)?))?;
    Ok(report)
}

fn load_thresholds(path: Option<&Path>) -> Result<Thresholds> {
    match path {
        None => Ok(Thresholds::default()),
        Some(p) => {
            let text = fs::read_to_string(p)?;
            toml::from_str(&text).map_err(|e| Error::ConfigParse(format!("{}: {e}", p.display())))
        }
    }
}

/// Runs one parsed command and writes its manifest.
pub fn execute(cli: &Cli) -> Result<RunManifest> {
    let started = Instant::now();
    let c = &cli.common;
    let cfg = load_config(c.config.as_deref(), c.profile)?;
    let mut out = OutputDir::create(&c.out, c.force)?;
    let body = |out: &mut OutputDir| -> Result<Option<bool>> {
        match &cli.command {
            Command::Design => cmd_design(&cfg, out).map(|_| None),
            Command::Beampattern { select, profile_csv } => {
                cmd_beampattern(&cfg, *select, profile_csv.as_deref(), out).map(|_| None)
            }
            Command::Rate {
                sweep_l_dt_m,
                sweep_gamma_c_deg,
            } => cmd_rate(&cfg, sweep_l_dt_m, sweep_gamma_c_deg, out).map(|_| None),
            Command::Ambiguity => cmd_ambiguity(&cfg, out).map(|_| None),
            Command::Validate { thresholds } => {
                let t = load_thresholds(thresholds.as_deref())?;
                cmd_validate(&cfg, &t, out).map(|r| Some(r.pass))
            }
        }
    };
    let validation_pass = match c.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Contract(e.to_string()))?
            .install(|| body(&mut out))?,
        None => body(&mut out)?,
    };
    out.write("config.toml", |w| Ok(w.write_all(cfg.to_toml_string().as_bytes())?))?;
    let mut manifest = RunManifest {
        subcommand: cli.command.name().to_string(),
        config: cfg,
        outputs: out.outputs().to_vec(),
        duration_s: 0.0,
        defaults: DefaultsUsed::default(),
        validation_pass,
    };
    let manifest_path = c.out.join("manifest.json");
    manifest.outputs.push(manifest_path);
    manifest.duration_s = started.elapsed().as_secs_f64();
    out.write("manifest.json", |w| Ok(serde_json::to_writer_pretty(w, &manifest)?))?;
    Ok(manifest)
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(m) if m.validation_pass == Some(false) => {
            eprintln!("validation failed; see {}", cli.common.out.join("validation.json").display());
            EXIT_VALIDATION
        }
        Ok(_) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
