use std::fs;
use std::path::Path;

use risbeam::run::{main_with_args, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION};
use tempfile::TempDir;

const DESK_GAMMA_C: &str = r#"
f_c_hz = 30e9
bandwidth_hz = 4e9
radius_m = 0.25
l_tx_m = 0.5
l_dt_m = 3.0
gamma_c_deg = 15.0
"#;

fn run(args: &[&str]) -> i32 {
    let mut full = vec!["risbeam"];
    full.extend_from_slice(args);
    main_with_args(full)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn design_writes_all_outputs_and_manifest() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("d");
    assert_eq!(run(&["design", "--profile", "desk", "--out", path_str(&out)]), EXIT_OK);
    for name in [
        "profile_narrowband.csv",
        "profile_wideband.csv",
        "amplitude.csv",
        "inst_freq.csv",
        "phase_des.csv",
        "config.toml",
        "manifest.json",
    ] {
        assert!(out.join(name).is_file(), "{name} missing");
    }
    let m = manifest(&out);
    assert_eq!(m["subcommand"], "design");
    assert_eq!(m["outputs"].as_array().unwrap().len(), 7);
    assert_eq!(m["defaults"]["crate_version"], env!("CARGO_PKG_VERSION"));
    let header = fs::read_to_string(out.join("profile_wideband.csv")).unwrap();
    assert!(header.starts_with("x_m,y_m,phase_rad"));
}

#[test]
fn refuses_to_overwrite_without_force() {
    let tmp = TempDir::new().unwrap();
    let out = path_str(tmp.path());
    assert_eq!(run(&["design", "--profile", "desk", "--out", out]), EXIT_OK);
    assert_eq!(run(&["design", "--profile", "desk", "--out", out]), EXIT_USAGE);
    assert_eq!(run(&["design", "--profile", "desk", "--out", out, "--force"]), EXIT_OK);
}

#[test]
fn gamma_and_gamma_c_give_identical_profiles() {
    let tmp = TempDir::new().unwrap();
    let cfg_c = tmp.path().join("c.toml");
    fs::write(&cfg_c, DESK_GAMMA_C).unwrap();
    let c = risbeam::ScenarioConfig::from_toml_str(DESK_GAMMA_C).unwrap();
    let gamma = risbeam::geometry::gamma_from_gamma_c(c.l_tx_m, c.l_dt_m, 15f64.to_radians()).unwrap();
    let cfg_g = tmp.path().join("g.toml");
    fs::write(
        &cfg_g,
        DESK_GAMMA_C.replace("gamma_c_deg = 15.0", &format!("gamma_deg = {:?}", gamma.to_degrees())),
    )
    .unwrap();
    let (oc, og) = (tmp.path().join("oc"), tmp.path().join("og"));
    assert_eq!(run(&["design", "--config", path_str(&cfg_c), "--out", path_str(&oc)]), EXIT_OK);
    assert_eq!(run(&["design", "--config", path_str(&cfg_g), "--out", path_str(&og)]), EXIT_OK);
    for name in ["profile_narrowband.csv", "profile_wideband.csv", "amplitude.csv", "phase_des.csv"] {
        let a = fs::read_to_string(oc.join(name)).unwrap();
        let b = fs::read_to_string(og.join(name)).unwrap();
        let max_diff = a
            .lines()
            .zip(b.lines())
            .skip(1)
            .flat_map(|(x, y)| {
                x.split(',')
                    .zip(y.split(','))
                    .map(|(p, q)| (p.parse::<f64>().unwrap() - q.parse::<f64>().unwrap()).abs())
                    .collect::<Vec<_>>()
            })
            .fold(0.0, f64::max);
        assert!(max_diff < 1e-6, "{name}: {max_diff}");
    }
}

#[test]
fn missing_key_is_named() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("bad.toml");
    fs::write(&cfg, DESK_GAMMA_C.replace("f_c_hz = 30e9", "")).unwrap();
    let err = risbeam::ScenarioConfig::from_file(&cfg).unwrap_err();
    assert!(err.to_string().contains("f_c_hz"), "{err}");
    let out = tmp.path().join("o");
    assert_eq!(run(&["design", "--config", path_str(&cfg), "--out", path_str(&out)]), EXIT_USAGE);
}

#[test]
fn unknown_subcommand_is_usage_error() {
    assert_eq!(run(&["frobnicate"]), EXIT_USAGE);
}

#[test]
fn single_frequency_beampattern() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("one.toml");
    fs::write(&cfg, format!("{DESK_GAMMA_C}n_freq_samples = 1\n")).unwrap();
    let out = tmp.path().join("o");
    assert_eq!(
        run(&["beampattern", "--config", path_str(&cfg), "--out", path_str(&out), "--select", "wideband"]),
        EXIT_OK
    );
    let text = fs::read_to_string(out.join("beampattern_wideband.csv")).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(!out.join("beampattern_narrowband.csv").exists());
}

#[test]
fn custom_profile_matches_designed() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path().join("d");
    let b = tmp.path().join("b");
    let c = tmp.path().join("c");
    assert_eq!(run(&["design", "--profile", "desk", "--out", path_str(&d)]), EXIT_OK);
    assert_eq!(run(&["beampattern", "--profile", "desk", "--out", path_str(&b)]), EXIT_OK);
    let csv = d.join("profile_wideband.csv");
    assert_eq!(
        run(&["beampattern", "--profile", "desk", "--out", path_str(&c), "--profile-csv", path_str(&csv)]),
        EXIT_OK
    );
    let designed = fs::read_to_string(b.join("beampattern_wideband.csv")).unwrap();
    let custom = fs::read_to_string(c.join("beampattern_custom.csv")).unwrap();
    assert_eq!(designed, custom);
}

#[test]
fn single_subcarrier_rate() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("one.toml");
    fs::write(&cfg, format!("{DESK_GAMMA_C}n_sub = 1\n")).unwrap();
    let out = tmp.path().join("o");
    assert_eq!(run(&["rate", "--config", path_str(&cfg), "--out", path_str(&out)]), EXIT_OK);
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("rate.json")).unwrap()).unwrap();
    assert_eq!(r["freqs_hz"].as_array().unwrap().len(), 1);
    assert!(r["rate_wideband"].as_f64().unwrap().is_finite());
}

#[test]
fn rate_sweep_keeps_missing_axis() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("o");
    assert_eq!(
        run(&["rate", "--profile", "desk", "--out", path_str(&out), "--sweep-l-dt-m", "1,2,4"]),
        EXIT_OK
    );
    let text = fs::read_to_string(out.join("rate_sweep.csv")).unwrap();
    let rows: Vec<_> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.split(',').nth(1).unwrap().parse::<f64>().unwrap() == 0.0));
}

#[test]
fn ambiguity_writes_report_and_curves() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("o");
    assert_eq!(run(&["ambiguity", "--profile", "desk", "--out", path_str(&out)]), EXIT_OK);
    let r: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("ambiguity.json")).unwrap()).unwrap();
    assert!(r["width_lfm_s"].as_f64().unwrap() > 0.0);
    assert!(fs::read_to_string(out.join("ambiguity_curves.csv")).unwrap().starts_with("delay_s,lfm,narrowband,wideband"));
    assert!(out.join("ambiguity_spectra.csv").is_file());
}

#[test]
fn validate_passes_on_desk_default() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("o");
    assert_eq!(run(&["validate", "--profile", "desk", "--out", path_str(&out)]), EXIT_OK);
    let m = manifest(&out);
    assert_eq!(m["validation_pass"], true);
}

#[test]
fn validate_fails_with_impossible_threshold() {
    let tmp = TempDir::new().unwrap();
    let t = tmp.path().join("t.toml");
    fs::write(&t, "riemann = 1e-12\n").unwrap();
    let out = tmp.path().join("o");
    assert_eq!(
        run(&["validate", "--profile", "desk", "--out", path_str(&out), "--thresholds", path_str(&t)]),
        EXIT_VALIDATION
    );
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("validation.json")).unwrap()).unwrap();
    assert_eq!(v["pass"], false);
}

#[test]
fn thread_count_does_not_change_outputs() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(run(&["beampattern", "--profile", "desk", "--threads", "1", "--out", path_str(&a)]), EXIT_OK);
    assert_eq!(run(&["beampattern", "--profile", "desk", "--threads", "4", "--out", path_str(&b)]), EXIT_OK);
    for name in ["beampattern_narrowband.csv", "beampattern_wideband.csv"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap());
    }
}
