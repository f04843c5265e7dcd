//! Acceptance criteria. Each prints a single PASS/FAIL line; the process fails
//! if any criterion does.

use std::panic;
use std::process::ExitCode;
use std::time::Instant;

use risbeam::channel::{band_frequencies, beampattern};
use risbeam::config::Profile;
use risbeam::design::design_wideband_profile;
use risbeam::evaluation::{evaluate_ambiguity, sweep_rates};
use risbeam::geometry::ElementGrid;
use risbeam::oracle::{check_amplitude_histogram, check_ellipse_residuals, histogram_spacing, run_validation, Thresholds};
use risbeam::ScenarioConfig;

fn verdict(id: u32, pass: bool, detail: &str) -> bool {
    println!("{} criterion {id}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

/// Narrowband and wideband in-band spreads in dB.
fn spreads(cfg: &ScenarioConfig) -> (f64, f64) {
    let grid = ElementGrid::build(cfg).unwrap();
    let d = design_wideband_profile(cfg, &grid).unwrap();
    let freqs = band_frequencies(cfg);
    let (lo, hi) = cfg.band();
    let nb = beampattern(&grid, &d.narrowband, &freqs).unwrap().spread_db(lo, hi);
    let wb = beampattern(&grid, &d.wideband, &freqs).unwrap().spread_db(lo, hi);
    (nb, wb)
}

fn criterion_1_narrowband_squint() -> bool {
    let cfg = ScenarioConfig::paper_default().with_l_dt(10.0);
    let start = Instant::now();
    let grid = ElementGrid::build(&cfg).unwrap();
    let d = design_wideband_profile(&cfg, &grid).unwrap();
    let freqs = band_frequencies(&cfg);
    assert_eq!(freqs.len(), 200);
    let (lo, hi) = cfg.band();
    let spread = beampattern(&grid, &d.narrowband, &freqs).unwrap().spread_db(lo, hi);
    let secs = start.elapsed().as_secs_f64();
    let pass = spread >= 35.0 && secs <= 300.0;
    verdict(
        1,
        pass,
        &format!("narrowband spread {spread:.2} dB (>= 35), {} elements, {secs:.1} s (<= 300)", grid.len())
    )
}

fn criterion_2_wideband_flatness() -> bool {
    let mut parts = Vec::new();
    let mut pass = true;
    for l_dt in [1.0, 10.0, 100.0] {
        let (_, wb) = spreads(&ScenarioConfig::paper_default().with_l_dt(l_dt));
        pass &= wb <= 8.0;
        parts.push(format!("l_dt {l_dt} m: {wb:.2} dB"));
    }
    verdict(2, pass, &format!("wideband spread (<= 8 dB) {}", parts.join(", ")))
}

fn criterion_3_arbitrary_location() -> bool {
    let mut parts = Vec::new();
    let mut pass = true;
    for gc in [10.0, 20.0, 30.0] {
        let (nb, wb) = spreads(&ScenarioConfig::paper_default().with_l_dt(5.0).with_gamma_c_deg(gc));
        pass &= nb - wb >= 15.0;
        parts.push(format!("gamma_c {gc} deg: nb {nb:.2} wb {wb:.2} gap {:.2} dB", nb - wb));
    }
    verdict(3, pass, &format!("spread gap (>= 15 dB) {}", parts.join(", ")))
}

fn criterion_4_rate_increment() -> bool {
    let rows = sweep_rates(
        &ScenarioConfig::paper_default(),
        &[1.0, 2.5, 5.0, 7.5, 10.0],
        &[0.0, 15.0, 30.0, 45.0],
    )
    .unwrap();
    assert_eq!(rows.len(), 20);
    let all_positive = rows.iter().all(|r| r.increment_pct > 0.0);
    let in_range = rows.iter().filter(|r| (5.0..=20.0).contains(&r.increment_pct)).count();
    let (min, max) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| {
        (a.min(r.increment_pct), b.max(r.increment_pct))
    });
    let pass = all_positive && in_range * 5 >= rows.len() * 4;
    verdict(
        4,
        pass,
        &format!("increments {min:.2}..{max:.2} %, {in_range}/20 within [5, 20] %, all positive: {all_positive}")
    )
}

fn criterion_5_distance_resolution() -> bool {
    let run = evaluate_ambiguity(&ScenarioConfig::paper_default().with_l_dt(10.0)).unwrap();
    let r = run.report;
    verdict(
        5,
        r.resolution_ratio >= 1.8,
        &format!(
            "resolution ratio {:.2} (>= 1.8): narrowband {:.2} cm, wideband {:.2} cm, LFM {:.2} cm",
            r.resolution_ratio,
            r.resolution_narrowband_m * 100.0,
            r.resolution_wideband_m * 100.0,
            r.resolution_lfm_m * 100.0
        )
    )
}

fn criterion_6_property_suite() -> bool {
    let start = Instant::now();
    let t = Thresholds::default();
    let desk = ScenarioConfig::paper_default().with_profile(Profile::Desk);
    let report = run_validation(&desk, &t).unwrap();
    let mut failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{} {:.3e} > {:.1e}", c.name, c.metric, c.threshold))
        .collect();

    let tilted = desk.with_gamma_c_deg(30.0);
    let extra = [
        check_ellipse_residuals(&tilted, 64, 64, t.ellipse_residual).unwrap(),
        check_amplitude_histogram(&tilted, 64, histogram_spacing(&tilted), t.histogram_rms).unwrap(),
    ];
    failed.extend(
        extra
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("tilted {} {:.3e} > {:.1e}", c.name, c.metric, c.threshold)),
    );
    let secs = start.elapsed().as_secs_f64();
    if secs > 60.0 {
        failed.push(format!("runtime {secs:.1} s > 60 s"));
    }
    let summary = report
        .checks
        .iter()
        .map(|c| format!("{} {:.2e}", c.name, c.metric))
        .collect::<Vec<_>>()
        .join(", ");
    let detail = if failed.is_empty() {
        format!("{summary}; {secs:.1} s")
    } else {
        format!("failed: {}", failed.join("; "))
    };
    verdict(6, failed.is_empty(), &detail)
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> bool); 6] = [
        (1, criterion_1_narrowband_squint),
        (2, criterion_2_wideband_flatness),
        (3, criterion_3_arbitrary_location),
        (4, criterion_4_rate_increment),
        (5, criterion_5_distance_resolution),
        (6, criterion_6_property_suite),
    ];
    let mut failed = 0;
    for (id, run) in criteria {
        let pass = panic::catch_unwind(run).unwrap_or_else(|_| verdict(id, false, "panicked"));
        if !pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
