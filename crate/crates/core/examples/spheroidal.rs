//! The prolate spheroidal frame with foci at the transmitter and target, and
//! the constant path-sum conics it cuts in the aperture plane.

use risbeam::geometry::{clip_to_aperture, Geometry, SpheroidalPoint};
use risbeam::ScenarioConfig;

/// Returns the worst coordinate round-trip error.
pub fn run_example() -> risbeam::Result<f64> {
    let cfg = ScenarioConfig::paper_default().with_gamma_c_deg(20.0);
    let geom = Geometry::new(&cfg)?;
    let frame = geom.spheroidal_frame();
    println!("half focal distance {:.4} m, axis tilt {:.1} deg", frame.a, frame.gamma_c.to_degrees());

    let mut worst = 0.0_f64;
    for &(sigma, tau, psi) in &[(1.5, 0.3, 0.4), (2.0, -0.7, 2.5), (4.0, 0.0, 5.0)] {
        let p = SpheroidalPoint { sigma, tau, psi };
        let xyz = frame.to_cartesian(p)?;
        let back = frame.from_cartesian(xyz);
        let err = (back.sigma - sigma).abs().max((back.tau - tau).abs()).max((back.psi - psi).abs());
        worst = worst.max(err);
        println!(
            "sigma {sigma:.2} tau {tau:+.2} psi {psi:.2} -> ({:+.4}, {:+.4}, {:+.4}) m, path sum {:.4} m",
            xyz[0],
            xyz[1],
            xyz[2],
            frame.path_sum(p)
        );
    }

    let l_min = geom.path_sum(0.0, 0.0);
    for dl in [0.02, 0.1, 0.3] {
        let conic = geom.conic(l_min + dl)?;
        let clip = clip_to_aperture(&conic, cfg.radius_m)?;
        println!(
            "l = {:.3} m: centre ({:+.3}, {:+.3}), semi-axes {:.3} x {:.3}, fully inside {}",
            conic.l, conic.x_e, conic.y_e, conic.a_e, conic.b_e, clip.fully_inside
        );
    }
    println!("worst round-trip error {worst:.2e}");
    Ok(worst)
}

fn main() -> risbeam::Result<()> {
    run_example().map(|_| ())
}
