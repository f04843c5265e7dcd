use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::numeric::find_root;

use super::Geometry;

/// The constant path-sum conic `{(x, y, 0) : l(x, y) = l}` in the aperture plane.
///
/// Parameterized as `(x_e + a_e·cos θ, y_e + b_e·sin θ)`; `θ` runs over
/// `[−π/2, 3π/2]` starting at the point of smallest `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conic {
    pub l: f64,
    pub x_e: f64,
    pub y_e: f64,
    /// Semi-axis along x.
    pub a_e: f64,
    /// Semi-axis along y; never shorter than `a_e`.
    pub b_e: f64,
}

/// Which part of a conic lies inside the aperture disk.
///
/// Unless `fully_inside`, the retained points are
/// `θ ∈ [theta_start, theta1] ∪ [theta2, π − theta_start]` with
/// `theta2 = π − theta1`. With the target at positive y the bottom of the
/// ellipse stays inside longest and `theta_start = −π/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApertureClip {
    pub theta_start: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub fully_inside: bool,
}

/// A conic together with its clipping against the aperture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseSection {
    pub conic: Conic,
    pub clip: ApertureClip,
}

impl Conic {
    pub fn point(&self, theta: f64) -> (f64, f64) {
        let (s, c) = theta.sin_cos();
        (self.x_e + self.a_e * c, self.y_e + self.b_e * s)
    }

    /// `x(θ)² + y(θ)² − R²`.
    fn rim_residual(&self, theta: f64, radius: f64) -> f64 {
        let (x, y) = self.point(theta);
        x * x + y * y - radius * radius
    }
}

impl EllipseSection {
    /// Angular intervals of the arcs inside the aperture.
    pub fn arcs(&self) -> Vec<(f64, f64)> {
        let c = self.clip;
        if c.fully_inside {
            vec![(-FRAC_PI_2, 1.5 * PI)]
        } else {
            vec![(c.theta_start, c.theta1), (c.theta2, PI - c.theta_start)]
        }
    }
}

impl Geometry {
    /// Closed form of the constant path-sum conic.
    ///
    /// With `s = l_dt·sin γ`, the difference `l_dt(x,y)² − l_tx(x,y)²` is linear
    /// in `y`, which pins `l_tx(x,y) = (P + 2ys)/(2l)` where
    /// `P = l² − l_dt² + l_tx²`. Squaring gives the axis-aligned conic
    /// `x² + c_y·(y − y_e)² = ρ` with `c_y = 1 − s²/l²`.
    pub fn conic(&self, l: f64) -> Result<Conic> {
        let s = self.dt_y();
        let l2 = l * l;
        let p = l2 - self.l_dt * self.l_dt + self.l_tx * self.l_tx;
        let c_y = 1.0 - s * s / l2;
        let y_e = p * s / (2.0 * (l2 - s * s));
        let rho = c_y * y_e * y_e + p * p / (4.0 * l2) - self.l_tx * self.l_tx;
        if !(c_y > 0.0) || rho < -1e-14 * l2 || !rho.is_finite() {
            return Err(Error::Domain(format!(
                "path sum {l} m is below the plane tangency value"
            )));
        }
        let rho = rho.max(0.0);
        Ok(Conic {
            l,
            x_e: 0.0,
            y_e,
            a_e: rho.sqrt(),
            b_e: (rho / c_y).sqrt(),
        })
    }

    /// Conic at path sum `l` clipped to the aperture.
    pub fn ellipse_section(&self, l: f64) -> Result<EllipseSection> {
        let conic = self.conic(l)?;
        let clip = clip_to_aperture(&conic, self.radius)?;
        Ok(EllipseSection { conic, clip })
    }
}

/// Clipping angles of `conic` against the disk of radius `radius`.
///
/// Along the right half `θ ∈ [−π/2, π/2]` the squared radius is a convex
/// quadratic in `sin θ`, so it has one interior minimum and at most one rim
/// crossing on either side of it; each crossing is bracketed and solved to an
/// absolute residual of `1e−12·R²`. The left half mirrors the right one.
/// Grazing contact counts as fully inside.
pub fn clip_to_aperture(conic: &Conic, radius: f64) -> Result<ApertureClip> {
    let tol = 1e-12 * radius * radius;
    let f = |t: f64| conic.rim_residual(t, radius);
    let lo = -FRAC_PI_2;
    let hi = FRAC_PI_2;
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo.max(f_hi) <= tol {
        return Ok(ApertureClip {
            theta_start: lo,
            theta1: lo,
            theta2: 1.5 * PI,
            fully_inside: true,
        });
    }

    let (a, b) = (conic.a_e, conic.b_e);
    let curvature = b * b - a * a;
    let s_star = if curvature > 1e-300 {
        (-conic.y_e * b / curvature).clamp(-1.0, 1.0)
    } else if conic.y_e > 0.0 {
        -1.0
    } else if conic.y_e < 0.0 {
        1.0
    } else {
        0.0
    };
    let t_star = s_star.asin();
    let f_star = f(t_star);
    if f_star > tol {
        return Err(Error::EmptyArc { l: conic.l });
    }

    let theta_start = if f_lo <= 0.0 {
        lo
    } else {
        find_root(f, lo, t_star, tol)?
    };
    let theta1 = if f_hi <= 0.0 {
        hi
    } else {
        find_root(f, t_star, hi, tol)?
    };
    Ok(ApertureClip {
        theta_start,
        theta1,
        theta2: PI - theta1,
        fully_inside: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ScenarioConfig;

    fn geom(r: f64, l_dt: f64, gamma_c_deg: f64) -> Geometry {
        Geometry::new(&ScenarioConfig::boresight(r, 0.5, l_dt).with_gamma_c_deg(gamma_c_deg))
            .unwrap()
    }

    #[test]
    fn boresight_sections_are_circles() {
        let g = geom(1.0, 5.0, 0.0);
        for r in [0.01, 0.3, 0.77] {
            let l = (0.25f64 + r * r).sqrt() + (25.0f64 + r * r).sqrt();
            let c = g.conic(l).unwrap();
            assert!((c.a_e - r).abs() < 1e-12, "{} vs {r}", c.a_e);
            assert!((c.b_e - r).abs() < 1e-12);
            assert_eq!(c.y_e, 0.0);
            assert_eq!(c.x_e, 0.0);
        }
    }

    #[test]
    fn tilted_section_points_have_the_right_path_sum() {
        let g = geom(1.0, 1.0, 30.0);
        let l = g.path_sum(0.0, 0.2) + 0.3;
        let c = g.conic(l).unwrap();
        assert!(c.b_e >= c.a_e);
        for k in 0..12 {
            let t = -FRAC_PI_2 + 2.0 * PI * k as f64 / 12.0;
            let (x, y) = c.point(t);
            let res = (g.path_sum(x, y) - l).abs() / l;
            assert!(res < 1e-9, "theta {t}: {res}");
        }
    }

    #[test]
    fn small_circle_is_fully_inside() {
        let g = geom(1.0, 5.0, 0.0);
        let s = g.ellipse_section(g.path_sum(0.4, 0.0)).unwrap();
        assert!(s.clip.fully_inside);
        assert_eq!(s.arcs(), vec![(-FRAC_PI_2, 1.5 * PI)]);
    }

    #[test]
    fn rim_circle_is_grazing_and_fully_inside() {
        let g = geom(1.0, 5.0, 0.0);
        let s = g.ellipse_section(g.path_sum(1.0, 0.0)).unwrap();
        assert!(s.clip.fully_inside);
    }

    #[test]
    fn clipped_section_is_mirror_symmetric() {
        let g = geom(1.0, 1.0, 30.0);
        let l = g.path_sum(0.0, 1.0) + 0.01;
        let s = g.ellipse_section(l).unwrap();
        assert!(!s.clip.fully_inside);
        assert_eq!(s.clip.theta_start, -FRAC_PI_2);
        assert!((s.clip.theta1 + s.clip.theta2 - PI).abs() < 1e-15);
        assert!((-FRAC_PI_2..=FRAC_PI_2).contains(&s.clip.theta1));
        let (x, y) = s.conic.point(s.clip.theta1);
        assert!((x * x + y * y - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ellipse_outside_the_disk_has_no_arc() {
        let g = geom(0.05, 1.0, 30.0);
        // The tangency point of the spheroid lies far outside a 5 cm disk.
        let l = g.path_sum(0.0, 0.3);
        let c = g.conic(l).unwrap();
        assert!(matches!(
            clip_to_aperture(&c, 0.05),
            Err(Error::EmptyArc { .. })
        ));
    }

    #[test]
    fn below_tangency_is_a_domain_error() {
        let g = geom(1.0, 5.0, 0.0);
        assert!(matches!(g.conic(5.0), Err(Error::Domain(_))));
    }
}
