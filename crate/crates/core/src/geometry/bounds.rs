use crate::error::Result;
use crate::numeric::periodic_min;

use super::{ElementGrid, Geometry};

/// Range of path sums over the continuous aperture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSumBounds {
    pub l_min: f64,
    /// Smallest path sum whose conic touches the rim. Only defined when the
    /// minimizer lies strictly inside the aperture.
    pub l_mid: Option<f64>,
    pub l_max: f64,
    /// Where `l_min` is attained.
    pub argmin: (f64, f64),
    /// Whether the unconstrained minimizer of `l` over the plane lies inside the disk.
    pub min_inside: bool,
}

const RIM_SAMPLES: usize = 4096;

impl PathSumBounds {
    /// Continuous bounds of `l(x, y)` over the disk.
    ///
    /// `l` is convex, so a Newton descent from the best lattice element finds
    /// the plane minimizer; if it falls outside the disk the minimum moves to
    /// the rim. The maximum of a convex function over a disk is on the rim.
    pub fn compute(grid: &ElementGrid) -> Result<Self> {
        let g = &grid.geometry;
        let seed = grid.argmin_path_sum();
        let (px, py) = newton_minimize(g, grid.x[seed], grid.y[seed]);
        let r = g.radius;
        let min_inside = px * px + py * py < r * r;
        let rim = |a: f64| g.path_sum(r * a.cos(), r * a.sin());

        let (l_min, argmin) = if min_inside {
            (g.path_sum(px, py), (px, py))
        } else {
            let (a, v) = periodic_min(rim, RIM_SAMPLES);
            (v, (r * a.cos(), r * a.sin()))
        };
        let (_, neg_max) = periodic_min(|a| -rim(a), RIM_SAMPLES);
        let l_max = -neg_max;

        let l_mid = if min_inside && l_max > l_min {
            Some(touch_point(g, l_min, l_max))
        } else {
            None
        };
        Ok(PathSumBounds {
            l_min,
            l_mid,
            l_max,
            argmin,
            min_inside,
        })
    }

    pub fn span(&self) -> f64 {
        self.l_max - self.l_min
    }
}

/// Bisection on `l` for the first conic that is no longer fully inside.
fn touch_point(g: &Geometry, l_min: f64, l_max: f64) -> f64 {
    let inside = |l: f64| {
        g.ellipse_section(l)
            .map(|s| s.clip.fully_inside)
            .unwrap_or(true)
    };
    let (mut lo, mut hi) = (l_min, l_max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Damped Newton iteration for the unconstrained minimizer of `l` on the plane.
fn newton_minimize(g: &Geometry, x0: f64, y0: f64) -> (f64, f64) {
    let foci = [g.tx(), g.dt()];
    let grad_hess = |x: f64, y: f64| {
        let (mut gx, mut gy) = (0.0, 0.0);
        let (mut hxx, mut hxy, mut hyy) = (0.0, 0.0, 0.0);
        for f in &foci {
            let (dx, dy, dz) = (x - f[0], y - f[1], -f[2]);
            let d = (dx * dx + dy * dy + dz * dz).sqrt();
            let (ux, uy) = (dx / d, dy / d);
            gx += ux;
            gy += uy;
            hxx += (1.0 - ux * ux) / d;
            hxy += -ux * uy / d;
            hyy += (1.0 - uy * uy) / d;
        }
        (gx, gy, hxx, hxy, hyy)
    };
    let (mut x, mut y) = (x0, y0);
    let mut val = g.path_sum(x, y);
    for _ in 0..100 {
        let (gx, gy, hxx, hxy, hyy) = grad_hess(x, y);
        let det = hxx * hyy - hxy * hxy;
        let (mut sx, mut sy) = if det > 0.0 {
            (-(hyy * gx - hxy * gy) / det, -(hxx * gy - hxy * gx) / det)
        } else {
            (-gx, -gy)
        };
        let mut accepted = false;
        for _ in 0..60 {
            let cand = g.path_sum(x + sx, y + sy);
            if cand <= val {
                x += sx;
                y += sy;
                accepted = cand < val;
                val = cand;
                break;
            }
            sx *= 0.5;
            sy *= 0.5;
        }
        if !accepted || sx.hypot(sy) < 1e-15 {
            break;
        }
    }
    (x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ScenarioConfig;

    #[test]
    fn boresight_closed_form() {
        let mut cfg = ScenarioConfig::boresight(1.0, 0.5, 5.0);
        cfg.element_spacing_m = Some(0.02);
        let grid = ElementGrid::build(&cfg).unwrap();
        let b = grid.path_sum_bounds().unwrap();
        assert!((b.l_min - 5.5).abs() < 1e-12);
        let l_max = (0.25f64 + 1.0).sqrt() + (25.0f64 + 1.0).sqrt();
        assert!((b.l_max - l_max).abs() < 1e-12);
        assert!((b.l_max - 6.217).abs() < 1e-3);
        assert!(b.min_inside);
    }

    #[test]
    fn specular_point_minimizes_tilted_path() {
        let mut cfg = ScenarioConfig::boresight(1.0, 0.5, 1.0).with_gamma_c_deg(30.0);
        cfg.element_spacing_m = Some(0.02);
        let grid = ElementGrid::build(&cfg).unwrap();
        let g = grid.geometry;
        let b = grid.path_sum_bounds().unwrap();
        // Mirror image of the target below the plane.
        let y_spec = g.dt_y() * g.l_tx / (g.l_tx + g.dt_z());
        assert!(b.argmin.0.abs() < 1e-9 && (b.argmin.1 - y_spec).abs() < 1e-9);
        let direct = (g.dt_y().powi(2) + (g.l_tx + g.dt_z()).powi(2)).sqrt();
        assert!((b.l_min - direct).abs() < 1e-12);
        let l_mid = b.l_mid.unwrap();
        assert!(b.l_min < l_mid && l_mid < b.l_max);
        // The first rim contact is the rim minimum of l.
        let (_, rim_min) = periodic_min(|a| g.path_sum(a.cos(), a.sin()), 20000);
        assert!((l_mid - rim_min).abs() < 1e-9, "{l_mid} vs {rim_min}");
        // The rim maximum is opposite the target, not at (−R, 0).
        assert!(b.l_max > g.path_sum(-1.0, 0.0));
        assert!((b.l_max - g.path_sum(0.0, -1.0)).abs() < 1e-9);
    }

    #[test]
    fn minimizer_outside_small_disk() {
        let mut cfg = ScenarioConfig::boresight(0.05, 0.5, 1.0).with_gamma_c_deg(30.0);
        cfg.element_spacing_m = Some(0.005);
        let grid = ElementGrid::build(&cfg).unwrap();
        let b = grid.path_sum_bounds().unwrap();
        assert!(!b.min_inside);
        assert!(b.l_mid.is_none());
        assert!((b.l_min - grid.geometry.path_sum(0.0, 0.05)).abs() < 1e-10);
        assert!(grid.l_sum.iter().all(|&l| l >= b.l_min - 1e-12));
    }
}
