use crate::error::{Error, Result};

use super::Geometry;

/// Prolate spheroidal frame with foci at the transmitter and the target.
///
/// The frame origin is the midpoint of the focal segment; its axis is the
/// transmitter-to-target direction, tilted by `gamma_c` from boresight about
/// the x axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpheroidalFrame {
    /// Half the focal distance (m).
    pub a: f64,
    pub gamma_c: f64,
    pub center: [f64; 3],
}

/// A point in prolate spheroidal coordinates.
///
/// `sigma ∈ [1, ∞)` selects the spheroid (path sum `2·a·sigma`), `tau ∈ [−1, 1]`
/// the position along the focal axis and `psi ∈ [0, 2π)` the azimuth about it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpheroidalPoint {
    pub sigma: f64,
    pub tau: f64,
    pub psi: f64,
}

impl SpheroidalFrame {
    pub fn new(geom: &Geometry) -> Self {
        let [_, ty, tz] = geom.tx();
        let [_, dy, dz] = geom.dt();
        let a = 0.5 * (dy - ty).hypot(dz - tz);
        SpheroidalFrame {
            a,
            gamma_c: geom.gamma_c,
            center: [0.0, 0.5 * (ty + dy), 0.5 * (tz + dz)],
        }
    }

    pub fn to_cartesian(&self, p: SpheroidalPoint) -> Result<[f64; 3]> {
        if !(p.sigma >= 1.0) {
            return Err(Error::Domain(format!("sigma = {} < 1", p.sigma)));
        }
        if !(p.tau.abs() <= 1.0) {
            return Err(Error::Domain(format!("|tau| = {} > 1", p.tau.abs())));
        }
        let a = self.a;
        let (sg, cg) = self.gamma_c.sin_cos();
        let (sp, cp) = p.psi.sin_cos();
        let radial = a * ((p.sigma * p.sigma - 1.0) * (1.0 - p.tau * p.tau)).sqrt();
        let axial = a * p.sigma * p.tau;
        let [xc, yc, zc] = self.center;
        Ok([
            xc + radial * cp,
            yc + axial * sg + radial * cg * sp,
            zc + axial * cg - radial * sg * sp,
        ])
    }

    /// Inverse of [`SpheroidalFrame::to_cartesian`].
    pub fn from_cartesian(&self, p: [f64; 3]) -> SpheroidalPoint {
        let (x1, y1, z1) = self.to_local(p);
        let a = self.a;
        let d_tx = (x1 * x1 + y1 * y1 + (z1 + a) * (z1 + a)).sqrt();
        let d_dt = (x1 * x1 + y1 * y1 + (z1 - a) * (z1 - a)).sqrt();
        let sigma = ((d_tx + d_dt) / (2.0 * a)).max(1.0);
        let tau = ((d_tx - d_dt) / (2.0 * a)).clamp(-1.0, 1.0);
        let psi = y1.atan2(x1).rem_euclid(std::f64::consts::TAU);
        SpheroidalPoint { sigma, tau, psi }
    }

    /// Coordinates in the translated and rotated Cartesian frame whose z axis
    /// runs from the transmitter to the target.
    pub fn to_local(&self, p: [f64; 3]) -> (f64, f64, f64) {
        let (sg, cg) = self.gamma_c.sin_cos();
        let [xc, yc, zc] = self.center;
        let (dx, dy, dz) = (p[0] - xc, p[1] - yc, p[2] - zc);
        (dx, cg * dy - sg * dz, sg * dy + cg * dz)
    }

    /// Path sum of the spheroid through `p`.
    pub fn path_sum(&self, p: SpheroidalPoint) -> f64 {
        2.0 * self.a * p.sigma
    }
}
