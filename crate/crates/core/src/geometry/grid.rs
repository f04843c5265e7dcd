use crate::config::ScenarioConfig;
use crate::error::{Error, Result};

use super::{Geometry, PathSumBounds};

/// Reflecting elements on a square lattice clipped to the aperture disk.
///
/// Stored column-wise; index `e` refers to the same element in every vector.
/// One element sits at the origin and the rest lie at integer multiples of the
/// pitch, ordered row by row from `y = -R`.
#[derive(Debug, Clone)]
pub struct ElementGrid {
    pub geometry: Geometry,
    pub spacing: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub l_tx: Vec<f64>,
    pub l_dt: Vec<f64>,
    pub l_sum: Vec<f64>,
}

impl ElementGrid {
    pub fn build(cfg: &ScenarioConfig) -> Result<Self> {
        let geometry = Geometry::new(cfg)?;
        Self::with_geometry(geometry, cfg.spacing())
    }

    pub fn with_geometry(geometry: Geometry, spacing: f64) -> Result<Self> {
        let radius = geometry.radius;
        if !(spacing > 0.0) || radius < spacing / 2.0 {
            return Err(Error::EmptyGrid {
                radius_m: radius,
                half_spacing_m: spacing / 2.0,
            });
        }
        // Work in lattice units so points exactly on the rim are kept.
        let r_units = radius / spacing;
        let r2 = r_units * r_units * (1.0 + 1e-12);
        let n = r_units.floor() as i64;
        let mut x = Vec::new();
        let mut y = Vec::new();
        for j in -n..=n {
            for i in -n..=n {
                if ((i * i + j * j) as f64) <= r2 {
                    x.push(i as f64 * spacing);
                    y.push(j as f64 * spacing);
                }
            }
        }
        let l_tx: Vec<f64> = x
            .iter()
            .zip(&y)
            .map(|(&x, &y)| geometry.l_tx_at(x, y))
            .collect();
        let l_dt: Vec<f64> = x
            .iter()
            .zip(&y)
            .map(|(&x, &y)| geometry.l_dt_at(x, y))
            .collect();
        let l_sum = l_tx.iter().zip(&l_dt).map(|(a, b)| a + b).collect();
        Ok(ElementGrid {
            geometry,
            spacing,
            x,
            y,
            l_tx,
            l_dt,
            l_sum,
        })
    }

    /// Number of elements, `N_RIS`.
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Index of the element with the smallest path sum.
    pub fn argmin_path_sum(&self) -> usize {
        self.l_sum
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .expect("grid is never empty")
    }

    pub fn path_sum_bounds(&self) -> Result<PathSumBounds> {
        PathSumBounds::compute(self)
    }
}
