//! Empirical multiscale measurement of arbitrary polylines.
//!
//! A [`Ladder`] fixes the resolutions `dx_k = dx0 / rho^k`; each scale is
//! measured by box counting ([`grid_count`]) or divider stepping
//! ([`divider_count`]) and the counts are regressed in log-log space by
//! [`estimate_dimension`].

mod brownian;
mod divider;
mod fit;
mod grid;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use brownian::{brownian_path, brownian_path_with, CHUNK as BROWNIAN_CHUNK, PRNG_NAME};
pub use divider::divider_count;
pub use fit::{estimate_dimension, Fit, MeasurementRow, SATURATION_GROWTH};
pub use grid::{grid_count, grid_count_with, segment_cells, Cell};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::Polyline;
use crate::measures::resolution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Grid,
    Divider,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Grid => "grid",
            Method::Divider => "divider",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(Method::Grid),
            "divider" => Ok(Method::Divider),
            other => Err(Error::param("method", format!("unknown method `{other}`"))),
        }
    }
}

/// Resolutions `dx0 / rho^k` for `k` in `k_min..=k_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ladder {
    pub dx0: f64,
    pub rho: f64,
    pub k_min: u32,
    pub k_max: u32,
}

impl Ladder {
    pub fn new(dx0: f64, rho: f64, k_min: u32, k_max: u32) -> Result<Self> {
        if !(dx0.is_finite() && dx0 > 0.0) {
            return Err(Error::param("dx0", format!("must be positive, got {dx0}")));
        }
        if !(rho.is_finite() && rho > 1.0) {
            return Err(Error::param("rho", format!("must be > 1, got {rho}")));
        }
        if k_min > k_max {
            return Err(Error::param(
                "scales",
                format!("empty range {k_min}..{k_max}"),
            ));
        }
        Ok(Ladder {
            dx0,
            rho,
            k_min,
            k_max,
        })
    }

    pub fn len(&self) -> usize {
        (self.k_max - self.k_min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn resolution(&self, k: u32) -> f64 {
        resolution(k, self.dx0, self.rho)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementResult {
    pub method: Method,
    pub rows: Vec<MeasurementRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<Fit>,
}

impl MeasurementResult {
    /// Fits the dimension and stores it in `self.fit`.
    pub fn fit(&mut self, exclude_saturated: bool) -> Result<&Fit> {
        let fit = estimate_dimension(&self.rows, exclude_saturated)?;
        Ok(self.fit.insert(fit))
    }
}

/// Measures `poly` at every scale of `ladder`.
pub fn measure(poly: &Polyline, method: Method, ladder: &Ladder) -> Result<MeasurementResult> {
    measure_with(poly, method, ladder, Execution::default())
}

pub fn measure_with(
    poly: &Polyline,
    method: Method,
    ladder: &Ladder,
    exec: Execution,
) -> Result<MeasurementResult> {
    // scales run in parallel; each count then runs sequentially inside
    let rows = exec
        .map_indices(ladder.len(), |i| {
            let k = ladder.k_min + i as u32;
            let dx = ladder.resolution(k);
            let count = match method {
                Method::Grid => grid_count_with(poly, dx, Execution::Sequential)? as f64,
                Method::Divider => divider_count(poly, dx)?,
            };
            Ok(MeasurementRow::new(k, dx, count))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(MeasurementResult {
        method,
        rows,
        fit: None,
    })
}
