//! Log-log regression of counts against resolution.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Counts grow by less than this factor between scales once the
/// polyline has run out of detail.
pub const SATURATION_GROWTH: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRow {
    pub k: u32,
    pub dx: f64,
    pub count: f64,
    pub length: f64,
}

impl MeasurementRow {
    pub fn new(k: u32, dx: f64, count: f64) -> Self {
        MeasurementRow {
            k,
            dx,
            count,
            length: count * dx,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub ds_hat: f64,
    pub intercept: f64,
    pub r2: f64,
    /// First and last `k` that entered the regression.
    pub k_fit_range: (u32, u32),
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub excluded: Vec<u32>,
}

/// Ordinary least squares of `ln(count)` on `ln(1/dx)`.
///
/// With `exclude_saturated`, a scale whose count grew by less than
/// [`SATURATION_GROWTH`] over the next coarser scale is left out.
pub fn estimate_dimension(rows: &[MeasurementRow], exclude_saturated: bool) -> Result<Fit> {
    let mut sorted: Vec<&MeasurementRow> = rows.iter().collect();
    sorted.sort_by(|a, b| b.dx.total_cmp(&a.dx));

    for r in &sorted {
        if !(r.dx.is_finite() && r.dx > 0.0) || r.count.is_nan() || r.count < 1.0 {
            return Err(Error::param(
                "measurement row",
                format!("k={} needs dx > 0 and count >= 1", r.k),
            ));
        }
    }
    if sorted.windows(2).any(|w| w[0].dx == w[1].dx) {
        return Err(Error::param(
            "measurement rows",
            "resolutions must be distinct",
        ));
    }

    let mut used = Vec::with_capacity(sorted.len());
    let mut excluded = Vec::new();
    for (i, r) in sorted.iter().enumerate() {
        let saturated = i > 0 && r.count < SATURATION_GROWTH * sorted[i - 1].count;
        if exclude_saturated && saturated {
            excluded.push(r.k);
        } else {
            used.push(*r);
        }
    }
    if used.len() < 3 {
        return Err(Error::InsufficientScales { usable: used.len() });
    }

    let xs: Vec<f64> = used.iter().map(|r| (1.0 / r.dx).ln()).collect();
    let ys: Vec<f64> = used.iter().map(|r| r.count.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();

    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };

    let k_lo = used.iter().map(|r| r.k).min().unwrap_or(0);
    let k_hi = used.iter().map(|r| r.k).max().unwrap_or(0);
    Ok(Fit {
        ds_hat: slope,
        intercept,
        r2,
        k_fit_range: (k_lo, k_hi),
        excluded,
    })
}
