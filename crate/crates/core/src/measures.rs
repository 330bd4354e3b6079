//! Closed-form multiscale measures of a self-similar trajectory.
//!
//! Scale `k` is observed with resolution `dx_k = dx_0 / rho^k`, where the
//! coarsest resolution equals the base length `L0`. At that scale the
//! trajectory occupies `N^k` cells, so its length is `N^k dx_k` and its area
//! is `N^k dx_k^2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::{GeneratorSpec, DIMENSION_TOLERANCE};

/// Largest `k` for which [`exact_cell_count`] is offered.
pub const EXACT_COUNT_MAX_K: u32 = 30;

/// All per-scale quantities for one `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleRow {
    pub k: u32,
    pub dx_k: f64,
    #[serde(rename = "N_k")]
    pub n_k: f64,
    #[serde(rename = "L_k")]
    pub l_k: f64,
    #[serde(rename = "A_k")]
    pub a_k: f64,
    pub v_k: f64,
    #[serde(rename = "gamma")]
    pub gamma_k: f64,
    #[serde(rename = "dA_k0")]
    pub da_k0: f64,
    #[serde(rename = "dL_k")]
    pub dl_k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `D_s > 2`
    Super,
    /// `D_s = 2`
    Critical,
    /// `1 < D_s < 2`
    Sub,
    /// `D_s = 1`
    Classical,
}

impl Regime {
    pub fn of_dimension(ds: f64) -> Result<Regime> {
        if !ds.is_finite() || ds < 1.0 - DIMENSION_TOLERANCE {
            return Err(Error::param(
                "similarity dimension",
                format!("must be >= 1, got {ds}"),
            ));
        }
        Ok(if (ds - 1.0).abs() <= DIMENSION_TOLERANCE {
            Regime::Classical
        } else if (ds - 2.0).abs() <= DIMENSION_TOLERANCE {
            Regime::Critical
        } else if ds > 2.0 {
            Regime::Super
        } else {
            Regime::Sub
        })
    }
}

/// An interval `lower (<|<=) x (<|<=) upper`; `upper: None` is unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeBound {
    pub regime: Regime,
    pub lower: f64,
    pub upper: Option<f64>,
    pub lower_inclusive: bool,
    pub upper_inclusive: bool,
}

impl RegimeBound {
    /// Multiplies both ends by `factor > 0`.
    pub fn scaled(self, factor: f64) -> RegimeBound {
        RegimeBound {
            lower: self.lower * factor,
            upper: self.upper.map(|u| u * factor),
            ..self
        }
    }

    pub fn admits(&self, value: f64) -> bool {
        let headroom = self.upper.map_or(f64::INFINITY, |u| u - value);
        self.admits_with_headroom(value, headroom)
    }

    /// Like [`admits`](Self::admits), but the upper side is judged on
    /// `headroom = upper - value`, supplied by a caller that can compute it
    /// without the cancellation `upper - value` suffers near the bound.
    pub fn admits_with_headroom(&self, value: f64, headroom: f64) -> bool {
        let above = if self.lower_inclusive {
            value >= self.lower
        } else {
            value > self.lower
        };
        let below = match self.upper {
            None => true,
            Some(_) if self.upper_inclusive => headroom >= 0.0,
            Some(_) => headroom > 0.0,
        };
        above && below
    }
}

fn check_scale(rho: f64) -> Result<()> {
    if rho.is_finite() && rho > 1.0 {
        Ok(())
    } else {
        Err(Error::param("rho", format!("must be > 1, got {rho}")))
    }
}

pub fn resolution(k: u32, dx0: f64, rho: f64) -> f64 {
    dx0 / rho.powi(k as i32)
}

pub fn length_at_scale(k: u32, spec: &GeneratorSpec, l0: f64) -> f64 {
    l0 * (spec.segments() as f64 / spec.rho()).powi(k as i32)
}

pub fn velocity_at_scale(k: u32, spec: &GeneratorSpec, l0: f64, dt: f64) -> Result<f64> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::param("dt", format!("must be positive, got {dt}")));
    }
    Ok(length_at_scale(k, spec, l0) / dt)
}

pub fn area_at_scale(k: u32, spec: &GeneratorSpec, l0: f64) -> f64 {
    let ds = spec.similarity_dimension();
    l0 * l0 * spec.rho().powf(k as f64 * (ds - 2.0))
}

/// `rho^(k (D_s - 2)) - rho^(-k)`.
///
/// Exactly zero at `ds = 1`, since both terms then share one exponent.
pub fn gamma(k: u32, rho: f64, ds: f64) -> f64 {
    let k = k as f64;
    rho.powf(k * (ds - 2.0)) - rho.powf(-k)
}

/// `1 - gamma(k, rho, ds)` without cancellation when `gamma` is close to 1.
///
/// For `ds = 2` this is exactly `rho^(-k)`; the plain difference
/// `1 - gamma` rounds to zero once `rho^(-k)` drops below half an ulp of 1.
pub fn gamma_headroom(k: u32, rho: f64, ds: f64) -> f64 {
    let k = k as f64;
    rho.powf(-k) - (k * (ds - 2.0) * rho.ln()).exp_m1()
}

pub fn delta_area(k: u32, spec: &GeneratorSpec, l0: f64) -> f64 {
    l0 * l0 * gamma(k, spec.rho(), spec.similarity_dimension())
}

/// Bounds on `dx_k * dL_k` at `k >= 1`.
///
/// The lower bound `L0^2 / 2` of the super-critical and critical regimes
/// only holds when `rho >= 2`.
pub fn regime_bounds(ds: f64, l0: f64) -> Result<RegimeBound> {
    let regime = Regime::of_dimension(ds)?;
    let sq = l0 * l0;
    Ok(match regime {
        Regime::Super => RegimeBound {
            regime,
            lower: sq / 2.0,
            upper: None,
            lower_inclusive: false,
            upper_inclusive: false,
        },
        Regime::Critical => RegimeBound {
            regime,
            lower: sq / 2.0,
            upper: Some(sq),
            lower_inclusive: true,
            upper_inclusive: false,
        },
        Regime::Sub => RegimeBound {
            regime,
            lower: 0.0,
            upper: Some(sq),
            lower_inclusive: false,
            upper_inclusive: false,
        },
        Regime::Classical => RegimeBound {
            regime,
            lower: 0.0,
            upper: Some(0.0),
            lower_inclusive: true,
            upper_inclusive: true,
        },
    })
}

/// Does `gamma(k, rho, ds)` fall inside its regime's bounds (scaled to
/// `L0 = 1`)? Only meaningful for `k >= 1`.
pub fn gamma_within_bounds(k: u32, rho: f64, ds: f64) -> Result<bool> {
    check_scale(rho)?;
    let bound = regime_bounds(ds, 1.0)?;
    let value = gamma(k, rho, ds);
    let headroom = match bound.regime {
        Regime::Classical => -value,
        _ => gamma_headroom(k, rho, ds),
    };
    Ok(bound.admits_with_headroom(value, headroom))
}

pub fn scale_row(k: u32, spec: &GeneratorSpec, l0: f64, dt: f64) -> Result<ScaleRow> {
    let dx_k = resolution(k, l0, spec.rho());
    let l_k = length_at_scale(k, spec, l0);
    Ok(ScaleRow {
        k,
        dx_k,
        n_k: (spec.segments() as f64).powi(k as i32),
        l_k,
        a_k: area_at_scale(k, spec, l0),
        v_k: velocity_at_scale(k, spec, l0, dt)?,
        gamma_k: gamma(k, spec.rho(), spec.similarity_dimension()),
        da_k0: delta_area(k, spec, l0),
        dl_k: l_k - l0,
    })
}

/// Rows for `k = 0..=k_max`, in order.
pub fn scale_table(spec: &GeneratorSpec, l0: f64, dt: f64, k_max: u32) -> Result<Vec<ScaleRow>> {
    scale_table_with(spec, l0, dt, k_max, Execution::default())
}

pub fn scale_table_with(
    spec: &GeneratorSpec,
    l0: f64,
    dt: f64,
    k_max: u32,
    exec: Execution,
) -> Result<Vec<ScaleRow>> {
    if !(l0.is_finite() && l0 > 0.0) {
        return Err(Error::param("l0", format!("must be positive, got {l0}")));
    }
    exec.map_indices(k_max as usize + 1, |k| scale_row(k as u32, spec, l0, dt))
        .into_iter()
        .collect()
}

/// `N^k` as an exact integer, for `k <= 30` (fits in `u128` for any `N < 19`).
pub fn exact_cell_count(spec: &GeneratorSpec, k: u32) -> Option<u128> {
    if k > EXACT_COUNT_MAX_K {
        return None;
    }
    (spec.segments() as u128).checked_pow(k)
}
