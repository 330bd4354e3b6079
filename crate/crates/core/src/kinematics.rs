//! A particle of mass `m` traversing the trajectory in time `dt`.
//!
//! With `V0 = L0/dt`, `E0 = m V0^2 / 2` and the action scale
//! `eta0 = E0 dt = m L0^2 / (2 dt)`, the per-scale product
//! `dx_k * dp_k = m dx_k dL_k / dt` equals `2 eta0 gamma(k)`, so the
//! geometric regime bounds on `gamma` become bounds in units of `eta0`.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::GeneratorSpec;
use crate::measures::{self, Regime, RegimeBound, ScaleRow};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawContext")]
pub struct ParticleContext {
    pub m: f64,
    pub dt: f64,
    #[serde(rename = "L0")]
    pub l0: f64,
    #[serde(rename = "V0")]
    pub v0: f64,
    #[serde(rename = "E0")]
    pub e0: f64,
    pub eta0: f64,
}

#[derive(Deserialize)]
struct RawContext {
    m: f64,
    dt: f64,
    #[serde(rename = "L0")]
    l0: f64,
}

impl TryFrom<RawContext> for ParticleContext {
    type Error = Error;
    fn try_from(raw: RawContext) -> Result<Self> {
        ParticleContext::new(raw.m, raw.dt, raw.l0)
    }
}

impl ParticleContext {
    pub fn new(m: f64, dt: f64, l0: f64) -> Result<Self> {
        for (name, v) in [("mass", m), ("dt", dt), ("l0", l0)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(name, format!("must be positive, got {v}")));
            }
        }
        let v0 = l0 / dt;
        let e0 = 0.5 * m * v0 * v0;
        Ok(ParticleContext {
            m,
            dt,
            l0,
            v0,
            e0,
            eta0: e0 * dt,
        })
    }

    /// `m = dt = L0 = 1`, so `eta0 = 1/2`.
    pub fn unit() -> Self {
        ParticleContext::new(1.0, 1.0, 1.0).expect("unit context is valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyRow {
    pub k: u32,
    /// `dx_k * dv_k`
    #[serde(rename = "dV_k")]
    pub dv_k: f64,
    /// `dx_k * dp_k`
    #[serde(rename = "dP_k")]
    pub dp_k: f64,
    pub regime: Regime,
}

/// `dx_k dL_k / dt`.
pub fn areolar_velocity_change(k: u32, spec: &GeneratorSpec, ctx: &ParticleContext) -> f64 {
    measures::delta_area(k, spec, ctx.l0) / ctx.dt
}

/// `m dx_k dL_k / dt`.
pub fn uncertainty_product(k: u32, spec: &GeneratorSpec, ctx: &ParticleContext) -> f64 {
    ctx.m * areolar_velocity_change(k, spec, ctx)
}

/// `2 eta0 - uncertainty_product`, evaluated without cancellation.
pub fn uncertainty_headroom(k: u32, spec: &GeneratorSpec, ctx: &ParticleContext) -> f64 {
    2.0 * ctx.eta0 * measures::gamma_headroom(k, spec.rho(), spec.similarity_dimension())
}

pub fn uncertainty_row(
    k: u32,
    spec: &GeneratorSpec,
    ctx: &ParticleContext,
) -> Result<UncertaintyRow> {
    let dv_k = areolar_velocity_change(k, spec, ctx);
    Ok(UncertaintyRow {
        k,
        dv_k,
        dp_k: ctx.m * dv_k,
        regime: Regime::of_dimension(spec.similarity_dimension())?,
    })
}

/// Regime bounds on `dx_k * dp_k`, in action units.
pub fn classify_regime(ds: f64, ctx: &ParticleContext) -> Result<RegimeBound> {
    Ok(measures::regime_bounds(ds, ctx.l0)?.scaled(ctx.m / ctx.dt))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub k: u32,
    pub product: f64,
    pub lower: f64,
    /// `null` for an unbounded regime.
    pub upper: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Preconditions {
    pub k_min: u32,
    pub rho_ge_2: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub spec: String,
    pub ds: f64,
    pub eta0: f64,
    pub rows: Vec<BoundCheck>,
    pub preconditions: Preconditions,
}

impl BoundsReport {
    pub fn violations(&self) -> impl Iterator<Item = &BoundCheck> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Checks every `k` in `k_range` against the regime inequality.
///
/// The bounds only apply from `k = 1`, so a range starting at 0 is
/// clipped. Violations are reported in the rows, not as errors. When
/// `rho < 2` the `eta0` lower bound is not guaranteed, which the
/// report flags in `preconditions.rho_ge_2`.
pub fn verify_bounds(
    spec: &GeneratorSpec,
    ctx: &ParticleContext,
    k_range: RangeInclusive<u32>,
) -> Result<BoundsReport> {
    verify_bounds_with(spec, ctx, k_range, Execution::default())
}

pub fn verify_bounds_with(
    spec: &GeneratorSpec,
    ctx: &ParticleContext,
    k_range: RangeInclusive<u32>,
    exec: Execution,
) -> Result<BoundsReport> {
    let ds = spec.similarity_dimension();
    let bound = classify_regime(ds, ctx)?;
    let k_lo = (*k_range.start()).max(1);
    let k_hi = *k_range.end();
    let count = if k_hi >= k_lo {
        (k_hi - k_lo + 1) as usize
    } else {
        0
    };

    let rows = exec.map_indices(count, |i| {
        let k = k_lo + i as u32;
        let product = uncertainty_product(k, spec, ctx);
        let headroom = match bound.regime {
            Regime::Classical => -product,
            _ => uncertainty_headroom(k, spec, ctx),
        };
        BoundCheck {
            k,
            product,
            lower: bound.lower,
            upper: bound.upper,
            pass: bound.admits_with_headroom(product, headroom),
        }
    });

    Ok(BoundsReport {
        spec: spec.name().to_string(),
        ds,
        eta0: ctx.eta0,
        rows,
        preconditions: Preconditions {
            k_min: 1,
            rho_ge_2: spec.rho() >= 2.0,
        },
    })
}

/// Everything the `analyze` command reports for one generator and context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub spec: GeneratorSpec,
    pub ds: f64,
    pub context: ParticleContext,
    pub regime: RegimeBound,
    pub scales: Vec<ScaleRow>,
    pub uncertainty: Vec<UncertaintyRow>,
    pub bounds: BoundsReport,
}

pub fn analyze(spec: &GeneratorSpec, ctx: &ParticleContext, k_max: u32) -> Result<Analysis> {
    let exec = Execution::default();
    let ds = spec.similarity_dimension();
    let scales = measures::scale_table_with(spec, ctx.l0, ctx.dt, k_max, exec)?;
    let uncertainty = exec
        .map_indices(k_max as usize + 1, |k| uncertainty_row(k as u32, spec, ctx))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(Analysis {
        spec: spec.clone(),
        ds,
        context: *ctx,
        regime: classify_regime(ds, ctx)?,
        scales,
        uncertainty,
        bounds: verify_bounds_with(spec, ctx, 1..=k_max, exec)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{refine, Builtin, Polyline};
    use crate::measures::gamma;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
    }

    #[test]
    fn context_derivations() {
        let ctx = ParticleContext::new(2.0, 0.5, 3.0).unwrap();
        assert_eq!(ctx.v0, 6.0);
        assert_eq!(ctx.e0, 36.0);
        assert_eq!(ctx.eta0, 18.0);
        assert!(close(
            ctx.eta0,
            ctx.m * ctx.l0 * ctx.l0 / (2.0 * ctx.dt),
            1e-12
        ));
        assert_eq!(ParticleContext::unit().eta0, 0.5);
        assert!(ParticleContext::new(0.0, 1.0, 1.0).is_err());
        assert!(ParticleContext::new(1.0, -1.0, 1.0).is_err());
        assert!(ParticleContext::new(1.0, 1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn context_json_rederives() {
        let text = r#"{"m":2.0,"dt":0.5,"L0":3.0,"V0":0,"E0":0,"eta0":0}"#;
        let ctx: ParticleContext = serde_json::from_str(text).unwrap();
        assert_eq!(ctx.eta0, 18.0);
    }

    #[test]
    fn areolar_velocity_examples() {
        let line = Builtin::Line.spec().unwrap();
        let koch = Builtin::Koch.spec().unwrap();
        let unit = ParticleContext::unit();
        for k in 0..20 {
            assert_eq!(areolar_velocity_change(k, &line, &unit), 0.0);
        }
        assert!(close(
            areolar_velocity_change(1, &koch, &unit),
            1.0 / 9.0,
            1e-14
        ));
        let slow = ParticleContext::new(1.0, 3.0, 1.0).unwrap();
        assert!(close(
            areolar_velocity_change(1, &koch, &slow),
            1.0 / 27.0,
            1e-14
        ));
    }

    #[test]
    fn product_examples() {
        let unit = ParticleContext::unit();
        let line = Builtin::Line.spec().unwrap();
        let ctx = ParticleContext::new(3.7, 0.2, 11.0).unwrap();
        for k in 0..30 {
            assert_eq!(uncertainty_product(k, &line, &ctx), 0.0);
        }

        let peano = Builtin::Peano.spec().unwrap();
        let p1 = uncertainty_product(1, &peano, &unit);
        assert!(close(p1, 2.0 / 3.0, 1e-15));
        assert!(p1 >= unit.eta0 && p1 < 2.0 * unit.eta0);

        // m dx_1 dL_1 / dt straight off the refined polyline
        let koch = Builtin::Koch.spec().unwrap();
        let k1 = refine(&Polyline::base_segment(1.0).unwrap(), &koch, 1).unwrap();
        let oracle = 1.0 * (1.0 / 3.0) * (k1.arc_length() - 1.0) / 1.0;
        assert!(close(uncertainty_product(1, &koch, &unit), oracle, 1e-12));
        assert!(close(
            uncertainty_product(1, &koch, &unit),
            1.0 / 9.0,
            1e-14
        ));
    }

    #[test]
    fn regime_in_action_units() {
        let half = ParticleContext::unit();
        let b = classify_regime(2.0, &half).unwrap();
        assert_eq!((b.lower, b.upper), (0.5, Some(1.0)));
        assert!(b.lower_inclusive && !b.upper_inclusive);

        let b = classify_regime(1.0, &half).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, Some(0.0)));

        // eta0 = 1 with m = 2, dt = 1, L0 = 1
        let one = ParticleContext::new(2.0, 1.0, 1.0).unwrap();
        assert_eq!(one.eta0, 1.0);
        let b = classify_regime(2.5, &one).unwrap();
        assert_eq!((b.lower, b.upper), (1.0, None));
        assert!(!b.lower_inclusive);

        assert!(classify_regime(0.5, &one).is_err());
    }

    #[test]
    fn builtin_bounds_hold() {
        let unit = ParticleContext::unit();
        for b in [Builtin::Koch, Builtin::Peano, Builtin::Line] {
            let report = verify_bounds(&b.spec().unwrap(), &unit, 1..=30).unwrap();
            assert_eq!(report.rows.len(), 30);
            assert_eq!(report.violations().count(), 0, "{b}");
            assert!(report.preconditions.rho_ge_2);
        }
        let koch = verify_bounds(&Builtin::Koch.spec().unwrap(), &unit, 1..=30).unwrap();
        assert!(koch.rows.iter().all(|r| r.product > 0.0 && r.product < 1.0));
        let peano = verify_bounds(&Builtin::Peano.spec().unwrap(), &unit, 1..=30).unwrap();
        assert!(peano
            .rows
            .iter()
            .all(|r| r.product >= 0.5 && r.product <= 1.0));
        let line = verify_bounds(&Builtin::Line.spec().unwrap(), &unit, 1..=30).unwrap();
        assert!(line.rows.iter().all(|r| r.product == 0.0));
    }

    #[test]
    fn k_zero_is_clipped() {
        let r = verify_bounds(
            &Builtin::Peano.spec().unwrap(),
            &ParticleContext::unit(),
            0..=3,
        )
        .unwrap();
        assert_eq!(r.rows.first().unwrap().k, 1);
        assert_eq!(r.rows.len(), 3);
    }

    #[test]
    fn small_rho_flags_precondition() {
        // Levy C generator: rho = sqrt(2), N = 2, so D_s = 2 with rho < 2
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let spec = GeneratorSpec::new(
            "levy",
            std::f64::consts::SQRT_2,
            vec![
                crate::geometry::Point::new(h, h),
                crate::geometry::Point::new(h, -h),
            ],
        )
        .unwrap();
        assert_eq!(spec.similarity_dimension(), 2.0);
        let r = verify_bounds(&spec, &ParticleContext::unit(), 1..=5).unwrap();
        assert!(!r.preconditions.rho_ge_2);
        assert!(!r.rows[0].pass);
    }

    #[test]
    fn product_matches_gamma_route() {
        let ctx = ParticleContext::new(1.7, 0.3, 2.2).unwrap();
        for b in [
            Builtin::Koch,
            Builtin::Peano,
            Builtin::Cesaro { angle_deg: 70.0 },
        ] {
            let spec = b.spec().unwrap();
            for k in 0..=40 {
                let p = uncertainty_product(k, &spec, &ctx);
                let g = 2.0 * ctx.eta0 * gamma(k, spec.rho(), spec.similarity_dimension());
                assert!(close(p, g, 1e-12));
            }
        }
    }

    #[test]
    fn report_json_shape() {
        let r = verify_bounds(
            &Builtin::Koch.spec().unwrap(),
            &ParticleContext::unit(),
            1..=2,
        )
        .unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["spec"], "koch");
        assert_eq!(v["preconditions"]["k_min"], 1);
        assert_eq!(v["preconditions"]["rho_ge_2"], true);
        let row = v["rows"][0].as_object().unwrap();
        let mut keys: Vec<_> = row.keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["k", "lower", "pass", "product", "upper"]);
    }

    #[test]
    fn analysis_bundle() {
        let a = analyze(
            &Builtin::Peano.spec().unwrap(),
            &ParticleContext::unit(),
            20,
        )
        .unwrap();
        assert_eq!(a.scales.len(), 21);
        assert_eq!(a.uncertainty.len(), 21);
        assert_eq!(a.bounds.rows.len(), 20);
        assert!(a.bounds.all_pass());
        assert!(a
            .bounds
            .rows
            .iter()
            .all(|r| r.product >= 0.5 && r.product < 1.0));
        assert_eq!(a.regime.regime, Regime::Critical);
        for (u, s) in a.uncertainty.iter().zip(&a.scales) {
            assert!(close(u.dp_k, a.context.m * u.dv_k, 1e-12));
            assert!(close(u.dv_k, s.da_k0 / a.context.dt, 1e-12));
        }
    }
}
