//! Divider (compass) stepping along a polyline.

use crate::error::{Error, Result};
use crate::geometry::{Point, Polyline};

/// Slack on the segment parameter when a step lands on a vertex.
const LANDING_SLACK: f64 = 1e-12;

/// Number of chords of length `step` walked from the start, plus the
/// final partial chord as a fraction of `step`.
///
/// Each new anchor is the first point along the curve, by arc parameter,
/// at chord distance exactly `step` from the previous anchor. A curve
/// that never gets `step` away from its start returns just the fractional
/// chord from start to end, a value in `[0, 1)`.
pub fn divider_count(poly: &Polyline, step: f64) -> Result<f64> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::param(
            "step",
            format!("must be positive, got {step}"),
        ));
    }
    let v = poly.vertices();
    let step_sq = step * step;

    let mut anchor = v[0];
    let mut seg = 0;
    let mut t0 = 0.0;
    let mut steps = 0u64;

    while seg < v.len() - 1 {
        let (s, e) = (v[seg], v[seg + 1]);
        match exit_parameter(s, e - s, anchor, step_sq, t0) {
            Some(t) => {
                anchor = if t >= 1.0 { e } else { s + (e - s) * t };
                steps += 1;
                if t >= 1.0 {
                    seg += 1;
                    t0 = 0.0;
                } else {
                    t0 = t;
                }
            }
            None => {
                seg += 1;
                t0 = 0.0;
            }
        }
    }
    Ok(steps as f64 + anchor.distance(poly.end()) / step)
}

/// Smallest `t` in `(t0, 1]` with `|s + t d - anchor| = sqrt(r_sq)`.
fn exit_parameter(s: Point, d: Point, anchor: Point, r_sq: f64, t0: f64) -> Option<f64> {
    let a = d.dot(d);
    let w = s - anchor;
    let b = d.dot(w);
    let c = w.dot(w) - r_sq;
    let disc = b * b - a * c;
    if disc < 0.0 {
        return None;
    }
    let root = disc.sqrt();
    // the crossing out of the circle is the larger root while inside it
    let t = (-b + root) / a;
    let lo = (-b - root) / a;
    let t = if lo > t0 { lo } else { t };
    if t > t0 && t <= 1.0 + LANDING_SLACK {
        Some(t.min(1.0))
    } else {
        None
    }
}
