//! Static SVG rendering of trajectories, optionally over a camera grid.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::geometry::{Point, Polyline};

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub width: u32,
    pub height: u32,
    pub stroke_width: f64,
    /// Draw grid lines at multiples of this spacing (world units).
    pub grid: Option<f64>,
    /// Fraction of the drawing area left blank on each side, in `[0, 0.4)`.
    pub margin: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            width: 800,
            height: 400,
            stroke_width: 1.0,
            grid: None,
            margin: 0.05,
        }
    }
}

impl RenderOptions {
    fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::param("size", "width and height must be positive"));
        }
        if !(self.stroke_width.is_finite() && self.stroke_width > 0.0) {
            return Err(Error::param("stroke width", "must be positive"));
        }
        if !(0.0..0.4).contains(&self.margin) {
            return Err(Error::param(
                "margin",
                format!("must lie in [0, 0.4), got {}", self.margin),
            ));
        }
        if let Some(g) = self.grid {
            if !(g.is_finite() && g > 0.0) {
                return Err(Error::param(
                    "grid spacing",
                    format!("must be positive, got {g}"),
                ));
            }
        }
        Ok(())
    }
}

/// World-to-pixel mapping for one panel; y points up in the world.
struct Frame {
    lo: Point,
    hi: Point,
    scale: f64,
    ox: f64,
    oy: f64,
}

impl Frame {
    fn fit(poly: &Polyline, x0: f64, w: f64, h: f64, margin: f64) -> Result<Frame> {
        let (lo, hi) = poly.bounds();
        let (ex, ey) = (hi.x - lo.x, hi.y - lo.y);
        if ex == 0.0 && ey == 0.0 {
            return Err(Error::DegenerateBounds);
        }
        let (iw, ih) = (w * (1.0 - 2.0 * margin), h * (1.0 - 2.0 * margin));
        let sx = if ex > 0.0 { iw / ex } else { f64::INFINITY };
        let sy = if ey > 0.0 { ih / ey } else { f64::INFINITY };
        let scale = sx.min(sy);
        Ok(Frame {
            lo,
            hi,
            scale,
            ox: x0 + (w - ex * scale) / 2.0,
            oy: (h - ey * scale) / 2.0,
        })
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (
            self.ox + (p.x - self.lo.x) * self.scale,
            self.oy + (self.hi.y - p.y) * self.scale,
        )
    }
}

fn px(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn push_path(out: &mut String, frame: &Frame, poly: &Polyline, stroke: f64) {
    out.push_str(
        "  <path fill=\"none\" stroke=\"black\" stroke-linejoin=\"round\" stroke-width=\"",
    );
    out.push_str(&px(stroke));
    out.push_str("\" d=\"");
    for (i, p) in poly.vertices().iter().enumerate() {
        let (x, y) = frame.map(*p);
        let cmd = if i == 0 { "M" } else { " L" };
        let _ = write!(out, "{cmd}{} {}", px(x), px(y));
    }
    out.push_str("\"/>\n");
}

fn push_grid(out: &mut String, frame: &Frame, spacing: f64) {
    let (lo, hi) = (frame.lo, frame.hi);
    let (i0, i1) = (
        (lo.x / spacing).floor() as i64,
        (hi.x / spacing).ceil() as i64,
    );
    let (j0, j1) = (
        (lo.y / spacing).floor() as i64,
        (hi.y / spacing).ceil() as i64,
    );
    let (left, bottom) = frame.map(Point::new(i0 as f64 * spacing, j0 as f64 * spacing));
    let (right, top) = frame.map(Point::new(i1 as f64 * spacing, j1 as f64 * spacing));
    out.push_str("  <g stroke=\"#b0b0b0\" stroke-width=\"0.5\">\n");
    for i in i0..=i1 {
        let (x, _) = frame.map(Point::new(i as f64 * spacing, 0.0));
        let _ = writeln!(
            out,
            "    <line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\"/>",
            px(x),
            px(top),
            px(bottom)
        );
    }
    for j in j0..=j1 {
        let (_, y) = frame.map(Point::new(0.0, j as f64 * spacing));
        let _ = writeln!(
            out,
            "    <line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\"/>",
            px(y),
            px(left),
            px(right)
        );
    }
    out.push_str("  </g>\n");
}

fn header(out: &mut String, w: u32, h: u32) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(out, "  <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>");
}

/// One polyline as a single `<path>`, scaled to fit the canvas.
pub fn render_svg(poly: &Polyline, opts: &RenderOptions) -> Result<String> {
    opts.validate()?;
    let (w, h) = (opts.width as f64, opts.height as f64);
    let frame = Frame::fit(poly, 0.0, w, h, opts.margin)?;
    let mut out = String::new();
    header(&mut out, opts.width, opts.height);
    if let Some(g) = opts.grid {
        push_grid(&mut out, &frame, g);
    }
    push_path(&mut out, &frame, poly, opts.stroke_width);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Side-by-side panels, one per camera: panel `k` shows `levels[k]` over
/// a grid of spacing `dx0 / rho^k` and is labelled `C_k`. `opts.width` is
/// the width of each panel; `opts.grid` is ignored.
pub fn render_camera_panels(
    levels: &[Polyline],
    dx0: f64,
    rho: f64,
    opts: &RenderOptions,
) -> Result<String> {
    opts.validate()?;
    if levels.is_empty() {
        return Err(Error::param("panels", "need at least one polyline"));
    }
    let (w, h) = (opts.width as f64, opts.height as f64);
    let total_w = opts.width * levels.len() as u32;
    let mut out = String::new();
    header(&mut out, total_w, opts.height);
    for (k, poly) in levels.iter().enumerate() {
        let x0 = k as f64 * w;
        let frame = Frame::fit(poly, x0, w, h, opts.margin)?;
        let _ = writeln!(out, "  <g id=\"camera-{k}\">");
        push_grid(
            &mut out,
            &frame,
            crate::measures::resolution(k as u32, dx0, rho),
        );
        push_path(&mut out, &frame, poly, opts.stroke_width);
        let _ = writeln!(
            out,
            "  <text x=\"{}\" y=\"{}\" font-family=\"serif\" font-size=\"16\">C<tspan baseline-shift=\"sub\" font-size=\"11\">{k}</tspan></text>",
            px(x0 + 8.0),
            px(20.0)
        );
        out.push_str("  </g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}
