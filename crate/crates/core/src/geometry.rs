//! Generators and level-`k` polylines built by iterated segment replacement.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;

/// Tolerance for unit displacement length and generator closure.
pub const GENERATOR_TOLERANCE: f64 = 1e-9;

/// Similarity dimensions this close to an integer are snapped onto it.
pub const DIMENSION_TOLERANCE: f64 = 1e-12;

/// Default ceiling on the number of vertices a refinement may allocate.
pub const DEFAULT_MAX_VERTICES: usize = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (other - self).norm()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Complex product: rotates and scales `self` by `by`.
    fn rotate_by(self, by: Point) -> Point {
        Point::new(self.x * by.x - self.y * by.y, self.x * by.y + self.y * by.x)
    }

    fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// A production rule replacing one segment by `N` unit displacements, in
/// child units, spanning `(rho, 0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGeneratorSpec")]
pub struct GeneratorSpec {
    name: String,
    rho: f64,
    displacements: Vec<Point>,
    #[serde(skip)]
    prefix: Vec<Point>,
}

#[derive(Deserialize)]
struct RawGeneratorSpec {
    name: String,
    rho: f64,
    displacements: Vec<Point>,
}

impl TryFrom<RawGeneratorSpec> for GeneratorSpec {
    type Error = Error;

    fn try_from(raw: RawGeneratorSpec) -> Result<Self> {
        GeneratorSpec::new(raw.name, raw.rho, raw.displacements)
    }
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, rho: f64, displacements: Vec<Point>) -> Result<Self> {
        let name = name.into();
        let invalid = |msg: String| Err(Error::InvalidGenerator(format!("{name}: {msg}")));

        if !(rho.is_finite() && rho > 1.0) {
            return invalid(format!("scale factor must be a finite real > 1, got {rho}"));
        }
        let n = displacements.len();
        if n < 2 {
            return invalid(format!("needs at least 2 displacements, got {n}"));
        }
        if (n as f64) < rho - GENERATOR_TOLERANCE {
            return invalid(format!(
                "{n} displacements cannot span a parent of {rho} units"
            ));
        }
        for (i, d) in displacements.iter().enumerate() {
            if !d.is_finite() || (d.norm() - 1.0).abs() > GENERATOR_TOLERANCE {
                return invalid(format!(
                    "displacement {i} has length {}, expected 1",
                    d.norm()
                ));
            }
        }
        let sum = displacements
            .iter()
            .fold(Point::default(), |acc, &d| acc + d);
        if (sum.x - rho).abs() > GENERATOR_TOLERANCE || sum.y.abs() > GENERATOR_TOLERANCE {
            return invalid(format!(
                "displacements sum to ({}, {}), expected ({rho}, 0)",
                sum.x, sum.y
            ));
        }

        // Vertex positions along the generator, in parent units: the final
        // entry is pinned to (1, 0) so refinement hits segment ends exactly.
        let mut prefix = Vec::with_capacity(n);
        let mut acc = Point::default();
        for d in &displacements[..n - 1] {
            acc = acc + *d;
            prefix.push(acc * (1.0 / rho));
        }
        prefix.push(Point::new(1.0, 0.0));

        Ok(GeneratorSpec {
            name,
            rho,
            displacements,
            prefix,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn displacements(&self) -> &[Point] {
        &self.displacements
    }

    /// Number of child segments `N`.
    pub fn segments(&self) -> usize {
        self.displacements.len()
    }

    pub fn similarity_dimension(&self) -> f64 {
        similarity_dimension(self)
    }
}

/// `ln N / ln rho`, snapped onto an integer when within
/// [`DIMENSION_TOLERANCE`] of one.
pub fn similarity_dimension(spec: &GeneratorSpec) -> f64 {
    let ds = (spec.segments() as f64).ln() / spec.rho().ln();
    let nearest = ds.round();
    if (ds - nearest).abs() <= DIMENSION_TOLERANCE {
        nearest
    } else {
        ds
    }
}

/// The generators shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Builtin {
    /// Three collinear unit steps: the straight trajectory, `D_s = 1`.
    Line,
    /// The Koch generator with its bump on the positive-y side.
    Koch,
    /// Nine-step square Peano generator, `D_s = 2`. Self-touching.
    Peano,
    /// Koch-like generator with apex half-angle `angle_deg` in (0, 90):
    /// `rho = 2 (1 + cos angle)`, four steps.
    Cesaro { angle_deg: f64 },
}

impl Builtin {
    pub fn spec(self) -> Result<GeneratorSpec> {
        let h = 3f64.sqrt() / 2.0;
        match self {
            Builtin::Line => GeneratorSpec::new("line", 3.0, vec![Point::new(1.0, 0.0); 3]),
            Builtin::Koch => GeneratorSpec::new(
                "koch",
                3.0,
                vec![
                    Point::new(1.0, 0.0),
                    Point::new(0.5, h),
                    Point::new(0.5, -h),
                    Point::new(1.0, 0.0),
                ],
            ),
            Builtin::Peano => {
                let (e, n, s, w) = (
                    Point::new(1.0, 0.0),
                    Point::new(0.0, 1.0),
                    Point::new(0.0, -1.0),
                    Point::new(-1.0, 0.0),
                );
                GeneratorSpec::new("peano", 3.0, vec![e, n, e, s, w, s, e, n, e])
            }
            Builtin::Cesaro { angle_deg } => {
                if !(angle_deg > 0.0 && angle_deg < 90.0) {
                    return Err(Error::param(
                        "angle",
                        format!(
                            "cesaro opening angle must lie in (0, 90) degrees, got {angle_deg}"
                        ),
                    ));
                }
                let theta = angle_deg * PI / 180.0;
                let (sin, cos) = theta.sin_cos();
                GeneratorSpec::new(
                    "cesaro",
                    2.0 * (1.0 + cos),
                    vec![
                        Point::new(1.0, 0.0),
                        Point::new(cos, sin),
                        Point::new(cos, -sin),
                        Point::new(1.0, 0.0),
                    ],
                )
            }
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Line => f.write_str("line"),
            Builtin::Koch => f.write_str("koch"),
            Builtin::Peano => f.write_str("peano"),
            Builtin::Cesaro { angle_deg } => write!(f, "cesaro({angle_deg})"),
        }
    }
}

/// Parses `line`, `koch`, `peano`, `cesaro(DEG)` or `cesaro:DEG`.
impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "line" => return Ok(Builtin::Line),
            "koch" => return Ok(Builtin::Koch),
            "peano" => return Ok(Builtin::Peano),
            _ => {}
        }
        let angle = s
            .strip_prefix("cesaro")
            .map(|rest| rest.trim_start_matches([':', '(']).trim_end_matches(')'))
            .and_then(|a| a.parse::<f64>().ok());
        match angle {
            Some(angle_deg) => Ok(Builtin::Cesaro { angle_deg }),
            None => Err(Error::param(
                "generator",
                format!("unknown generator `{s}`"),
            )),
        }
    }
}

/// Extra provenance carried by generated (rather than constructed) paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathMetadata {
    pub seed: u64,
    pub n: usize,
    pub step_std: f64,
    pub prng: String,
}

/// An ordered list of 2D vertices, at least two, no two consecutive equal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolyline")]
pub struct Polyline {
    level: Option<u32>,
    vertices: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<PathMetadata>,
}

#[derive(Deserialize)]
struct RawPolyline {
    #[serde(default)]
    level: Option<u32>,
    vertices: Vec<Point>,
    #[serde(default)]
    metadata: Option<PathMetadata>,
}

impl TryFrom<RawPolyline> for Polyline {
    type Error = Error;

    fn try_from(raw: RawPolyline) -> Result<Self> {
        let mut poly = Polyline::new(raw.vertices)?;
        poly.level = raw.level;
        poly.metadata = raw.metadata;
        Ok(poly)
    }
}

impl Polyline {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPolyline(format!(
                "needs at least 2 vertices, got {}",
                vertices.len()
            )));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidPolyline(format!("vertex {i} is not finite")));
        }
        if let Some(i) = vertices.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::InvalidPolyline(format!(
                "vertices {i} and {} coincide",
                i + 1
            )));
        }
        Ok(Polyline {
            level: None,
            vertices,
            metadata: None,
        })
    }

    /// The segment from `(0, 0)` to `(length, 0)`.
    pub fn base_segment(length: f64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::param(
                "l0",
                format!("must be positive, got {length}"),
            ));
        }
        let mut poly = Polyline::new(vec![Point::new(0.0, 0.0), Point::new(length, 0.0)])?;
        poly.level = Some(0);
        Ok(poly)
    }

    pub fn with_level(mut self, level: Option<u32>) -> Self {
        self.level = level;
        self
    }

    pub fn with_metadata(mut self, metadata: PathMetadata) -> Self {
        self.metadata = Some(metadata);
        self
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn level(&self) -> Option<u32> {
        self.level
    }

    pub fn metadata(&self) -> Option<&PathMetadata> {
        self.metadata.as_ref()
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn start(&self) -> Point {
        self.vertices[0]
    }

    pub fn end(&self) -> Point {
        self.vertices[self.vertices.len() - 1]
    }

    /// Sum of segment lengths, accumulated in fixed-size blocks so the
    /// result does not depend on how the blocks are scheduled.
    pub fn arc_length(&self) -> f64 {
        const BLOCK: usize = 1 << 14;
        let segs = self.segment_count();
        let blocks = segs.div_ceil(BLOCK);
        let v = &self.vertices;
        Execution::default()
            .map_indices(blocks, |b| {
                let lo = b * BLOCK;
                let hi = (lo + BLOCK).min(segs);
                (lo..hi).map(|i| v[i].distance(v[i + 1])).sum::<f64>()
            })
            .into_iter()
            .sum()
    }

    /// `(min, max)` corners of the axis-aligned bounding box.
    pub fn bounds(&self) -> (Point, Point) {
        let mut lo = self.vertices[0];
        let mut hi = lo;
        for p in &self.vertices[1..] {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }

    /// Larger side of the bounding box.
    pub fn extent(&self) -> f64 {
        let (lo, hi) = self.bounds();
        (hi.x - lo.x).max(hi.y - lo.y)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RefineOptions {
    pub max_vertices: usize,
    pub execution: Execution,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            max_vertices: DEFAULT_MAX_VERTICES,
            execution: Execution::default(),
        }
    }
}

/// Applies `spec` to every segment of `base`, `k` times.
pub fn refine(base: &Polyline, spec: &GeneratorSpec, k: u32) -> Result<Polyline> {
    refine_with(base, spec, k, &RefineOptions::default())
}

pub fn refine_with(
    base: &Polyline,
    spec: &GeneratorSpec,
    k: u32,
    opts: &RefineOptions,
) -> Result<Polyline> {
    let level = base.level.unwrap_or(0).saturating_add(k);
    let final_vertices = (spec.segments() as u128)
        .checked_pow(k)
        .and_then(|nk| nk.checked_mul(base.segment_count() as u128))
        .and_then(|v| v.checked_add(1))
        .unwrap_or(u128::MAX);
    if final_vertices > opts.max_vertices as u128 {
        return Err(Error::RefinementTooLarge {
            level: k,
            vertices: final_vertices,
            cap: opts.max_vertices,
        });
    }

    let mut vertices = base.vertices.clone();
    for _ in 0..k {
        vertices = refine_once(&vertices, spec, opts.execution);
    }
    Ok(Polyline {
        level: Some(level),
        vertices,
        metadata: None,
    })
}

fn refine_once(vertices: &[Point], spec: &GeneratorSpec, exec: Execution) -> Vec<Point> {
    let n = spec.segments();
    let segs = vertices.len() - 1;
    let mut out = vec![Point::default(); segs * n + 1];
    out[0] = vertices[0];
    exec.for_each_chunk_mut(&mut out[1..], n, |i, chunk| {
        let (p, q) = (vertices[i], vertices[i + 1]);
        let frame = q - p;
        for (dst, g) in chunk.iter_mut().zip(&spec.prefix) {
            *dst = p + g.rotate_by(frame);
        }
        chunk[n - 1] = q;
    });
    out
}
