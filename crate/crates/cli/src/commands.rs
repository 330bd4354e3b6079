use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use fk_core::estimator::{self, Ladder, Method};
use fk_core::geometry::{refine_with, Builtin, GeneratorSpec, Polyline, RefineOptions};
use fk_core::io::{self, RenderOptions};
use fk_core::kinematics;
use fk_core::measures::resolution;
use fk_core::ParticleContext;

use crate::{
    AnalyzeArgs, BrownianArgs, Failure, GenerateArgs, GeneratorArgs, MeasureArgs, MethodArg,
    ShapeFormat, TableFormat,
};

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => io::write_file(p, text).map_err(|e| Failure::Runtime(e.into())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .context("writing to stdout")?;
            Ok(())
        }
    }
}

fn spec_of(g: &GeneratorArgs) -> Result<GeneratorSpec, Failure> {
    if let Some(path) = &g.spec {
        if g.angle.is_some() {
            return Err(Failure::usage("--angle applies to builtin cesaro only"));
        }
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading generator spec {}", path.display()))?;
        return serde_json::from_str(&text).map_err(|e| {
            Failure::usage(format!("invalid generator spec {}: {e}", path.display()))
        });
    }
    let name = g.generator.as_deref().unwrap_or("koch").trim();
    let builtin = if name.eq_ignore_ascii_case("cesaro") {
        let angle_deg = g
            .angle
            .ok_or_else(|| Failure::usage("cesaro needs --angle DEG"))?;
        Builtin::Cesaro { angle_deg }
    } else {
        if g.angle.is_some() {
            return Err(Failure::usage(
                "--angle applies to `--generator cesaro` only",
            ));
        }
        name.parse::<Builtin>()?
    };
    Ok(builtin.spec()?)
}

pub fn generate(a: GenerateArgs) -> Result<(), Failure> {
    let spec = spec_of(&a.gen)?;
    let format = match (a.format, &a.out) {
        (Some(f), _) => f,
        (None, Some(p)) if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("svg")) => {
            ShapeFormat::Svg
        }
        _ => ShapeFormat::Json,
    };
    if format == ShapeFormat::Json && (a.panels || a.grid.is_some()) {
        return Err(Failure::usage("--panels and --grid need SVG output"));
    }

    let base = Polyline::base_segment(a.gen.l0)?;
    let opts = RefineOptions {
        max_vertices: a.max_vertices,
        ..Default::default()
    };
    let text = match format {
        ShapeFormat::Json => io::to_json(&refine_with(&base, &spec, a.level, &opts)?)?,
        ShapeFormat::Svg => {
            let render = RenderOptions {
                width: a.width,
                height: a.height,
                grid: a.grid.map(|k| resolution(k, a.gen.l0, spec.rho())),
                ..Default::default()
            };
            if a.panels {
                let levels = (0..=a.level)
                    .map(|k| refine_with(&base, &spec, k, &opts))
                    .collect::<Result<Vec<_>, _>>()?;
                io::render_camera_panels(&levels, a.gen.l0, spec.rho(), &render)?
            } else {
                io::render_svg(&refine_with(&base, &spec, a.level, &opts)?, &render)?
            }
        }
    };
    emit(a.out.as_deref(), &text)
}

pub fn analyze(a: AnalyzeArgs) -> Result<(), Failure> {
    let spec = spec_of(&a.gen)?;
    let ctx = ParticleContext::new(a.mass, a.dt, a.gen.l0)?;
    let analysis = kinematics::analyze(&spec, &ctx, a.k_max)?;
    if let Some(stem) = &a.report {
        io::write_report(Some(&analysis.scales), None, Some(&analysis.bounds), stem)?;
    }
    let text = match a.format {
        TableFormat::Json => io::to_json(&analysis)?,
        TableFormat::Csv => io::analysis_csv(&analysis)?,
    };
    emit(a.out.as_deref(), &text)
}

fn parse_scales(s: &str) -> Result<(u32, u32), Failure> {
    let bad = || Failure::usage(format!("--scales expects `k0..k1`, got `{s}`"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

pub fn measure(a: MeasureArgs) -> Result<(), Failure> {
    let (k0, k1) = parse_scales(&a.scales)?;
    let text =
        fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let poly: Polyline = serde_json::from_str(&text)
        .with_context(|| format!("parsing polyline {}", a.input.display()))?;
    let ladder = Ladder::new(a.dx0.unwrap_or_else(|| poly.extent()), a.rho, k0, k1)?;
    let method = match a.method {
        MethodArg::Grid => Method::Grid,
        MethodArg::Divider => Method::Divider,
    };
    let mut result = estimator::measure(&poly, method, &ladder)?;
    if a.fit {
        result.fit(!a.keep_saturated)?;
    }
    if let Some(stem) = &a.report {
        io::write_report(None, Some(&result), None, stem)?;
    }
    let text = match a.format {
        TableFormat::Json => io::to_json(&result)?,
        TableFormat::Csv => {
            if let Some(f) = &result.fit {
                eprintln!(
                    "ds_hat={} r2={} k_fit_range={}..{}",
                    io::fmt_g17(f.ds_hat),
                    io::fmt_g17(f.r2),
                    f.k_fit_range.0,
                    f.k_fit_range.1
                );
            }
            io::measurement_csv(&result)?
        }
    };
    emit(a.out.as_deref(), &text)
}

pub fn brownian(a: BrownianArgs) -> Result<(), Failure> {
    if a.n < 2 {
        return Err(Failure::usage(format!(
            "--n must be at least 2, got {}",
            a.n
        )));
    }
    let path = estimator::brownian_path(a.n, a.seed, a.step_std)?;
    emit(a.out.as_deref(), &io::to_json(&path)?)
}
