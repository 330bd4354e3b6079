//! CSV/JSON serialization and report bundles.
//!
//! CSV numbers are printed with 17 significant digits (`%.17g` style),
//! which round-trips every `f64`. JSON uses serde_json's shortest
//! round-trip representation, indented, with arrays of numbers kept on
//! one line.

mod json;
mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use svg::{render_camera_panels, render_svg, RenderOptions};

use crate::error::{Error, Result};
use crate::estimator::MeasurementResult;
use crate::kinematics::{Analysis, BoundsReport};
use crate::measures::ScaleRow;

pub const SCALE_CSV_HEADER: [&str; 9] = [
    "k", "dx_k", "N_k", "L_k", "A_k", "v_k", "gamma", "dA_k0", "dL_k",
];

pub const MEASUREMENT_CSV_HEADER: [&str; 4] = ["k", "dx", "count", "length"];

/// `x` with 17 significant digits, trailing zeros trimmed, switching to
/// exponent notation outside `1e-5 <= |x| < 1e17` like C's `%.17g`.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{sign}{:02}",
            trim_zeros(mantissa.to_string()),
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn scale_table_csv(rows: &[ScaleRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SCALE_CSV_HEADER)?;
    for r in rows {
        w.write_record(
            std::iter::once(r.k.to_string()).chain(
                [
                    r.dx_k, r.n_k, r.l_k, r.a_k, r.v_k, r.gamma_k, r.da_k0, r.dl_k,
                ]
                .map(fmt_g17),
            ),
        )?;
    }
    finish(w)
}

pub fn measurement_csv(result: &MeasurementResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(MEASUREMENT_CSV_HEADER)?;
    for r in &result.rows {
        w.write_record([
            r.k.to_string(),
            fmt_g17(r.dx),
            fmt_g17(r.count),
            fmt_g17(r.length),
        ])?;
    }
    finish(w)
}

/// One row per scale: the scale table columns, then the areolar
/// velocity/momentum changes and the bound check (blank at `k = 0`).
pub fn analysis_csv(analysis: &Analysis) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = SCALE_CSV_HEADER
        .iter()
        .copied()
        .chain(["dV_k", "dP_k", "regime", "lower", "upper", "pass"]);
    w.write_record(header)?;
    for (s, u) in analysis.scales.iter().zip(&analysis.uncertainty) {
        let check = analysis.bounds.rows.iter().find(|b| b.k == s.k);
        let mut rec: Vec<String> = std::iter::once(s.k.to_string())
            .chain(
                [
                    s.dx_k, s.n_k, s.l_k, s.a_k, s.v_k, s.gamma_k, s.da_k0, s.dl_k,
                ]
                .map(fmt_g17),
            )
            .collect();
        rec.push(fmt_g17(u.dv_k));
        rec.push(fmt_g17(u.dp_k));
        rec.push(
            serde_json::to_value(u.regime)?
                .as_str()
                .unwrap_or_default()
                .to_string(),
        );
        match check {
            Some(b) => {
                rec.push(fmt_g17(b.lower));
                rec.push(b.upper.map_or_else(|| "inf".to_string(), fmt_g17));
                rec.push(b.pass.to_string());
            }
            None => rec.extend([String::new(), String::new(), String::new()]),
        }
        w.write_record(rec)?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Csv(csv::Error::from(e.into_error())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// The bundled report: any subset of the three inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scales: Option<Vec<ScaleRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measurement: Option<MeasurementResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsReport>,
}

/// Writes `<stem>.json` holding every present input, plus
/// `<stem>.scales.csv` and `<stem>.measurement.csv` for the inputs that
/// have a CSV form. Existing files are overwritten. Returns the paths
/// written, JSON first.
pub fn write_report(
    table: Option<&[ScaleRow]>,
    measurement: Option<&MeasurementResult>,
    bounds: Option<&BoundsReport>,
    stem: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    if table.is_none() && measurement.is_none() && bounds.is_none() {
        return Err(Error::EmptyReport);
    }
    let stem = stem.as_ref();
    let report = Report {
        scales: table.map(<[ScaleRow]>::to_vec),
        measurement: measurement.cloned(),
        bounds: bounds.cloned(),
    };

    let mut written = Vec::new();
    let json_path = with_suffix(stem, ".json");
    write_file(&json_path, &to_json(&report)?)?;
    written.push(json_path);

    if let Some(rows) = table {
        let p = with_suffix(stem, ".scales.csv");
        write_file(&p, &scale_table_csv(rows)?)?;
        written.push(p);
    }
    if let Some(m) = measurement {
        let p = with_suffix(stem, ".measurement.csv");
        write_file(&p, &measurement_csv(m)?)?;
        written.push(p);
    }
    Ok(written)
}

/// Indented JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, json::InlineScalars::default());
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json emits utf-8"))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(path)?;
        f.write_all(contents.as_bytes())?;
        f.flush()
    };
    write().map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}
