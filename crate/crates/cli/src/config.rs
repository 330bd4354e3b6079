//! `--config FILE`: a JSON object whose keys are long flag names.
//!
//! The file is expanded into flag tokens placed right after the
//! subcommand. Keys also given on the command line are dropped, so flags
//! win over the file and the file wins over built-in defaults.

use std::ffi::OsString;
use std::fs;

use serde_json::Value;

use crate::Failure;

/// Flags that exclude each other; a command-line flag also suppresses
/// the file's entries for its rivals.
const RIVALS: &[(&str, &[&str])] = &[
    ("generator", &["spec"]),
    ("angle", &["spec"]),
    ("spec", &["generator", "angle"]),
];

pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, Failure> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            match it.next() {
                Some(p) => path = Some(p),
                None => return Err(Failure::usage("--config needs a file path")),
            }
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(OsString::from(p));
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };

    let text = fs::read_to_string(&path).map_err(|e| {
        Failure::Runtime(anyhow::anyhow!(
            "reading config {}: {e}",
            path.to_string_lossy()
        ))
    })?;
    let obj = match serde_json::from_str::<Value>(&text) {
        Ok(Value::Object(m)) => m,
        Ok(_) => return Err(Failure::usage("config file must hold a JSON object")),
        Err(e) => {
            return Err(Failure::usage(format!(
                "config file is not valid JSON: {e}"
            )))
        }
    };

    // the subcommand is the first positional argument
    let Some(sub) = rest
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
    else {
        return Ok(rest);
    };
    let given: Vec<String> = rest[sub + 2..]
        .iter()
        .filter_map(|a| a.to_str()?.strip_prefix("--"))
        .map(|f| f.split('=').next().unwrap_or(f).to_string())
        .collect();

    let mut tokens = Vec::new();
    for (key, value) in &obj {
        if key == "config" {
            return Err(Failure::usage("config files cannot nest `config`"));
        }
        let suppressed = given.iter().any(|g| {
            g == key
                || RIVALS
                    .iter()
                    .any(|(flag, rivals)| flag == g && rivals.contains(&key.as_str()))
        });
        if suppressed {
            continue;
        }
        let flag = format!("--{key}");
        match value {
            Value::Null | Value::Bool(false) => {}
            Value::Bool(true) => tokens.push(flag),
            Value::String(s) => tokens.extend([flag, s.clone()]),
            Value::Number(n) => tokens.extend([flag, n.to_string()]),
            _ => {
                return Err(Failure::usage(format!(
                    "config key `{key}` must be a scalar"
                )))
            }
        }
    }
    let at = sub + 2;
    rest.splice(at..at, tokens.into_iter().map(OsString::from));
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn args(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    fn strs(v: Vec<OsString>) -> Vec<String> {
        v.into_iter().map(|s| s.into_string().unwrap()).collect()
    }

    #[test]
    fn flags_beat_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(
            f,
            r#"{{"level": 2, "generator": "peano", "l0": 0.5, "panels": true}}"#
        )
        .unwrap();
        let p = f.path().to_str().unwrap();
        let out = expand(args(&[
            "fk", "--config", p, "generate", "--level", "4", "--spec", "s.json",
        ]))
        .unwrap();
        assert_eq!(
            strs(out),
            ["fk", "generate", "--l0", "0.5", "--panels", "--level", "4", "--spec", "s.json"]
        );
    }

    #[test]
    fn untouched_without_config() {
        let a = args(&["fk", "analyze", "--k-max", "3"]);
        assert_eq!(expand(a.clone()).unwrap(), a);
    }

    #[test]
    fn rejects_non_object() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, "[1, 2]").unwrap();
        let p = f.path().to_str().unwrap().to_string();
        let err = expand(args(&["fk", "generate", &format!("--config={p}")])).unwrap_err();
        assert!(matches!(err, Failure::Usage(_)));
    }
}
