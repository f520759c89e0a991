//! Shorthand parsing for `--spec` style arguments and JSON input files.

use std::path::Path;

use serde::de::DeserializeOwned;
use weightcalc::matrices::MatrixCondition;
use weightcalc::weights::ClosedOmega;
use weightcalc::{Condition, MatrixSpec, OmegaSpec, SequenceSpec};

use crate::CliError;

fn num(s: &str, what: &str) -> Result<f64, CliError> {
    s.trim().parse().map_err(|_| CliError::Usage(format!("{what}: '{s}' is not a number")))
}

fn count(s: &str) -> Result<usize, CliError> {
    s.trim().parse().map_err(|_| CliError::Usage(format!("'{s}' is not a truncation")))
}

/// `gevrey:a[:N]`, `gevrey-bar:a[:N]`, `qgevrey:q[:N]`.
pub fn sequence_shorthand(text: &str, default_n: usize) -> Result<SequenceSpec, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let n = match parts.get(2) {
        Some(v) => count(v)?,
        None => default_n,
    };
    if parts.len() < 2 || parts.len() > 3 {
        return Err(CliError::Usage(format!("sequence spec '{text}' should look like gevrey:2 or qgevrey:1.5:64")));
    }
    let x = num(parts[1], parts[0])?;
    match parts[0] {
        "gevrey" | "G" => Ok(SequenceSpec::Gevrey { a: x, n }),
        "gevrey-bar" | "gevrey_bar" | "Gbar" => Ok(SequenceSpec::GevreyBar { a: x, n }),
        "qgevrey" | "q-gevrey" => Ok(SequenceSpec::Qgevrey { q: x, n }),
        other => Err(CliError::Usage(format!("unknown sequence family '{other}'"))),
    }
}

/// `log-square:q`, `power:p`, `linear-log`.
pub fn omega_shorthand(text: &str, normalized: bool) -> Result<OmegaSpec, CliError> {
    let (name, arg) = match text.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (text, None),
    };
    let need = |what: &str| arg.ok_or_else(|| CliError::Usage(format!("{name} needs a parameter, e.g. {name}:{what}")));
    let form = match name {
        "log-square" | "log_square" => ClosedOmega::LogSquare { q: num(need("1.5")?, name)? },
        "power" => ClosedOmega::Power { p: num(need("0.5")?, name)? },
        "linear-log" | "linear_log" => ClosedOmega::LinearLog,
        other => return Err(CliError::Usage(format!("unknown weight function '{other}'"))),
    };
    Ok(OmegaSpec::ClosedForm { form, normalized, scale: 1.0 })
}

/// `power-family:beta[:N]`, `constant:<sequence>`, `omega:<weight>[:N]` (normalized).
pub fn matrix_shorthand(text: &str, default_n: usize, grid: &[f64]) -> Result<MatrixSpec, CliError> {
    let (head, rest) = text
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("matrix spec '{text}' should look like power-family:1.5")))?;
    match head {
        "power-family" | "power_family" => {
            let (beta, n) = match rest.split_once(':') {
                Some((b, n)) => (num(b, head)?, count(n)?),
                None => (num(rest, head)?, default_n),
            };
            Ok(MatrixSpec::PowerFamily { beta, grid: vec![0.5, 1.0, 2.0, 4.0], n })
        }
        "constant" => Ok(MatrixSpec::Constant { sequence: sequence_shorthand(rest, default_n)?, grid: vec![1.0] }),
        "omega" => Ok(MatrixSpec::FromOmega {
            omega: omega_shorthand(rest, true)?,
            grid: grid.to_vec(),
            n: default_n,
        }),
        other => Err(CliError::Usage(format!("unknown matrix family '{other}'"))),
    }
}

fn by_name<T: DeserializeOwned>(name: &str) -> Option<T> {
    serde_json::from_value(serde_json::Value::String(name.trim().replace('-', "_").to_lowercase())).ok()
}

pub fn condition(name: &str) -> Result<Condition, CliError> {
    by_name(name).ok_or_else(|| CliError::Usage(format!("unknown condition '{name}'")))
}

pub fn matrix_condition(name: &str) -> Result<MatrixCondition, CliError> {
    by_name(name).ok_or_else(|| CliError::Usage(format!("unknown matrix condition '{name}'")))
}

/// Reads a JSON document, mapping syntax and schema errors to the bad-JSON exit code.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Run(anyhow::anyhow!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Json(format!("{}: {e}", path.display())))
}

/// `lo:hi:step`.
pub fn range(text: &str) -> Result<(f64, f64, f64), CliError> {
    let p: Vec<&str> = text.split(':').collect();
    if p.len() != 3 {
        return Err(CliError::Usage(format!("range '{text}' should be lo:hi:step")));
    }
    Ok((num(p[0], "range")?, num(p[1], "range")?, num(p[2], "range")?))
}
