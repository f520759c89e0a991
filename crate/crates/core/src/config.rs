//! Run-wide numerical knobs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_N: usize = 64;
pub const MIN_N: usize = 8;
/// Cap for cubic-cost routines (Faà di Bruno dynamic programme).
pub const MAX_N_CUBIC: usize = 512;
pub const MAX_N: usize = 1024;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub n: usize,
    /// Relative growth allowed between the half and full truncation for a witness.
    pub tau_stab: f64,
    /// Growth per doubling of the truncation that counts as divergence.
    pub tau_grow: f64,
    /// Slope in ln j separating bounded from divergent tails in growth gates.
    pub tau_slope: f64,
    /// Safety margin below K in the weight-function index test.
    pub tau_margin: f64,
    pub t_max: f64,
    /// Upper end of the t-grid for limsup-type index tests on unbounded domains.
    pub index_t_max: f64,
    pub grid_per_decade: usize,
    pub gamma_max: f64,
    pub gamma_width: f64,
    pub epsilon: f64,
    /// Largest |z| at which Mittag-Leffler series are summed directly.
    pub z_reliable: f64,
    /// Parameters of matrices built from weight functions.
    pub ell_grid: Vec<f64>,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: DEFAULT_N,
            tau_stab: 0.05,
            tau_grow: 0.25,
            tau_slope: 0.02,
            tau_margin: 0.02,
            t_max: 1e8,
            index_t_max: 1e40,
            grid_per_decade: 512,
            gamma_max: 16.0,
            gamma_width: 1.0 / 64.0,
            epsilon: 1e-10,
            z_reliable: 30.0,
            ell_grid: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            threads: None,
        }
    }
}

impl RunConfig {
    /// Applies one `key=value` override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = || Error::InvalidInput(format!("bad value for {key}: {value}"));
        let float = |v: &str| v.trim().parse::<f64>().map_err(|_| bad());
        match key.trim() {
            "n" | "N" => self.n = value.trim().parse().map_err(|_| bad())?,
            "tau_stab" => self.tau_stab = float(value)?,
            "tau_grow" => self.tau_grow = float(value)?,
            "tau_slope" => self.tau_slope = float(value)?,
            "t_max" => self.t_max = float(value)?,
            "index_t_max" => self.index_t_max = float(value)?,
            "grid_per_decade" => self.grid_per_decade = value.trim().parse().map_err(|_| bad())?,
            "gamma_max" => self.gamma_max = float(value)?,
            "gamma_width" => self.gamma_width = float(value)?,
            "epsilon" => self.epsilon = float(value)?,
            "tau_margin" => self.tau_margin = float(value)?,
            "z_reliable" => self.z_reliable = float(value)?,
            "ell_grid" => {
                self.ell_grid = value.split(',').map(float).collect::<Result<Vec<_>>>()?;
                if self.ell_grid.is_empty() || self.ell_grid.iter().any(|&l| l <= 0.0) {
                    return Err(bad());
                }
            }
            "threads" => self.threads = Some(value.trim().parse().map_err(|_| bad())?),
            other => return Err(Error::InvalidInput(format!("unknown config key {other}"))),
        }
        Ok(())
    }

    /// Parses a `key=value` file; `#` starts a comment.
    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::InvalidInput(format!("line {}: expected key=value", lineno + 1))
            })?;
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }
}

pub fn check_truncation(n: usize, max: usize) -> Result<()> {
    if n < MIN_N || n > max {
        return Err(Error::TruncationOutOfRange { n, min: MIN_N, max });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_file_overrides_defaults() {
        let cfg = RunConfig::from_kv_str("# c\nn = 128\ntau_stab=0.1\n\n").unwrap();
        assert_eq!(cfg.n, 128);
        assert_eq!(cfg.tau_stab, 0.1);
        assert_eq!(cfg.tau_grow, 0.25);
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(RunConfig::from_kv_str("bogus=1").is_err());
        assert!(RunConfig::from_kv_str("n").is_err());
    }
}
