//! Condition reports and the finite-truncation verdict rules.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    WitnessedUpToN,
    FailsAtTruncation,
    Undetermined,
}

impl Verdict {
    pub fn is_witnessed(self) -> bool {
        self == Verdict::WitnessedUpToN
    }

    pub fn is_failed(self) -> bool {
        self == Verdict::FailsAtTruncation
    }

    /// Conjunction: any failure wins, then any undetermined.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (FailsAtTruncation, _) | (_, FailsAtTruncation) => FailsAtTruncation,
            (Undetermined, _) | (_, Undetermined) => Undetermined,
            _ => WitnessedUpToN,
        }
    }

    pub fn exact(holds: bool) -> Verdict {
        if holds {
            Verdict::WitnessedUpToN
        } else {
            Verdict::FailsAtTruncation
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Lc,
    Slc,
    Normalized,
    Mg,
    Dc,
    Rai,
    Fdb,
    Preceq,
    Equiv,
    LimitMjInfinity,
    RootLiminf,
    Omega0,
    Omega1,
    Omega2,
    Omega3,
    Omega4,
    Omega5,
    Omega6,
    Alpha0,
    Sandwich,
    ProductBound,
    GammaTest,
    Characteristic1,
    Characteristic2,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::Lc => "(lc)",
            Condition::Slc => "(slc)",
            Condition::Normalized => "normalized",
            Condition::Mg => "(mg)",
            Condition::Dc => "(dc)",
            Condition::Rai => "(rai)",
            Condition::Fdb => "(FdB)",
            Condition::Preceq => "preceq",
            Condition::Equiv => "equiv",
            Condition::LimitMjInfinity => "limit-mj-infinity",
            Condition::RootLiminf => "root-liminf",
            Condition::Omega0 => "(omega0)",
            Condition::Omega1 => "(omega1)",
            Condition::Omega2 => "(omega2)",
            Condition::Omega3 => "(omega3)",
            Condition::Omega4 => "(omega4)",
            Condition::Omega5 => "(omega5)",
            Condition::Omega6 => "(omega6)",
            Condition::Alpha0 => "(alpha0)",
            Condition::Sandwich => "sandwich",
            Condition::ProductBound => "product-bound",
            Condition::GammaTest => "gamma-test",
            Condition::Characteristic1 => "characteristic-1",
            Condition::Characteristic2 => "characteristic-2",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub truncation: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub verdict: Verdict,
    pub witness: BTreeMap<String, f64>,
    pub trace: Vec<TracePoint>,
    pub failure_site: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ConditionReport {
    pub fn new(condition: Condition, verdict: Verdict) -> Self {
        ConditionReport {
            condition,
            verdict,
            witness: BTreeMap::new(),
            trace: Vec::new(),
            failure_site: None,
            notes: Vec::new(),
        }
    }

    pub fn with_witness(mut self, name: &str, value: f64) -> Self {
        self.witness.insert(name.to_string(), value);
        self
    }

    pub fn with_trace(mut self, trace: Vec<TracePoint>) -> Self {
        self.trace = trace;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn last_value(&self) -> f64 {
        self.trace.last().map(|p| p.value).unwrap_or(f64::NAN)
    }
}

/// Truncation levels N/4, N/2, 3N/4, N.
pub fn truncations(n: usize) -> [usize; 4] {
    [n / 4, n / 2, 3 * n / 4, n]
}

pub fn make_trace(levels: &[usize], values: &[f64]) -> Vec<TracePoint> {
    levels
        .iter()
        .zip(values)
        .map(|(&j, &v)| TracePoint { truncation: j as f64, value: v })
        .collect()
}

const ABS_SLACK: f64 = 1e-9;

/// Verdict for a minimal constant that must stay bounded as the truncation grows.
///
/// `values` are taken at N/4, N/2, 3N/4, N. The constant is accepted when the
/// last doubling adds at most `tau_stab` relative to the half-truncation value.
/// It is rejected when the last doubling adds more than `tau_grow`, or when the
/// increment per doubling is not decaying (at least logarithmic divergence).
/// Decaying increments whose geometric extrapolation adds at most `tau_grow`
/// are accepted too, which keeps the verdict invariant under `ln h · j` shifts.
pub fn bounded_verdict(values: &[f64], cfg: &RunConfig) -> Verdict {
    assert!(values.len() == 4, "trace must have four levels");
    let (quarter, half, last) = (values[0], values[1], values[3]);
    if last.is_nan() || last == f64::INFINITY {
        return Verdict::FailsAtTruncation;
    }
    if half == f64::NEG_INFINITY {
        return Verdict::Undetermined;
    }
    let step2 = last - half;
    if step2 <= cfg.tau_stab * half.abs() + ABS_SLACK {
        return Verdict::WitnessedUpToN;
    }
    if step2 > cfg.tau_grow {
        return Verdict::FailsAtTruncation;
    }
    let step1 = if quarter.is_finite() { half - quarter } else { 0.0 };
    if step2 >= (1.0 - cfg.tau_grow) * step1 {
        return Verdict::FailsAtTruncation;
    }
    // Increments shrink geometrically: bound the rest of the series.
    let ratio = step2 / step1;
    if step2 * ratio / (1.0 - ratio) <= cfg.tau_grow {
        return Verdict::WitnessedUpToN;
    }
    Verdict::Undetermined
}

/// Verdict for a nonnegative quantity that must tend to zero.
pub fn decay_verdict(values: &[f64], cfg: &RunConfig) -> Verdict {
    let n = values.len();
    assert!(n >= 2);
    let (half, last) = (values[n / 2 - 1], values[n - 1]);
    if last.is_nan() {
        return Verdict::Undetermined;
    }
    if last <= 1e-12 {
        return Verdict::WitnessedUpToN;
    }
    let ratio = last / half;
    if ratio <= 1.0 - cfg.tau_grow {
        Verdict::WitnessedUpToN
    } else if ratio >= 1.0 - cfg.tau_stab {
        Verdict::FailsAtTruncation
    } else {
        Verdict::Undetermined
    }
}

/// Verdict for a quantity that must diverge to +infinity.
pub fn divergence_verdict(values: &[f64], cfg: &RunConfig) -> Verdict {
    match bounded_verdict(values, cfg) {
        Verdict::WitnessedUpToN => Verdict::FailsAtTruncation,
        Verdict::FailsAtTruncation => Verdict::WitnessedUpToN,
        Verdict::Undetermined => Verdict::Undetermined,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    #[test]
    fn flat_trace_is_witnessed() {
        assert_eq!(bounded_verdict(&[1.0, 1.0, 1.0, 1.0], &cfg()), Verdict::WitnessedUpToN);
        assert_eq!(bounded_verdict(&[0.0, 0.0, 0.0, 1e-15], &cfg()), Verdict::WitnessedUpToN);
        assert_eq!(bounded_verdict(&[2.0, 1.5, 1.2, 1.0], &cfg()), Verdict::WitnessedUpToN);
    }

    #[test]
    fn logarithmic_growth_fails_even_when_slow() {
        let c = 0.05;
        let v: Vec<f64> = [16.0f64, 32.0, 48.0, 64.0].iter().map(|j| c * j.ln()).collect();
        assert_eq!(bounded_verdict(&v, &cfg()), Verdict::FailsAtTruncation);
    }

    #[test]
    fn fast_growth_fails() {
        assert_eq!(bounded_verdict(&[1.0, 2.0, 3.0, 4.0], &cfg()), Verdict::FailsAtTruncation);
    }

    #[test]
    fn fast_decaying_increment_is_witnessed() {
        assert_eq!(bounded_verdict(&[0.0, 1.0, 1.1, 1.2], &cfg()), Verdict::WitnessedUpToN);
        // shifting every value leaves the verdict alone
        assert_eq!(bounded_verdict(&[-1.2, -0.2, -0.1, 0.0], &cfg()), Verdict::WitnessedUpToN);
    }

    #[test]
    fn slowly_decaying_increment_is_undetermined() {
        assert_eq!(bounded_verdict(&[0.0, 0.2857, 0.3857, 0.4857], &cfg()), Verdict::Undetermined);
    }

    #[test]
    fn decay_rules() {
        assert_eq!(decay_verdict(&[1.0, 0.5, 0.3, 0.2], &cfg()), Verdict::WitnessedUpToN);
        assert_eq!(decay_verdict(&[1.0, 1.0, 1.0, 1.0], &cfg()), Verdict::FailsAtTruncation);
        assert_eq!(decay_verdict(&[1.0, 1.0, 0.9, 0.85], &cfg()), Verdict::Undetermined);
    }

    #[test]
    fn verdict_conjunction() {
        use Verdict::*;
        assert_eq!(WitnessedUpToN.and(Undetermined), Undetermined);
        assert_eq!(Undetermined.and(FailsAtTruncation), FailsAtTruncation);
        assert_eq!(WitnessedUpToN.and(WitnessedUpToN), WitnessedUpToN);
    }
}
