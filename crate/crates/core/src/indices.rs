//! Growth indices of sequences and weight functions by bisection on the exponent.
//!
//! For a sequence the test is "`m_j / (j+1)^γ` is almost increasing", read off the
//! trace of `max_{j<=k<J} (h_j - h_k)` with `h_j = ln m_j - γ ln(j+1)`. This is the
//! same as finding an equivalent sequence `ℓ` with `ℓ_j/(j+1)^γ` nondecreasing,
//! up to the constant of equivalence.

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::report::{bounded_verdict, make_trace, truncations, Condition, ConditionReport, Verdict};
use crate::sequences::WeightSequence;
use crate::weights::{log_grid, WeightFunction};

/// Ratios `K` tried in the weight-function test.
pub const K_GRID: [f64; 4] = [2.0, 4.0, 8.0, 16.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndexProbe {
    pub gamma: f64,
    pub verdict: Verdict,
    /// Last value of the test trace (the constant in the sequence test, the best
    /// ratio over `K` in the weight-function test).
    pub constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexEstimate {
    /// Midpoint of the final bracket, or the cap when `infinite`.
    pub value: f64,
    pub infinite: bool,
    pub lower_witnessed: Option<f64>,
    pub upper_refuted: Option<f64>,
    pub trace: Vec<IndexProbe>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl IndexEstimate {
    /// True when no witnessed probe sits above a refuted one.
    pub fn is_monotone(&self) -> bool {
        let max_ok = self
            .trace
            .iter()
            .filter(|p| p.verdict.is_witnessed())
            .map(|p| p.gamma)
            .fold(f64::NEG_INFINITY, f64::max);
        let min_bad = self
            .trace
            .iter()
            .filter(|p| !p.verdict.is_witnessed())
            .map(|p| p.gamma)
            .fold(f64::INFINITY, f64::min);
        max_ok < min_bad
    }
}

/// The almost-increasing test for `m_j / (j+1)^γ`.
pub fn gamma_test_sequence(s: &WeightSequence, gamma: f64, cfg: &RunConfig) -> ConditionReport {
    let q = s.quotients();
    let n = q.len();
    let mut running = Vec::with_capacity(n + 1);
    running.push(0.0);
    let mut top = f64::NEG_INFINITY;
    let mut worst = 0.0f64;
    for (j, &lq) in q.iter().enumerate() {
        let h = lq - gamma * ((j + 1) as f64).ln();
        top = top.max(h);
        worst = worst.max(top - h);
        running.push(worst);
    }
    let levels = truncations(n);
    let values: Vec<f64> = levels.iter().map(|&j| running[j]).collect();
    ConditionReport::new(Condition::GammaTest, bounded_verdict(&values, cfg))
        .with_witness("gamma", gamma)
        .with_witness("ln_a", values[3])
        .with_trace(make_trace(&levels, &values))
}

/// Upper half of the `ln t` window for the weight-function test with ratio `k`.
fn omega_window(w: &WeightFunction, gamma: f64, k: f64, cfg: &RunConfig) -> Option<(f64, f64)> {
    let shift = gamma * k.ln();
    let top = match w.log_t_max() {
        Some(b) => b.min(cfg.index_t_max.ln()) - shift,
        None => cfg.index_t_max.ln(),
    };
    (top > 1.0).then_some((top / 2.0, top))
}

/// `ω(K^γ t) <= K (1 - τ) ω(t)` on the upper half of the grid for some `K`.
pub fn gamma_test_omega(w: &WeightFunction, gamma: f64, cfg: &RunConfig) -> Result<ConditionReport> {
    let mut best = f64::INFINITY;
    let mut best_k = f64::NAN;
    let mut reduced = false;
    for &k in &K_GRID {
        let Some((lo, hi)) = omega_window(w, gamma, k, cfg) else {
            reduced = true;
            continue;
        };
        if w.log_t_max().is_some() {
            reduced = true;
        }
        let shift = gamma * k.ln();
        let mut worst = 0.0f64;
        for y in log_grid(lo, hi, cfg.grid_per_decade) {
            let base = w.phi(y)?;
            if base <= 0.0 {
                worst = f64::INFINITY;
                break;
            }
            worst = worst.max(w.phi(y + shift)? / base);
        }
        let scaled = worst / k;
        if scaled < best {
            best = scaled;
            best_k = k;
        }
    }
    let verdict = if best.is_finite() {
        Verdict::exact(best <= 1.0 - cfg.tau_margin)
    } else {
        Verdict::Undetermined
    };
    let mut r = ConditionReport::new(Condition::GammaTest, verdict)
        .with_witness("gamma", gamma)
        .with_witness("ratio_over_k", best)
        .with_witness("k", best_k);
    if reduced {
        r = r.with_note("finite domain: t grid shrunk so that K^gamma t stays inside, reduced evidence");
    }
    Ok(r)
}

fn probe(gamma: f64, r: &ConditionReport) -> IndexProbe {
    let constant = r.witness.get("ln_a").or_else(|| r.witness.get("ratio_over_k")).copied().unwrap_or(f64::NAN);
    IndexProbe { gamma, verdict: r.verdict, constant }
}

/// Bisection for the supremum of exponents passing `test`, on `[lo, cap]`.
///
/// `lo_known` marks the lower end as witnessed without running the test.
fn bisect<F>(lo: f64, lo_known: bool, cfg: &RunConfig, test: F) -> Result<IndexEstimate>
where
    F: Fn(f64) -> Result<ConditionReport>,
{
    let cap = cfg.gamma_max;
    let mut trace = Vec::new();
    let mut notes = Vec::new();
    let top = test(cap)?;
    trace.push(probe(cap, &top));
    if top.verdict.is_witnessed() {
        return Ok(IndexEstimate {
            value: cap,
            infinite: true,
            lower_witnessed: Some(cap),
            upper_refuted: None,
            trace,
            notes: vec![format!("test passes at the cap {cap}; reported as +inf")],
        });
    }
    if !lo_known {
        let bottom = test(lo)?;
        trace.push(probe(lo, &bottom));
        if !bottom.verdict.is_witnessed() {
            return Ok(IndexEstimate {
                value: lo,
                infinite: false,
                lower_witnessed: None,
                upper_refuted: Some(lo),
                trace,
                notes: vec![format!("test fails already at {lo}")],
            });
        }
    } else {
        notes.push(format!("test holds trivially at {lo}"));
    }
    let (mut a, mut b) = (lo, cap);
    while b - a > cfg.gamma_width {
        let mid = 0.5 * (a + b);
        let r = test(mid)?;
        trace.push(probe(mid, &r));
        if r.verdict.is_witnessed() {
            a = mid;
        } else {
            b = mid;
        }
    }
    notes.push("undetermined probes count as not witnessed".into());
    Ok(IndexEstimate {
        value: 0.5 * (a + b),
        infinite: false,
        lower_witnessed: Some(a),
        upper_refuted: Some(b),
        trace,
        notes,
    })
}

/// Growth index of a log-convex sequence with at least 32 quotients.
pub fn gamma_sequence(s: &WeightSequence, cfg: &RunConfig) -> Result<IndexEstimate> {
    if let Some(j) = s.lc_violation() {
        return Err(Error::NotLogConvex { index: j });
    }
    if s.n() < 32 {
        return Err(Error::TruncationOutOfRange { n: s.n(), min: 32, max: crate::config::MAX_N });
    }
    bisect(-cfg.gamma_max, false, cfg, |g| Ok(gamma_test_sequence(s, g, cfg)))
}

/// Growth index of a weight function.
pub fn gamma_omega(w: &WeightFunction, cfg: &RunConfig) -> Result<IndexEstimate> {
    bisect(0.0, true, cfg, |g| gamma_test_omega(w, g, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    #[test]
    fn gevrey_index_equals_exponent() {
        for a in [0.5, 1.0, 2.0] {
            let est = gamma_sequence(&WeightSequence::gevrey(a, 64), &cfg()).unwrap();
            assert!((est.value - a).abs() <= 1.0 / 32.0, "a={a}: {}", est.value);
            assert!(est.is_monotone());
            assert!(!est.infinite);
        }
    }

    #[test]
    fn qgevrey_hits_the_cap() {
        let est = gamma_sequence(&WeightSequence::qgevrey(1.5, 64).unwrap(), &cfg()).unwrap();
        assert!(est.infinite);
        assert_eq!(est.value, 16.0);
    }

    #[test]
    fn non_convex_input_rejected() {
        let s = WeightSequence::from_logs("bump", (0..40).map(|j| if j == 5 { 30.0 } else { j as f64 }).collect())
            .unwrap();
        assert!(matches!(gamma_sequence(&s, &cfg()), Err(Error::NotLogConvex { .. })));
    }

    #[test]
    fn square_root_weight_index_two() {
        let w = WeightFunction::power(0.5).unwrap();
        let est = gamma_omega(&w, &cfg()).unwrap();
        assert!((est.value - 2.0).abs() <= 1.0 / 32.0, "{}", est.value);
        let w2 = w.with_power(2.0);
        let est2 = gamma_omega(&w2, &cfg()).unwrap();
        assert!((est2.value - est.value / 2.0).abs() <= 1.0 / 64.0, "{} vs {}", est2.value, est.value);
    }

    #[test]
    fn log_square_weight_is_infinite() {
        let w = WeightFunction::log_square(1.5).unwrap().normalized();
        assert!(gamma_omega(&w, &cfg()).unwrap().infinite);
    }
}
