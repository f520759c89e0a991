//! Weight sequences in the natural-log domain and the sequence-level conditions.

use serde::{Deserialize, Serialize};

use crate::config::{check_truncation, RunConfig, DEFAULT_N, MAX_N, MAX_N_CUBIC};
use crate::error::{Error, Result};
use crate::report::{bounded_verdict, make_trace, truncations, Condition, ConditionReport, Verdict};

/// Relative slack used by the exact convexity tests.
pub const LC_TOL: f64 = 1e-12;

pub fn ln_factorial(j: usize) -> f64 {
    if j < 2 {
        0.0
    } else {
        libm::lgamma(j as f64 + 1.0)
    }
}

/// `j ln j` with `0 ln 0 = 0`.
pub fn j_ln_j(j: usize) -> f64 {
    if j == 0 {
        0.0
    } else {
        let x = j as f64;
        x * x.ln()
    }
}

/// `logM[j] = factorial * ln j! + bar * j ln j + log_q * j^2`.
///
/// Covers G^a, the barred family, q-Gevrey and all their products and quotients.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ClosedForm {
    pub factorial: f64,
    pub bar: f64,
    pub log_q: f64,
}

impl ClosedForm {
    pub fn gevrey(a: f64) -> Self {
        ClosedForm { factorial: a, ..Default::default() }
    }

    pub fn gevrey_bar(a: f64) -> Self {
        ClosedForm { bar: a, ..Default::default() }
    }

    pub fn qgevrey(q: f64) -> Self {
        ClosedForm { log_q: q.ln(), ..Default::default() }
    }

    pub fn eval(&self, j: usize) -> f64 {
        let mut v = 0.0;
        if self.factorial != 0.0 {
            v += self.factorial * ln_factorial(j);
        }
        if self.bar != 0.0 {
            v += self.bar * j_ln_j(j);
        }
        if self.log_q != 0.0 {
            let x = j as f64;
            v += self.log_q * x * x;
        }
        v
    }

    fn combine(&self, other: &ClosedForm, sign: f64) -> ClosedForm {
        ClosedForm {
            factorial: self.factorial + sign * other.factorial,
            bar: self.bar + sign * other.bar,
            log_q: self.log_q + sign * other.log_q,
        }
    }

    fn scale(&self, s: f64) -> ClosedForm {
        ClosedForm { factorial: s * self.factorial, bar: s * self.bar, log_q: s * self.log_q }
    }

    /// Exponent of `j ln j` in the leading growth of `logM[j]`, if it is not super-polynomial.
    pub fn j_ln_j_exponent(&self) -> Option<f64> {
        if self.log_q != 0.0 {
            None
        } else {
            Some(self.factorial + self.bar)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Generator {
    Closed(ClosedForm),
    Table,
    Derived,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightSequence {
    label: String,
    generator: Generator,
    #[serde(rename = "logM")]
    log_m: Vec<f64>,
}

impl WeightSequence {
    /// Builds a sequence from raw log values; only `logM[0] = 0` and finiteness are enforced.
    pub fn from_logs(label: impl Into<String>, log_m: Vec<f64>) -> Result<Self> {
        Self::with_generator(label, log_m, Generator::Table)
    }

    pub(crate) fn derived(label: impl Into<String>, log_m: Vec<f64>) -> Result<Self> {
        Self::with_generator(label, log_m, Generator::Derived)
    }

    fn with_generator(label: impl Into<String>, log_m: Vec<f64>, generator: Generator) -> Result<Self> {
        if log_m.len() < 2 {
            return Err(Error::InvalidInput("a sequence needs at least two terms".into()));
        }
        if log_m[0] != 0.0 {
            return Err(Error::InvalidInput(format!("logM[0] must be 0, got {}", log_m[0])));
        }
        if let Some(j) = log_m.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("logM[{j}] is not finite")));
        }
        Ok(WeightSequence { label: label.into(), generator, log_m })
    }

    pub fn closed(label: impl Into<String>, form: ClosedForm, n: usize) -> Self {
        let log_m = (0..=n).map(|j| form.eval(j)).collect();
        WeightSequence { label: label.into(), generator: Generator::Closed(form), log_m }
    }

    /// `G^a = (j!^a)`.
    pub fn gevrey(a: f64, n: usize) -> Self {
        Self::closed(format!("G^{a}"), ClosedForm::gevrey(a), n)
    }

    /// The barred family `(j^{ja})`, with `0^0 = 1`.
    pub fn gevrey_bar(a: f64, n: usize) -> Self {
        Self::closed(format!("Gbar^{a}"), ClosedForm::gevrey_bar(a), n)
    }

    /// `(q^{j^2})`, q > 1.
    pub fn qgevrey(q: f64, n: usize) -> Result<Self> {
        if !(q > 1.0) || !q.is_finite() {
            return Err(Error::InvalidInput(format!("q-Gevrey needs q > 1, got {q}")));
        }
        Ok(Self::closed(format!("q-Gevrey({q})"), ClosedForm::qgevrey(q), n))
    }

    pub fn unit(n: usize) -> Self {
        Self::closed("1", ClosedForm::default(), n)
    }

    pub fn n(&self) -> usize {
        self.log_m.len() - 1
    }

    pub fn log_m(&self) -> &[f64] {
        &self.log_m
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn closed_form(&self) -> Option<ClosedForm> {
        match self.generator {
            Generator::Closed(f) => Some(f),
            _ => None,
        }
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `log m_j = logM[j+1] - logM[j]`, j = 0..N-1.
    pub fn quotients(&self) -> Vec<f64> {
        self.log_m.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// `log Mcheck_j = logM[j] - ln j!`.
    pub fn log_check(&self) -> Vec<f64> {
        self.log_m.iter().enumerate().map(|(j, v)| v - ln_factorial(j)).collect()
    }

    /// Same sequence with `N` terms, recomputing from the generator when growing.
    pub fn resized(&self, n: usize) -> Result<Self> {
        if n <= self.n() {
            let mut out = self.clone();
            out.log_m.truncate(n + 1);
            return Ok(out);
        }
        match self.generator {
            Generator::Closed(form) => Ok(Self::closed(self.label.clone(), form, n)),
            _ => Err(Error::TruncationInsufficient { needed: n, available: self.n() }),
        }
    }

    fn zip_with(&self, other: &WeightSequence, sign: f64, op: &str) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::InvalidInput(format!(
                "length mismatch: N = {} vs N = {}",
                self.n(),
                other.n()
            )));
        }
        let log_m: Vec<f64> = self.log_m.iter().zip(&other.log_m).map(|(a, b)| a + sign * b).collect();
        let label = format!("({}){op}({})", self.label, other.label);
        let generator = match (&self.generator, &other.generator) {
            (Generator::Closed(a), Generator::Closed(b)) => Generator::Closed(a.combine(b, sign)),
            _ => Generator::Derived,
        };
        Self::with_generator(label, log_m, generator)
    }

    pub fn product(&self, other: &WeightSequence) -> Result<Self> {
        self.zip_with(other, 1.0, "*")
    }

    pub fn quotient(&self, other: &WeightSequence) -> Result<Self> {
        self.zip_with(other, -1.0, "/")
    }

    /// `M^s`, i.e. every log value scaled by `s`.
    pub fn power(&self, s: f64) -> Self {
        let generator = match &self.generator {
            Generator::Closed(f) => Generator::Closed(f.scale(s)),
            _ => Generator::Derived,
        };
        WeightSequence {
            label: format!("({})^{s}", self.label),
            generator,
            log_m: self.log_m.iter().map(|v| v * s).collect(),
        }
    }

    /// First index `j` where `m_{j-1} <= m_j` is violated beyond rounding.
    pub fn lc_violation(&self) -> Option<usize> {
        convexity_violation(&self.log_m)
    }

    pub fn is_log_convex(&self) -> bool {
        self.lc_violation().is_none()
    }

    pub fn is_normalized(&self) -> bool {
        self.log_m[1] >= -LC_TOL
    }
}

/// First interior index where the discrete second difference is negative beyond rounding.
pub fn convexity_violation(v: &[f64]) -> Option<usize> {
    (1..v.len().saturating_sub(1)).find(|&j| {
        let second = v[j + 1] - 2.0 * v[j] + v[j - 1];
        let scale = 1.0 + v[j + 1].abs() + v[j].abs() + v[j - 1].abs();
        second < -LC_TOL * scale
    })
}

fn default_n() -> usize {
    DEFAULT_N
}

/// JSON-facing description of a sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceSpec {
    Gevrey {
        a: f64,
        #[serde(rename = "N", default = "default_n")]
        n: usize,
    },
    GevreyBar {
        a: f64,
        #[serde(rename = "N", default = "default_n")]
        n: usize,
    },
    Qgevrey {
        q: f64,
        #[serde(rename = "N", default = "default_n")]
        n: usize,
    },
    Table {
        #[serde(rename = "logM")]
        log_m: Vec<f64>,
        #[serde(default)]
        label: Option<String>,
    },
    Product {
        left: Box<SequenceSpec>,
        right: Box<SequenceSpec>,
    },
    Quotient {
        left: Box<SequenceSpec>,
        right: Box<SequenceSpec>,
    },
}

pub fn make_sequence(spec: &SequenceSpec) -> Result<WeightSequence> {
    let s = match spec {
        SequenceSpec::Gevrey { a, n } => {
            check_truncation(*n, MAX_N)?;
            WeightSequence::gevrey(*a, *n)
        }
        SequenceSpec::GevreyBar { a, n } => {
            check_truncation(*n, MAX_N)?;
            WeightSequence::gevrey_bar(*a, *n)
        }
        SequenceSpec::Qgevrey { q, n } => {
            check_truncation(*n, MAX_N)?;
            WeightSequence::qgevrey(*q, *n)?
        }
        SequenceSpec::Table { log_m, label } => {
            check_truncation(log_m.len().saturating_sub(1), MAX_N)?;
            WeightSequence::from_logs(label.clone().unwrap_or_else(|| "table".into()), log_m.clone())?
        }
        SequenceSpec::Product { left, right } => make_sequence(left)?.product(&make_sequence(right)?)?,
        SequenceSpec::Quotient { left, right } => make_sequence(left)?.quotient(&make_sequence(right)?)?,
    };
    Ok(s)
}

/// Collects per-index contributions `c[J]` into a prefix-max trace at N/4, N/2, 3N/4, N.
fn prefix_max_report(
    condition: Condition,
    witness_name: &str,
    contrib: &[(f64, (usize, usize))],
    n: usize,
    cfg: &RunConfig,
) -> ConditionReport {
    let mut best = f64::NEG_INFINITY;
    let mut site = None;
    let mut running = Vec::with_capacity(n + 1);
    for j in 0..=n {
        if let Some(&(v, s)) = contrib.get(j) {
            if v > best {
                best = v;
                site = Some(s);
            }
        }
        running.push((best, site));
    }
    let levels = truncations(n);
    let values: Vec<f64> = levels.iter().map(|&j| running[j].0).collect();
    let verdict = bounded_verdict(&values, cfg);
    let mut report = ConditionReport::new(condition, verdict)
        .with_witness(witness_name, running[n].0)
        .with_trace(make_trace(&levels, &values));
    report.failure_site = running[n].1;
    report
}

fn no_contrib() -> (f64, (usize, usize)) {
    (f64::NEG_INFINITY, (0, 0))
}

fn exact_report(condition: Condition, violation: Option<usize>, n: usize) -> ConditionReport {
    let mut r = ConditionReport::new(condition, Verdict::exact(violation.is_none()));
    r.trace = make_trace(&[n], &[if violation.is_none() { 0.0 } else { 1.0 }]);
    r.failure_site = violation.map(|j| (j, j));
    r
}

/// Minimal-constant traces for `(mg)` on a pair of rows: `logA[j+k] <= (j+k) lnC + logB[j] + logB[k]`.
pub(crate) fn mg_report(a: &[f64], b: &[f64], cfg: &RunConfig) -> ConditionReport {
    let n = a.len().min(b.len()) - 1;
    let mut contrib = vec![no_contrib(); n + 1];
    for s in 2..=n {
        for j in 1..=s / 2 {
            let k = s - j;
            let v = (a[s] - b[j] - b[k]) / s as f64;
            if v > contrib[s].0 {
                contrib[s] = (v, (j, k));
            }
        }
    }
    prefix_max_report(Condition::Mg, "ln_C", &contrib, n, cfg)
}

/// `(dc)` on a pair of rows: `logA[j+1] <= (j+1) lnD + logB[j]`, j >= 1.
pub(crate) fn dc_report(a: &[f64], b: &[f64], cfg: &RunConfig) -> ConditionReport {
    let n = a.len().min(b.len()) - 1;
    let mut contrib = vec![no_contrib(); n + 1];
    for j in 1..n {
        contrib[j + 1] = ((a[j + 1] - b[j]) / (j + 1) as f64, (j, j + 1));
    }
    prefix_max_report(Condition::Dc, "ln_D", &contrib, n, cfg)
}

/// `(rai)` on a pair of check-sequences: `r_j <= lnH + s_k` for `1 <= j <= k`, with
/// `r_j = logA[j]/j` and `s_k = logB[k]/k`.
pub(crate) fn rai_report(check_a: &[f64], check_b: &[f64], cfg: &RunConfig) -> ConditionReport {
    let n = check_a.len().min(check_b.len()) - 1;
    let mut contrib = vec![no_contrib(); n + 1];
    let mut run = f64::NEG_INFINITY;
    let mut arg = 1;
    for k in 1..=n {
        let r = check_a[k] / k as f64;
        if r > run {
            run = r;
            arg = k;
        }
        contrib[k] = (run - check_b[k] / k as f64, (arg, k));
    }
    prefix_max_report(Condition::Rai, "ln_H", &contrib, n, cfg)
}

/// `a ⪯ b`: trace of `max_{1<=j<=J} (a_j - b_j)/j`.
pub fn compare_logs(a: &[f64], b: &[f64], cfg: &RunConfig) -> ConditionReport {
    let n = a.len().min(b.len()) - 1;
    let mut contrib = vec![no_contrib(); n + 1];
    for j in 1..=n {
        contrib[j] = ((a[j] - b[j]) / j as f64, (j, j));
    }
    prefix_max_report(Condition::Preceq, "ln_C", &contrib, n, cfg)
}

fn limit_report(s: &WeightSequence, cfg: &RunConfig) -> ConditionReport {
    let q = s.quotients();
    let n = s.n();
    let levels = truncations(n);
    let values: Vec<f64> = levels
        .iter()
        .map(|&j| q[..j].iter().cloned().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let verdict = crate::report::divergence_verdict(&values, cfg);
    ConditionReport::new(Condition::LimitMjInfinity, verdict)
        .with_witness("log_m_max", values[3])
        .with_trace(make_trace(&levels, &values))
}

pub fn check_condition(s: &WeightSequence, which: Condition, cfg: &RunConfig) -> Result<ConditionReport> {
    let n = s.n();
    let lm = s.log_m();
    let report = match which {
        Condition::Lc => exact_report(Condition::Lc, s.lc_violation(), n),
        Condition::Slc => exact_report(Condition::Slc, convexity_violation(&s.log_check()), n),
        Condition::Normalized => {
            let mut r = exact_report(Condition::Normalized, (!s.is_normalized()).then_some(1), n);
            r.witness.insert("logM1".into(), lm[1]);
            r
        }
        Condition::Mg => mg_report(lm, lm, cfg),
        Condition::Dc => dc_report(lm, lm, cfg),
        Condition::Rai => {
            let c = s.log_check();
            rai_report(&c, &c, cfg)
        }
        Condition::Fdb => check_fdb(s, cfg)?,
        Condition::LimitMjInfinity => limit_report(s, cfg),
        Condition::Preceq | Condition::Equiv => {
            let mut r = compare(s, s, cfg).equiv;
            r.condition = which;
            r
        }
        other => {
            return Err(Error::InvalidInput(format!("{other} is not a sequence condition")));
        }
    };
    Ok(report)
}

/// `S[l][k]`: max over compositions of `k` into `l` positive parts of `sum v[j_i]`.
///
/// Row `l` is filled for `l <= max_parts`; unreachable entries are `-inf`.
pub fn composition_table(v: &[f64], max_parts: usize) -> Vec<Vec<f64>> {
    let n = v.len() - 1;
    let mut s = vec![vec![f64::NEG_INFINITY; n + 1]; max_parts + 1];
    s[0][0] = 0.0;
    for l in 1..=max_parts {
        for k in l..=n {
            let mut best = f64::NEG_INFINITY;
            for j in 1..=(k + 1 - l) {
                let prev = s[l - 1][k - j];
                if prev == f64::NEG_INFINITY {
                    continue;
                }
                let cand = v[j] + prev;
                if cand > best {
                    best = cand;
                }
            }
            s[l][k] = best;
        }
    }
    s
}

/// The sequence `Mcheck°` as a log table.
pub fn faa_di_bruno_sequence(s: &WeightSequence) -> Result<WeightSequence> {
    let n = s.n();
    if n > MAX_N_CUBIC {
        return Err(Error::TruncationOutOfRange { n, min: 1, max: MAX_N_CUBIC });
    }
    let c = s.log_check();
    let table = composition_table(&c, n);
    let mut out = vec![0.0; n + 1];
    for k in 1..=n {
        let mut best = f64::NEG_INFINITY;
        for l in 1..=k {
            let cand = c[l] + table[l][k];
            if cand > best {
                best = cand;
            }
        }
        out[k] = best;
    }
    WeightSequence::derived(format!("circ({})", s.label()), out)
}

/// `(FdB)` for a single sequence.
pub fn check_fdb(s: &WeightSequence, cfg: &RunConfig) -> Result<ConditionReport> {
    let circ = faa_di_bruno_sequence(s)?;
    let mut r = fdb_pair_report(circ.log_m(), &s.log_check(), cfg);
    r.witness.insert("C".into(), 1.0);
    Ok(r)
}

pub(crate) fn fdb_pair_report(circ: &[f64], check_b: &[f64], cfg: &RunConfig) -> ConditionReport {
    let mut r = compare_logs(circ, check_b, cfg);
    r.condition = Condition::Fdb;
    if let Some(v) = r.witness.remove("ln_C") {
        r.witness.insert("ln_h".into(), v);
    }
    r
}

/// Both directions of `⪯` and the resulting `≈` verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub preceq: ConditionReport,
    pub succeq: ConditionReport,
    pub equiv: ConditionReport,
}

pub fn compare(s: &WeightSequence, t: &WeightSequence, cfg: &RunConfig) -> Comparison {
    compare_tables(s.log_m(), t.log_m(), cfg)
}

pub fn compare_tables(a: &[f64], b: &[f64], cfg: &RunConfig) -> Comparison {
    let preceq = compare_logs(a, b, cfg);
    let succeq = compare_logs(b, a, cfg);
    let verdict = preceq.verdict.and(succeq.verdict);
    let trace = preceq
        .trace
        .iter()
        .zip(&succeq.trace)
        .map(|(p, q)| crate::report::TracePoint { truncation: p.truncation, value: p.value.max(q.value) })
        .collect();
    let equiv = ConditionReport::new(Condition::Equiv, verdict)
        .with_witness("ln_A_forward", preceq.last_value())
        .with_witness("ln_A_backward", succeq.last_value())
        .with_trace(trace);
    Comparison { preceq, succeq, equiv }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    #[test]
    fn generator_values() {
        assert!((WeightSequence::gevrey(1.0, 8).log_m()[3] - 6f64.ln()).abs() < 1e-12);
        let q = WeightSequence::qgevrey(std::f64::consts::E, 8).unwrap();
        assert!((q.log_m()[3] - 9.0).abs() < 1e-12);
        assert!(WeightSequence::gevrey_bar(0.0, 8).log_m().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn make_sequence_validates() {
        let bad_q = SequenceSpec::Qgevrey { q: 1.0, n: 16 };
        assert!(make_sequence(&bad_q).is_err());
        let short = SequenceSpec::Gevrey { a: 1.0, n: 4 };
        assert!(make_sequence(&short).is_err());
        let shifted = SequenceSpec::Table { log_m: vec![0.1; 10], label: None };
        assert!(make_sequence(&shifted).is_err());
        let json = r#"{"kind":"gevrey_bar","a":1.5,"N":16}"#;
        let spec: SequenceSpec = serde_json::from_str(json).unwrap();
        assert_eq!(make_sequence(&spec).unwrap().n(), 16);
    }

    #[test]
    fn quotient_examples() {
        let g = WeightSequence::gevrey(1.0, 8).quotients();
        for (j, v) in g.iter().enumerate() {
            assert!((v - ((j + 1) as f64).ln()).abs() < 1e-12);
        }
        let q = 1.7f64;
        let qs = WeightSequence::qgevrey(q, 8).unwrap().quotients();
        for (j, v) in qs.iter().enumerate() {
            assert!((v - (2 * j + 1) as f64 * q.ln()).abs() < 1e-12);
        }
        let t = WeightSequence::from_logs("t", vec![0.0, 0.5, 2.0]).unwrap();
        assert_eq!(t.quotients(), vec![0.5, 1.5]);
    }

    #[test]
    fn products_and_quotients() {
        let g1 = WeightSequence::gevrey(1.0, 16);
        let g2 = WeightSequence::gevrey(2.0, 16);
        let p = g1.product(&g1).unwrap();
        for j in 0..=16 {
            assert!((p.log_m()[j] - g2.log_m()[j]).abs() < 1e-12);
        }
        let b = WeightSequence::gevrey_bar(0.5, 16);
        assert!(b.quotient(&b).unwrap().log_m().iter().all(|v| v.abs() < 1e-15));
        let mixed = WeightSequence::gevrey_bar(-0.5, 16).product(&g2).unwrap();
        let expect = 2.0 * 24f64.ln() - 2.0 * 4f64.ln();
        assert!((mixed.log_m()[4] - expect).abs() < 1e-12);
        assert!((expect - 3.583519).abs() < 1e-6);
    }

    #[test]
    fn lc_on_gevrey() {
        let r = check_condition(&WeightSequence::gevrey(2.0, 64), Condition::Lc, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::WitnessedUpToN);
        let t = WeightSequence::from_logs("t", vec![0.0, 2.0, 1.0, 3.0]).unwrap();
        assert_eq!(t.lc_violation(), Some(1));
    }

    #[test]
    fn rai_examples() {
        let r = check_condition(&WeightSequence::gevrey(2.0, 64), Condition::Rai, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::WitnessedUpToN);
        assert!(r.witness["ln_H"] <= 1e-9);

        let s = WeightSequence::gevrey(0.5, 64);
        let r = check_condition(&s, Condition::Rai, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::FailsAtTruncation);
        // brute force over all pairs
        let c = s.log_check();
        let mut brute = f64::NEG_INFINITY;
        for j in 1..=64 {
            for k in j..=64 {
                brute = brute.max(c[j] / j as f64 - c[k] / k as f64);
            }
        }
        assert!((r.witness["ln_H"] - brute).abs() < 1e-12);
        assert!((brute - ln_factorial(64) / 128.0).abs() < 1e-12);
    }

    #[test]
    fn mg_dc_on_gevrey_and_qgevrey() {
        let g = WeightSequence::gevrey(1.0, 64);
        assert!(check_condition(&g, Condition::Mg, &cfg()).unwrap().verdict.is_witnessed());
        assert!(check_condition(&g, Condition::Dc, &cfg()).unwrap().verdict.is_witnessed());
        let q = WeightSequence::qgevrey(1.5, 64).unwrap();
        assert!(check_condition(&q, Condition::Mg, &cfg()).unwrap().verdict.is_failed());
        assert!(check_condition(&q, Condition::Dc, &cfg()).unwrap().verdict.is_witnessed());
    }

    #[test]
    fn fdb_examples() {
        let one = faa_di_bruno_sequence(&WeightSequence::gevrey(1.0, 16)).unwrap();
        assert!(one.log_m().iter().all(|v| v.abs() < 1e-12));
        let two = WeightSequence::gevrey(2.0, 16);
        let circ = faa_di_bruno_sequence(&two).unwrap();
        // Mcheck = j!, composition candidates for k = 3 are 6, 4, 6
        assert!((circ.log_m()[3] - 6f64.ln()).abs() < 1e-12);
        let c = two.log_check();
        assert!((circ.log_m()[1] - 2.0 * c[1]).abs() < 1e-12);

        let r = check_fdb(&WeightSequence::gevrey(1.0, 64), &cfg()).unwrap();
        assert!(r.verdict.is_witnessed());
        assert!(r.witness["ln_h"].abs() < 1e-12);
        assert!(check_fdb(&WeightSequence::gevrey(2.0, 64), &cfg()).unwrap().verdict.is_witnessed());
        assert!(check_fdb(&WeightSequence::gevrey(0.5, 64), &cfg()).unwrap().verdict.is_failed());
        assert!(check_fdb(&WeightSequence::gevrey(1.0, 600), &cfg()).is_err());
    }

    #[test]
    fn compare_examples() {
        let c = cfg();
        for a in [0.5, 1.0, 2.0] {
            let cmp = compare(&WeightSequence::gevrey_bar(a, 64), &WeightSequence::gevrey(a, 64), &c);
            assert!(cmp.equiv.verdict.is_witnessed(), "a = {a}");
            assert!(cmp.preceq.witness["ln_C"] <= a);
        }
        let s = WeightSequence::qgevrey(1.3, 64).unwrap();
        let same = compare(&s, &s, &c);
        assert!(same.equiv.verdict.is_witnessed());
        assert_eq!(same.equiv.witness["ln_A_forward"], 0.0);
        let g1 = WeightSequence::gevrey(1.0, 64);
        let g2 = WeightSequence::gevrey(2.0, 64);
        let cmp = compare(&g1, &g2, &c);
        assert!(cmp.preceq.verdict.is_witnessed());
        assert!(cmp.succeq.verdict.is_failed());
        assert!(cmp.equiv.verdict.is_failed());
    }

    #[test]
    fn limit_of_quotients() {
        let c = cfg();
        let g = WeightSequence::gevrey(0.2, 64);
        assert!(check_condition(&g, Condition::LimitMjInfinity, &c).unwrap().verdict.is_witnessed());
        let u = WeightSequence::unit(64);
        assert!(check_condition(&u, Condition::LimitMjInfinity, &c).unwrap().verdict.is_failed());
    }

    #[test]
    fn resize_extends_closed_forms_only() {
        let g = WeightSequence::gevrey(2.0, 16).resized(40).unwrap();
        assert!((g.log_m()[40] - 2.0 * ln_factorial(40)).abs() < 1e-9);
        let t = WeightSequence::from_logs("t", vec![0.0; 10]).unwrap();
        assert!(matches!(t.resized(20), Err(Error::TruncationInsufficient { .. })));
    }
}
