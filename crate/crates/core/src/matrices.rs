//! Weight matrices: matrix-level conditions with partner search, the product
//! lemma, the regularized matrix `M^α` and R-equivalence.

use serde::{Deserialize, Serialize};

use crate::config::{check_truncation, RunConfig, DEFAULT_N, MAX_N, MAX_N_CUBIC};
use crate::error::{Error, Result};
use crate::report::{
    bounded_verdict, make_trace, truncations, Condition, ConditionReport, Verdict,
};
use crate::sequences::{
    compare_logs, composition_table, dc_report, faa_di_bruno_sequence, fdb_pair_report, make_sequence,
    mg_report, rai_report, ClosedForm, SequenceSpec, WeightSequence,
};
use crate::weights::{
    default_ell_grid, log_convex_minorant, make_weight_function, matrix_from_omega, AssociatedMatrixSpec,
    OmegaSpec, WeightFunction,
};

/// Tuple-count ceiling for brute force in the product lemma.
pub const BRUTE_FORCE_LIMIT: f64 = 1e7;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatrixOrigin {
    Explicit,
    FromOmega(Box<WeightFunction>),
    Constant { label: String },
    PowerFamily { beta: f64 },
    Regularized { alpha: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightMatrix {
    params: Vec<f64>,
    rows: Vec<WeightSequence>,
    origin: MatrixOrigin,
}

impl WeightMatrix {
    pub fn new(params: Vec<f64>, rows: Vec<WeightSequence>, origin: MatrixOrigin) -> Result<Self> {
        if params.is_empty() || params.len() != rows.len() {
            return Err(Error::InvalidInput("need one row per grid parameter".into()));
        }
        if params.windows(2).any(|w| !(w[1] > w[0])) || !(params[0] > 0.0) {
            return Err(Error::InvalidInput("parameter grid must be positive and strictly increasing".into()));
        }
        let n = rows[0].n();
        if rows.iter().any(|r| r.n() != n) {
            return Err(Error::InvalidInput("rows must share the truncation".into()));
        }
        for (i, w) in rows.windows(2).enumerate() {
            for j in 0..=n {
                let (a, b) = (w[0].log_m()[j], w[1].log_m()[j]);
                if a > b + 1e-9 * (1.0 + b.abs()) {
                    return Err(Error::MonotonicityViolation { row: i + 1, index: j });
                }
            }
        }
        Ok(WeightMatrix { params, rows, origin })
    }

    pub fn constant(s: &WeightSequence, params: Vec<f64>) -> Result<Self> {
        let rows = vec![s.clone(); params.len()];
        Self::new(params, rows, MatrixOrigin::Constant { label: s.label().to_string() })
    }

    /// Rows `Gbar^{β - 1/(p+1)}`.
    pub fn power_family(beta: f64, params: Vec<f64>, n: usize) -> Result<Self> {
        let rows = params.iter().map(|p| WeightSequence::gevrey_bar(beta - 1.0 / (p + 1.0), n)).collect();
        Self::new(params, rows, MatrixOrigin::PowerFamily { beta })
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn rows(&self) -> &[WeightSequence] {
        &self.rows
    }

    pub fn origin(&self) -> &MatrixOrigin {
        &self.origin
    }

    pub fn n(&self) -> usize {
        self.rows[0].n()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows from index `from` on, keeping the origin.
    pub fn tail(&self, from: usize) -> Result<Self> {
        Self::new(self.params[from..].to_vec(), self.rows[from..].to_vec(), self.origin.clone())
    }
}

fn default_grid() -> Vec<f64> {
    vec![1.0, 2.0, 4.0]
}

fn default_n() -> usize {
    DEFAULT_N
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatrixSpec {
    Constant {
        sequence: SequenceSpec,
        #[serde(default = "default_grid")]
        grid: Vec<f64>,
    },
    FromOmega {
        omega: OmegaSpec,
        #[serde(default = "default_ell_grid")]
        grid: Vec<f64>,
        #[serde(rename = "N", default = "default_n")]
        n: usize,
    },
    PowerFamily {
        beta: f64,
        #[serde(default = "default_grid")]
        grid: Vec<f64>,
        #[serde(rename = "N", default = "default_n")]
        n: usize,
    },
    Explicit {
        grid: Vec<f64>,
        rows: Vec<SequenceSpec>,
    },
}

pub fn make_matrix(spec: &MatrixSpec, cfg: &RunConfig) -> Result<WeightMatrix> {
    match spec {
        MatrixSpec::Constant { sequence, grid } => WeightMatrix::constant(&make_sequence(sequence)?, grid.clone()),
        MatrixSpec::FromOmega { omega, grid, n } => {
            check_truncation(*n, MAX_N)?;
            let spec = AssociatedMatrixSpec { source: make_weight_function(omega)?, ell_grid: grid.clone(), n: *n };
            Ok(matrix_from_omega(&spec, cfg)?.matrix)
        }
        MatrixSpec::PowerFamily { beta, grid, n } => {
            check_truncation(*n, MAX_N)?;
            WeightMatrix::power_family(*beta, grid.clone(), *n)
        }
        MatrixSpec::Explicit { grid, rows } => {
            let rows = rows.iter().map(make_sequence).collect::<Result<Vec<_>>>()?;
            WeightMatrix::new(grid.clone(), rows, MatrixOrigin::Explicit)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixCondition {
    Sc,
    Lc,
    Comega,
    H,
    Rai,
    Fdb,
    Mg,
    Dc,
}

impl std::fmt::Display for MatrixCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MatrixCondition::Sc => "(M_sc)",
            MatrixCondition::Lc => "(M_lc)",
            MatrixCondition::Comega => "(M_Cw)",
            MatrixCondition::H => "(M_H)",
            MatrixCondition::Rai => "(M_rai)",
            MatrixCondition::Fdb => "(M_FdB)",
            MatrixCondition::Mg => "(M_mg)",
            MatrixCondition::Dc => "(M_dc)",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowResult {
    pub p: f64,
    /// Grid parameter used as the existential partner, if one was found.
    pub partner: Option<f64>,
    pub report: ConditionReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixConditionReport {
    pub condition: MatrixCondition,
    pub verdict: Verdict,
    pub rows: Vec<RowResult>,
    pub notes: Vec<String>,
}

impl MatrixConditionReport {
    pub fn partner_of(&self, p: f64) -> Option<f64> {
        self.rows.iter().find(|r| r.p == p).and_then(|r| r.partner)
    }
}

const GRID_NOTE: &str = "partners searched on the finite parameter grid only";

/// Tail-window trace of `min_{J/2 <= j <= J} logMcheck[j]/j`; bounded below means witnessed.
pub fn root_liminf_report(s: &WeightSequence, cfg: &RunConfig) -> ConditionReport {
    let c = s.log_check();
    let n = s.n();
    let levels = truncations(n);
    let mins: Vec<f64> = levels
        .iter()
        .map(|&jj| (jj / 2).max(1)..=jj)
        .map(|range| range.map(|j| c[j] / j as f64).fold(f64::INFINITY, f64::min))
        .collect();
    let neg: Vec<f64> = mins.iter().map(|v| -v).collect();
    ConditionReport::new(Condition::RootLiminf, bounded_verdict(&neg, cfg))
        .with_witness("liminf_log_root", mins[3])
        .with_trace(make_trace(&levels, &mins))
}

fn pair_scan<F>(m: &WeightMatrix, mut pair: F) -> Vec<RowResult>
where
    F: FnMut(usize, usize) -> ConditionReport,
{
    (0..m.len())
        .map(|i| {
            let mut fallback: Option<ConditionReport> = None;
            let mut any_undetermined = false;
            for k in i..m.len() {
                let r = pair(i, k);
                if r.verdict.is_witnessed() {
                    return RowResult { p: m.params[i], partner: Some(m.params[k]), report: r };
                }
                any_undetermined |= r.verdict == Verdict::Undetermined;
                fallback = Some(r);
            }
            let mut report = fallback.expect("at least one candidate");
            report.verdict = if any_undetermined { Verdict::Undetermined } else { Verdict::FailsAtTruncation };
            RowResult { p: m.params[i], partner: None, report }
        })
        .collect()
}

fn conjunction(rows: &[RowResult]) -> Verdict {
    rows.iter().fold(Verdict::WitnessedUpToN, |acc, r| acc.and(r.report.verdict))
}

pub fn check_matrix_condition(
    m: &WeightMatrix,
    which: MatrixCondition,
    cfg: &RunConfig,
) -> Result<MatrixConditionReport> {
    let mut notes = Vec::new();
    let rows: Vec<RowResult> = match which {
        MatrixCondition::Lc | MatrixCondition::Sc => m
            .rows
            .iter()
            .zip(&m.params)
            .map(|(s, &p)| {
                let lc = crate::sequences::check_condition(s, Condition::Lc, cfg)?;
                let report = if which == MatrixCondition::Sc {
                    let norm = crate::sequences::check_condition(s, Condition::Normalized, cfg)?;
                    let lim = crate::sequences::check_condition(s, Condition::LimitMjInfinity, cfg)?;
                    let mut r = lim.clone();
                    r.verdict = lc.verdict.and(norm.verdict).and(lim.verdict);
                    r
                } else {
                    lc
                };
                Ok(RowResult { p, partner: Some(p), report })
            })
            .collect::<Result<_>>()?,
        MatrixCondition::Comega | MatrixCondition::H => m
            .rows
            .iter()
            .zip(&m.params)
            .map(|(s, &p)| {
                let report = root_liminf_report(s, cfg);
                let partner = report.verdict.is_witnessed().then_some(p);
                RowResult { p, partner, report }
            })
            .collect(),
        MatrixCondition::Rai => {
            notes.push(GRID_NOTE.into());
            let checks: Vec<Vec<f64>> = m.rows.iter().map(|r| r.log_check()).collect();
            pair_scan(m, |i, k| rai_report(&checks[i], &checks[k], cfg))
        }
        MatrixCondition::Mg => {
            notes.push(GRID_NOTE.into());
            pair_scan(m, |i, k| mg_report(m.rows[i].log_m(), m.rows[k].log_m(), cfg))
        }
        MatrixCondition::Dc => {
            notes.push(GRID_NOTE.into());
            pair_scan(m, |i, k| dc_report(m.rows[i].log_m(), m.rows[k].log_m(), cfg))
        }
        MatrixCondition::Fdb => {
            notes.push(GRID_NOTE.into());
            if m.n() > MAX_N_CUBIC {
                return Err(Error::TruncationOutOfRange { n: m.n(), min: 1, max: MAX_N_CUBIC });
            }
            let circs: Vec<WeightSequence> = m.rows.iter().map(faa_di_bruno_sequence).collect::<Result<_>>()?;
            let checks: Vec<Vec<f64>> = m.rows.iter().map(|r| r.log_check()).collect();
            pair_scan(m, |i, k| fdb_pair_report(circs[i].log_m(), &checks[k], cfg))
        }
    };
    let verdict = match which {
        MatrixCondition::Comega => {
            if rows.iter().any(|r| r.report.verdict.is_witnessed()) {
                Verdict::WitnessedUpToN
            } else if rows.iter().any(|r| r.report.verdict == Verdict::Undetermined) {
                Verdict::Undetermined
            } else {
                Verdict::FailsAtTruncation
            }
        }
        _ => conjunction(&rows),
    };
    Ok(MatrixConditionReport { condition: which, verdict, rows, notes })
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn brute_best(c: &[f64], k_left: usize, start_sum: usize, acc: f64, best: &mut [f64]) {
    let n = c.len() - 1;
    if acc > best[start_sum] {
        best[start_sum] = acc;
    }
    if k_left == 0 {
        return;
    }
    for j in 1..=(n - start_sum) {
        brute_best(c, k_left - 1, start_sum + j, acc + c[j], best);
    }
}

/// Minimal `ln H` in `Mcheck_{j1}...Mcheck_{jk} <= H^{j1+...+jk} Mcheck'_{j1+...+jk}`, k <= k_max.
pub fn check_product_bound(m: &WeightMatrix, p_index: usize, k_max: usize, cfg: &RunConfig) -> Result<ConditionReport> {
    if p_index >= m.len() || k_max == 0 {
        return Err(Error::InvalidInput("row index or k_max out of range".into()));
    }
    let rai = check_matrix_condition(m, MatrixCondition::Rai, cfg)?;
    let mut notes = Vec::new();
    let partner = match rai.rows[p_index].partner {
        Some(p) => m.params.iter().position(|&q| q == p).unwrap_or(p_index),
        None => {
            notes.push("no (M_rai) partner on the grid; row compared with itself".to_string());
            p_index
        }
    };
    let n = m.n();
    let c = m.rows[p_index].log_check();
    let target = m.rows[partner].log_check();
    let mut best = vec![f64::NEG_INFINITY; n + 1];
    let tuples = binomial(n + k_max, k_max);
    if tuples <= BRUTE_FORCE_LIMIT {
        brute_best(&c, k_max, 0, 0.0, &mut best);
        notes.push(format!("brute force over {tuples:.0} tuples"));
    } else {
        if n > MAX_N_CUBIC {
            return Err(Error::TruncationOutOfRange { n, min: 1, max: MAX_N_CUBIC });
        }
        let table = composition_table(&c, k_max.min(n));
        for (s, b) in best.iter_mut().enumerate() {
            *b = table.iter().map(|row| row[s]).fold(f64::NEG_INFINITY, f64::max);
        }
        notes.push("composition dynamic programme".to_string());
    }
    let mut report = compare_logs(&best, &target, cfg);
    report.condition = Condition::ProductBound;
    if let Some(v) = report.witness.remove("ln_C") {
        report.witness.insert("ln_H".into(), v);
    }
    report.witness.insert("partner".into(), m.params[partner]);
    report.notes = notes;
    Ok(report)
}

/// Tail behaviour of `(1 - α) ln j + logM[j]/j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailClass {
    MinusInfinity,
    Bounded,
    PlusInfinity,
}

/// Closed forms are decided from their exponents; tables from the slope in `ln j`
/// over the upper half of the truncation.
pub fn tail_class(s: &WeightSequence, alpha: f64, cfg: &RunConfig) -> TailClass {
    if let Some(form) = s.closed_form() {
        return closed_tail_class(&form, alpha);
    }
    let n = s.n();
    let g = |j: usize| (1.0 - alpha) * (j as f64).ln() + s.log_m()[j] / j as f64;
    let slope = (g(n) - g(n / 2)) / ((n as f64) / ((n / 2) as f64)).ln();
    if slope > cfg.tau_slope {
        TailClass::PlusInfinity
    } else if slope < -cfg.tau_slope {
        TailClass::MinusInfinity
    } else {
        TailClass::Bounded
    }
}

fn closed_tail_class(form: &ClosedForm, alpha: f64) -> TailClass {
    match form.j_ln_j_exponent() {
        None => {
            if form.log_q > 0.0 {
                TailClass::PlusInfinity
            } else {
                TailClass::MinusInfinity
            }
        }
        Some(e) => {
            let e = 1.0 - alpha + e;
            if e > 1e-9 {
                TailClass::PlusInfinity
            } else if e < -1e-9 {
                TailClass::MinusInfinity
            } else {
                TailClass::Bounded
            }
        }
    }
}

/// `M^(p,α)_j = j^{(α-1)j} (Gbar^{1-α} M^(p))^lc_j`.
pub fn build_m_alpha(m: &WeightMatrix, alpha: f64, cfg: &RunConfig) -> Result<WeightMatrix> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidInput(format!("α must lie in (0, 1], got {alpha}")));
    }
    for (i, row) in m.rows.iter().enumerate() {
        if tail_class(row, alpha, cfg) != TailClass::PlusInfinity {
            return Err(Error::GrowthGateFailed { row: i });
        }
    }
    regularize_rows(m, alpha)
}

/// The regularization without the growth gate.
pub(crate) fn regularize_rows(m: &WeightMatrix, alpha: f64) -> Result<WeightMatrix> {
    let gbar = WeightSequence::gevrey_bar(1.0 - alpha, m.n());
    let rows = m
        .rows
        .iter()
        .map(|row| {
            let lifted = row.product(&gbar)?;
            let lc = log_convex_minorant(&lifted);
            Ok(lc.quotient(&gbar)?.relabel(format!("{}^[alpha={alpha}]", row.label())))
        })
        .collect::<Result<Vec<_>>>()?;
    WeightMatrix::new(m.params.clone(), rows, MatrixOrigin::Regularized { alpha })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationReport {
    pub verdict: Verdict,
    pub forward: Vec<RowResult>,
    pub backward: Vec<RowResult>,
}

fn relation_rows(a: &WeightMatrix, b: &WeightMatrix, cfg: &RunConfig) -> Vec<RowResult> {
    (0..a.len())
        .map(|i| {
            let mut fallback = None;
            let mut undetermined = false;
            for k in 0..b.len() {
                let r = compare_logs(a.rows[i].log_m(), b.rows[k].log_m(), cfg);
                if r.verdict.is_witnessed() {
                    return RowResult { p: a.params[i], partner: Some(b.params[k]), report: r };
                }
                undetermined |= r.verdict == Verdict::Undetermined;
                fallback = Some(r);
            }
            let mut report = fallback.expect("nonempty matrix");
            report.verdict = if undetermined { Verdict::Undetermined } else { Verdict::FailsAtTruncation };
            RowResult { p: a.params[i], partner: None, report }
        })
        .collect()
}

/// Both directions of `∀p ∃p': M^(p) ⪯ L^(p')`.
pub fn r_equivalent(m1: &WeightMatrix, m2: &WeightMatrix, cfg: &RunConfig) -> Result<RelationReport> {
    if m1.n() != m2.n() {
        return Err(Error::InvalidInput("matrices must share the truncation".into()));
    }
    let forward = relation_rows(m1, m2, cfg);
    let backward = relation_rows(m2, m1, cfg);
    let verdict = conjunction(&forward).and(conjunction(&backward));
    Ok(RelationReport { verdict, forward, backward })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::WeightFunction;

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    #[test]
    fn constructors() {
        let g = WeightSequence::gevrey(2.0, 16);
        let m = WeightMatrix::constant(&g, vec![1.0, 2.0, 4.0]).unwrap();
        assert!(m.rows().iter().all(|r| r.log_m() == g.log_m()));
        let pf = WeightMatrix::power_family(3.0, vec![1.0, 2.0, 4.0], 16).unwrap();
        let want = WeightSequence::gevrey_bar(2.5, 16);
        assert_eq!(pf.rows()[0].log_m(), want.log_m());
        let bad = WeightMatrix::new(
            vec![1.0, 2.0],
            vec![WeightSequence::gevrey(2.0, 16), WeightSequence::gevrey(1.0, 16)],
            MatrixOrigin::Explicit,
        );
        assert!(matches!(bad, Err(Error::MonotonicityViolation { .. })));
    }

    #[test]
    fn from_omega_spec_rows() {
        let spec: MatrixSpec = serde_json::from_str(
            r#"{"kind":"from_omega","omega":{"kind":"closed_form","tag":"log_square","q":2.718281828459045},"N":16}"#,
        )
        .unwrap();
        let m = make_matrix(&spec, &cfg()).unwrap();
        for (ell, row) in m.params().iter().zip(m.rows()) {
            for j in 0..=16 {
                let want = ell * (j * j) as f64;
                assert!((row.log_m()[j] - want).abs() < 1e-6 * (1.0 + want));
            }
        }
    }

    #[test]
    fn rai_on_constant_matrices() {
        let c = cfg();
        let m = WeightMatrix::constant(&WeightSequence::gevrey(2.0, 64), vec![1.0, 2.0, 4.0]).unwrap();
        let r = check_matrix_condition(&m, MatrixCondition::Rai, &c).unwrap();
        assert!(r.verdict.is_witnessed());
        for row in &r.rows {
            assert_eq!(row.partner, Some(row.p));
            assert!(row.report.witness["ln_H"].abs() < 1e-9);
        }
        let m = WeightMatrix::constant(&WeightSequence::gevrey(0.5, 64), vec![1.0, 2.0, 4.0]).unwrap();
        let r = check_matrix_condition(&m, MatrixCondition::Rai, &c).unwrap();
        assert!(r.verdict.is_failed());
        assert!(r.rows.iter().all(|row| row.partner.is_none()));
    }

    #[test]
    fn dc_on_omega_matrix() {
        let spec = AssociatedMatrixSpec::new(WeightFunction::log_square(1.5).unwrap());
        let m = matrix_from_omega(&spec, &cfg()).unwrap().matrix;
        let r = check_matrix_condition(&m, MatrixCondition::Dc, &cfg()).unwrap();
        assert!(r.verdict.is_witnessed());
        for row in &r.rows {
            let partner = row.partner.unwrap();
            assert!(partner >= row.p && partner <= 2.0 * row.p);
        }
    }

    #[test]
    fn product_bound_examples() {
        let c = cfg();
        let m = WeightMatrix::constant(&WeightSequence::gevrey(2.0, 16), vec![1.0]).unwrap();
        let r = check_product_bound(&m, 0, 2, &c).unwrap();
        assert!(r.verdict.is_witnessed());
        assert!(r.witness["ln_H"] <= 1e-12);
        let r1 = check_product_bound(&m, 0, 1, &c).unwrap();
        assert!(r1.witness["ln_H"].abs() <= 1e-12);
        let half = WeightMatrix::constant(&WeightSequence::gevrey(0.5, 64), vec![1.0]).unwrap();
        let r = check_product_bound(&half, 0, 64, &c).unwrap();
        assert!(r.verdict.is_failed());
    }

    #[test]
    fn product_bound_paths_agree() {
        let c = cfg();
        let s = WeightSequence::gevrey_bar(1.5, 40);
        let m = WeightMatrix::constant(&s, vec![1.0]).unwrap();
        // k = 3 is brute-forced, k = 40 goes through the DP; both must dominate k = 3 values
        let small = check_product_bound(&m, 0, 3, &c).unwrap();
        let large = check_product_bound(&m, 0, 40, &c).unwrap();
        assert!(small.notes.iter().any(|n| n.contains("brute")));
        assert!(large.notes.iter().any(|n| n.contains("dynamic")));
        assert!(large.witness["ln_H"] >= small.witness["ln_H"] - 1e-12);
    }

    #[test]
    fn m_alpha_examples() {
        let c = cfg();
        let spec = AssociatedMatrixSpec::new(WeightFunction::log_square(2.0).unwrap());
        let m = matrix_from_omega(&spec, &c).unwrap().matrix;
        let ma = build_m_alpha(&m, 0.5, &c).unwrap();
        for (a, b) in m.rows().iter().zip(ma.rows()) {
            for j in 0..=m.n() {
                assert!((a.log_m()[j] - b.log_m()[j]).abs() < 1e-9 * (1.0 + a.log_m()[j].abs()));
            }
        }
        let g = WeightMatrix::constant(&WeightSequence::gevrey_bar(2.0, 32), vec![1.0, 2.0]).unwrap();
        let ga = build_m_alpha(&g, 1.0, &c).unwrap();
        assert_eq!(ga.rows()[0].log_m(), g.rows()[0].log_m());

        let mut logs = WeightSequence::gevrey(2.0, 32).log_m().to_vec();
        logs[5] += 3.0;
        logs[11] += 1.5;
        let t = WeightSequence::from_logs("bumped", logs).unwrap();
        let tm = WeightMatrix::constant(&t, vec![1.0]).unwrap();
        let ta = build_m_alpha(&tm, 1.0, &c).unwrap();
        let lc = log_convex_minorant(&t);
        for j in 0..=32 {
            assert!((ta.rows()[0].log_m()[j] - lc.log_m()[j]).abs() < 1e-12);
        }

        let small = WeightMatrix::constant(&WeightSequence::gevrey_bar(-0.5, 32), vec![1.0]).unwrap();
        assert!(matches!(build_m_alpha(&small, 0.5, &c), Err(Error::GrowthGateFailed { row: 0 })));
    }

    #[test]
    fn r_equivalence_examples() {
        let c = cfg();
        let grid = vec![1.0, 2.0];
        let m = WeightMatrix::power_family(2.0, grid.clone(), 64).unwrap();
        let self_rel = r_equivalent(&m, &m, &c).unwrap();
        assert!(self_rel.verdict.is_witnessed());
        assert!(self_rel.forward.iter().all(|r| r.partner == Some(r.p)));
        for a in [0.5, 1.0, 2.0] {
            let g = WeightMatrix::constant(&WeightSequence::gevrey(a, 64), grid.clone()).unwrap();
            let gb = WeightMatrix::constant(&WeightSequence::gevrey_bar(a, 64), grid.clone()).unwrap();
            assert!(r_equivalent(&g, &gb, &c).unwrap().verdict.is_witnessed());
        }
    }

    #[test]
    fn liminf_conditions() {
        let c = cfg();
        let m = WeightMatrix::constant(&WeightSequence::gevrey(0.5, 64), vec![1.0, 2.0]).unwrap();
        assert!(check_matrix_condition(&m, MatrixCondition::Comega, &c).unwrap().verdict.is_failed());
        let m = WeightMatrix::power_family(2.0, vec![1.0, 2.0], 64).unwrap();
        assert!(check_matrix_condition(&m, MatrixCondition::H, &c).unwrap().verdict.is_witnessed());
        assert!(check_matrix_condition(&m, MatrixCondition::Sc, &c).unwrap().verdict.is_witnessed());
    }
}
