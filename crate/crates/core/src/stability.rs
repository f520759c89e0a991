//! Stability decisions for classes on sectors: the triviality screen, the narrow
//! and wide sector criteria for weight matrices, the weight-function versions,
//! and the Gevrey and q-Gevrey examples.

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{gorny_cartan_constants, membership_certificate, Jet, MembershipCertificate};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::indices::{gamma_omega, gamma_sequence, IndexEstimate};
use crate::matrices::{
    build_m_alpha, check_matrix_condition, regularize_rows, tail_class, MatrixCondition, MatrixConditionReport,
    TailClass, WeightMatrix,
};
use crate::report::{Condition, ConditionReport, Verdict};
use crate::sequences::WeightSequence;
use crate::weights::{check_omega_conditions, log_convex_minorant, matrix_from_omega, AssociatedMatrixSpec, WeightFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StabilityClass {
    TrivialClass,
    StableHoloInverse,
    StableComposition,
    NotStable,
    Inconclusive,
}

impl std::fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StabilityClass::TrivialClass => "TrivialClass",
            StabilityClass::StableHoloInverse => "StableHoloInverse",
            StabilityClass::StableComposition => "StableComposition",
            StabilityClass::NotStable => "NotStable",
            StabilityClass::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

/// Which result a verdict rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Justification {
    NarrowThm,
    WideThm,
    #[serde(rename = "TrivialRemark-i")]
    TrivialRemarkI,
    #[serde(rename = "TrivialRemark-ii")]
    TrivialRemarkII,
    #[serde(rename = "ReductionRemark-iii")]
    ReductionRemarkIII,
    OmegaThmNarrow,
    OmegaThmWide,
}

impl std::fmt::Display for Justification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Justification::NarrowThm => "NarrowThm",
            Justification::WideThm => "WideThm",
            Justification::TrivialRemarkI => "TrivialRemark-i",
            Justification::TrivialRemarkII => "TrivialRemark-ii",
            Justification::ReductionRemarkIII => "ReductionRemark-iii",
            Justification::OmegaThmNarrow => "OmegaThmNarrow",
            Justification::OmegaThmWide => "OmegaThmWide",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityVerdict {
    pub verdict: StabilityClass,
    pub justification: Justification,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub matrix_reports: Vec<MatrixConditionReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub condition_reports: Vec<ConditionReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub indices: Vec<IndexEstimate>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl StabilityVerdict {
    fn new(verdict: StabilityClass, justification: Justification, alpha: f64) -> Self {
        StabilityVerdict {
            verdict,
            justification,
            alpha,
            matrix_reports: Vec::new(),
            condition_reports: Vec::new(),
            indices: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }

    /// The `(M_rai)` report among the bundled ones, if any.
    pub fn rai_report(&self) -> Option<&MatrixConditionReport> {
        self.matrix_reports.iter().find(|r| r.condition == MatrixCondition::Rai)
    }
}

/// Outcome of the triviality screen.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Screen {
    Trivial(StabilityVerdict),
    /// The class equals the one of `Gbar^{α-1}`; classify that instead.
    Reduce,
    Proceed,
    /// Rows fall into different tail classes.
    MixedRows(Vec<TailClass>),
}

pub fn triviality_screen(m: &WeightMatrix, alpha: f64, cfg: &RunConfig) -> Screen {
    let classes: Vec<TailClass> = m.rows().iter().map(|r| tail_class(r, alpha, cfg)).collect();
    let all = |c: TailClass| classes.iter().all(|&x| x == c);
    if all(TailClass::PlusInfinity) {
        return Screen::Proceed;
    }
    if alpha > 1.0 {
        if classes.iter().all(|&c| c != TailClass::PlusInfinity) {
            return Screen::Trivial(
                StabilityVerdict::new(StabilityClass::TrivialClass, Justification::TrivialRemarkI, alpha)
                    .note("tail bounded above in every row: only constants"),
            );
        }
    } else if all(TailClass::MinusInfinity) {
        return Screen::Trivial(
            StabilityVerdict::new(StabilityClass::TrivialClass, Justification::TrivialRemarkII, alpha)
                .note("tail tends to -inf in every row"),
        );
    } else if all(TailClass::Bounded) {
        return Screen::Reduce;
    }
    Screen::MixedRows(classes)
}

fn mixed(alpha: f64, justification: Justification, classes: &[TailClass]) -> StabilityVerdict {
    StabilityVerdict::new(StabilityClass::Inconclusive, justification, alpha)
        .note(format!("rows disagree in the triviality screen: {classes:?}"))
}

/// Maps the `(M_rai)` verdict and the composition gates to a stability class.
fn decide(rai: Verdict, gates: &[Verdict]) -> StabilityClass {
    match rai {
        Verdict::FailsAtTruncation => StabilityClass::NotStable,
        Verdict::Undetermined => StabilityClass::Inconclusive,
        Verdict::WitnessedUpToN => {
            if gates.iter().all(|g| g.is_witnessed()) {
                StabilityClass::StableComposition
            } else {
                StabilityClass::StableHoloInverse
            }
        }
    }
}

/// Rai on the regularization of `Gbar^{α-1}` with the parameters of `m`.
fn reduced_verdict(m: &WeightMatrix, alpha: f64, cfg: &RunConfig) -> Result<StabilityVerdict> {
    let gbar = WeightSequence::gevrey_bar(alpha - 1.0, m.n());
    let base = WeightMatrix::constant(&gbar, m.params().to_vec())?;
    let reg = regularize_rows(&base, alpha)?;
    let rai = check_matrix_condition(&reg, MatrixCondition::Rai, cfg)?;
    let class = match decide(rai.verdict, &[]) {
        StabilityClass::StableHoloInverse => StabilityClass::StableHoloInverse,
        other => other,
    };
    let mut v = StabilityVerdict::new(class, Justification::ReductionRemarkIII, alpha)
        .note(format!("class reduced to the one of Gbar^{}", alpha - 1.0));
    v.matrix_reports.push(rai);
    Ok(v)
}

pub fn classify_narrow(m: &WeightMatrix, alpha: f64, cfg: &RunConfig) -> Result<StabilityVerdict> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidInput(format!("narrow sectors need 0 < alpha <= 1, got {alpha}")));
    }
    match triviality_screen(m, alpha, cfg) {
        Screen::Trivial(v) => return Ok(v),
        Screen::Reduce => return reduced_verdict(m, alpha, cfg),
        Screen::MixedRows(c) => return Ok(mixed(alpha, Justification::NarrowThm, &c)),
        Screen::Proceed => {}
    }
    let ma = build_m_alpha(m, alpha, cfg)?;
    let rai = check_matrix_condition(&ma, MatrixCondition::Rai, cfg)?;
    let mut reports = vec![rai];
    let mut gates = Vec::new();
    if reports[0].verdict.is_witnessed() {
        for (mat, which) in [(m, MatrixCondition::Comega), (&ma, MatrixCondition::Dc), (&ma, MatrixCondition::Fdb)] {
            let r = check_matrix_condition(mat, which, cfg)?;
            gates.push(r.verdict);
            reports.push(r);
        }
    }
    let mut v = StabilityVerdict::new(decide(reports[0].verdict, &gates), Justification::NarrowThm, alpha);
    v.matrix_reports = reports;
    Ok(v)
}

/// Growth-index gate for the wide sector criterion on every row.
fn wide_gate(m: &WeightMatrix, alpha: f64, cfg: &RunConfig) -> Result<(bool, Vec<IndexEstimate>, Vec<String>)> {
    let mut ok = true;
    let mut out = Vec::new();
    let mut notes = Vec::new();
    for row in m.rows() {
        let est = if row.is_log_convex() {
            gamma_sequence(row, cfg)?
        } else {
            notes.push(format!("index of {} taken on its log-convex minorant", row.label()));
            gamma_sequence(&log_convex_minorant(row), cfg)?
        };
        ok &= est.lower_witnessed.is_some_and(|g| g > alpha - 1.0);
        out.push(est);
    }
    Ok((ok, out, notes))
}

pub fn classify_wide(m: &WeightMatrix, alpha: f64, cfg: &RunConfig) -> Result<StabilityVerdict> {
    if !(alpha > 1.0) {
        return Err(Error::InvalidInput(format!("wide sectors need alpha > 1, got {alpha}")));
    }
    match triviality_screen(m, alpha, cfg) {
        Screen::Trivial(v) => return Ok(v),
        Screen::MixedRows(c) => return Ok(mixed(alpha, Justification::WideThm, &c)),
        Screen::Reduce | Screen::Proceed => {}
    }
    let (gate, indices, notes) = wide_gate(m, alpha, cfg)?;
    if !gate {
        let mut v = StabilityVerdict::new(StabilityClass::Inconclusive, Justification::WideThm, alpha)
            .note("growth index gate not witnessed; hypotheses unverified");
        v.indices = indices;
        v.notes.extend(notes);
        return Ok(v);
    }
    let rai = check_matrix_condition(m, MatrixCondition::Rai, cfg)?;
    let mut reports = vec![rai];
    let mut gates = Vec::new();
    if reports[0].verdict.is_witnessed() {
        for which in [MatrixCondition::Comega, MatrixCondition::Dc, MatrixCondition::Fdb] {
            let r = check_matrix_condition(m, which, cfg)?;
            gates.push(r.verdict);
            reports.push(r);
        }
    }
    let mut v = StabilityVerdict::new(decide(reports[0].verdict, &gates), Justification::WideThm, alpha);
    v.matrix_reports = reports;
    v.indices = indices;
    v.notes.extend(notes);
    Ok(v)
}

/// Narrow or wide criterion depending on `α`.
pub fn classify_matrix(m: &WeightMatrix, alpha: f64, cfg: &RunConfig) -> Result<StabilityVerdict> {
    if alpha <= 1.0 {
        classify_narrow(m, alpha, cfg)
    } else {
        classify_wide(m, alpha, cfg)
    }
}

fn find(reports: &[ConditionReport], c: Condition) -> &ConditionReport {
    reports.iter().find(|r| r.condition == c).expect("all weight-function conditions are reported")
}

pub fn classify_omega(w: &WeightFunction, alpha: f64, cfg: &RunConfig) -> Result<StabilityVerdict> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidInput(format!("alpha must be positive, got {alpha}")));
    }
    let reports = check_omega_conditions(w, cfg)?;
    let alpha0 = find(&reports, Condition::Alpha0).verdict;
    let omega2 = find(&reports, Condition::Omega2).verdict;
    let mut v = if alpha <= 1.0 {
        StabilityVerdict::new(decide(alpha0, &[omega2]), Justification::OmegaThmNarrow, alpha)
    } else {
        let idx = gamma_omega(w, cfg)?;
        let lower = idx.lower_witnessed.unwrap_or(0.0);
        let mut v = if lower > alpha - 1.0 {
            let s = 0.5 * (alpha - 1.0 + lower);
            let ws = w.clone().with_power(s);
            let rs = check_omega_conditions(&ws, cfg)?;
            let hyp = find(&rs, Condition::Omega5).verdict.and(find(&rs, Condition::Alpha0).verdict);
            let class = if hyp.is_witnessed() {
                decide(alpha0, &[omega2])
            } else {
                StabilityClass::Inconclusive
            };
            let mut v = StabilityVerdict::new(class, Justification::OmegaThmWide, alpha)
                .note(format!("hypotheses checked for the power s = {s}"));
            if !hyp.is_witnessed() {
                v.notes.push("o(t) or (alpha0) not witnessed for the power; hypotheses unverified".into());
            }
            v.condition_reports.extend(rs.into_iter().filter(|r| matches!(r.condition, Condition::Omega5 | Condition::Alpha0)));
            v
        } else {
            StabilityVerdict::new(StabilityClass::Inconclusive, Justification::OmegaThmWide, alpha)
                .note("growth index gate not witnessed; hypotheses unverified")
        };
        v.indices.push(idx);
        v
    };
    v.condition_reports.splice(0..0, reports);
    if w.is_normalized() {
        let spec = AssociatedMatrixSpec { source: w.clone(), ell_grid: cfg.ell_grid.clone(), n: cfg.n };
        match matrix_from_omega(&spec, cfg).and_then(|om| classify_matrix(&om.matrix, alpha, cfg)) {
            Ok(cross) if cross.verdict == v.verdict => {
                v.notes.push(format!("matrix path agrees: {}", cross.verdict));
            }
            Ok(cross) => {
                v.notes.push(format!("InternalInconsistency: matrix path gives {}", cross.verdict));
            }
            Err(e) => v.notes.push(format!("matrix path unavailable: {e}")),
        }
    } else {
        v.notes.push("matrix path skipped: weight function not normalized".into());
    }
    Ok(v)
}

/// Rounds grid values so that `β = α - 1` is detected exactly.
pub fn snap(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

/// `lo, lo + step, …` up to `hi` inclusive, snapped.
pub fn range_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && lo.is_finite() && hi >= lo) {
        return Err(Error::InvalidInput(format!("bad range {lo}:{hi}:{step}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(Error::InvalidInput(format!("range {lo}:{hi}:{step} has {count} points")));
    }
    Ok((0..count).map(|i| snap(lo + step * i as f64)).collect())
}

/// Region of the `(α, β)` plane for the class of `Gbar^β` on `S_α`.
pub fn gevrey_closed_form(alpha: f64, beta: f64) -> (StabilityClass, Justification) {
    let edge = alpha - 1.0;
    let on_edge = (beta - edge).abs() <= 1e-9;
    if alpha <= 1.0 {
        if on_edge {
            (StabilityClass::NotStable, Justification::ReductionRemarkIII)
        } else if beta < edge {
            (StabilityClass::TrivialClass, Justification::TrivialRemarkII)
        } else if beta < 1.0 {
            (StabilityClass::NotStable, Justification::NarrowThm)
        } else {
            (StabilityClass::StableComposition, Justification::NarrowThm)
        }
    } else if on_edge || beta < edge {
        (StabilityClass::TrivialClass, Justification::TrivialRemarkI)
    } else if beta < 1.0 {
        (StabilityClass::NotStable, Justification::WideThm)
    } else {
        (StabilityClass::StableComposition, Justification::WideThm)
    }
}

/// Truncation used by the pipeline in the Gevrey map.
pub const GEVREY_MAP_N: usize = 128;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GevreyCell {
    pub alpha: f64,
    pub beta: f64,
    pub closed: StabilityClass,
    pub closed_justification: Justification,
    pub pipeline: StabilityClass,
    pub pipeline_justification: Justification,
    pub on_boundary: bool,
}

impl GevreyCell {
    pub fn agrees(&self) -> bool {
        self.pipeline == StabilityClass::Inconclusive || self.pipeline == self.closed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GevreyMap {
    pub cells: Vec<GevreyCell>,
    pub disagreements: usize,
    pub inconclusive: usize,
    /// Inconclusive cells off the `β = α - 1` line over all such cells.
    pub inconclusive_fraction: f64,
}

/// Runs the general pipeline on the constant matrix of `Gbar^β`.
pub fn gevrey_pipeline(alpha: f64, beta: f64, cfg: &RunConfig) -> Result<StabilityVerdict> {
    let m = WeightMatrix::constant(&WeightSequence::gevrey_bar(beta, GEVREY_MAP_N), vec![1.0])?;
    classify_matrix(&m, alpha, cfg)
}

pub fn gevrey_map(alphas: &[f64], betas: &[f64], cfg: &RunConfig) -> Result<GevreyMap> {
    let mut pairs = Vec::with_capacity(alphas.len() * betas.len());
    for &a in alphas {
        for &b in betas {
            let (a, b) = (snap(a), snap(b));
            if !(a >= 0.05 - 1e-12 && a <= 3.5 + 1e-12 && b >= -2.0 - 1e-12 && b <= 3.0 + 1e-12) {
                return Err(Error::InvalidInput(format!("grid point ({a}, {b}) outside [0.05, 3.5] x [-2, 3]")));
            }
            pairs.push((a, b));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    pairs.dedup();
    let cells: Vec<GevreyCell> = pairs
        .par_iter()
        .map(|&(alpha, beta)| {
            let (closed, closed_justification) = gevrey_closed_form(alpha, beta);
            let v = gevrey_pipeline(alpha, beta, cfg)?;
            Ok(GevreyCell {
                alpha,
                beta,
                closed,
                closed_justification,
                pipeline: v.verdict,
                pipeline_justification: v.justification,
                on_boundary: (beta - (alpha - 1.0)).abs() <= 1e-9,
            })
        })
        .collect::<Result<_>>()?;
    let disagreements = cells.iter().filter(|c| !c.agrees()).count();
    let inconclusive = cells.iter().filter(|c| c.pipeline == StabilityClass::Inconclusive).count();
    let interior = cells.iter().filter(|c| !c.on_boundary).count();
    let interior_inc =
        cells.iter().filter(|c| !c.on_boundary && c.pipeline == StabilityClass::Inconclusive).count();
    let inconclusive_fraction = if interior == 0 { 0.0 } else { interior_inc as f64 / interior as f64 };
    Ok(GevreyMap { cells, disagreements, inconclusive, inconclusive_fraction })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeResult {
    pub probe: usize,
    pub in_m: Option<(f64, MembershipCertificate)>,
    pub in_m_alpha: Option<(f64, MembershipCertificate)>,
    /// `h` for `M^α` over `h` for `M`.
    pub h_ratio: Option<f64>,
    pub within_factor: Option<bool>,
    /// The `M^α` certificate re-checked against the dominating row of `M`.
    pub minorant_direction: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassEqualityReport {
    pub alpha: f64,
    /// Per-order factor `q^{1-α}` from the interpolation constants.
    pub allowed_ratio: f64,
    pub probes: Vec<ProbeResult>,
    pub notes: Vec<String>,
}

fn first_certificate(f: &Jet, m: &WeightMatrix, cfg: &RunConfig) -> Option<(f64, MembershipCertificate)> {
    m.params()
        .iter()
        .zip(m.rows())
        .find_map(|(&p, row)| membership_certificate(f, row, cfg).ok().map(|c| (p, c)))
}

/// Membership of probe jets in the classes of `M` and of `M^α`.
pub fn class_equality_demo(m: &WeightMatrix, alpha: f64, probes: &[Jet], cfg: &RunConfig) -> Result<ClassEqualityReport> {
    let ma = build_m_alpha(m, alpha, cfg)?;
    let (_, q) = gorny_cartan_constants(alpha);
    let allowed = q.powf(1.0 - alpha);
    let mut out = Vec::new();
    for (i, f) in probes.iter().enumerate() {
        let in_m = first_certificate(f, m, cfg);
        let in_ma = first_certificate(f, &ma, cfg);
        let h_ratio = match (&in_m, &in_ma) {
            (Some((_, a)), Some((_, b))) => Some(b.h / a.h),
            _ => None,
        };
        let minorant_direction = in_ma.as_ref().map(|(p, cert)| {
            let k = m.params().iter().position(|x| x == p).expect("same grid");
            let n = f.order().min(m.n());
            let lm = m.rows()[k].log_m();
            let lh = cert.h.ln();
            (0..=n).all(|j| f.log_abs()[j] - j as f64 * lh - lm[j] <= cert.norm.ln() + 1e-9)
        });
        out.push(ProbeResult {
            probe: i,
            within_factor: h_ratio.map(|r| r <= allowed * (1.0 + 1e-9)),
            in_m,
            in_m_alpha: in_ma,
            h_ratio,
            minorant_direction,
        });
    }
    Ok(ClassEqualityReport {
        alpha,
        allowed_ratio: allowed,
        probes: out,
        notes: vec!["jet certificates are necessary-condition evidence only".into()],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QGevreyDemo {
    pub q: f64,
    /// Largest `|logW - ℓ j^2 ln q| / max(1, ℓ j^2 ln q)` over the grid and `j <= 32`.
    pub max_log_rel_error: f64,
    pub sandwich: Vec<ConditionReport>,
    pub index: IndexEstimate,
    pub verdicts: Vec<StabilityVerdict>,
}

pub const QGEVREY_ALPHAS: [f64; 4] = [0.5, 1.0, 2.0, 3.0];

/// The weight `ln^2 t / (4 ln q)`, its matrix `q^{ℓ j^2}` and the stability verdicts.
pub fn demo_qgevrey(q: f64, cfg: &RunConfig) -> Result<QGevreyDemo> {
    let w = WeightFunction::log_square(q)?.normalized();
    let spec = AssociatedMatrixSpec { source: w.clone(), ell_grid: cfg.ell_grid.clone(), n: cfg.n.max(32) };
    let om = matrix_from_omega(&spec, cfg)?;
    let lq = q.ln();
    let mut err = 0.0f64;
    for (&ell, row) in om.matrix.params().iter().zip(om.matrix.rows()) {
        for j in 0..=32 {
            let want = ell * (j * j) as f64 * lq;
            err = err.max((row.log_m()[j] - want).abs() / want.max(1.0));
        }
    }
    let index = gamma_sequence(&WeightSequence::qgevrey(q, cfg.n.max(32))?, cfg)?;
    let verdicts = QGEVREY_ALPHAS.iter().map(|&a| classify_omega(&w, a, cfg)).collect::<Result<_>>()?;
    Ok(QGevreyDemo { q, max_log_rel_error: err, sandwich: om.sandwich, index, verdicts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    fn gbar(beta: f64) -> WeightMatrix {
        WeightMatrix::constant(&WeightSequence::gevrey_bar(beta, 128), vec![1.0, 2.0, 4.0]).unwrap()
    }

    #[test]
    fn screen_examples() {
        let c = cfg();
        match triviality_screen(&gbar(0.3), 1.5, &c) {
            Screen::Trivial(v) => assert_eq!(v.justification, Justification::TrivialRemarkI),
            s => panic!("{s:?}"),
        }
        match triviality_screen(&gbar(-1.5), 0.5, &c) {
            Screen::Trivial(v) => assert_eq!(v.justification, Justification::TrivialRemarkII),
            s => panic!("{s:?}"),
        }
        assert_eq!(triviality_screen(&gbar(-0.5), 0.5, &c), Screen::Reduce);
        assert_eq!(triviality_screen(&gbar(2.0), 0.5, &c), Screen::Proceed);
    }

    #[test]
    fn narrow_examples() {
        let c = cfg();
        assert_eq!(classify_narrow(&gbar(2.0), 0.5, &c).unwrap().verdict, StabilityClass::StableComposition);
        let v = classify_narrow(&gbar(0.2), 0.5, &c).unwrap();
        assert_eq!(v.verdict, StabilityClass::NotStable);
        assert!(v.rai_report().unwrap().verdict.is_failed());
        let v = classify_narrow(&gbar(-0.5), 0.5, &c).unwrap();
        assert_eq!((v.verdict, v.justification), (StabilityClass::NotStable, Justification::ReductionRemarkIII));
    }

    #[test]
    fn wide_examples() {
        let c = cfg();
        assert_eq!(classify_wide(&gbar(2.0), 1.5, &c).unwrap().verdict, StabilityClass::StableComposition);
        let pf = WeightMatrix::power_family(3.0, vec![1.0, 2.0, 4.0], 128).unwrap();
        assert_eq!(classify_wide(&pf, 2.0, &c).unwrap().verdict, StabilityClass::StableComposition);
        let qg = WeightMatrix::constant(&WeightSequence::qgevrey(1.5, 64).unwrap(), vec![1.0]).unwrap();
        let v = classify_wide(&qg, 3.0, &c).unwrap();
        assert_eq!(v.verdict, StabilityClass::StableComposition);
        assert!(v.indices[0].infinite);
    }

    #[test]
    fn omega_examples() {
        let c = cfg();
        let w = WeightFunction::log_square(1.5).unwrap().normalized();
        for a in [0.5, 2.0] {
            let v = classify_omega(&w, a, &c).unwrap();
            assert_eq!(v.verdict, StabilityClass::StableComposition, "alpha={a}: {:?}", v.notes);
            assert!(!v.notes.iter().any(|n| n.contains("Inconsistency")), "{:?}", v.notes);
        }
        let v = classify_omega(&WeightFunction::linear_log(), 1.0, &c).unwrap();
        assert_eq!(v.verdict, StabilityClass::NotStable);
    }

    #[test]
    fn range_grid_is_inclusive() {
        assert_eq!(range_grid(0.05, 3.5, 0.05).unwrap().len(), 70);
        assert_eq!(range_grid(-2.0, 2.95, 0.05).unwrap().len(), 100);
        assert_eq!(range_grid(1.0, 1.0, 0.5).unwrap(), vec![1.0]);
        assert!(range_grid(1.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn closed_form_regions() {
        assert_eq!(gevrey_closed_form(0.5, 2.0).0, StabilityClass::StableComposition);
        assert_eq!(gevrey_closed_form(0.5, 0.2).0, StabilityClass::NotStable);
        assert_eq!(gevrey_closed_form(1.5, 0.3).0, StabilityClass::TrivialClass);
        assert_eq!(gevrey_closed_form(snap(0.05 * 6.0), snap(-0.7)).1, Justification::ReductionRemarkIII);
    }

    #[test]
    fn small_map_agrees() {
        let alphas = [0.25, 0.5, 1.0, 1.5, 2.5];
        let betas = [-1.0, -0.5, 0.0, 0.5, 0.95, 1.0, 2.0];
        let map = gevrey_map(&alphas, &betas, &cfg()).unwrap();
        for c in &map.cells {
            assert!(c.agrees(), "{c:?}");
        }
        assert_eq!(map.inconclusive, 0);
    }

    #[test]
    fn class_equality_exact_probe() {
        let c = cfg();
        let m = gbar(2.0);
        let ma = build_m_alpha(&m, 0.5, &c).unwrap();
        let row = &ma.rows()[0];
        let probe = Jet::from_logs(row.log_m().to_vec(), &vec![1.0; row.n() + 1], crate::analytic::JetSource::Table)
            .unwrap();
        let r = class_equality_demo(&m, 0.5, &[probe], &c).unwrap();
        let p = &r.probes[0];
        assert!(p.in_m.is_some() && p.in_m_alpha.is_some());
        assert_eq!(p.minorant_direction, Some(true));
    }
}
