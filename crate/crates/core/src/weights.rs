//! Associated weight functions, log-convex minorants, weight-function
//! conditions, Legendre conjugates and the matrix of a weight function.

use serde::{Deserialize, Serialize};

use crate::config::{RunConfig, DEFAULT_N};
use crate::error::{Error, Result};
use crate::matrices::{MatrixOrigin, WeightMatrix};
use crate::report::{
    bounded_verdict, decay_verdict, Condition, ConditionReport, TracePoint, Verdict,
};
use crate::sequences::{make_sequence, SequenceSpec, WeightSequence};

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Vertices of the lower convex hull of `(j, v[j])`.
///
/// A point is kept only if it lies strictly below the chord of its neighbours
/// by more than a rounding-sized margin, so collinear runs collapse.
fn hull_vertices(v: &[f64]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(v.len());
    for i in 0..v.len() {
        while hull.len() >= 2 {
            let b = hull[hull.len() - 1];
            let a = hull[hull.len() - 2];
            let chord = v[a] + (v[i] - v[a]) * (b - a) as f64 / (i - a) as f64;
            let margin = 1e-13 * (1.0 + v[a].abs().max(v[i].abs()));
            if v[b] < chord - margin {
                break;
            }
            hull.pop();
        }
        hull.push(i);
    }
    hull
}

fn envelope(v: &[f64]) -> Vec<f64> {
    let hull = hull_vertices(v);
    let mut out = v.to_vec();
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        for j in a + 1..b {
            out[j] = v[a] + (v[b] - v[a]) * (j - a) as f64 / (b - a) as f64;
        }
    }
    out
}

/// `M^lc`: lower convex envelope of `(j, logM[j])` at integer abscissae.
pub fn log_convex_minorant(s: &WeightSequence) -> WeightSequence {
    let out = envelope(s.log_m());
    if out == s.log_m() {
        return s.clone();
    }
    WeightSequence::derived(format!("lc({})", s.label()), out).expect("envelope keeps logM[0] = 0")
}

/// `max(0, max_j (j y - logM[j]))` without any domain check.
fn omega_log_raw(log_m: &[f64], y: f64) -> f64 {
    let mut best = 0.0f64;
    for (j, v) in log_m.iter().enumerate() {
        let c = j as f64 * y - v;
        if c > best {
            best = c;
        }
    }
    best
}

/// Upper end of the range of `ln t` on which the truncation determines `ω_M`.
pub fn omega_log_bound(s: &WeightSequence) -> f64 {
    let lc = envelope(s.log_m());
    let n = lc.len() - 1;
    lc[n] - lc[n - 1]
}

/// `ω_M(t) = sup_j ln(t^j / M_j)`, clamped at zero.
pub fn omega_of_sequence(s: &WeightSequence, t: f64) -> Result<f64> {
    if t <= 0.0 {
        return Ok(0.0);
    }
    let bound = omega_log_bound(s);
    let y = t.ln();
    if y > bound * (1.0 + 1e-12) + 1e-12 {
        return Err(Error::DomainExceeded { t, bound: bound.exp() });
    }
    Ok(omega_log_raw(s.log_m(), y))
}

/// Both sides of `ω_M(t^β) = β ω_{M^{1/β}}(t)`.
pub fn power_transform(s: &WeightSequence, beta: f64, t: f64) -> Result<(f64, f64)> {
    if !(beta > 0.0) {
        return Err(Error::InvalidInput("β must be positive".into()));
    }
    let lhs = omega_of_sequence(s, t.powf(beta))?;
    let root = s.power(1.0 / beta);
    let rhs = beta * omega_of_sequence(&root, t)?;
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum ClosedOmega {
    /// `max(0, ln t)^2 / (4 ln q)`.
    LogSquare { q: f64 },
    /// `t^p`.
    Power { p: f64 },
    /// `t ln(e + t)`.
    LinearLog,
}

impl ClosedOmega {
    fn phi(&self, y: f64) -> f64 {
        match *self {
            ClosedOmega::LogSquare { q } => {
                let y = y.max(0.0);
                y * y / (4.0 * q.ln())
            }
            ClosedOmega::Power { p } => (p * y).exp(),
            ClosedOmega::LinearLog => {
                let log_term = if y > 1.0 { y + (1.0 + (1.0 - y).exp()).ln() } else { (1f64.exp() + y.exp()).ln() };
                y.exp() * log_term
            }
        }
    }

    fn label(&self) -> String {
        match self {
            ClosedOmega::LogSquare { q } => format!("ln^2 t/(4 ln {q})"),
            ClosedOmega::Power { p } => format!("t^{p}"),
            ClosedOmega::LinearLog => "t ln(e+t)".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OmegaForm {
    ClosedForm(ClosedOmega),
    /// Piecewise linear in `ln t` through the nodes.
    Tabulated { log_t: Vec<f64>, omega: Vec<f64> },
    FromSequence {
        sequence: WeightSequence,
        #[serde(skip)]
        hull: Vec<(f64, f64)>,
        log_bound: f64,
    },
}

/// A weight function `t -> ω(t^scale)`, optionally shifted to vanish on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightFunction {
    label: String,
    form: OmegaForm,
    scale: f64,
    normalize: bool,
}

impl WeightFunction {
    pub fn closed(form: ClosedOmega) -> Self {
        WeightFunction { label: form.label(), form: OmegaForm::ClosedForm(form), scale: 1.0, normalize: false }
    }

    pub fn log_square(q: f64) -> Result<Self> {
        if !(q > 1.0) {
            return Err(Error::InvalidInput(format!("log-square weight needs q > 1, got {q}")));
        }
        Ok(Self::closed(ClosedOmega::LogSquare { q }))
    }

    pub fn power(p: f64) -> Result<Self> {
        if !(p > 0.0) {
            return Err(Error::InvalidInput(format!("power weight needs p > 0, got {p}")));
        }
        Ok(Self::closed(ClosedOmega::Power { p }))
    }

    pub fn linear_log() -> Self {
        Self::closed(ClosedOmega::LinearLog)
    }

    pub fn tabulated(log_t: Vec<f64>, omega: Vec<f64>) -> Result<Self> {
        if log_t.len() != omega.len() || log_t.len() < 2 {
            return Err(Error::InvalidInput("table needs matching log_t/omega arrays of length >= 2".into()));
        }
        if log_t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("log_t must be strictly increasing".into()));
        }
        if omega.windows(2).any(|w| w[1] < w[0]) || omega.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::InvalidInput("omega values must be nonnegative and nondecreasing".into()));
        }
        Ok(WeightFunction {
            label: "table".into(),
            form: OmegaForm::Tabulated { log_t, omega },
            scale: 1.0,
            normalize: false,
        })
    }

    /// `ω_M`, valid up to `t = m_{N-1}` of the minorant.
    pub fn from_sequence(s: &WeightSequence) -> Self {
        let lc = envelope(s.log_m());
        let hull = hull_vertices(&lc).into_iter().map(|j| (j as f64, lc[j])).collect();
        let n = lc.len() - 1;
        WeightFunction {
            label: format!("omega[{}]", s.label()),
            form: OmegaForm::FromSequence { sequence: s.clone(), hull, log_bound: lc[n] - lc[n - 1] },
            scale: 1.0,
            normalize: false,
        }
    }

    /// `ω(t) - ω(1)` for `t >= 1` and `0` below.
    pub fn normalized(mut self) -> Self {
        if !self.normalize {
            self.normalize = true;
            self.label = format!("{} (normalized)", self.label);
        }
        self
    }

    /// `ω^a(t) = ω(t^a)`.
    pub fn with_power(mut self, a: f64) -> Self {
        self.scale *= a;
        self.label = format!("({})^[{a}]", self.label);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn form(&self) -> &OmegaForm {
        &self.form
    }

    fn base_phi(&self, y: f64) -> Result<f64> {
        let z = self.scale * y;
        match &self.form {
            OmegaForm::ClosedForm(c) => Ok(c.phi(z)),
            OmegaForm::Tabulated { log_t, omega } => {
                let last = log_t.len() - 1;
                if z > log_t[last] * (1.0 + 1e-12) + 1e-12 {
                    return Err(Error::DomainExceeded { t: y.exp(), bound: (log_t[last] / self.scale).exp() });
                }
                if z <= log_t[0] {
                    return if omega[0] == 0.0 {
                        Ok(0.0)
                    } else {
                        Err(Error::DomainExceeded { t: y.exp(), bound: (log_t[0] / self.scale).exp() })
                    };
                }
                let i = log_t.partition_point(|&v| v < z).clamp(1, last);
                let (a, b) = (i - 1, i);
                let w = ((z - log_t[a]) / (log_t[b] - log_t[a])).clamp(0.0, 1.0);
                Ok(omega[a] + w * (omega[b] - omega[a]))
            }
            OmegaForm::FromSequence { hull, log_bound, .. } => {
                if z > log_bound * (1.0 + 1e-12) + 1e-12 {
                    return Err(Error::DomainExceeded { t: y.exp(), bound: (log_bound / self.scale).exp() });
                }
                let mut best = 0.0f64;
                for &(j, v) in hull {
                    best = best.max(j * z - v);
                }
                Ok(best)
            }
        }
    }

    /// `φ(y) = ω(e^y)`.
    pub fn phi(&self, y: f64) -> Result<f64> {
        if self.normalize {
            if y <= 0.0 {
                return Ok(0.0);
            }
            let v = self.base_phi(y)? - self.base_phi(0.0)?;
            Ok(v.max(0.0))
        } else {
            self.base_phi(y)
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Ok(0.0);
        }
        self.phi(t.ln())
    }

    /// Largest admissible `ln t`, `None` when the closed form is valid everywhere.
    pub fn log_t_max(&self) -> Option<f64> {
        match &self.form {
            OmegaForm::ClosedForm(_) => None,
            OmegaForm::Tabulated { log_t, .. } => Some(log_t[log_t.len() - 1] / self.scale),
            OmegaForm::FromSequence { log_bound, .. } => Some(log_bound / self.scale),
        }
    }

    /// Slope of `φ` past `log_t_max` when the continuation is known: a sequence
    /// weight is linear in `ln t` beyond its last quotient.
    fn tail_slope(&self) -> Option<f64> {
        match &self.form {
            OmegaForm::FromSequence { hull, .. } => hull.last().map(|&(j, _)| j * self.scale),
            _ => None,
        }
    }

    /// Lower end of the range of `ln t` worth searching.
    fn log_t_min(&self) -> f64 {
        match &self.form {
            _ if self.normalize => 0.0,
            OmegaForm::ClosedForm(ClosedOmega::LogSquare { .. }) => 0.0,
            OmegaForm::ClosedForm(_) => -30.0,
            OmegaForm::Tabulated { log_t, .. } => (log_t[0] / self.scale).min(0.0),
            OmegaForm::FromSequence { hull, .. } => {
                let first = if hull.len() > 1 { (hull[1].1 - hull[0].1) / (hull[1].0 - hull[0].0) } else { 0.0 };
                (first.min(0.0) - 1.0) / self.scale
            }
        }
    }

    /// Convexity of `φ` on `y >= 0`, known analytically for closed forms.
    pub fn convex_in_log(&self) -> bool {
        match &self.form {
            OmegaForm::ClosedForm(_) | OmegaForm::FromSequence { .. } => self.scale > 0.0,
            OmegaForm::Tabulated { log_t, omega } => {
                (1..log_t.len() - 1).all(|i| {
                    let s1 = (omega[i] - omega[i - 1]) / (log_t[i] - log_t[i - 1]);
                    let s2 = (omega[i + 1] - omega[i]) / (log_t[i + 1] - log_t[i]);
                    s2 >= s1 - 1e-12 * (1.0 + s1.abs())
                })
            }
        }
    }

    pub fn is_normalized(&self) -> bool {
        if self.normalize {
            return true;
        }
        (0..=20).all(|i| {
            let y = -(i as f64) * 0.5;
            matches!(self.phi(y), Ok(v) if v == 0.0)
        })
    }
}

fn default_one() -> f64 {
    1.0
}

/// JSON-facing description of a weight function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OmegaSpec {
    ClosedForm {
        #[serde(flatten)]
        form: ClosedOmega,
        #[serde(default)]
        normalized: bool,
        #[serde(default = "default_one")]
        scale: f64,
    },
    Table {
        log_t: Vec<f64>,
        omega: Vec<f64>,
        #[serde(default)]
        normalized: bool,
    },
    FromSequence {
        sequence: SequenceSpec,
    },
}

pub fn make_weight_function(spec: &OmegaSpec) -> Result<WeightFunction> {
    match spec {
        OmegaSpec::ClosedForm { form, normalized, scale } => {
            let w = match form {
                ClosedOmega::LogSquare { q } => WeightFunction::log_square(*q)?,
                ClosedOmega::Power { p } => WeightFunction::power(*p)?,
                ClosedOmega::LinearLog => WeightFunction::linear_log(),
            };
            if !(*scale > 0.0) {
                return Err(Error::InvalidInput("scale must be positive".into()));
            }
            let w = if *scale != 1.0 { w.with_power(*scale) } else { w };
            Ok(if *normalized { w.normalized() } else { w })
        }
        OmegaSpec::Table { log_t, omega, normalized } => {
            let w = WeightFunction::tabulated(log_t.clone(), omega.clone())?;
            Ok(if *normalized { w.normalized() } else { w })
        }
        OmegaSpec::FromSequence { sequence } => Ok(WeightFunction::from_sequence(&make_sequence(sequence)?)),
    }
}

/// Evenly spaced `ln t` grid with `per_decade` points per factor of ten.
pub fn log_grid(y_lo: f64, y_hi: f64, per_decade: usize) -> Vec<f64> {
    let step = std::f64::consts::LN_10 / per_decade as f64;
    let count = ((y_hi - y_lo) / step).ceil().max(1.0) as usize;
    (0..=count).map(|i| y_lo + (y_hi - y_lo) * i as f64 / count as f64).collect()
}

/// Maximizes a concave function on `[lo, hi]` by golden-section search.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..400 {
        if hi - lo <= 1e-13 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        }
    }
    let candidates = [(lo, f(lo)), (x1, f1), (x2, f2), (hi, f(hi))];
    candidates.into_iter().fold((lo, f64::NEG_INFINITY), |acc, c| if c.1 > acc.1 { c } else { acc })
}

/// Upper search limit for `sup_y (x y - φ(y))`: the domain end, or the first
/// doubling past which the objective decreases.
fn search_limit(w: &WeightFunction, x: f64, y_lo: f64) -> Result<(f64, bool)> {
    if let Some(b) = w.log_t_max() {
        return Ok((b, true));
    }
    let mut y = y_lo.max(0.0) + 1.0;
    loop {
        let h = 1e-3 * (1.0 + y);
        let slope = x - (w.phi(y + h)? - w.phi(y)?) / h;
        if slope < 0.0 {
            return Ok((y + h, false));
        }
        if y > 1e6 {
            return Err(Error::ArgmaxOnBoundary { index: 0, log_t: y });
        }
        y *= 2.0;
    }
}

fn phi_or_inf(w: &WeightFunction, y: f64) -> f64 {
    w.phi(y).unwrap_or(f64::INFINITY)
}

/// `sup_{y >= y_lo} (x y - φ(y))`, failing if the sup sits on a finite domain end.
fn conjugate_from(w: &WeightFunction, x: f64, y_lo: f64, per_decade: usize) -> Result<f64> {
    let (y_hi, bounded) = search_limit(w, x, y_lo)?;
    let f = |y: f64| x * y - phi_or_inf(w, y);
    let (arg, val) = if w.convex_in_log() {
        golden_max(f, y_lo, y_hi)
    } else {
        let grid = log_grid(y_lo, y_hi, per_decade);
        let vals: Vec<f64> = grid.iter().map(|&y| f(y)).collect();
        let mut i = 0;
        for k in 1..vals.len() {
            if vals[k] > vals[i] {
                i = k;
            }
        }
        let lo = grid[i.saturating_sub(1)];
        let hi = grid[(i + 1).min(grid.len() - 1)];
        let refined = golden_max(f, lo, hi);
        if refined.1 >= vals[i] { refined } else { (grid[i], vals[i]) }
    };
    if bounded {
        let interior = f(y_hi - 1e-6 * (1.0 + y_hi.abs()));
        let at_end = f(y_hi);
        let tol = 1e-12 * (1.0 + at_end.abs());
        if (y_hi - arg).abs() <= 1e-9 * (1.0 + y_hi.abs()) && at_end > interior + tol {
            return Err(Error::ArgmaxOnBoundary { index: 0, log_t: y_hi });
        }
    }
    Ok(val)
}

/// `φ*(x) = sup_{y >= 0} (x y - ω(e^y))`.
pub fn legendre_conjugate(w: &WeightFunction, x: f64, cfg: &RunConfig) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::InvalidInput("conjugate needs x >= 0".into()));
    }
    conjugate_from(w, x, 0.0, cfg.grid_per_decade)
}

/// `logM[j] = sup_t (j ln t - ω(t))`, j = 0..=n.
pub fn recover_sequence(w: &WeightFunction, n: usize, cfg: &RunConfig) -> Result<WeightSequence> {
    let y_lo = w.log_t_min();
    let y_hi = match w.log_t_max() {
        Some(b) => b,
        None => search_limit(w, n as f64, y_lo)?.0,
    };
    let grid = log_grid(y_lo, y_hi, cfg.grid_per_decade);
    let phis: Vec<f64> = grid.iter().map(|&y| w.phi(y)).collect::<Result<_>>()?;
    let last = grid.len() - 1;
    let mut log_m = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let x = j as f64;
        let f = |y: f64| x * y - phi_or_inf(w, y);
        let mut i = 0;
        let mut best = f64::NEG_INFINITY;
        for k in 0..=last {
            let v = x * grid[k] - phis[k];
            if v > best {
                best = v;
                i = k;
            }
        }
        let lo = grid[i.saturating_sub(1)];
        let hi = grid[(i + 1).min(last)];
        let (_, refined) = golden_max(f, lo, hi);
        let value = refined.max(best);
        if i == last {
            let interior = (0..last).map(|k| x * grid[k] - phis[k]).fold(f64::NEG_INFINITY, f64::max);
            let continued = w.tail_slope().is_some_and(|s| x < s - 1e-9);
            if value > interior + 1e-9 * (1.0 + value.abs()) && !continued {
                return Err(Error::ArgmaxOnBoundary { index: j, log_t: grid[last] });
            }
        }
        log_m.push(if j == 0 { 0.0 } else { value });
    }
    if log_m.len() > 1 && !(log_m[1].is_finite()) {
        return Err(Error::InvalidInput("recovered sequence is not finite".into()));
    }
    WeightSequence::derived(format!("recover[{}]", w.label()), log_m)
}

/// Upper end of the check grid in `ln t`.
fn grid_top(w: &WeightFunction, cfg: &RunConfig) -> f64 {
    let top = cfg.t_max.ln();
    match w.log_t_max() {
        Some(b) => top.min(b),
        None => top,
    }
}

fn quarter_levels(top: f64) -> [f64; 4] {
    [top / 4.0, top / 2.0, 3.0 * top / 4.0, top]
}

fn trace_of(levels: &[f64], values: &[f64]) -> Vec<TracePoint> {
    levels.iter().zip(values).map(|(&t, &v)| TracePoint { truncation: t, value: v }).collect()
}

fn sup_over<F: Fn(f64) -> Result<f64>>(grid: &[f64], lo: f64, hi: f64, f: F) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for &y in grid.iter().filter(|&&y| y >= lo && y <= hi) {
        best = best.max(f(y)?);
    }
    Ok(best)
}

/// Reports for (ω0)..(ω6) and (α0), in that order.
pub fn check_omega_conditions(w: &WeightFunction, cfg: &RunConfig) -> Result<Vec<ConditionReport>> {
    let top = grid_top(w, cfg);
    if !(top > 0.0) {
        return Err(Error::DomainExceeded { t: 1.0, bound: top.exp() });
    }
    let grid = log_grid(0.0, top, cfg.grid_per_decade);
    let levels = quarter_levels(top);
    let phi = |y: f64| w.phi(y);
    let dom = w.log_t_max().unwrap_or(f64::INFINITY);
    let mut out = Vec::with_capacity(8);

    // (ω0): vanishes on [0, 1]
    let normalized = w.is_normalized();
    out.push(
        ConditionReport::new(Condition::Omega0, Verdict::exact(normalized))
            .with_trace(vec![TracePoint { truncation: 0.0, value: phi(0.0)? }]),
    );

    // (ω1): ω(2t) <= L (ω(t) + 1)
    let ln2 = std::f64::consts::LN_2;
    let mut vals = Vec::new();
    for &lv in &levels {
        let hi = lv.min(dom - ln2);
        vals.push(sup_over(&grid, 0.0, hi, |y| Ok(phi(y + ln2)? / (phi(y)? + 1.0)))?);
    }
    out.push(
        ConditionReport::new(Condition::Omega1, bounded_verdict(&vals, cfg))
            .with_witness("L", vals[3])
            .with_trace(trace_of(&levels, &vals)),
    );

    // (ω2): ω(t) = O(t)
    let vals: Vec<f64> = levels
        .iter()
        .map(|&lv| sup_over(&grid, 0.0, lv, |y| Ok(phi(y)? * (-y).exp())))
        .collect::<Result<_>>()?;
    out.push(
        ConditionReport::new(Condition::Omega2, bounded_verdict(&vals, cfg))
            .with_witness("sup_omega_over_t", vals[3])
            .with_trace(trace_of(&levels, &vals)),
    );

    // (ω3): ln t = o(ω(t)), window sups over the upper half of each truncation
    let vals: Vec<f64> = levels
        .iter()
        .map(|&lv| {
            sup_over(&grid, lv / 2.0, lv, |y| {
                let v = phi(y)?;
                Ok(if v > 0.0 { y / v } else { f64::INFINITY })
            })
        })
        .collect::<Result<_>>()?;
    out.push(
        ConditionReport::new(Condition::Omega3, decay_verdict(&vals, cfg))
            .with_witness("tail_ratio", vals[3])
            .with_trace(trace_of(&levels, &vals)),
    );

    // (ω4): convexity of φ on the grid
    let phis: Vec<f64> = grid.iter().map(|&y| phi(y)).collect::<Result<_>>()?;
    let violation = crate::sequences::convexity_violation(&phis);
    let mut r = ConditionReport::new(Condition::Omega4, Verdict::exact(violation.is_none()))
        .with_trace(vec![TracePoint { truncation: top, value: violation.map_or(0.0, |i| grid[i]) }]);
    r.failure_site = violation.map(|i| (i, i));
    out.push(r);

    // (ω5): ω(t) = o(t)
    let vals: Vec<f64> = levels
        .iter()
        .map(|&lv| sup_over(&grid, lv / 2.0, lv, |y| Ok(phi(y)? * (-y).exp())))
        .collect::<Result<_>>()?;
    out.push(
        ConditionReport::new(Condition::Omega5, decay_verdict(&vals, cfg))
            .with_witness("tail_ratio", vals[3])
            .with_trace(trace_of(&levels, &vals)),
    );

    // (ω6): 2ω(t) <= ω(Ht) + H, minimal H on the grid 2^{k/4}
    let mut vals = Vec::new();
    for &lv in &levels {
        let mut found = f64::INFINITY;
        for k in 1..=160 {
            let ln_h = k as f64 * ln2 / 4.0;
            let hi = lv.min(dom - ln_h);
            if hi < 0.0 {
                break;
            }
            let h = ln_h.exp();
            let worst = sup_over(&grid, 0.0, hi, |y| Ok(2.0 * phi(y)? - phi(y + ln_h)?))?;
            if worst <= h {
                found = ln_h;
                break;
            }
        }
        vals.push(found);
    }
    out.push(
        ConditionReport::new(Condition::Omega6, bounded_verdict(&vals, cfg))
            .with_witness("ln_H", vals[3])
            .with_trace(trace_of(&levels, &vals)),
    );

    out.push(alpha0_report(w, cfg)?);
    Ok(out)
}

/// (α0): `ω(λt) <= C λ ω(t)` for `λ = 2^k`; the trace runs over the largest `k`.
pub fn alpha0_report(w: &WeightFunction, cfg: &RunConfig) -> Result<ConditionReport> {
    let top = grid_top(w, cfg);
    let dom = w.log_t_max().unwrap_or(f64::INFINITY);
    let grid = log_grid(0.0, top, cfg.grid_per_decade);
    let ln2 = std::f64::consts::LN_2;
    let k_total = if dom.is_finite() { (((dom - top / 2.0) / ln2).floor() as i64).clamp(4, 40) as usize } else { 40 };
    let ks = [k_total / 4, k_total / 2, 3 * k_total / 4, k_total];
    let mut per_k = vec![f64::NEG_INFINITY; k_total + 1];
    let mut reduced = false;
    for k in 1..=k_total {
        let ln_l = k as f64 * ln2;
        let hi = top.min(dom - ln_l);
        let lo = top / 2.0;
        if hi < lo {
            reduced = true;
            if hi <= 0.0 {
                continue;
            }
        }
        let lo = lo.min(hi / 2.0);
        per_k[k] = sup_over(&grid, lo, hi, |y| {
            let v = w.phi(y)?;
            Ok(if v > 0.0 { w.phi(y + ln_l)? / (v * ln_l.exp()) } else { f64::INFINITY })
        })?;
    }
    let mut vals = Vec::new();
    let mut run = f64::NEG_INFINITY;
    let mut idx = 0;
    for k in 1..=k_total {
        run = run.max(per_k[k]);
        if idx < 4 && k == ks[idx] {
            vals.push(run.ln());
            idx += 1;
        }
    }
    let levels: Vec<f64> = ks.iter().map(|&k| k as f64).collect();
    let mut r = ConditionReport::new(Condition::Alpha0, bounded_verdict(&vals, cfg))
        .with_witness("ln_C", vals[3])
        .with_trace(trace_of(&levels, &vals));
    if reduced {
        r.notes.push("t window shrunk to keep λt inside the domain".into());
    }
    Ok(r)
}

pub fn default_ell_grid() -> Vec<f64> {
    vec![0.25, 0.5, 1.0, 2.0, 4.0]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssociatedMatrixSpec {
    pub source: WeightFunction,
    pub ell_grid: Vec<f64>,
    pub n: usize,
}

impl AssociatedMatrixSpec {
    pub fn new(source: WeightFunction) -> Self {
        AssociatedMatrixSpec { source, ell_grid: default_ell_grid(), n: DEFAULT_N }
    }
}

/// The matrix of a weight function together with the measured sandwich
/// `ℓ ω_W(t) <= ω(t) <= 2ℓ ω_W(t) + D_ℓ`, one report per row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaMatrix {
    pub matrix: WeightMatrix,
    pub sandwich: Vec<ConditionReport>,
}

pub fn matrix_from_omega(spec: &AssociatedMatrixSpec, cfg: &RunConfig) -> Result<OmegaMatrix> {
    let w = &spec.source;
    if spec.ell_grid.is_empty() || spec.ell_grid.windows(2).any(|p| !(p[1] > p[0])) || !(spec.ell_grid[0] > 0.0) {
        return Err(Error::InvalidInput("ℓ grid must be positive and strictly increasing".into()));
    }
    if !w.is_normalized() {
        return Err(Error::Precondition("the weight function must vanish on [0, 1]".into()));
    }
    let mut rows = Vec::with_capacity(spec.ell_grid.len());
    for &ell in &spec.ell_grid {
        let mut log_w = Vec::with_capacity(spec.n + 1);
        for j in 0..=spec.n {
            let v = if j == 0 { 0.0 } else { legendre_conjugate(w, ell * j as f64, cfg)? / ell };
            log_w.push(v);
        }
        for j in 1..spec.n {
            let second = log_w[j + 1] - 2.0 * log_w[j] + log_w[j - 1];
            if second < -1e-9 * (1.0 + log_w[j + 1].abs()) {
                return Err(Error::NotLogConvex { index: j });
            }
        }
        rows.push(WeightSequence::derived(format!("W^({ell})"), log_w)?);
    }
    let matrix = WeightMatrix::new(spec.ell_grid.clone(), rows, MatrixOrigin::FromOmega(Box::new(w.clone())))?;
    let sandwich = spec
        .ell_grid
        .iter()
        .zip(matrix.rows())
        .map(|(&ell, row)| sandwich_report(w, ell, row, cfg))
        .collect::<Result<_>>()?;
    Ok(OmegaMatrix { matrix, sandwich })
}

fn sandwich_report(w: &WeightFunction, ell: f64, row: &WeightSequence, cfg: &RunConfig) -> Result<ConditionReport> {
    let ww = WeightFunction::from_sequence(row);
    let top = grid_top(w, cfg).min(ww.log_t_max().unwrap_or(f64::INFINITY));
    let grid = log_grid(0.0, top.max(1e-3), cfg.grid_per_decade);
    let levels = quarter_levels(top);
    let mut lower = f64::NEG_INFINITY;
    let mut d = vec![f64::NEG_INFINITY; 4];
    for &y in &grid {
        let om = w.phi(y)?;
        let ow = ww.phi(y)?;
        lower = lower.max(ell * ow - om);
        let gap = om - 2.0 * ell * ow;
        for (i, &lv) in levels.iter().enumerate() {
            if y <= lv {
                d[i] = d[i].max(gap);
            }
        }
    }
    let tol = 1e-7 * (1.0 + w.phi(top)?.abs());
    let verdict = if lower > tol { Verdict::FailsAtTruncation } else { bounded_verdict(&d, cfg) };
    Ok(ConditionReport::new(Condition::Sandwich, verdict)
        .with_witness("ell", ell)
        .with_witness("D", d[3])
        .with_witness("lower_violation", lower.max(0.0))
        .with_trace(trace_of(&levels, &d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::ln_factorial;
    use std::f64::consts::E;

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    fn report(rs: &[ConditionReport], c: Condition) -> &ConditionReport {
        rs.iter().find(|r| r.condition == c).unwrap()
    }

    #[test]
    fn omega_examples() {
        let g = WeightSequence::gevrey(1.0, 64);
        assert_eq!(omega_of_sequence(&g, 1.0).unwrap(), 0.0);
        assert!((omega_of_sequence(&g, E).unwrap() - (2.0 - 2f64.ln())).abs() < 1e-12);
        let q = WeightSequence::qgevrey(E, 64).unwrap();
        assert!((omega_of_sequence(&q, E.powi(4)).unwrap() - 4.0).abs() < 1e-12);
        assert!(matches!(omega_of_sequence(&g, 100.0), Err(Error::DomainExceeded { .. })));
    }

    #[test]
    fn minorant_examples() {
        let g = WeightSequence::gevrey(2.0, 32);
        assert_eq!(log_convex_minorant(&g).log_m(), g.log_m());
        let t = WeightSequence::from_logs("t", vec![0.0, 2.0, 1.0, 3.0]).unwrap();
        let lc = log_convex_minorant(&t);
        let want = [0.0, 0.5, 1.0, 3.0];
        for (a, b) in lc.log_m().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn recover_gevrey() {
        let g = WeightSequence::gevrey(1.0, 33);
        let w = WeightFunction::from_sequence(&g);
        let r = recover_sequence(&w, 32, &cfg()).unwrap();
        for j in 0..=32 {
            assert!((r.log_m()[j] - ln_factorial(j)).abs() < 1e-6, "j = {j}");
        }
        assert!(matches!(recover_sequence(&w, 33, &cfg()), Err(Error::ArgmaxOnBoundary { index: 33, .. })));
    }

    #[test]
    fn recover_non_convex_table_gives_minorant() {
        let s = WeightSequence::from_logs("t", vec![0.0, 2.0, 1.0, 3.0, 3.5, 6.0, 9.0]).unwrap();
        let lc = log_convex_minorant(&s);
        let r = recover_sequence(&WeightFunction::from_sequence(&s), 5, &cfg()).unwrap();
        for j in 0..=5 {
            assert!((r.log_m()[j] - lc.log_m()[j]).abs() < 1e-6, "j = {j}");
        }
    }

    #[test]
    fn recover_closed_form_log_square() {
        let w = WeightFunction::log_square(E).unwrap();
        let r = recover_sequence(&w, 10, &cfg()).unwrap();
        for j in 0..=10 {
            assert!((r.log_m()[j] - (j * j) as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn conjugate_examples() {
        let c = cfg();
        let w = WeightFunction::log_square(E).unwrap();
        assert!((legendre_conjugate(&w, 2.0, &c).unwrap() - 4.0).abs() < 1e-9);
        assert_eq!(legendre_conjugate(&w, 0.0, &c).unwrap(), 0.0);
        let lin = WeightFunction::power(1.0).unwrap();
        let x = E * E;
        assert!((legendre_conjugate(&lin, x, &c).unwrap() - x).abs() < 1e-9);
        let table = WeightFunction::tabulated(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 3.0]).unwrap();
        assert!(matches!(legendre_conjugate(&table, 5.0, &c), Err(Error::ArgmaxOnBoundary { .. })));
    }

    #[test]
    fn omega_condition_examples() {
        let c = cfg();
        let ls = check_omega_conditions(&WeightFunction::log_square(E).unwrap(), &c).unwrap();
        assert!(report(&ls, Condition::Alpha0).verdict.is_witnessed());
        assert!(report(&ls, Condition::Omega5).verdict.is_witnessed());
        assert!(report(&ls, Condition::Omega0).verdict.is_witnessed());
        assert!(report(&ls, Condition::Omega4).verdict.is_witnessed());
        assert!(report(&ls, Condition::Omega6).verdict.is_failed());
        let ll = check_omega_conditions(&WeightFunction::linear_log(), &c).unwrap();
        assert!(report(&ll, Condition::Alpha0).verdict.is_failed());
        assert!(report(&ll, Condition::Omega5).verdict.is_failed());
        let sq = check_omega_conditions(&WeightFunction::power(0.5).unwrap().normalized(), &c).unwrap();
        assert!(report(&sq, Condition::Omega6).verdict.is_witnessed());
        assert!(report(&sq, Condition::Omega1).verdict.is_witnessed());
        assert!(report(&sq, Condition::Omega3).verdict.is_witnessed());
    }

    #[test]
    fn power_transform_examples() {
        let g = WeightSequence::gevrey(2.0, 64);
        let (a, b) = power_transform(&g, 2.0, E).unwrap();
        assert!((a - b).abs() < 1e-9);
        let (a, b) = power_transform(&g, 1.0, 3.0).unwrap();
        assert_eq!(a, b);
        assert!((a - omega_of_sequence(&g, 3.0).unwrap()).abs() < 1e-15);
        let q = WeightSequence::qgevrey(E, 64).unwrap();
        let (a, b) = power_transform(&q, 0.5, E.powi(4)).unwrap();
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn log_square_matrix_rows() {
        let q = 1.5f64;
        let spec = AssociatedMatrixSpec::new(WeightFunction::log_square(q).unwrap());
        let om = matrix_from_omega(&spec, &cfg()).unwrap();
        for (ell, row) in spec.ell_grid.iter().zip(om.matrix.rows()) {
            for j in 0..=32 {
                let want = ell * (j * j) as f64 * q.ln();
                assert!((row.log_m()[j] - want).abs() <= 1e-6 * (1.0 + want));
            }
        }
        assert!(om.sandwich.iter().all(|r| r.witness["lower_violation"] < 1e-6));
    }

    #[test]
    fn omega_spec_json() {
        let spec: OmegaSpec =
            serde_json::from_str(r#"{"kind":"closed_form","tag":"power","p":0.5,"normalized":true}"#).unwrap();
        let w = make_weight_function(&spec).unwrap();
        assert!(w.is_normalized());
        assert!((w.eval(4.0).unwrap() - 1.0).abs() < 1e-15);
        let spec: OmegaSpec =
            serde_json::from_str(r#"{"kind":"from_sequence","sequence":{"kind":"gevrey","a":1,"N":16}}"#).unwrap();
        assert!(make_weight_function(&spec).unwrap().log_t_max().is_some());
    }
}
