//! Mittag-Leffler and Laplace-type kernels on sectors, derivative jets at the
//! origin, the `T_M` transform and Faà di Bruno composition of jets.

use std::borrow::Cow;
use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::report::{Condition, ConditionReport, Verdict};
use crate::sequences::{compare_logs, ln_factorial, WeightSequence};

const TERM_EPS: f64 = 1e-14;
const MAX_TERMS: usize = 200_000;

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

/// A point `r e^{iθ}` on the Riemann surface of the logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct SectorPoint {
    pub r: f64,
    pub theta: f64,
}

impl SectorPoint {
    /// `r = 0` stands for the limit at the vertex.
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() || !theta.is_finite() {
            return Err(Error::InvalidInput(format!("bad sector point r={r}, theta={theta}")));
        }
        Ok(SectorPoint { r, theta })
    }

    pub fn from_complex(z: Complex64) -> Self {
        SectorPoint { r: z.norm(), theta: z.arg() }
    }

    /// Projection to the plane.
    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }

    pub fn in_sector(self, alpha: f64) -> bool {
        self.r == 0.0 || self.theta.abs() < alpha * PI / 2.0
    }

    pub fn scaled(self, s: f64) -> Self {
        SectorPoint { r: self.r * s, theta: self.theta }
    }

    fn check(self, alpha: f64) -> Result<()> {
        if self.in_sector(alpha) {
            Ok(())
        } else {
            let z = self.to_complex();
            Err(Error::OutsideSector { re: z.re, im: z.im })
        }
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(z)` for complex `z`; the imaginary part is only defined modulo `2π`.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let pi = Complex64::new(PI, 0.0);
        return pi.ln() - (pi * z).sin().ln() - ln_gamma_complex(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// `ln(1/Γ(x))` as a complex log: real part the log-modulus, imaginary part `0` or `π`.
fn ln_rgamma_real(x: f64) -> Complex64 {
    if x <= 0.0 && x == x.floor() {
        return Complex64::new(f64::NEG_INFINITY, 0.0);
    }
    let (lg, sign) = libm::lgamma_r(x);
    Complex64::new(-lg, if sign < 0 { PI } else { 0.0 })
}

fn ln_rgamma(x: Complex64) -> Complex64 {
    if x.im == 0.0 {
        ln_rgamma_real(x.re)
    } else {
        -ln_gamma_complex(x)
    }
}

fn exp_log(l: Complex64) -> Complex64 {
    if l.re == f64::NEG_INFINITY {
        Complex64::new(0.0, 0.0)
    } else {
        l.exp()
    }
}

/// Sums `Σ_i exp(ln_c(i)) w^i` until three consecutive terms are negligible past `min_index`.
fn sum_series<F: Fn(usize) -> Complex64>(ln_c: F, w: Complex64, min_index: f64) -> Estimate {
    if w == Complex64::new(0.0, 0.0) {
        return Estimate { value: exp_log(ln_c(0)), error: 0.0 };
    }
    let ln_w = w.ln();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut small = 0;
    let mut max_term = 0.0f64;
    let mut tail = 0.0;
    let mut count = 0;
    for i in 0..MAX_TERMS {
        let term = exp_log(ln_c(i) + ln_w * i as f64);
        sum += term;
        count = i + 1;
        let m = term.norm();
        max_term = max_term.max(m);
        if m <= TERM_EPS * sum.norm() {
            small += 1;
            tail += m;
        } else {
            small = 0;
            tail = 0.0;
        }
        if small >= 3 && i as f64 > min_index {
            break;
        }
    }
    let rounding = f64::EPSILON * max_term * (count as f64).sqrt();
    Estimate { value: sum, error: tail + rounding }
}

/// Radius within which the series for `E_{A,B}` is summed directly.
///
/// The largest term grows like `exp(|z|^{1/A})`, so the radius shrinks for `Re A < 1`.
pub fn reliability_radius(a: Complex64, cfg: &RunConfig) -> f64 {
    cfg.z_reliable.powf(a.re.min(1.0))
}

/// `E_{A,B}(z) = Σ z^j / Γ(Aj + B)`.
pub fn mittag_leffler(a: Complex64, b: Complex64, z: Complex64, cfg: &RunConfig) -> Result<Estimate> {
    if !(a.re > 0.0) {
        return Err(Error::InvalidInput(format!("Mittag-Leffler needs Re A > 0, got {a}")));
    }
    let radius = reliability_radius(a, cfg);
    if z.norm() > radius {
        return Err(Error::ReliabilityExceeded { index: 0, modulus: z.norm(), radius });
    }
    let min_index = 2.0 * z.norm().powf(1.0 / a.re);
    Ok(sum_series(|j| ln_rgamma(a * j as f64 + b), z, min_index))
}

fn check_alpha_e(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::InvalidInput(format!("the Mittag-Leffler kernel needs 0 < alpha < 2, got {alpha}")));
    }
    Ok(())
}

/// `Ẽ_α^{(n)}(z)` from the term-wise differentiated series of `E_{2-α,4-α}(-z)`.
pub fn e_alpha(alpha: f64, z: SectorPoint, n: usize, cfg: &RunConfig) -> Result<Estimate> {
    check_alpha_e(alpha)?;
    z.check(alpha)?;
    let a = 2.0 - alpha;
    let b = 4.0 - alpha;
    let radius = reliability_radius(Complex64::new(a, 0.0), cfg);
    if z.r > radius {
        return Err(Error::ReliabilityExceeded { index: n, modulus: z.r, radius });
    }
    // Σ_i (-1)^n (i+n)!/i! (-z)^i / Γ(a(i+n) + b)
    let sign = if n % 2 == 1 { PI } else { 0.0 };
    let ln_c = |i: usize| {
        let j = i + n;
        let falling = ln_factorial(j) - ln_factorial(i);
        ln_rgamma_real(a * j as f64 + b) + Complex64::new(falling, sign)
    };
    let min_index = 2.0 * z.r.powf(1.0 / a);
    Ok(sum_series(ln_c, -z.to_complex(), min_index))
}

/// Where a jet came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JetSource {
    MittagLeffler { alpha: f64 },
    LaplaceG { alpha: f64, alpha_prime: f64 },
    Transformed { base: Box<JetSource>, sequence: String },
    Composed,
    Table,
}

/// Derivatives `f^{(j)}(0)`, `j = 0..=N`, stored as log-modulus and unit phase so
/// that very large or small values survive.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    source: JetSource,
    log_abs: Vec<f64>,
    phase: Vec<Complex64>,
}

impl Jet {
    pub fn from_values(values: &[Complex64], source: JetSource) -> Result<Self> {
        if values.is_empty() || !values[0].re.is_finite() || !values[0].im.is_finite() {
            return Err(Error::InvalidInput("a jet needs a finite value at order 0".into()));
        }
        let mut log_abs = Vec::with_capacity(values.len());
        let mut phase = Vec::with_capacity(values.len());
        for v in values {
            let m = v.norm();
            if m == 0.0 {
                log_abs.push(f64::NEG_INFINITY);
                phase.push(Complex64::new(0.0, 0.0));
            } else {
                log_abs.push(m.ln());
                phase.push(v / m);
            }
        }
        Ok(Jet { source, log_abs, phase })
    }

    /// Real jet from `ln|f^{(j)}(0)|` and signs (`0` marks a vanishing derivative).
    pub fn from_logs(log_abs: Vec<f64>, signs: &[f64], source: JetSource) -> Result<Self> {
        if log_abs.len() != signs.len() || log_abs.is_empty() {
            return Err(Error::InvalidInput("log_abs and signs must have equal nonzero length".into()));
        }
        let mut out = Jet { source, log_abs, phase: Vec::with_capacity(signs.len()) };
        for (j, &s) in signs.iter().enumerate() {
            if s == 0.0 {
                out.log_abs[j] = f64::NEG_INFINITY;
                out.phase.push(Complex64::new(0.0, 0.0));
            } else {
                out.phase.push(Complex64::new(s.signum(), 0.0));
            }
        }
        if out.log_abs[0] == f64::INFINITY || out.log_abs[0].is_nan() {
            return Err(Error::InvalidInput("a jet needs a finite value at order 0".into()));
        }
        Ok(out)
    }

    pub fn source(&self) -> &JetSource {
        &self.source
    }

    /// Highest derivative order `N`.
    pub fn order(&self) -> usize {
        self.log_abs.len() - 1
    }

    pub fn log_abs(&self) -> &[f64] {
        &self.log_abs
    }

    pub fn deriv(&self, j: usize) -> Complex64 {
        if self.log_abs[j] == f64::NEG_INFINITY {
            Complex64::new(0.0, 0.0)
        } else {
            self.phase[j] * self.log_abs[j].exp()
        }
    }

    pub fn derivs(&self) -> Vec<Complex64> {
        (0..=self.order()).map(|j| self.deriv(j)).collect()
    }

    pub fn zero_indices(&self) -> Vec<usize> {
        (0..=self.order()).filter(|&j| self.log_abs[j] == f64::NEG_INFINITY).collect()
    }

    pub fn truncated(&self, n: usize) -> Jet {
        let k = (n + 1).min(self.log_abs.len());
        Jet { source: self.source.clone(), log_abs: self.log_abs[..k].to_vec(), phase: self.phase[..k].to_vec() }
    }
}

impl Serialize for Jet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Jet", 3)?;
        st.serialize_field("source", &self.source)?;
        st.serialize_field("derivs", &self.derivs())?;
        st.serialize_field("log_abs", &self.log_abs)?;
        st.end()
    }
}

/// `Ẽ_α^{(n)}(0) = (-1)^n n! / Γ((2-α)(n+1) + 2)`.
pub fn e_alpha_jet(alpha: f64, n: usize) -> Result<Jet> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidInput(format!("jet formula needs 0 < alpha <= 1, got {alpha}")));
    }
    let logs = (0..=n).map(|j| ln_factorial(j) - libm::lgamma((2.0 - alpha) * (j + 1) as f64 + 2.0)).collect();
    let signs: Vec<f64> = (0..=n).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
    Jet::from_logs(logs, &signs, JetSource::MittagLeffler { alpha })
}

/// `2 n! e^n / n^{(2-α)n}` in log form, with `0^0 = 1`.
pub fn ln_e_alpha_bound(alpha: f64, n: usize) -> f64 {
    let x = n as f64;
    let pow = if n == 0 { 0.0 } else { (2.0 - alpha) * x * x.ln() };
    LN_2 + ln_factorial(n) + x - pow
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSample {
    pub n: usize,
    pub point: SectorPoint,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub alpha: f64,
    pub verdict: Verdict,
    pub max_ratio: f64,
    pub samples: Vec<BoundSample>,
}

/// Checks `|Ẽ_α^{(n)}(z)| <= 2 n! e^n / n^{(2-α)n}` at every sample and `n <= n_max`.
pub fn e_alpha_bound_check(alpha: f64, n_max: usize, points: &[SectorPoint], cfg: &RunConfig) -> Result<BoundCheck> {
    let mut samples = Vec::new();
    let mut max_ratio = 0.0f64;
    for n in 0..=n_max {
        for &p in points {
            let v = e_alpha(alpha, p, n, cfg)?;
            let ratio = (v.value.norm().ln() - ln_e_alpha_bound(alpha, n)).exp();
            max_ratio = max_ratio.max(ratio);
            samples.push(BoundSample { n, point: p, ratio });
        }
    }
    Ok(BoundCheck { alpha, verdict: Verdict::exact(max_ratio <= 1.0 + 1e-9), max_ratio, samples })
}

fn check_g_params(alpha: f64, alpha_prime: f64) -> Result<()> {
    if !(alpha > 1.0 && alpha_prime > alpha && alpha_prime.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "the Laplace kernel needs 1 < alpha < alpha', got alpha={alpha}, alpha'={alpha_prime}"
        )));
    }
    Ok(())
}

/// `g^{(n)}(0) = (-1)^n Γ((α'-1)n + 1)`.
pub fn g_alpha_jet(alpha: f64, alpha_prime: f64, n: usize) -> Result<Jet> {
    check_g_params(alpha, alpha_prime)?;
    let logs = (0..=n).map(|j| libm::lgamma((alpha_prime - 1.0) * j as f64 + 1.0)).collect();
    let signs: Vec<f64> = (0..=n).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
    Jet::from_logs(logs, &signs, JetSource::LaplaceG { alpha, alpha_prime })
}

/// Ray direction for the integral: the midpoint of the admissible interval.
///
/// Needs `|θ - (α'-1)φ| < π/2` and `|φ| < (α-1)π / (2(α'-1))`.
pub fn g_ray_angle(alpha: f64, alpha_prime: f64, theta: f64) -> Result<f64> {
    let s = alpha_prime - 1.0;
    let c = (alpha - 1.0) * PI / (2.0 * s);
    let lo = ((theta - PI / 2.0) / s).max(-c);
    let hi = ((theta + PI / 2.0) / s).min(c);
    if !(lo < hi) {
        return Err(Error::AdmissibilityFailed { arg: theta });
    }
    Ok(0.5 * (lo + hi))
}

struct Simpson<'a> {
    f: &'a dyn Fn(f64) -> Complex64,
    err: f64,
    evals: usize,
}

impl Simpson<'_> {
    #[allow(clippy::too_many_arguments)]
    fn step(
        &mut self,
        a: f64,
        b: f64,
        fa: Complex64,
        fm: Complex64,
        fb: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Complex64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = ((self.f)(lm), (self.f)(rm));
        self.evals += 2;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.norm() <= 15.0 * tol {
            self.err += delta.norm() / 15.0;
            return left + right + delta / 15.0;
        }
        self.step(a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + self.step(m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }

    fn integrate(&mut self, a: f64, b: f64, tol: f64) -> Complex64 {
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = ((self.f)(a), (self.f)(m), (self.f)(b));
        self.evals += 3;
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        self.step(a, b, fa, fm, fb, whole, tol, 48)
    }
}

/// `g_{α,α'}^{(n)}(z)` by adaptive Simpson along the ray `arg v = -φ`.
pub fn g_alpha_eval(alpha: f64, alpha_prime: f64, z: SectorPoint, n: usize, cfg: &RunConfig) -> Result<Estimate> {
    check_g_params(alpha, alpha_prime)?;
    if n > 16 {
        return Err(Error::InvalidInput(format!("derivative order {n} above 16")));
    }
    z.check(alpha)?;
    let s = alpha_prime - 1.0;
    let phi = if z.r == 0.0 { 0.0 } else { g_ray_angle(alpha, alpha_prime, z.theta)? };
    let c = phi.cos();
    let k = s * n as f64;
    let scale = (libm::lgamma(k + 1.0) - (k + 1.0) * c.ln()).exp().max(1.0);
    let tol = 1e-3 * cfg.epsilon * scale;
    // Tail beyond R is at most R^k e^{-cR} 2/c once R >= 2k/c.
    let mut big_r = (2.0 * k / c).max(1.0);
    while k * big_r.ln() - c * big_r + (2.0 / c).ln() > tol.ln() {
        big_r *= 1.25;
    }
    let tail = (k * big_r.ln() - c * big_r + (2.0 / c).ln()).exp();
    let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
    let rot_v = Complex64::from_polar(1.0, -phi);
    let rot_zv = Complex64::from_polar(z.r, z.theta - s * phi);
    let rot_pow = Complex64::from_polar(1.0, -(n as f64) * s * phi);
    let f = move |r: f64| -> Complex64 {
        if r == 0.0 {
            return if n == 0 { rot_v } else { Complex64::new(0.0, 0.0) };
        }
        let rs = r.powf(s);
        let ln_mod = k * r.ln();
        let e = -rot_zv * rs - rot_v * r;
        sign * rot_pow * rot_v * (e + ln_mod).exp()
    };
    let panels = (big_r.ceil() as usize).clamp(16, 4096);
    let width = big_r / panels as f64;
    let mut quad = Simpson { f: &f, err: 0.0, evals: 0 };
    let mut sum = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let a = p as f64 * width;
        sum += quad.integrate(a, a + width, tol / panels as f64);
    }
    Ok(Estimate { value: sum, error: quad.err + tail })
}

/// A function on a sector that `transform_eval` can sample.
pub trait SectorFunction: Sync {
    fn eval(&self, z: SectorPoint, cfg: &RunConfig) -> Result<Complex64>;
    /// Upper bound for `|f|` on the sector.
    fn sup_bound(&self) -> f64;
    /// Largest modulus at which `eval` is trusted.
    fn radius(&self, cfg: &RunConfig) -> f64;
    fn label(&self) -> String;
}

pub struct ConstantFn(pub Complex64);

impl SectorFunction for ConstantFn {
    fn eval(&self, _z: SectorPoint, _cfg: &RunConfig) -> Result<Complex64> {
        Ok(self.0)
    }
    fn sup_bound(&self) -> f64 {
        self.0.norm()
    }
    fn radius(&self, _cfg: &RunConfig) -> f64 {
        f64::INFINITY
    }
    fn label(&self) -> String {
        format!("const {}", self.0)
    }
}

pub struct EAlphaFn {
    pub alpha: f64,
}

impl SectorFunction for EAlphaFn {
    fn eval(&self, z: SectorPoint, cfg: &RunConfig) -> Result<Complex64> {
        Ok(e_alpha(self.alpha, z, 0, cfg)?.value)
    }
    fn sup_bound(&self) -> f64 {
        2.0
    }
    fn radius(&self, cfg: &RunConfig) -> f64 {
        reliability_radius(Complex64::new(2.0 - self.alpha, 0.0), cfg)
    }
    fn label(&self) -> String {
        format!("E~_{}", self.alpha)
    }
}

pub struct GAlphaFn {
    pub alpha: f64,
    pub alpha_prime: f64,
}

impl SectorFunction for GAlphaFn {
    fn eval(&self, z: SectorPoint, cfg: &RunConfig) -> Result<Complex64> {
        Ok(g_alpha_eval(self.alpha, self.alpha_prime, z, 0, cfg)?.value)
    }
    fn sup_bound(&self) -> f64 {
        1.0 / ((self.alpha - 1.0) * PI / (2.0 * (self.alpha_prime - 1.0))).cos()
    }
    fn radius(&self, _cfg: &RunConfig) -> f64 {
        f64::INFINITY
    }
    fn label(&self) -> String {
        format!("g_{},{}", self.alpha, self.alpha_prime)
    }
}

/// `M` with at least `n` terms, extending closed forms.
fn with_terms(m: &WeightSequence, n: usize) -> Result<Cow<'_, WeightSequence>> {
    if m.n() >= n {
        Ok(Cow::Borrowed(m))
    } else if m.closed_form().is_some() {
        Ok(Cow::Owned(m.resized(n)?))
    } else {
        Err(Error::TruncationInsufficient { needed: n, available: m.n() })
    }
}

fn require_lc(m: &WeightSequence) -> Result<()> {
    match m.lc_violation() {
        Some(j) => Err(Error::NotLogConvex { index: j }),
        None => Ok(()),
    }
}

/// Log-sum-exp with terms added in descending order.
fn log_sum_desc(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| b.total_cmp(a));
    let top = v[0];
    if top == f64::NEG_INFINITY {
        return top;
    }
    let mut s = 0.0;
    for x in v {
        s += (x - top).exp();
    }
    top + s.ln()
}

/// `ln R_j` for `j = 0..=j_max`, with `R_j = Σ_n 2^{-n} (M_n / m_n^n) m_n^j`.
///
/// The sum stops at `J = j + ⌈log2(1/ε)⌉`; the dropped tail is at most `ε 2^{-j} M_j`.
pub fn r_coefficients(m: &WeightSequence, j_max: usize, eps: f64) -> Result<Vec<f64>> {
    require_lc(m)?;
    let extra = (1.0 / eps).log2().ceil().max(0.0) as usize;
    let m = with_terms(m, j_max + extra + 1)?;
    let lm = m.log_m();
    let lq = m.quotients();
    Ok((0..=j_max)
        .map(|j| {
            let terms = (0..=j + extra)
                .map(|n| -(n as f64) * LN_2 + lm[n] + (j as f64 - n as f64) * lq[n])
                .collect();
            log_sum_desc(terms)
        })
        .collect())
}

/// Multiplies the jet by `R_j`.
pub fn transform_jet(f: &Jet, m: &WeightSequence, cfg: &RunConfig) -> Result<Jet> {
    let r = r_coefficients(m, f.order(), cfg.epsilon)?;
    let log_abs = f.log_abs.iter().zip(&r).map(|(a, b)| a + b).collect();
    Ok(Jet {
        source: JetSource::Transformed { base: Box::new(f.source.clone()), sequence: m.label().to_string() },
        log_abs,
        phase: f.phase.clone(),
    })
}

/// `T_M(f)(z) = Σ_j 2^{-j} (M_j / m_j^j) f(m_j z)`, truncated where the tail is below `ε`.
pub fn transform_eval(f: &dyn SectorFunction, m: &WeightSequence, z: SectorPoint, cfg: &RunConfig) -> Result<Estimate> {
    require_lc(m)?;
    let bound = f.sup_bound();
    let last = if bound > 0.0 { (bound / cfg.epsilon).log2().ceil().max(0.0) as usize } else { 0 };
    let m = with_terms(m, last + 1)?;
    let lm = m.log_m();
    let lq = m.quotients();
    let radius = f.radius(cfg);
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..=last {
        let scale = lq[j].exp();
        let arg = z.scaled(scale);
        if arg.r > radius {
            return Err(Error::ReliabilityExceeded { index: j, modulus: arg.r, radius });
        }
        let weight = (-(j as f64) * LN_2 + lm[j] - j as f64 * lq[j]).exp();
        sum += weight * f.eval(arg, cfg)?;
    }
    Ok(Estimate { value: sum, error: bound * 0.5f64.powi(last as i32) })
}

/// Outcome of the characteristic-function criteria for a jet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacteristicReport {
    /// `(|f^{(j)}(0)|)_j ≈ L`.
    pub condition1: ConditionReport,
    /// `(C_n(f))_n ≈ L`, when bounds were supplied.
    pub condition2: Option<ConditionReport>,
    /// Verdict for "characteristic", only ever inferred from (1) or (2).
    pub characteristic: Verdict,
    pub zero_derivatives: Vec<usize>,
    pub notes: Vec<String>,
}

/// Equivalence of a log table against `L`, skipping the given indices.
fn equivalence_skipping(a: &[f64], l: &[f64], skip: &[usize], condition: Condition, cfg: &RunConfig) -> ConditionReport {
    let n = (a.len().min(l.len())) - 1;
    let mut fwd = a[..=n].to_vec();
    let mut bwd = a[..=n].to_vec();
    for &j in skip.iter().filter(|&&j| j <= n) {
        fwd[j] = f64::NEG_INFINITY;
        bwd[j] = f64::INFINITY;
    }
    let pre = compare_logs(&fwd, &l[..=n], cfg);
    let suc = compare_logs(&l[..=n], &bwd, cfg);
    let trace = pre
        .trace
        .iter()
        .zip(&suc.trace)
        .map(|(p, q)| crate::report::TracePoint { truncation: p.truncation, value: p.value.max(q.value) })
        .collect();
    ConditionReport::new(condition, pre.verdict.and(suc.verdict))
        .with_witness("ln_A_forward", pre.last_value())
        .with_witness("ln_A_backward", suc.last_value())
        .with_trace(trace)
}

pub fn check_characteristic_criteria(
    f: &Jet,
    l: &WeightSequence,
    c_bounds: Option<&[f64]>,
    cfg: &RunConfig,
) -> Result<CharacteristicReport> {
    let zeros = f.zero_indices();
    let mut notes = Vec::new();
    if !zeros.is_empty() {
        notes.push(format!("zero derivative at orders {zeros:?}; skipped in the comparison"));
    }
    let condition1 = equivalence_skipping(&f.log_abs, l.log_m(), &zeros, Condition::Characteristic1, cfg);
    let condition2 = match c_bounds {
        Some(c) => {
            let logs: Vec<f64> = c.iter().map(|v| v.ln()).collect();
            let skip: Vec<usize> = (0..logs.len()).filter(|&j| logs[j] == f64::NEG_INFINITY).collect();
            Some(equivalence_skipping(&logs, l.log_m(), &skip, Condition::Characteristic2, cfg))
        }
        None => None,
    };
    let characteristic = if condition1.verdict.is_witnessed()
        || condition2.as_ref().is_some_and(|r| r.verdict.is_witnessed())
    {
        Verdict::WitnessedUpToN
    } else {
        notes.push("no criterion witnessed; the characteristic property is not decided".into());
        Verdict::Undetermined
    };
    Ok(CharacteristicReport { condition1, condition2, characteristic, zero_derivatives: zeros, notes })
}

/// Partitions of `n` as multiplicity vectors `k[i]` = number of parts equal to `i`.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max_part: usize, k: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(k.clone());
            return;
        }
        for p in (1..=max_part.min(rest)).rev() {
            k[p] += 1;
            go(rest - p, p, k, out);
            k[p] -= 1;
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut vec![0; n + 1], &mut out);
    out
}

pub const MAX_FDB_ORDER: usize = 24;

/// `Σ k!/(k_1!⋯k_n!)` over all `(k_i)` with `Σ i k_i = n`.
pub fn multinomial_mass(n: usize) -> f64 {
    partitions(n)
        .iter()
        .map(|k| {
            let total: usize = k.iter().sum();
            (ln_factorial(total) - k.iter().map(|&x| ln_factorial(x)).sum::<f64>()).exp().round()
        })
        .sum()
}

/// Jet of `g ∘ f` at `0`, where `g`'s jet is taken at `f(0)`.
pub fn faa_di_bruno_compose(g: &Jet, f: &Jet, n_max: usize) -> Result<Jet> {
    if n_max > MAX_FDB_ORDER {
        return Err(Error::InvalidInput(format!("composition order {n_max} above {MAX_FDB_ORDER}")));
    }
    if f.order() < n_max || g.order() < n_max {
        return Err(Error::TruncationInsufficient { needed: n_max, available: f.order().min(g.order()) });
    }
    let fd = f.derivs();
    let gd = g.derivs();
    let mut out = vec![gd[0]];
    for n in 1..=n_max {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in partitions(n) {
            let total: usize = k.iter().sum();
            let ln_coef = ln_factorial(n) - k.iter().map(|&x| ln_factorial(x)).sum::<f64>();
            let mut prod = gd[total] * ln_coef.exp();
            for (i, &ki) in k.iter().enumerate().skip(1) {
                if ki > 0 {
                    prod *= (fd[i] / (ln_factorial(i).exp())).powu(ki as u32);
                }
            }
            acc += prod;
        }
        out.push(acc);
    }
    Jet::from_values(&out, JetSource::Composed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertificateBasis {
    JetOnly,
    SampledSup,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipCertificate {
    pub sequence: String,
    pub h: f64,
    pub norm: f64,
    pub basis: CertificateBasis,
    /// Verdict of `(|f^{(j)}|) ⪯ M` that precedes the scan.
    pub evidence: Verdict,
    pub notes: Vec<String>,
}

/// Largest norm accepted by the certificate scan.
pub const NORM_CAP: f64 = 1e6;

/// `max_j b_j / (h^j M_j)` from log values.
fn log_norm(log_b: &[f64], lm: &[f64], h: f64) -> f64 {
    let lh = h.ln();
    log_b
        .iter()
        .zip(lm)
        .enumerate()
        .map(|(j, (b, m))| b - j as f64 * lh - m)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Smallest `h = 2^{k/4}` on a fixed grid with `‖f‖_{M,h} <= NORM_CAP`.
///
/// `log_bounds` are `ln |f^{(j)}(0)|` (jet basis) or `ln C_j(f)` (sampled basis).
pub fn membership_from_logs(
    log_bounds: &[f64],
    m: &WeightSequence,
    basis: CertificateBasis,
    cfg: &RunConfig,
) -> Result<MembershipCertificate> {
    let n = (log_bounds.len().min(m.n() + 1)) - 1;
    let lm = &m.log_m()[..=n];
    let b = &log_bounds[..=n];
    let mut notes = Vec::new();
    let trend = compare_logs(b, lm, cfg);
    if trend.verdict.is_failed() {
        return Err(Error::NoFiniteH);
    }
    if !trend.verdict.is_witnessed() {
        notes.push("growth comparison undetermined at this truncation".into());
    }
    if basis == CertificateBasis::JetOnly {
        notes.push("jet values at the vertex only: necessary-condition evidence".into());
    } else {
        notes.push("sampled sup estimates under-estimate true sups".into());
    }
    for k in -40..=80 {
        let h = 2f64.powf(k as f64 / 4.0);
        let ln = log_norm(b, lm, h);
        if ln <= NORM_CAP.ln() {
            return Ok(MembershipCertificate {
                sequence: m.label().to_string(),
                h,
                norm: ln.exp(),
                basis,
                evidence: trend.verdict,
                notes,
            });
        }
    }
    Err(Error::NoFiniteH)
}

pub fn membership_certificate(f: &Jet, m: &WeightSequence, cfg: &RunConfig) -> Result<MembershipCertificate> {
    membership_from_logs(&f.log_abs, m, CertificateBasis::JetOnly, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GornyCartanRow {
    pub n1: usize,
    pub n: usize,
    pub n2: usize,
    /// `ln B_n`.
    pub lhs: f64,
    /// `ln (A q^{(1-α)n} B_{n1}^{θ} B_{n2}^{1-θ})`.
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GornyCartanReport {
    pub alpha: f64,
    pub a: f64,
    pub q: f64,
    pub rows: Vec<GornyCartanRow>,
    pub skipped: Vec<(usize, usize, usize)>,
    pub notes: Vec<String>,
}

/// Constants `(A, q)` of the interpolation inequality.
pub fn gorny_cartan_constants(alpha: f64) -> (f64, f64) {
    if alpha == 1.0 {
        (4.0, 1.0)
    } else {
        (8.0 * PI, 2.0 * std::f64::consts::E * (2.0 - alpha) / (1.0 - alpha))
    }
}

/// Evaluates the interpolation inequality on caller-supplied sup estimates `C_n`.
pub fn gorny_cartan_diagnostic(c: &[f64], alpha: f64, triples: &[(usize, usize, usize)]) -> Result<GornyCartanReport> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidInput(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let (a, q) = gorny_cartan_constants(alpha);
    let ln_b = |n: usize| {
        let x = n as f64;
        let pow = if n == 0 { 0.0 } else { (1.0 - alpha) * x * x.ln() };
        pow + c[n].ln()
    };
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &(n1, n, n2) in triples {
        if !(n1 < n && n < n2) || n2 >= c.len() {
            return Err(Error::InvalidInput(format!("bad triple ({n1}, {n}, {n2})")));
        }
        if [n1, n, n2].iter().any(|&i| !(c[i] > 0.0)) {
            skipped.push((n1, n, n2));
            continue;
        }
        let theta = (n2 - n) as f64 / (n2 - n1) as f64;
        let lhs = ln_b(n);
        let rhs = a.ln() + (1.0 - alpha) * n as f64 * q.ln() + theta * ln_b(n1) + (1.0 - theta) * ln_b(n2);
        rows.push(GornyCartanRow { n1, n, n2, lhs, rhs, margin: rhs - lhs });
    }
    Ok(GornyCartanReport {
        alpha,
        a,
        q,
        rows,
        skipped,
        notes: vec!["diagnostic only: sampled sups under-estimate both sides".into()],
    })
}
