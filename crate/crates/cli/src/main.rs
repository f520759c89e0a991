mod specs;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use weightcalc::analytic::{
    check_characteristic_criteria, e_alpha, e_alpha_bound_check, e_alpha_jet, g_alpha_eval, g_alpha_jet,
    membership_certificate, transform_eval, transform_jet, EAlphaFn, GAlphaFn, SectorFunction,
};
use weightcalc::indices::{gamma_omega, gamma_sequence};
use weightcalc::matrices::{build_m_alpha, check_matrix_condition, make_matrix, MatrixCondition};
use weightcalc::sequences::{check_condition, compare};
use weightcalc::stability::{
    classify_matrix, classify_omega, demo_qgevrey, gevrey_map, range_grid, GevreyMap, StabilityClass,
};
use weightcalc::weights::{
    check_omega_conditions, legendre_conjugate, log_convex_minorant, make_weight_function, matrix_from_omega,
    recover_sequence, AssociatedMatrixSpec,
};
use weightcalc::{make_sequence, Condition, Jet, MatrixSpec, OmegaSpec, RunConfig, SectorPoint, SequenceSpec};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Json(String),
    Run(anyhow::Error),
}

impl From<weightcalc::Error> for CliError {
    fn from(e: weightcalc::Error) -> Self {
        CliError::Run(e.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Run(e.into())
    }
}

type Outcome = Result<ExitCode, CliError>;

/// Numerics for weight sequences, weight functions, weight matrices and
/// ultraholomorphic stability on sectors.
#[derive(Parser)]
#[command(name = "weightcalc", version)]
struct Cli {
    /// key=value file overriding numerical defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Single override, e.g. --set n=128. Applied after --config.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Write the artifact here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weight sequences.
    #[command(subcommand)]
    Seq(SeqCmd),
    /// Weight functions.
    #[command(subcommand)]
    Omega(OmegaCmd),
    /// Growth indices.
    #[command(subcommand)]
    Index(IndexCmd),
    /// Weight matrices.
    #[command(subcommand)]
    Matrix(MatrixCmd),
    /// Characteristic functions and the transform.
    #[command(subcommand)]
    Char(CharCmd),
    /// Stability verdict for a matrix or a weight function on a sector.
    Classify(ClassifyArgs),
    /// Stability maps.
    #[command(subcommand)]
    Map(MapCmd),
    /// The q-Gevrey worked example.
    DemoQgevrey {
        #[arg(long, default_value_t = 1.5)]
        q: f64,
    },
    /// The Gevrey (α, β) figure on its default grid.
    DemoGevreyFigure {
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        out: Format,
    },
}

#[derive(Args)]
struct SeqInput {
    /// JSON sequence description.
    file: Option<PathBuf>,
    /// Shorthand such as gevrey:2, gevrey-bar:1.5:128 or qgevrey:1.5.
    #[arg(long)]
    spec: Option<String>,
}

#[derive(Args)]
struct OmegaInput {
    /// JSON weight-function description.
    file: Option<PathBuf>,
    /// Shorthand such as log-square:1.5, power:0.5 or linear-log.
    #[arg(long)]
    spec: Option<String>,
    /// Use ω(t) - ω(1) (only with --spec).
    #[arg(long)]
    normalized: bool,
}

#[derive(Args)]
struct MatrixInput {
    /// JSON matrix description.
    file: Option<PathBuf>,
    /// Shorthand such as power-family:1.5, constant:gevrey-bar:2 or omega:log-square:1.5.
    #[arg(long)]
    spec: Option<String>,
}

#[derive(Subcommand)]
enum SeqCmd {
    /// Condition reports (all sequence conditions unless --cond is given).
    Check {
        #[command(flatten)]
        input: SeqInput,
        #[arg(long = "cond", value_delimiter = ',')]
        conds: Vec<String>,
    },
    /// The log-convex minorant.
    Minorant {
        #[command(flatten)]
        input: SeqInput,
    },
    /// Both directions of ⪯ against a second sequence.
    Compare {
        #[command(flatten)]
        input: SeqInput,
        /// Shorthand for the second sequence.
        #[arg(long)]
        other: String,
    },
}

#[derive(Subcommand)]
enum OmegaCmd {
    /// Reports for (ω0)..(ω6) and (α0).
    Check {
        #[command(flatten)]
        input: OmegaInput,
    },
    /// `sup_t (j ln t - ω(t))` for j = 0..=n.
    Recover {
        #[command(flatten)]
        input: OmegaInput,
        #[arg(long)]
        n: Option<usize>,
    },
    /// The conjugate φ*(x).
    Conjugate {
        #[command(flatten)]
        input: OmegaInput,
        #[arg(long)]
        x: f64,
    },
    /// The associated matrix and its sandwich reports.
    Matrix {
        #[command(flatten)]
        input: OmegaInput,
    },
}

#[derive(Subcommand)]
enum IndexCmd {
    /// Growth index of a log-convex sequence.
    GammaM {
        #[command(flatten)]
        input: SeqInput,
    },
    /// Growth index of a weight function.
    GammaOmega {
        #[command(flatten)]
        input: OmegaInput,
    },
}

#[derive(Subcommand)]
enum MatrixCmd {
    /// Matrix condition reports (all unless --cond is given).
    Check {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long = "cond", value_delimiter = ',')]
        conds: Vec<String>,
    },
    /// The regularized matrix for a narrow sector.
    MAlpha {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long)]
        alpha: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kernel {
    /// The Mittag-Leffler kernel, 0 < α < 2.
    E,
    /// The Laplace-type kernel, 1 < α < α'.
    G,
}

#[derive(Args)]
struct KernelArgs {
    #[arg(long, value_enum, default_value_t = Kernel::E)]
    kernel: Kernel,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    alpha_prime: Option<f64>,
}

impl KernelArgs {
    fn alpha_prime(&self) -> Result<f64, CliError> {
        self.alpha_prime.ok_or_else(|| CliError::Usage("the g kernel needs --alpha-prime".into()))
    }

    fn jet(&self, n: usize) -> Result<Jet, CliError> {
        Ok(match self.kernel {
            Kernel::E => e_alpha_jet(self.alpha, n)?,
            Kernel::G => g_alpha_jet(self.alpha, self.alpha_prime()?, n)?,
        })
    }

    fn function(&self) -> Result<Box<dyn SectorFunction>, CliError> {
        Ok(match self.kernel {
            Kernel::E => Box::new(EAlphaFn { alpha: self.alpha }),
            Kernel::G => Box::new(GAlphaFn { alpha: self.alpha, alpha_prime: self.alpha_prime()? }),
        })
    }
}

#[derive(Subcommand)]
enum CharCmd {
    /// Derivatives at the vertex.
    Jet {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// Jet of the transform by a sequence, with the characteristic criteria when --target is given.
    Transform {
        #[command(flatten)]
        kernel: KernelArgs,
        /// Shorthand for the transforming sequence.
        #[arg(long)]
        seq: String,
        /// Shorthand for the sequence the transformed derivatives are compared with.
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
    /// Value (or n-th derivative) at z = r e^{iθ}; with --seq the transformed function.
    Eval {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long)]
        seq: Option<String>,
    },
    /// Checks the derivative bound of the Mittag-Leffler kernel on sample points.
    BoundCheck {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 1.0, 5.0])]
        r: Vec<f64>,
        /// Arguments in radians.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.0])]
        theta: Vec<f64>,
    },
}

#[derive(Args)]
struct ClassifyArgs {
    /// JSON matrix description.
    #[arg(long, group = "source")]
    matrix: Option<PathBuf>,
    /// Matrix shorthand.
    #[arg(long, group = "source")]
    matrix_spec: Option<String>,
    /// JSON weight-function description.
    #[arg(long, group = "source")]
    omega: Option<PathBuf>,
    /// Weight-function shorthand (normalized automatically).
    #[arg(long, group = "source")]
    omega_spec: Option<String>,
    /// Opening of the sector S_α.
    #[arg(long)]
    alpha: f64,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum MapCmd {
    /// The (α, β) plane for the classes of Gbar^β.
    Gevrey {
        #[arg(long, default_value = "0.05:3.5:0.05", allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value = "-2:3:0.05", allow_hyphen_values = true)]
        beta: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        out: Format,
    },
}

struct Ctx {
    cfg: RunConfig,
    output: Option<PathBuf>,
}

impl Ctx {
    fn emit_text(&self, text: &str) -> Result<(), CliError> {
        match &self.output {
            Some(p) => std::fs::write(p, text)?,
            None => std::io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn emit<T: Serialize>(&self, command: &str, result: &T) -> Result<(), CliError> {
        let doc = json!({ "command": command, "config": self.cfg, "result": result });
        let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Run(e.into()))?;
        text.push('\n');
        self.emit_text(&text)
    }

    fn sequence(&self, input: &SeqInput) -> Result<SequenceSpec, CliError> {
        match (&input.file, &input.spec) {
            (Some(f), None) => specs::read_json(f),
            (None, Some(s)) => specs::sequence_shorthand(s, self.cfg.n),
            _ => Err(CliError::Usage("give either a JSON file or --spec".into())),
        }
    }

    fn omega(&self, input: &OmegaInput) -> Result<OmegaSpec, CliError> {
        match (&input.file, &input.spec) {
            (Some(f), None) => specs::read_json(f),
            (None, Some(s)) => specs::omega_shorthand(s, input.normalized),
            _ => Err(CliError::Usage("give either a JSON file or --spec".into())),
        }
    }

    fn matrix(&self, file: Option<&Path>, spec: Option<&str>) -> Result<MatrixSpec, CliError> {
        match (file, spec) {
            (Some(f), None) => specs::read_json(f),
            (None, Some(s)) => specs::matrix_shorthand(s, self.cfg.n, &self.cfg.ell_grid),
            _ => Err(CliError::Usage("give either a JSON file or --spec".into())),
        }
    }

    fn shorthand_sequence(&self, s: &str) -> Result<weightcalc::WeightSequence, CliError> {
        Ok(make_sequence(&specs::sequence_shorthand(s, self.cfg.n)?)?)
    }
}

const SEQUENCE_CONDITIONS: [Condition; 8] = [
    Condition::Lc,
    Condition::Slc,
    Condition::Normalized,
    Condition::Mg,
    Condition::Dc,
    Condition::Rai,
    Condition::Fdb,
    Condition::LimitMjInfinity,
];

const MATRIX_CONDITIONS: [MatrixCondition; 8] = [
    MatrixCondition::Sc,
    MatrixCondition::Lc,
    MatrixCondition::Comega,
    MatrixCondition::H,
    MatrixCondition::Rai,
    MatrixCondition::Fdb,
    MatrixCondition::Mg,
    MatrixCondition::Dc,
];

fn run_seq(ctx: &Ctx, cmd: SeqCmd) -> Outcome {
    match cmd {
        SeqCmd::Check { input, conds } => {
            let s = make_sequence(&ctx.sequence(&input)?)?;
            let which = if conds.is_empty() {
                SEQUENCE_CONDITIONS.to_vec()
            } else {
                conds.iter().map(|c| specs::condition(c)).collect::<Result<_, _>>()?
            };
            let reports = which.iter().map(|&c| check_condition(&s, c, &ctx.cfg)).collect::<Result<Vec<_>, _>>()?;
            ctx.emit("seq check", &json!({ "sequence": s.label(), "N": s.n(), "reports": reports }))?;
        }
        SeqCmd::Minorant { input } => {
            let s = make_sequence(&ctx.sequence(&input)?)?;
            ctx.emit("seq minorant", &json!({ "input": s, "minorant": log_convex_minorant(&s) }))?;
        }
        SeqCmd::Compare { input, other } => {
            let s = make_sequence(&ctx.sequence(&input)?)?;
            let t = ctx.shorthand_sequence(&other)?;
            ctx.emit("seq compare", &compare(&s, &t, &ctx.cfg))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_omega(ctx: &Ctx, cmd: OmegaCmd) -> Outcome {
    match cmd {
        OmegaCmd::Check { input } => {
            let w = make_weight_function(&ctx.omega(&input)?)?;
            ctx.emit("omega check", &json!({ "omega": w.label(), "reports": check_omega_conditions(&w, &ctx.cfg)? }))?;
        }
        OmegaCmd::Recover { input, n } => {
            let w = make_weight_function(&ctx.omega(&input)?)?;
            ctx.emit("omega recover", &recover_sequence(&w, n.unwrap_or(ctx.cfg.n), &ctx.cfg)?)?;
        }
        OmegaCmd::Conjugate { input, x } => {
            let w = make_weight_function(&ctx.omega(&input)?)?;
            ctx.emit("omega conjugate", &json!({ "x": x, "value": legendre_conjugate(&w, x, &ctx.cfg)? }))?;
        }
        OmegaCmd::Matrix { input } => {
            let w = make_weight_function(&ctx.omega(&input)?)?;
            let spec = AssociatedMatrixSpec { source: w, ell_grid: ctx.cfg.ell_grid.clone(), n: ctx.cfg.n };
            ctx.emit("omega matrix", &matrix_from_omega(&spec, &ctx.cfg)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_index(ctx: &Ctx, cmd: IndexCmd) -> Outcome {
    match cmd {
        IndexCmd::GammaM { input } => {
            let s = make_sequence(&ctx.sequence(&input)?)?;
            ctx.emit("index gamma-m", &gamma_sequence(&s, &ctx.cfg)?)?;
        }
        IndexCmd::GammaOmega { input } => {
            let w = make_weight_function(&ctx.omega(&input)?)?;
            ctx.emit("index gamma-omega", &gamma_omega(&w, &ctx.cfg)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_matrix(ctx: &Ctx, cmd: MatrixCmd) -> Outcome {
    match cmd {
        MatrixCmd::Check { input, conds } => {
            let m = make_matrix(&ctx.matrix(input.file.as_deref(), input.spec.as_deref())?, &ctx.cfg)?;
            let which = if conds.is_empty() {
                MATRIX_CONDITIONS.to_vec()
            } else {
                conds.iter().map(|c| specs::matrix_condition(c)).collect::<Result<_, _>>()?
            };
            let reports =
                which.iter().map(|&c| check_matrix_condition(&m, c, &ctx.cfg)).collect::<Result<Vec<_>, _>>()?;
            ctx.emit("matrix check", &json!({ "params": m.params(), "N": m.n(), "reports": reports }))?;
        }
        MatrixCmd::MAlpha { input, alpha } => {
            let m = make_matrix(&ctx.matrix(input.file.as_deref(), input.spec.as_deref())?, &ctx.cfg)?;
            ctx.emit("matrix m-alpha", &build_m_alpha(&m, alpha, &ctx.cfg)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_char(ctx: &Ctx, cmd: CharCmd) -> Outcome {
    match cmd {
        CharCmd::Jet { kernel, n } => ctx.emit("char jet", &kernel.jet(n)?)?,
        CharCmd::Transform { kernel, seq, target, n } => {
            let m = ctx.shorthand_sequence(&seq)?;
            let t = transform_jet(&kernel.jet(n)?, &m, &ctx.cfg)?;
            let characteristic = match target {
                Some(s) => Some(check_characteristic_criteria(&t, &ctx.shorthand_sequence(&s)?, None, &ctx.cfg)?),
                None => None,
            };
            let membership = membership_certificate(&t, &m, &ctx.cfg).ok();
            ctx.emit(
                "char transform",
                &json!({ "jet": t, "characteristic": characteristic, "membership": membership }),
            )?;
        }
        CharCmd::Eval { kernel, r, theta, n, seq } => {
            let z = SectorPoint::new(r, theta)?;
            let value = match (&seq, kernel.kernel) {
                (Some(s), _) => {
                    if n != 0 {
                        return Err(CliError::Usage("the transform is evaluated without derivatives".into()));
                    }
                    transform_eval(kernel.function()?.as_ref(), &ctx.shorthand_sequence(s)?, z, &ctx.cfg)?
                }
                (None, Kernel::E) => e_alpha(kernel.alpha, z, n, &ctx.cfg)?,
                (None, Kernel::G) => g_alpha_eval(kernel.alpha, kernel.alpha_prime()?, z, n, &ctx.cfg)?,
            };
            ctx.emit("char eval", &json!({ "z": z, "n": n, "estimate": value }))?;
        }
        CharCmd::BoundCheck { alpha, n_max, r, theta } => {
            let mut points = Vec::with_capacity(r.len() * theta.len());
            for &ri in &r {
                for &t in &theta {
                    points.push(SectorPoint::new(ri, t)?);
                }
            }
            let report = e_alpha_bound_check(alpha, n_max, &points, &ctx.cfg)?;
            ctx.emit("char bound-check", &report)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verdict_exit(verdict: StabilityClass) -> ExitCode {
    if verdict == StabilityClass::Inconclusive {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn run_classify(ctx: &Ctx, args: ClassifyArgs) -> Outcome {
    let verdict = if let Some(p) = &args.omega {
        let w = make_weight_function(&specs::read_json(p)?)?;
        classify_omega(&w, args.alpha, &ctx.cfg)?
    } else if let Some(s) = &args.omega_spec {
        let w = make_weight_function(&specs::omega_shorthand(s, true)?)?;
        classify_omega(&w, args.alpha, &ctx.cfg)?
    } else {
        let spec = ctx.matrix(args.matrix.as_deref(), args.matrix_spec.as_deref())?;
        classify_matrix(&make_matrix(&spec, &ctx.cfg)?, args.alpha, &ctx.cfg)?
    };
    ctx.emit("classify", &verdict)?;
    Ok(verdict_exit(verdict.verdict))
}

fn map_csv(map: &GevreyMap) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let run = |e: csv::Error| CliError::Run(e.into());
    w.write_record(["alpha", "beta", "verdict", "justification"]).map_err(run)?;
    for c in &map.cells {
        w.write_record([
            c.alpha.to_string(),
            c.beta.to_string(),
            c.pipeline.to_string(),
            c.pipeline_justification.to_string(),
        ])
        .map_err(run)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Run(anyhow::anyhow!("{e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Run(e.into()))
}

fn emit_map(ctx: &Ctx, command: &str, alphas: &[f64], betas: &[f64], out: Format) -> Outcome {
    let map = gevrey_map(alphas, betas, &ctx.cfg)?;
    match out {
        Format::Csv => ctx.emit_text(&map_csv(&map)?)?,
        Format::Json => ctx.emit(command, &map)?,
    }
    eprintln!(
        "{} cells, {} disagreements with the closed form, {} inconclusive",
        map.cells.len(),
        map.disagreements,
        map.inconclusive
    );
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Outcome {
    let mut cfg = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Run(anyhow::anyhow!("cannot read {}: {e}", p.display())))?;
            RunConfig::from_kv_str(&text).map_err(|e| CliError::Usage(e.to_string()))?
        }
        None => RunConfig::default(),
    };
    for kv in &cli.overrides {
        let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Usage(format!("--set expects key=value, got {kv}")))?;
        cfg.set(k, v).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let env_threads = std::env::var("WEIGHTCALC_THREADS").ok().and_then(|v| v.parse::<usize>().ok());
    let threads = match (cfg.threads, env_threads) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    if let Some(t) = threads.filter(|&t| t > 0) {
        // a second initialisation only happens in tests; the first pool wins
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let ctx = Ctx { cfg, output: cli.output };
    match cli.command {
        Command::Seq(c) => run_seq(&ctx, c),
        Command::Omega(c) => run_omega(&ctx, c),
        Command::Index(c) => run_index(&ctx, c),
        Command::Matrix(c) => run_matrix(&ctx, c),
        Command::Char(c) => run_char(&ctx, c),
        Command::Classify(a) => run_classify(&ctx, a),
        Command::Map(MapCmd::Gevrey { alpha, beta, out }) => {
            let (a0, a1, da) = specs::range(&alpha)?;
            let (b0, b1, db) = specs::range(&beta)?;
            emit_map(&ctx, "map gevrey", &range_grid(a0, a1, da)?, &range_grid(b0, b1, db)?, out)
        }
        Command::DemoQgevrey { q } => {
            let demo = demo_qgevrey(q, &ctx.cfg)?;
            let code = demo.verdicts.iter().fold(ExitCode::SUCCESS, |acc, v| {
                if v.verdict == StabilityClass::Inconclusive { ExitCode::from(2) } else { acc }
            });
            ctx.emit("demo-qgevrey", &demo)?;
            Ok(code)
        }
        Command::DemoGevreyFigure { out } => {
            emit_map(&ctx, "demo-gevrey-figure", &range_grid(0.05, 3.5, 0.05)?, &range_grid(-2.0, 3.0, 0.05)?, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(64)
        }
        Err(CliError::Json(msg)) => {
            eprintln!("malformed JSON: {msg}");
            ExitCode::from(65)
        }
        Err(CliError::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
