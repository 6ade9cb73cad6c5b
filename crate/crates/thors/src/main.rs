use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thors::config::{ExperimentConfig, Method, Overrides};
use thors::core::classifiers::ScorerKind;
use thors::core::{
    build_validation, select_threshold_with, BoundContext, CostMatrix, GuaranteeReport,
    SelectOptions, SizeRequest, ThresholdSelection,
};
use thors::curve::{bound_curve_from, reference_request, DEFAULT_RATIOS};
use thors::synthetic::Preset;
use thors::verify::{verify_bounds, VerifyConfig};
use thors::{report, HarnessError, Result};

#[derive(Parser)]
#[command(
    name = "thors",
    version,
    about = "Cost-sensitive thresholding on order statistics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pick a threshold from a `score,label` CSV and report its guarantees.
    Threshold(ThresholdArgs),
    /// Run the repeated split/train/evaluate benchmark.
    Experiment(ExperimentArgs),
    /// Guarantee report for given validation counts.
    Bounds(BoundsArgs),
    /// Validation size needed for a target cost ceiling.
    Size(SizeArgs),
    /// Monte-Carlo coverage checks of the guarantees.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Costs {
    #[arg(long = "fn-cost")]
    fn_cost: f64,
    #[arg(long = "fp-cost")]
    fp_cost: f64,
}

impl Costs {
    fn matrix(&self) -> Result<CostMatrix> {
        Ok(CostMatrix::new(self.fn_cost, self.fp_cost)?)
    }
}

#[derive(Args)]
struct ThresholdArgs {
    /// CSV with `score` and `label` (0/1) columns.
    #[arg(long)]
    scores: PathBuf,
    #[command(flatten)]
    costs: Costs,
    /// Test-set size the cost guarantees refer to.
    #[arg(long, default_value_t = 1)]
    n_test: u64,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.95)]
    confidence: f64,
    /// Also consider classifying everything as positive.
    #[arg(long)]
    allow_all_positive: bool,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML config; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_preset)]
    preset: Option<Preset>,
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    label_column: Option<String>,
    #[arg(long)]
    positive_value: Option<String>,
    #[arg(long = "fn-cost")]
    fn_cost: Option<f64>,
    #[arg(long = "fp-cost")]
    fp_cost: Option<f64>,
    /// Comma-separated: logistic, nb, lda.
    #[arg(long, value_delimiter = ',', value_parser = parse_scorer)]
    scorers: Option<Vec<ScorerKind>>,
    /// Comma-separated: thors, null, theoretical, empirical, metacost, crs.
    #[arg(long, value_delimiter = ',', value_parser = parse_method)]
    methods: Option<Vec<Method>>,
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long)]
    select_k: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    data_seed: Option<u64>,
    #[arg(long)]
    metacost_replicates: Option<usize>,
    /// Run rounds one after another.
    #[arg(long)]
    serial: bool,
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    n0: u64,
    #[arg(long)]
    n1: u64,
    #[arg(long)]
    k0: u64,
    #[arg(long)]
    k1: u64,
    /// Class-0 prior; defaults to n0 / (n0 + n1).
    #[arg(long)]
    pi0: Option<f64>,
    #[command(flatten)]
    costs: Costs,
    #[arg(long, default_value_t = 1)]
    n_test: u64,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.95)]
    confidence: f64,
}

#[derive(Args)]
struct SizeArgs {
    /// Frozen `(n0 - k0) / (n0 + 1)`.
    #[arg(long, requires_all = ["q1", "pi0", "fn_cost", "fp_cost"], conflicts_with_all = ["config", "preset"])]
    q0: Option<f64>,
    /// Frozen `k1 / (n1 + 1)`.
    #[arg(long)]
    q1: Option<f64>,
    #[arg(long)]
    pi0: Option<f64>,
    #[arg(long = "fn-cost")]
    fn_cost: Option<f64>,
    #[arg(long = "fp-cost")]
    fp_cost: Option<f64>,
    #[arg(long, default_value_t = 1)]
    n_test: u64,
    /// Freeze the ratios from round 0 of this experiment config instead.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_preset)]
    preset: Option<Preset>,
    #[arg(long, value_parser = parse_scorer, default_value = "logistic")]
    scorer: ScorerKind,
    /// Comma-separated ceilings as multiples of `C2`.
    #[arg(long, value_delimiter = ',')]
    ratio: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.95)]
    confidence: f64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2_000)]
    simulations: usize,
    #[arg(long, default_value_t = 200)]
    n0: usize,
    #[arg(long, default_value_t = 200)]
    n1: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.5)]
    separation: f64,
    #[arg(long = "fn-cost", default_value_t = 5.0)]
    fn_cost: f64,
    #[arg(long = "fp-cost", default_value_t = 1.0)]
    fp_cost: f64,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
}

fn parse_preset(s: &str) -> std::result::Result<Preset, String> {
    Preset::from_name(s).ok_or_else(|| format!("unknown preset `{s}` (trucks, income, telescope)"))
}

fn parse_scorer(s: &str) -> std::result::Result<ScorerKind, String> {
    ScorerKind::from_name(s).ok_or_else(|| format!("unknown scorer `{s}` (logistic, nb, lda)"))
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    Method::from_name(s).ok_or_else(|| format!("unknown method `{s}`"))
}

fn print_json<T: Serialize>(value: &T, path: Option<&PathBuf>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| HarnessError::Io {
            path: p.clone(),
            source: e,
        }),
        None => emit(&(text + "\n")),
    }
}

/// Writes to stdout; a reader that went away (`| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(HarnessError::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        }),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct ThresholdOutput {
    threshold: f64,
    selection: ThresholdSelection,
    guarantees: GuaranteeReport,
}

fn threshold(a: ThresholdArgs) -> Result<bool> {
    let cm = a.costs.matrix()?;
    let scores = thors::io::load_scores(&a.scores)?;
    let vs = build_validation(&scores)?;
    let sel = select_threshold_with(
        &vs,
        &cm,
        SelectOptions {
            allow_all_positive: a.allow_all_positive,
        },
    );
    let ctx = BoundContext::from_selection(&sel, cm, a.n_test)?;
    let guarantees = GuaranteeReport::compute(&ctx, a.epsilon, a.confidence, &[1.0, 2.0, 3.0])?;
    print_json(
        &ThresholdOutput {
            threshold: sel.c_star,
            selection: sel,
            guarantees,
        },
        a.output.as_ref(),
    )?;
    Ok(true)
}

fn experiment(a: ExperimentArgs) -> Result<bool> {
    let mut cfg = match &a.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    cfg.apply(&Overrides {
        data: a.data,
        preset: a.preset,
        label_column: a.label_column,
        positive_value: a.positive_value,
        fn_cost: a.fn_cost,
        fp_cost: a.fp_cost,
        scorers: a.scorers,
        methods: a.methods,
        rounds: a.rounds,
        select_k: a.select_k,
        seed: a.seed,
        data_seed: a.data_seed,
        output_dir: a.output_dir,
        metacost_replicates: a.metacost_replicates,
        parallel: a.serial.then_some(false),
    });
    let out = thors::run_experiment(&cfg)?;
    emit(&report::render_summary(&out))?;
    if let Some(dir) = &cfg.output_dir {
        let files = report::write_outputs(dir, &cfg, &out)?;
        eprintln!("wrote {}", files.summary_csv.display());
    }
    Ok(true)
}

fn bounds(a: BoundsArgs) -> Result<bool> {
    let cm = a.costs.matrix()?;
    let pi0 = a.pi0.unwrap_or(a.n0 as f64 / (a.n0 + a.n1).max(1) as f64);
    let ctx = BoundContext::new(a.n0, a.n1, a.k0, a.k1, pi0, a.n_test, cm)?;
    print_json(
        &GuaranteeReport::compute(&ctx, a.epsilon, a.confidence, &[1.0, 2.0, 3.0])?,
        None,
    )?;
    Ok(true)
}

fn size(a: SizeArgs) -> Result<bool> {
    let reference = match (a.q0, &a.config, a.preset) {
        (Some(q0), _, _) => {
            let pi0 = a.pi0.unwrap_or_default();
            SizeRequest {
                q0,
                q1: a.q1.unwrap_or_default(),
                pi0,
                pi1: 1.0 - pi0,
                cm: CostMatrix::new(a.fn_cost.unwrap_or_default(), a.fp_cost.unwrap_or_default())?,
                n_te: a.n_test,
                target_ratio: 2.0,
                target_confidence: a.confidence,
            }
        }
        (None, Some(path), _) => {
            reference_request(&ExperimentConfig::load(path)?, a.scorer, a.confidence)?
        }
        (None, None, Some(p)) => {
            reference_request(&ExperimentConfig::for_preset(p), a.scorer, a.confidence)?
        }
        (None, None, None) => {
            return Err(HarnessError::Config(
                "give --q0/--q1/--pi0 with costs, --config, or --preset".into(),
            ))
        }
    };
    let ratios = a.ratio.unwrap_or_else(|| DEFAULT_RATIOS.to_vec());
    let curve = bound_curve_from(reference, &ratios)?;
    print_json(&curve, None)?;
    if curve.points.iter().any(|p| p.n_v.is_none()) {
        return Err(
            thors::core::Error::Unachievable("some target ratios cannot be reached").into(),
        );
    }
    Ok(true)
}

fn verify(a: VerifyArgs) -> Result<bool> {
    let cfg = VerifyConfig {
        n0: a.n0,
        n1: a.n1,
        simulations: a.simulations,
        seed: a.seed,
        separation: a.separation,
        cm: CostMatrix::new(a.fn_cost, a.fp_cost)?,
        epsilon: a.epsilon,
        ..VerifyConfig::default()
    };
    let report = verify_bounds(&cfg)?;
    print_json(&report, None)?;
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Threshold(a) => threshold(a),
        Command::Experiment(a) => experiment(a),
        Command::Bounds(a) => bounds(a),
        Command::Size(a) => size(a),
        Command::Verify(a) => verify(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
