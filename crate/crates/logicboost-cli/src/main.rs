//! `logicboost` command-line front end.
//!
//! Exit codes: 0 on success, 1 on runtime failures (I/O, malformed data,
//! degenerate training), 2 on invalid arguments. All randomness flows from
//! `--seed`; environment variables are never consulted, so a command line
//! fully determines its outputs and re-running one overwrites its files
//! byte-identically.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use logicboost::boosting::{train_boost, BoostedEnsemble, WeakLearnerKind, WeakLearnerSpec};
use logicboost::dataset::{
    load_csv, preset_split_sizes, ColumnSpec, Dataset, LabelMapping, SplitSpec,
};
use logicboost::experiments::report::{
    fmt_sig6, write_deadlock_csv, write_grid_csv, write_predictions_csv, write_ratio_csv,
    write_sweep_csv, write_trials_csv, write_trials_jsonl,
};
use logicboost::experiments::{
    ops_sweep, origin_line_deadlock_check, ratio_table, run_trials, xor_demo,
};
use logicboost::model::{load_model, save_model};

#[derive(Parser)]
#[command(
    name = "logicboost",
    version,
    about = "Boosted logic-chain classifiers: training, evaluation and experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a model on a whole CSV file and save it
    Train(TrainArgs),
    /// Predict labels for a CSV file with a saved model
    Predict(PredictArgs),
    /// Report a saved model's error on a CSV file
    Eval(EvalArgs),
    /// Run repeated random-split train/test trials
    Trials(TrialsArgs),
    /// Sweep the operation count per weak classifier
    OpsSweep(OpsSweepArgs),
    /// Compare mean test errors against the stump reference
    RatioTable(RatioTableArgs),
    /// Train on generated xor data and classify a grid
    XorDemo(XorDemoArgs),
    /// Show that origin lines are useless on symmetric xor
    DeadlockCheck(DeadlockArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Learner {
    Stump,
    Or,
    And,
    Andor,
    Tree,
}

impl Learner {
    fn kind(self) -> WeakLearnerKind {
        match self {
            Learner::Stump => WeakLearnerKind::Stump,
            Learner::Or => WeakLearnerKind::OrChain,
            Learner::And => WeakLearnerKind::AndChain,
            Learner::Andor => WeakLearnerKind::AndOr,
            Learner::Tree => WeakLearnerKind::Tree,
        }
    }
}

#[derive(Args)]
struct DataArgs {
    /// Input CSV file
    #[arg(long)]
    data: PathBuf,
    /// Label mapping, e.g. `0=-1,1=+1` or `B=-1,M=+1`
    #[arg(long, value_parser = LabelMapping::parse)]
    labels: LabelMapping,
    /// Label column: an index, a header name, or `last`
    #[arg(long, default_value = "last")]
    label_column: ColumnSpec,
    /// Treat the first line as a header
    #[arg(long)]
    header: bool,
}

impl DataArgs {
    fn load(&self) -> Result<Dataset> {
        load_csv(&self.data, &self.label_column, &self.labels, self.header)
            .with_context(|| format!("loading {}", self.data.display()))
    }

    fn name(&self) -> String {
        self.data
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".to_string())
    }
}

#[derive(Args)]
struct LearnerArgs {
    /// Weak-learner family
    #[arg(long, value_enum)]
    learner: Learner,
    /// Operations per OR/AND chain
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    ops: u64,
    /// Minimal error decrease to extend a chain
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Tree depth cap
    #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u64).range(1..))]
    tree_depth: u64,
    /// Tree leaf cap
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(2..))]
    tree_leaves: u64,
}

impl LearnerArgs {
    fn spec(&self) -> WeakLearnerSpec {
        spec_for(
            self.learner.kind(),
            self.ops as usize,
            self.tol,
            self.tree_depth as usize,
            self.tree_leaves as usize,
        )
    }
}

fn spec_for(
    kind: WeakLearnerKind,
    ops: usize,
    tol: f64,
    tree_depth: usize,
    tree_leaves: usize,
) -> WeakLearnerSpec {
    let mut spec = match kind {
        WeakLearnerKind::Stump => WeakLearnerSpec::stump(),
        WeakLearnerKind::OrChain => WeakLearnerSpec::or_chain(ops),
        WeakLearnerKind::AndChain => WeakLearnerSpec::and_chain(ops),
        WeakLearnerKind::AndOr => WeakLearnerSpec::and_or(ops),
        WeakLearnerKind::Tree => WeakLearnerSpec::tree(tree_depth, tree_leaves),
    };
    spec.tol = tol;
    spec
}

#[derive(Args)]
struct SplitArgs {
    /// Training-set size per trial
    #[arg(long, requires = "test_size", conflicts_with = "preset")]
    train_size: Option<usize>,
    /// Test-set size per trial
    #[arg(long, requires = "train_size", conflicts_with = "preset")]
    test_size: Option<usize>,
    /// Named split sizes: cancer, ionosphere, ocr49 or splice
    #[arg(long)]
    preset: Option<String>,
    /// Number of random-split trials
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
}

impl SplitArgs {
    fn sizes(&self) -> Result<SplitSpec> {
        let (n_train, n_test) = match (&self.preset, self.train_size, self.test_size) {
            (Some(name), _, _) => preset_split_sizes(name).ok_or_else(|| {
                usage(format!(
                    "unknown preset {name:?}; known presets: cancer, ionosphere, ocr49, splice"
                ))
            })?,
            (None, Some(train), Some(test)) => (train, test),
            _ => {
                return Err(usage(
                    "give either --preset or both --train-size and --test-size".to_string(),
                ))
            }
        };
        Ok(SplitSpec::new(n_train, n_test, 0))
    }
}

/// Marker for argument problems detected after clap parsing; mapped to
/// exit code 2 like any other usage error.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(message: String) -> anyhow::Error {
    anyhow::Error::new(UsageError(message))
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    learner: LearnerArgs,
    /// Boosting rounds
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    rounds: u64,
    /// Output model file
    #[arg(long)]
    model: PathBuf,
    /// Accepted for interface uniformity; training itself is deterministic
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct PredictArgs {
    /// Saved model file
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    data: DataArgs,
    /// Output CSV of per-row predictions
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Saved model file
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    data: DataArgs,
    /// Optional summary CSV
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrialsArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    learner: LearnerArgs,
    #[command(flatten)]
    split: SplitArgs,
    /// Boosting rounds per trial
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    rounds: u64,
    /// Base seed; trial k splits with seed + k
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output prefix; writes `<out>.csv` and `<out>.jsonl`
    #[arg(long)]
    out: PathBuf,
    /// Worker thread cap
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
}

#[derive(Args)]
struct OpsSweepArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Learners to sweep
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Learner::Or, Learner::And, Learner::Andor])]
    learners: Vec<Learner>,
    /// Operation counts to evaluate
    #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 3, 4, 5, 6, 7], value_parser = clap::value_parser!(u64).range(1..))]
    ops_list: Vec<u64>,
    #[command(flatten)]
    split: SplitArgs,
    /// Boosting rounds for every cell
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    rounds: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
}

#[derive(Args)]
struct RatioTableArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Learners compared against the stump reference
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Learner::Or, Learner::And, Learner::Andor])]
    learners: Vec<Learner>,
    /// Operations per chain
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    ops: u64,
    /// Tree depth cap (tree learner)
    #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u64).range(1..))]
    tree_depth: u64,
    /// Tree leaf cap (tree learner)
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(2..))]
    tree_leaves: u64,
    #[command(flatten)]
    split: SplitArgs,
    /// Rounds for the compared learners
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    rounds: u64,
    /// Rounds for the stump reference
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    reference_rounds: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
}

#[derive(Args)]
struct XorDemoArgs {
    #[command(flatten)]
    learner: LearnerArgs,
    /// Boosting rounds
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    rounds: u64,
    /// Points per xor quadrant
    #[arg(long, default_value_t = 250, value_parser = clap::value_parser!(u64).range(1..))]
    n_per_quadrant: u64,
    /// Noise standard deviation
    #[arg(long, default_value_t = 0.3)]
    spread: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Grid points per axis over [-2, 2]
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(2..))]
    grid_resolution: u64,
    /// Output grid CSV
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DeadlockArgs {
    /// Points per xor quadrant
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..))]
    n_per_quadrant: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Evenly spaced origin-line angles to evaluate
    #[arg(long, default_value_t = 360, value_parser = clap::value_parser!(u64).range(4..))]
    angles: u64,
    /// Optional per-angle CSV
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => e.exit(),
            _ => {
                eprint!("{e}");
                std::process::exit(2);
            }
        },
    };
    if let Err(e) = run(cli) {
        if e.is::<UsageError>() {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train(args) => train(args),
        Command::Predict(args) => predict(args),
        Command::Eval(args) => eval(args),
        Command::Trials(args) => trials(args),
        Command::OpsSweep(args) => sweep(args),
        Command::RatioTable(args) => ratios(args),
        Command::XorDemo(args) => demo(args),
        Command::DeadlockCheck(args) => deadlock(args),
    }
}

fn with_jobs<T: Send>(jobs: Option<u64>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n as usize)
                .build()
                .context("building worker pool")?;
            Ok(pool.install(f))
        }
    }
}

fn load_model_for(data: &Dataset, path: &Path) -> Result<BoostedEnsemble> {
    let model = load_model(path).with_context(|| format!("loading {}", path.display()))?;
    if model.required_features() > data.n_features() {
        bail!(
            "model tests feature {} but the data has only {} features",
            model.required_features() - 1,
            data.n_features()
        );
    }
    Ok(model)
}

fn train(args: TrainArgs) -> Result<()> {
    let data = args.data.load()?;
    let spec = args.learner.spec();
    let model = train_boost(&data, &spec, args.rounds as usize, None);
    if model.is_empty() {
        bail!("no weak classifier performed better than chance; nothing to save");
    }
    save_model(&args.model, &model)?;
    println!(
        "trained {} model: rounds_used={} train_error={} -> {}",
        spec.kind.label(),
        model.len(),
        fmt_sig6(model.error_rate(&data)),
        args.model.display()
    );
    Ok(())
}

fn predict(args: PredictArgs) -> Result<()> {
    let data = args.data.load()?;
    let model = load_model_for(&data, &args.model)?;
    let predictions: Vec<i8> = (0..data.n_samples())
        .map(|i| model.predict(data.row(i)))
        .collect();
    write_predictions_csv(&args.out, &predictions)?;
    let positives = predictions.iter().filter(|&&p| p == 1).count();
    println!(
        "predicted {} rows ({} positive) -> {}",
        predictions.len(),
        positives,
        args.out.display()
    );
    Ok(())
}

fn eval(args: EvalArgs) -> Result<()> {
    let data = args.data.load()?;
    let model = load_model_for(&data, &args.model)?;
    let wrong = (0..data.n_samples())
        .filter(|&i| model.predict(data.row(i)) != data.label(i))
        .count();
    let error = wrong as f64 / data.n_samples() as f64;
    if let Some(out) = &args.out {
        let body = format!(
            "n_samples,n_errors,error\n{},{},{}\n",
            data.n_samples(),
            wrong,
            fmt_sig6(error)
        );
        logicboost::experiments::report::write_text(out, &body)?;
    }
    println!(
        "evaluated {} samples: errors={} error={}",
        data.n_samples(),
        wrong,
        fmt_sig6(error)
    );
    Ok(())
}

fn trials(args: TrialsArgs) -> Result<()> {
    let sizes = args.split.sizes()?;
    let data = args.data.load()?;
    let name = args.data.name();
    let spec = args.learner.spec();
    let reports = with_jobs(args.jobs, || {
        run_trials(
            &data,
            &name,
            &spec,
            args.rounds as usize,
            &sizes,
            args.split.trials as usize,
            args.seed,
        )
    })??;
    let csv_path = args.out.with_extension("csv");
    let jsonl_path = args.out.with_extension("jsonl");
    write_trials_csv(&csv_path, &reports)?;
    write_trials_jsonl(&jsonl_path, &reports)?;
    let (mean_test, std_test) =
        logicboost::experiments::mean_std(reports.iter().map(|r| r.test_error));
    println!(
        "{} {} trials: mean_test_error={} std={} -> {} / {}",
        reports.len(),
        spec.kind.label(),
        fmt_sig6(mean_test),
        fmt_sig6(std_test),
        csv_path.display(),
        jsonl_path.display()
    );
    Ok(())
}

fn sweep(args: OpsSweepArgs) -> Result<()> {
    let sizes = args.split.sizes()?;
    let data = args.data.load()?;
    let name = args.data.name();
    let kinds: Vec<WeakLearnerKind> = args.learners.iter().map(|l| l.kind()).collect();
    let ops: Vec<usize> = args.ops_list.iter().map(|&o| o as usize).collect();
    let rows = with_jobs(args.jobs, || {
        ops_sweep(
            &data,
            &name,
            &kinds,
            args.rounds as usize,
            &ops,
            &sizes,
            args.split.trials as usize,
            args.seed,
        )
    })??;
    write_sweep_csv(&args.out, &rows)?;
    println!(
        "swept {} cells ({} learners x {} op counts) -> {}",
        rows.len(),
        kinds.len(),
        ops.len(),
        args.out.display()
    );
    Ok(())
}

fn ratios(args: RatioTableArgs) -> Result<()> {
    let sizes = args.split.sizes()?;
    let data = args.data.load()?;
    let name = args.data.name();
    let specs: Vec<(WeakLearnerSpec, usize)> = args
        .learners
        .iter()
        .filter(|l| **l != Learner::Stump)
        .map(|l| {
            (
                spec_for(
                    l.kind(),
                    args.ops as usize,
                    1e-12,
                    args.tree_depth as usize,
                    args.tree_leaves as usize,
                ),
                args.rounds as usize,
            )
        })
        .collect();
    let rows = with_jobs(args.jobs, || {
        ratio_table(
            &data,
            &name,
            &specs,
            args.reference_rounds as usize,
            &sizes,
            args.split.trials as usize,
            args.seed,
        )
    })??;
    write_ratio_csv(&args.out, &rows)?;
    for row in &rows[1..] {
        println!(
            "{} {}/stump: {}",
            name,
            row.learner.kind.label(),
            row.percent_label()
        );
    }
    println!(
        "ratio table over {} trials (reference stump mean_test_error={}) -> {}",
        args.split.trials,
        fmt_sig6(rows[0].reference_mean_test_error),
        args.out.display()
    );
    Ok(())
}

fn demo(args: XorDemoArgs) -> Result<()> {
    let spec = args.learner.spec();
    let runs = xor_demo(
        args.n_per_quadrant as usize,
        args.spread,
        args.seed,
        &[(spec, args.rounds as usize)],
        args.grid_resolution as usize,
    );
    let run = &runs[0];
    write_grid_csv(&args.out, &run.grid)?;
    println!(
        "xor demo {}: rounds_used={} train_error={} test_error={} -> {}",
        spec.kind.label(),
        run.rounds_used,
        fmt_sig6(run.train_error),
        fmt_sig6(run.test_error),
        args.out.display()
    );
    Ok(())
}

fn deadlock(args: DeadlockArgs) -> Result<()> {
    let report = origin_line_deadlock_check(
        args.n_per_quadrant as usize,
        args.seed,
        args.angles as usize,
    );
    if let Some(out) = &args.out {
        write_deadlock_csv(out, &report)?;
    }
    println!(
        "deadlock check over {} angles: max_deviation_from_half={} \
         first_error_after_reweight={} antipode_error={} antipode_optimal={}",
        report.n_angles,
        fmt_sig6(report.max_deviation),
        fmt_sig6(report.first_error_after_reweight),
        fmt_sig6(report.antipode_error_after_reweight),
        report.antipode_is_optimal
    );
    Ok(())
}
