//! Command-line surface over the library: simulation, tail-index fits,
//! risk-measure estimation, dependence diagnostics, replicated experiments,
//! and return-series ingestion. All numerics live in the library; this
//! binary only parses flags, moves files, and formats records.

use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use tailcontagion::diagnostics::{DEFAULT_BINS, DEFAULT_TAIL_FRACTION};
use tailcontagion::estimators::{
    empirical_mes, empirical_mme, evt_mes, evt_mme, EvtConfig, TailAssumption,
};
use tailcontagion::experiment::{canned_plan, parse_plan, run_experiment, CANNED_PLAN_NAMES};
use tailcontagion::pipeline::{
    analyze_pair, joint_negative_pairs, PairConfig, PriceSeries, ReturnKind, ReturnSeries,
};
use tailcontagion::tail::{hill, hill_plot, lmoment_tail_index, min_transform};
use tailcontagion::{
    ai_verdict, angular_histogram, BivariateSample, Error, ModelSpec, Result, VerdictConfig,
};

const EXIT_HELP: &str = "Exit codes:
  0  success
  2  argument parsing or usage error
  3  invalid parameter, inadmissible k or p, unsupported model form,
     or an estimation failure
  4  malformed, empty, or degenerate input data
  5  filesystem error

On failure a single-line JSON record {\"error\":{\"kind\":...,\"message\":...}}
is printed to stderr. Output files default into the directory named by the
TAILCONTAGION_OUT environment variable, falling back to the current
directory; an explicit --out style path is used verbatim.";

#[derive(Parser)]
#[command(
    name = "tailcontagion",
    version,
    about = "Tail risk measures for bivariate heavy-tailed data",
    after_help = EXIT_HELP,
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a reproducible sample from a model and write it as CSV.
    Simulate(SimulateArgs),
    /// Fit a tail index to one coordinate of a sample CSV.
    TailIndex(TailIndexArgs),
    /// Estimate MME or MES at a target level from a sample CSV.
    Estimate(EstimateArgs),
    /// Angular histogram of the extremes plus a dependence verdict.
    Diagnose(DiagnoseArgs),
    /// Run a replicated experiment described by a plan file.
    Experiment(ExperimentArgs),
    /// Run the seven built-in study plans and write their summaries.
    ReproduceFigures(ReproduceArgs),
    /// Join two return (or price) series into a joint-loss sample CSV.
    Ingest(IngestArgs),
    /// Full tail analysis of a loss sample: indices, verdict, curves.
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Model family: gauss, mo, bernoulli, or additive.
    #[arg(long)]
    model: String,
    /// Marginal tail index (every family).
    #[arg(long)]
    alpha: f64,
    /// Copula correlation (gauss).
    #[arg(long)]
    rho: Option<f64>,
    /// First Marshall-Olkin parameter (mo).
    #[arg(long)]
    gamma1: Option<f64>,
    /// Second Marshall-Olkin parameter (mo).
    #[arg(long)]
    gamma2: Option<f64>,
    /// Hidden joint tail index (bernoulli, additive).
    #[arg(long)]
    alpha0: Option<f64>,
    /// Tail index of the independent second coordinate (bernoulli).
    #[arg(long)]
    gamma: Option<f64>,
    /// Mixing probability (bernoulli).
    #[arg(long)]
    q: Option<f64>,
    /// Additive-factor variant: plain, sum, min, or max.
    #[arg(long, default_value = "plain")]
    variant: String,
}

impl ModelArgs {
    fn build(&self) -> Result<ModelSpec> {
        let need = |flag: &str, value: Option<f64>| {
            value.ok_or_else(|| Error::InvalidParameter {
                name: flag.into(),
                value: "missing".into(),
                constraint: format!("--{flag} is required for --model {}", self.model),
            })
        };
        let spec = match self.model.as_str() {
            "gauss" => ModelSpec::GaussianCopula {
                alpha: self.alpha,
                rho: need("rho", self.rho)?,
            },
            "mo" => ModelSpec::MarshallOlkin {
                alpha: self.alpha,
                gamma1: need("gamma1", self.gamma1)?,
                gamma2: need("gamma2", self.gamma2)?,
            },
            "bernoulli" => ModelSpec::BernoulliMixture {
                alpha: self.alpha,
                alpha0: need("alpha0", self.alpha0)?,
                gamma: need("gamma", self.gamma)?,
                q: need("q", self.q)?,
            },
            "additive" => ModelSpec::AdditiveFactor {
                alpha: self.alpha,
                alpha0: need("alpha0", self.alpha0)?,
                variant: tailcontagion::FactorVariant::parse(&self.variant)?,
            },
            other => {
                return Err(Error::InvalidParameter {
                    name: "model".into(),
                    value: other.into(),
                    constraint: "one of gauss, mo, bernoulli, additive".into(),
                })
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Number of pairs to draw.
    #[arg(long)]
    n: usize,
    /// RNG seed; the same (seed, stream) always yields the same file.
    #[arg(long)]
    seed: u64,
    /// RNG stream within the seed.
    #[arg(long, default_value_t = 0)]
    stream: u64,
    /// Output CSV path [default: sample.csv in the output directory].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TailIndexArgs {
    /// Input sample CSV with z1,z2 columns.
    #[arg(long)]
    input: PathBuf,
    /// Series to fit: z1, z2, or min (coordinatewise minima).
    #[arg(long, default_value = "z2")]
    column: String,
    /// Upper order statistics used by the fit [default: n/10].
    #[arg(long)]
    k: Option<usize>,
    /// Estimator: hill or lmoment.
    #[arg(long, default_value = "hill")]
    method: String,
    /// Write a k,index curve over k-min..k-max instead of one estimate.
    #[arg(long)]
    plot: bool,
    /// Smallest k of the curve [default: 10].
    #[arg(long)]
    k_min: Option<usize>,
    /// Largest k of the curve [default: n/4].
    #[arg(long)]
    k_max: Option<usize>,
    /// Curve CSV path [default: hill_plot.csv in the output directory].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    /// Input sample CSV with z1,z2 columns.
    #[arg(long)]
    input: PathBuf,
    /// Risk measure: mme or mes.
    #[arg(long)]
    measure: String,
    /// Target exceedance level, 0 < p < 1.
    #[arg(long)]
    p: f64,
    /// Anchor order statistics [default: n/10].
    #[arg(long)]
    k: Option<usize>,
    /// Hill count for the min-transform hidden index [default: k].
    #[arg(long)]
    k0: Option<usize>,
    /// Hill count for the Z1 index [default: k].
    #[arg(long)]
    k1: Option<usize>,
    /// Hill count for the Z2 index [default: k].
    #[arg(long)]
    k2: Option<usize>,
    /// Joint tail regime behind the extrapolation: ai or dependent.
    #[arg(long, default_value = "ai")]
    assume: String,
    /// Use the empirical estimator at k = round(n p), no extrapolation.
    #[arg(long)]
    empirical: bool,
}

#[derive(Args)]
struct DiagnoseArgs {
    /// Input sample CSV with z1,z2 columns.
    #[arg(long)]
    input: PathBuf,
    /// Fraction of points whose radii count as extreme.
    #[arg(long, default_value_t = DEFAULT_TAIL_FRACTION)]
    tail_fraction: f64,
    /// Angular histogram bins.
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
    /// Histogram CSV path [default: histogram.csv in the output directory].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Plan file: flat `key = value` lines naming the model family, its
    /// parameters, n, reps, base_seed, levels, and optional methods,
    /// measures, k counts, and truth_budget.
    #[arg(long)]
    plan: PathBuf,
    /// Output directory for the summary CSV and JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Output directory for the summary files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run only this named plan instead of all seven.
    #[arg(long)]
    only: Option<String>,
}

#[derive(Args)]
struct IngestArgs {
    /// CSV of the first asset.
    #[arg(long)]
    first: PathBuf,
    /// CSV of the second asset.
    #[arg(long)]
    second: PathBuf,
    /// Input layout: price (date,price) or return (date,return).
    #[arg(long, default_value = "price")]
    kind: String,
    /// Return construction when ingesting prices: simple or log.
    #[arg(long, default_value = "simple")]
    returns: String,
    /// Loss-sample CSV path [default: losses.csv in the output directory].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Loss-sample CSV with z1,z2 columns.
    #[arg(long)]
    input: PathBuf,
    /// Hill and anchor order statistics.
    #[arg(long, default_value_t = 50)]
    k: usize,
    /// Comma-separated target levels [default: geometric grid from k/n].
    #[arg(long)]
    levels: Option<String>,
    /// Fraction of points whose radii count as extreme.
    #[arg(long, default_value_t = DEFAULT_TAIL_FRACTION)]
    tail_fraction: f64,
    /// Angular histogram bins.
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
    /// Curve CSV path [default: curves.csv in the output directory].
    #[arg(long)]
    curves: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        let record = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
        eprintln!("{record}");
        std::process::exit(exit_code(&e));
    }
}

/// Print a line to stdout, treating a closed pipe as a normal exit so
/// `tailcontagion ... | head` behaves like other Unix tools.
fn emit(text: std::fmt::Arguments) {
    let mut out = std::io::stdout();
    if writeln!(out, "{text}").is_err() {
        std::process::exit(0);
    }
}

macro_rules! emitln {
    ($($arg:tt)*) => { emit(format_args!($($arg)*)) };
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => 5,
        Error::Parse { .. }
        | Error::EmptyInput { .. }
        | Error::EmptyOverlap
        | Error::NonPositiveData { .. }
        | Error::DegenerateData { .. } => 4,
        _ => 3,
    }
}

fn out_dir() -> PathBuf {
    std::env::var_os("TAILCONTAGION_OUT").map(PathBuf::from).unwrap_or_else(|| ".".into())
}

fn resolve_out(explicit: Option<PathBuf>, default_name: &str) -> PathBuf {
    explicit.unwrap_or_else(|| out_dir().join(default_name))
}

fn provenance() -> Vec<String> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    vec![
        format!("tailcontagion {}", env!("CARGO_PKG_VERSION")),
        format!("command: {}", args.join(" ")),
    ]
}

fn tool_record() -> serde_json::Value {
    let args: Vec<String> = std::env::args().skip(1).collect();
    json!({
        "tool": format!("tailcontagion {}", env!("CARGO_PKG_VERSION")),
        "command": args.join(" "),
    })
}

fn default_k(n: usize) -> usize {
    ((n as f64) * 0.1).ceil() as usize
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate(args) => simulate(args),
        Command::TailIndex(args) => tail_index(args),
        Command::Estimate(args) => estimate(args),
        Command::Diagnose(args) => diagnose(args),
        Command::Experiment(args) => experiment(args),
        Command::ReproduceFigures(args) => reproduce_figures(args),
        Command::Ingest(args) => ingest(args),
        Command::Analyze(args) => analyze(args),
    }
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let spec = args.model.build()?;
    let sample = spec.sample(args.n, args.seed, args.stream)?;
    let out = resolve_out(args.out, "sample.csv");
    let mut comments = provenance();
    comments.push(format!(
        "model: {} {}",
        spec.family_name(),
        serde_json::to_string(&spec).expect("model specs serialize")
    ));
    comments.push(format!("n: {} seed: {} stream: {}", args.n, args.seed, args.stream));
    sample.write_csv_path(&out, &comments)?;
    emitln!("wrote {} pairs to {}", sample.len(), out.display());
    Ok(())
}

fn select_column(sample: &BivariateSample, column: &str) -> Result<Vec<f64>> {
    match column {
        "z1" => Ok(sample.z1().to_vec()),
        "z2" => Ok(sample.z2().to_vec()),
        "min" => Ok(min_transform(sample)),
        other => Err(Error::InvalidParameter {
            name: "column".into(),
            value: other.into(),
            constraint: "one of z1, z2, min".into(),
        }),
    }
}

fn tail_index(args: TailIndexArgs) -> Result<()> {
    let sample = BivariateSample::read_csv_path(&args.input)?;
    let data = select_column(&sample, &args.column)?;
    if args.plot {
        let k_min = args.k_min.unwrap_or(10);
        let k_max = args.k_max.unwrap_or(data.len() / 4);
        let rows = hill_plot(&data, k_min, k_max)?;
        let out = resolve_out(args.out, "hill_plot.csv");
        let mut w = BufWriter::new(std::fs::File::create(&out)?);
        for line in provenance() {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "# input: {} column: {}", args.input.display(), args.column)?;
        writeln!(w, "k,index")?;
        for (k, index) in &rows {
            writeln!(w, "{k},{index:.16e}")?;
        }
        w.flush()?;
        emitln!("wrote {} rows to {}", rows.len(), out.display());
        return Ok(());
    }
    let k = args.k.unwrap_or_else(|| default_k(data.len()));
    let fit = match args.method.as_str() {
        "hill" => hill(&data, k)?,
        "lmoment" => lmoment_tail_index(&data, k)?,
        other => {
            return Err(Error::InvalidParameter {
                name: "method".into(),
                value: other.into(),
                constraint: "one of hill, lmoment".into(),
            })
        }
    };
    let mut record = tool_record();
    record["input"] = json!(args.input.display().to_string());
    record["column"] = json!(args.column);
    record["method"] = json!(args.method);
    record["n"] = json!(data.len());
    record["k"] = json!(fit.k);
    record["index"] = json!(fit.index);
    record["threshold"] = json!(fit.threshold);
    record["standard_error"] = json!(fit.standard_error());
    emitln!("{}", serde_json::to_string_pretty(&record).expect("records serialize"));
    Ok(())
}

fn estimate(args: EstimateArgs) -> Result<()> {
    let sample = BivariateSample::read_csv_path(&args.input)?;
    let n = sample.len();
    let k = args.k.unwrap_or_else(|| default_k(n));
    let mut record = tool_record();
    record["input"] = json!(args.input.display().to_string());
    record["n"] = json!(n);
    record["measure"] = json!(args.measure);
    record["p"] = json!(args.p);

    if args.empirical {
        if !(args.p > 0.0 && args.p < 1.0) {
            return Err(Error::InvalidParameter {
                name: "p".into(),
                value: args.p.to_string(),
                constraint: "0 < p < 1".into(),
            });
        }
        let k_emp = ((n as f64 * args.p).round() as usize).max(1);
        let value = match args.measure.as_str() {
            "mme" => empirical_mme(&sample, k_emp)?,
            "mes" => empirical_mes(&sample, k_emp)?,
            other => return bad_measure(other),
        };
        record["method"] = json!("empirical");
        record["k"] = json!(k_emp);
        record["value"] = json!(value);
    } else {
        let assumption = match args.assume.as_str() {
            "ai" => TailAssumption::AsymptoticIndependence,
            "dependent" => TailAssumption::Dependence,
            other => {
                return Err(Error::InvalidParameter {
                    name: "assume".into(),
                    value: other.into(),
                    constraint: "one of ai, dependent".into(),
                })
            }
        };
        let config = EvtConfig {
            k,
            k0: args.k0.unwrap_or(k),
            k1: args.k1.unwrap_or(k),
            k2: args.k2.unwrap_or(k),
        };
        let est = match args.measure.as_str() {
            "mme" => evt_mme(&sample, args.p, assumption, &config)?,
            "mes" => evt_mes(&sample, args.p, assumption, &config)?,
            other => return bad_measure(other),
        };
        record["method"] = json!(format!("evt_{}", assumption.name()));
        record["k"] = json!(config.k);
        record["value"] = json!(est.value);
        record["estimate"] = serde_json::to_value(est).expect("estimates serialize");
    }
    emitln!("{}", serde_json::to_string_pretty(&record).expect("records serialize"));
    Ok(())
}

fn bad_measure<T>(value: &str) -> Result<T> {
    Err(Error::InvalidParameter {
        name: "measure".into(),
        value: value.into(),
        constraint: "one of mme, mes".into(),
    })
}

fn diagnose(args: DiagnoseArgs) -> Result<()> {
    let sample = BivariateSample::read_csv_path(&args.input)?;
    let histogram = angular_histogram(&sample, args.tail_fraction, args.bins)?;
    let verdict = ai_verdict(&histogram, &VerdictConfig::default())?;
    let out = resolve_out(args.out, "histogram.csv");
    let mut comments = provenance();
    comments.push(format!(
        "input: {} tail_fraction: {} bins: {}",
        args.input.display(),
        args.tail_fraction,
        args.bins
    ));
    comments.push(format!("verdict: {}", verdict.name()));
    let file = BufWriter::new(std::fs::File::create(&out)?);
    histogram.write_csv(file, &comments)?;
    let mut record = tool_record();
    record["input"] = json!(args.input.display().to_string());
    record["n"] = json!(sample.len());
    record["extreme_points"] = json!(histogram.points);
    record["bins"] = json!(args.bins);
    record["verdict"] = json!(verdict.name());
    record["histogram_csv"] = json!(out.display().to_string());
    emitln!("{}", serde_json::to_string_pretty(&record).expect("records serialize"));
    Ok(())
}

fn write_summary_files(
    summary: &tailcontagion::ExperimentSummary,
    dir: &Path,
    stem: &str,
) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{stem}_summary.csv"));
    let mut comments = provenance();
    comments.push(format!(
        "plan: {stem} model: {} n: {} reps: {} base_seed: {}",
        summary.plan.model.family_name(),
        summary.plan.n,
        summary.plan.reps,
        summary.plan.base_seed
    ));
    let mut w = BufWriter::new(std::fs::File::create(&csv_path)?);
    summary.write_csv(&mut w, &comments)?;
    w.flush()?;
    let json_path = dir.join(format!("{stem}_summary.json"));
    let text = serde_json::to_string_pretty(summary).expect("summaries serialize");
    std::fs::write(&json_path, text)?;
    Ok(csv_path)
}

fn experiment(args: ExperimentArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.plan)?;
    let plan = parse_plan(&text, &args.plan.display().to_string())?;
    let summary = run_experiment(&plan)?;
    let dir = args.out.unwrap_or_else(out_dir);
    let stem = args
        .plan
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "experiment".into());
    let csv_path = write_summary_files(&summary, &dir, &stem)?;
    emitln!("wrote {} cells to {}", summary.cells.len(), csv_path.display());
    Ok(())
}

fn reproduce_figures(args: ReproduceArgs) -> Result<()> {
    let names: Vec<&str> = match &args.only {
        Some(name) => vec![name.as_str()],
        None => CANNED_PLAN_NAMES.to_vec(),
    };
    let dir = args.out.unwrap_or_else(out_dir);
    for name in names {
        let plan = canned_plan(name)?;
        let summary = run_experiment(&plan)?;
        let csv_path = write_summary_files(&summary, &dir, name)?;
        emitln!("wrote {} cells to {}", summary.cells.len(), csv_path.display());
    }
    Ok(())
}

fn load_returns(path: &Path, kind: &str, construction: ReturnKind) -> Result<ReturnSeries> {
    match kind {
        "price" => PriceSeries::read_csv_path(path)?.returns(construction),
        "return" => ReturnSeries::read_csv_path(path),
        other => Err(Error::InvalidParameter {
            name: "kind".into(),
            value: other.into(),
            constraint: "one of price, return".into(),
        }),
    }
}

fn ingest(args: IngestArgs) -> Result<()> {
    let construction = ReturnKind::parse(&args.returns)?;
    let first = load_returns(&args.first, &args.kind, construction)?;
    let second = load_returns(&args.second, &args.kind, construction)?;
    let losses = joint_negative_pairs(&first, &second)?;
    let out = resolve_out(args.out, "losses.csv");
    let mut comments = provenance();
    comments.push(format!(
        "first: {} second: {} kind: {} returns: {}",
        args.first.display(),
        args.second.display(),
        args.kind,
        construction.name()
    ));
    comments.push(format!(
        "days: {} and {}, joint-negative pairs: {}",
        first.len(),
        second.len(),
        losses.len()
    ));
    losses.write_csv_path(&out, &comments)?;
    emitln!("wrote {} joint-negative loss pairs to {}", losses.len(), out.display());
    Ok(())
}

fn analyze(args: AnalyzeArgs) -> Result<()> {
    let sample = BivariateSample::read_csv_path(&args.input)?;
    let mut config = PairConfig::new(args.k);
    config.tail_fraction = args.tail_fraction;
    config.bins = args.bins;
    if let Some(levels) = &args.levels {
        for item in levels.split(',') {
            let p: f64 = item.trim().parse().map_err(|_| Error::InvalidParameter {
                name: "levels".into(),
                value: item.trim().into(),
                constraint: "comma-separated numbers in (0, 1)".into(),
            })?;
            config.levels.push(p);
        }
    }
    let report = analyze_pair(&sample, &config)?;
    let out = resolve_out(args.curves, "curves.csv");
    let mut comments = provenance();
    comments.push(format!("input: {} k: {}", args.input.display(), args.k));
    let file = BufWriter::new(std::fs::File::create(&out)?);
    report.write_curves_csv(file, &comments)?;
    let mut record = tool_record();
    record["input"] = json!(args.input.display().to_string());
    record["curves_csv"] = json!(out.display().to_string());
    record["report"] = serde_json::to_value(&report).expect("reports serialize");
    emitln!("{}", serde_json::to_string_pretty(&record).expect("records serialize"));
    Ok(())
}
