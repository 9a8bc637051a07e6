//! `clustimpute` batch front end.
//!
//! Exit codes: 0 ok, 1 internal error, 2 parse/schema/config error (also a
//! missing input file), 3 insufficient data, 4 unlabeled training data,
//! 5 case-study mismatch.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use clustimpute::casestudy::{run_case_study, Fixtures, DEFAULT_TOLERANCE};
use clustimpute::eval::{run_experiment, ExperimentConfig};
use clustimpute::{
    classify_mapped, classify_raw_knn, fit_classification_model, impute_dataset, read_dataset, ClassificationResult,
    Dataset, Error, ImputeConfig, InitPolicy, NearestMode, Schema, Type2Scaling,
};
use serde::de::DeserializeOwned;
use serde::Deserialize;

/// Default seed when neither a flag nor a config file sets one.
const SEED_ENV: &str = "CLUSTIMPUTE_SEED";

#[derive(Parser)]
#[command(
    name = "clustimpute",
    version,
    about = "Cluster-center mapping imputation and classification"
)]
struct Cli {
    /// Print progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fill missing cells from the nearest complete record.
    Impute(ImputeArgs),
    /// Label query records against a labeled training set.
    Classify(ClassifyArgs),
    /// Run a masking experiment described by a JSON file.
    Evaluate(EvaluateArgs),
    /// Recompute the bundled worked example and compare with its printed tables.
    Casestudy(CasestudyArgs),
}

#[derive(Args)]
struct ImputeArgs {
    /// JSON file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    schema: Option<PathBuf>,
    /// `absolute` (default) or `paper-signed`.
    #[arg(long)]
    mode: Option<NearestMode>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of clusters; defaults to the number of classes.
    #[arg(long)]
    k: Option<usize>,
    /// `farthest-first` (default) or `seeded-random`.
    #[arg(long)]
    init: Option<String>,
    /// Divide type-2 distances by the observed fraction.
    #[arg(long)]
    observed_ratio: bool,
    /// Cluster on min-max scaled attributes.
    #[arg(long)]
    min_max_scale: bool,
    /// Completed dataset.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Provenance of every filled cell.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    train: Option<PathBuf>,
    #[arg(long)]
    schema: Option<PathBuf>,
    /// Query records, same columns as the training data minus the label.
    #[arg(long)]
    query: Option<PathBuf>,
    #[arg(long)]
    mode: Option<NearestMode>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    init: Option<String>,
    /// Add the full-dimensional 1-NN labels as extra columns.
    #[arg(long)]
    with_knn_baseline: bool,
    /// Also write the per-record difference table to this file.
    #[arg(long)]
    differences: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Experiment description (JSON). May also carry `out` and `summary`.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the experiment's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Full report (JSON).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-method means (CSV).
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct CasestudyArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Diff report; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Read fixtures from this directory instead of the bundled copies.
    #[arg(long)]
    fixtures: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ImputeFile {
    data: Option<PathBuf>,
    schema: Option<PathBuf>,
    mode: Option<NearestMode>,
    seed: Option<u64>,
    k: Option<usize>,
    init: Option<InitPolicy>,
    observed_ratio: bool,
    min_max_scale: bool,
    out: Option<PathBuf>,
    report: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ClassifyFile {
    train: Option<PathBuf>,
    schema: Option<PathBuf>,
    query: Option<PathBuf>,
    mode: Option<NearestMode>,
    seed: Option<u64>,
    k: Option<usize>,
    init: Option<InitPolicy>,
    with_knn_baseline: bool,
    differences: Option<PathBuf>,
    out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct CasestudyFile {
    tolerance: Option<f64>,
    out: Option<PathBuf>,
    fixtures: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default)]
struct EvaluateOutputs {
    out: Option<PathBuf>,
    summary: Option<PathBuf>,
}

/// A failed run: exit code plus message for stderr.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Self::new(2, message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. }
            | Error::Schema(_)
            | Error::Decode { .. }
            | Error::Config(_)
            | Error::Domain(_)
            | Error::Contract(_)
            | Error::Io(_)
            | Error::Csv(_)
            | Error::Json(_) => 2,
            Error::InsufficientData(_) | Error::NoDonors(_) | Error::EmptyRecord(_) => 3,
            Error::Unlabeled(_) => 4,
            Error::Scoring(_) => 1,
        };
        Self::new(code, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let verbose = cli.verbose;
    let result = match cli.command {
        Command::Impute(a) => cmd_impute(a, verbose),
        Command::Classify(a) => cmd_classify(a, verbose),
        Command::Evaluate(a) => cmd_evaluate(a, verbose),
        Command::Casestudy(a) => cmd_casestudy(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// Output failures are internal, not input errors.
fn write_text(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))
}

/// Parses a config file; relative paths inside it are taken from its directory.
fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<(T, PathBuf), Failure> {
    match path {
        None => Ok((T::default(), PathBuf::new())),
        Some(p) => {
            let value =
                serde_json::from_str(&read_text(p)?).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
            Ok((value, p.parent().map(Path::to_path_buf).unwrap_or_default()))
        }
    }
}

fn pick(flag: Option<PathBuf>, file: Option<PathBuf>, base: &Path, name: &str) -> Result<PathBuf, Failure> {
    flag.or_else(|| file.map(|p| base.join(p)))
        .ok_or_else(|| Failure::usage(format!("missing --{name}")))
}

fn env_seed() -> Result<u64, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{SEED_ENV}={s} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

/// Flag beats config file beats environment.
fn resolve_init(flag: Option<String>, file: Option<InitPolicy>, seed: u64) -> Result<InitPolicy, Failure> {
    match flag.as_deref() {
        Some("farthest-first") => Ok(InitPolicy::FarthestFirst { seed }),
        Some("seeded-random") => Ok(InitPolicy::SeededRandom { seed }),
        Some(other) => Err(Failure::usage(format!(
            "unknown --init `{other}` (farthest-first, seeded-random)"
        ))),
        None => Ok(match file {
            Some(InitPolicy::FarthestFirst { .. }) | None => InitPolicy::FarthestFirst { seed },
            Some(InitPolicy::SeededRandom { .. }) => InitPolicy::SeededRandom { seed },
            Some(fixed @ InitPolicy::FixedPartition { .. }) => fixed,
        }),
    }
}

fn seed_of(flag: Option<u64>, file: Option<u64>) -> Result<u64, Failure> {
    match flag.or(file) {
        Some(s) => Ok(s),
        None => env_seed(),
    }
}

fn load_data(data: &Path, schema: &Path) -> Result<Dataset, Failure> {
    let schema = Schema::from_json_str(&read_text(schema)?)?;
    Ok(read_dataset(&read_text(data)?, &schema)?)
}

fn cmd_impute(a: ImputeArgs, verbose: bool) -> Outcome {
    let (file, base): (ImputeFile, _) = load_config(a.config.as_deref())?;
    let data = pick(a.data, file.data, &base, "data")?;
    let schema = pick(a.schema, file.schema, &base, "schema")?;
    let out = pick(a.out, file.out, &base, "out")?;
    let report = a.report.or_else(|| file.report.map(|p| base.join(p)));
    let seed = seed_of(a.seed, file.seed)?;
    let config = ImputeConfig {
        k: a.k.or(file.k),
        init: resolve_init(a.init, file.init, seed)?,
        mode: a.mode.or(file.mode).unwrap_or_default(),
        type2_scaling: if a.observed_ratio || file.observed_ratio {
            Type2Scaling::ObservedRatio
        } else {
            Type2Scaling::None
        },
        min_max_scale: a.min_max_scale || file.min_max_scale,
    };

    let dataset = load_data(&data, &schema)?;
    let result = impute_dataset(&dataset, &config)?;
    if verbose {
        eprintln!(
            "{} records, {} cells filled, mode {}",
            dataset.len(),
            result.cells.len(),
            config.mode
        );
    }
    write_text(&out, &result.completed.to_csv()?)?;
    if let Some(report) = report {
        write_text(&report, &result.provenance_csv()?)?;
    }
    Ok(())
}

/// `Level-2 via R8`; several labels or donors are space separated.
fn describe(r: &ClassificationResult) -> String {
    format!("{} via {}", r.labels.join(" "), r.nearest.join(" "))
}

fn csv_line(fields: &[&str]) -> String {
    let quoted: Vec<String> = fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.to_string()
            }
        })
        .collect();
    quoted.join(",") + "\n"
}

fn cmd_classify(a: ClassifyArgs, verbose: bool) -> Outcome {
    let (file, base): (ClassifyFile, _) = load_config(a.config.as_deref())?;
    let train = pick(a.train, file.train, &base, "train")?;
    let schema_path = pick(a.schema, file.schema, &base, "schema")?;
    let query = pick(a.query, file.query, &base, "query")?;
    let out = pick(a.out, file.out, &base, "out")?;
    let differences = a.differences.or_else(|| file.differences.map(|p| base.join(p)));
    let with_knn = a.with_knn_baseline || file.with_knn_baseline;
    let mode = a.mode.or(file.mode).unwrap_or_default();
    let seed = seed_of(a.seed, file.seed)?;
    let init = resolve_init(a.init, file.init, seed)?;

    let schema = Schema::from_json_str(&read_text(&schema_path)?)?;
    let training = read_dataset(&read_text(&train)?, &schema)?;
    if let Some(r) = training.records.iter().find(|r| r.label.is_none()) {
        return Err(Error::Unlabeled(format!("training record `{}` has no label", r.id)).into());
    }
    let query_text = read_text(&query)?;
    // A query file must reuse the training encoding for categorical symbols.
    let queries = if query_text.trim().is_empty() {
        Vec::new()
    } else {
        read_dataset(&query_text, &training.schema)?.records
    };

    let mut header = vec!["query_id", "labels", "nearest", "prediction"];
    if with_knn {
        header.extend(["knn_labels", "knn_nearest"]);
    }
    let mut report = csv_line(&header);
    let mut diff_report = String::new();
    if !queries.is_empty() {
        let model = fit_classification_model(&training, a.k.or(file.k), &init)?;
        let _ = writeln!(diff_report, "query_id,record,difference");
        for q in &queries {
            let mapped = classify_mapped(q, &training, &model, mode)?;
            let labels = mapped.labels.join(" ");
            let nearest = mapped.nearest.join(" ");
            let prediction = describe(&mapped);
            let mut row = vec![q.id.as_str(), &labels, &nearest, &prediction];
            let (knn_labels, knn_nearest);
            if with_knn {
                let knn = classify_raw_knn(q, &training)?;
                knn_labels = knn.labels.join(" ");
                knn_nearest = knn.nearest.join(" ");
                row.extend([knn_labels.as_str(), knn_nearest.as_str()]);
            }
            report.push_str(&csv_line(&row));
            for (id, d) in &mapped.distances {
                let _ = writeln!(diff_report, "{},{id},{d}", q.id);
            }
            if verbose {
                eprintln!("{}: {prediction}", q.id);
            }
        }
    }
    write_text(&out, &report)?;
    if let Some(path) = differences {
        write_text(&path, &diff_report)?;
    }
    Ok(())
}

fn cmd_evaluate(a: EvaluateArgs, verbose: bool) -> Outcome {
    let text = read_text(&a.config)?;
    let mut experiment = ExperimentConfig::from_json_str(&text)?;
    let outputs: EvaluateOutputs = serde_json::from_str(&text).map_err(Error::from)?;
    let base = a.config.parent().map(Path::to_path_buf).unwrap_or_default();
    if let Some(seed) = a.seed {
        experiment.master_seed = seed;
    }
    let out = pick(a.out, outputs.out, &base, "out")?;
    let summary = a.summary.or_else(|| outputs.summary.map(|p| base.join(p)));

    let report = run_experiment(&experiment, &base)?;
    if verbose {
        eprintln!("{} trial results", report.trials.len());
    }
    write_text(&out, &report.to_json()?)?;
    if let Some(path) = summary {
        write_text(&path, &report.summary_csv())?;
    }
    Ok(())
}

fn cmd_casestudy(a: CasestudyArgs) -> Outcome {
    let (file, base): (CasestudyFile, _) = load_config(a.config.as_deref())?;
    let tolerance = a.tolerance.or(file.tolerance).unwrap_or(DEFAULT_TOLERANCE);
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(Failure::usage(format!(
            "tolerance {tolerance} must be a non-negative number"
        )));
    }
    let fixtures = match a.fixtures.or_else(|| file.fixtures.map(|p| base.join(p))) {
        Some(dir) => Fixtures::load(&dir)?,
        None => Fixtures::bundled(),
    };
    let report = run_case_study(&fixtures, tolerance)?;
    let text = report.render();
    match a.out.or_else(|| file.out.map(|p| base.join(p))) {
        Some(path) => write_text(&path, &text)?,
        None => print!("{text}"),
    }
    if let Some(c) = report.mismatches().first() {
        return Err(Failure::new(
            5,
            format!(
                "table {} record {} column {}: printed {}, computed {}",
                c.table, c.record, c.column, c.printed, c.computed
            ),
        ));
    }
    if let Some(o) = report.failed_outcomes().first() {
        return Err(Failure::new(
            5,
            format!(
                "table {} {}: expected `{}`, got `{}`",
                o.table, o.name, o.expected, o.actual
            ),
        ));
    }
    Ok(())
}
