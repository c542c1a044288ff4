//! The `rboost` command line.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bench::{
    run_adaptive_eval, run_comparison, run_ucurve, CurvePoint, ExperimentOptions, SyntheticSpec,
    TrialReport, DEFAULT_K_MAX,
};
use crate::boosters::train;
use crate::config::{Algorithm, LearnerSpec, TrainConfig};
use crate::error::{Error, Result};
use crate::geometry::clip;
use crate::io::{
    emit_results, load_csv, load_feature_rows, load_model, read_table, realdata_experiment,
    realdata_experiment_presplit, save_model, Cell, CsvSchema, OutputFormat, RealDataConfig,
    RealDataReport, ResultTable, RunManifest, TargetColumn,
};
use crate::selection::u_grid;

#[derive(Debug, Parser)]
#[command(name = "rboost", version, about = "L2 boosting, re-scale boosting and data-driven re-scale boosting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare algorithms on synthetic targets with test-selected parameters.
    Simulate(SimArgs),
    /// RBoosting test RMSE as a function of the re-scale factor u.
    Ucurve(SimArgs),
    /// Validation-based selection of (u, k) against the test-selected ideal.
    Adaptive(SimArgs),
    /// Train on a CSV file and save the model.
    Fit(FitArgs),
    /// Predict with a saved model.
    Predict(PredictArgs),
    /// Compare the three algorithms on a real dataset.
    Realdata(RealArgs),
    /// Print a stored delimited result file as an aligned table.
    Report { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Boost,
    Rboost,
    Ddr,
    All,
}

impl AlgoArg {
    fn algorithms(self) -> Vec<Algorithm> {
        match self {
            AlgoArg::Boost => vec![Algorithm::Boosting],
            AlgoArg::Rboost => vec![Algorithm::RBoosting],
            AlgoArg::Ddr => vec![Algorithm::DDRBoosting],
            AlgoArg::All => Algorithm::ALL.to_vec(),
        }
    }
}

/// `COUNT:LO:HI`, for example `20:1:1e6`.
#[derive(Debug, Clone, PartialEq)]
struct GridArg {
    count: usize,
    lo: f64,
    hi: f64,
}

impl std::str::FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [count, lo, hi] = parts[..] else {
            return Err(format!("expected COUNT:LO:HI, got {s:?}"));
        };
        Ok(Self {
            count: count.parse().map_err(|_| format!("bad grid count {count:?}"))?,
            lo: lo.parse().map_err(|_| format!("bad grid lower bound {lo:?}"))?,
            hi: hi.parse().map_err(|_| format!("bad grid upper bound {hi:?}"))?,
        })
    }
}

impl GridArg {
    fn values(&self) -> Result<Vec<u64>> {
        u_grid(self.count, self.lo, self.hi)
    }
}

#[derive(Debug, Args)]
struct SimArgs {
    /// Target functions (1-9), comma separated.
    #[arg(long = "target", value_delimiter = ',', required = true)]
    targets: Vec<u8>,
    /// Noise levels, comma separated.
    #[arg(long = "sigma", value_delimiter = ',', default_value = "0")]
    sigmas: Vec<f64>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Tree split budget J.
    #[arg(long = "j", default_value_t = 4)]
    splits: usize,
    #[arg(long, default_value_t = DEFAULT_K_MAX)]
    k_max: usize,
    #[arg(long, default_value = "20:1:1e6")]
    grid: GridArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "all")]
    algo: AlgoArg,
    #[arg(long, default_value_t = 500)]
    train_m: usize,
    #[arg(long, default_value_t = 1000)]
    test_m: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CsvArgs {
    /// Target column: 0-based index or header name (default: last column).
    #[arg(long)]
    target_column: Option<String>,
    #[arg(long)]
    no_header: bool,
    #[arg(long, default_value_t = ',')]
    delimiter: char,
}

impl CsvArgs {
    fn schema(&self) -> Result<CsvSchema> {
        if !self.delimiter.is_ascii() {
            return Err(Error::invalid("delimiter must be a single ASCII character"));
        }
        Ok(CsvSchema {
            has_header: !self.no_header,
            target: match &self.target_column {
                Some(t) => t.parse().expect("infallible"),
                None => TargetColumn::Last,
            },
            delimiter: self.delimiter as u8,
        })
    }
}

#[derive(Debug, Args)]
struct FitArgs {
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    csv: CsvArgs,
    #[arg(long, value_enum, default_value = "rboost")]
    algo: AlgoArg,
    #[arg(long, default_value_t = 1)]
    u: u64,
    #[arg(long = "j", default_value_t = 4)]
    splits: usize,
    #[arg(long, default_value_t = 100)]
    k_max: usize,
    #[arg(long)]
    clip: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    csv: CsvArgs,
    /// Every column of the input is a feature.
    #[arg(long)]
    no_target: bool,
    /// Clip predictions to [-M, M], overriding the model's bound.
    #[arg(long)]
    clip: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RealArgs {
    #[arg(long, required_unless_present = "pre_split")]
    data: Option<PathBuf>,
    /// Use a given train/test pair instead of a random half/half split.
    #[arg(long, num_args = 2, value_names = ["TRAIN", "TEST"], conflicts_with = "data")]
    pre_split: Option<Vec<PathBuf>>,
    #[command(flatten)]
    csv: CsvArgs,
    #[arg(long = "j", default_value_t = 1)]
    splits: usize,
    #[arg(long, default_value_t = DEFAULT_K_MAX)]
    k_max: usize,
    #[arg(long, default_value = "20:1:1e6")]
    grid: GridArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `argv` (including the program name) and runs the command.
/// Returns the process exit status: 0 on success, 2 on usage errors and 1
/// on any other failure.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let args: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match run(cli.command, args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn run(command: Command, args: Vec<String>) -> Result<()> {
    match command {
        Command::Simulate(a) => simulate(a, args),
        Command::Ucurve(a) => ucurve(a, args),
        Command::Adaptive(a) => adaptive(a, args),
        Command::Fit(a) => fit(a, args),
        Command::Predict(a) => predict(a, args),
        Command::Realdata(a) => realdata(a, args),
        Command::Report { file } => {
            print!("{}", read_table(&file)?.render(OutputFormat::Aligned));
            Ok(())
        }
    }
}

fn finish(table: &ResultTable, out: Option<&Path>, stem: &str, manifest: &RunManifest) -> Result<()> {
    print!("{}", table.render(OutputFormat::Aligned));
    if let Some(dir) = out {
        for p in emit_results(table, OutputFormat::Delimited, dir, stem, manifest)? {
            log::info!("wrote {}", p.display());
        }
    }
    Ok(())
}

impl SimArgs {
    fn options(&self) -> Result<ExperimentOptions> {
        Ok(ExperimentOptions {
            k_max: self.k_max,
            splits: self.splits,
            grid: self.grid.values()?,
        })
    }

    fn specs(&self) -> Vec<SyntheticSpec> {
        let mut specs = Vec::new();
        for &t in &self.targets {
            for &s in &self.sigmas {
                specs.push(SyntheticSpec {
                    train_m: self.train_m,
                    test_m: self.test_m,
                    trials: self.trials,
                    seed_base: self.seed,
                    ..SyntheticSpec::new(t, s)
                });
            }
        }
        specs
    }

    fn manifest(&self, command: &str, args: Vec<String>, opts: &ExperimentOptions) -> RunManifest {
        let config = json!({
            "targets": self.targets,
            "sigmas": self.sigmas,
            "trials": self.trials,
            "train_m": self.train_m,
            "test_m": self.test_m,
            "algorithms": self.algo.algorithms().iter().map(|a| a.name()).collect::<Vec<_>>(),
            "options": opts,
        });
        RunManifest::new(command, args, config, vec![self.seed])
    }
}

const TRIAL_COLUMNS: &[&str] = &[
    "target", "sigma", "method", "selection", "trial", "rmse", "rmse_std", "k", "u", "u_std",
];

fn report_rows(report: &TrialReport, selection_of: impl Fn(&str) -> &'static str) -> ResultTable {
    let mut t = ResultTable::new(TRIAL_COLUMNS);
    let target = Cell::Text(format!("m{}", report.spec.target_id));
    let sigma = Cell::Float(report.spec.noise_sigma);
    for o in &report.outcomes {
        t.push(vec![
            target.clone(),
            sigma.clone(),
            o.method.name().into(),
            selection_of(o.method.name()).into(),
            o.trial.into(),
            o.rmse.into(),
            Cell::Empty,
            o.k.into(),
            o.u.into(),
            Cell::Empty,
        ]);
    }
    for s in &report.summaries {
        t.push(vec![
            target.clone(),
            sigma.clone(),
            s.method.name().into(),
            selection_of(s.method.name()).into(),
            "mean".into(),
            s.mean_rmse.into(),
            s.std_rmse.into(),
            s.mean_k.into(),
            s.mean_u.into(),
            s.std_u.into(),
        ]);
    }
    t
}

fn simulate(a: SimArgs, args: Vec<String>) -> Result<()> {
    let opts = a.options()?;
    let mut table = ResultTable::new(TRIAL_COLUMNS);
    for spec in a.specs() {
        let rep = run_comparison(&spec, &a.algo.algorithms(), &opts)?;
        table.append(report_rows(&rep, |_| "oracle"));
    }
    finish(&table, a.out.as_deref(), "simulate", &a.manifest("simulate", args, &opts))
}

fn curve_rows(target: u8, sigma: f64, curve: &[CurvePoint]) -> ResultTable {
    let mut t = ResultTable::new(&["target", "sigma", "u", "mean_rmse", "std_rmse"]);
    for p in curve {
        t.push(vec![
            Cell::Text(format!("m{target}")),
            sigma.into(),
            p.u.into(),
            p.mean_rmse.into(),
            p.std_rmse.into(),
        ]);
    }
    t
}

fn ucurve(a: SimArgs, args: Vec<String>) -> Result<()> {
    let opts = a.options()?;
    let mut table = ResultTable::new(&["target", "sigma", "u", "mean_rmse", "std_rmse"]);
    for spec in a.specs() {
        let curve = run_ucurve(&spec, &opts)?;
        table.append(curve_rows(spec.target_id, spec.noise_sigma, &curve));
    }
    finish(&table, a.out.as_deref(), "ucurve", &a.manifest("ucurve", args, &opts))
}

fn adaptive(a: SimArgs, args: Vec<String>) -> Result<()> {
    let opts = a.options()?;
    let mut table = ResultTable::new(TRIAL_COLUMNS);
    for spec in a.specs() {
        let rep = run_adaptive_eval(&spec, &opts)?;
        table.append(report_rows(&rep, |name| {
            if name == "RBoosting" {
                "oracle"
            } else {
                "validation"
            }
        }));
    }
    finish(&table, a.out.as_deref(), "adaptive", &a.manifest("adaptive", args, &opts))
}

fn fit(a: FitArgs, args: Vec<String>) -> Result<()> {
    let data = load_csv(&a.data, &a.csv.schema()?)?;
    let algorithm = match a.algo.algorithms()[..] {
        [one] => one,
        _ => return Err(Error::invalid("fit needs a single algorithm (boost, rboost or ddr)")),
    };
    let config = TrainConfig {
        algorithm,
        max_iterations: a.k_max,
        u: a.u,
        learner: LearnerSpec::Tree { splits: a.splits },
        clip_bound: a.clip,
        seed: a.seed,
    };
    let (model, trace) = train(&data, &config)?;
    std::fs::create_dir_all(&a.out).map_err(|e| Error::io(&a.out, e))?;
    let model_path = a.out.join("model.json");
    save_model(&model, &model_path)?;
    let mut manifest = RunManifest::new(
        "fit",
        args,
        json!({
            "data": a.data,
            "algorithm": algorithm.name(),
            "k_max": a.k_max,
            "u": a.u,
            "splits": a.splits,
            "clip": a.clip,
            "stages": model.len(),
            "stop": trace.stop,
        }),
        vec![a.seed],
    );
    manifest.outputs.push("model.json".into());
    manifest.write(a.out.join("fit.manifest.json"))?;
    let final_risk = trace.risk_at(trace.len()).unwrap_or(f64::NAN);
    println!(
        "{} stages ({:?}), training rmse {:.6}, saved to {}",
        model.len(),
        trace.stop,
        final_risk.sqrt(),
        model_path.display()
    );
    Ok(())
}

fn predict(a: PredictArgs, args: Vec<String>) -> Result<()> {
    let model = load_model(&a.model)?;
    let rows = load_feature_rows(&a.data, &a.csv.schema()?, !a.no_target)?;
    let bound = a.clip.or(model.clip_bound());
    let mut table = ResultTable::new(&["prediction"]);
    for (i, x) in rows.iter().enumerate() {
        let raw = model.predict(x).map_err(|e| Error::invalid(format!("row {i}: {e}")))?;
        let p = match bound {
            Some(b) => clip(raw, b)?,
            None => raw,
        };
        table.push(vec![p.into()]);
    }
    match &a.out {
        Some(dir) => {
            let manifest = RunManifest::new(
                "predict",
                args,
                json!({ "model": a.model, "data": a.data, "clip": bound }),
                vec![],
            );
            emit_results(&table, OutputFormat::Delimited, dir, "predictions", &manifest)?;
        }
        None => {
            for row in &table.rows {
                if let Cell::Float(v) = row[0] {
                    println!("{v:?}");
                }
            }
        }
    }
    Ok(())
}

fn realdata_rows(rep: &RealDataReport) -> ResultTable {
    let mut t = ResultTable::new(&["method", "test_rmse", "train_rmse", "k", "u", "train_rows", "test_rows"]);
    for r in &rep.rows {
        t.push(vec![
            r.method.name().into(),
            r.test_rmse.into(),
            r.train_rmse.into(),
            r.k.into(),
            r.u.into(),
            rep.train_rows.into(),
            rep.test_rows.into(),
        ]);
    }
    t
}

fn realdata(a: RealArgs, args: Vec<String>) -> Result<()> {
    let schema = a.csv.schema()?;
    let config = RealDataConfig {
        k_max: a.k_max,
        splits: a.splits,
        grid: a.grid.values()?,
        seed: a.seed,
    };
    let report = match (&a.data, &a.pre_split) {
        (_, Some(pair)) => {
            let train_set = load_csv(&pair[0], &schema)?;
            let test = load_csv(&pair[1], &schema)?;
            realdata_experiment_presplit(&train_set, &test, &config)?
        }
        (Some(path), None) => realdata_experiment(&load_csv(path, &schema)?, &config)?,
        (None, None) => return Err(Error::invalid("either --data or --pre-split is required")),
    };
    let manifest = RunManifest::new(
        "realdata",
        args,
        json!({ "data": a.data, "pre_split": a.pre_split, "config": config }),
        vec![a.seed],
    );
    finish(&realdata_rows(&report), a.out.as_deref(), "realdata", &manifest)
}
