//! Simulation harness: synthetic targets, trial orchestration and RMSE
//! statistics.
//!
//! "Ideal" numbers select the iteration count (and for RBoosting the
//! re-scale factor) directly on the noiseless test set. They measure what
//! each algorithm can reach, not what an honest procedure would pick; the
//! adaptive protocol in [`run_adaptive_eval`] is the honest counterpart.

mod sampling;
mod targets;

pub use sampling::{sample_dataset, PolarNormal, SyntheticSpec};
pub use targets::{eval_target, target_dimension};

pub use crate::geometry::rmse;

use rayon::prelude::*;
use serde::Serialize;

use crate::boosters::train;
use crate::config::{Algorithm, LearnerSpec, TrainConfig};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::selection::{adaptive_select, select_k_by_holdout, u_grid};

/// Iteration budget used by the harness unless overridden.
pub const DEFAULT_K_MAX: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentOptions {
    pub k_max: usize,
    /// Tree split budget `J`.
    pub splits: usize,
    pub grid: Vec<u64>,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        Self {
            k_max: DEFAULT_K_MAX,
            splits: 4,
            grid: u_grid(20, 1.0, 1e6).expect("static grid is valid"),
        }
    }
}

impl ExperimentOptions {
    fn validate(&self) -> Result<()> {
        if self.k_max == 0 || self.splits == 0 {
            return Err(Error::invalid("k_max and splits must be positive"));
        }
        if self.grid.is_empty() || self.grid.contains(&0) {
            return Err(Error::invalid("u grid must be non-empty with entries >= 1"));
        }
        Ok(())
    }

    fn config(&self, algorithm: Algorithm) -> TrainConfig {
        TrainConfig::new(algorithm, self.k_max, LearnerSpec::Tree { splits: self.splits })
    }
}

/// Reported method: a training algorithm plus the way its parameters were chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Method {
    Boosting,
    RBoosting,
    DDRBoosting,
    /// RBoosting with `u` and `k` chosen on a validation split.
    AdaptiveRBoosting,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Boosting => "Boosting",
            Method::RBoosting => "RBoosting",
            Method::DDRBoosting => "DDRBoosting",
            Method::AdaptiveRBoosting => "RBoosting-adaptive",
        }
    }
}

impl From<Algorithm> for Method {
    fn from(a: Algorithm) -> Self {
        match a {
            Algorithm::Boosting => Method::Boosting,
            Algorithm::RBoosting => Method::RBoosting,
            Algorithm::DDRBoosting => Method::DDRBoosting,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub method: Method,
    pub rmse: f64,
    pub k: usize,
    pub u: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MethodSummary {
    pub method: Method,
    pub mean_rmse: f64,
    pub std_rmse: f64,
    pub mean_k: f64,
    pub mean_u: Option<f64>,
    pub std_u: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub u: u64,
    pub mean_rmse: f64,
    pub std_rmse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub spec: SyntheticSpec,
    pub summaries: Vec<MethodSummary>,
    pub outcomes: Vec<TrialOutcome>,
    /// Mean ideal-k test RMSE of RBoosting per grid `u`, when swept.
    pub curve: Vec<CurvePoint>,
}

impl TrialReport {
    pub fn summary(&self, method: Method) -> Option<&MethodSummary> {
        self.summaries.iter().find(|s| s.method == method)
    }
}

/// Mean and sample standard deviation (`n - 1` denominator; 0 for one value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn summarize(outcomes: &[TrialOutcome]) -> Vec<MethodSummary> {
    let mut methods: Vec<Method> = outcomes.iter().map(|o| o.method).collect();
    methods.sort();
    methods.dedup();
    methods
        .into_iter()
        .map(|method| {
            let rows: Vec<&TrialOutcome> = outcomes.iter().filter(|o| o.method == method).collect();
            let rmses: Vec<f64> = rows.iter().map(|o| o.rmse).collect();
            let ks: Vec<f64> = rows.iter().map(|o| o.k as f64).collect();
            let us: Vec<f64> = rows.iter().filter_map(|o| o.u.map(|u| u as f64)).collect();
            let (mean_rmse, std_rmse) = mean_std(&rmses);
            let (mean_u, std_u) = if us.len() == rows.len() {
                let (m, s) = mean_std(&us);
                (Some(m), Some(s))
            } else {
                (None, None)
            };
            MethodSummary {
                method,
                mean_rmse,
                std_rmse,
                mean_k: mean_std(&ks).0,
                mean_u,
                std_u,
            }
        })
        .collect()
}

/// Trains once and picks the test-optimal truncation: `(k, rmse)`.
fn ideal_run(train_set: &Dataset, test: &Dataset, config: &TrainConfig) -> Result<(usize, f64)> {
    let (model, _) = train(train_set, config)?;
    let choice = select_k_by_holdout(&model, test)?;
    Ok((choice.k, choice.rmse()))
}

/// `(u, best k, test rmse)` per grid point.
type Sweep = Vec<(u64, usize, f64)>;

/// Ideal-k test RMSE of RBoosting for each grid `u`.
fn rboosting_sweep(
    train_set: &Dataset,
    test: &Dataset,
    opts: &ExperimentOptions,
) -> Result<Sweep> {
    let base = opts.config(Algorithm::RBoosting);
    opts.grid
        .iter()
        .map(|&u| {
            let (k, r) = ideal_run(train_set, test, &base.clone().with_u(u))?;
            Ok((u, k, r))
        })
        .collect()
}

/// Best point of a sweep; ties go to the smaller `u` (earlier grid entry).
fn best_of_sweep(sweep: &[(u64, usize, f64)]) -> (u64, usize, f64) {
    let mut best = sweep[0];
    for &p in &sweep[1..] {
        if p.2 < best.2 {
            best = p;
        }
    }
    best
}

fn curve_from(sweeps: &[Sweep]) -> Vec<CurvePoint> {
    let Some(first) = sweeps.first() else {
        return Vec::new();
    };
    (0..first.len())
        .map(|i| {
            let vals: Vec<f64> = sweeps.iter().map(|s| s[i].2).collect();
            let (mean_rmse, std_rmse) = mean_std(&vals);
            CurvePoint {
                u: first[i].0,
                mean_rmse,
                std_rmse,
            }
        })
        .collect()
}

fn trial_error(spec: &SyntheticSpec, trial: usize, e: Error) -> Error {
    Error::InvalidInput(format!(
        "target m{} sigma {} trial {trial}: {e}",
        spec.target_id, spec.noise_sigma
    ))
}

/// Oracle-selected comparison of the requested algorithms over all trials.
pub fn run_comparison(
    spec: &SyntheticSpec,
    algorithms: &[Algorithm],
    opts: &ExperimentOptions,
) -> Result<TrialReport> {
    spec.validate()?;
    opts.validate()?;
    if algorithms.is_empty() {
        return Err(Error::invalid("no algorithms requested"));
    }
    let mut algos = algorithms.to_vec();
    algos.sort();
    algos.dedup();

    let per_trial: Vec<(Vec<TrialOutcome>, Option<Sweep>)> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| {
            let run = || -> Result<_> {
                let (train_set, test) = sample_dataset(spec, trial)?;
                let mut outcomes = Vec::new();
                let mut sweep = None;
                for &algo in &algos {
                    if algo == Algorithm::RBoosting {
                        let s = rboosting_sweep(&train_set, &test, opts)?;
                        let (u, k, r) = best_of_sweep(&s);
                        outcomes.push(TrialOutcome {
                            trial,
                            method: Method::RBoosting,
                            rmse: r,
                            k,
                            u: Some(u),
                        });
                        sweep = Some(s);
                    } else {
                        let (k, r) = ideal_run(&train_set, &test, &opts.config(algo))?;
                        outcomes.push(TrialOutcome {
                            trial,
                            method: algo.into(),
                            rmse: r,
                            k,
                            u: None,
                        });
                    }
                }
                Ok((outcomes, sweep))
            };
            run().map_err(|e| trial_error(spec, trial, e))
        })
        .collect::<Result<_>>()?;

    let sweeps: Vec<Sweep> =
        per_trial.iter().filter_map(|(_, s)| s.clone()).collect();
    let outcomes: Vec<TrialOutcome> = per_trial.into_iter().flat_map(|(o, _)| o).collect();
    Ok(TrialReport {
        spec: spec.clone(),
        summaries: summarize(&outcomes),
        outcomes,
        curve: curve_from(&sweeps),
    })
}

/// Mean ideal-k test RMSE of RBoosting at every grid `u`.
pub fn run_ucurve(spec: &SyntheticSpec, opts: &ExperimentOptions) -> Result<Vec<CurvePoint>> {
    spec.validate()?;
    opts.validate()?;
    let sweeps: Vec<Sweep> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| {
            let (train_set, test) = sample_dataset(spec, trial)?;
            rboosting_sweep(&train_set, &test, opts).map_err(|e| trial_error(spec, trial, e))
        })
        .collect::<Result<_>>()?;
    Ok(curve_from(&sweeps))
}

/// Seed of the learn/validate shuffle for one trial.
fn split_seed(spec: &SyntheticSpec, trial: usize) -> u64 {
    spec.seed_base
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(trial as u64 + 1)
}

/// Adaptive protocol: per trial, select `(u, k)` on a random half/half split
/// of the training set, retrain on the full training set and score on the
/// test set. The ideal RBoosting result on the same trials is reported
/// alongside for reference.
pub fn run_adaptive_eval(spec: &SyntheticSpec, opts: &ExperimentOptions) -> Result<TrialReport> {
    spec.validate()?;
    opts.validate()?;
    let per_trial: Vec<(Vec<TrialOutcome>, Sweep)> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| {
            let run = || -> Result<_> {
                let (train_set, test) = sample_dataset(spec, trial)?;
                let sel = adaptive_select(
                    &train_set,
                    &opts.grid,
                    opts.k_max,
                    &opts.config(Algorithm::RBoosting),
                    true,
                    Some(split_seed(spec, trial)),
                )?;
                let pred = sel.final_model.predict_dataset(&test)?;
                let adaptive = TrialOutcome {
                    trial,
                    method: Method::AdaptiveRBoosting,
                    rmse: rmse(&pred, test.targets())?,
                    k: sel.chosen_k,
                    u: Some(sel.chosen_u),
                };
                let sweep = rboosting_sweep(&train_set, &test, opts)?;
                let (u, k, r) = best_of_sweep(&sweep);
                let ideal = TrialOutcome {
                    trial,
                    method: Method::RBoosting,
                    rmse: r,
                    k,
                    u: Some(u),
                };
                Ok((vec![ideal, adaptive], sweep))
            };
            run().map_err(|e| trial_error(spec, trial, e))
        })
        .collect::<Result<_>>()?;
    let sweeps: Vec<_> = per_trial.iter().map(|(_, s)| s.clone()).collect();
    let outcomes: Vec<TrialOutcome> = per_trial.into_iter().flat_map(|(o, _)| o).collect();
    Ok(TrialReport {
        spec: spec.clone(),
        summaries: summarize(&outcomes),
        outcomes,
        curve: curve_from(&sweeps),
    })
}
