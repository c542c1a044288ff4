//! The three L2 training loops.
//!
//! All of them share the same skeleton: compute the residual `r = y - f`,
//! obtain a unit-norm learner `g` correlated with `r`, then update
//! `f <- (1 - alpha) f + beta g`. They differ only in how `(alpha, beta)`
//! is chosen:
//!
//! * Boosting: `alpha = 0`, `beta = <r, g>`.
//! * RBoosting: `alpha = 2 / (k + u)`, `beta = <y - (1 - alpha) f, g>`.
//! * DDRBoosting: `(alpha, beta)` minimize the empirical risk over all of R^2.

use serde::Serialize;

use crate::config::{Algorithm, LearnerSpec, TrainConfig};
use crate::dataset::Dataset;
use crate::ensemble::{Ensemble, Stage};
use crate::error::{Error, Result};
use crate::geometry::{mean_product, mean_square, mean_squared_diff, DEGENERATE_NORM};
use crate::learners::dictionary::best_column;
use crate::learners::{unit_scale, DictionaryAtom, NormalizedLearner, TreeFitter, WeakLearner};

/// `alpha_k = 2 / (k + u)`.
pub fn shrinkage_alpha(k: u64, u: u64) -> Result<f64> {
    if k < 1 || u < 1 {
        return Err(Error::invalid(format!(
            "shrinkage schedule needs k >= 1 and u >= 1 (got k={k}, u={u})"
        )));
    }
    Ok(2.0 / (k as f64 + u as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShrinkageSchedule {
    u: u64,
}

impl ShrinkageSchedule {
    pub fn new(u: u64) -> Result<Self> {
        if u < 1 {
            return Err(Error::invalid("u must be at least 1"));
        }
        Ok(Self { u })
    }

    pub fn u(&self) -> u64 {
        self.u
    }

    pub fn alpha(&self, k: u64) -> f64 {
        debug_assert!(k >= 1);
        2.0 / (k as f64 + self.u as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineSearch {
    pub alpha: f64,
    pub beta: f64,
    /// The Gram matrix was near-singular and a one-dimensional step was taken.
    pub fallback: bool,
}

/// Least-squares projection of `y` onto `span{f_prev, g}`, written as
/// `(1 - alpha) f_prev + beta g`.
///
/// When the Gram determinant is at most `1e-12 * |f_prev|^2 |g|^2` the two
/// directions are treated as dependent and the step falls back to
/// `alpha = 0`, `beta = <y - f_prev, g> / |g|^2`.
pub fn two_dim_linear_search(f_prev: &[f64], g: &[f64], y: &[f64]) -> Result<LineSearch> {
    if f_prev.is_empty() || f_prev.len() != g.len() || g.len() != y.len() {
        return Err(Error::invalid(format!(
            "line search needs equal non-zero lengths (got {}, {}, {})",
            f_prev.len(),
            g.len(),
            y.len()
        )));
    }
    let gg = mean_square(g);
    if !(gg.sqrt() > 0.0) {
        return Err(Error::invalid("line search direction has zero norm"));
    }
    let ff = mean_square(f_prev);
    let fg = mean_product(f_prev, g);
    let fy = mean_product(f_prev, y);
    let gy = mean_product(g, y);
    let det = ff * gg - fg * fg;
    if det <= 1e-12 * ff * gg {
        let beta = (gy - fg) / gg;
        return Ok(LineSearch {
            alpha: 0.0,
            beta,
            fallback: true,
        });
    }
    let a = (fy * gg - gy * fg) / det;
    let beta = (ff * gy - fg * fy) / det;
    Ok(LineSearch {
        alpha: 1.0 - a,
        beta,
        fallback: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationRecord {
    /// Training empirical risk after this stage.
    pub risk: f64,
    pub alpha: f64,
    pub beta: f64,
    pub l1_norm: f64,
    pub fallback: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StopReason {
    /// All requested stages were run.
    Completed,
    /// The residual vanished; the data is already fit.
    ZeroResidual,
    /// The weak learner fitted to the residual had zero empirical norm.
    DegenerateLearner,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainingTrace {
    pub initial_risk: f64,
    pub records: Vec<IterationRecord>,
    pub stop: StopReason,
}

impl TrainingTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Training risk after `k` stages, `k = 0..=len()`.
    pub fn risk_at(&self, k: usize) -> Option<f64> {
        if k == 0 {
            Some(self.initial_risk)
        } else {
            self.records.get(k - 1).map(|r| r.risk)
        }
    }
}

/// Supplies the unit-norm learner for each iteration.
enum Source<'a> {
    Tree {
        fitter: TreeFitter<'a>,
        splits: usize,
    },
    Dictionary {
        atoms: Vec<DictionaryAtom>,
        ids: Vec<usize>,
        scales: Vec<f64>,
        columns: Vec<Vec<f64>>,
    },
}

impl<'a> Source<'a> {
    fn new(data: &'a Dataset, spec: &LearnerSpec) -> Result<Self> {
        match spec {
            LearnerSpec::Tree { splits } => Ok(Source::Tree {
                fitter: TreeFitter::new(data),
                splits: *splits,
            }),
            LearnerSpec::Dictionary(all) => {
                let mut atoms = Vec::new();
                let mut ids = Vec::new();
                let mut scales = Vec::new();
                let mut columns = Vec::new();
                for atom in all {
                    let raw: Vec<f64> = data.rows().map(|x| atom.evaluate(x)).collect();
                    if raw.iter().any(|v| !v.is_finite()) {
                        return Err(Error::invalid(format!("atom {} is not finite on the data", atom.id)));
                    }
                    // Atoms vanishing on the sample can never be selected usefully.
                    if let Ok(scale) = unit_scale(&raw) {
                        columns.push(raw.iter().map(|v| v * scale).collect());
                        scales.push(scale);
                        ids.push(atom.id);
                        atoms.push(atom.clone());
                    }
                }
                if atoms.is_empty() {
                    return Err(Error::invalid("every dictionary atom vanishes on the data"));
                }
                Ok(Source::Dictionary {
                    atoms,
                    ids,
                    scales,
                    columns,
                })
            }
        }
    }

    /// The learner chosen against `residual`, with its predictions on the
    /// training rows; `None` when it is degenerate.
    fn next(&self, residual: &[f64]) -> Result<Option<(NormalizedLearner, Vec<f64>)>> {
        match self {
            Source::Tree { fitter, splits } => {
                let (tree, mut preds) = fitter.fit_with_predictions(residual, *splits)?;
                let scale = match unit_scale(&preds) {
                    Ok(s) => s,
                    Err(Error::DegenerateLearner { .. }) => return Ok(None),
                    Err(e) => return Err(e),
                };
                for p in &mut preds {
                    *p *= scale;
                }
                let learner = NormalizedLearner {
                    base: WeakLearner::Tree(tree),
                    scale,
                };
                Ok(Some((learner, preds)))
            }
            Source::Dictionary {
                atoms,
                ids,
                scales,
                columns,
            } => {
                let (j, _) = best_column(columns, ids, residual);
                let learner = NormalizedLearner {
                    base: WeakLearner::Atom(atoms[j].clone()),
                    scale: scales[j],
                };
                Ok(Some((learner, columns[j].clone())))
            }
        }
    }
}

fn run_loop<F>(data: &Dataset, config: &TrainConfig, mut step: F) -> Result<(Ensemble, TrainingTrace)>
where
    F: FnMut(u64, &[f64], &[f64], &[f64]) -> Result<LineSearch>,
{
    config.validate()?;
    let source = Source::new(data, &config.learner)?;
    let y = data.targets();
    let m = data.len();
    let mut model = Ensemble::new();
    model.set_clip_bound(config.clip_bound)?;
    let mut f = vec![model.offset(); m];
    let mut residual = vec![0.0; m];
    let mut trace = TrainingTrace {
        initial_risk: mean_squared_diff(&f, y),
        records: Vec::with_capacity(config.max_iterations),
        stop: StopReason::Completed,
    };

    for k in 1..=config.max_iterations as u64 {
        for ((r, yi), fi) in residual.iter_mut().zip(y).zip(&f) {
            *r = yi - fi;
        }
        if mean_square(&residual).sqrt() <= DEGENERATE_NORM {
            trace.stop = StopReason::ZeroResidual;
            break;
        }
        let Some((learner, g)) = source.next(&residual)? else {
            trace.stop = StopReason::DegenerateLearner;
            break;
        };
        let ls = step(k, &f, &g, &residual)?;
        let keep = 1.0 - ls.alpha;
        for (fi, gi) in f.iter_mut().zip(&g) {
            *fi = keep * *fi + ls.beta * gi;
        }
        model.push(Stage {
            alpha: ls.alpha,
            beta: ls.beta,
            learner,
        });
        trace.records.push(IterationRecord {
            risk: mean_squared_diff(&f, y),
            alpha: ls.alpha,
            beta: ls.beta,
            l1_norm: model.l1_norm(),
            fallback: ls.fallback,
        });
    }
    Ok((model, trace))
}

/// Plain L2 boosting: full line search along each new learner.
pub fn train_boosting(data: &Dataset, config: &TrainConfig) -> Result<(Ensemble, TrainingTrace)> {
    run_loop(data, config, |_, _, g, r| {
        Ok(LineSearch {
            alpha: 0.0,
            beta: mean_product(r, g),
            fallback: false,
        })
    })
}

/// Re-scale boosting: the running estimate is shrunk by `1 - 2/(k+u)` before
/// the line search. The learner is still chosen against the plain residual.
pub fn train_rboosting(data: &Dataset, config: &TrainConfig) -> Result<(Ensemble, TrainingTrace)> {
    let schedule = ShrinkageSchedule::new(config.u)?;
    let y = data.targets();
    let mut shrunk = vec![0.0; data.len()];
    run_loop(data, config, |k, f, g, _| {
        let alpha = schedule.alpha(k);
        let keep = 1.0 - alpha;
        for ((s, yi), fi) in shrunk.iter_mut().zip(y).zip(f) {
            *s = yi - keep * fi;
        }
        Ok(LineSearch {
            alpha,
            beta: mean_product(&shrunk, g),
            fallback: false,
        })
    })
}

/// Data-driven re-scale boosting: `(alpha, beta)` from the exact 2-D search.
pub fn train_ddrboosting(data: &Dataset, config: &TrainConfig) -> Result<(Ensemble, TrainingTrace)> {
    let y = data.targets();
    run_loop(data, config, |_, f, g, _| two_dim_linear_search(f, g, y))
}

/// Dispatches on `config.algorithm`.
pub fn train(data: &Dataset, config: &TrainConfig) -> Result<(Ensemble, TrainingTrace)> {
    match config.algorithm {
        Algorithm::Boosting => train_boosting(data, config),
        Algorithm::RBoosting => train_rboosting(data, config),
        Algorithm::DDRBoosting => train_ddrboosting(data, config),
    }
}
