//! Real-data comparison: half/half train/test split, stump learners, and
//! validation-based parameter choice for every method.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bench::Method;
use crate::boosters::train;
use crate::config::{Algorithm, LearnerSpec, TrainConfig};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::geometry::rmse;
use crate::selection::{adaptive_select, select_k_by_holdout, split_learn_validate, u_grid};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealDataConfig {
    pub k_max: usize,
    /// Tree split budget; 1 gives decision stumps.
    pub splits: usize,
    pub grid: Vec<u64>,
    pub seed: u64,
}

impl Default for RealDataConfig {
    fn default() -> Self {
        Self {
            k_max: 1000,
            splits: 1,
            grid: u_grid(20, 1.0, 1e6).expect("static grid is valid"),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealDataRow {
    pub method: Method,
    pub test_rmse: f64,
    pub train_rmse: f64,
    pub k: usize,
    pub u: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealDataReport {
    pub train_rows: usize,
    pub test_rows: usize,
    pub rows: Vec<RealDataRow>,
}

/// Seeded shuffle, then the first `floor(m/2)` rows train and the rest test.
pub fn realdata_experiment(data: &Dataset, config: &RealDataConfig) -> Result<RealDataReport> {
    if data.len() < 4 {
        return Err(Error::invalid(format!("need at least 4 rows, got {}", data.len())));
    }
    let mut idx: Vec<usize> = (0..data.len()).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(config.seed));
    let half = data.len() / 2;
    let train_set = data.select(&idx[..half])?;
    let test = data.select(&idx[half..])?;
    realdata_experiment_presplit(&train_set, &test, config)
}

/// Runs all three methods on a given train/test pair. Boosting and
/// DDRBoosting choose `k` on a learn/validate split of the training set;
/// RBoosting chooses `(u, k)` the same way. Each is then retrained on the
/// whole training set.
pub fn realdata_experiment_presplit(
    train_set: &Dataset,
    test: &Dataset,
    config: &RealDataConfig,
) -> Result<RealDataReport> {
    if train_set.dim() != test.dim() {
        return Err(Error::Dimension {
            expected: train_set.dim(),
            got: test.dim(),
        });
    }
    if train_set.len() < 2 {
        return Err(Error::invalid("training set needs at least 2 rows"));
    }
    let learner = LearnerSpec::Tree { splits: config.splits };
    let shuffle = Some(config.seed.wrapping_add(1));
    let mut rows = Vec::new();

    for algo in Algorithm::ALL {
        let (model, u) = if algo == Algorithm::RBoosting {
            let base = TrainConfig::new(algo, config.k_max, learner.clone());
            let sel = adaptive_select(train_set, &config.grid, config.k_max, &base, true, shuffle)?;
            (sel.final_model, Some(sel.chosen_u))
        } else {
            let cfg = TrainConfig::new(algo, config.k_max, learner.clone());
            let (learn, validate) = split_learn_validate(train_set, shuffle)?;
            let (m, _) = train(&learn, &cfg)?;
            let k = select_k_by_holdout(&m, &validate)?.k.max(1);
            let (full, _) = train(train_set, &TrainConfig { max_iterations: k, ..cfg })?;
            (full, None)
        };
        rows.push(RealDataRow {
            method: algo.into(),
            test_rmse: rmse(&model.predict_dataset(test)?, test.targets())?,
            train_rmse: rmse(&model.predict_dataset(train_set)?, train_set.targets())?,
            k: model.len(),
            u,
        });
    }
    Ok(RealDataReport {
        train_rows: train_set.len(),
        test_rows: test.len(),
        rows,
    })
}
