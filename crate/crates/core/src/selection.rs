//! Choosing the re-scale factor `u` and the iteration count on held-out data.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::boosters::train_rboosting;
use crate::config::{Algorithm, TrainConfig};
use crate::dataset::Dataset;
use crate::ensemble::Ensemble;
use crate::error::{Error, Result};

/// `count` log-spaced values between `lo` and `hi`, rounded to integers and
/// deduplicated in order.
pub fn u_grid(count: usize, lo: f64, hi: f64) -> Result<Vec<u64>> {
    if count < 2 || !(lo >= 1.0) || !(hi > lo) || !hi.is_finite() {
        return Err(Error::invalid(format!(
            "u grid needs count >= 2 and 1 <= lo < hi (got {count}, {lo}, {hi})"
        )));
    }
    let (a, b) = (lo.log10(), hi.log10());
    let step = (b - a) / (count - 1) as f64;
    let mut out: Vec<u64> = Vec::with_capacity(count);
    for i in 0..count {
        let v = (10f64.powf(a + i as f64 * step).round() as u64).max(1);
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Learning half (first `floor(m/2)` rows) and validation half (the rest),
/// optionally after a seeded shuffle of the rows.
pub fn split_learn_validate(data: &Dataset, shuffle_seed: Option<u64>) -> Result<(Dataset, Dataset)> {
    let m = data.len();
    if m < 2 {
        return Err(Error::invalid(format!("cannot split {m} rows into two halves")));
    }
    let mut idx: Vec<usize> = (0..m).collect();
    if let Some(seed) = shuffle_seed {
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let half = m / 2;
    Ok((data.select(&idx[..half])?, data.select(&idx[half..])?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HoldoutChoice {
    /// Number of stages, in `1..=len` (0 only for an empty model).
    pub k: usize,
    /// Holdout empirical risk (mean squared error) at `k`.
    pub risk: f64,
}

impl HoldoutChoice {
    pub fn rmse(&self) -> f64 {
        self.risk.sqrt()
    }
}

/// Index `k >= 1` of the smallest entry of `risks[1..]`, first one on ties.
pub(crate) fn argmin_stage(risks: &[f64]) -> HoldoutChoice {
    if risks.len() < 2 {
        return HoldoutChoice {
            k: 0,
            risk: risks.first().copied().unwrap_or(f64::NAN),
        };
    }
    let mut best = HoldoutChoice { k: 1, risk: risks[1] };
    for (k, &r) in risks.iter().enumerate().skip(2) {
        if r < best.risk {
            best = HoldoutChoice { k, risk: r };
        }
    }
    best
}

/// Truncation of `model` with the lowest holdout error.
pub fn select_k_by_holdout(model: &Ensemble, holdout: &Dataset) -> Result<HoldoutChoice> {
    Ok(argmin_stage(&model.staged_risks(holdout)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveEntry {
    pub u: u64,
    pub best_k: usize,
    pub best_risk: f64,
}

#[derive(Debug, Clone)]
pub struct SelectionResult {
    pub chosen_u: u64,
    pub chosen_k: usize,
    pub validation_risk: f64,
    pub final_model: Ensemble,
    pub per_u_curve: Vec<CurveEntry>,
}

/// Sweeps `grid`, training RBoosting on the learning half for `k_max` stages
/// per `u` and scoring every truncation on the validation half. The pair
/// `(u, k)` with the lowest validation risk wins (ties: smaller `u`, then
/// smaller `k`). With `retrain_on_full`, the final model is retrained on all
/// of `data` with the chosen pair; otherwise it is the learning-half model
/// truncated to `k`.
///
/// `config` supplies the learner and clipping settings; its algorithm,
/// `u` and iteration budget are overridden.
pub fn adaptive_select(
    data: &Dataset,
    grid: &[u64],
    k_max: usize,
    config: &TrainConfig,
    retrain_on_full: bool,
    shuffle_seed: Option<u64>,
) -> Result<SelectionResult> {
    if grid.is_empty() {
        return Err(Error::invalid("empty u grid"));
    }
    if k_max == 0 {
        return Err(Error::invalid("k_max must be at least 1"));
    }
    let (learn, validate) = split_learn_validate(data, shuffle_seed)?;
    let base = TrainConfig {
        algorithm: Algorithm::RBoosting,
        max_iterations: k_max,
        ..config.clone()
    };
    let runs: Vec<(Ensemble, CurveEntry)> = grid
        .par_iter()
        .map(|&u| {
            let cfg = TrainConfig { u, ..base.clone() };
            let (model, _) = train_rboosting(&learn, &cfg)?;
            let choice = select_k_by_holdout(&model, &validate)?;
            Ok((
                model,
                CurveEntry {
                    u,
                    best_k: choice.k,
                    best_risk: choice.risk,
                },
            ))
        })
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (i, (_, entry)) in runs.iter().enumerate().skip(1) {
        let cur = &runs[best].1;
        if entry.best_risk < cur.best_risk || (entry.best_risk == cur.best_risk && entry.u < cur.u) {
            best = i;
        }
    }
    let chosen = runs[best].1;
    let final_model = if retrain_on_full && chosen.best_k > 0 {
        let cfg = TrainConfig {
            u: chosen.u,
            max_iterations: chosen.best_k,
            ..base.clone()
        };
        train_rboosting(data, &cfg)?.0
    } else {
        runs[best].0.truncate(chosen.best_k)?
    };
    Ok(SelectionResult {
        chosen_u: chosen.u,
        chosen_k: chosen.best_k,
        validation_risk: chosen.best_risk,
        final_model,
        per_u_curve: runs.into_iter().map(|(_, e)| e).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::LearnerSpec;
    use crate::ensemble::Stage;
    use crate::learners::{DictionaryAtom, NormalizedLearner, WeakLearner};

    #[test]
    fn grid_examples() {
        let g = u_grid(20, 1.0, 1e6).unwrap();
        assert_eq!(g.first(), Some(&1));
        assert_eq!(g.last(), Some(&1_000_000));
        assert_eq!(u_grid(2, 1.0, 100.0).unwrap(), vec![1, 100]);
        assert!(u_grid(1, 1.0, 10.0).is_err());
        assert!(u_grid(5, 0.5, 10.0).is_err());
        assert!(u_grid(5, 10.0, 10.0).is_err());
        // Rounding collapses the crowded low end of a fine grid.
        let fine = u_grid(50, 1.0, 10.0).unwrap();
        assert!(fine.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(fine.first(), Some(&1));
        assert_eq!(fine.last(), Some(&10));
    }

    #[test]
    fn grid_matches_independent_log_space() {
        let g = u_grid(20, 1.0, 1e6).unwrap();
        let expected: Vec<u64> = (0..20)
            .map(|i| 10f64.powf(6.0 * i as f64 / 19.0).round() as u64)
            .collect();
        assert_eq!(g, expected);
    }

    #[test]
    fn split_sizes() {
        for (m, a, b) in [(500, 250, 250), (5, 2, 3), (2, 1, 1)] {
            let d = Dataset::from_flat(vec![0.0; m], 1, (0..m).map(|i| i as f64).collect()).unwrap();
            let (l, v) = split_learn_validate(&d, None).unwrap();
            assert_eq!((l.len(), v.len()), (a, b));
            let (l, v) = split_learn_validate(&d, Some(3)).unwrap();
            assert_eq!((l.len(), v.len()), (a, b));
            let mut all: Vec<f64> = l.targets().iter().chain(v.targets()).copied().collect();
            all.sort_by(f64::total_cmp);
            assert_eq!(all, d.targets());
        }
        let one = Dataset::from_flat(vec![0.0], 1, vec![1.0]).unwrap();
        assert!(split_learn_validate(&one, None).is_err());
    }

    fn constant_stage(beta: f64) -> Stage {
        Stage {
            alpha: 0.0,
            beta,
            learner: NormalizedLearner {
                base: WeakLearner::Atom(DictionaryAtom::new(0, |_| 1.0)),
                scale: 1.0,
            },
        }
    }

    #[test]
    fn holdout_selection_examples() {
        let holdout = Dataset::from_flat(vec![0.0; 2], 1, vec![3.0, 3.0]).unwrap();
        // Monotone improvement: stages of +1 towards 3.
        let mut m = Ensemble::new();
        for _ in 0..3 {
            m.push(constant_stage(1.0));
        }
        assert_eq!(select_k_by_holdout(&m, &holdout).unwrap().k, 3);
        // Overshoot after the first stage.
        let mut m = Ensemble::new();
        m.push(constant_stage(3.0));
        m.push(constant_stage(5.0));
        let c = select_k_by_holdout(&m, &holdout).unwrap();
        assert_eq!((c.k, c.risk), (1, 0.0));
        // Appending a non-improving stage does not move the choice.
        m.push(constant_stage(0.0));
        assert_eq!(select_k_by_holdout(&m, &holdout).unwrap().k, 1);
    }

    #[test]
    fn holdout_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let mut m = Ensemble::new();
            for _ in 0..15 {
                m.push(Stage {
                    alpha: rng.random_range(0.0..0.5),
                    ..constant_stage(rng.random_range(-2.0..2.0))
                });
            }
            let ys: Vec<f64> = (0..6).map(|_| rng.random_range(-3.0..3.0)).collect();
            let holdout = Dataset::from_flat(vec![0.0; 6], 1, ys.clone()).unwrap();
            let mut oracle = (0usize, f64::INFINITY);
            for k in 1..=m.len() {
                let t = m.truncate(k).unwrap();
                let p = t.predict(&[0.0]).unwrap();
                let risk = ys.iter().map(|y| (p - y).powi(2)).sum::<f64>() / 6.0;
                if risk < oracle.1 - 1e-13 {
                    oracle = (k, risk);
                }
            }
            let c = select_k_by_holdout(&m, &holdout).unwrap();
            assert_eq!(c.k, oracle.0);
            assert!((c.risk - oracle.1).abs() < 1e-12);
        }
    }

    fn wiggle(n: usize) -> Dataset {
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        let ys = xs.iter().map(|x| (6.0 * x).sin() + x).collect();
        Dataset::from_flat(xs, 1, ys).unwrap()
    }

    #[test]
    fn singleton_grid_picks_that_u() {
        let data = wiggle(40);
        let cfg = TrainConfig::new(Algorithm::RBoosting, 1, LearnerSpec::Tree { splits: 2 });
        let r = adaptive_select(&data, &[7], 30, &cfg, false, None).unwrap();
        assert_eq!(r.chosen_u, 7);
        assert_eq!(r.per_u_curve.len(), 1);
        let (learn, validate) = split_learn_validate(&data, None).unwrap();
        let (model, _) = train_rboosting(&learn, &TrainConfig { u: 7, max_iterations: 30, ..cfg }).unwrap();
        let c = select_k_by_holdout(&model, &validate).unwrap();
        assert_eq!(r.chosen_k, c.k);
        assert_eq!(r.validation_risk, c.risk);
        assert!(adaptive_select(&data, &[], 30, &TrainConfig::new(Algorithm::RBoosting, 1, LearnerSpec::stumps()), false, None).is_err());
    }

    #[test]
    fn reported_risk_is_curve_minimum() {
        let data = wiggle(60);
        let cfg = TrainConfig::new(Algorithm::RBoosting, 1, LearnerSpec::Tree { splits: 3 });
        let grid = u_grid(6, 1.0, 1e4).unwrap();
        let r = adaptive_select(&data, &grid, 40, &cfg, true, Some(9)).unwrap();
        let min = r.per_u_curve.iter().map(|e| e.best_risk).fold(f64::INFINITY, f64::min);
        assert_eq!(r.validation_risk, min);
        assert_eq!(r.per_u_curve.len(), grid.len());
        assert_eq!(r.final_model.len(), r.chosen_k);
    }
}
