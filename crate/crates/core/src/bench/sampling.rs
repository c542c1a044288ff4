//! Reproducible synthetic samples.
//!
//! Each trial draws from its own ChaCha8 stream: the generator is seeded
//! with `seed_base` and the stream number is the trial index. Within a
//! stream the draw order is fixed: for every training row its `d` uniform
//! coordinates followed by one standard normal, then for every test row its
//! `d` coordinates. Normals come from the Marsaglia polar method, with the
//! second variate of each accepted pair cached for the next call.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::targets::{eval_target, target_dimension};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SyntheticSpec {
    pub target_id: u8,
    pub noise_sigma: f64,
    pub train_m: usize,
    pub test_m: usize,
    pub trials: usize,
    pub seed_base: u64,
}

impl SyntheticSpec {
    /// Defaults: 500 training rows, 1000 noiseless test rows, 20 trials.
    pub fn new(target_id: u8, noise_sigma: f64) -> Self {
        Self {
            target_id,
            noise_sigma,
            train_m: 500,
            test_m: 1000,
            trials: 20,
            seed_base: 0,
        }
    }

    pub fn dimension(&self) -> Result<usize> {
        target_dimension(self.target_id)
    }

    pub fn validate(&self) -> Result<()> {
        self.dimension()?;
        if !(self.noise_sigma >= 0.0) || !self.noise_sigma.is_finite() {
            return Err(Error::invalid(format!("noise sigma must be >= 0, got {}", self.noise_sigma)));
        }
        if self.train_m == 0 || self.test_m == 0 || self.trials == 0 {
            return Err(Error::invalid("train_m, test_m and trials must be positive"));
        }
        Ok(())
    }
}

/// Standard normal variates by the Marsaglia polar method.
pub struct PolarNormal<R> {
    rng: R,
    spare: Option<f64>,
}

impl<R: Rng> PolarNormal<R> {
    pub fn new(rng: R) -> Self {
        Self { rng, spare: None }
    }

    pub fn rng(&mut self) -> &mut R {
        &mut self.rng
    }

    pub fn sample(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.rng.random::<f64>() - 1.0;
            let v = 2.0 * self.rng.random::<f64>() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let factor = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * factor);
                return u * factor;
            }
        }
    }
}

pub(crate) fn trial_rng(seed_base: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_base);
    rng.set_stream(trial);
    rng
}

/// Training set (uniform on `[-2, 2]^d`, targets `m(x) + sigma * eps`) and a
/// noiseless test set for one trial.
pub fn sample_dataset(spec: &SyntheticSpec, trial_index: usize) -> Result<(Dataset, Dataset)> {
    spec.validate()?;
    if trial_index >= spec.trials {
        return Err(Error::invalid(format!(
            "trial index {trial_index} out of range for {} trials",
            spec.trials
        )));
    }
    let d = spec.dimension()?;
    let mut gen = PolarNormal::new(trial_rng(spec.seed_base, trial_index as u64));

    let draw = |gen: &mut PolarNormal<ChaCha8Rng>, n: usize, noisy: bool| -> Result<Dataset> {
        let mut x = Vec::with_capacity(n * d);
        let mut y = Vec::with_capacity(n);
        for _ in 0..n {
            let start = x.len();
            for _ in 0..d {
                x.push(-2.0 + 4.0 * gen.rng().random::<f64>());
            }
            let clean = eval_target(spec.target_id, &x[start..])?;
            y.push(if noisy {
                clean + spec.noise_sigma * gen.sample()
            } else {
                clean
            });
        }
        Dataset::from_flat(x, d, y)
    };
    let train = draw(&mut gen, spec.train_m, true)?;
    let test = draw(&mut gen, spec.test_m, false)?;
    Ok((train, test))
}
