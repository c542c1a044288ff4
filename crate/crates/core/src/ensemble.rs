//! Staged additive models `f_k = (1 - alpha_k) f_{k-1} + beta_k g_k`.
//!
//! Besides the stages themselves the ensemble keeps the effective weight of
//! every learner in the current model, `c_j = beta_j * prod_{i>j} (1 - alpha_i)`,
//! updated in place as stages are appended.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::geometry::{clip, mean_squared_diff};
use crate::learners::NormalizedLearner;

#[derive(Debug, Clone)]
pub struct Stage {
    pub alpha: f64,
    pub beta: f64,
    pub learner: NormalizedLearner,
}

#[derive(Debug, Clone)]
pub struct Ensemble {
    /// Constant initial estimate `f_0`.
    offset: f64,
    stages: Vec<Stage>,
    coefficients: Vec<f64>,
    /// `prod_i (1 - alpha_i)`: the surviving weight of `f_0`.
    offset_weight: f64,
    clip_bound: Option<f64>,
}

impl Default for Ensemble {
    fn default() -> Self {
        Self::new()
    }
}

impl Ensemble {
    pub fn new() -> Self {
        Self::with_offset(0.0)
    }

    pub fn with_offset(offset: f64) -> Self {
        Self {
            offset,
            stages: Vec::new(),
            coefficients: Vec::new(),
            offset_weight: 1.0,
            clip_bound: None,
        }
    }

    pub fn push(&mut self, stage: Stage) {
        let keep = 1.0 - stage.alpha;
        for c in &mut self.coefficients {
            *c *= keep;
        }
        self.offset_weight *= keep;
        self.coefficients.push(stage.beta);
        self.stages.push(stage);
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Effective weight of each stage's learner in the full model.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn clip_bound(&self) -> Option<f64> {
        self.clip_bound
    }

    pub fn set_clip_bound(&mut self, bound: Option<f64>) -> Result<()> {
        if let Some(b) = bound {
            if !(b > 0.0) {
                return Err(Error::invalid(format!("clip bound must be > 0, got {b}")));
            }
        }
        self.clip_bound = bound;
        Ok(())
    }

    /// Input dimension implied by the tree learners, if any.
    pub fn input_dim(&self) -> Option<usize> {
        self.stages.iter().find_map(|s| s.learner.base.input_dim())
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        match self.input_dim() {
            Some(d) if d != x.len() => Err(Error::Dimension {
                expected: d,
                got: x.len(),
            }),
            _ => Ok(()),
        }
    }

    /// Evaluates the staged recursion at `x` (unclipped).
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.predict_unchecked(x))
    }

    pub(crate) fn predict_unchecked(&self, x: &[f64]) -> f64 {
        self.stages.iter().fold(self.offset, |f, s| {
            (1.0 - s.alpha) * f + s.beta * s.learner.predict(x)
        })
    }

    /// Prediction through the effective-coefficient expansion
    /// `sum_j c_j g_j(x) + prod_i (1 - alpha_i) f_0`.
    pub fn predict_expanded(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        let sum: f64 = self
            .stages
            .iter()
            .zip(&self.coefficients)
            .map(|(s, c)| c * s.learner.predict(x))
            .sum();
        Ok(sum + self.offset_weight * self.offset)
    }

    /// Prediction truncated to `[-M, M]` when a clip bound is set.
    pub fn predict_clipped(&self, x: &[f64]) -> Result<f64> {
        let raw = self.predict(x)?;
        match self.clip_bound {
            Some(b) => clip(raw, b),
            None => Ok(raw),
        }
    }

    pub fn predict_dataset(&self, data: &Dataset) -> Result<Vec<f64>> {
        data.rows().map(|x| self.predict(x)).collect()
    }

    /// `sum_j |c_j|`, an upper bound on the model's dictionary l1 norm.
    pub fn l1_norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c.abs()).sum()
    }

    /// The model formed by the first `k` stages.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        if k > self.len() {
            return Err(Error::invalid(format!(
                "cannot truncate a {}-stage model to {k} stages",
                self.len()
            )));
        }
        let mut out = Self::with_offset(self.offset);
        out.clip_bound = self.clip_bound;
        for s in &self.stages[..k] {
            out.push(s.clone());
        }
        Ok(out)
    }

    /// Empirical risk on `data` of every prefix model; entry `k` is the risk
    /// after `k` stages, so the result has `len() + 1` entries.
    pub fn staged_risks(&self, data: &Dataset) -> Result<Vec<f64>> {
        if let Some(x) = data.rows().next() {
            self.check_dim(x)?;
        }
        let y = data.targets();
        let mut pred = vec![self.offset; data.len()];
        let mut risks = Vec::with_capacity(self.len() + 1);
        risks.push(mean_squared_diff(&pred, y));
        for s in &self.stages {
            let keep = 1.0 - s.alpha;
            for (p, x) in pred.iter_mut().zip(data.rows()) {
                *p = keep * *p + s.beta * s.learner.predict(x);
            }
            risks.push(mean_squared_diff(&pred, y));
        }
        Ok(risks)
    }
}
