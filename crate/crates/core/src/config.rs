use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::DictionaryAtom;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    Boosting,
    RBoosting,
    DDRBoosting,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Boosting, Algorithm::RBoosting, Algorithm::DDRBoosting];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Boosting => "Boosting",
            Algorithm::RBoosting => "RBoosting",
            Algorithm::DDRBoosting => "DDRBoosting",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Where each iteration's weak learner comes from.
#[derive(Debug, Clone)]
pub enum LearnerSpec {
    /// Least-squares tree with this many splits fitted to the residual.
    Tree { splits: usize },
    /// Explicit finite dictionary scanned for the best-correlated atom.
    Dictionary(Vec<DictionaryAtom>),
}

impl LearnerSpec {
    pub fn stumps() -> Self {
        LearnerSpec::Tree { splits: 1 }
    }

    pub fn describe(&self) -> String {
        match self {
            LearnerSpec::Tree { splits } => format!("tree(splits={splits})"),
            LearnerSpec::Dictionary(atoms) => format!("dictionary(size={})", atoms.len()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub algorithm: Algorithm,
    /// Number of stages `k*` to run.
    pub max_iterations: usize,
    /// Re-scale factor of the schedule `alpha_k = 2 / (k + u)`; only read by RBoosting.
    pub u: u64,
    pub learner: LearnerSpec,
    /// Prediction-time clipping bound carried by the trained model.
    pub clip_bound: Option<f64>,
    pub seed: u64,
}

impl TrainConfig {
    pub fn new(algorithm: Algorithm, max_iterations: usize, learner: LearnerSpec) -> Self {
        Self {
            algorithm,
            max_iterations,
            u: 1,
            learner,
            clip_bound: None,
            seed: 0,
        }
    }

    pub fn with_u(mut self, u: u64) -> Self {
        self.u = u;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations must be at least 1"));
        }
        if self.algorithm == Algorithm::RBoosting && self.u == 0 {
            return Err(Error::invalid("u must be at least 1 for RBoosting"));
        }
        if let Some(b) = self.clip_bound {
            if !(b > 0.0) {
                return Err(Error::invalid(format!("clip bound must be > 0, got {b}")));
            }
        }
        match &self.learner {
            LearnerSpec::Tree { splits: 0 } => Err(Error::invalid("trees need at least one split")),
            LearnerSpec::Dictionary(a) if a.is_empty() => Err(Error::invalid("empty dictionary")),
            _ => Ok(()),
        }
    }
}
