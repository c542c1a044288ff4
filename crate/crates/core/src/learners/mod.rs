//! Weak learners: least-squares regression trees, stumps and explicit
//! dictionaries, plus the unit-norm rescaling that makes the closed-form
//! line search exact.

pub(crate) mod dictionary;
pub(crate) mod tree;

pub use dictionary::{select_from_dictionary, DictionaryAtom};
pub use tree::{fit_stump, fit_tree, Node, RegressionTree, TreeFitter};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::geometry::{mean_square, DEGENERATE_NORM};

/// A fitted real-valued predictor.
#[derive(Debug, Clone)]
pub enum WeakLearner {
    Tree(RegressionTree),
    Atom(DictionaryAtom),
}

impl WeakLearner {
    pub fn predict(&self, x: &[f64]) -> f64 {
        match self {
            WeakLearner::Tree(t) => t.predict(x),
            WeakLearner::Atom(a) => a.evaluate(x),
        }
    }

    /// Number of features the learner reads, when it is known.
    pub fn input_dim(&self) -> Option<usize> {
        match self {
            WeakLearner::Tree(t) => Some(t.input_dim()),
            WeakLearner::Atom(_) => None,
        }
    }

    pub fn predict_dataset(&self, data: &Dataset) -> Vec<f64> {
        data.rows().map(|x| self.predict(x)).collect()
    }
}

impl From<RegressionTree> for WeakLearner {
    fn from(t: RegressionTree) -> Self {
        WeakLearner::Tree(t)
    }
}

impl From<DictionaryAtom> for WeakLearner {
    fn from(a: DictionaryAtom) -> Self {
        WeakLearner::Atom(a)
    }
}

/// A weak learner multiplied by `scale` so that its predictions on the
/// fitting sample have unit empirical norm.
#[derive(Debug, Clone)]
pub struct NormalizedLearner {
    pub base: WeakLearner,
    pub scale: f64,
}

impl NormalizedLearner {
    #[inline]
    pub fn predict(&self, x: &[f64]) -> f64 {
        self.scale * self.base.predict(x)
    }
}

/// Rescales `learner` to unit empirical norm on `data`.
///
/// Fails with [`Error::DegenerateLearner`] when the predictions have norm at
/// most [`DEGENERATE_NORM`]; boosting loops treat that as a stop signal.
pub fn normalize_learner(learner: WeakLearner, data: &Dataset) -> Result<NormalizedLearner> {
    let preds = learner.predict_dataset(data);
    let scale = unit_scale(&preds)?;
    Ok(NormalizedLearner {
        base: learner,
        scale,
    })
}

/// Reciprocal empirical norm of `preds`, or the degenerate-learner signal.
pub(crate) fn unit_scale(preds: &[f64]) -> Result<f64> {
    let norm = mean_square(preds).sqrt();
    if !(norm > DEGENERATE_NORM) {
        return Err(Error::DegenerateLearner {
            norm,
            threshold: DEGENERATE_NORM,
        });
    }
    Ok(1.0 / norm)
}
