//! L2 boosting for regression with re-scaled and data-driven re-scaled
//! variants, an adaptive selector for the shrinkage schedule, and a
//! simulation/real-data benchmark harness.
//!
//! The training loops live in [`boosters`]; [`selection`] picks the
//! re-scale factor `u` and the iteration count on held-out data; [`bench`]
//! reproduces the synthetic experiments; [`io`] and [`cli`] provide CSV
//! ingestion, model files, result tables and the `rboost` command.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // negated comparisons also reject NaN

pub mod bench;
pub mod boosters;
pub mod cli;
pub mod config;
pub mod dataset;
pub mod ensemble;
pub mod error;
pub mod geometry;
pub mod io;
pub mod learners;
pub mod selection;

pub use boosters::{
    shrinkage_alpha, train, train_boosting, train_ddrboosting, train_rboosting,
    two_dim_linear_search, IterationRecord, LineSearch, ShrinkageSchedule, StopReason,
    TrainingTrace,
};
pub use config::{Algorithm, LearnerSpec, TrainConfig};
pub use dataset::Dataset;
pub use ensemble::{Ensemble, Stage};
pub use error::{Error, Result};
pub use geometry::{clip, empirical_inner, empirical_norm, empirical_risk, rmse};
pub use learners::{
    fit_stump, fit_tree, normalize_learner, select_from_dictionary, DictionaryAtom,
    NormalizedLearner, RegressionTree, TreeFitter, WeakLearner,
};

/// Library version recorded in run manifests and model files.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
