//! JSON model documents.
//!
//! A document stores the constant offset, the optional clip bound and, per
//! stage, `alpha`, `beta`, the unit-norm scale factor and the full tree.
//! Floats are written in shortest round-trip form, so a saved model
//! predicts bit-identically after loading. Models built on dictionary atoms
//! cannot be saved.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ensemble::{Ensemble, Stage};
use crate::error::{Error, Result};
use crate::learners::{NormalizedLearner, RegressionTree, WeakLearner};

pub const MODEL_FORMAT: &str = "rboost-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct StageDoc {
    alpha: f64,
    beta: f64,
    scale: f64,
    tree: RegressionTree,
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    format: String,
    version: u32,
    library_version: String,
    input_dim: Option<usize>,
    offset: f64,
    clip_bound: Option<f64>,
    stages: Vec<StageDoc>,
}

pub fn model_to_json(model: &Ensemble) -> Result<String> {
    let stages = model
        .stages()
        .iter()
        .enumerate()
        .map(|(i, s)| match &s.learner.base {
            WeakLearner::Tree(t) => Ok(StageDoc {
                alpha: s.alpha,
                beta: s.beta,
                scale: s.learner.scale,
                tree: t.clone(),
            }),
            WeakLearner::Atom(_) => Err(Error::ModelFormat(format!(
                "stage {i} uses a dictionary atom, which cannot be persisted"
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    let doc = ModelDoc {
        format: MODEL_FORMAT.to_string(),
        version: MODEL_VERSION,
        library_version: crate::VERSION.to_string(),
        input_dim: model.input_dim(),
        offset: model.offset(),
        clip_bound: model.clip_bound(),
        stages,
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

pub fn model_from_json(text: &str) -> Result<Ensemble> {
    let doc: ModelDoc = serde_json::from_str(text)?;
    if doc.format != MODEL_FORMAT {
        return Err(Error::ModelFormat(format!("unexpected format tag {:?}", doc.format)));
    }
    if doc.version != MODEL_VERSION {
        return Err(Error::ModelFormat(format!("unsupported model version {}", doc.version)));
    }
    let mut model = Ensemble::with_offset(doc.offset);
    model.set_clip_bound(doc.clip_bound)?;
    for (i, s) in doc.stages.into_iter().enumerate() {
        if !(s.alpha.is_finite() && s.beta.is_finite() && s.scale.is_finite()) {
            return Err(Error::ModelFormat(format!("stage {i}: non-finite coefficient")));
        }
        if let Some(d) = doc.input_dim {
            if s.tree.input_dim() != d {
                return Err(Error::ModelFormat(format!("stage {i}: tree dimension mismatch")));
            }
        }
        let nodes = s.tree.nodes().to_vec();
        let tree = RegressionTree::from_parts(nodes, s.tree.requested_splits(), s.tree.input_dim())?;
        model.push(Stage {
            alpha: s.alpha,
            beta: s.beta,
            learner: NormalizedLearner {
                base: WeakLearner::Tree(tree),
                scale: s.scale,
            },
        });
    }
    Ok(model)
}

pub fn save_model(model: &Ensemble, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, model_to_json(model)?).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Ensemble> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_json(&text)
}
