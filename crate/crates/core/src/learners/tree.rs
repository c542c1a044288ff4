//! Least-squares regression trees grown best-first to a fixed split budget.
//!
//! Candidate thresholds are midpoints between consecutive distinct values of
//! a feature among the rows reaching a leaf. A row goes left iff
//! `x[feature] <= threshold`. When two candidates are equally good (within a
//! relative tolerance of `1e-12` of the residual sum of squares) the one seen
//! first wins: lower feature index, then smaller threshold, and across
//! leaves the earlier-created leaf.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Relative tolerance used to decide that two split gains are tied.
pub(crate) const GAIN_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionTree {
    nodes: Vec<Node>,
    requested_splits: usize,
    input_dim: usize,
}

impl RegressionTree {
    /// Rebuilds a tree from stored parts, checking that the node array is a
    /// well-formed tree rooted at index 0 with children stored after parents.
    pub fn from_parts(nodes: Vec<Node>, requested_splits: usize, input_dim: usize) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::ModelFormat("tree has no nodes".into()));
        }
        let mut referenced = vec![false; nodes.len()];
        for (i, node) in nodes.iter().enumerate() {
            match *node {
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    if feature >= input_dim {
                        return Err(Error::ModelFormat(format!(
                            "node {i}: feature {feature} out of range for dimension {input_dim}"
                        )));
                    }
                    if !threshold.is_finite() {
                        return Err(Error::ModelFormat(format!("node {i}: non-finite threshold")));
                    }
                    for child in [left, right] {
                        if child <= i || child >= nodes.len() || referenced[child] {
                            return Err(Error::ModelFormat(format!(
                                "node {i}: invalid child index {child}"
                            )));
                        }
                        referenced[child] = true;
                    }
                }
                Node::Leaf { value } => {
                    if !value.is_finite() {
                        return Err(Error::ModelFormat(format!("node {i}: non-finite leaf value")));
                    }
                }
            }
        }
        if referenced.iter().skip(1).any(|r| !r) {
            return Err(Error::ModelFormat("tree has unreachable nodes".into()));
        }
        Ok(Self {
            nodes,
            requested_splits,
            input_dim,
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Split budget the tree was grown with.
    pub fn requested_splits(&self) -> usize {
        self.requested_splits
    }

    /// Number of internal nodes actually grown.
    pub fn split_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Split { .. }))
            .count()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.len() - self.split_count()
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    #[inline]
    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut idx = 0;
        loop {
            match self.nodes[idx] {
                Node::Leaf { value } => return value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => idx = if x[feature] <= threshold { left } else { right },
            }
        }
    }

    /// The root split as `(feature, threshold)`, if any.
    pub fn root_split(&self) -> Option<(usize, f64)> {
        match self.nodes[0] {
            Node::Split {
                feature, threshold, ..
            } => Some((feature, threshold)),
            Node::Leaf { .. } => None,
        }
    }
}

/// Midpoint threshold separating `lo < hi`, kept strictly below `hi`.
#[inline]
pub(crate) fn midpoint(lo: f64, hi: f64) -> f64 {
    let t = 0.5 * (lo + hi);
    if t < hi {
        t
    } else {
        lo
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    feature: usize,
    threshold: f64,
    gain: f64,
}

/// Reusable tree grower for one dataset; per-feature row orderings are
/// computed once and shared by every fit.
pub struct TreeFitter<'a> {
    data: &'a Dataset,
    order: Vec<Vec<u32>>,
}

impl<'a> TreeFitter<'a> {
    pub fn new(data: &'a Dataset) -> Self {
        let order = (0..data.dim())
            .map(|f| {
                let mut idx: Vec<u32> = (0..data.len() as u32).collect();
                idx.sort_by(|&a, &b| {
                    data.value(a as usize, f)
                        .total_cmp(&data.value(b as usize, f))
                        .then(a.cmp(&b))
                });
                idx
            })
            .collect();
        Self { data, order }
    }

    pub fn data(&self) -> &Dataset {
        self.data
    }

    pub fn fit(&self, residual: &[f64], max_splits: usize) -> Result<RegressionTree> {
        self.fit_with_predictions(residual, max_splits).map(|(t, _)| t)
    }

    /// Fits a tree and also returns its predictions on the fitting rows.
    pub fn fit_with_predictions(
        &self,
        residual: &[f64],
        max_splits: usize,
    ) -> Result<(RegressionTree, Vec<f64>)> {
        let m = self.data.len();
        if residual.len() != m {
            return Err(Error::Dimension {
                expected: m,
                got: residual.len(),
            });
        }
        if max_splits == 0 {
            return Err(Error::invalid("number of splits must be at least 1"));
        }
        if let Some(i) = residual.iter().position(|r| !r.is_finite()) {
            return Err(Error::NonFinite { row: i, column: 0 });
        }

        let tol = GAIN_TIE_TOLERANCE * residual.iter().map(|r| r * r).sum::<f64>();
        let mut leaf_of = vec![0u32; m];
        let mut nodes = vec![Node::Leaf { value: 0.0 }];
        // Open leaves in creation order with their best split, if any.
        let mut open: Vec<(usize, Option<Candidate>)> =
            vec![(0, self.best_split(0, &leaf_of, residual, tol))];

        for done in 0..max_splits {
            let mut pick: Option<(usize, Candidate)> = None;
            for (pos, (_, cand)) in open.iter().enumerate() {
                if let Some(c) = cand {
                    let better = match pick {
                        None => true,
                        Some((_, b)) => c.gain > b.gain + tol,
                    };
                    if better {
                        pick = Some((pos, *c));
                    }
                }
            }
            let Some((pos, cand)) = pick else { break };
            let (leaf, _) = open.remove(pos);
            let left = nodes.len();
            let right = left + 1;
            nodes.push(Node::Leaf { value: 0.0 });
            nodes.push(Node::Leaf { value: 0.0 });
            nodes[leaf] = Node::Split {
                feature: cand.feature,
                threshold: cand.threshold,
                left,
                right,
            };
            for (i, slot) in leaf_of.iter_mut().enumerate() {
                if *slot as usize == leaf {
                    *slot = if self.data.value(i, cand.feature) <= cand.threshold {
                        left as u32
                    } else {
                        right as u32
                    };
                }
            }
            let more = done + 1 < max_splits;
            for child in [left, right] {
                let best = if more {
                    self.best_split(child, &leaf_of, residual, tol)
                } else {
                    None
                };
                open.push((child, best));
            }
        }

        let mut sums = vec![0.0; nodes.len()];
        let mut counts = vec![0usize; nodes.len()];
        for (i, &leaf) in leaf_of.iter().enumerate() {
            sums[leaf as usize] += residual[i];
            counts[leaf as usize] += 1;
        }
        for (idx, node) in nodes.iter_mut().enumerate() {
            if let Node::Leaf { value } = node {
                *value = if counts[idx] > 0 {
                    sums[idx] / counts[idx] as f64
                } else {
                    0.0
                };
            }
        }
        let preds = leaf_of
            .iter()
            .map(|&leaf| match nodes[leaf as usize] {
                Node::Leaf { value } => value,
                Node::Split { .. } => unreachable!("rows only sit in leaves"),
            })
            .collect();
        let tree = RegressionTree {
            nodes,
            requested_splits: max_splits,
            input_dim: self.data.dim(),
        };
        Ok((tree, preds))
    }

    fn best_split(&self, leaf: usize, leaf_of: &[u32], residual: &[f64], tol: f64) -> Option<Candidate> {
        let leaf = leaf as u32;
        let (mut n, mut total) = (0usize, 0.0);
        for (i, &l) in leaf_of.iter().enumerate() {
            if l == leaf {
                n += 1;
                total += residual[i];
            }
        }
        if n < 2 {
            return None;
        }
        let nf = n as f64;
        let base = total * total / nf;
        let mut best: Option<Candidate> = None;
        for (feature, order) in self.order.iter().enumerate() {
            let mut left_n = 0usize;
            let mut left_sum = 0.0;
            let mut prev: Option<f64> = None;
            for &row in order {
                let row = row as usize;
                if leaf_of[row] != leaf {
                    continue;
                }
                let v = self.data.value(row, feature);
                if let Some(p) = prev {
                    if v > p {
                        let ln = left_n as f64;
                        let right_sum = total - left_sum;
                        let gain = left_sum * left_sum / ln + right_sum * right_sum / (nf - ln) - base;
                        let floor = best.map_or(0.0, |b| b.gain);
                        if gain > floor + tol {
                            best = Some(Candidate {
                                feature,
                                threshold: midpoint(p, v),
                                gain,
                            });
                        }
                    }
                }
                left_n += 1;
                left_sum += residual[row];
                prev = Some(v);
            }
        }
        best
    }
}

/// Fits a least-squares tree with at most `splits` internal nodes to `residual`.
pub fn fit_tree(data: &Dataset, residual: &[f64], splits: usize) -> Result<RegressionTree> {
    TreeFitter::new(data).fit(residual, splits)
}

/// One-split tree.
pub fn fit_stump(data: &Dataset, residual: &[f64]) -> Result<RegressionTree> {
    fit_tree(data, residual, 1)
}
