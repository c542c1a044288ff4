use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A regression sample: `m` rows of `d` features with one target each.
///
/// Rows keep their insertion order; every empirical quantity in the crate
/// iterates rows `0..m` in that order. Non-finite values are rejected here
/// so downstream code never has to re-check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    features: Vec<f64>,
    targets: Vec<f64>,
    dim: usize,
}

impl Dataset {
    /// Builds a dataset from a row-major feature buffer of shape `targets.len() x dim`.
    pub fn from_flat(features: Vec<f64>, dim: usize, targets: Vec<f64>) -> Result<Self> {
        let m = targets.len();
        if m == 0 {
            return Err(Error::invalid("dataset needs at least one row"));
        }
        if dim == 0 {
            return Err(Error::invalid("dataset needs at least one feature"));
        }
        if features.len() != m * dim {
            return Err(Error::Dimension {
                expected: m * dim,
                got: features.len(),
            });
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / dim,
                column: pos % dim,
            });
        }
        if let Some(row) = targets.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row, column: dim });
        }
        Ok(Self {
            features,
            targets,
            dim,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>], targets: Vec<f64>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if rows.len() != targets.len() {
            return Err(Error::Dimension {
                expected: rows.len(),
                got: targets.len(),
            });
        }
        let mut flat = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: row.len(),
                });
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat(flat, dim, targets)
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.features.chunks_exact(self.dim)
    }

    #[inline]
    pub fn value(&self, row: usize, feature: usize) -> f64 {
        self.features[row * self.dim + feature]
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    /// New dataset made of the given rows, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut flat = Vec::with_capacity(indices.len() * self.dim);
        let mut targets = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.len() {
                return Err(Error::invalid(format!(
                    "row index {i} out of range for {} rows",
                    self.len()
                )));
            }
            flat.extend_from_slice(self.row(i));
            targets.push(self.targets[i]);
        }
        Self::from_flat(flat, self.dim, targets)
    }

    /// Same features, different targets.
    pub fn with_targets(&self, targets: Vec<f64>) -> Result<Self> {
        Self::from_flat(self.features.clone(), self.dim, targets)
    }
}
