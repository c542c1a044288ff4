//! Sample-averaged geometry over the rows of a training set.
//!
//! Every quantity here is an average over the `m` sample points, so the
//! empirical norm of the all-ones vector is 1 regardless of `m`.

use crate::error::{Error, Result};

/// Numerical floor below which a learner is treated as identically zero.
pub const DEGENERATE_NORM: f64 = 1e-12;

fn check_pair(a: &[f64], b: &[f64]) -> Result<()> {
    if a.is_empty() {
        return Err(Error::invalid("empty vector"));
    }
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(())
}

/// `sqrt((1/m) * sum v_i^2)`.
pub fn empirical_norm(v: &[f64]) -> Result<f64> {
    if v.is_empty() {
        return Err(Error::invalid("empirical norm of an empty vector"));
    }
    Ok(mean_square(v).sqrt())
}

/// `(1/m) * sum a_i b_i`.
pub fn empirical_inner(a: &[f64], b: &[f64]) -> Result<f64> {
    check_pair(a, b)?;
    Ok(mean_product(a, b))
}

/// Mean squared deviation between predictions and targets.
pub fn empirical_risk(pred: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(pred, y)?;
    Ok(mean_squared_diff(pred, y))
}

/// Root of [`empirical_risk`].
pub fn rmse(pred: &[f64], truth: &[f64]) -> Result<f64> {
    empirical_risk(pred, truth).map(f64::sqrt)
}

/// Truncates `t` to `[-bound, bound]`, preserving its sign.
pub fn clip(t: f64, bound: f64) -> Result<f64> {
    if !(bound > 0.0) {
        return Err(Error::invalid(format!("clip bound must be > 0, got {bound}")));
    }
    Ok(t.abs().min(bound).copysign(t))
}

// Unchecked kernels used by the training loops, where lengths are
// guaranteed by construction.

pub(crate) fn mean_square(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64
}

pub(crate) fn mean_product(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / a.len() as f64
}

pub(crate) fn mean_squared_diff(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        / a.len() as f64
}
