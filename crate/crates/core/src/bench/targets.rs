//! The nine synthetic regression functions.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Input dimension of target `id` (1..=9).
pub fn target_dimension(id: u8) -> Result<usize> {
    match id {
        1..=3 => Ok(1),
        4..=6 => Ok(2),
        7..=9 => Ok(10),
        _ => Err(Error::invalid(format!("target id must be in 1..=9, got {id}"))),
    }
}

fn m1(x: f64) -> f64 {
    2.0 * f64::max(1.0, f64::min(3.0 + 2.0 * x, 3.0 - 8.0 * x))
}

fn m2(x: f64) -> f64 {
    if (-0.25..0.0).contains(&x) {
        10.0 * (-x).sqrt() * (8.0 * PI * x).sin()
    } else {
        0.0
    }
}

fn m3(x: f64) -> f64 {
    3.0 * (PI * x / 2.0).sin()
}

fn m4(x1: f64, x2: f64) -> f64 {
    x1 * (x1 * x1).sin() - x2 * (x2 * x2).sin()
}

fn m5(x1: f64, x2: f64) -> f64 {
    4.0 / (1.0 + 4.0 * x1 * x1 + 4.0 * x2 * x2)
}

fn m6(x1: f64, x2: f64) -> f64 {
    6.0 - 2.0 * f64::min(3.0, 4.0 * x1 * x1 + 4.0 * x2.abs())
}

fn m7(x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(j, &v)| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * v * (v * v).sin()
        })
        .sum()
}

/// Evaluates target `id` at `x`; `x.len()` must equal [`target_dimension`].
pub fn eval_target(id: u8, x: &[f64]) -> Result<f64> {
    let d = target_dimension(id)?;
    if x.len() != d {
        return Err(Error::Dimension {
            expected: d,
            got: x.len(),
        });
    }
    Ok(match id {
        1 => m1(x[0]),
        2 => m2(x[0]),
        3 => m3(x[0]),
        4 => m4(x[0], x[1]),
        5 => m5(x[0], x[1]),
        6 => m6(x[0], x[1]),
        7 => m7(x),
        8 => m6(x[..5].iter().sum(), x[5..].iter().sum()),
        9 => m2(x.iter().sum()),
        _ => unreachable!(),
    })
}
