#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rboost_core::Dataset;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random regression data. About a third of the features are drawn from a
/// handful of levels so that duplicate values and tied splits show up.
pub fn random_dataset(rng: &mut ChaCha8Rng, m: usize, d: usize) -> Dataset {
    let discrete: Vec<bool> = (0..d).map(|_| rng.random_bool(0.35)).collect();
    let mut x = Vec::with_capacity(m * d);
    for _ in 0..m {
        for &disc in &discrete {
            x.push(if disc {
                rng.random_range(0..5) as f64
            } else {
                rng.random_range(-1.0..1.0)
            });
        }
    }
    let y = (0..m)
        .map(|i| {
            let row = &x[i * d..(i + 1) * d];
            row.iter().enumerate().map(|(j, v)| (j as f64 + 1.0) * v.sin()).sum::<f64>()
                + rng.random_range(-0.3..0.3)
        })
        .collect();
    Dataset::from_flat(x, d, y).unwrap()
}

pub fn random_vec(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn mse(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64
}

fn sse(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    values.iter().map(|v| (v - mean) * (v - mean)).sum()
}

/// Brute-force best stump: every feature, every midpoint between distinct
/// sorted values, scored by the summed squared error of the two halves.
/// Earlier candidates (lower feature, then smaller threshold) win ties.
pub fn exhaustive_stump(data: &Dataset, residual: &[f64]) -> Option<(usize, f64)> {
    let tol = 1e-12 * residual.iter().map(|r| r * r).sum::<f64>();
    let base = sse(residual);
    let mut best: Option<(usize, f64, f64)> = None;
    for j in 0..data.dim() {
        let mut values: Vec<f64> = (0..data.len()).map(|i| data.value(i, j)).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for w in values.windows(2) {
            let mut t = 0.5 * (w[0] + w[1]);
            if t >= w[1] {
                t = w[0];
            }
            let (mut left, mut right) = (Vec::new(), Vec::new());
            for (i, r) in residual.iter().enumerate() {
                if data.value(i, j) <= t {
                    left.push(*r);
                } else {
                    right.push(*r);
                }
            }
            let cost = sse(&left) + sse(&right);
            let take = match best {
                None => base - cost > tol,
                Some((_, _, c)) => cost < c - tol,
            };
            if take {
                best = Some((j, t, cost));
            }
        }
    }
    best.map(|(j, t, _)| (j, t))
}

/// Minimizes `|y - (1 - a) f - b g|^2` over a 201x201 grid on `[-2, 2]^2`,
/// then refines twice on a grid spanning two cells around the incumbent.
pub fn grid_line_search(f: &[f64], g: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let risk = |a: f64, b: f64| {
        f.iter()
            .zip(g)
            .zip(y)
            .map(|((fi, gi), yi)| {
                let e = yi - (1.0 - a) * fi - b * gi;
                e * e
            })
            .sum::<f64>()
            / f.len() as f64
    };
    let n = 201;
    let (mut ca, mut cb, mut half) = (0.0, 0.0, 2.0);
    let mut best = (0.0, 0.0, f64::INFINITY);
    for _ in 0..3 {
        let step = 2.0 * half / (n - 1) as f64;
        for i in 0..n {
            let a = ca - half + i as f64 * step;
            for j in 0..n {
                let b = cb - half + j as f64 * step;
                let r = risk(a, b);
                if r < best.2 {
                    best = (a, b, r);
                }
            }
        }
        ca = best.0;
        cb = best.1;
        half = 2.0 * step;
    }
    best
}
