//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Pass criterion numbers as arguments to run a
//! subset, e.g. `cargo test --release --test acceptance -- 1 2 8`.

mod common;

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use common::*;
use rboost_core::bench::{
    run_adaptive_eval, run_comparison, run_ucurve, ExperimentOptions, Method, SyntheticSpec,
};
use rboost_core::*;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tree_config(algorithm: Algorithm, k: usize, splits: usize, u: u64) -> TrainConfig {
    TrainConfig::new(algorithm, k, LearnerSpec::Tree { splits }).with_u(u)
}

fn properties() -> Result<String, String> {
    let cases = 60u64;
    let mut worst_identity = 0.0f64;
    let mut worst_grid_gap = 0.0f64;
    let mut worst_huge_u = 0.0f64;

    for seed in 0..cases {
        let mut g = rng(seed);
        let m = 20 + (seed as usize * 7) % 150;
        let d = 1 + seed as usize % 4;
        let j = 1 + seed as usize % 4;
        let data = random_dataset(&mut g, m, d);

        let (plain, trace) = train(&data, &tree_config(Algorithm::Boosting, 100, j, 1)).map_err(|e| e.to_string())?;
        for k in 1..=trace.len() {
            let r = &trace.records[k - 1];
            let gap = (r.risk - (trace.risk_at(k - 1).unwrap() - r.beta * r.beta)).abs();
            worst_identity = worst_identity.max(gap);
        }

        let u = 1 + seed % 40;
        let (rb, rtrace) = train(&data, &tree_config(Algorithm::RBoosting, 60, j, u)).map_err(|e| e.to_string())?;
        let mut prev = 0.0;
        for (k, r) in rtrace.records.iter().enumerate() {
            let bound = (1.0 - r.alpha) * prev + r.beta.abs();
            ensure(r.l1_norm <= bound * (1.0 + 1e-12) + 1e-15, || {
                format!("l1 recursion broken: seed {seed} k {} ({} > {bound})", k + 1, r.l1_norm)
            })?;
            prev = r.l1_norm;
        }

        let (ddr, _) = train(&data, &tree_config(Algorithm::DDRBoosting, 60, j, 1)).map_err(|e| e.to_string())?;
        for model in [&plain, &rb, &ddr] {
            for _ in 0..10 {
                let x = random_vec(&mut g, d);
                let (a, b) = (model.predict(&x).unwrap(), model.predict_expanded(&x).unwrap());
                ensure((a - b).abs() <= 1e-10 * (1.0 + a.abs()), || {
                    format!("staged {a} vs expanded {b} (seed {seed})")
                })?;
            }
        }

        let (huge, htrace) =
            train(&data, &tree_config(Algorithm::RBoosting, 100, j, 1_000_000_000_000)).map_err(|e| e.to_string())?;
        // Either run may stop early once no learner makes progress; compare
        // the shared prefix with risks measured against the initial scale.
        let shared = trace.len().min(htrace.len());
        let early = |t: &TrainingTrace| t.stop != StopReason::Completed;
        ensure(trace.len() == htrace.len() || early(&trace) || early(&htrace), || {
            format!("u=1e12 stopped at {} vs {}", htrace.len(), trace.len())
        })?;
        let floor = 1e-6 * trace.initial_risk;
        for k in 0..=shared {
            let (a, b) = (trace.risk_at(k).unwrap(), htrace.risk_at(k).unwrap());
            worst_huge_u = worst_huge_u.max((a - b).abs() / a.abs().max(floor));
        }
        let (plain, huge) = (plain.truncate(shared).unwrap(), huge.truncate(shared).unwrap());
        for x in data.rows() {
            let (a, b) = (plain.predict(x).unwrap(), huge.predict(x).unwrap());
            worst_huge_u = worst_huge_u.max((a - b).abs() / a.abs().max(1.0));
        }

        let f = random_vec(&mut g, m);
        let dir = random_vec(&mut g, m);
        let (a, b) = (1.5 * random_vec(&mut g, 1)[0], 1.5 * random_vec(&mut g, 1)[0]);
        let noise = random_vec(&mut g, m);
        let y: Vec<f64> = (0..m).map(|i| (1.0 - a) * f[i] + b * dir[i] + 0.1 * noise[i]).collect();
        let ls = two_dim_linear_search(&f, &dir, &y).map_err(|e| e.to_string())?;
        let fitted: Vec<f64> = (0..m).map(|i| (1.0 - ls.alpha) * f[i] + ls.beta * dir[i]).collect();
        let closed = mse(&y, &fitted);
        let (_, _, grid) = grid_line_search(&f, &dir, &y);
        ensure(closed <= grid + 1e-12, || format!("closed form {closed} above grid {grid}"))?;
        worst_grid_gap = worst_grid_gap.max(grid - closed);

        let gg = dir.iter().map(|v| v * v).sum::<f64>();
        let beta = (0..m).map(|i| dir[i] * (y[i] - f[i])).sum::<f64>() / gg;
        let plain_step: Vec<f64> = (0..m).map(|i| f[i] + beta * dir[i]).collect();
        ensure(closed <= mse(&y, &plain_step) + 1e-12, || format!("DDR step worse than plain step (seed {seed})"))?;
    }
    ensure(worst_identity <= 1e-10, || format!("risk identity gap {worst_identity:e}"))?;
    ensure(worst_grid_gap <= 1e-4, || format!("DDR grid gap {worst_grid_gap:e}"))?;
    ensure(worst_huge_u <= 1e-6, || format!("u=1e12 relative gap {worst_huge_u:e}"))?;
    Ok(format!(
        "{cases} cases; identity gap {worst_identity:.1e}, DDR grid gap {worst_grid_gap:.1e}, u=1e12 gap {worst_huge_u:.1e}"
    ))
}

fn stump_oracle() -> Result<String, String> {
    let mut g = rng(2024);
    for case in 0..100 {
        let m = 2 + (case * 37) % 199;
        let d = 1 + case % 5;
        let data = random_dataset(&mut g, m, d);
        let residual = random_vec(&mut g, m);
        let tree = fit_tree(&data, &residual, 1).map_err(|e| e.to_string())?;
        let oracle = exhaustive_stump(&data, &residual);
        ensure(tree.root_split() == oracle, || {
            format!("case {case} (m={m}, d={d}): fit_tree {:?}, exhaustive {oracle:?}", tree.root_split())
        })?;
    }
    Ok("100 datasets, all splits identical".into())
}

fn means(target: u8) -> Result<(f64, f64), String> {
    let spec = SyntheticSpec::new(target, 0.0);
    let report = run_comparison(
        &spec,
        &[Algorithm::Boosting, Algorithm::RBoosting],
        &ExperimentOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let b = report.summary(Method::Boosting).unwrap().mean_rmse;
    let r = report.summary(Method::RBoosting).unwrap().mean_rmse;
    Ok((b, r))
}

fn m3_accuracy() -> Result<String, String> {
    let (b, r) = means(3)?;
    let line = format!("RBoosting {r:.4}, Boosting {b:.4}");
    ensure((0.005..=0.06).contains(&r) && r <= b, || line.clone())?;
    Ok(line)
}

fn ratio_check(target: u8, limit: f64) -> Result<String, String> {
    let (b, r) = means(target)?;
    let line = format!("RBoosting {r:.4} / Boosting {b:.4} = {:.3} (limit {limit})", r / b);
    ensure(r / b <= limit, || line.clone())?;
    Ok(line)
}

fn m7_ratio() -> Result<String, String> {
    ratio_check(7, 0.70)
}

fn m4_ratio() -> Result<String, String> {
    ratio_check(4, 0.60)
}

fn ucurve_shape() -> Result<String, String> {
    let spec = SyntheticSpec::new(4, 0.5);
    let curve = run_ucurve(&spec, &ExperimentOptions::default()).map_err(|e| e.to_string())?;
    let last = curve.last().unwrap();
    let interior = curve[1..curve.len() - 1]
        .iter()
        .min_by(|a, b| a.mean_rmse.total_cmp(&b.mean_rmse))
        .unwrap();
    let line = format!(
        "best interior u={} rmse {:.4} vs u={} rmse {:.4} ({:.1}% lower)",
        interior.u,
        interior.mean_rmse,
        last.u,
        last.mean_rmse,
        100.0 * (1.0 - interior.mean_rmse / last.mean_rmse)
    );
    ensure(last.u == 1_000_000 && interior.mean_rmse <= 0.95 * last.mean_rmse, || line.clone())?;
    Ok(line)
}

fn adaptive_fidelity() -> Result<String, String> {
    let spec = SyntheticSpec::new(4, 0.5);
    let report = run_adaptive_eval(&spec, &ExperimentOptions::default()).map_err(|e| e.to_string())?;
    let ideal = report.summary(Method::RBoosting).unwrap().mean_rmse;
    let adaptive = report.summary(Method::AdaptiveRBoosting).unwrap().mean_rmse;
    let line = format!(
        "adaptive {adaptive:.4} / ideal {ideal:.4} = {:.3} (limit 1.10)",
        adaptive / ideal
    );
    ensure(adaptive <= 1.10 * ideal, || line.clone())?;
    Ok(line)
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn determinism() -> Result<String, String> {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let data = tmp.path().join("data.csv");
    let mut text = String::from("a,b,y\n");
    for i in 0..80 {
        let (a, b) = (i as f64 / 80.0, ((i * 13) % 17) as f64 / 17.0);
        text.push_str(&format!("{a},{b},{}\n", (3.0 * a).sin() + b * b));
    }
    fs::write(&data, text).map_err(|e| e.to_string())?;
    let data = data.to_str().unwrap().to_owned();

    let commands: Vec<Vec<&str>> = vec![
        vec!["simulate", "--target", "1,4", "--sigma", "0,0.5", "--trials", "3", "--k-max", "60", "--grid", "5:1:1e6", "--train-m", "120", "--test-m", "200"],
        vec!["ucurve", "--target", "4", "--sigma", "0.5", "--trials", "3", "--k-max", "60", "--grid", "6:1:1e6", "--train-m", "120", "--test-m", "200"],
        vec!["adaptive", "--target", "2", "--sigma", "0.5", "--trials", "3", "--k-max", "60", "--grid", "4:1:1e4", "--train-m", "120", "--test-m", "200"],
        vec!["fit", "--data", &data, "--algo", "rboost", "--u", "3", "--k-max", "40"],
        vec!["realdata", "--data", &data, "--k-max", "40", "--grid", "4:1:1e4", "--seed", "7"],
    ];
    let mut compared = 0;
    for (i, cmd) in commands.iter().enumerate() {
        let out = tmp.path().join(format!("run{i}"));
        let mut argv: Vec<&str> = vec!["rboost"];
        argv.extend(cmd);
        argv.extend(["--out", out.to_str().unwrap()]);
        let mut runs = Vec::new();
        for _ in 0..2 {
            let code = rboost_core::cli::dispatch(&argv);
            ensure(code == 0, || format!("{} exited with {code}", cmd[0]))?;
            runs.push(snapshot(&out));
            fs::remove_dir_all(&out).map_err(|e| e.to_string())?;
        }
        ensure(runs[0] == runs[1], || format!("{} output differs between runs", cmd[0]))?;
        ensure(!runs[0].is_empty(), || format!("{} wrote nothing", cmd[0]))?;
        compared += runs[0].len();
    }
    Ok(format!("{} commands, {compared} files byte-identical", commands.len()))
}

fn main() {
    let criteria: [(u32, &str, Check, Duration); 8] = [
        (1, "property suite", properties, Duration::from_secs(60)),
        (2, "stump vs exhaustive search", stump_oracle, Duration::from_secs(60)),
        (3, "m3 sigma=0 RBoosting accuracy", m3_accuracy, Duration::from_secs(600)),
        (4, "m7 sigma=0 RBoosting/Boosting ratio", m7_ratio, Duration::from_secs(1200)),
        (5, "m4 sigma=0 RBoosting/Boosting ratio", m4_ratio, Duration::from_secs(600)),
        (6, "m4 sigma=0.5 u-curve interior minimum", ucurve_shape, Duration::from_secs(1800)),
        (7, "m4 sigma=0.5 adaptive vs ideal", adaptive_fidelity, Duration::from_secs(1800)),
        (8, "benchmark output determinism", determinism, Duration::from_secs(600)),
    ];
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();

    let mut failed = 0;
    for (id, name, check, limit) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; took {elapsed:.1?}, limit {limit:?}")),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {id} {name}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
