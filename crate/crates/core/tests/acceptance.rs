//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};

use feature_clock::clockcore::{
    build_clock, build_global_clock, circle_sweep, circle_sweep_refit, fit_axis_regressions_from,
    max_contribution, ClockOptions,
};
use feature_clock::datasets::iris_features;
use feature_clock::grouping::{from_labels, mst_over_centers};
use feature_clock::ingest::Dataset;
use feature_clock::intergroup::{build_intergroup_clocks, logistic_fit, penalized_gradient};
use feature_clock::numstats::{center_columns, ols_fit, pca_2d, standardize_columns, student_t_two_sided_p, Matrix};

use common::{angle_gap, brute_force_mst, linear_embedding, ols_oracle, random_matrix, rng, t_p_simpson};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// 100 seeded (n=60, d=5) problems: standardized X, centered Y.
fn sweep_fixtures() -> Vec<(Matrix, Matrix)> {
    (0..100)
        .map(|seed| {
            let mut r = rng(1000 + seed);
            let x = random_matrix(&mut r, 60, 5);
            let y = linear_embedding(&mut r, &x, 0.7);
            (standardize_columns(&x).unwrap().matrix, center_columns(&y))
        })
        .collect()
}

fn closed_form(x: &Matrix, y: &Matrix) -> Vec<(f64, f64)> {
    let fits = fit_axis_regressions_from(x, y).unwrap();
    fits.at_0
        .coefficients
        .iter()
        .zip(&fits.at_90.coefficients)
        .map(|(&a, &b)| (a, b))
        .collect()
}

fn criterion_1() -> Check {
    let mut worst_gap: f64 = 0.0;
    let mut worst_rel: f64 = 0.0;
    for (x, y) in sweep_fixtures() {
        let betas = closed_form(&x, &y);
        let sweep = circle_sweep_refit(&x, &y, 1800).unwrap();
        for (j, samples) in sweep.iter().enumerate() {
            let (angle, beta) = samples
                .iter()
                .copied()
                .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
                .unwrap();
            let (mag, dir) = max_contribution(betas[j].0, betas[j].1);
            worst_gap = worst_gap.max(angle_gap(angle, dir, 180.0));
            worst_rel = worst_rel.max((beta.abs() - mag).abs() / mag);
        }
    }
    ensure(worst_gap <= 0.2, || format!("angle gap {worst_gap:.4}° > 0.2°"))?;
    ensure(worst_rel < 1e-6, || format!("magnitude relative error {worst_rel:.3e} >= 1e-6"))?;
    Ok(format!("max angle gap {worst_gap:.4}°, max relative error {worst_rel:.2e}"))
}

fn criterion_2() -> Check {
    let mut worst: f64 = 0.0;
    for (x, y) in sweep_fixtures() {
        let betas = closed_form(&x, &y);
        let sweeps = [circle_sweep(&x, &y, 36).unwrap(), circle_sweep_refit(&x, &y, 1800).unwrap()];
        for sweep in &sweeps {
            for (j, samples) in sweep.iter().enumerate() {
                let (b0, b90) = betas[j];
                let (cx, cy, r) = (b0 / 2.0, b90 / 2.0, b0.hypot(b90) / 2.0);
                for &(angle, beta) in samples {
                    let t = angle.to_radians();
                    let (px, py) = (beta * t.cos(), beta * t.sin());
                    worst = worst.max(((px - cx).hypot(py - cy) - r).abs());
                }
            }
        }
    }
    ensure(worst < 1e-8, || format!("distance from circle {worst:.3e} >= 1e-8"))?;
    Ok(format!("max distance from circle {worst:.2e}"))
}

fn criterion_3() -> Check {
    let (names, x) = iris_features();
    let xs = standardize_columns(&x).unwrap().matrix;
    let pca = pca_2d(&xs).unwrap();
    let y = pca.scores(&xs);
    let members: Vec<usize> = (0..x.rows()).collect();
    let options = ClockOptions {
        top_k: Some(4),
        ..ClockOptions::default()
    };
    let clock = build_clock(&x, &y, &names, &members, &options, "all").unwrap().clock;
    ensure(clock.arrows.len() == 4, || format!("{} arrows instead of 4", clock.arrows.len()))?;
    let reference = &clock.features[0];
    let ref_norm = {
        let (a, b) = pca.loading(0);
        a.hypot(b)
    };
    let mut worst_angle: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    for arrow in &clock.features {
        let (lx, ly) = pca.loading(arrow.feature_index);
        let load_angle = ly.atan2(lx).to_degrees().rem_euclid(360.0);
        worst_angle = worst_angle.max(angle_gap(arrow.angle_deg, load_angle, 360.0));
        let ratio = arrow.magnitude / reference.magnitude;
        let load_ratio = lx.hypot(ly) / ref_norm;
        worst_ratio = worst_ratio.max((ratio - load_ratio).abs());
    }
    ensure(worst_angle <= 0.5, || format!("direction off by {worst_angle:.4}°"))?;
    ensure(worst_ratio <= 1e-6, || format!("magnitude ratio off by {worst_ratio:.3e}"))?;
    Ok(format!("max direction gap {worst_angle:.2e}°, max ratio gap {worst_ratio:.2e}"))
}

fn criterion_4() -> Check {
    let (mut db, mut dse, mut dp) = (0.0f64, 0.0f64, 0.0f64);
    for seed in 0..50u64 {
        let mut r = rng(4000 + seed);
        let n = 20 + (seed as usize * 7) % 41;
        let d = 1 + (seed as usize) % 6;
        let x = random_matrix(&mut r, n, d);
        let w: Vec<f64> = (0..d).map(|_| common::normal(&mut r) * 0.5).collect();
        let y: Vec<f64> = (0..n)
            .map(|i| (0..d).map(|j| x.get(i, j) * w[j]).sum::<f64>() + 1.5 * common::normal(&mut r))
            .collect();
        let xc = common::centered(&x);
        let yc = {
            let mean = y.iter().sum::<f64>() / n as f64;
            y.iter().map(|v| v - mean).collect::<Vec<_>>()
        };
        let fit = ols_fit(&xc, &yc).unwrap();
        let oracle = ols_oracle(&xc, &yc);
        ensure(fit.dof == oracle.dof, || format!("dof {} vs {}", fit.dof, oracle.dof))?;
        for j in 0..d {
            db = db.max((fit.coefficients[j] - oracle.coefficients[j]).abs());
            dse = dse.max((fit.std_errors[j] - oracle.std_errors[j]).abs());
            let p_oracle = t_p_simpson(oracle.t_stats[j], oracle.dof);
            dp = dp.max((fit.p_values[j] - p_oracle).abs());
        }
    }
    ensure(db < 1e-8, || format!("coefficient gap {db:.3e}"))?;
    ensure(dse < 1e-8, || format!("standard error gap {dse:.3e}"))?;
    ensure(dp < 1e-9, || format!("p-value gap {dp:.3e}"))?;
    Ok(format!("max gaps: beta {db:.2e}, se {dse:.2e}, p {dp:.2e}"))
}

fn criterion_5() -> Check {
    let mut worst: f64 = 0.0;
    for t in [0.5, 1.0, 2.0, 3.0, 5.0] {
        for dof in [1usize, 2, 5, 10, 30, 120] {
            let gap = (student_t_two_sided_p(t, dof) - t_p_simpson(t, dof)).abs();
            ensure(gap < 1e-8, || format!("t={t}, dof={dof}: gap {gap:.3e}"))?;
            worst = worst.max(gap);
        }
    }
    Ok(format!("30 grid points, max gap {worst:.2e}"))
}

fn criterion_6() -> Check {
    let mut fixtures = 0;
    for k in [4usize, 5] {
        for seed in 0..200u64 {
            let mut r = rng(6000 + 1000 * k as u64 + seed);
            let centers: Vec<(f64, f64)> = (0..k)
                .map(|_| (10.0 * rand::Rng::random::<f64>(&mut r), 10.0 * rand::Rng::random::<f64>(&mut r)))
                .collect();
            let labels: Vec<String> = (0..k).map(|i| format!("g{i}")).collect();
            let y = Matrix::from_rows(&centers.iter().map(|c| vec![c.0, c.1]).collect::<Vec<_>>()).unwrap();
            let grouping = from_labels(&labels, &y).unwrap();
            let mst = mst_over_centers(&grouping).unwrap();
            let (best, best_edges) = brute_force_mst(&centers);
            let mut edges: Vec<(usize, usize)> = mst.edges.iter().map(|e| (e.a.min(e.b), e.a.max(e.b))).collect();
            edges.sort_unstable();
            ensure((mst.total_length() - best).abs() <= 1e-12 * best.max(1.0), || {
                format!("k={k} seed={seed}: weight {} vs {best}", mst.total_length())
            })?;
            ensure(edges == best_edges, || format!("k={k} seed={seed}: edges {edges:?} vs {best_edges:?}"))?;
            fixtures += 1;
        }
    }
    Ok(format!("{fixtures} fixtures match exhaustive enumeration"))
}

fn criterion_7() -> Check {
    // (a) stationarity and (b) label-swap antisymmetry on overlapping classes
    let mut worst_grad: f64 = 0.0;
    let mut worst_swap: f64 = 0.0;
    for seed in 0..20u64 {
        let mut r = rng(7000 + seed);
        let x = random_matrix(&mut r, 100, 3);
        let w = [1.0, -0.5, 0.3];
        let labels: Vec<bool> = (0..100)
            .map(|i| {
                let eta: f64 = (0..3).map(|j| x.get(i, j) * w[j]).sum();
                rand::Rng::random::<f64>(&mut r) < 1.0 / (1.0 + (-eta).exp())
            })
            .collect();
        let fit = logistic_fit(&x, &labels).unwrap();
        ensure(fit.converged, || format!("seed {seed}: no convergence"))?;
        let mut params = vec![fit.intercept];
        params.extend(&fit.coefficients);
        let grad = penalized_gradient(&x, &labels, &params, 1e-6);
        worst_grad = worst_grad.max(grad.iter().map(|g| g * g).sum::<f64>().sqrt());

        let flipped: Vec<bool> = labels.iter().map(|l| !l).collect();
        let swapped = logistic_fit(&x, &flipped).unwrap();
        worst_swap = worst_swap.max((fit.intercept + swapped.intercept).abs());
        for j in 0..3 {
            worst_swap = worst_swap.max((fit.coefficients[j] + swapped.coefficients[j]).abs());
        }
    }
    ensure(worst_grad < 1e-8, || format!("gradient norm {worst_grad:.3e}"))?;
    ensure(worst_swap < 1e-9, || format!("label swap asymmetry {worst_swap:.3e}"))?;

    // (c) two groups differing only in one feature shifted by 5σ
    let shifted = 2;
    let mut worst_p: f64 = 0.0;
    for seed in 0..5u64 {
        let (x, labels) = common::shifted_groups(7500 + seed, 1000, 4, shifted, 5.0);
        let mut r = rng(7600 + seed);
        let y_rows: Vec<Vec<f64>> = (0..x.rows())
            .map(|i| vec![x.get(i, shifted) + 0.3 * common::normal(&mut r), x.get(i, 0) + 0.3 * common::normal(&mut r)])
            .collect();
        let names: Vec<String> = (0..4).map(|j| format!("f{j}")).collect();
        let tokens: Vec<String> = labels.iter().map(|&l| if l { "high" } else { "low" }.to_string()).collect();
        let dataset = Dataset::new(names, x, Matrix::from_rows(&y_rows).unwrap(), Some(tokens.clone())).unwrap();
        let grouping = from_labels(&tokens, dataset.y()).unwrap();
        let mst = mst_over_centers(&grouping).unwrap();
        let result = build_intergroup_clocks(&dataset, &grouping, &mst, &ClockOptions::default()).unwrap();
        let clock = &result.clocks[0];
        let top = clock.arrows.first().ok_or_else(|| format!("seed {seed}: no significant arrow"))?;
        ensure(top.feature == "f2", || format!("seed {seed}: top arrow is {}", top.feature))?;
        ensure(top.significant, || format!("seed {seed}: f2 not significant"))?;
        ensure(clock.arrows[1..].iter().all(|a| a.magnitude < top.magnitude), || {
            format!("seed {seed}: f2 is not the unique top arrow")
        })?;
        ensure(clock.group_names.1 == "high" && clock.coefficients[shifted] > 0.0, || {
            format!("seed {seed}: f2 does not point toward the high-f group")
        })?;
        worst_p = worst_p.max(top.p0);
    }
    Ok(format!(
        "gradient norm {worst_grad:.2e}, swap asymmetry {worst_swap:.2e}, 5σ fixture max p {worst_p:.2e}"
    ))
}

fn rotate(y: &Matrix, deg: f64) -> Matrix {
    let (s, c) = deg.to_radians().sin_cos();
    let rows: Vec<Vec<f64>> = (0..y.rows())
        .map(|i| {
            let (a, b) = (y.get(i, 0), y.get(i, 1));
            vec![c * a - s * b, s * a + c * b]
        })
        .collect();
    Matrix::from_rows(&rows).unwrap()
}

fn global_arrows(names: &[String], x: Matrix, y: Matrix) -> Vec<(f64, f64, f64, f64)> {
    let ds = Dataset::new(names.to_vec(), x, y, None).unwrap();
    let clock = build_global_clock(&ds, &ClockOptions::default()).unwrap().clock;
    clock
        .features
        .iter()
        .map(|a| (a.beta0, a.beta90, a.magnitude, a.angle_deg))
        .collect()
}

fn run_demo(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let status = Command::new(env!("CARGO_BIN_EXE_feature-clock"))
        .args(["demo", "--out-dir"])
        .arg(dir)
        .output()
        .expect("binary runs");
    assert!(status.status.success(), "demo failed");
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn criterion_8() -> Check {
    let mut worst_rot: f64 = 0.0;
    let mut worst_scale: f64 = 0.0;
    for seed in 0..10u64 {
        let mut r = rng(8000 + seed);
        let x = random_matrix(&mut r, 80, 4);
        let y = linear_embedding(&mut r, &x, 0.5);
        let names: Vec<String> = (0..4).map(|j| format!("f{j}")).collect();
        let base = global_arrows(&names, x.clone(), y.clone());

        for phi in [17.0, 90.0, 200.0] {
            let rotated = global_arrows(&names, x.clone(), rotate(&y, phi));
            for (a, b) in base.iter().zip(&rotated) {
                worst_rot = worst_rot.max((a.2 - b.2).abs());
                worst_rot = worst_rot.max(angle_gap(a.3 + phi, b.3, 360.0));
            }
        }

        let factors = [3.0, 0.01, 250.0, 1.7];
        let shifts = [5.0, -2.0, 1e3, 0.0];
        let rows: Vec<Vec<f64>> = (0..x.rows())
            .map(|i| (0..4).map(|j| x.get(i, j) * factors[j] + shifts[j]).collect())
            .collect();
        let scaled = global_arrows(&names, Matrix::from_rows(&rows).unwrap(), y.clone());
        for (a, b) in base.iter().zip(&scaled) {
            worst_scale = worst_scale.max((a.0 - b.0).abs()).max((a.1 - b.1).abs());
        }
    }
    ensure(worst_rot <= 1e-9, || format!("rotation equivariance gap {worst_rot:.3e}"))?;
    ensure(worst_scale <= 1e-9, || format!("scaling invariance gap {worst_scale:.3e}"))?;

    let tmp = tempfile::tempdir().unwrap();
    let first = run_demo(&tmp.path().join("a"));
    let second = run_demo(&tmp.path().join("b"));
    ensure(first.len() == 6, || format!("demo wrote {} files", first.len()))?;
    ensure(first == second, || "demo reruns differ".to_string())?;
    Ok(format!(
        "rotation gap {worst_rot:.2e}, scaling gap {worst_scale:.2e}, demo reruns byte-identical"
    ))
}

fn criterion_9() -> Check {
    let tmp = tempfile::tempdir().unwrap();
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let out = Command::new(env!("CARGO_BIN_EXE_feature-clock"))
        .arg("global")
        .arg("--x")
        .arg(data.join("iris_X.csv"))
        .arg("--y")
        .arg(data.join("iris_pca.csv"))
        .arg("--out-dir")
        .arg(tmp.path())
        .output()
        .unwrap();
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("clock.json")).unwrap()).unwrap();
    let config = &json["config"];
    ensure(config["alpha"] == 0.05, || format!("alpha echo {}", config["alpha"]))?;
    ensure(config["theta_step_deg"] == 5.0, || format!("theta step echo {}", config["theta_step_deg"]))?;
    ensure(config["standardize_x"] == true, || "X not standardized".into())?;
    ensure(config["center_y"] == true, || "Y not centered".into())?;
    Ok("alpha 0.05, theta step 5°, X standardized, Y centered".into())
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 9] = [
        ("closed-form maximum", criterion_1),
        ("circle theorem", criterion_2),
        ("PCA biplot equivalence", criterion_3),
        ("OLS oracle", criterion_4),
        ("Student-t tail", criterion_5),
        ("minimum spanning tree", criterion_6),
        ("logistic fit", criterion_7),
        ("equivariance and determinism", criterion_8),
        ("default configuration", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
