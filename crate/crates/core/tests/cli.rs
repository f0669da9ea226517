use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;
use visco::harness::config::{ExperimentConfig, Scenario};
use visco::harness::output::read_trace;
use visco::harness::{fig3_errors, run_fig1};

fn visco(out: &Path, args: &[&str]) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_visco"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .unwrap();
    let text = format!(
        "{}{}",
        String::from_utf8_lossy(&o.stdout),
        String::from_utf8_lossy(&o.stderr)
    );
    (o.status.code().unwrap_or(-1), text)
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn read_rows(path: &Path) -> Vec<Vec<f64>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records()
        .map(|rec| rec.unwrap().iter().map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn fig3_passes_and_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = visco(dir.path(), &["fig3"]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("PASS"), "{text}");
    let run_dir = dir.path().join("fig3");
    let m = manifest(&run_dir);
    assert_eq!(m["status"], "complete");
    assert_eq!(m["scenario"], "fig3");
    assert_eq!(m["config"]["schema"], 1);
    for f in m["outputs"].as_array().unwrap() {
        assert!(run_dir.join(f.as_str().unwrap()).exists(), "{f}");
    }
}

#[test]
fn fig3_matches_golden_errors() {
    let golden = read_rows(&Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/fig3_errors.csv"));
    let eps: Vec<f64> = golden.iter().map(|r| r[0]).collect();
    let errors = fig3_errors(&eps).unwrap();
    for (row, e) in golden.iter().zip(errors) {
        assert!((e - row[1]).abs() <= 1e-9 * row[1], "eps {}: {e} vs {}", row[0], row[1]);
    }
}

#[test]
fn bad_config_exits_with_error_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "schema = 1\n[medium]\nrho = -3.0\n").unwrap();
    let (code, text) = visco(dir.path(), &["--config", cfg.to_str().unwrap(), "fig3"]);
    assert_eq!(code, 2, "{text}");
    fs::write(&cfg, "schema = 2\n").unwrap();
    assert_eq!(visco(dir.path(), &["--config", cfg.to_str().unwrap(), "fig3"]).0, 2);
    fs::write(&cfg, "schema = 1\nunknown_key = 3\n").unwrap();
    assert_eq!(visco(dir.path(), &["--config", cfg.to_str().unwrap(), "fig3"]).0, 2);
}

#[test]
fn failed_check_exits_with_one() {
    // the default shear viscosity is far outside the regime where correction helps
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("loc.toml");
    fs::write(
        &cfg,
        "schema = 1\n[geometry]\nsources = 2\n[grid]\nn = 1024\ndt = 2.5e-4\nsearch_half = 20\n",
    )
    .unwrap();
    let (code, text) = visco(dir.path(), &["--config", cfg.to_str().unwrap(), "localize"]);
    assert_eq!(code, 1, "{text}");
    assert!(text.contains("FAIL"), "{text}");
    assert_eq!(manifest(&dir.path().join("localize"))["status"], "failed");
}

#[test]
fn same_seed_gives_identical_outputs() {
    let run = |seed: &str| {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("loc.toml");
        fs::write(
            &cfg,
            "schema = 1\n[medium]\nnu_s = 2e-4\n[geometry]\nsources = 2\n[grid]\nn = 1024\ndt = 2.5e-4\nsearch_half = 20\n",
        )
        .unwrap();
        let (code, text) = visco(
            dir.path(),
            &["--config", cfg.to_str().unwrap(), "--seed", seed, "localize", "--snr-db", "10"],
        );
        assert!(code == 0 || code == 1, "{text}");
        fs::read_to_string(dir.path().join("localize/localize_sources.csv")).unwrap()
    };
    let a = run("11");
    assert_eq!(a, run("11"));
    assert_ne!(a, run("12"));
}

#[test]
fn green_and_correct_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = visco(
        dir.path(),
        &["--nu-s", "2e-4", "--n", "2048", "--dt", "6e-5", "green", "--receiver", "0,0.015,0"],
    );
    assert_eq!(code, 0, "{text}");
    let green = dir.path().join("green/green.csv");
    let rows = read_rows(&green);
    assert_eq!(rows.len(), 2048);
    assert_eq!(rows[0].len(), 10);
    // g11 at a receiver on the y axis is the transverse entry
    let trace = dir.path().join("g11.csv");
    let mut w = csv::Writer::from_path(&trace).unwrap();
    w.write_record(["t", "value"]).unwrap();
    for r in &rows {
        w.write_record([r[0].to_string(), r[1].to_string()]).unwrap();
    }
    w.flush().unwrap();
    let (code, text) = visco(
        dir.path(),
        &["--nu-s", "2e-4", "correct", "--input", trace.to_str().unwrap()],
    );
    assert_eq!(code, 0, "{text}");
    let (t, v) = read_trace(&dir.path().join("correct/corrected.csv")).unwrap();
    assert_eq!(t.len(), 2048);
    let peak = |v: &[f64]| (0..v.len()).fold(0, |b, i| if v[i].abs() > v[b].abs() { i } else { b });
    let raw: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let (before, after) = (t[peak(&raw)], t[peak(&v)]);
    assert!(
        (after - 0.015).abs() < (before - 0.015).abs(),
        "peak moved from {before} to {after}"
    );
}

#[test]
fn fig1_without_viscosity_reproduces_elastic_trace() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = ExperimentConfig::defaults(Scenario::Fig1);
    for c in &mut config.cases {
        c.nu_s = 0.0;
    }
    run_fig1(&config, dir.path()).unwrap();
    for k in 0..config.cases.len() {
        let rows = read_rows(&dir.path().join(format!("fig1_case{}.csv", k + 1)));
        let scale = rows.iter().map(|r| r[1].abs()).fold(0.0, f64::max);
        for r in rows {
            assert!((r[1] - r[2]).abs() <= 1e-12 * scale);
        }
    }
}

#[test]
fn fig1_curves_stable_under_window_doubling() {
    let traces = |n: usize| -> Vec<Vec<Vec<f64>>> {
        let dir = tempfile::tempdir().unwrap();
        let mut config = ExperimentConfig::defaults(Scenario::Fig1);
        config.grid.n = n;
        run_fig1(&config, dir.path()).unwrap();
        (1..=config.cases.len())
            .map(|k| read_rows(&dir.path().join(format!("fig1_case{k}.csv"))))
            .collect()
    };
    let n = ExperimentConfig::defaults(Scenario::Fig1).grid.n;
    let (a, b) = (traces(n), traces(2 * n));
    for (ca, cb) in a.iter().zip(&b) {
        for col in 1..3 {
            let scale = ca.iter().map(|r| r[col].abs()).fold(0.0, f64::max);
            let diff = ca.iter().zip(cb).map(|(x, y)| (x[col] - y[col]).abs()).fold(0.0, f64::max);
            assert!(diff <= 5e-3 * scale, "column {col}: {diff} vs {scale}");
        }
    }
}

#[test]
fn kk_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, text) = visco(dir.path(), &["kk-check"]);
    assert_eq!(code, 0, "{text}");
    assert!(dir.path().join("kk-check/kk_residuals.csv").exists());
}

#[test]
fn fig2_reports_elastic_fronts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fig2.toml");
    fs::write(
        &cfg,
        "schema = 1\n[grid]\nn = 4096\ndt = 1.5e-5\npoints = 21\nradial_samples = 300\nprofile_step = 1e-4\n",
    )
    .unwrap();
    let (code, text) = visco(dir.path(), &["--config", cfg.to_str().unwrap(), "fig2"]);
    assert!(code == 0 || code == 1, "{text}");
    assert!(text.contains("PASS elastic shear front"), "{text}");
    assert!(text.contains("PASS elastic pressure front"), "{text}");
    let m = manifest(&dir.path().join("fig2"));
    assert_eq!(m["outputs"].as_array().unwrap().len(), 7);
    let field = read_rows(&dir.path().join("fig2/fig2_elastic.csv"));
    assert_eq!(field.len(), 21 * 21);
}
