use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn qwalk(args: &[&str]) -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .output()
        .expect("binary runs");
    Outcome {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn write_config(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn command(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> Outcome {
    let mut args = vec![
        cmd,
        "--config",
        config.to_str().unwrap(),
        "--out-dir",
        out.to_str().unwrap(),
    ];
    args.extend(extra);
    qwalk(&args)
}

fn read_table(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(rows: &[Vec<String>], index: usize) -> Vec<f64> {
    rows.iter().map(|r| r[index].parse().unwrap()).collect()
}

#[test]
fn standard_run_writes_normalized_tables() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "c.json", r#"{"steps": 15}"#);
    let out = dir.path().join("out");
    let result = command("run", &config, &out, &[]);
    assert_eq!(result.code, 0, "{}", result.stderr);

    let (header, rows) = read_table(&out.join("distribution.csv"));
    assert_eq!(header, ["step", "n", "P_total", "P_spin1", "P_spin2"]);
    for step in 0..=15 {
        let total: f64 = rows
            .iter()
            .filter(|r| r[0] == step.to_string())
            .map(|r| r[2].parse::<f64>().unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-8, "step {step}: {total}");
    }
    assert!(rows.iter().all(|r| r[2].contains('e')));

    let (header, rows) = read_table(&out.join("moments.csv"));
    assert_eq!(
        header,
        [
            "step",
            "mean",
            "variance",
            "std",
            "energy",
            "peak_center_ratio"
        ]
    );
    assert_eq!(rows.len(), 16);
    assert!(column(&rows, 1).iter().all(|m| (m - 0.5).abs() < 1e-8));

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "run");
    assert_eq!(manifest["seed"], 20_190_208);
    assert_eq!(manifest["config"]["steps"], 15);
    assert_eq!(manifest["config"]["initial"]["kind"], "ratchet");
    assert_eq!(
        manifest["outputs"],
        serde_json::json!(["distribution.csv", "moments.csv"])
    );
}

#[test]
fn zero_steps_gives_only_the_initial_distribution() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "c.json", r#"{"steps": 0, "shift_mode": "ideal"}"#);
    let out = dir.path().join("out");
    assert_eq!(command("run", &config, &out, &[]).code, 0);
    let (_, rows) = read_table(&out.join("distribution.csv"));
    assert!(rows.iter().all(|r| r[0] == "0"));
    let occupied: Vec<&Vec<String>> = rows.iter().filter(|r| r[2] != "0.00000000000e0").collect();
    assert_eq!(occupied.len(), 1);
    assert_eq!(occupied[0][1], "0");
    let (_, moments) = read_table(&out.join("moments.csv"));
    assert_eq!(moments.len(), 1);
}

#[test]
fn out_of_range_noise_is_a_config_error_with_line() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "bad.json",
        "{\n  \"steps\": 4,\n  \"noise_eps\": 2\n}\n",
    );
    let out = dir.path().join("out");
    let result = command("run", &config, &out, &[]);
    assert_eq!(result.code, 2);
    assert!(result.stderr.contains("bad.json:3:"), "{}", result.stderr);
    assert!(result.stderr.contains("noise_eps") && result.stderr.contains("[0, 1]"));
    assert!(!out.exists());

    let result = qwalk(&["validate", "--config", config.to_str().unwrap()]);
    assert_eq!(result.code, 2);
}

#[test]
fn schema_violations_report_line_and_column() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "bad.json",
        "{\n  \"steps\": 4,\n  \"noise_level\": 0.1\n}\n",
    );
    let result = qwalk(&["validate", "--config", config.to_str().unwrap()]);
    assert_eq!(result.code, 2);
    assert!(result.stderr.contains("bad.json:3:"), "{}", result.stderr);
    assert!(result.stderr.contains("unknown field `noise_level`"));

    let config = write_config(&dir, "typed.json", "{\"steps\": \"four\"}");
    assert_eq!(
        qwalk(&["validate", "--config", config.to_str().unwrap()]).code,
        2
    );
    let missing = dir.path().join("absent.json");
    assert_eq!(
        qwalk(&["validate", "--config", missing.to_str().unwrap()]).code,
        2
    );

    let config = write_config(
        &dir,
        "good.json",
        r#"{"steps": 4, "sweep": {"noise_eps": [0, 1]}}"#,
    );
    let result = qwalk(&["validate", "--config", config.to_str().unwrap()]);
    assert_eq!(result.code, 0);
    assert!(result.stdout.contains("ok"));
}

#[test]
fn truncation_exits_with_numerical_code_naming_the_step() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "c.json",
        r#"{"steps": 10, "shift_mode": "ideal", "lattice": {"n_min": -3, "n_max": 3}}"#,
    );
    let result = command("run", &config, &dir.path().join("out"), &[]);
    assert_eq!(result.code, 3, "{}", result.stderr);
    assert!(result.stderr.contains("step 4"), "{}", result.stderr);
}

#[test]
fn outputs_are_byte_identical_across_runs_and_thread_counts() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "c.json",
        r#"{"steps": 8, "noise_eps": 0.2, "ensemble": {"n_samples": 24, "sigma_beta": 0.02}}"#,
    );
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(command("run", &config, &a, &["--threads", "1"]).code, 0);
    assert_eq!(command("run", &config, &b, &["--threads", "4"]).code, 0);
    for name in ["distribution.csv", "moments.csv"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }

    let c = dir.path().join("c");
    assert_eq!(command("run", &config, &c, &["--seed", "7"]).code, 0);
    assert_ne!(
        fs::read(a.join("distribution.csv")).unwrap(),
        fs::read(c.join("distribution.csv")).unwrap()
    );
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(c.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["config"]["seed"], 7);
}

#[test]
fn manifest_config_reproduces_the_run() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "c.json",
        r#"{"steps": 6, "shift_mode": "ideal", "noise_eps": 0.3, "ensemble": {"n_samples": 10}}"#,
    );
    let first = dir.path().join("first");
    assert_eq!(command("run", &config, &first, &["--seed", "99"]).code, 0);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(first.join("manifest.json")).unwrap()).unwrap();
    let echo = write_config(&dir, "echo.json", &manifest["config"].to_string());

    let second = dir.path().join("second");
    assert_eq!(command("run", &echo, &second, &[]).code, 0);
    for name in ["distribution.csv", "moments.csv"] {
        assert_eq!(
            fs::read(first.join(name)).unwrap(),
            fs::read(second.join(name)).unwrap()
        );
    }
}

fn sweep_ratio_at(rows: &[Vec<String>], point: usize, step: usize) -> f64 {
    let row = rows
        .iter()
        .find(|r| r[0] == point.to_string() && r[6] == step.to_string())
        .unwrap();
    row[11].parse().unwrap()
}

#[test]
fn noise_sweep_loses_bimodality() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "c.json",
        r#"{"steps": 8, "shift_mode": "ideal", "ensemble": {"n_samples": 200},
            "sweep": {"noise_eps": [0, 0.08, 0.2, 1]}}"#,
    );
    let out = dir.path().join("out");
    let result = command("sweep", &config, &out, &[]);
    assert_eq!(result.code, 0, "{}", result.stderr);
    let (header, rows) = read_table(&out.join("sweep.csv"));
    assert_eq!(
        header[..7],
        [
            "point",
            "label",
            "noise_eps",
            "k1",
            "k2",
            "coin_alpha",
            "step"
        ]
    );
    assert_eq!(rows.len(), 4 * 9);
    let ratios: Vec<f64> = (0..4).map(|p| sweep_ratio_at(&rows, p, 8)).collect();
    assert!(ratios.windows(2).all(|w| w[0] > w[1]), "{ratios:?}");
    assert_eq!(rows[9][1], "noise_eps=0.08");
}

#[test]
fn single_point_sweep_matches_run_moments() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "c.json",
        r#"{"steps": 7, "noise_eps": 0.1, "ensemble": {"n_samples": 5},
            "sweep": {"noise_eps": [0.1]}}"#,
    );
    let run_out = dir.path().join("run");
    let sweep_out = dir.path().join("sweep");
    assert_eq!(command("run", &config, &run_out, &[]).code, 0);
    assert_eq!(command("sweep", &config, &sweep_out, &[]).code, 0);
    let (_, moments) = read_table(&run_out.join("moments.csv"));
    let (_, sweep) = read_table(&sweep_out.join("sweep.csv"));
    assert_eq!(moments.len(), sweep.len());
    for (m, s) in moments.iter().zip(&sweep) {
        assert_eq!(m[..], s[6..]);
    }
}

#[test]
fn biased_walks_outrun_the_symmetric_walk() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "c.json",
        r#"{"steps": 12, "sweep": {"points": [
            {"label": "BC", "coin_bias": 0.7},
            {"label": "BR", "kick": [-1.7, 1.0]},
            {"label": "symmetric"}
        ]}}"#,
    );
    let out = dir.path().join("out");
    assert_eq!(command("sweep", &config, &out, &[]).code, 0);
    let (_, rows) = read_table(&out.join("sweep.csv"));
    let shift = |point: usize| {
        let mean = |step: usize| -> f64 {
            rows.iter()
                .find(|r| r[0] == point.to_string() && r[6] == step.to_string())
                .unwrap()[7]
                .parse()
                .unwrap()
        };
        (mean(12) - mean(0)).abs()
    };
    assert!(shift(0) > shift(2) + 1.0);
    assert!(shift(1) > shift(2) + 1.0);
    assert!(shift(2) < 1e-8);
    assert_eq!(rows[0][1], "BC");
}

#[test]
fn ideal_reversal_returns_and_reports_fidelity() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        &dir,
        "c.json",
        r#"{"steps": 8, "shift_mode": "ideal", "reverse": {"form": "composed"}}"#,
    );
    let out = dir.path().join("out");
    let result = command("reverse", &config, &out, &[]);
    assert_eq!(result.code, 0, "{}", result.stderr);
    assert!(result.stdout.contains("mean fidelity"));

    let (_, fid) = read_table(&out.join("fidelity.csv"));
    assert!(column(&fid, 1)[0] >= 1.0 - 1e-8);
    let (_, moments) = read_table(&out.join("moments.csv"));
    let energy = column(&moments, 4);
    assert_eq!(energy.len(), 17);
    assert!(energy[..=8].windows(2).all(|w| w[1] >= w[0]));
    assert!(energy[8..].windows(2).all(|w| w[1] <= w[0]));
    assert!(energy[16].abs() < 1e-8);

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert!(manifest["summary"]["mean_fidelity"].as_f64().unwrap() >= 1.0 - 1e-8);
    assert_eq!(manifest["summary"]["steps_forward"], 8);
}

#[test]
fn quasimomentum_spread_lowers_ratchet_fidelity() {
    let dir = TempDir::new().unwrap();
    let sharp = write_config(&dir, "sharp.json", r#"{"steps": 8, "reverse": {}}"#);
    let spread = write_config(
        &dir,
        "spread.json",
        r#"{"steps": 8, "reverse": {}, "ensemble": {"n_samples": 40, "sigma_beta": 0.025}}"#,
    );
    let mean = |config: &Path, name: &str| -> f64 {
        let out = dir.path().join(name);
        assert_eq!(command("reverse", config, &out, &[]).code, 0);
        let (_, fid) = read_table(&out.join("fidelity.csv"));
        let f = column(&fid, 1);
        f.iter().sum::<f64>() / f.len() as f64
    };
    let a = mean(&sharp, "sharp");
    let b = mean(&spread, "spread");
    assert!(a >= 1.0 - 1e-8);
    assert!(b < a - 0.1, "{b}");
}

#[test]
fn sweep_without_grid_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "c.json", r#"{"steps": 3}"#);
    let result = command("sweep", &config, &dir.path().join("out"), &[]);
    assert_eq!(result.code, 2);
    assert!(result.stderr.contains("sweep"));
}

#[test]
fn shipped_configs_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let result = qwalk(&["validate", "--config", path.to_str().unwrap()]);
        assert_eq!(result.code, 0, "{}: {}", path.display(), result.stderr);
        seen += 1;
    }
    assert!(seen >= 4);
}
