//! CSV tables and the run manifest.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use qw_core::{moments, peak_center_ratio, MomentStats, WalkTrajectory};
use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

pub const DISTRIBUTION_HEADER: [&str; 5] = ["step", "n", "P_total", "P_spin1", "P_spin2"];
pub const MOMENTS_HEADER: [&str; 6] = [
    "step",
    "mean",
    "variance",
    "std",
    "energy",
    "peak_center_ratio",
];

/// Twelve significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

/// Ordered CSV writer that remembers the files it produced.
pub struct OutputDir {
    dir: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::output(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn files(&self) -> &[String] {
        &self.written
    }

    pub fn write_csv<I>(&mut self, name: &str, header: &[&str], rows: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let path = self.dir.join(name);
        let err = |e: csv::Error| CliError::output(&path, e);
        let mut writer = csv::Writer::from_path(&path).map_err(err)?;
        writer.write_record(header).map_err(err)?;
        for row in rows {
            writer.write_record(&row).map_err(err)?;
        }
        writer.flush().map_err(|e| CliError::output(&path, e))?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn write_manifest(&mut self, manifest: &Manifest) -> Result<(), CliError> {
        let path = self.dir.join("manifest.json");
        let mut text =
            serde_json::to_string_pretty(manifest).map_err(|e| CliError::output(&path, e))?;
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| CliError::output(&path, e))?;
        Ok(())
    }
}

/// Long-format rows `step, n, P_total, P_spin1, P_spin2`.
pub fn distribution_rows(trajectory: &WalkTrajectory) -> Vec<Vec<String>> {
    let lattice = trajectory.lattice;
    let mut rows = Vec::with_capacity(trajectory.records.len() * lattice.len());
    for record in &trajectory.records {
        let d = &record.distribution;
        for (i, n) in lattice.momenta().enumerate() {
            rows.push(vec![
                record.step.to_string(),
                n.to_string(),
                fmt_float(d.spin1[i] + d.spin2[i]),
                fmt_float(d.spin1[i]),
                fmt_float(d.spin2[i]),
            ]);
        }
    }
    rows
}

/// `mean, variance, std, energy, peak_center_ratio` for one step.
pub fn moment_fields(stats: &MomentStats, trajectory: &WalkTrajectory) -> Vec<String> {
    let ratio = peak_center_ratio(&trajectory.distribution(stats.step).total()).unwrap_or(f64::NAN);
    vec![
        fmt_float(stats.mean),
        fmt_float(stats.variance),
        fmt_float(stats.std_dev),
        fmt_float(stats.energy),
        fmt_float(ratio),
    ]
}

pub fn moment_rows(trajectory: &WalkTrajectory) -> Vec<Vec<String>> {
    moments(trajectory)
        .iter()
        .map(|m| {
            let mut row = vec![m.step.to_string()];
            row.extend(moment_fields(m, trajectory));
            row
        })
        .collect()
}

/// Record of one invocation. Everything except `timestamp_unix` is a pure
/// function of `config`.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub timestamp_unix: u64,
    pub config: RunConfig,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<serde_json::Value>,
}

impl Manifest {
    pub fn new(command: &'static str, config: RunConfig, outputs: &[String]) -> Self {
        let timestamp_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed: config.seed,
            timestamp_unix,
            config,
            outputs: outputs.to_vec(),
            summary: None,
        }
    }
}
