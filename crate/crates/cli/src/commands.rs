use std::path::PathBuf;

use qw_core::{moments, run_ensemble, run_reversed_ensemble, ReversalForm};
use serde_json::json;

use crate::config::LoadedConfig;
use crate::output::{
    distribution_rows, fmt_float, moment_fields, moment_rows, Manifest, OutputDir,
    DISTRIBUTION_HEADER, MOMENTS_HEADER,
};
use crate::CliError;

#[derive(Debug, Clone)]
pub struct Options {
    pub config: PathBuf,
    pub out_dir: PathBuf,
    /// Overrides the seed in the config file.
    pub seed: Option<u64>,
    /// Worker threads for ensembles; 0 picks the machine default.
    pub threads: usize,
}

fn load(options: &Options) -> Result<LoadedConfig, CliError> {
    let mut loaded = LoadedConfig::from_file(&options.config)?;
    if let Some(seed) = options.seed {
        loaded.config.seed = seed;
    }
    Ok(loaded)
}

fn with_threads<T: Send>(
    threads: usize,
    job: impl FnOnce() -> Result<T, CliError> + Send,
) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Threads(e.to_string()))?;
    pool.install(job)
}

/// Schema and range check only.
pub fn validate(config: &std::path::Path) -> Result<LoadedConfig, CliError> {
    let loaded = LoadedConfig::from_file(config)?;
    if loaded.config.sweep.is_some() {
        loaded.sweep_points()?;
    }
    Ok(loaded)
}

/// Ensemble walk: `distribution.csv`, `moments.csv`, `manifest.json`.
pub fn run(options: &Options) -> Result<Vec<String>, CliError> {
    let loaded = load(options)?;
    let walk = loaded.walk_config();
    let lattice = loaded.lattice_for(&walk)?;
    let initial = loaded.initial_state(lattice, &walk)?;
    let spec = loaded.ensemble_spec();
    let trajectory = with_threads(options.threads, || {
        Ok(run_ensemble(&walk, &initial, &spec)?)
    })?;

    let mut out = OutputDir::create(&options.out_dir)?;
    out.write_csv(
        "distribution.csv",
        &DISTRIBUTION_HEADER,
        distribution_rows(&trajectory),
    )?;
    out.write_csv("moments.csv", &MOMENTS_HEADER, moment_rows(&trajectory))?;
    let manifest = Manifest::new("run", loaded.resolved(), out.files());
    out.write_manifest(&manifest)?;
    Ok(out.files().to_vec())
}

/// One ensemble per grid point: `sweep.csv`, `manifest.json`.
pub fn sweep(options: &Options) -> Result<Vec<String>, CliError> {
    let loaded = load(options)?;
    let points = loaded.sweep_points()?;
    let spec = loaded.ensemble_spec();

    let mut rows = Vec::new();
    for (index, point) in points.iter().enumerate() {
        let walk = &point.config;
        let lattice = loaded.lattice_for(walk)?;
        let initial = loaded.initial_state(lattice, walk)?;
        let trajectory =
            with_threads(options.threads, || Ok(run_ensemble(walk, &initial, &spec)?))?;
        for stats in moments(&trajectory) {
            let mut row = vec![
                index.to_string(),
                point.label.clone(),
                fmt_float(walk.noise_eps),
                fmt_float(walk.kick.k1),
                fmt_float(walk.kick.k2),
                fmt_float(walk.step_coin.alpha),
                stats.step.to_string(),
            ];
            row.extend(moment_fields(&stats, &trajectory));
            rows.push(row);
        }
    }

    let mut header = vec!["point", "label", "noise_eps", "k1", "k2", "coin_alpha"];
    header.extend(MOMENTS_HEADER);
    let mut out = OutputDir::create(&options.out_dir)?;
    out.write_csv("sweep.csv", &header, rows)?;
    let manifest = Manifest::new("sweep", loaded.resolved(), out.files());
    out.write_manifest(&manifest)?;
    Ok(out.files().to_vec())
}

/// Forward walk followed by its reversal. Returns the written files and the
/// mean return fidelity.
pub fn reverse(options: &Options) -> Result<(Vec<String>, f64), CliError> {
    let loaded = load(options)?;
    let (j_forward, form) = loaded.reverse_plan();
    if j_forward == 0 {
        return Err(loaded.invalid(&["reverse"], "reversal needs at least one forward step"));
    }
    let walk = qw_core::WalkConfig {
        steps: j_forward,
        ..loaded.walk_config()
    };
    let lattice = loaded.lattice_for(&walk)?;
    let initial = loaded.initial_state(lattice, &walk)?;
    let spec = loaded.ensemble_spec();
    let form: ReversalForm = form.into();
    let result = with_threads(options.threads, || {
        Ok(run_reversed_ensemble(
            &walk, &initial, j_forward, form, &spec,
        )?)
    })?;

    let mut out = OutputDir::create(&options.out_dir)?;
    out.write_csv(
        "distribution.csv",
        &DISTRIBUTION_HEADER,
        distribution_rows(&result.trajectory),
    )?;
    out.write_csv(
        "moments.csv",
        &MOMENTS_HEADER,
        moment_rows(&result.trajectory),
    )?;
    let fidelity_rows = result
        .fidelities
        .iter()
        .enumerate()
        .map(|(i, f)| vec![i.to_string(), fmt_float(*f)]);
    out.write_csv("fidelity.csv", &["sample", "fidelity"], fidelity_rows)?;

    let mut manifest = Manifest::new("reverse", loaded.resolved(), out.files());
    manifest.summary = Some(json!({
        "steps_forward": j_forward,
        "form": match form {
            ReversalForm::Composed => "composed",
            ReversalForm::DirectConjugate => "direct",
        },
        "mean_fidelity": result.mean_fidelity,
    }));
    out.write_manifest(&manifest)?;
    Ok((out.files().to_vec(), result.mean_fidelity))
}
