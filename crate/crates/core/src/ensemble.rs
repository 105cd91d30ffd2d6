//! Incoherent averages over realizations.
//!
//! Each sample draws its own quasimomentum and coin-noise sequence from an
//! independent RNG stream. Populations (never amplitudes) are averaged in
//! sample order, so results are bit-reproducible regardless of thread count.
//! A static Gaussian background standing in for the thermal cloud can be
//! mixed into the averaged distributions afterwards.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::protocol::{run_reversed_with_rng, run_walk_with_rng, walk_rng};
use crate::state::fold_beta;
use crate::{
    MomentumLattice, Result, ReversalForm, SpinorState, StepRecord, WalkConfig, WalkError,
    WalkTrajectory,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub n_samples: usize,
    /// Standard deviation of the Gaussian quasimomentum spread.
    pub sigma_beta: f64,
    /// Weight of the static thermal background in the final distributions.
    pub thermal_fraction: f64,
    /// Momentum standard deviation of the thermal background.
    pub thermal_sigma: f64,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        Self {
            n_samples: 1,
            sigma_beta: 0.0,
            thermal_fraction: 0.0,
            thermal_sigma: 1.0,
        }
    }
}

impl EnsembleSpec {
    pub fn samples(n_samples: usize) -> Self {
        Self {
            n_samples,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(WalkError::Domain {
                name: "n_samples",
                value: 0.0,
                domain: ">= 1",
            });
        }
        if !(self.sigma_beta.is_finite() && self.sigma_beta >= 0.0) {
            return Err(WalkError::Domain {
                name: "sigma_beta",
                value: self.sigma_beta,
                domain: "[0, inf)",
            });
        }
        if !(0.0..=1.0).contains(&self.thermal_fraction) {
            return Err(WalkError::Domain {
                name: "thermal_fraction",
                value: self.thermal_fraction,
                domain: "[0, 1]",
            });
        }
        if !(self.thermal_sigma.is_finite() && self.thermal_sigma > 0.0) {
            return Err(WalkError::Domain {
                name: "thermal_sigma",
                value: self.thermal_sigma,
                domain: "(0, inf)",
            });
        }
        Ok(())
    }
}

/// Discretized Gaussian `G(n; 0, sigma)` over the lattice, summing to 1.
pub fn thermal_background(lattice: &MomentumLattice, sigma: f64) -> Vec<f64> {
    let weights: Vec<f64> = lattice
        .momenta()
        .map(|n| (-(n as f64).powi(2) / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// Quasimomentum for sample `rng`: Gaussian about 0 folded into `[0, 1)`, or
/// the initial state's own value when there is no spread.
fn draw_beta<R: Rng + ?Sized>(
    spec: &EnsembleSpec,
    initial: &SpinorState,
    rng: &mut R,
) -> Result<f64> {
    if spec.sigma_beta == 0.0 {
        return Ok(initial.beta());
    }
    let normal =
        Normal::new(0.0, spec.sigma_beta).map_err(|e| WalkError::InvalidConfig(e.to_string()))?;
    Ok(fold_beta(normal.sample(rng)))
}

fn average(trajectories: &[WalkTrajectory]) -> WalkTrajectory {
    let mut mean = trajectories[0].clone();
    mean.states = None;
    let scale = 1.0 / trajectories.len() as f64;
    for (k, record) in mean.records.iter_mut().enumerate() {
        let d = &mut record.distribution;
        d.spin1.fill(0.0);
        d.spin2.fill(0.0);
        record.energy = 0.0;
        for t in trajectories {
            let other = &t.records[k];
            for (a, b) in d.spin1.iter_mut().zip(&other.distribution.spin1) {
                *a += b;
            }
            for (a, b) in d.spin2.iter_mut().zip(&other.distribution.spin2) {
                *a += b;
            }
            record.energy += other.energy;
        }
        d.spin1.iter_mut().for_each(|v| *v *= scale);
        d.spin2.iter_mut().for_each(|v| *v *= scale);
        record.energy *= scale;
    }
    mean
}

/// `P = (1 - f) P_walk + f G`, split evenly between the spins and
/// renormalized to unit total.
pub fn mix_thermal(record: &mut StepRecord, fraction: f64, sigma: f64) {
    if fraction == 0.0 {
        return;
    }
    let d = &mut record.distribution;
    let background = thermal_background(&d.lattice, sigma);
    let background_energy: f64 = d
        .lattice
        .momenta()
        .zip(&background)
        .map(|(n, g)| (n as f64).powi(2) * g / 2.0)
        .sum();
    for (i, g) in background.iter().enumerate() {
        d.spin1[i] = (1.0 - fraction) * d.spin1[i] + fraction * g / 2.0;
        d.spin2[i] = (1.0 - fraction) * d.spin2[i] + fraction * g / 2.0;
    }
    let total = d.sum();
    d.spin1.iter_mut().for_each(|v| *v /= total);
    d.spin2.iter_mut().for_each(|v| *v /= total);
    record.energy = (1.0 - fraction) * record.energy + fraction * background_energy;
}

fn finish(mut mean: WalkTrajectory, spec: &EnsembleSpec) -> WalkTrajectory {
    for record in &mut mean.records {
        mix_thermal(record, spec.thermal_fraction, spec.thermal_sigma);
    }
    mean
}

fn prepare_sample(
    config: &WalkConfig,
    initial: &SpinorState,
    spec: &EnsembleSpec,
    sample: usize,
) -> Result<(rand_chacha::ChaCha8Rng, SpinorState)> {
    let mut rng = walk_rng(config.seed, sample as u64);
    let beta = draw_beta(spec, initial, &mut rng)?;
    let state = initial.clone().with_beta(beta)?;
    Ok((rng, state))
}

/// Average of `spec.n_samples` independent walks, then thermal mixing.
pub fn run_ensemble(
    config: &WalkConfig,
    initial: &SpinorState,
    spec: &EnsembleSpec,
) -> Result<WalkTrajectory> {
    spec.validate()?;
    config.validate()?;
    let samples = (0..spec.n_samples)
        .into_par_iter()
        .map(|i| {
            let (mut rng, state) = prepare_sample(config, initial, spec, i)?;
            run_walk_with_rng(config, &state, &mut rng, false)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(finish(average(&samples), spec))
}

#[derive(Debug, Clone)]
pub struct ReversedEnsemble {
    pub trajectory: WalkTrajectory,
    /// Return fidelity of each sample against its own initial state.
    pub fidelities: Vec<f64>,
    pub mean_fidelity: f64,
}

/// Ensemble of forward-then-reversed walks.
pub fn run_reversed_ensemble(
    config: &WalkConfig,
    initial: &SpinorState,
    j_forward: usize,
    form: ReversalForm,
    spec: &EnsembleSpec,
) -> Result<ReversedEnsemble> {
    spec.validate()?;
    let runs = (0..spec.n_samples)
        .into_par_iter()
        .map(|i| {
            let (mut rng, state) = prepare_sample(config, initial, spec, i)?;
            run_reversed_with_rng(config, &state, j_forward, form, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    let fidelities: Vec<f64> = runs.iter().map(|r| r.fidelity).collect();
    let mean_fidelity = fidelities.iter().sum::<f64>() / fidelities.len() as f64;
    let trajectories: Vec<WalkTrajectory> = runs.into_iter().map(|r| r.trajectory).collect();
    Ok(ReversedEnsemble {
        trajectory: finish(average(&trajectories), spec),
        fidelities,
        mean_fidelity,
    })
}
