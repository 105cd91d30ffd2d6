//! Discrete-time quantum walk of a two-level atom in momentum space.
//!
//! The walker lives on a truncated lattice of momentum eigenstates `|n>` (in
//! units of two-photon recoils) tensored with two internal hyperfine states.
//! Each step applies a coin rotation on the internal states followed by a
//! spin-dependent momentum shift, realized either as an ideal translation or
//! as a kicked-rotor ratchet pulse at quantum resonance.
//!
//! Module map:
//! - [`lattice`], [`state`]: the momentum lattice and spinor amplitudes.
//! - [`coin`], [`kick`], [`shift`], [`bessel`]: single-step unitary operators.
//! - [`protocol`]: standard, biased, noisy and reversed walks.
//! - [`ensemble`]: Monte Carlo averaging over quasimomentum, noise and a
//!   static thermal background.
//! - [`analysis`]: distributions, moments, fidelity and shape diagnostics.

pub mod analysis;
pub mod bessel;
pub mod coin;
pub mod ensemble;
mod error;
pub mod kick;
pub mod lattice;
pub mod protocol;
pub mod shift;
pub mod state;
pub mod trajectory;

pub use analysis::{
    fidelity, moments, momentum_distribution, peak_center_ratio, scaling_exponent, MomentStats,
    MomentumDistribution, ScalingFit,
};
pub use bessel::bessel_j;
pub use coin::{apply_coin, apply_rotation, coin_matrix, CoinParams, SpinRotation};
pub use ensemble::{run_ensemble, run_reversed_ensemble, EnsembleSpec, ReversedEnsemble};
pub use error::WalkError;
pub use kick::{
    apply_free_evolution, apply_kick, kick_strength_from_physical, KickBand, KickParams,
    PhysicalKickInputs, RESONANT_PERIOD,
};
pub use lattice::MomentumLattice;
pub use protocol::{
    run_biased_coin_walk, run_biased_ratchet_walk, run_reversed_walk, run_walk, sample_noisy_coin,
    walk_step, ReversalForm, ReversalRun, ShiftMode, WalkConfig,
};
pub use shift::{ideal_shift, ideal_shift_adjoint};
pub use state::{initial_ratchet_state, Spin, SpinorState};
pub use trajectory::{StepRecord, WalkTrajectory};

pub use num_complex::Complex64;

pub type Result<T, E = WalkError> = std::result::Result<T, E>;
