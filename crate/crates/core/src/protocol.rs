//! Walk protocols built from coin and shift steps.
//!
//! The standard walk applies `T M(pi/2, pi)` once and then `T M(pi/2, -pi/2)`
//! for every further step. The shift `T` is either the ideal translation or a
//! ratchet pulse (kick with `k1`/`k2` per spin followed by free evolution).

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coin::{apply_rotation, SpinRotation};
use crate::kick::apply_kick_bands;
use crate::{
    apply_coin, apply_free_evolution, fidelity, ideal_shift, ideal_shift_adjoint,
    initial_ratchet_state, CoinParams, KickBand, KickParams, MomentumLattice, Result, Spin,
    SpinorState, WalkError, WalkTrajectory,
};

/// Seed used when a configuration does not name one.
pub const DEFAULT_SEED: u64 = 20_190_208;

/// Kick strength that best reproduces nearest-neighbour coupling.
pub const STANDARD_KICK: f64 = 1.45;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShiftMode {
    /// Exact translation by `+q` (spin 1) and `-q` (spin 2).
    Ideal,
    /// Kicked-rotor pulse followed by free evolution over `tau`.
    Ratchet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkConfig {
    pub steps: usize,
    pub shift_mode: ShiftMode,
    pub q: u32,
    pub kick: KickParams,
    pub first_coin: CoinParams,
    pub step_coin: CoinParams,
    /// Coin-phase noise: each toss gets `chi + delta`, `delta ~ U(-eps pi, eps pi)`.
    pub noise_eps: f64,
    /// Relative phase of the Bragg-prepared initial superposition.
    pub phi: f64,
    pub seed: u64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        Self {
            steps: 0,
            shift_mode: ShiftMode::Ratchet,
            q: 1,
            kick: KickParams::counter_propagating(STANDARD_KICK),
            first_coin: CoinParams::hadamard(),
            step_coin: CoinParams::balanced(),
            noise_eps: 0.0,
            phi: FRAC_PI_2,
            seed: DEFAULT_SEED,
        }
    }
}

impl WalkConfig {
    /// Standard symmetric walk with `|k| = 1.45`.
    pub fn standard(steps: usize, shift_mode: ShiftMode) -> Self {
        Self {
            steps,
            shift_mode,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.noise_eps) {
            return Err(WalkError::Domain {
                name: "noise_eps",
                value: self.noise_eps,
                domain: "[0, 1]",
            });
        }
        if self.q == 0 {
            return Err(WalkError::Domain {
                name: "q",
                value: 0.0,
                domain: "positive integer",
            });
        }
        self.kick.validate()?;
        let angles = [
            ("first_coin.alpha", self.first_coin.alpha),
            ("first_coin.chi", self.first_coin.chi),
            ("step_coin.alpha", self.step_coin.alpha),
            ("step_coin.chi", self.step_coin.chi),
            ("phi", self.phi),
        ];
        for (name, value) in angles {
            if !value.is_finite() {
                return Err(WalkError::Domain {
                    name,
                    value,
                    domain: "finite",
                });
            }
        }
        Ok(())
    }

    /// Lattice sized for this walk's step count and shift reach.
    pub fn lattice(&self) -> Result<MomentumLattice> {
        let k_max = match self.shift_mode {
            ShiftMode::Ideal => 0.0,
            ShiftMode::Ratchet => self.kick.max_strength(),
        };
        MomentumLattice::for_walk(self.steps, self.q, k_max)
    }

    /// Conventional starting state: the Bragg superposition in `|1>` for
    /// ratchet walks, `|1> (x) |0>` for ideal walks.
    pub fn initial_state(&self, lattice: MomentumLattice) -> Result<SpinorState> {
        match self.shift_mode {
            ShiftMode::Ratchet => initial_ratchet_state(lattice, self.phi, Spin::One),
            ShiftMode::Ideal => SpinorState::basis(lattice, 0, Spin::One),
        }
    }
}

/// RNG for one realization; `stream` separates ensemble members.
pub fn walk_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Perturb the coin phase by `delta ~ U(-eps pi, eps pi)`; `eps = 1` spans 2 pi.
pub fn sample_noisy_coin<R: Rng + ?Sized>(base: CoinParams, eps: f64, rng: &mut R) -> CoinParams {
    if eps == 0.0 {
        return base;
    }
    let half_width = eps * PI;
    let delta = rng.gen_range(-half_width..half_width);
    CoinParams::new(base.alpha, base.chi + delta)
}

/// The coins actually tossed in one realization: the first coin, then
/// `steps - 1` step coins, each with a fresh noise draw.
pub fn coin_sequence<R: Rng + ?Sized>(config: &WalkConfig, rng: &mut R) -> Vec<CoinParams> {
    (1..=config.steps)
        .map(|step| {
            let base = if step == 1 {
                config.first_coin
            } else {
                config.step_coin
            };
            sample_noisy_coin(base, config.noise_eps, rng)
        })
        .collect()
}

/// Shift operator prepared once per walk.
#[derive(Debug, Clone)]
pub(crate) enum ShiftOperator {
    Ideal {
        q: u32,
    },
    Ratchet {
        forward: [KickBand; 2],
        backward: [KickBand; 2],
        tau: f64,
    },
}

impl ShiftOperator {
    pub(crate) fn new(config: &WalkConfig) -> Result<Self> {
        Ok(match config.shift_mode {
            ShiftMode::Ideal => ShiftOperator::Ideal { q: config.q },
            ShiftMode::Ratchet => {
                let k = config.kick;
                ShiftOperator::Ratchet {
                    forward: [KickBand::new(k.k1)?, KickBand::new(k.k2)?],
                    backward: [KickBand::new(-k.k1)?, KickBand::new(-k.k2)?],
                    tau: k.tau,
                }
            }
        })
    }

    pub(crate) fn apply(&self, state: &mut SpinorState) -> Result<()> {
        match self {
            ShiftOperator::Ideal { q } => ideal_shift(state, *q),
            ShiftOperator::Ratchet { forward, tau, .. } => {
                apply_kick_bands(state, forward)?;
                apply_free_evolution(state, *tau);
                Ok(())
            }
        }
    }

    pub(crate) fn apply_adjoint(&self, state: &mut SpinorState) -> Result<()> {
        match self {
            ShiftOperator::Ideal { q } => ideal_shift_adjoint(state, *q),
            ShiftOperator::Ratchet { backward, tau, .. } => {
                apply_free_evolution(state, -*tau);
                apply_kick_bands(state, backward)
            }
        }
    }
}

/// One step `T M`: the coin, then the shift selected by `config.shift_mode`.
pub fn walk_step(state: &mut SpinorState, coin: CoinParams, config: &WalkConfig) -> Result<()> {
    let shift = ShiftOperator::new(config)?;
    apply_coin(state, coin);
    shift.apply(state)
}

/// Run `config.steps` steps from `initial`, recording distributions only.
pub fn run_walk(config: &WalkConfig, initial: &SpinorState) -> Result<WalkTrajectory> {
    let mut rng = walk_rng(config.seed, 0);
    run_walk_with_rng(config, initial, &mut rng, false)
}

/// As [`run_walk`], additionally keeping the state after every step.
pub fn run_walk_retaining(config: &WalkConfig, initial: &SpinorState) -> Result<WalkTrajectory> {
    let mut rng = walk_rng(config.seed, 0);
    run_walk_with_rng(config, initial, &mut rng, true)
}

/// Run with an explicit RNG; ensembles use one stream per member.
pub fn run_walk_with_rng<R: Rng + ?Sized>(
    config: &WalkConfig,
    initial: &SpinorState,
    rng: &mut R,
    retain_states: bool,
) -> Result<WalkTrajectory> {
    config.validate()?;
    let shift = ShiftOperator::new(config)?;
    let coins = coin_sequence(config, rng);
    let mut trajectory = WalkTrajectory::start(config, initial, retain_states);
    let mut state = initial.clone();
    for (i, coin) in coins.into_iter().enumerate() {
        apply_coin(&mut state, coin);
        shift.apply(&mut state).map_err(|e| e.at_step(i + 1))?;
        trajectory.push(&state);
    }
    Ok(trajectory)
}

/// Walk whose coin pulses favour `|1>` with probability `p_one` per toss.
///
/// Only the pulse area changes: the first toss becomes `M(alpha_b, pi)` and
/// every later one `M(alpha_b, -pi/2)`, with `cos^2(alpha_b / 2) = p_one`.
/// `p_one = 0.5` is the standard walk.
pub fn run_biased_coin_walk(
    config: &WalkConfig,
    initial: &SpinorState,
    p_one: f64,
) -> Result<WalkTrajectory> {
    if !(0.0..=1.0).contains(&p_one) {
        return Err(WalkError::Domain {
            name: "p_one",
            value: p_one,
            domain: "[0, 1]",
        });
    }
    let alpha = CoinParams::biased(p_one).alpha;
    let config = WalkConfig {
        first_coin: CoinParams::new(alpha, PI),
        step_coin: CoinParams::new(alpha, -FRAC_PI_2),
        ..config.clone()
    };
    run_walk(&config, initial)
}

/// Ratchet walk with unequal kick strengths for the two internal states.
pub fn run_biased_ratchet_walk(
    config: &WalkConfig,
    initial: &SpinorState,
    k1: f64,
    k2: f64,
) -> Result<WalkTrajectory> {
    let config = WalkConfig {
        shift_mode: ShiftMode::Ratchet,
        kick: KickParams::new(k1, k2, config.kick.tau)?,
        ..config.clone()
    };
    run_walk(&config, initial)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReversalForm {
    /// One reflection step `T M(pi, -pi/2)`, then `T M(alpha, -chi)` for the
    /// remaining steps and a closing spin rotation. Mirrors the pulse sequence
    /// used in the laboratory, where `T^dagger` is not directly available.
    Composed,
    /// `M^dagger T^dagger` for every forward step, in reverse order.
    DirectConjugate,
}

#[derive(Debug, Clone)]
pub struct ReversalRun {
    /// `2 j + 1` records: the initial state, `j` forward and `j` reverse steps.
    pub trajectory: WalkTrajectory,
    pub forward_coins: Vec<CoinParams>,
    /// For each record, the spin rotation that maps the recorded state onto
    /// the state of the direct-conjugate reversal at the same step. Identity
    /// everywhere for [`ReversalForm::DirectConjugate`].
    pub lab_frame: Vec<SpinRotation>,
    pub final_state: SpinorState,
    /// `|<psi_0|psi_final>|^2`.
    pub fidelity: f64,
}

/// `M(pi, pi/2)`, the inverse of the reflection coin.
fn reflection_inverse() -> SpinRotation {
    CoinParams::new(PI, FRAC_PI_2).matrix()
}

/// Run `j_forward` steps of `config` and then undo them.
pub fn run_reversed_walk(
    config: &WalkConfig,
    initial: &SpinorState,
    j_forward: usize,
    form: ReversalForm,
) -> Result<ReversalRun> {
    let mut rng = walk_rng(config.seed, 0);
    run_reversed_with_rng(config, initial, j_forward, form, &mut rng)
}

pub(crate) fn run_reversed_with_rng<R: Rng + ?Sized>(
    config: &WalkConfig,
    initial: &SpinorState,
    j_forward: usize,
    form: ReversalForm,
    rng: &mut R,
) -> Result<ReversalRun> {
    if j_forward == 0 {
        return Err(WalkError::InvalidConfig(
            "reversal needs at least one forward step".into(),
        ));
    }
    let config = WalkConfig {
        steps: j_forward,
        ..config.clone()
    };
    config.validate()?;
    let shift = ShiftOperator::new(&config)?;
    let coins = coin_sequence(&config, rng);

    let mut trajectory = WalkTrajectory::start(&config, initial, true);
    let mut lab_frame = vec![SpinRotation::identity(); j_forward + 1];
    let mut state = initial.clone();
    for (i, &coin) in coins.iter().enumerate() {
        apply_coin(&mut state, coin);
        shift.apply(&mut state).map_err(|e| e.at_step(i + 1))?;
        trajectory.push(&state);
    }

    let undo_frame = reflection_inverse();
    for r in 1..=j_forward {
        let step = j_forward + r;
        // forward coin being undone at this reverse step
        let undone = coins[j_forward - r];
        match form {
            ReversalForm::Composed => {
                let coin = if r == 1 {
                    CoinParams::reflection()
                } else {
                    coins[j_forward - r + 1].mirrored_adjoint()
                };
                apply_coin(&mut state, coin);
                shift.apply(&mut state).map_err(|e| e.at_step(step))?;
                let frame = undone.adjoint().matrix() * undo_frame;
                if r == j_forward {
                    apply_rotation(&mut state, &frame);
                    lab_frame.push(SpinRotation::identity());
                } else {
                    lab_frame.push(frame);
                }
            }
            ReversalForm::DirectConjugate => {
                shift
                    .apply_adjoint(&mut state)
                    .map_err(|e| e.at_step(step))?;
                apply_coin(&mut state, undone.adjoint());
                lab_frame.push(SpinRotation::identity());
            }
        }
        trajectory.push(&state);
    }

    let fidelity = fidelity(initial, &state)?;
    Ok(ReversalRun {
        trajectory,
        forward_coins: coins,
        lab_frame,
        final_state: state,
        fidelity,
    })
}
