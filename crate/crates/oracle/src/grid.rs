//! Split-step propagation on a position grid `theta_i = 2 pi i / M`.
//!
//! Momentum amplitudes map to grid values as
//! `psi_s(theta) = (2 pi)^{-1/2} sum_n c_{n,s} e^{i n theta}`. Kicks and
//! ideal shifts are pointwise phases in `theta`, the coin is a pointwise 2x2
//! matrix, and free evolution is applied after an FFT to momentum space.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use qw_core::protocol::{coin_sequence, walk_rng};
use qw_core::{
    CoinParams, MomentumLattice, ShiftMode, Spin, SpinorState, StepRecord, WalkConfig,
    WalkTrajectory,
};

use crate::{OracleError, Result};

pub const DEFAULT_GRID_POINTS: usize = 1024;

/// Norm allowed outside the target lattice when mapping back to momenta.
const OUT_OF_LATTICE_TOLERANCE: f64 = 1e-10;

pub struct PositionGrid {
    points: usize,
    beta: f64,
    values: [Vec<Complex64>; 2],
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl PositionGrid {
    pub fn from_state(state: &SpinorState, points: usize) -> Result<Self> {
        let lattice = state.lattice();
        if !points.is_power_of_two() || points < 4 * lattice.len() {
            return Err(OracleError::Resolution {
                points,
                needed: lattice.len(),
                detail: "grid size must be a power of two at least 4x the lattice size".into(),
            });
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(points);
        let inverse = planner.plan_fft_inverse(points);
        let scale = 1.0 / (2.0 * PI).sqrt();
        let values = Spin::BOTH.map(|spin| {
            let mut buffer = vec![Complex64::new(0.0, 0.0); points];
            for (n, c) in lattice.momenta().zip(state.spin_amplitudes(spin)) {
                buffer[n.rem_euclid(points as i64) as usize] = *c;
            }
            inverse.process(&mut buffer);
            buffer.iter_mut().for_each(|v| *v *= scale);
            buffer
        });
        Ok(Self {
            points,
            beta: state.beta(),
            values,
            forward,
            inverse,
        })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn theta(&self, i: usize) -> f64 {
        TAU * i as f64 / self.points as f64
    }

    pub fn values(&self, spin: Spin) -> &[Complex64] {
        &self.values[spin.index()]
    }

    /// `sum_i |psi_s(theta_i)|^2 (2 pi / M)` over both spins.
    pub fn norm_sqr(&self) -> f64 {
        let dtheta = TAU / self.points as f64;
        self.values
            .iter()
            .flat_map(|v| v.iter())
            .map(|c| c.norm_sqr() * dtheta)
            .sum()
    }

    fn momentum_coefficients(&self, spin: Spin) -> Vec<Complex64> {
        let mut buffer = self.values[spin.index()].clone();
        self.forward.process(&mut buffer);
        let scale = (2.0 * PI).sqrt() / self.points as f64;
        buffer.iter_mut().for_each(|v| *v *= scale);
        buffer
    }

    fn signed_momentum(&self, k: usize) -> i64 {
        if k < self.points / 2 {
            k as i64
        } else {
            k as i64 - self.points as i64
        }
    }

    pub fn to_state(&self, lattice: MomentumLattice) -> Result<SpinorState> {
        let mut columns = Vec::with_capacity(2);
        let mut outside = 0.0;
        for spin in Spin::BOTH {
            let coefficients = self.momentum_coefficients(spin);
            let mut column = vec![Complex64::new(0.0, 0.0); lattice.len()];
            for (k, c) in coefficients.into_iter().enumerate() {
                match lattice.index_of(self.signed_momentum(k)) {
                    Some(i) => column[i] = c,
                    None => outside += c.norm_sqr(),
                }
            }
            columns.push(column);
        }
        if outside > OUT_OF_LATTICE_TOLERANCE {
            return Err(OracleError::Resolution {
                points: self.points,
                needed: lattice.len(),
                detail: format!("norm {outside:.3e} lies outside the momentum window"),
            });
        }
        let spin2 = columns.pop().expect("two spins");
        let spin1 = columns.pop().expect("two spins");
        Ok(SpinorState::normalized(lattice, spin1, spin2, self.beta)?)
    }

    pub fn apply_coin(&mut self, coin: CoinParams) {
        let (s, c) = (coin.alpha / 2.0).sin_cos();
        let m01 = Complex64::from_polar(s, -coin.chi);
        let m10 = -Complex64::from_polar(s, coin.chi);
        let [one, two] = &mut self.values;
        for (a, b) in one.iter_mut().zip(two.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = x * c + m01 * y;
            *b = m10 * x + y * c;
        }
    }

    /// `psi_s(theta) *= exp(-i k_s cos theta)`.
    pub fn apply_kick(&mut self, k1: f64, k2: f64) {
        let points = self.points;
        for (spin, k) in [(Spin::One, k1), (Spin::Two, k2)] {
            for (i, v) in self.values[spin.index()].iter_mut().enumerate() {
                let theta = TAU * i as f64 / points as f64;
                *v *= Complex64::from_polar(1.0, -k * theta.cos());
            }
        }
    }

    /// `psi_1 *= e^{i q theta}`, `psi_2 *= e^{-i q theta}`.
    pub fn apply_ideal_shift(&mut self, q: i64) {
        let points = self.points;
        for (spin, sign) in [(Spin::One, 1.0), (Spin::Two, -1.0)] {
            for (i, v) in self.values[spin.index()].iter_mut().enumerate() {
                let theta = TAU * i as f64 / points as f64;
                *v *= Complex64::from_polar(1.0, sign * q as f64 * theta);
            }
        }
    }

    pub fn apply_free_evolution(&mut self, tau: f64) {
        let scale = 1.0 / self.points as f64;
        for spin in Spin::BOTH {
            let buffer = &mut self.values[spin.index()];
            self.forward.process(buffer);
            for (k, v) in buffer.iter_mut().enumerate() {
                let p = if k < self.points / 2 {
                    k as f64
                } else {
                    k as f64 - self.points as f64
                } + self.beta;
                *v *= Complex64::from_polar(scale, -tau * p * p / 2.0);
            }
            self.inverse.process(buffer);
        }
    }
}

/// Run the walk described by `config` on a position grid of `points` sites,
/// recording the state mapped back onto the initial lattice after each step.
/// Coin noise is drawn exactly as the core walk draws it.
pub fn propagate_position_grid(
    initial: &SpinorState,
    config: &WalkConfig,
    points: usize,
) -> Result<WalkTrajectory> {
    config.validate()?;
    let lattice = *initial.lattice();
    let mut grid = PositionGrid::from_state(initial, points)?;
    let mut rng = walk_rng(config.seed, 0);
    let coins = coin_sequence(config, &mut rng);

    let mut records = vec![StepRecord::from_state(0, initial)];
    let mut states = vec![initial.clone()];
    for (i, coin) in coins.into_iter().enumerate() {
        grid.apply_coin(coin);
        match config.shift_mode {
            ShiftMode::Ideal => grid.apply_ideal_shift(i64::from(config.q)),
            ShiftMode::Ratchet => {
                grid.apply_kick(config.kick.k1, config.kick.k2);
                grid.apply_free_evolution(config.kick.tau);
            }
        }
        let state = grid.to_state(lattice)?;
        records.push(StepRecord::from_state(i + 1, &state));
        states.push(state);
    }
    Ok(WalkTrajectory {
        config: config.clone(),
        lattice,
        records,
        states: Some(states),
    })
}
