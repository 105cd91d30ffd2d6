//! Kicked-rotor pulses and free evolution in the momentum basis.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::bessel::bessel_j_orders;
use crate::{Result, Spin, SpinorState, WalkError};

/// Pulse period at the primary quantum resonance, where free evolution is the
/// identity on integer momenta.
pub const RESONANT_PERIOD: f64 = 4.0 * PI;

/// Largest norm a kick may push off the lattice before it is reported.
pub const KICK_LEAKAGE_TOLERANCE: f64 = 1e-10;

/// Signed kick strengths for the two internal states and the pulse period.
///
/// The sign of `k` follows the sign of the detuning; with the default phase of
/// the ratchet state a negative strength drives momentum upward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KickParams {
    pub k1: f64,
    pub k2: f64,
    pub tau: f64,
}

impl KickParams {
    pub fn new(k1: f64, k2: f64, tau: f64) -> Result<Self> {
        let params = Self { k1, k2, tau };
        params.validate()?;
        Ok(params)
    }

    /// `k1 = -|k|`, `k2 = +|k|` at resonance: spin 1 ratchets up, spin 2 down.
    pub fn counter_propagating(k: f64) -> Self {
        Self {
            k1: -k.abs(),
            k2: k.abs(),
            tau: RESONANT_PERIOD,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, k) in [("k1", self.k1), ("k2", self.k2)] {
            if !k.is_finite() {
                return Err(WalkError::Domain {
                    name,
                    value: k,
                    domain: "finite",
                });
            }
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(WalkError::Domain {
                name: "tau",
                value: self.tau,
                domain: "(0, inf)",
            });
        }
        Ok(())
    }

    pub fn strength(&self, spin: Spin) -> f64 {
        match spin {
            Spin::One => self.k1,
            Spin::Two => self.k2,
        }
    }

    pub fn max_strength(&self) -> f64 {
        self.k1.abs().max(self.k2.abs())
    }

    /// Kick strengths of `K^dagger`.
    pub fn reversed(&self) -> Self {
        Self {
            k1: -self.k1,
            k2: -self.k2,
            tau: self.tau,
        }
    }
}

/// Rabi frequency, pulse length and detuning in consistent dimensionless units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalKickInputs {
    pub rabi_frequency: f64,
    pub pulse_length: f64,
    pub detuning: f64,
}

/// `k = Omega^2 tau_p / Delta`; carries the sign of the detuning.
pub fn kick_strength_from_physical(inputs: &PhysicalKickInputs) -> Result<f64> {
    if inputs.detuning == 0.0 || !inputs.detuning.is_finite() {
        return Err(WalkError::Domain {
            name: "detuning",
            value: inputs.detuning,
            domain: "finite and nonzero",
        });
    }
    Ok(inputs.rabi_frequency.powi(2) * inputs.pulse_length / inputs.detuning)
}

/// Banded momentum-space representation of `exp(-i k cos(theta))`:
/// `c'_n = sum_m (-i)^m J_m(k) c_{n+m}` for `|m| <= half_width`.
#[derive(Debug, Clone, PartialEq)]
pub struct KickBand {
    strength: f64,
    half_width: usize,
    // coefficient for offset m stored at index m + half_width
    coefficients: Vec<Complex64>,
}

impl KickBand {
    pub fn new(strength: f64) -> Result<Self> {
        let half_width = 25usize.max((3.0 * strength.abs()).ceil() as usize);
        let bessel = bessel_j_orders(half_width, strength)?;
        let minus_i_pow = |m: i64| match m.rem_euclid(4) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        };
        let w = half_width as i64;
        let coefficients = (-w..=w)
            .map(|m| {
                let order = m.unsigned_abs() as usize;
                let sign = if m < 0 && order % 2 == 1 { -1.0 } else { 1.0 };
                minus_i_pow(m) * (sign * bessel[order])
            })
            .collect();
        Ok(Self {
            strength,
            half_width,
            coefficients,
        })
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// Coefficient `(-i)^m J_m(k)`, zero outside the band.
    pub fn coefficient(&self, m: i64) -> Complex64 {
        let w = self.half_width as i64;
        if m.abs() > w {
            Complex64::new(0.0, 0.0)
        } else {
            self.coefficients[(m + w) as usize]
        }
    }

    /// Convolve one spin column in place. Contributions from outside the
    /// lattice are zero; returns the norm lost over the lattice edges.
    pub fn apply(&self, column: &mut [Complex64]) -> f64 {
        if self.strength == 0.0 {
            return 0.0;
        }
        let before: f64 = column.iter().map(Complex64::norm_sqr).sum();
        let len = column.len() as i64;
        let w = self.half_width as i64;
        let input = column.to_vec();
        for (i, out) in column.iter_mut().enumerate() {
            let i = i as i64;
            let lo = (-w).max(-i);
            let hi = w.min(len - 1 - i);
            let mut acc = Complex64::new(0.0, 0.0);
            for m in lo..=hi {
                acc += self.coefficients[(m + w) as usize] * input[(i + m) as usize];
            }
            *out = acc;
        }
        let after: f64 = column.iter().map(Complex64::norm_sqr).sum();
        (before - after).max(0.0)
    }
}

/// One kick pulse with strength `k1` on spin 1 and `k2` on spin 2.
pub fn apply_kick(state: &mut SpinorState, params: &KickParams) -> Result<()> {
    let bands = [KickBand::new(params.k1)?, KickBand::new(params.k2)?];
    apply_kick_bands(state, &bands)
}

pub(crate) fn apply_kick_bands(state: &mut SpinorState, bands: &[KickBand; 2]) -> Result<()> {
    let mut loss = 0.0;
    for spin in Spin::BOTH {
        loss += bands[spin.index()].apply(state.spin_amplitudes_mut(spin));
    }
    if loss > KICK_LEAKAGE_TOLERANCE {
        return Err(WalkError::Truncation {
            operation: "kick",
            loss,
        });
    }
    Ok(())
}

/// Free evolution over period `tau`: `c_{n,s} *= exp(-i tau (n + beta)^2 / 2)`.
pub fn apply_free_evolution(state: &mut SpinorState, tau: f64) {
    if tau == 0.0 {
        return;
    }
    let lattice = *state.lattice();
    let beta = state.beta();
    // phase = 2 pi * (n + beta)^2 * tau / (4 pi); reduce the cycle count first
    // so resonant phases stay exact for large n
    let cycles_per_unit = tau / RESONANT_PERIOD;
    let phases: Vec<Complex64> = lattice
        .momenta()
        .map(|n| {
            let p = n as f64 + beta;
            let cycles = (p * p * cycles_per_unit).fract();
            Complex64::from_polar(1.0, -TAU * cycles)
        })
        .collect();
    for spin in Spin::BOTH {
        for (c, phase) in state.spin_amplitudes_mut(spin).iter_mut().zip(&phases) {
            *c *= phase;
        }
    }
}
