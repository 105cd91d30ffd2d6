//! Coin rotations on the internal two-level system.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::Mul;

use num_complex::Complex64;

use crate::SpinorState;

/// Rotation angle `alpha` and phase `chi` of the microwave coin pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinParams {
    pub alpha: f64,
    pub chi: f64,
}

impl CoinParams {
    pub const fn new(alpha: f64, chi: f64) -> Self {
        Self { alpha, chi }
    }

    /// `M(pi/2, pi)`, the Hadamard-like first toss of the standard walk.
    pub const fn hadamard() -> Self {
        Self::new(FRAC_PI_2, PI)
    }

    /// `M(pi/2, -pi/2)`: takes `|1>` to `(|1> + i|2>)/sqrt(2)`.
    pub const fn balanced() -> Self {
        Self::new(FRAC_PI_2, -FRAC_PI_2)
    }

    /// Coin that takes `|1>` to `sqrt(p)|1> + i sqrt(1-p)|2>`.
    pub fn biased(p_one: f64) -> Self {
        Self::new(2.0 * p_one.sqrt().acos(), -FRAC_PI_2)
    }

    /// `M(pi, -pi/2)`, the spin swap used to realize the conjugate shift.
    pub const fn reflection() -> Self {
        Self::new(PI, -FRAC_PI_2)
    }

    /// Parameters of `M(alpha, chi)^dagger`, which is `M(alpha, chi + pi)`.
    pub fn adjoint(self) -> Self {
        Self::new(self.alpha, self.chi + PI)
    }

    /// Parameters of `sigma_x M^dagger sigma_x`, which is `M(alpha, -chi)`.
    pub fn mirrored_adjoint(self) -> Self {
        Self::new(self.alpha, -self.chi)
    }

    pub fn matrix(self) -> SpinRotation {
        coin_matrix(self)
    }
}

/// General 2x2 complex matrix acting on `(c_{n,1}, c_{n,2})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinRotation(pub [[Complex64; 2]; 2]);

impl SpinRotation {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self([[one, zero], [zero, one]])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn determinant(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Largest entrywise deviation from another matrix.
    pub fn max_deviation(&self, other: &SpinRotation) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for SpinRotation {
    type Output = SpinRotation;

    fn mul(self, rhs: SpinRotation) -> SpinRotation {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        SpinRotation(out)
    }
}

/// `M(alpha, chi) = [[cos(a/2), e^{-i chi} sin(a/2)], [-e^{i chi} sin(a/2), cos(a/2)]]`.
pub fn coin_matrix(params: CoinParams) -> SpinRotation {
    let (s, c) = (params.alpha / 2.0).sin_cos();
    let diag = Complex64::new(c, 0.0);
    SpinRotation([
        [diag, Complex64::from_polar(s, -params.chi)],
        [-Complex64::from_polar(s, params.chi), diag],
    ])
}

/// Apply the coin at every momentum. Exactly norm preserving.
pub fn apply_coin(state: &mut SpinorState, params: CoinParams) {
    apply_rotation(state, &coin_matrix(params));
}

pub fn apply_rotation(state: &mut SpinorState, rotation: &SpinRotation) {
    let (one, two) = state.both_spins_mut();
    for (a, b) in one.iter_mut().zip(two.iter_mut()) {
        let [x, y] = rotation.apply([*a, *b]);
        *a = x;
        *b = y;
    }
}
