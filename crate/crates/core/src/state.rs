//! Spinor wavefunction on the momentum lattice.

use num_complex::Complex64;

use crate::{MomentumLattice, Result, WalkError};

/// Tolerance on `sum |c|^2 = 1` when a state is built from raw amplitudes.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Internal hyperfine state: `|1>` is `F=1, m_F=0`, `|2>` is `F=2, m_F=0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    One,
    Two,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::One, Spin::Two];

    pub fn index(self) -> usize {
        match self {
            Spin::One => 0,
            Spin::Two => 1,
        }
    }

    pub fn flipped(self) -> Spin {
        match self {
            Spin::One => Spin::Two,
            Spin::Two => Spin::One,
        }
    }
}

/// Map any real quasimomentum onto `[0, 1)`.
pub fn fold_beta(beta: f64) -> f64 {
    let folded = beta.rem_euclid(1.0);
    if folded >= 1.0 {
        0.0
    } else {
        folded
    }
}

/// Amplitudes `c_{n,s}` for every lattice momentum `n` and spin `s`, plus the
/// conserved quasimomentum `beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorState {
    lattice: MomentumLattice,
    beta: f64,
    amplitudes: [Vec<Complex64>; 2],
}

impl SpinorState {
    /// Build a state from per-spin amplitude vectors; they must already be
    /// normalized.
    pub fn from_amplitudes(
        lattice: MomentumLattice,
        spin1: Vec<Complex64>,
        spin2: Vec<Complex64>,
        beta: f64,
    ) -> Result<Self> {
        let state = Self::from_amplitudes_unchecked(lattice, spin1, spin2, beta)?;
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(WalkError::Domain {
                name: "norm",
                value: norm,
                domain: "1 +/- 1e-12",
            });
        }
        Ok(state)
    }

    /// Build a state and rescale it to unit norm.
    pub fn normalized(
        lattice: MomentumLattice,
        spin1: Vec<Complex64>,
        spin2: Vec<Complex64>,
        beta: f64,
    ) -> Result<Self> {
        let mut state = Self::from_amplitudes_unchecked(lattice, spin1, spin2, beta)?;
        let norm = state.norm_sqr().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(WalkError::Domain {
                name: "norm",
                value: norm,
                domain: "finite and nonzero",
            });
        }
        for amps in &mut state.amplitudes {
            amps.iter_mut().for_each(|c| *c /= norm);
        }
        Ok(state)
    }

    fn from_amplitudes_unchecked(
        lattice: MomentumLattice,
        spin1: Vec<Complex64>,
        spin2: Vec<Complex64>,
        beta: f64,
    ) -> Result<Self> {
        if spin1.len() != lattice.len() || spin2.len() != lattice.len() {
            return Err(WalkError::InvalidLattice(format!(
                "expected {} amplitudes per spin, got {} and {}",
                lattice.len(),
                spin1.len(),
                spin2.len()
            )));
        }
        check_beta(beta)?;
        Ok(Self {
            lattice,
            beta,
            amplitudes: [spin1, spin2],
        })
    }

    /// Momentum eigenstate `|s> (x) |n>` with `beta = 0`.
    pub fn basis(lattice: MomentumLattice, n: i64, spin: Spin) -> Result<Self> {
        let index = lattice.index_of(n).ok_or_else(|| {
            WalkError::InvalidLattice(format!("momentum {n} is not on the lattice"))
        })?;
        let mut state = Self::zeros(lattice);
        state.amplitudes[spin.index()][index] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    pub(crate) fn zeros(lattice: MomentumLattice) -> Self {
        let zero = vec![Complex64::new(0.0, 0.0); lattice.len()];
        Self {
            lattice,
            beta: 0.0,
            amplitudes: [zero.clone(), zero],
        }
    }

    pub fn with_beta(mut self, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        self.beta = beta;
        Ok(self)
    }

    pub fn lattice(&self) -> &MomentumLattice {
        &self.lattice
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Quasimomentum as the representative in `[-1/2, 1/2)`, i.e. the physical
    /// offset from the nearest integer momentum.
    pub fn centered_beta(&self) -> f64 {
        if self.beta >= 0.5 {
            self.beta - 1.0
        } else {
            self.beta
        }
    }

    pub fn amplitude(&self, n: i64, spin: Spin) -> Complex64 {
        self.lattice
            .index_of(n)
            .map_or(Complex64::new(0.0, 0.0), |i| {
                self.amplitudes[spin.index()][i]
            })
    }

    pub fn spin_amplitudes(&self, spin: Spin) -> &[Complex64] {
        &self.amplitudes[spin.index()]
    }

    pub fn spin_amplitudes_mut(&mut self, spin: Spin) -> &mut [Complex64] {
        &mut self.amplitudes[spin.index()]
    }

    pub(crate) fn both_spins_mut(&mut self) -> (&mut [Complex64], &mut [Complex64]) {
        let [a, b] = &mut self.amplitudes;
        (a, b)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes
            .iter()
            .flat_map(|amps| amps.iter())
            .map(Complex64::norm_sqr)
            .sum()
    }

    /// `<self|other>`, summed over momentum and spin.
    pub fn inner(&self, other: &SpinorState) -> Result<Complex64> {
        if self.lattice != other.lattice {
            return Err(WalkError::LatticeMismatch);
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .flat_map(|(a, b)| a.iter().zip(b))
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Euclidean distance between amplitude vectors (phase sensitive).
    pub fn distance(&self, other: &SpinorState) -> Result<f64> {
        if self.lattice != other.lattice {
            return Err(WalkError::LatticeMismatch);
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .flat_map(|(a, b)| a.iter().zip(b))
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if (0.0..1.0).contains(&beta) {
        Ok(())
    } else {
        Err(WalkError::Domain {
            name: "beta",
            value: beta,
            domain: "[0, 1)",
        })
    }
}

/// Bragg-prepared superposition `(|0> + e^{i phi}|1>)/sqrt(2)` in one internal
/// state, with zero quasimomentum.
pub fn initial_ratchet_state(
    lattice: MomentumLattice,
    phi: f64,
    spin: Spin,
) -> Result<SpinorState> {
    let (Some(i0), Some(i1)) = (lattice.index_of(0), lattice.index_of(1)) else {
        return Err(WalkError::InvalidLattice(
            "ratchet state needs momenta 0 and 1 on the lattice".into(),
        ));
    };
    let mut state = SpinorState::zeros(lattice);
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    let column = &mut state.amplitudes[spin.index()];
    column[i0] = Complex64::new(amp, 0.0);
    column[i1] = Complex64::from_polar(amp, phi);
    Ok(state)
}
