//! Ideal spin-dependent translation `exp(i q theta)|1><1| + exp(-i q theta)|2><2|`.

use num_complex::Complex64;

use crate::{Result, Spin, SpinorState, WalkError};

/// Amplitudes below this magnitude count as empty lattice slots.
pub const EMPTY_SLOT: f64 = 1e-14;

/// Spin 1 moves up by `q` sites, spin 2 down by `q`.
pub fn ideal_shift(state: &mut SpinorState, q: u32) -> Result<()> {
    shift_by(state, i64::from(q))
}

/// Inverse of [`ideal_shift`]: spin 1 down by `q`, spin 2 up by `q`.
pub fn ideal_shift_adjoint(state: &mut SpinorState, q: u32) -> Result<()> {
    shift_by(state, -i64::from(q))
}

fn shift_by(state: &mut SpinorState, q: i64) -> Result<()> {
    let len = state.lattice().len();
    if q.unsigned_abs() as usize >= len {
        return Err(WalkError::InvalidLattice(format!(
            "shift of {q} sites exceeds lattice of {len} sites"
        )));
    }
    let lost: f64 = [(Spin::One, q), (Spin::Two, -q)]
        .into_iter()
        .map(|(spin, offset)| departing_norm(state.spin_amplitudes(spin), offset))
        .sum();
    let occupied = [(Spin::One, q), (Spin::Two, -q)]
        .into_iter()
        .any(|(spin, offset)| {
            departing(state.spin_amplitudes(spin), offset).any(|c| c.norm() >= EMPTY_SLOT)
        });
    if occupied {
        return Err(WalkError::Truncation {
            operation: "ideal shift",
            loss: lost,
        });
    }
    translate(state.spin_amplitudes_mut(Spin::One), q);
    translate(state.spin_amplitudes_mut(Spin::Two), -q);
    Ok(())
}

/// Slots that would leave the lattice under a translation by `offset`.
fn departing(column: &[Complex64], offset: i64) -> impl Iterator<Item = &Complex64> {
    let k = (offset.unsigned_abs() as usize).min(column.len());
    let range = if offset >= 0 {
        column.len() - k..column.len()
    } else {
        0..k
    };
    column[range].iter()
}

fn departing_norm(column: &[Complex64], offset: i64) -> f64 {
    departing(column, offset).map(Complex64::norm_sqr).sum()
}

fn translate(column: &mut [Complex64], offset: i64) {
    let k = offset.unsigned_abs() as usize;
    let zero = Complex64::new(0.0, 0.0);
    if offset > 0 {
        column.rotate_right(k);
        column[..k].fill(zero);
    } else if offset < 0 {
        column.rotate_left(k);
        let len = column.len();
        column[len - k..].fill(zero);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::MomentumLattice;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn translates_single_component() {
        let lattice = MomentumLattice::symmetric(3).unwrap();
        let mut state = SpinorState::basis(lattice, 0, Spin::One).unwrap();
        ideal_shift(&mut state, 1).unwrap();
        assert_eq!(state, SpinorState::basis(lattice, 1, Spin::One).unwrap());
    }

    #[test]
    fn spins_move_in_opposite_directions() {
        let lattice = MomentumLattice::symmetric(3).unwrap();
        let mut spin1 = vec![Complex64::new(0.0, 0.0); lattice.len()];
        let mut spin2 = spin1.clone();
        let origin = lattice.index_of(0).unwrap();
        spin1[origin] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        spin2[origin] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let mut state = SpinorState::from_amplitudes(lattice, spin1, spin2, 0.0).unwrap();
        ideal_shift(&mut state, 1).unwrap();
        assert!((state.amplitude(1, Spin::One).re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((state.amplitude(-1, Spin::Two).re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((state.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn adjoint_undoes_shift_exactly() {
        let lattice = MomentumLattice::symmetric(6).unwrap();
        let original = crate::initial_ratchet_state(lattice, 0.8, Spin::Two).unwrap();
        let mut state = original.clone();
        ideal_shift(&mut state, 2).unwrap();
        ideal_shift_adjoint(&mut state, 2).unwrap();
        assert_eq!(state, original);
    }

    #[test]
    fn refuses_to_push_amplitude_off_the_edge() {
        let lattice = MomentumLattice::new(-2, 2).unwrap();
        let mut state = SpinorState::basis(lattice, 2, Spin::One).unwrap();
        let err = ideal_shift(&mut state, 1).unwrap_err();
        assert!(matches!(err, WalkError::Truncation { loss, .. } if (loss - 1.0).abs() < 1e-15));
        // spin 2 at the top edge moves down and is fine
        let mut state = SpinorState::basis(lattice, 2, Spin::Two).unwrap();
        ideal_shift(&mut state, 1).unwrap();
        assert_eq!(state.amplitude(1, Spin::Two), Complex64::new(1.0, 0.0));
    }
}
