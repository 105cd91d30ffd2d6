#![allow(dead_code)]

use num_complex::Complex64;
use qw_core::{MomentumLattice, SpinorState};
use rand::Rng;

/// Normalized state with random complex amplitudes on momenta `|n| <= support`
/// and zeros elsewhere.
pub fn random_state<R: Rng>(
    rng: &mut R,
    lattice: MomentumLattice,
    support: i64,
    beta: f64,
) -> SpinorState {
    let mut column = || -> Vec<Complex64> {
        lattice
            .momenta()
            .map(|n| {
                if n.abs() <= support {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect()
    };
    let spin1 = column();
    let spin2 = column();
    SpinorState::normalized(lattice, spin1, spin2, beta).unwrap()
}

/// Largest per-step state distance between two trajectories that retained states.
pub fn max_step_distance(a: &qw_core::WalkTrajectory, b: &qw_core::WalkTrajectory) -> f64 {
    let (sa, sb) = (a.states.as_ref().unwrap(), b.states.as_ref().unwrap());
    assert_eq!(sa.len(), sb.len());
    sa.iter()
        .zip(sb)
        .map(|(x, y)| x.distance(y).unwrap())
        .fold(0.0, f64::max)
}
