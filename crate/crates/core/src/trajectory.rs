use crate::analysis::{momentum_distribution, MomentumDistribution};
use crate::{MomentumLattice, SpinorState, WalkConfig};

/// Observables recorded after one walk step (step 0 is the initial state).
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub distribution: MomentumDistribution,
    /// Mean kinetic energy `<(n + beta)^2>/2`, kept per record because
    /// ensemble members carry different quasimomenta.
    pub energy: f64,
}

impl StepRecord {
    pub fn from_state(step: usize, state: &SpinorState) -> Self {
        let distribution = momentum_distribution(state);
        let energy = distribution.energy(state.centered_beta());
        Self {
            step,
            distribution,
            energy,
        }
    }
}

/// Per-step distributions of a walk, optionally with the full states.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkTrajectory {
    pub config: WalkConfig,
    pub lattice: MomentumLattice,
    pub records: Vec<StepRecord>,
    pub states: Option<Vec<SpinorState>>,
}

impl WalkTrajectory {
    pub(crate) fn start(config: &WalkConfig, initial: &SpinorState, retain_states: bool) -> Self {
        Self {
            config: config.clone(),
            lattice: *initial.lattice(),
            records: vec![StepRecord::from_state(0, initial)],
            states: retain_states.then(|| vec![initial.clone()]),
        }
    }

    pub(crate) fn push(&mut self, state: &SpinorState) {
        let step = self.records.len();
        self.records.push(StepRecord::from_state(step, state));
        if let Some(states) = &mut self.states {
            states.push(state.clone());
        }
    }

    /// Number of completed steps (records minus the initial one).
    pub fn steps(&self) -> usize {
        self.records.len() - 1
    }

    pub fn distribution(&self, step: usize) -> &MomentumDistribution {
        &self.records[step].distribution
    }

    pub fn final_record(&self) -> &StepRecord {
        self.records
            .last()
            .expect("trajectory always holds the initial record")
    }

    pub fn final_state(&self) -> Option<&SpinorState> {
        self.states.as_ref().and_then(|s| s.last())
    }
}
