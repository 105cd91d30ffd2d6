use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("{name} = {value} is outside the valid domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("{operation} pushed norm {loss:.3e} off the momentum lattice")]
    Truncation { operation: &'static str, loss: f64 },

    #[error("states live on different lattices")]
    LatticeMismatch,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<WalkError>,
    },
}

impl WalkError {
    pub(crate) fn at_step(self, step: usize) -> Self {
        match self {
            e @ WalkError::AtStep { .. } => e,
            e => WalkError::AtStep {
                step,
                source: Box::new(e),
            },
        }
    }

    /// True for failures of the numerics (truncation leakage) as opposed to
    /// malformed inputs.
    pub fn is_numerical(&self) -> bool {
        match self {
            WalkError::Truncation { .. } => true,
            WalkError::AtStep { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    /// Step index attached to the failure, if the error came out of a walk.
    pub fn step(&self) -> Option<usize> {
        match self {
            WalkError::AtStep { step, .. } => Some(*step),
            _ => None,
        }
    }
}
