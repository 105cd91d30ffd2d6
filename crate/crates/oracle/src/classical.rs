use crate::{OracleError, Result};
use qw_core::MomentumLattice;

/// `steps` independent moves of `+q` (probability `p_right`) or `-q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalWalkSpec {
    pub steps: usize,
    pub p_right: f64,
    pub q: u32,
    /// Starting momentum.
    pub origin: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalDistribution {
    pub momenta: Vec<i64>,
    pub probabilities: Vec<f64>,
}

impl ClassicalDistribution {
    pub fn mean(&self) -> f64 {
        self.momenta
            .iter()
            .zip(&self.probabilities)
            .map(|(&n, p)| n as f64 * p)
            .sum()
    }

    pub fn std_dev(&self) -> f64 {
        let mean = self.mean();
        self.momenta
            .iter()
            .zip(&self.probabilities)
            .map(|(&n, p)| (n as f64 - mean).powi(2) * p)
            .sum::<f64>()
            .sqrt()
    }

    /// Probabilities laid out on `lattice`; mass outside it is dropped.
    pub fn on_lattice(&self, lattice: &MomentumLattice) -> Vec<f64> {
        let mut out = vec![0.0; lattice.len()];
        for (&n, &p) in self.momenta.iter().zip(&self.probabilities) {
            if let Some(i) = lattice.index_of(n) {
                out[i] += p;
            }
        }
        out
    }
}

/// Exact binomial distribution of the endpoint.
pub fn classical_walk_distribution(spec: &ClassicalWalkSpec) -> Result<ClassicalDistribution> {
    if !(0.0..=1.0).contains(&spec.p_right) {
        return Err(OracleError::Domain {
            name: "p_right",
            value: spec.p_right,
            domain: "[0, 1]",
        });
    }
    let j = spec.steps;
    let q = i64::from(spec.q);
    let mut momenta = Vec::with_capacity(j + 1);
    let mut probabilities = Vec::with_capacity(j + 1);
    // C(j, r) built incrementally in floating point; exact for j <= 60
    let mut binomial = 1.0f64;
    for r in 0..=j {
        if r > 0 {
            binomial = binomial * (j - r + 1) as f64 / r as f64;
        }
        momenta.push(spec.origin + q * (2 * r as i64 - j as i64));
        probabilities.push(
            binomial * spec.p_right.powi(r as i32) * (1.0 - spec.p_right).powi((j - r) as i32),
        );
    }
    Ok(ClassicalDistribution {
        momenta,
        probabilities,
    })
}
