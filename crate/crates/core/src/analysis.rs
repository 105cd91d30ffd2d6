//! Observables over states and trajectories.

use std::ops::RangeInclusive;

use crate::{MomentumLattice, Result, Spin, SpinorState, WalkError, WalkTrajectory};

/// Spin-resolved momentum populations `P_s(n) = |c_{n,s}|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumDistribution {
    pub lattice: MomentumLattice,
    pub spin1: Vec<f64>,
    pub spin2: Vec<f64>,
}

impl MomentumDistribution {
    pub fn spin(&self, spin: Spin) -> &[f64] {
        match spin {
            Spin::One => &self.spin1,
            Spin::Two => &self.spin2,
        }
    }

    /// `P(n) = P_1(n) + P_2(n)`.
    pub fn total(&self) -> Vec<f64> {
        self.spin1
            .iter()
            .zip(&self.spin2)
            .map(|(a, b)| a + b)
            .collect()
    }

    pub fn sum(&self) -> f64 {
        self.spin1.iter().chain(&self.spin2).sum()
    }

    pub fn at(&self, n: i64) -> f64 {
        self.lattice
            .index_of(n)
            .map_or(0.0, |i| self.spin1[i] + self.spin2[i])
    }

    fn expectation(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.lattice
            .momenta()
            .zip(self.spin1.iter().zip(&self.spin2))
            .map(|(n, (a, b))| f(n as f64) * (a + b))
            .sum()
    }

    pub fn mean(&self) -> f64 {
        self.expectation(|n| n)
    }

    /// Variance about the mean of this distribution.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.expectation(|n| (n - mean).powi(2)).max(0.0)
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    /// `<(n + beta)^2> / 2`.
    pub fn energy(&self, beta: f64) -> f64 {
        self.expectation(|n| (n + beta).powi(2)) / 2.0
    }
}

pub fn momentum_distribution(state: &SpinorState) -> MomentumDistribution {
    let populations = |spin| {
        state
            .spin_amplitudes(spin)
            .iter()
            .map(|c| c.norm_sqr())
            .collect()
    };
    MomentumDistribution {
        lattice: *state.lattice(),
        spin1: populations(Spin::One),
        spin2: populations(Spin::Two),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentStats {
    pub step: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_dev: f64,
    pub energy: f64,
}

pub fn moments(trajectory: &WalkTrajectory) -> Vec<MomentStats> {
    trajectory
        .records
        .iter()
        .map(|record| {
            let d = &record.distribution;
            let variance = d.variance();
            MomentStats {
                step: record.step,
                mean: d.mean(),
                variance,
                std_dev: variance.sqrt(),
                energy: record.energy,
            }
        })
        .collect()
}

/// `|<a|b>|^2` summed over spin; insensitive to global phases.
pub fn fidelity(a: &SpinorState, b: &SpinorState) -> Result<f64> {
    let overlap = a.inner(b)?.norm_sqr();
    Ok(overlap.clamp(0.0, 1.0))
}

/// Power-law fit `sigma(j) = amplitude * j^exponent`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub exponent: f64,
    pub amplitude: f64,
    /// Sum of squared residuals of the log-log fit.
    pub residual: f64,
    pub steps: RangeInclusive<usize>,
}

/// Least-squares slope of `ln sigma` against `ln j`, where `std_series[j]` is
/// the spread after `j` steps.
pub fn scaling_exponent(std_series: &[f64], steps: RangeInclusive<usize>) -> Result<ScalingFit> {
    let (first, last) = (*steps.start(), *steps.end());
    if first == 0 || last >= std_series.len() || last < first + 3 {
        return Err(WalkError::InvalidConfig(format!(
            "fit range {first}..={last} needs at least 4 steps >= 1 within a series of {}",
            std_series.len()
        )));
    }
    let mut points = Vec::with_capacity(last - first + 1);
    for (j, &sigma) in std_series.iter().enumerate().take(last + 1).skip(first) {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(WalkError::Domain {
                name: "std",
                value: sigma,
                domain: "(0, inf)",
            });
        }
        points.push(((j as f64).ln(), sigma.ln()));
    }
    let count = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / count;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let exponent = sxy / sxx;
    let intercept = mean_y - exponent * mean_x;
    let residual = points
        .iter()
        .map(|p| (p.1 - intercept - exponent * p.0).powi(2))
        .sum();
    Ok(ScalingFit {
        exponent,
        amplitude: intercept.exp(),
        residual,
        steps,
    })
}

/// Sites with population above this fraction of the maximum count as occupied.
pub const SUPPORT_THRESHOLD: f64 = 1e-3;

/// Largest population outside the central third of the occupied support,
/// divided by the largest population inside it. Bimodal ballistic
/// distributions give values above 1, centered unimodal ones below 1.
pub fn peak_center_ratio(p: &[f64]) -> Result<f64> {
    if p.len() < 5 {
        return Err(WalkError::InvalidConfig(format!(
            "peak/center ratio needs at least 5 sites, got {}",
            p.len()
        )));
    }
    let max = p.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return Err(WalkError::InvalidConfig(
            "distribution has empty support".into(),
        ));
    }
    let cutoff = SUPPORT_THRESHOLD * max;
    let lo = p.iter().position(|&v| v >= cutoff).unwrap_or(0);
    let hi = p.iter().rposition(|&v| v >= cutoff).unwrap_or(0);
    let center = (lo + hi) as f64 / 2.0;
    let half_third = (hi - lo) as f64 / 6.0;

    let (mut inner, mut outer) = (0.0f64, 0.0f64);
    for (i, &v) in p.iter().enumerate().take(hi + 1).skip(lo) {
        if (i as f64 - center).abs() <= half_third {
            inner = inner.max(v);
        } else {
            outer = outer.max(v);
        }
    }
    if inner == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(outer / inner)
}
