//! Truncated momentum lattice `{n_min, ..., n_max}` in two-photon-recoil units.

use crate::{Result, WalkError};

/// Extra sites kept beyond the reach of the walk so that Bessel tails of the
/// kick operator stay far from the edges.
pub const DEFAULT_MARGIN: i64 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MomentumLattice {
    n_min: i64,
    n_max: i64,
}

impl MomentumLattice {
    pub fn new(n_min: i64, n_max: i64) -> Result<Self> {
        if n_min > 0 || n_max < 0 {
            return Err(WalkError::InvalidLattice(format!(
                "window [{n_min}, {n_max}] must contain n = 0"
            )));
        }
        if n_max - n_min + 1 < 3 {
            return Err(WalkError::InvalidLattice(format!(
                "window [{n_min}, {n_max}] has fewer than 3 sites"
            )));
        }
        Ok(Self { n_min, n_max })
    }

    /// Lattice `[-half, half + 1]`, which also holds the `n = 1` component of
    /// the ratchet initial state.
    pub fn symmetric(half: i64) -> Result<Self> {
        Self::new(-half, half + 1)
    }

    /// Window large enough for `steps` walk steps with step length `q` and
    /// kick strengths up to `k_max`: each step moves the support by at most
    /// `max(q, ceil(k_max))` sites, plus [`DEFAULT_MARGIN`] on either side.
    pub fn for_walk(steps: usize, q: u32, k_max: f64) -> Result<Self> {
        let reach = i64::from(q).max(k_max.abs().ceil() as i64).max(1);
        Self::symmetric(steps as i64 * reach + DEFAULT_MARGIN)
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn len(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, n: i64) -> bool {
        (self.n_min..=self.n_max).contains(&n)
    }

    pub fn index_of(&self, n: i64) -> Option<usize> {
        self.contains(n).then(|| (n - self.n_min) as usize)
    }

    pub fn momentum(&self, index: usize) -> i64 {
        debug_assert!(index < self.len());
        self.n_min + index as i64
    }

    pub fn momenta(&self) -> impl Iterator<Item = i64> + Clone {
        self.n_min..=self.n_max
    }
}
