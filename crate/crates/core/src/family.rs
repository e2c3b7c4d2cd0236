//! Set families over a universe of at most 64 elements, stored as bitmasks.

use crate::{Error, Result};

/// Largest supported universe.
pub const MAX_UNIVERSE: usize = 64;

/// A list of subsets of `{0, …, universe-1}`; duplicates are kept.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetFamily {
    universe: usize,
    sets: Vec<u64>,
}

impl SetFamily {
    pub fn new(universe: usize, sets: Vec<u64>) -> Result<Self> {
        if universe > MAX_UNIVERSE {
            return Err(Error::TooLarge(format!(
                "universe of size {universe} exceeds {MAX_UNIVERSE}"
            )));
        }
        let full = full_mask(universe);
        if let Some(bad) = sets.iter().position(|&s| s & !full != 0) {
            return Err(Error::InvalidArgument(format!(
                "set {bad} has elements outside a universe of size {universe}"
            )));
        }
        Ok(Self { universe, sets })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn universe_mask(&self) -> u64 {
        full_mask(self.universe)
    }

    pub fn sets(&self) -> &[u64] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Mask with the lowest `n` bits set.
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}
