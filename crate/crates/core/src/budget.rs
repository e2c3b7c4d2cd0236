//! Step accounting for algorithms whose running time is only bounded in
//! expectation or depends on an unknown sparsity parameter.

use crate::{Error, Result};

/// A monotone step counter with a hard ceiling.
#[derive(Clone, Debug)]
pub struct StepBudget {
    limit: u64,
    used: u64,
}

impl StepBudget {
    /// Default ceiling used by the Las Vegas and dovetailing drivers.
    pub const DEFAULT_LIMIT: u64 = 1 << 60;

    pub fn new(limit: u64) -> Self {
        Self { limit, used: 0 }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    pub fn charge(&mut self, steps: u64) -> Result<()> {
        self.used = self.used.saturating_add(steps);
        if self.used > self.limit {
            return Err(Error::BudgetExceeded {
                used: self.used,
                limit: self.limit,
            });
        }
        Ok(())
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.used)
    }
}

impl Default for StepBudget {
    fn default() -> Self {
        Self::new(Self::DEFAULT_LIMIT)
    }
}
