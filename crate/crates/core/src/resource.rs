//! Search budgets. Long-running enumerations charge work units against a
//! [`Budget`] and abort with `Exhausted` when the cap is hit. The cap comes
//! from the `IK_RESOURCE_LIMIT` environment variable when set.

use std::cell::Cell;

use thiserror::Error;

pub const DEFAULT_LIMIT: u64 = 200_000_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("resource bound exceeded after {spent} work units (limit {limit})")]
pub struct Exhausted {
    pub spent: u64,
    pub limit: u64,
}

#[derive(Debug)]
pub struct Budget {
    limit: u64,
    spent: Cell<u64>,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, spent: Cell::new(0) }
    }

    /// Budget from `IK_RESOURCE_LIMIT`, falling back to the default cap.
    pub fn from_env() -> Self {
        let limit = std::env::var("IK_RESOURCE_LIMIT")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(DEFAULT_LIMIT);
        Budget::new(limit)
    }

    pub fn charge(&self, units: u64) -> Result<(), Exhausted> {
        let spent = self.spent.get().saturating_add(units);
        self.spent.set(spent);
        if spent > self.limit {
            Err(Exhausted { spent, limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn spent(&self) -> u64 {
        self.spent.get()
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_LIMIT)
    }
}
