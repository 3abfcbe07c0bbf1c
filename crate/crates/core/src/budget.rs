//! Node-count budgets for the exhaustive searches.
//!
//! Budgets are counted in search nodes, never wall time, so the same inputs
//! spend the same budget on every run and on every machine. Exhausting a
//! budget is a first-class outcome ([`crate::Error::BudgetExhausted`]), which
//! callers surface as a distinct verdict rather than as success or failure.

use crate::error::{Error, Result};

/// Default node budget for minor searches and climb constructions.
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

#[derive(Debug)]
pub struct Ticker {
    cap: u64,
    used: u64,
}

impl Ticker {
    pub fn new(cap: u64) -> Ticker {
        Ticker { cap, used: 0 }
    }

    /// Spend `n` nodes; errors once the cap is crossed.
    pub fn spend(&mut self, n: u64) -> Result<()> {
        self.used = self.used.saturating_add(n);
        if self.used > self.cap {
            Err(Error::BudgetExhausted { budget: self.cap })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }
}
