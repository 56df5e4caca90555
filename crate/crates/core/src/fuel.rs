//! Step budgets for semidecision procedures.
//!
//! Every loop that consults an oracle charges its work here: one unit per
//! oracle query and one per vertex touched. Exhaustion is reported as
//! [`Error::FuelExhausted`], never as a verdict.

use crate::error::{Error, Result};

/// Default budget for a single top-level operation.
pub const DEFAULT_FUEL: u64 = 10_000_000;

#[derive(Debug, Clone)]
pub struct Fuel {
    limit: u64,
    spent: u64,
}

impl Fuel {
    pub fn new(limit: u64) -> Self {
        Fuel { limit, spent: 0 }
    }

    pub fn unlimited() -> Self {
        Fuel::new(u64::MAX)
    }

    pub fn spend(&mut self, units: u64) -> Result<()> {
        self.spent = self.spent.saturating_add(units);
        if self.spent > self.limit {
            Err(Error::FuelExhausted { spent: self.spent })
        } else {
            Ok(())
        }
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.spent)
    }
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel::new(DEFAULT_FUEL)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustion_is_an_error() {
        let mut fuel = Fuel::new(3);
        fuel.spend(2).unwrap();
        fuel.spend(1).unwrap();
        assert_eq!(fuel.spend(1), Err(Error::FuelExhausted { spent: 4 }));
    }
}
