use crate::error::StructureError;

/// Default query budget for semi-decidable searches.
pub const DEFAULT_FUEL: u64 = 1_000_000;

/// An explicit query budget. Every universe scan step and every relation
/// query made by a search spends one unit; running dry turns a potentially
/// diverging search into a diagnosable `FuelExhausted` error.
#[derive(Debug, Clone)]
pub struct Fuel {
    budget: u64,
    remaining: u64,
}

impl Fuel {
    pub fn new(budget: u64) -> Self {
        Fuel {
            budget,
            remaining: budget,
        }
    }

    /// Spend `n` units on behalf of `context`.
    pub fn spend(&mut self, n: u64, context: &'static str) -> Result<(), StructureError> {
        if self.remaining < n {
            self.remaining = 0;
            return Err(StructureError::FuelExhausted { context });
        }
        self.remaining -= n;
        Ok(())
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    /// Units consumed so far.
    pub fn used(&self) -> u64 {
        self.budget - self.remaining
    }
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel::new(DEFAULT_FUEL)
    }
}
