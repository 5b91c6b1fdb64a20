//! The 2×2 contingency table of a rule `X → A`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether the consequent is `A` or `¬A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Positive,
    Negated,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negated,
            Sign::Negated => Sign::Positive,
        }
    }
}

/// Absolute frequencies `(n, fr(X), fr(A), fr(XA))`; the other three cells
/// are derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub n: u64,
    pub n_x: u64,
    pub n_a: u64,
    pub n_xa: u64,
}

impl ContingencyTable {
    pub fn new(n: u64, n_x: u64, n_a: u64, n_xa: u64) -> Result<Self> {
        if n_x > n || n_a > n {
            return Err(Error::domain(format!(
                "margins ({n_x}, {n_a}) exceed n = {n}"
            )));
        }
        if n_xa > n_x.min(n_a) {
            return Err(Error::domain(format!(
                "fr(XA) = {n_xa} exceeds min(fr(X), fr(A)) = {}",
                n_x.min(n_a)
            )));
        }
        if n_x + n_a - n_xa > n {
            return Err(Error::domain(format!(
                "fr(X) + fr(A) - fr(XA) = {} exceeds n = {n}",
                n_x + n_a - n_xa
            )));
        }
        Ok(ContingencyTable { n, n_x, n_a, n_xa })
    }

    /// Builds a table from its four cells `(XA, X¬A, ¬XA, ¬X¬A)`.
    pub fn from_cells(xa: u64, x_na: u64, nx_a: u64, nx_na: u64) -> Self {
        ContingencyTable {
            n: xa + x_na + nx_a + nx_na,
            n_x: xa + x_na,
            n_a: xa + nx_a,
            n_xa: xa,
        }
    }

    /// fr(X¬A)
    pub fn n_x_not_a(&self) -> u64 {
        self.n_x - self.n_xa
    }

    /// fr(¬XA)
    pub fn n_not_x_a(&self) -> u64 {
        self.n_a - self.n_xa
    }

    /// fr(¬X¬A)
    pub fn n_not_x_not_a(&self) -> u64 {
        self.n + self.n_xa - self.n_x - self.n_a
    }

    /// Cells in the order `(XA, X¬A, ¬XA, ¬X¬A)`.
    pub fn cells(&self) -> [u64; 4] {
        [
            self.n_xa,
            self.n_x_not_a(),
            self.n_not_x_a(),
            self.n_not_x_not_a(),
        ]
    }

    /// Upper index of the positive-direction Fisher tail.
    pub fn j1(&self) -> u64 {
        self.n_x_not_a().min(self.n_not_x_a())
    }

    /// Upper index of the negative-direction Fisher tail.
    pub fn j2(&self) -> u64 {
        self.n_xa.min(self.n_not_x_not_a())
    }

    /// The table of `X → ¬A`.
    pub fn negate_consequent(&self) -> Self {
        ContingencyTable {
            n: self.n,
            n_x: self.n_x,
            n_a: self.n - self.n_a,
            n_xa: self.n_x - self.n_xa,
        }
    }

    /// The table of `¬X → A`.
    pub fn negate_antecedent(&self) -> Self {
        ContingencyTable {
            n: self.n,
            n_x: self.n - self.n_x,
            n_a: self.n_a,
            n_xa: self.n_a - self.n_xa,
        }
    }

    /// The table with the roles of X and A exchanged.
    pub fn transpose(&self) -> Self {
        ContingencyTable {
            n: self.n,
            n_x: self.n_a,
            n_a: self.n_x,
            n_xa: self.n_xa,
        }
    }

    pub fn p_x(&self) -> f64 {
        self.n_x as f64 / self.n as f64
    }

    pub fn p_a(&self) -> f64 {
        self.n_a as f64 / self.n as f64
    }

    pub fn p_xa(&self) -> f64 {
        self.n_xa as f64 / self.n as f64
    }

    /// Leverage `P(XA) − P(X)P(A)`, computed from integer counts to avoid
    /// cancellation.
    pub fn leverage(&self) -> f64 {
        let n = self.n as f64;
        (self.n as f64 * self.n_xa as f64 - self.n_x as f64 * self.n_a as f64) / (n * n)
    }

    /// Lowest feasible fr(XA) for these margins.
    pub fn min_n_xa(&self) -> u64 {
        (self.n_x + self.n_a).saturating_sub(self.n)
    }

    /// Highest feasible fr(XA) for these margins.
    pub fn max_n_xa(&self) -> u64 {
        self.n_x.min(self.n_a)
    }

    /// Same margins, different fr(XA). Caller guarantees feasibility.
    pub fn with_n_xa(&self, n_xa: u64) -> Self {
        debug_assert!(n_xa >= self.min_n_xa() && n_xa <= self.max_n_xa());
        ContingencyTable { n_xa, ..*self }
    }
}
