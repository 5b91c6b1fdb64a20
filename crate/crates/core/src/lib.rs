//! Statistically sound discovery of dependency rules and dependency sets in
//! binary data.
//!
//! The crate covers dataset loading and counting ([`data`]), descriptive
//! measures ([`measures`]), exact and asymptotic significance tests
//! ([`exact`]), productivity of rules against their generalizations
//! ([`redundancy`]), dependency-set tests ([`itemsets`]), randomization
//! ([`randomization`]), multiple-testing control ([`multiple`]) and a
//! branch-and-bound rule miner ([`miner`]).

pub mod data;
pub mod error;
pub mod exact;
pub mod itemsets;
pub mod logmath;
pub mod measures;
pub mod miner;
pub mod multiple;
pub mod parallel;
pub mod randomization;
pub mod redundancy;
pub mod rowset;
pub mod table;

pub use data::{parse_rule_spec, AttrId, CellCounts, Dataset, Format, RulePattern};
pub use error::{Error, Result};
pub use exact::{Direction, ExactTests, Sidedness, TestId, TestResult};
pub use rowset::RowSet;
pub use table::{ContingencyTable, Sign};
