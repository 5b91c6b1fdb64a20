//! Tests for dependency sets: mutual-dependence statistics, productivity
//! across bipartitions, redundancy and independent productivity.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{AttrId, CellCounts, Dataset};
use crate::error::{Error, Result};
use crate::exact::{Direction, ExactTests, TestId, TestResult};
use crate::logmath::{clamp_ln_p, ln_chi2_1_sf, xlny, LogSumExp};
use crate::rowset::RowSet;
use crate::table::ContingencyTable;

/// An attribute set with its full cell table.
/// Two disjoint attribute sets, e.g. the parts of a bipartition.
pub type Split = (Vec<AttrId>, Vec<AttrId>);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetPattern {
    pub items: Vec<AttrId>,
    pub freq: u64,
    pub cells: CellCounts,
    pub verdicts: BTreeMap<String, f64>,
}

impl SetPattern {
    pub fn new(d: &Dataset, x: &[AttrId], max_attrs: usize) -> Result<Self> {
        let mut items = x.to_vec();
        items.sort_unstable();
        items.dedup();
        let cells = d.extract_cells(&items, max_attrs)?;
        Ok(SetPattern {
            freq: cells.freq(),
            items,
            cells,
            verdicts: BTreeMap::new(),
        })
    }

    pub fn n(&self) -> u64 {
        self.cells.total()
    }

    /// `fr(A_i)` for each item, read off the cell table.
    pub fn singleton_freqs(&self) -> Vec<u64> {
        (0..self.items.len())
            .map(|i| {
                self.cells
                    .counts
                    .iter()
                    .enumerate()
                    .filter(|(mask, _)| mask >> i & 1 == 1)
                    .map(|(_, &c)| c)
                    .sum()
            })
            .collect()
    }
}

/// χ² of the observed cells against the product of singleton margins,
/// referred to χ² with one degree of freedom.
pub fn itemset_chi2(s: &SetPattern) -> Result<TestResult> {
    let n = s.n();
    let freqs = s.singleton_freqs();
    if freqs.iter().any(|&f| f == 0 || f == n) {
        return Err(Error::domain("itemset χ² needs every singleton margin in (0, n)"));
    }
    let nf = n as f64;
    let probs: Vec<f64> = freqs.iter().map(|&f| f as f64 / nf).collect();
    let stat: f64 = s
        .cells
        .counts
        .iter()
        .enumerate()
        .map(|(mask, &obs)| {
            let p: f64 = probs
                .iter()
                .enumerate()
                .map(|(i, &p)| if mask >> i & 1 == 1 { p } else { 1.0 - p })
                .product();
            let expected = nf * p;
            let diff = obs as f64 - expected;
            diff * diff / expected
        })
        .sum();
    Ok(TestResult {
        test: TestId::Chi2Test,
        p_value: Some(clamp_ln_p(ln_chi2_1_sf(stat)).exp()),
        log_p: Some(clamp_ln_p(ln_chi2_1_sf(stat))),
        statistic: Some(stat),
    })
}

/// Binomial tail of `fr(X)` under `Bin(n, ∏ P(A_i))`.
pub fn itemset_binom_p(ex: &ExactTests, s: &SetPattern) -> TestResult {
    let n = s.n();
    let lf = ex.ln_factorial();
    let nf = n as f64;
    let ln_p: f64 = s.singleton_freqs().iter().map(|&f| (f as f64 / nf).ln()).sum();
    let ln_q = (-ln_p.exp()).ln_1p();
    let ln_tail = if s.freq == 0 {
        0.0
    } else {
        (s.freq..=n)
            .map(|j| lf.ln_choose(n, j) + xlny(j, ln_p) + xlny(n - j, ln_q))
            .collect::<LogSumExp>()
            .value()
    };
    let ln_tail = clamp_ln_p(ln_tail);
    TestResult {
        test: TestId::BinomComplete,
        p_value: Some(ln_tail.exp()),
        log_p: Some(ln_tail),
        statistic: None,
    }
}

/// Outcome of testing every bipartition of a set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BipartitionReport {
    pub productive: bool,
    /// Largest Fisher p over all bipartitions.
    pub worst_p: f64,
    /// The bipartition attaining `worst_p`.
    pub worst_split: Split,
}

/// All `2^(m−1) − 1` bipartitions `(Q, X∖Q)`; the last item always lands in
/// the second part.
pub fn bipartitions(x: &[AttrId]) -> Vec<Split> {
    let m = x.len();
    if m < 2 {
        return Vec::new();
    }
    (1..1u64 << (m - 1))
        .map(|mask| {
            let (q, r): (Vec<_>, Vec<_>) = x.iter().enumerate().partition(|&(i, _)| mask >> i & 1 == 1);
            (q.into_iter().map(|(_, &a)| a).collect(), r.into_iter().map(|(_, &a)| a).collect())
        })
        .collect()
}

/// Fisher's positive test of `Q` against `X∖Q` for every bipartition.
/// Productive iff every p is at most `alpha`.
pub fn bipartition_productive(
    ex: &ExactTests,
    d: &Dataset,
    x: &[AttrId],
    alpha: f64,
    max_attrs: usize,
) -> Result<BipartitionReport> {
    if x.len() < 2 {
        return Err(Error::domain("bipartition test needs at least two items"));
    }
    if x.len() > max_attrs {
        return Err(Error::Capacity {
            what: "attribute set size",
            limit: max_attrs,
            requested: x.len(),
        });
    }
    let n = d.n_rows() as u64;
    let n_xy = d.freq(x) as u64;
    let scored: Vec<(f64, Split)> = bipartitions(x)
        .into_par_iter()
        .map(|(q, r)| {
            let t = ContingencyTable {
                n,
                n_x: d.freq(&q) as u64,
                n_a: d.freq(&r) as u64,
                n_xa: n_xy,
            };
            (ex.ln_fisher(&t, Direction::Positive), (q, r))
        })
        .collect();
    let (ln_worst, split) = scored
        .into_iter()
        .reduce(|a, b| if b.0 > a.0 { b } else { a })
        .expect("at least one bipartition");
    let worst_p = ln_worst.exp();
    Ok(BipartitionReport {
        productive: worst_p <= alpha,
        worst_p,
        worst_split: split,
    })
}

/// Redundancy check: returns `(true, None)` when no `Y ⊊ X`, `Z ⊊ Y` has
/// `fr(Y) = fr(Z)`, otherwise `(false, Some((Y, Z)))`.
pub fn is_nonredundant(d: &Dataset, x: &[AttrId]) -> (bool, Option<Split>) {
    let m = x.len();
    if m >= 64 {
        panic!("attribute set too large for redundancy scan");
    }
    let subset = |mask: u64| -> Vec<AttrId> {
        x.iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &a)| a)
            .collect()
    };
    let full = (1u64 << m) - 1;
    // Frequency is anti-monotone, so an equal-frequency pair exists iff one
    // exists with Z = Y minus a single item.
    for mask in 1..full {
        let y = subset(mask);
        let fy = d.freq(&y);
        for i in 0..m {
            if mask >> i & 1 == 1 {
                let z = subset(mask & !(1 << i));
                if d.freq(&z) == fy {
                    return (false, Some((y, z)));
                }
            }
        }
    }
    (true, None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductivityStatus {
    Productive,
    NotProductive,
    /// No rows remain after the exclusion.
    Undecidable,
}

/// Rows of `d` not covered by any `Y∖X`.
pub fn rows_outside_supersets(d: &Dataset, x: &[AttrId], supersets: &[Vec<AttrId>]) -> Result<RowSet> {
    let mut excluded = RowSet::empty(d.n_rows());
    for y in supersets {
        if !x.iter().all(|a| y.contains(a)) || y.len() <= x.len() {
            return Err(Error::domain("every superset must strictly contain the set"));
        }
        let diff: Vec<AttrId> = y.iter().copied().filter(|a| !x.contains(a)).collect();
        excluded.union_with(&d.cover(&diff));
    }
    Ok(excluded.complement())
}

/// Reruns the bipartition test on the rows not covered by `Y∖X` for any of
/// the given supersets `Y`.
pub fn independently_productive(
    ex: &ExactTests,
    d: &Dataset,
    x: &[AttrId],
    supersets: &[Vec<AttrId>],
    alpha: f64,
    max_attrs: usize,
) -> Result<ProductivityStatus> {
    let keep = rows_outside_supersets(d, x, supersets)?;
    if keep.is_empty() {
        return Ok(ProductivityStatus::Undecidable);
    }
    let restricted = d.restrict_rows(&keep);
    let report = bipartition_productive(ex, &restricted, x, alpha, max_attrs)?;
    Ok(if report.productive {
        ProductivityStatus::Productive
    } else {
        ProductivityStatus::NotProductive
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfSufficiencyVerdict {
    pub pattern: SetPattern,
    pub productive: bool,
    pub worst_p: f64,
    pub nonredundant: bool,
    pub witness: Option<Split>,
    pub independently_productive: ProductivityStatus,
    pub alpha: f64,
}

impl SelfSufficiencyVerdict {
    pub fn self_sufficient(&self) -> bool {
        self.productive && self.nonredundant && self.independently_productive == ProductivityStatus::Productive
    }
}

/// All three self-sufficiency criteria for `x`.
pub fn self_sufficiency(
    ex: &ExactTests,
    d: &Dataset,
    x: &[AttrId],
    supersets: &[Vec<AttrId>],
    alpha: f64,
    max_attrs: usize,
) -> Result<SelfSufficiencyVerdict> {
    let mut pattern = SetPattern::new(d, x, max_attrs)?;
    let prod = bipartition_productive(ex, d, &pattern.items, alpha, max_attrs)?;
    let (nonredundant, witness) = is_nonredundant(d, &pattern.items);
    let indep = independently_productive(ex, d, &pattern.items, supersets, alpha, max_attrs)?;
    pattern.verdicts.insert("bipartition_worst_p".into(), prod.worst_p);
    Ok(SelfSufficiencyVerdict {
        pattern,
        productive: prod.productive,
        worst_p: prod.worst_p,
        nonredundant,
        witness,
        independently_productive: indep,
        alpha,
    })
}
