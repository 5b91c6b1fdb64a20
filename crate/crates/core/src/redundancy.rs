//! Productivity and superfluousness of a rule `YQ → A` relative to its
//! generalizations `Y → A`.
//!
//! The forward test asks whether Q improves the rule within the rows where Y
//! holds; the backward test asks whether ¬Y improves `→ ¬A` within the rows
//! where `YQ` fails. Both reduce to Fisher's positive tail on a conditional
//! 2×2 table, built here from the parent and child tables alone.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{AttrId, Dataset, RulePattern};
use crate::error::{Error, Result};
use crate::exact::{Direction, ExactTests, TestResult};
use crate::measures::chi2_2x2;
use crate::table::{ContingencyTable, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpretation {
    ValueBased,
    VariableBased,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Productive,
    Superfluous,
    Undecidable,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct JudgeOptions {
    /// Test every nonempty proper subset of the antecedent instead of the
    /// immediate parents only.
    pub all_subsets: bool,
    /// Variable-based only: judge by comparing the child's Fisher p against
    /// each ancestor's instead of running the two improvement tests.
    pub shortcut: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImprovementResult {
    pub parent: RulePattern,
    pub child: RulePattern,
    pub p_forward: f64,
    pub p_backward: Option<f64>,
    pub verdict: Verdict,
}

/// Conditional table of Q against A within the rows where Y holds:
/// `(fr(Y), fr(YQ), fr(YA), fr(YQA))`.
pub fn forward_table(parent: &ContingencyTable, child: &ContingencyTable) -> Result<ContingencyTable> {
    check_nested(parent, child)?;
    if parent.n_x == 0 {
        return Err(Error::domain("fr(Y) = 0"));
    }
    Ok(ContingencyTable {
        n: parent.n_x,
        n_x: child.n_x,
        n_a: parent.n_xa,
        n_xa: child.n_xa,
    })
}

/// Conditional table of ¬Y against ¬A within the rows where `YQ` fails:
/// `(n − fr(YQ), fr(¬Y), fr(¬(YQ)¬A), fr(¬Y¬A))`.
pub fn backward_table(parent: &ContingencyTable, child: &ContingencyTable) -> Result<ContingencyTable> {
    check_nested(parent, child)?;
    let n = parent.n;
    if child.n_x == n {
        return Err(Error::domain("fr(¬(YQ)) = 0"));
    }
    let not_a = n - parent.n_a;
    Ok(ContingencyTable {
        n: n - child.n_x,
        n_x: n - parent.n_x,
        n_a: not_a - child.n_x_not_a(),
        n_xa: not_a - parent.n_x_not_a(),
    })
}

fn check_nested(parent: &ContingencyTable, child: &ContingencyTable) -> Result<()> {
    let ok = parent.n == child.n
        && parent.n_a == child.n_a
        && child.n_x <= parent.n_x
        && child.n_xa <= parent.n_xa
        && child.n_x_not_a() <= parent.n_x_not_a();
    if ok {
        Ok(())
    } else {
        Err(Error::domain("child table is not nested in the parent table"))
    }
}

fn tables(
    d: &Dataset,
    y: &[AttrId],
    q: &[AttrId],
    a: AttrId,
    sign: Sign,
) -> Result<(ContingencyTable, ContingencyTable)> {
    if q.is_empty() {
        return Err(Error::domain("Q must be nonempty"));
    }
    if q.iter().any(|i| y.contains(i)) {
        return Err(Error::domain("Q and Y must be disjoint"));
    }
    let parent = crate::data::table_from_cover(d, &d.cover(y), a, sign);
    let yq: Vec<AttrId> = y.iter().chain(q).copied().collect();
    if yq.contains(&a) {
        return Err(Error::domain("consequent is a member of the antecedent"));
    }
    let child = d.extract_table(&yq, a, sign)?;
    Ok((parent, child))
}

/// Significance of the improvement of `YQ → A` over `Y → A`.
pub fn productivity_fisher(
    ex: &ExactTests,
    d: &Dataset,
    y: &[AttrId],
    q: &[AttrId],
    a: AttrId,
    sign: Sign,
) -> Result<TestResult> {
    let (parent, child) = tables(d, y, q, a, sign)?;
    Ok(ex.fisher_p(&forward_table(&parent, &child)?, Direction::Positive))
}

/// Significance of the improvement of `¬Y → ¬A` over `¬(YQ) → ¬A`.
pub fn negated_productivity_fisher(
    ex: &ExactTests,
    d: &Dataset,
    y: &[AttrId],
    q: &[AttrId],
    a: AttrId,
    sign: Sign,
) -> Result<TestResult> {
    let (parent, child) = tables(d, y, q, a, sign)?;
    Ok(ex.fisher_p(&backward_table(&parent, &child)?, Direction::Positive))
}

/// χ² of the forward conditional table.
pub fn productivity_chi2(d: &Dataset, y: &[AttrId], q: &[AttrId], a: AttrId, sign: Sign) -> Result<f64> {
    let (parent, child) = tables(d, y, q, a, sign)?;
    chi2_2x2(&forward_table(&parent, &child)?, false)
}

/// χ² of the backward conditional table.
pub fn negated_productivity_chi2(d: &Dataset, y: &[AttrId], q: &[AttrId], a: AttrId, sign: Sign) -> Result<f64> {
    let (parent, child) = tables(d, y, q, a, sign)?;
    chi2_2x2(&backward_table(&parent, &child)?, false)
}

/// Both sides of `p₀(YQ→A) / p₀(Y→A) = p₀(forward) / p₀(backward)` in log
/// form, or `None` when a term is undefined.
pub fn ln_p0_ratios(ex: &ExactTests, parent: &ContingencyTable, child: &ContingencyTable) -> Option<(f64, f64)> {
    let fwd = forward_table(parent, child).ok()?;
    let bwd = backward_table(parent, child).ok()?;
    let lhs = ex.fisher_p0(child).ln_p() - ex.fisher_p0(parent).ln_p();
    let rhs = ex.fisher_p0(&fwd).ln_p() - ex.fisher_p0(&bwd).ln_p();
    Some((lhs, rhs))
}

/// Nonempty proper subsets of `x` to test as generalizations.
pub fn generalizations(x: &[AttrId], all_subsets: bool) -> Vec<Vec<AttrId>> {
    if x.len() < 2 {
        return Vec::new();
    }
    if !all_subsets {
        return (0..x.len())
            .map(|skip| {
                x.iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
    }
    let full = (1u64 << x.len()) - 1;
    (1..full)
        .map(|mask| {
            x.iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect()
}

/// Verdict of a child rule against one parent, from the two tables.
pub fn judge_pair(
    ex: &ExactTests,
    parent: &ContingencyTable,
    child: &ContingencyTable,
    interpretation: Interpretation,
    alpha: f64,
    shortcut: bool,
) -> (f64, Option<f64>, Verdict) {
    let Ok(fwd) = forward_table(parent, child) else {
        return (1.0, None, Verdict::Undecidable);
    };
    let ln_f = ex.ln_fisher(&fwd, Direction::Positive);
    let bwd = backward_table(parent, child).ok();
    let ln_b = bwd.map(|t| ex.ln_fisher(&t, Direction::Positive));
    let verdict = match interpretation {
        Interpretation::ValueBased => {
            if child.n_x == 0 {
                Verdict::Undecidable
            } else {
                // φ(child) ≤ φ(parent), compared exactly
                let no_gain = child.n_xa as u128 * parent.n_x as u128 <= parent.n_xa as u128 * child.n_x as u128;
                if no_gain || ln_f.exp() > alpha {
                    Verdict::Superfluous
                } else {
                    Verdict::Productive
                }
            }
        }
        Interpretation::VariableBased if shortcut => {
            if ex.ln_fisher(child, Direction::Positive) >= ex.ln_fisher(parent, Direction::Positive) {
                Verdict::Superfluous
            } else {
                Verdict::Productive
            }
        }
        Interpretation::VariableBased => match ln_b {
            None => Verdict::Undecidable,
            Some(ln_b) if ln_f >= ln_b => Verdict::Superfluous,
            Some(_) => Verdict::Productive,
        },
    };
    (ln_f.exp(), ln_b.map(f64::exp), verdict)
}

/// Tests `child` against each of its generalizations.
pub fn judge_superfluous(
    ex: &ExactTests,
    d: &Dataset,
    child: &RulePattern,
    interpretation: Interpretation,
    alpha: f64,
    opts: JudgeOptions,
) -> Result<Vec<ImprovementResult>> {
    if child.antecedent.is_empty() {
        return Err(Error::domain("child antecedent must be nonempty"));
    }
    generalizations(&child.antecedent, opts.all_subsets)
        .into_par_iter()
        .map(|y| {
            let parent = RulePattern::new(d, &y, child.consequent, child.sign)?;
            let (p_forward, p_backward, verdict) =
                judge_pair(ex, &parent.table, &child.table, interpretation, alpha, opts.shortcut);
            Ok(ImprovementResult {
                parent,
                child: child.clone(),
                p_forward,
                p_backward,
                verdict,
            })
        })
        .collect()
}

/// Superfluous if any parent says so, undecidable if any parent cannot be
/// judged, productive otherwise.
pub fn overall_verdict(results: &[ImprovementResult]) -> Verdict {
    if results.iter().any(|r| r.verdict == Verdict::Superfluous) {
        Verdict::Superfluous
    } else if results.iter().any(|r| r.verdict == Verdict::Undecidable) {
        Verdict::Undecidable
    } else {
        Verdict::Productive
    }
}
