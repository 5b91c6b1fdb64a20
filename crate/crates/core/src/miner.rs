//! Branch-and-bound search for the best non-superfluous dependency rules.
//!
//! Antecedents are enumerated in a set-enumeration tree over attributes in
//! ascending frequency order. For each live consequent a node carries a
//! lower bound on the p-value of any specialization; a consequent is dropped
//! from a subtree once the bound exceeds what could still be reported.
//! Each first-level subtree runs on its own worker with its own top-k
//! threshold, so the search and its statistics are independent of the
//! worker count.

use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{table_from_cover, AttrId, Dataset, RulePattern};
use crate::error::{Error, Result};
use crate::exact::{chi2_p, mi_p, z_complete, Direction, ExactTests, Sidedness, TestResult};
use crate::logmath::{ln_chi2_1_sf, LnFactorial};
use crate::measures::{all_measures, chi2_2x2, lift, mutual_information_2x2, precision, MeasureValue};
use crate::multiple::{adjust_with_m, harmonic, sidak, testability_filter, Method};
use crate::parallel::with_workers;
use crate::redundancy::{
    generalizations, judge_pair, judge_superfluous, ImprovementResult, Interpretation, JudgeOptions, Verdict,
};
use crate::rowset::RowSet;
use crate::table::{ContingencyTable, Sign};

/// Test used to score rules during mining; always the positive direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MiningTest {
    Fisher,
    BinomComplete,
    Chi2,
    Mi,
}

impl FromStr for MiningTest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fisher" | "fisher_pos" => Ok(MiningTest::Fisher),
            "binom_complete" | "binomial" => Ok(MiningTest::BinomComplete),
            "chi2" | "chi2_test" => Ok(MiningTest::Chi2),
            "mi" | "mi_test" => Ok(MiningTest::Mi),
            _ => Err(Error::Config(format!("unknown mining test '{s}'"))),
        }
    }
}

impl fmt::Display for MiningTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MiningTest::Fisher => "fisher",
            MiningTest::BinomComplete => "binom_complete",
            MiningTest::Chi2 => "chi2",
            MiningTest::Mi => "mi",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correction {
    Method(Method),
    Layered,
    None,
}

impl FromStr for Correction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "layered" => Ok(Correction::Layered),
            "none" => Ok(Correction::None),
            "weighted_bonferroni" => Err(Error::Config("weighted Bonferroni is not available for mining".into())),
            other => other.parse().map(Correction::Method),
        }
    }
}

impl fmt::Display for Correction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Correction::Method(m) => m.fmt(f),
            Correction::Layered => f.write_str("layered"),
            Correction::None => f.write_str("none"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Consequents {
    All,
    Named(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinerConfig {
    pub test: MiningTest,
    pub interpretation: Interpretation,
    pub max_antecedent: usize,
    pub consequents: Consequents,
    pub allow_negated_consequent: bool,
    pub alpha: f64,
    pub correction: Correction,
    pub top_k: usize,
    pub min_freq: Option<usize>,
    pub seed: u64,
    pub workers: Option<usize>,
    pub judge: JudgeOptions,
    /// With the complete binomial test, skip the exact computation when the
    /// normal approximation is far from significant.
    pub z_screen: bool,
    /// With Fisher's test and an analytic correction, restrict the family to
    /// testable hypotheses.
    pub testability: bool,
}

impl Default for MinerConfig {
    fn default() -> Self {
        MinerConfig {
            test: MiningTest::Fisher,
            interpretation: Interpretation::VariableBased,
            max_antecedent: 2,
            consequents: Consequents::All,
            allow_negated_consequent: true,
            alpha: 0.05,
            correction: Correction::Method(Method::Bonferroni),
            top_k: 100,
            min_freq: None,
            seed: 0,
            workers: None,
            judge: JudgeOptions::default(),
            z_screen: false,
            testability: true,
        }
    }
}

impl MinerConfig {
    /// Checks the configuration against `d` and resolves the consequents.
    pub fn targets(&self, d: &Dataset) -> Result<Vec<(AttrId, Sign)>> {
        if self.max_antecedent == 0 {
            return Err(Error::Config("max_antecedent must be at least 1".into()));
        }
        if self.top_k == 0 {
            return Err(Error::Config("top_k must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha {} outside (0, 1)", self.alpha)));
        }
        if let Some(f) = self.min_freq {
            if f > d.n_rows() {
                return Err(Error::Config(format!("min_freq {f} exceeds the {} rows", d.n_rows())));
            }
        }
        if self.z_screen && self.test != MiningTest::BinomComplete {
            return Err(Error::Config("z screening requires the complete binomial test".into()));
        }
        if self.correction == Correction::Method(Method::WeightedBonferroni) {
            return Err(Error::Config("weighted Bonferroni is not available for mining".into()));
        }
        let mut ids: Vec<AttrId> = match &self.consequents {
            Consequents::All => (0..d.n_cols()).collect(),
            Consequents::Named(names) => d.attr_ids(names)?,
        };
        ids.sort_unstable();
        ids.dedup();
        let mut out = Vec::with_capacity(ids.len() * 2);
        for a in ids {
            out.push((a, Sign::Positive));
            if self.allow_negated_consequent {
                out.push((a, Sign::Negated));
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinedRule {
    pub rule: RulePattern,
    pub raw_p: f64,
    pub log_p: f64,
    pub adjusted_p: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_visited: u64,
    pub evaluated: u64,
    pub bound_cuts: u64,
    pub recorded: u64,
}

impl std::ops::AddAssign for SearchStats {
    fn add_assign(&mut self, o: Self) {
        self.nodes_visited += o.nodes_visited;
        self.evaluated += o.evaluated;
        self.bound_cuts += o.bound_cuts;
        self.recorded += o.recorded;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiningReport {
    pub rules: Vec<MinedRule>,
    /// Size of the corrected family.
    pub m: u64,
    pub alpha: f64,
    pub correction: Correction,
    pub stats: SearchStats,
}

/// Log p-value of `t` under the mining test. Tests that are undefined for
/// the table count as `p = 1`.
pub fn score_ln_p(ex: &ExactTests, t: &ContingencyTable, test: MiningTest) -> f64 {
    match test {
        MiningTest::Fisher => ex.ln_fisher(t, Direction::Positive),
        MiningTest::BinomComplete => ex.ln_binom_complete(t, Direction::Positive),
        MiningTest::Chi2 => chi2_p(t, Sidedness::Positive).map(|r| r.ln_p()).unwrap_or(0.0),
        MiningTest::Mi => mi_p(t, Sidedness::Positive).map(|r| r.ln_p()).unwrap_or(0.0),
    }
}

/// Lower bound on the log p-value of every table `(n, x', fr(A), y')` with
/// `y' ≤ fr(XA)` and `x' − y' ≤ fr(X¬A)`, i.e. of `t` and every
/// specialization of its antecedent.
pub fn ln_p_bound(ex: &ExactTests, t: &ContingencyTable, test: MiningTest) -> f64 {
    let k = t.n_xa;
    let diag = |k: u64| ContingencyTable { n_x: k, n_xa: k, ..*t };
    match test {
        // Fisher's p falls as fr(XA) grows and rises with fr(X¬A).
        _ if k == 0 && matches!(test, MiningTest::Fisher | MiningTest::BinomComplete) => 0.0,
        MiningTest::Fisher => ex.ln_fisher(&diag(k), Direction::Positive),
        MiningTest::BinomComplete => (1..=k)
            .map(|j| ex.ln_binom_complete(&diag(j), Direction::Positive))
            .fold(0.0, f64::min),
        // The statistics are convex over the feasible region; its vertices
        // with positive leverage bound the one-sided p-value.
        MiningTest::Chi2 | MiningTest::Mi => {
            let stat = |c: &ContingencyTable| match test {
                MiningTest::Chi2 => chi2_2x2(c, false).ok(),
                _ => (c.n_x > 0 && c.n_x < c.n && c.n_a > 0 && c.n_a < c.n)
                    .then(|| 2.0 * c.n as f64 * mutual_information_2x2(c)),
            };
            let best = [diag(k), *t]
                .iter()
                .filter(|c| c.leverage() > 0.0)
                .filter_map(stat)
                .fold(None, |acc: Option<f64>, s| Some(acc.map_or(s, |a| a.max(s))));
            match best {
                Some(s) => ln_chi2_1_sf(s) - std::f64::consts::LN_2,
                None => -std::f64::consts::LN_2,
            }
        }
    }
}

fn ln_choose_f(k: usize, l: usize) -> f64 {
    if l > k {
        return f64::NEG_INFINITY;
    }
    let lf = |v: usize| (1..=v).map(|i| (i as f64).ln()).sum::<f64>();
    lf(k) - lf(l) - lf(k - l)
}

/// Number of hypotheses per antecedent size in the declared space.
pub fn declared_level_counts(n_cols: usize, n_targets: usize, max_antecedent: usize) -> Vec<u64> {
    let l_max = max_antecedent.min(n_cols.saturating_sub(1));
    (1..=l_max)
        .map(|l| {
            let c = (ln_choose_f(n_cols - 1, l).exp() * n_targets as f64).round();
            if c >= u64::MAX as f64 {
                u64::MAX
            } else {
                c as u64
            }
        })
        .collect()
}

/// Corrected-family description shared by the pruned and exhaustive searches.
#[derive(Debug, Clone)]
struct Plan {
    alpha: f64,
    correction: Correction,
    m: u64,
    level_counts: Vec<u64>,
    l_max: usize,
    /// Bonferroni level of the testability filter, when active.
    testable_level: Option<f64>,
    test: MiningTest,
    z_screen: bool,
    interpretation: Interpretation,
    judge: JudgeOptions,
    top_k: usize,
    min_freq: usize,
}

const SLACK: f64 = 1.0 + 1e-12;

impl Plan {
    /// Largest raw p that can still be reported at this antecedent size.
    fn raw_admission(&self, level: usize) -> f64 {
        let a = self.alpha;
        let m = self.m.max(1);
        let raw = match self.correction {
            Correction::Method(Method::Bonferroni) => a / m as f64,
            Correction::Method(Method::Sidak) => sidak_level(a, m),
            Correction::Method(Method::Bhy) => a / harmonic(m),
            Correction::Method(_) | Correction::None => a,
            Correction::Layered => a / (self.l_max as f64 * self.level_counts[level - 1].max(1) as f64),
        };
        raw * SLACK
    }

    /// Ranking key usable for top-k pruning, when the correction allows it.
    fn key(&self, p: f64, level: usize) -> Option<f64> {
        let m = self.m.max(1);
        match self.correction {
            Correction::Method(Method::Bonferroni) => Some((m as f64 * p).min(1.0)),
            Correction::Method(Method::Sidak) => Some(sidak(p, m)),
            Correction::Method(Method::Holm) | Correction::None => Some(p),
            Correction::Layered => Some(self.layered_adjust(p, level)),
            Correction::Method(_) => None,
        }
    }

    fn layered_adjust(&self, p: f64, level: usize) -> f64 {
        (p * self.l_max as f64 * self.level_counts[level - 1].max(1) as f64).min(1.0)
    }

    fn in_family(&self, ex: &ExactTests, t: &ContingencyTable) -> bool {
        match self.testable_level {
            None => true,
            Some(level) => min_attainable_ln(ex, t).exp() <= level,
        }
    }

    fn ln_p(&self, ex: &ExactTests, t: &ContingencyTable, level: usize) -> f64 {
        if self.z_screen {
            if let Ok(z) = z_complete(t, false) {
                if z.p() > 10.0 * self.raw_admission(level) {
                    return 0.0;
                }
            }
        }
        score_ln_p(ex, t, self.test)
    }

    /// Adjusted p-values of the recorded family members, in input order.
    fn adjust(&self, ps: &[f64], levels: &[usize]) -> Result<Vec<f64>> {
        let ps: Vec<f64> = ps.iter().map(|&p| p.max(f64::MIN_POSITIVE)).collect();
        Ok(match self.correction {
            Correction::Method(method) => adjust_with_m(&ps, self.m.max(ps.len() as u64), method, self.alpha, None)?.adjusted_ps,
            Correction::None => ps,
            Correction::Layered => ps.iter().zip(levels).map(|(&p, &l)| self.layered_adjust(p, l)).collect(),
        })
    }

    fn verdict(&self, ex: &ExactTests, d: &Dataset, x: &[AttrId], a: AttrId, sign: Sign, t: &ContingencyTable) -> Verdict {
        let mut verdicts = generalizations(x, self.judge.all_subsets).into_iter().map(|y| {
            let parent = table_from_cover(d, &d.cover(&y), a, sign);
            judge_pair(ex, &parent, t, self.interpretation, self.alpha, self.judge.shortcut).2
        });
        let mut out = Verdict::Productive;
        for v in verdicts.by_ref() {
            match v {
                Verdict::Superfluous => return Verdict::Superfluous,
                Verdict::Undecidable => out = Verdict::Undecidable,
                Verdict::Productive => {}
            }
        }
        out
    }
}

fn sidak_level(alpha: f64, m: u64) -> f64 {
    -((-alpha).ln_1p() / m as f64).exp_m1()
}

fn min_attainable_ln(ex: &ExactTests, t: &ContingencyTable) -> f64 {
    ex.ln_fisher(&t.with_n_xa(t.max_n_xa()), Direction::Positive)
}

/// Lower bound of the minimum attainable Fisher p over a node and all its
/// specializations.
fn min_attainable_bound_ln(ex: &ExactTests, t: &ContingencyTable) -> f64 {
    let x = t.n_x.min(t.n_a);
    if x == 0 {
        return 0.0;
    }
    let c = ContingencyTable { n_x: x, n_xa: x, ..*t };
    ex.ln_fisher(&c, Direction::Positive)
}

fn tree_order(d: &Dataset) -> Vec<AttrId> {
    let mut order: Vec<AttrId> = (0..d.n_cols()).collect();
    order.sort_by_key(|&a| (d.freqs()[a], a));
    order
}

fn build_plan(d: &Dataset, cfg: &MinerConfig, targets: &[(AttrId, Sign)], ex: &ExactTests) -> Plan {
    let level_counts = declared_level_counts(d.n_cols(), targets.len(), cfg.max_antecedent);
    let declared: u64 = level_counts.iter().fold(0u64, |a, &b| a.saturating_add(b));
    let mut plan = Plan {
        alpha: cfg.alpha,
        correction: cfg.correction,
        m: declared,
        l_max: level_counts.len(),
        level_counts,
        testable_level: None,
        test: cfg.test,
        z_screen: cfg.z_screen,
        interpretation: cfg.interpretation,
        judge: cfg.judge,
        top_k: cfg.top_k,
        min_freq: cfg.min_freq.unwrap_or(0),
    };
    if cfg.testability && cfg.test == MiningTest::Fisher && matches!(cfg.correction, Correction::Method(_)) {
        let stars = collect_min_attainable(d, &plan, targets, ex);
        let t = testability_filter(&stars, cfg.alpha);
        plan.m = t.m_eff as u64;
        plan.testable_level = Some(t.level);
    }
    plan
}

/// Minimum attainable Fisher p of every hypothesis in the space whose value
/// is at most `alpha`; the rest can never be testable.
fn collect_min_attainable(d: &Dataset, plan: &Plan, targets: &[(AttrId, Sign)], ex: &ExactTests) -> Vec<f64> {
    let order = tree_order(d);
    let per_root: Vec<Vec<f64>> = (0..order.len())
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            let mut items = vec![order[i]];
            let cover = d.column(order[i]).clone();
            if cover.len() >= plan.min_freq.max(1) {
                stars_visit(d, plan, ex, &order, &mut items, &cover, targets, i + 1, &mut out);
            }
            out
        })
        .collect();
    per_root.into_iter().flatten().collect()
}

#[allow(clippy::too_many_arguments)]
fn stars_visit(
    d: &Dataset,
    plan: &Plan,
    ex: &ExactTests,
    order: &[AttrId],
    items: &mut Vec<AttrId>,
    cover: &RowSet,
    live: &[(AttrId, Sign)],
    next: usize,
    out: &mut Vec<f64>,
) {
    let ln_alpha = plan.alpha.ln();
    let mut child_live = Vec::new();
    for &(a, sign) in live {
        if items.contains(&a) {
            continue;
        }
        let t = table_from_cover(d, cover, a, sign);
        let star = min_attainable_ln(ex, &t);
        if star <= ln_alpha {
            out.push(star.exp());
        }
        if min_attainable_bound_ln(ex, &t) <= ln_alpha {
            child_live.push((a, sign));
        }
    }
    if items.len() >= plan.l_max || child_live.is_empty() {
        return;
    }
    for j in next..order.len() {
        let c = cover.intersection(d.column(order[j]));
        if c.is_empty() || c.len() < plan.min_freq {
            continue;
        }
        items.push(order[j]);
        stars_visit(d, plan, ex, order, items, &c, &child_live, j + 1, out);
        items.pop();
    }
}

#[derive(Debug, Clone)]
struct Hyp {
    antecedent: Vec<AttrId>,
    consequent: AttrId,
    sign: Sign,
    table: ContingencyTable,
    ln_p: f64,
    verdict: Option<Verdict>,
}

impl Hyp {
    fn level(&self) -> usize {
        self.antecedent.len()
    }
}

#[derive(Default)]
struct Subtree {
    recorded: Vec<Hyp>,
    stats: SearchStats,
    /// Keys of accepted hypotheses; max-heap of the best `top_k`.
    best: BinaryHeap<u64>,
}

impl Subtree {
    fn theta(&self, top_k: usize) -> f64 {
        if self.best.len() >= top_k {
            f64::from_bits(*self.best.peek().expect("nonempty"))
        } else {
            f64::INFINITY
        }
    }

    fn accept(&mut self, key: f64, top_k: usize) {
        self.best.push(key.to_bits());
        if self.best.len() > top_k {
            self.best.pop();
        }
    }
}

struct Search<'a> {
    d: &'a Dataset,
    ex: &'a ExactTests,
    plan: &'a Plan,
    order: Vec<AttrId>,
}

impl Search<'_> {
    fn visit(&self, items: &mut Vec<AttrId>, cover: &RowSet, live: &[(AttrId, Sign)], next: usize, st: &mut Subtree) {
        st.stats.nodes_visited += 1;
        let level = items.len();
        let plan = self.plan;
        let mut child_live = Vec::new();
        for &(a, sign) in live {
            if items.contains(&a) {
                continue;
            }
            let t = table_from_cover(self.d, cover, a, sign);
            let ln_p = plan.ln_p(self.ex, &t, level);
            st.stats.evaluated += 1;
            let p = ln_p.exp();
            if p <= plan.raw_admission(level) && plan.in_family(self.ex, &t) {
                let mut antecedent = items.clone();
                antecedent.sort_unstable();
                let verdict = plan.verdict(self.ex, self.d, &antecedent, a, sign, &t);
                if verdict == Verdict::Productive {
                    if let Some(key) = plan.key(p, level) {
                        if key <= plan.alpha {
                            st.accept(key, plan.top_k);
                        }
                    }
                }
                st.recorded.push(Hyp {
                    antecedent,
                    consequent: a,
                    sign,
                    table: t,
                    ln_p,
                    verdict: Some(verdict),
                });
                st.stats.recorded += 1;
            }
            if level < plan.l_max {
                let bound = ln_p_bound(self.ex, &t, plan.test).exp();
                let theta = st.theta(plan.top_k);
                let reachable = (level + 1..=plan.l_max).any(|l| {
                    bound <= plan.raw_admission(l) && plan.key(bound, l).is_none_or(|k| k <= theta)
                });
                if reachable {
                    child_live.push((a, sign));
                } else {
                    st.stats.bound_cuts += 1;
                }
            }
        }
        if child_live.is_empty() {
            return;
        }
        for j in next..self.order.len() {
            let b = self.order[j];
            let c = cover.intersection(self.d.column(b));
            if c.len() < plan.min_freq {
                continue;
            }
            items.push(b);
            self.visit(items, &c, &child_live, j + 1, st);
            items.pop();
        }
    }
}

fn finish(
    d: &Dataset,
    plan: &Plan,
    ex: &ExactTests,
    family: Vec<Hyp>,
    stats: SearchStats,
) -> Result<MiningReport> {
    let ps: Vec<f64> = family.iter().map(|h| h.ln_p.exp()).collect();
    let levels: Vec<usize> = family.iter().map(Hyp::level).collect();
    let adjusted = plan.adjust(&ps, &levels)?;
    let mut rules: Vec<MinedRule> = family
        .into_iter()
        .zip(adjusted)
        .filter(|(_, adj)| *adj <= plan.alpha)
        .filter_map(|(h, adj)| {
            let verdict = h
                .verdict
                .unwrap_or_else(|| plan.verdict(ex, d, &h.antecedent, h.consequent, h.sign, &h.table));
            (verdict == Verdict::Productive).then(|| {
                let mut rule = RulePattern {
                    antecedent: h.antecedent,
                    consequent: h.consequent,
                    sign: h.sign,
                    table: h.table,
                    scores: Default::default(),
                };
                fill_scores(&mut rule);
                MinedRule {
                    rule,
                    raw_p: h.ln_p.exp(),
                    log_p: h.ln_p,
                    adjusted_p: adj,
                    verdict,
                }
            })
        })
        .collect();
    rules.sort_by(|a, b| {
        a.adjusted_p
            .total_cmp(&b.adjusted_p)
            .then(a.log_p.total_cmp(&b.log_p))
            .then(a.rule.antecedent.len().cmp(&b.rule.antecedent.len()))
            .then(a.rule.antecedent.cmp(&b.rule.antecedent))
            .then(a.rule.consequent.cmp(&b.rule.consequent))
            .then(a.rule.sign.cmp(&b.rule.sign))
    });
    rules.truncate(plan.top_k);
    Ok(MiningReport {
        rules,
        m: plan.m,
        alpha: plan.alpha,
        correction: plan.correction,
        stats,
    })
}

fn fill_scores(rule: &mut RulePattern) {
    let t = rule.table;
    rule.scores.insert("leverage".into(), t.leverage());
    if let Ok(v) = precision(&t) {
        rule.scores.insert("precision".into(), v);
    }
    if let Ok(v) = lift(&t) {
        rule.scores.insert("lift".into(), v);
    }
}

/// Mines the best `top_k` non-superfluous rules whose corrected p-value is
/// at most `alpha`.
pub fn mine_rules(d: &Dataset, cfg: &MinerConfig) -> Result<MiningReport> {
    let targets = cfg.targets(d)?;
    let ex = ExactTests::new(d.n_rows());
    with_workers(cfg.workers, || {
        let plan = build_plan(d, cfg, &targets, &ex);
        let search = Search {
            d,
            ex: &ex,
            plan: &plan,
            order: tree_order(d),
        };
        let parts: Vec<Subtree> = (0..search.order.len())
            .into_par_iter()
            .map(|i| {
                let mut st = Subtree::default();
                let first = search.order[i];
                let cover = d.column(first).clone();
                if cover.len() >= plan.min_freq && plan.l_max >= 1 {
                    search.visit(&mut vec![first], &cover, &targets, i + 1, &mut st);
                }
                st
            })
            .collect();
        let mut stats = SearchStats::default();
        let mut family = Vec::new();
        for p in parts {
            stats += p.stats;
            family.extend(p.recorded);
        }
        finish(d, &plan, &ex, family, stats)
    })
}

/// Unpruned reference search: scores every hypothesis of the declared space
/// and applies the same correction, filtering and ranking.
pub fn mine_rules_exhaustive(d: &Dataset, cfg: &MinerConfig) -> Result<MiningReport> {
    let targets = cfg.targets(d)?;
    let ex = ExactTests::new(d.n_rows());
    let level_counts = declared_level_counts(d.n_cols(), targets.len(), cfg.max_antecedent);
    let l_max = level_counts.len();
    let min_freq = cfg.min_freq.unwrap_or(0);
    let mut antecedents: Vec<Vec<AttrId>> = Vec::new();
    for mask in 1u64..(1u64 << d.n_cols()) {
        let size = mask.count_ones() as usize;
        if size <= l_max {
            let x: Vec<AttrId> = (0..d.n_cols()).filter(|&i| mask >> i & 1 == 1).collect();
            if d.freq(&x) >= min_freq.max(1) || (min_freq == 0 && d.freq(&x) == 0) {
                antecedents.push(x);
            }
        }
    }
    let mut all = Vec::new();
    for x in &antecedents {
        let cover = d.cover(x);
        for &(a, sign) in &targets {
            if !x.contains(&a) {
                all.push((x.clone(), a, sign, table_from_cover(d, &cover, a, sign)));
            }
        }
    }
    let declared: u64 = level_counts.iter().sum();
    let mut plan = Plan {
        alpha: cfg.alpha,
        correction: cfg.correction,
        m: declared,
        l_max,
        level_counts,
        testable_level: None,
        test: cfg.test,
        z_screen: cfg.z_screen,
        interpretation: cfg.interpretation,
        judge: cfg.judge,
        top_k: cfg.top_k,
        min_freq,
    };
    if cfg.testability && cfg.test == MiningTest::Fisher && matches!(cfg.correction, Correction::Method(_)) {
        let stars: Vec<f64> = all.iter().map(|(_, _, _, t)| min_attainable_ln(&ex, t).exp()).collect();
        let f = testability_filter(&stars, cfg.alpha);
        plan.m = f.m_eff as u64;
        plan.testable_level = Some(f.level);
    }
    let family: Vec<Hyp> = all
        .into_iter()
        .filter(|(_, _, _, t)| plan.in_family(&ex, t))
        .map(|(x, a, sign, t)| Hyp {
            ln_p: plan.ln_p(&ex, &t, x.len()),
            antecedent: x,
            consequent: a,
            sign,
            table: t,
            verdict: None,
        })
        .collect();
    let stats = SearchStats {
        evaluated: family.len() as u64,
        ..Default::default()
    };
    finish(d, &plan, &ex, family, stats)
}

/// Every measure and test for one rule, plus its improvement tests against
/// each immediate generalization in both interpretations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RulePanel {
    pub rule: RulePattern,
    pub measures: Vec<MeasureValue>,
    pub tests: Vec<TestResult>,
    pub value_based: Vec<ImprovementResult>,
    pub variable_based: Vec<ImprovementResult>,
}

/// Builds the full panel. Capacity-limited tests fail the call unless
/// `skip_capped` is set, in which case they are left out.
pub fn explain_rule(ex: &ExactTests, d: &Dataset, rule: &RulePattern, alpha: f64, skip_capped: bool) -> Result<RulePanel> {
    let rule = RulePattern::new(d, &rule.antecedent, rule.consequent, rule.sign)?;
    let t = &rule.table;
    let mut tests = vec![
        ex.fisher_p(t, Direction::Positive),
        ex.fisher_p(t, Direction::Negative),
        ex.fisher_p0(t),
        ex.binom_partial_p(t, Direction::Positive),
        ex.binom_complete_p(t, Direction::Positive),
    ];
    tests.extend(crate::exact::z_partial(t).ok());
    tests.extend(z_complete(t, false).ok());
    for r in [ex.multinomial_value_p(t), ex.double_binom_value_p(t)] {
        match r {
            Ok(v) => tests.push(v),
            Err(Error::Capacity { .. }) if skip_capped => {}
            Err(e) => return Err(e),
        }
    }
    tests.extend(chi2_p(t, Sidedness::Positive).ok());
    tests.extend(mi_p(t, Sidedness::Positive).ok());
    let opts = JudgeOptions::default();
    let value_based = judge_superfluous(ex, d, &rule, Interpretation::ValueBased, alpha, opts)?;
    let variable_based = judge_superfluous(ex, d, &rule, Interpretation::VariableBased, alpha, opts)?;
    let mut rule = rule;
    fill_scores(&mut rule);
    Ok(RulePanel {
        measures: all_measures(&rule.table),
        tests,
        value_based,
        variable_based,
        rule,
    })
}

/// Log-factorial table sized for `d`; convenience for callers building
/// their own [`ExactTests`].
pub fn ln_factorial_for(d: &Dataset) -> LnFactorial {
    LnFactorial::new(d.n_rows())
}
