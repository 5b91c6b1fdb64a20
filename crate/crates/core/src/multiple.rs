//! Multiple-testing control: adjusted p-values for the classical FWER and
//! FDR procedures, testability filtering, layered critical values,
//! error-rate simulation and hold-out evaluation.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, RulePattern};
use crate::error::{Error, Result};
use crate::exact::{Direction, ExactTests};
use crate::miner::{mine_rules, score_ln_p, MinerConfig};
use crate::rowset::RowSet;
use crate::table::ContingencyTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Bonferroni,
    Sidak,
    Holm,
    Hochberg,
    Bh,
    Bhy,
    WeightedBonferroni,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Bonferroni,
        Method::Sidak,
        Method::Holm,
        Method::Hochberg,
        Method::Bh,
        Method::Bhy,
        Method::WeightedBonferroni,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Bonferroni => "bonferroni",
            Method::Sidak => "sidak",
            Method::Holm => "holm",
            Method::Hochberg => "hochberg",
            Method::Bh => "bh",
            Method::Bhy => "bhy",
            Method::WeightedBonferroni => "weighted_bonferroni",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown correction method '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjustmentResult {
    pub method: Method,
    pub m: u64,
    pub alpha: f64,
    /// Number of rejected hypotheses.
    pub k: usize,
    /// Adjusted p-values in input order.
    pub adjusted_ps: Vec<f64>,
    pub rejected: Vec<bool>,
}

/// `c(m) = Σ_{i=1..m} 1/i`.
pub fn harmonic(m: u64) -> f64 {
    if m <= 1_000_000 {
        (1..=m).rev().map(|i| 1.0 / i as f64).sum()
    } else {
        let x = m as f64;
        x.ln() + 0.577_215_664_901_532_9 + 1.0 / (2.0 * x) - 1.0 / (12.0 * x * x)
    }
}

/// Šidák adjustment `1 − (1 − p)^m`.
pub fn sidak(p: f64, m: u64) -> f64 {
    (-(m as f64 * (-p).ln_1p()).exp_m1()).min(1.0)
}

/// Adjusts a complete family of p-values.
pub fn adjust(raw_ps: &[f64], method: Method, alpha: f64, weights: Option<&[f64]>) -> Result<AdjustmentResult> {
    adjust_with_m(raw_ps, raw_ps.len() as u64, method, alpha, weights)
}

/// Adjusts `raw_ps` as part of a family of `m ≥ raw_ps.len()` hypotheses,
/// the missing ones counting as `p = 1`.
pub fn adjust_with_m(
    raw_ps: &[f64],
    m: u64,
    method: Method,
    alpha: f64,
    weights: Option<&[f64]>,
) -> Result<AdjustmentResult> {
    if let Some(bad) = raw_ps.iter().find(|p| !(**p > 0.0 && **p <= 1.0)) {
        return Err(Error::domain(format!("p-value {bad} outside (0, 1]")));
    }
    if (m as usize) < raw_ps.len() {
        return Err(Error::domain("m is smaller than the number of p-values"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha {alpha} outside (0, 1)")));
    }
    let len = raw_ps.len();
    let mf = m as f64;
    let mut order: Vec<usize> = (0..len).collect();
    order.sort_by(|&i, &j| raw_ps[i].total_cmp(&raw_ps[j]).then(i.cmp(&j)));
    let mut adjusted = vec![1.0; len];
    match method {
        Method::Bonferroni => {
            for (a, &p) in adjusted.iter_mut().zip(raw_ps) {
                *a = (mf * p).min(1.0);
            }
        }
        Method::Sidak => {
            for (a, &p) in adjusted.iter_mut().zip(raw_ps) {
                *a = sidak(p, m);
            }
        }
        Method::WeightedBonferroni => {
            let w = weights.ok_or_else(|| Error::domain("weighted Bonferroni needs weights"))?;
            if w.len() != len || w.iter().any(|&x| x.is_nan() || x < 0.0 || !x.is_finite()) {
                return Err(Error::domain("weights must be one non-negative value per hypothesis"));
            }
            let total: f64 = w.iter().sum();
            if (total - mf).abs() > 1e-9 * mf.max(1.0) {
                return Err(Error::domain(format!("weights sum to {total}, expected {m}")));
            }
            for ((a, &p), &wi) in adjusted.iter_mut().zip(raw_ps).zip(w) {
                *a = if wi == 0.0 { 1.0 } else { (mf * p / wi).min(1.0) };
            }
        }
        Method::Holm => {
            let mut running = 0.0f64;
            for (rank, &i) in order.iter().enumerate() {
                running = running.max((mf - rank as f64) * raw_ps[i]);
                adjusted[i] = running.min(1.0);
            }
        }
        Method::Hochberg | Method::Bh | Method::Bhy => {
            let scale = if method == Method::Bhy { harmonic(m) } else { 1.0 };
            let mut running = f64::INFINITY;
            for (rank, &i) in order.iter().enumerate().rev() {
                let r = rank as f64 + 1.0;
                let term = match method {
                    Method::Hochberg => (mf - r + 1.0) * raw_ps[i],
                    _ => raw_ps[i] * (mf / r),
                };
                running = running.min(term);
                adjusted[i] = (running * scale).min(1.0);
            }
        }
    }
    let rejected: Vec<bool> = adjusted.iter().map(|&a| a <= alpha).collect();
    Ok(AdjustmentResult {
        method,
        m,
        alpha,
        k: rejected.iter().filter(|&&r| r).count(),
        adjusted_ps: adjusted,
        rejected,
    })
}

/// Smallest Fisher p attainable with the given margins: the positive tail at
/// `fr(XA) = min(fr(X), fr(A))`.
pub fn min_attainable_fisher_p(ex: &ExactTests, n: u64, fr_x: u64, fr_a: u64) -> Result<f64> {
    let t = ContingencyTable::new(n, fr_x, fr_a, fr_x.min(fr_a))?;
    Ok(ex.ln_fisher(&t, Direction::Positive).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Testability {
    /// Indices of the testable hypotheses, ascending.
    pub testable: Vec<usize>,
    /// Correction factor to use with the testable set.
    pub m_eff: usize,
    /// Per-hypothesis Bonferroni level `alpha / m_eff`.
    pub level: f64,
}

/// Removes hypotheses that cannot become significant. The correction factor
/// is the smallest `k` such that at most `k` hypotheses have a minimum
/// attainable p-value `p*_i ≤ alpha/k`; those hypotheses are testable.
pub fn testability_filter(p_stars: &[f64], alpha: f64) -> Testability {
    let mut sorted = p_stars.to_vec();
    sorted.sort_by(f64::total_cmp);
    let count_at = |level: f64| sorted.partition_point(|&p| p <= level);
    let mut k = 1usize;
    while count_at(alpha / k as f64) > k {
        k += 1;
    }
    let level = alpha / k as f64;
    Testability {
        testable: (0..p_stars.len()).filter(|&i| p_stars[i] <= level).collect(),
        m_eff: k,
        level,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayeredAlpha {
    pub alpha: f64,
    pub l_max: usize,
    pub s_l: Vec<u64>,
    pub alpha_l: Vec<f64>,
}

/// `alpha_l = alpha / (l_max · S_l)` for levels `1..=l_max`.
pub fn layered_alphas(alpha: f64, l_max: usize, s_l: &[u64]) -> Result<LayeredAlpha> {
    if l_max == 0 || s_l.len() != l_max {
        return Err(Error::domain("need one pattern count per level"));
    }
    if s_l.contains(&0) {
        return Err(Error::domain("every level needs at least one pattern"));
    }
    Ok(LayeredAlpha {
        alpha,
        l_max,
        s_l: s_l.to_vec(),
        alpha_l: s_l.iter().map(|&s| alpha / (l_max as f64 * s as f64)).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRateReport {
    pub trials: usize,
    pub m: usize,
    pub m0: usize,
    /// Total rejections over all trials.
    pub r: usize,
    /// Total false rejections over all trials.
    pub v: usize,
    pub fwer_estimate: f64,
    pub fdr_estimate: f64,
}

/// Monte-Carlo error rates of `method` with `m0` uniform true nulls and
/// `m − m0` false nulls whose p-values are uniform on `(0, alt_scale]`.
pub fn simulate_error_rates(
    method: Method,
    m: usize,
    m0: usize,
    alpha: f64,
    alt_scale: f64,
    trials: usize,
    seed: u64,
) -> Result<ErrorRateReport> {
    if m0 > m || m == 0 {
        return Err(Error::domain("need 0 < m and m0 ≤ m"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut r, mut v, mut any_false, mut fdp_sum) = (0usize, 0usize, 0usize, 0.0f64);
    let mut ps = vec![0.0; m];
    for _ in 0..trials {
        for (i, p) in ps.iter_mut().enumerate() {
            let u: f64 = 1.0 - rng.random::<f64>();
            *p = if i < m0 { u } else { u * alt_scale };
        }
        let res = adjust(&ps, method, alpha, None)?;
        let false_rej = res.rejected[..m0].iter().filter(|&&x| x).count();
        r += res.k;
        v += false_rej;
        if false_rej > 0 {
            any_false += 1;
        }
        if res.k > 0 {
            fdp_sum += false_rej as f64 / res.k as f64;
        }
    }
    Ok(ErrorRateReport {
        trials,
        m,
        m0,
        r,
        v,
        fwer_estimate: any_false as f64 / trials as f64,
        fdr_estimate: fdp_sum / trials as f64,
    })
}

/// Parses whitespace- or comma-separated p-values; `#` starts a comment.
pub fn parse_p_values(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        for tok in body.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
            let p: f64 = tok
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("not a number: '{tok}'")))?;
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::domain(format!("line {}: p-value {tok} outside (0, 1]", i + 1)));
            }
            out.push(p);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoldoutRule {
    /// The rule with its table counted on the hold-out rows.
    pub rule: RulePattern,
    pub exploratory_p: f64,
    pub holdout_p: f64,
    pub adjusted_p: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoldoutReport {
    pub n_exploratory: usize,
    pub n_holdout: usize,
    pub k: usize,
    pub rules: Vec<HoldoutRule>,
}

impl HoldoutReport {
    pub fn survivors(&self) -> impl Iterator<Item = &HoldoutRule> {
        self.rules.iter().filter(|r| r.accepted)
    }
}

/// Seeded row split. With `stratify`, each value of that column is split
/// separately so both halves keep its proportion.
pub fn split_rows(d: &Dataset, split_ratio: f64, seed: u64, stratify: Option<usize>) -> Result<(RowSet, RowSet)> {
    if !(split_ratio > 0.0 && split_ratio < 1.0) {
        return Err(Error::Config(format!("split ratio {split_ratio} outside (0, 1)")));
    }
    let n = d.n_rows();
    let strata: Vec<Vec<usize>> = match stratify {
        None => vec![(0..n).collect()],
        Some(c) => {
            if c >= d.n_cols() {
                return Err(Error::UnknownAttribute(format!("#{c}")));
            }
            let col = d.column(c);
            let (ones, zeros): (Vec<usize>, Vec<usize>) = (0..n).partition(|&r| col.contains(r));
            vec![ones, zeros]
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut explore = RowSet::empty(n);
    for mut rows in strata {
        rand::seq::SliceRandom::shuffle(rows.as_mut_slice(), &mut rng);
        let take = (rows.len() as f64 * split_ratio).round() as usize;
        for &r in &rows[..take] {
            explore.insert(r);
        }
    }
    let holdout = explore.complement();
    Ok((explore, holdout))
}

/// Mines the top `k` rules on a seeded exploratory part, then re-tests them
/// on the hold-out part only, correcting over exactly the `k` selected rules.
#[allow(clippy::too_many_arguments)]
pub fn holdout_evaluate(
    d: &Dataset,
    split_ratio: f64,
    seed: u64,
    cfg: &MinerConfig,
    k: usize,
    method: Method,
    alpha: f64,
    stratify: Option<usize>,
) -> Result<HoldoutReport> {
    let (explore_rows, holdout_rows) = split_rows(d, split_ratio, seed, stratify)?;
    let explore = d.restrict_rows(&explore_rows);
    let holdout = d.restrict_rows(&holdout_rows);
    if holdout.n_rows() == 0 || explore.n_rows() == 0 {
        return Err(Error::domain("split leaves one part empty"));
    }
    let mut mine_cfg = cfg.clone();
    mine_cfg.top_k = k.max(1);
    let mined = if k == 0 { Vec::new() } else { mine_rules(&explore, &mine_cfg)?.rules };
    let ex = ExactTests::new(holdout.n_rows());
    let mut rules = Vec::with_capacity(mined.len());
    let mut ps = Vec::with_capacity(mined.len());
    for m in &mined {
        let rule = RulePattern::new(&holdout, &m.rule.antecedent, m.rule.consequent, m.rule.sign)?;
        let p = score_ln_p(&ex, &rule.table, cfg.test).exp().max(f64::MIN_POSITIVE);
        ps.push(p);
        rules.push((rule, m.raw_p));
    }
    let adj = adjust(&ps, method, alpha, None)?;
    let rules = rules
        .into_iter()
        .enumerate()
        .map(|(i, (rule, exploratory_p))| HoldoutRule {
            rule,
            exploratory_p,
            holdout_p: ps[i],
            adjusted_p: adj.adjusted_ps[i],
            accepted: adj.rejected[i],
        })
        .collect();
    Ok(HoldoutReport {
        n_exploratory: explore.n_rows(),
        n_holdout: holdout.n_rows(),
        k: mined.len(),
        rules,
    })
}
