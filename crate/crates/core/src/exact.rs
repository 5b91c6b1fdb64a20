//! p-values and z-scores of a single dependency rule under the classical
//! sampling models, in both the variable-based and value-based readings.
//!
//! All tail sums are accumulated in log domain; `log_p` is authoritative and
//! `p_value` is its exponential.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logmath::{clamp_ln_p, ln_chi2_1_sf, ln_normal_sf, xlny, LnFactorial, LogSumExp};
use crate::measures::{chi2_2x2, mutual_information_2x2};
use crate::table::ContingencyTable;

/// Default `n` limit for the O(n³) multinomial tail.
pub const DEFAULT_MULTINOMIAL_CAP: u64 = 200;
/// Default `n` limit for the O(n²) double-binomial tail.
pub const DEFAULT_DOUBLE_BINOMIAL_CAP: u64 = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestId {
    FisherPos,
    FisherNeg,
    FisherP0,
    BinomPartial,
    ZPartial,
    BinomComplete,
    ZComplete,
    MultinomialValue,
    DoubleBinomValue,
    Chi2Test,
    MiTest,
}

/// Direction of the tested dependence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Positive,
    Negative,
}

/// How an inherently two-sided χ²-type statistic is turned into a p-value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sidedness {
    TwoSided,
    /// Half the tail when `δ > 0`, one minus half the tail otherwise.
    Positive,
    /// Half the tail when `δ < 0`, one minus half the tail otherwise.
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub test: TestId,
    pub p_value: Option<f64>,
    pub log_p: Option<f64>,
    pub statistic: Option<f64>,
}

impl TestResult {
    fn from_ln_p(test: TestId, ln_p: f64) -> Self {
        let ln_p = clamp_ln_p(ln_p);
        TestResult {
            test,
            p_value: Some(ln_p.exp()),
            log_p: Some(ln_p),
            statistic: None,
        }
    }

    fn with_statistic(mut self, s: f64) -> Self {
        self.statistic = Some(s);
        self
    }

    /// The p-value, or 1 for results that carry none.
    pub fn p(&self) -> f64 {
        self.p_value.unwrap_or(1.0)
    }

    /// The log p-value, or 0 for results that carry none.
    pub fn ln_p(&self) -> f64 {
        self.log_p.unwrap_or(0.0)
    }
}

/// Holds the shared ln-factorial table and the configurable caps of the
/// value-based complete tests.
#[derive(Debug, Clone)]
pub struct ExactTests {
    lf: LnFactorial,
    pub multinomial_cap: u64,
    pub double_binomial_cap: u64,
}

impl ExactTests {
    /// Supports tables with `n ≤ n_max`.
    pub fn new(n_max: usize) -> Self {
        ExactTests {
            lf: LnFactorial::new(n_max),
            multinomial_cap: DEFAULT_MULTINOMIAL_CAP,
            double_binomial_cap: DEFAULT_DOUBLE_BINOMIAL_CAP,
        }
    }

    pub fn ln_factorial(&self) -> &LnFactorial {
        &self.lf
    }

    fn check_n(&self, t: &ContingencyTable) {
        assert!(
            t.n as usize <= self.lf.n_max(),
            "table with n = {} exceeds ln-factorial table size {}",
            t.n,
            self.lf.n_max()
        );
    }

    /// Fisher's exact test. The positive tail sums tables with
    /// `N_XA ≥ fr(XA)`, the negative tail tables with `N_XA ≤ fr(XA)`.
    pub fn fisher_p(&self, t: &ContingencyTable, direction: Direction) -> TestResult {
        TestResult::from_ln_p(
            match direction {
                Direction::Positive => TestId::FisherPos,
                Direction::Negative => TestId::FisherNeg,
            },
            self.ln_fisher(t, direction),
        )
    }

    /// Log of Fisher's p without wrapping it into a [`TestResult`].
    pub fn ln_fisher(&self, t: &ContingencyTable, direction: Direction) -> f64 {
        self.check_n(t);
        let (lo, hi) = match direction {
            Direction::Positive => (t.n_xa, t.max_n_xa()),
            Direction::Negative => (t.min_n_xa(), t.n_xa),
        };
        if (lo, hi) == (t.min_n_xa(), t.max_n_xa()) {
            return 0.0;
        }
        let acc: LogSumExp = (lo..=hi)
            .map(|k| self.lf.ln_hypergeom(t.n, t.n_x, t.n_a, k))
            .collect();
        clamp_ln_p(acc.value())
    }

    /// The point probability of the observed table under the hypergeometric
    /// model, i.e. the first term of Fisher's tail.
    pub fn fisher_p0(&self, t: &ContingencyTable) -> TestResult {
        self.check_n(t);
        TestResult::from_ln_p(TestId::FisherP0, self.lf.ln_hypergeom(t.n, t.n_x, t.n_a, t.n_xa))
    }

    /// Partial evaluation: `N_XA ~ Bin(fr(X), P(A))` on the rows where X
    /// holds.
    pub fn binom_partial_p(&self, t: &ContingencyTable, direction: Direction) -> TestResult {
        self.check_n(t);
        let (ln_pa, ln_qa) = ln_pq(t.n_a, t.n);
        let (lo, hi) = match direction {
            Direction::Positive => (t.n_xa, t.n_x),
            Direction::Negative => (0, t.n_xa),
        };
        if (lo, hi) == (0, t.n_x) {
            return TestResult::from_ln_p(TestId::BinomPartial, 0.0);
        }
        let acc: LogSumExp = (lo..=hi)
            .map(|i| self.lf.ln_choose(t.n_x, i) + xlny(i, ln_pa) + xlny(t.n_x - i, ln_qa))
            .collect();
        TestResult::from_ln_p(TestId::BinomPartial, acc.value())
    }

    /// Complete evaluation with a single binomial:
    /// `N_XA ~ Bin(n, P(X)P(A))`.
    pub fn binom_complete_p(&self, t: &ContingencyTable, direction: Direction) -> TestResult {
        self.check_n(t);
        TestResult::from_ln_p(TestId::BinomComplete, self.ln_binom_complete(t, direction))
    }

    pub(crate) fn ln_binom_complete(&self, t: &ContingencyTable, direction: Direction) -> f64 {
        let n = t.n as f64;
        let p = (t.n_x as f64 * t.n_a as f64) / (n * n);
        let (ln_p, ln_q) = (p.ln(), (-p).ln_1p());
        let (lo, hi) = match direction {
            Direction::Positive => (t.n_xa, t.n),
            Direction::Negative => (0, t.n_xa),
        };
        if (lo, hi) == (0, t.n) {
            return 0.0;
        }
        let acc: LogSumExp = (lo..=hi)
            .map(|i| self.lf.ln_choose(t.n, i) + xlny(i, ln_p) + xlny(t.n - i, ln_q))
            .collect();
        clamp_ln_p(acc.value())
    }

    /// Value-based multinomial tail: the sum over all triplets
    /// `(N_X, N_A, N_XA)` with `N_XA ≥ fr(XA)` and lift `Γ ≥ γ(X, A)`, with
    /// `p_X`, `p_A` at their maximum-likelihood estimates. Equal lift counts
    /// as at least as extreme.
    pub fn multinomial_value_p(&self, t: &ContingencyTable) -> Result<TestResult> {
        if t.n > self.multinomial_cap {
            return Err(Error::Capacity {
                what: "multinomial test sample size",
                limit: self.multinomial_cap as usize,
                requested: t.n as usize,
            });
        }
        self.check_n(t);
        if t.n_xa == 0 {
            return Ok(TestResult::from_ln_p(TestId::MultinomialValue, 0.0));
        }
        let n = t.n;
        let (ln_px, ln_qx) = ln_pq(t.n_x, n);
        let (ln_pa, ln_qa) = ln_pq(t.n_a, n);
        let ln_nfact = self.lf.ln_fact(n);
        // Γ ≥ γ  ⇔  N_XA · fr(X) · fr(A) ≥ fr(XA) · N_X · N_A
        let obs_num = t.n_x as u128 * t.n_a as u128;
        let obs_den = t.n_xa as u128;
        let mut acc = LogSumExp::new();
        for big_x in t.n_xa..=n {
            let x_terms = xlny(big_x, ln_px) + xlny(n - big_x, ln_qx);
            for big_xa in t.n_xa..=big_x {
                let lift_cap = (big_xa as u128 * obs_num) / (obs_den * big_x as u128);
                let hi = (lift_cap.min(u64::MAX as u128) as u64).min(n - big_x + big_xa);
                for big_a in big_xa..=hi {
                    let cells = ln_nfact
                        - self.lf.ln_fact(big_xa)
                        - self.lf.ln_fact(big_x - big_xa)
                        - self.lf.ln_fact(big_a - big_xa)
                        - self.lf.ln_fact(n + big_xa - big_x - big_a);
                    acc.add(cells + x_terms + xlny(big_a, ln_pa) + xlny(n - big_a, ln_qa));
                }
            }
        }
        Ok(TestResult::from_ln_p(TestId::MultinomialValue, acc.value()))
    }

    /// Value-based double-binomial tail with `N_X = fr(X)` fixed: the sum over
    /// pairs `(N_XA, N_A)` with `N_XA ≥ fr(XA)` and `Γ ≥ γ(X, A)`.
    pub fn double_binom_value_p(&self, t: &ContingencyTable) -> Result<TestResult> {
        if t.n > self.double_binomial_cap {
            return Err(Error::Capacity {
                what: "double binomial test sample size",
                limit: self.double_binomial_cap as usize,
                requested: t.n as usize,
            });
        }
        self.check_n(t);
        if t.n_xa == 0 {
            return Ok(TestResult::from_ln_p(TestId::DoubleBinomValue, 0.0));
        }
        let n = t.n;
        let n_not_x = n - t.n_x;
        let (ln_pa, ln_qa) = ln_pq(t.n_a, n);
        let mut acc = LogSumExp::new();
        for big_xa in t.n_xa..=t.n_x {
            // Γ ≥ γ  ⇔  N_XA · fr(A) ≥ fr(XA) · N_A
            let lift_cap = (big_xa as u128 * t.n_a as u128) / t.n_xa as u128;
            let hi = (lift_cap as u64).min(big_xa + n_not_x);
            let head = self.lf.ln_choose(t.n_x, big_xa);
            for big_a in big_xa..=hi {
                acc.add(
                    head + self.lf.ln_choose(n_not_x, big_a - big_xa)
                        + xlny(big_a, ln_pa)
                        + xlny(n - big_a, ln_qa),
                );
            }
        }
        Ok(TestResult::from_ln_p(TestId::DoubleBinomValue, acc.value()))
    }

    /// All tests for one rule, skipping the ones whose preconditions fail.
    pub fn panel(&self, t: &ContingencyTable) -> Vec<TestResult> {
        let mut out = vec![
            self.fisher_p(t, Direction::Positive),
            self.fisher_p(t, Direction::Negative),
            self.fisher_p0(t),
            self.binom_partial_p(t, Direction::Positive),
            self.binom_complete_p(t, Direction::Positive),
        ];
        out.extend(z_partial(t).ok());
        out.extend(z_complete(t, false).ok());
        out.extend(self.multinomial_value_p(t).ok());
        out.extend(self.double_binom_value_p(t).ok());
        out.extend(chi2_p(t, Sidedness::Positive).ok());
        out.extend(mi_p(t, Sidedness::Positive).ok());
        out
    }
}

fn ln_pq(k: u64, n: u64) -> (f64, f64) {
    let p = k as f64 / n as f64;
    (p.ln(), ((n - k) as f64 / n as f64).ln())
}

/// Partial z-score `√n δ / √(P(X)P(A)P(¬A))`, with the upper normal tail
/// as p-value.
pub fn z_partial(t: &ContingencyTable) -> Result<TestResult> {
    if t.n_x == 0 || t.n_a == 0 || t.n_a == t.n {
        return Err(Error::domain("partial z-score needs fr(X) > 0 and 0 < fr(A) < n"));
    }
    let (px, pa) = (t.p_x(), t.p_a());
    let z = (t.n as f64).sqrt() * t.leverage() / (px * pa * (1.0 - pa)).sqrt();
    Ok(TestResult::from_ln_p(TestId::ZPartial, ln_normal_sf(z)).with_statistic(z))
}

/// Complete z-score `√n δ / √(P(X)P(A)(1 − P(X)P(A)))`. With `continuity`,
/// `|fr(XA) − nP(X)P(A)|` is reduced by 0.5 (clipped at zero).
pub fn z_complete(t: &ContingencyTable, continuity: bool) -> Result<TestResult> {
    let n = t.n as f64;
    let pxa = t.p_x() * t.p_a();
    if t.n_x == 0 || t.n_a == 0 || pxa >= 1.0 {
        return Err(Error::domain("complete z-score needs 0 < fr(X)fr(A) < n²"));
    }
    let mut dev = t.n_xa as f64 - n * pxa;
    if continuity {
        dev = dev.signum() * (dev.abs() - 0.5).max(0.0);
    }
    let z = dev / (n * pxa * (1.0 - pxa)).sqrt();
    Ok(TestResult::from_ln_p(TestId::ZComplete, ln_normal_sf(z)).with_statistic(z))
}

fn one_sided(ln_tail: f64, delta: f64, sidedness: Sidedness) -> f64 {
    let favourable = match sidedness {
        Sidedness::TwoSided => return ln_tail,
        Sidedness::Positive => delta > 0.0,
        Sidedness::Negative => delta < 0.0,
    };
    let ln_half = ln_tail - std::f64::consts::LN_2;
    if favourable {
        ln_half
    } else {
        (-ln_half.exp()).ln_1p()
    }
}

/// χ² test of independence (1 degree of freedom).
pub fn chi2_p(t: &ContingencyTable, sidedness: Sidedness) -> Result<TestResult> {
    let stat = chi2_2x2(t, false)?;
    let ln_p = one_sided(ln_chi2_1_sf(stat), t.leverage(), sidedness);
    Ok(TestResult::from_ln_p(TestId::Chi2Test, ln_p).with_statistic(stat))
}

/// G-test: `2n · MI` against χ²(1).
pub fn mi_p(t: &ContingencyTable, sidedness: Sidedness) -> Result<TestResult> {
    if t.n_x == 0 || t.n_x == t.n || t.n_a == 0 || t.n_a == t.n {
        return Err(Error::domain("G-test undefined when a margin is 0 or n"));
    }
    let g = 2.0 * t.n as f64 * mutual_information_2x2(t);
    let ln_p = one_sided(ln_chi2_1_sf(g), t.leverage(), sidedness);
    Ok(TestResult::from_ln_p(TestId::MiTest, ln_p).with_statistic(g))
}
