//! Log-domain numerical substrate: ln-factorial table, log-sum-exp and
//! tail probabilities of the normal and χ²(1) distributions.

use statrs::function::erf::erfc;

/// Table of `ln(k!)` for `k = 0..=n_max`, built once and shared read-only.
#[derive(Debug, Clone)]
pub struct LnFactorial {
    table: Vec<f64>,
}

impl LnFactorial {
    pub fn new(n_max: usize) -> Self {
        let mut table = Vec::with_capacity(n_max + 1);
        table.push(0.0);
        let mut acc = 0.0f64;
        for k in 1..=n_max {
            acc += (k as f64).ln();
            table.push(acc);
        }
        LnFactorial { table }
    }

    pub fn n_max(&self) -> usize {
        self.table.len() - 1
    }

    /// `ln(k!)`. Panics when `k` exceeds the table.
    #[inline]
    pub fn ln_fact(&self, k: u64) -> f64 {
        self.table[k as usize]
    }

    /// `ln C(n, k)`; `-∞` when `k > n`.
    #[inline]
    pub fn ln_choose(&self, n: u64, k: u64) -> f64 {
        if k > n {
            f64::NEG_INFINITY
        } else {
            self.table[n as usize] - self.table[k as usize] - self.table[(n - k) as usize]
        }
    }

    /// Log of the hypergeometric point probability of observing `k`
    /// successes in a draw of `n_x` out of `n` items with `n_a` successes.
    #[inline]
    pub fn ln_hypergeom(&self, n: u64, n_x: u64, n_a: u64, k: u64) -> f64 {
        self.ln_choose(n_x, k) + self.ln_choose(n - n_x, n_a - k) - self.ln_choose(n, n_a)
    }
}

/// `k · ln(p)` with the convention `0 · ln 0 = 0`.
#[inline]
pub fn xlny(k: u64, ln_p: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * ln_p
    }
}

/// `x · ln(x / y)` with `0 · ln(0 / y) = 0`.
#[inline]
pub fn xlogxy(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (x / y).ln()
    }
}

/// Streaming, numerically stable `ln Σ exp(t_i)`.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    scaled: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        LogSumExp {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }
}

impl LogSumExp {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, t: f64) {
        if t == f64::NEG_INFINITY {
            return;
        }
        if t <= self.max {
            self.scaled += (t - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - t).exp() + 1.0;
            self.max = t;
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

impl FromIterator<f64> for LogSumExp {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = LogSumExp::new();
        for t in iter {
            acc.add(t);
        }
        acc
    }
}

/// `ln P(Z ≥ z)` for a standard normal `Z`.
pub fn ln_normal_sf(z: f64) -> f64 {
    if z < 25.0 {
        (0.5 * erfc(z / std::f64::consts::SQRT_2)).ln()
    } else {
        // Asymptotic expansion of the Mills ratio; erfc underflows here.
        let z2 = z * z;
        -0.5 * z2 - (z * (2.0 * std::f64::consts::PI).sqrt()).ln() + (1.0 - 1.0 / z2 + 3.0 / (z2 * z2)).ln()
    }
}

/// `ln P(χ²₁ ≥ x)`.
pub fn ln_chi2_1_sf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        // P(χ²₁ ≥ x) = P(|Z| ≥ √x) = 2 P(Z ≥ √x)
        std::f64::consts::LN_2 + ln_normal_sf(x.sqrt())
    }
}

/// Clamps a log-probability that drifted above zero through rounding.
#[inline]
pub fn clamp_ln_p(ln_p: f64) -> f64 {
    ln_p.min(0.0)
}
