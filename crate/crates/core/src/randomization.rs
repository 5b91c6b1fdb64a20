//! Null-model randomization, empirical p-values and the minP adjustment.
//!
//! Each output dataset comes from its own generator, seeded from the scheme
//! seed and the dataset index, so results do not depend on the number of
//! workers.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::parallel::with_workers;
use crate::rowset::RowSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    ColumnPermutation,
    SwapRandomization,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedMargins {
    ColumnsOnly,
    RowsAndColumns,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationScheme {
    pub kind: SchemeKind,
    pub seed: u64,
    /// Number of randomized datasets.
    pub b: usize,
    /// Attempted swaps per dataset; defaults to ten times the number of ones.
    pub swap_steps: Option<usize>,
}

impl PermutationScheme {
    pub fn new(kind: SchemeKind, b: usize, seed: u64) -> Self {
        PermutationScheme {
            kind,
            seed,
            b,
            swap_steps: None,
        }
    }

    pub fn fixed_margins(&self) -> FixedMargins {
        match self.kind {
            SchemeKind::ColumnPermutation => FixedMargins::ColumnsOnly,
            SchemeKind::SwapRandomization => FixedMargins::RowsAndColumns,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.b == 0 {
            return Err(Error::Config("b must be at least 1".into()));
        }
        if self.swap_steps == Some(0) {
            return Err(Error::Config("swap_steps must be at least 1".into()));
        }
        Ok(())
    }

    fn rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }
}

#[derive(Debug, Clone)]
pub struct Randomized {
    pub datasets: Vec<Dataset>,
    /// True when no swap is possible; `datasets` then holds copies.
    pub degenerate: bool,
}

/// Generates `scheme.b` randomized versions of `d`.
pub fn randomize(d: &Dataset, scheme: &PermutationScheme, workers: Option<usize>) -> Result<Randomized> {
    scheme.validate()?;
    if scheme.kind == SchemeKind::SwapRandomization && !swappable(d) {
        return Ok(Randomized {
            datasets: vec![d.clone(); scheme.b],
            degenerate: true,
        });
    }
    let datasets = with_workers(workers, || {
        (0..scheme.b)
            .into_par_iter()
            .map(|i| {
                let mut rng = scheme.rng(i);
                match scheme.kind {
                    SchemeKind::ColumnPermutation => permute_columns(d, &mut rng),
                    SchemeKind::SwapRandomization => {
                        swap_chain(d, scheme.swap_steps.unwrap_or(10 * d.n_ones()).max(1), &mut rng)
                    }
                }
            })
            .collect()
    });
    Ok(Randomized {
        datasets,
        degenerate: false,
    })
}

/// Whether some 2×2 submatrix has the pattern `(1 0 / 0 1)`: two columns
/// each having a row the other lacks.
pub fn swappable(d: &Dataset) -> bool {
    let cols = d.columns();
    (0..cols.len()).any(|i| {
        (i + 1..cols.len()).any(|j| {
            let common = cols[i].intersection_len(&cols[j]);
            common < cols[i].len() && common < cols[j].len()
        })
    })
}

fn permute_columns(d: &Dataset, rng: &mut ChaCha8Rng) -> Dataset {
    let n = d.n_rows();
    let columns = d
        .freqs()
        .iter()
        .map(|&f| RowSet::from_indices(n, sample(rng, n, f)))
        .collect();
    Dataset::from_columns(n, d.names().to_vec(), columns).expect("same shape as input")
}

fn swap_chain(d: &Dataset, steps: usize, rng: &mut ChaCha8Rng) -> Dataset {
    let n = d.n_rows();
    let mut cells: Vec<RowSet> = (0..d.n_cols()).map(|_| RowSet::empty(n)).collect();
    let mut ones: Vec<(usize, usize)> = Vec::with_capacity(d.n_ones());
    for (c, col) in d.columns().iter().enumerate() {
        for r in col.iter() {
            ones.push((r, c));
            cells[c].insert(r);
        }
    }
    if ones.len() >= 2 {
        for _ in 0..steps {
            // Drawing with replacement keeps the chain lazy, hence aperiodic.
            let i = rng.random_range(0..ones.len());
            let j = rng.random_range(0..ones.len());
            let (r1, c1) = ones[i];
            let (r2, c2) = ones[j];
            if r1 == r2 || c1 == c2 || cells[c2].contains(r1) || cells[c1].contains(r2) {
                continue;
            }
            cells[c1].remove(r1);
            cells[c2].remove(r2);
            cells[c2].insert(r1);
            cells[c1].insert(r2);
            ones[i] = (r1, c2);
            ones[j] = (r2, c1);
        }
    }
    Dataset::from_columns(n, d.names().to_vec(), cells).expect("same shape as input")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalP {
    pub t0: f64,
    pub exceed_count: usize,
    pub b: usize,
    pub p_em: f64,
}

/// `(#{t_i ≥ t0} + 1) / (b + 1)`.
pub fn empirical_p(t0: f64, randomized_stats: &[f64]) -> Result<EmpiricalP> {
    let b = randomized_stats.len();
    if b == 0 {
        return Err(Error::domain("empirical p needs at least one randomized statistic"));
    }
    let exceed_count = randomized_stats.iter().filter(|&&t| t >= t0).count();
    Ok(EmpiricalP {
        t0,
        exceed_count,
        b,
        p_em: (exceed_count + 1) as f64 / (b + 1) as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinPMode {
    SingleStep,
    StepDown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinPResult {
    pub adjusted: Vec<f64>,
    /// Set when `1/(b+1) > alpha`: no hypothesis can reach `alpha`.
    pub underresolved: bool,
}

/// minP adjustment from precomputed null p-values: `null_ps[k][i]` is the
/// p-value of hypothesis `i` on randomized dataset `k`.
pub fn minp_adjust_from_null(raw_ps: &[f64], null_ps: &[Vec<f64>], mode: MinPMode, alpha: f64) -> Result<MinPResult> {
    let m = raw_ps.len();
    let b = null_ps.len();
    if b == 0 {
        return Err(Error::domain("minP needs at least one randomized dataset"));
    }
    if null_ps.iter().any(|row| row.len() != m) {
        return Err(Error::domain("every randomized dataset must score every hypothesis"));
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| raw_ps[i].total_cmp(&raw_ps[j]).then(i.cmp(&j)));
    let frac = |count: usize| (count + 1) as f64 / (b + 1) as f64;
    let mut adjusted = vec![1.0; m];
    match mode {
        MinPMode::SingleStep => {
            let mins: Vec<f64> = null_ps
                .iter()
                .map(|row| row.iter().copied().fold(f64::INFINITY, f64::min))
                .collect();
            for i in 0..m {
                adjusted[i] = frac(mins.iter().filter(|&&q| q <= raw_ps[i]).count());
            }
        }
        MinPMode::StepDown => {
            // Successive minima over the hypotheses at or after each rank.
            let mut suffix_min = vec![f64::INFINITY; b];
            let mut counts = vec![0usize; m];
            for rank in (0..m).rev() {
                let h = order[rank];
                for (k, row) in null_ps.iter().enumerate() {
                    suffix_min[k] = suffix_min[k].min(row[h]);
                }
                counts[rank] = suffix_min.iter().filter(|&&q| q <= raw_ps[h]).count();
            }
            for rank in 0..m {
                adjusted[order[rank]] = frac(counts[rank]);
            }
        }
    }
    let mut running = 0.0f64;
    for &h in &order {
        running = running.max(adjusted[h]).max(raw_ps[h]);
        adjusted[h] = running.min(1.0);
    }
    Ok(MinPResult {
        adjusted,
        underresolved: 1.0 / (b + 1) as f64 > alpha,
    })
}

/// minP adjustment with the null p-values computed by `extractor` on
/// datasets drawn from `scheme`.
pub fn minp_adjust<F>(
    d: &Dataset,
    raw_ps: &[f64],
    scheme: &PermutationScheme,
    workers: Option<usize>,
    extractor: F,
    mode: MinPMode,
    alpha: f64,
) -> Result<MinPResult>
where
    F: Fn(&Dataset) -> Vec<f64> + Sync + Send,
{
    let randomized = randomize(d, scheme, workers)?;
    let null_ps: Vec<Vec<f64>> = with_workers(workers, || randomized.datasets.par_iter().map(&extractor).collect());
    minp_adjust_from_null(raw_ps, &null_ps, mode, alpha)
}
