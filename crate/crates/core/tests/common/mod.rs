//! Independent reference implementations built on exact integer arithmetic
//! and direct row counting, plus shared fixtures.

#![allow(dead_code)]

use depmine::{ContingencyTable, Dataset};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FIXTURE_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");

pub fn heart_disease() -> Dataset {
    let bytes = std::fs::read(format!("{FIXTURE_DIR}/heart_disease.csv")).expect("fixture");
    Dataset::parse_csv01(&bytes).expect("fixture parses")
}

/// Natural log of a positive big integer.
pub fn big_ln(b: &BigUint) -> f64 {
    assert!(!b.is_zero());
    let bits = b.bits();
    if bits <= 1000 {
        return b.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (b >> shift).to_f64().expect("finite");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn big_pow(base: u64, e: u64) -> BigUint {
    num_traits::pow(BigUint::from(base), e as usize)
}

pub fn factorials(n: u64) -> Vec<BigUint> {
    let mut out = vec![BigUint::one()];
    for i in 1..=n {
        let next = out.last().unwrap() * BigUint::from(i);
        out.push(next);
    }
    out
}

pub fn choose(f: &[BigUint], n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    &f[n as usize] / (&f[k as usize] * &f[(n - k) as usize])
}

/// Hypergeometric tail by exact summation: tables with `N_XA ≥ n_xa` when
/// `upper`, otherwise `N_XA ≤ n_xa`.
pub fn fisher_ln_p(t: &ContingencyTable, upper: bool) -> f64 {
    let f = factorials(t.n);
    let mut num = BigUint::zero();
    for k in 0..=t.n_x.min(t.n_a) {
        if (upper && k < t.n_xa) || (!upper && k > t.n_xa) {
            continue;
        }
        if t.n_a - k > t.n - t.n_x {
            continue;
        }
        num += choose(&f, t.n_x, k) * choose(&f, t.n - t.n_x, t.n_a - k);
    }
    big_ln(&num) - big_ln(&choose(&f, t.n, t.n_a))
}

/// Binomial coefficients `C(n, k)` for `n ≤ 60`, exact in `u128`.
pub fn pascal() -> Vec<Vec<u128>> {
    let mut rows: Vec<Vec<u128>> = vec![vec![1]];
    for n in 1..=60usize {
        let prev = &rows[n - 1];
        let row: Vec<u128> = (0..=n)
            .map(|k| if k == 0 || k == n { 1 } else { prev[k - 1] + prev[k] })
            .collect();
        rows.push(row);
    }
    rows
}

/// Multinomial value-based tail by enumerating all four-cell tables, grouped
/// by their margins `(N_X, N_A)`: the multinomial coefficient factors as
/// `C(n, N_X) C(N_X, N_XA) C(n − N_X, N_A − N_XA)`.
pub fn multinomial_ln_p(t: &ContingencyTable) -> f64 {
    let n = t.n;
    assert!(n <= 60);
    let c = pascal();
    let (fx, fa, fxa) = (t.n_x as u128, t.n_a as u128, t.n_xa as u128);
    let px: Vec<BigUint> = (0..=n).map(|e| big_pow(t.n_x, e)).collect();
    let qx: Vec<BigUint> = (0..=n).map(|e| big_pow(n - t.n_x, e)).collect();
    let pa: Vec<BigUint> = (0..=n).map(|e| big_pow(t.n_a, e)).collect();
    let qa: Vec<BigUint> = (0..=n).map(|e| big_pow(n - t.n_a, e)).collect();
    let mut num = BigUint::zero();
    for bx in 0..=n {
        let x_part = BigUint::from(c[n as usize][bx as usize]) * &px[bx as usize] * &qx[(n - bx) as usize];
        for ba in 0..=n {
            let mut inner: u128 = 0;
            for c1 in 0..=bx.min(ba) {
                let c3 = ba - c1;
                if c3 > n - bx || c1 < t.n_xa {
                    continue;
                }
                if (c1 as u128) * fx * fa < fxa * bx as u128 * ba as u128 {
                    continue;
                }
                inner += c[bx as usize][c1 as usize] * c[(n - bx) as usize][c3 as usize];
            }
            if inner > 0 {
                num += BigUint::from(inner) * &x_part * &pa[ba as usize] * &qa[(n - ba) as usize];
            }
        }
    }
    if num.is_zero() {
        return f64::NEG_INFINITY;
    }
    big_ln(&num) - 2.0 * n as f64 * (n as f64).ln()
}

/// Double-binomial value-based tail with `N_X` fixed, by enumerating the
/// two binomial counts.
pub fn double_binom_ln_p(t: &ContingencyTable) -> f64 {
    let n = t.n;
    let f = factorials(n);
    let mut num = BigUint::zero();
    for c1 in 0..=t.n_x {
        for c3 in 0..=n - t.n_x {
            let ba = c1 + c3;
            if c1 < t.n_xa {
                continue;
            }
            if (c1 as u128) * (t.n_a as u128) < (t.n_xa as u128) * (ba as u128) {
                continue;
            }
            num += choose(&f, t.n_x, c1)
                * choose(&f, n - t.n_x, c3)
                * big_pow(t.n_a, ba)
                * big_pow(n - t.n_a, n - ba);
        }
    }
    big_ln(&num) - n as f64 * (n as f64).ln()
}

/// χ² of an itemset against the product of its singleton margins, from
/// rows counted directly, with its χ²(1) upper tail.
pub fn itemset_chi2_oracle(d: &Dataset, x: &[usize]) -> (f64, f64) {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let n = d.n_rows();
    let m = x.len();
    let rows = d.rows();
    let mut counts = vec![0u64; 1 << m];
    let mut freqs = vec![0u64; m];
    for r in &rows {
        let mut mask = 0usize;
        for (i, a) in x.iter().enumerate() {
            if r.contains(a) {
                mask |= 1 << i;
                freqs[i] += 1;
            }
        }
        counts[mask] += 1;
    }
    let nf = n as f64;
    let mut stat = 0.0;
    for (mask, &obs) in counts.iter().enumerate() {
        let mut e = nf;
        for (i, &fi) in freqs.iter().enumerate() {
            e *= if mask >> i & 1 == 1 { fi as f64 / nf } else { 1.0 - fi as f64 / nf };
        }
        stat += (obs as f64 - e).powi(2) / e;
    }
    (stat, ChiSquared::new(1.0).unwrap().sf(stat))
}

/// Row-counted `(n, n_x, n_a, n_xa)` of `x → a` restricted to `rows`.
pub fn count_table(d: &Dataset, rows: &[usize], x: impl Fn(&[usize]) -> bool, a: impl Fn(&[usize]) -> bool) -> ContingencyTable {
    let all = d.rows();
    let (mut nx, mut na, mut nxa) = (0, 0, 0);
    for &r in rows {
        let (hx, ha) = (x(&all[r]), a(&all[r]));
        nx += hx as u64;
        na += ha as u64;
        nxa += (hx && ha) as u64;
    }
    ContingencyTable::new(rows.len() as u64, nx, na, nxa).unwrap()
}

pub fn close_ln(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * b.abs().max(1.0)
}

/// Every feasible table with `1 ≤ n ≤ n_max`.
pub fn all_tables(n_max: u64) -> Vec<ContingencyTable> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for nx in 0..=n {
            for na in 0..=n {
                for nxa in (nx + na).saturating_sub(n)..=nx.min(na) {
                    out.push(ContingencyTable::new(n, nx, na, nxa).unwrap());
                }
            }
        }
    }
    out
}

pub fn random_table(rng: &mut ChaCha8Rng, n_max: u64) -> ContingencyTable {
    let n = rng.random_range(1..=n_max);
    let nx = rng.random_range(0..=n);
    let na = rng.random_range(0..=n);
    let lo = (nx + na).saturating_sub(n);
    let nxa = rng.random_range(lo..=nx.min(na));
    ContingencyTable::new(n, nx, na, nxa).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random dataset with a few correlated columns so that mining finds rules.
pub fn random_dataset(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Dataset {
    let names: Vec<String> = (0..k).map(|i| format!("c{i}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let density: Vec<f64> = (0..k).map(|_| rng.random_range(0.15..0.7)).collect();
    let rows: Vec<Vec<bool>> = (0..n)
        .map(|_| {
            let latent = rng.random_bool(0.5);
            (0..k)
                .map(|c| {
                    if c % 3 == 0 {
                        rng.random_bool(density[c])
                    } else if latent {
                        rng.random_bool(0.85)
                    } else {
                        rng.random_bool(density[c] * 0.5)
                    }
                })
                .collect()
        })
        .collect();
    Dataset::from_rows(&names, &rows).unwrap()
}

/// A dataset with the given number of rows for each listed pattern.
pub fn replicate(names: &[&str], pattern: &[(&[bool], usize)]) -> Dataset {
    let rows: Vec<Vec<bool>> = pattern.iter().flat_map(|(r, c)| std::iter::repeat_n(r.to_vec(), *c)).collect();
    Dataset::from_rows(names, &rows).unwrap()
}

/// Minimum attainable positive-tail Fisher p by enumerating every table
/// with the given margins.
pub fn min_attainable_oracle(n: u64, fx: u64, fa: u64) -> f64 {
    let lo = (fx + fa).saturating_sub(n);
    let hi = fx.min(fa);
    (lo..=hi)
        .map(|k| fisher_ln_p(&ContingencyTable::new(n, fx, fa, k).unwrap(), true))
        .fold(0.0f64, f64::min)
        .exp()
}
