//! Descriptive strength-of-dependence measures over a 2×2 table.
//!
//! Logarithms are natural, so `2n · MI` is the G-statistic. Empty cells use
//! `0 · ln 0 = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logmath::xlogxy;
use crate::table::ContingencyTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureId {
    Leverage,
    Lift,
    Precision,
    OddsRatio,
    Chi2,
    Chi2Cc,
    MutualInformation,
    JMeasure,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub id: MeasureId,
    pub value: f64,
    /// False when the measure is undefined for the table. `value` then holds
    /// a ranking sentinel and must not be reported as a number.
    pub defined: bool,
}

/// `δ = P(XA) − P(X)P(A)`.
pub fn leverage(t: &ContingencyTable) -> f64 {
    t.leverage()
}

/// `γ = P(XA) / (P(X)P(A))`.
pub fn lift(t: &ContingencyTable) -> Result<f64> {
    if t.n_x == 0 || t.n_a == 0 {
        return Err(Error::domain("lift undefined for a zero margin"));
    }
    Ok((t.n as f64 * t.n_xa as f64) / (t.n_x as f64 * t.n_a as f64))
}

/// `φ = P(A | X)`.
pub fn precision(t: &ContingencyTable) -> Result<f64> {
    if t.n_x == 0 {
        return Err(Error::domain("precision undefined when fr(X) = 0"));
    }
    Ok(t.n_xa as f64 / t.n_x as f64)
}

/// Odds ratio. Undefined (`+∞` sentinel) when `fr(X¬A) · fr(¬XA) = 0`.
pub fn odds_ratio(t: &ContingencyTable) -> MeasureValue {
    let [xa, x_na, nx_a, nx_na] = t.cells().map(|c| c as f64);
    let den = x_na * nx_a;
    if den == 0.0 {
        MeasureValue {
            id: MeasureId::OddsRatio,
            value: f64::INFINITY,
            defined: false,
        }
    } else {
        MeasureValue {
            id: MeasureId::OddsRatio,
            value: xa * nx_na / den,
            defined: true,
        }
    }
}

fn check_margins(t: &ContingencyTable) -> Result<()> {
    if t.n_x == 0 || t.n_x == t.n || t.n_a == 0 || t.n_a == t.n {
        Err(Error::domain("χ² undefined when a margin is 0 or n"))
    } else {
        Ok(())
    }
}

/// χ² of a 2×2 table. With `continuity`, `|δ|` is reduced by `0.5/n` and
/// clipped at zero.
pub fn chi2_2x2(t: &ContingencyTable, continuity: bool) -> Result<f64> {
    check_margins(t)?;
    let n = t.n as f64;
    let mut d = t.leverage().abs();
    if continuity {
        d = (d - 0.5 / n).max(0.0);
    }
    let (px, pa) = (t.p_x(), t.p_a());
    Ok(n * d * d / (px * (1.0 - px) * pa * (1.0 - pa)))
}

/// Mutual information of the indicator variables, in nats.
pub fn mutual_information_2x2(t: &ContingencyTable) -> f64 {
    let n = t.n as f64;
    let (px, pa) = (t.p_x(), t.p_a());
    let [xa, x_na, nx_a, nx_na] = t.cells().map(|c| c as f64 / n);
    let mi = xlogxy(xa, px * pa)
        + xlogxy(x_na, px * (1.0 - pa))
        + xlogxy(nx_a, (1.0 - px) * pa)
        + xlogxy(nx_na, (1.0 - px) * (1.0 - pa));
    mi.max(0.0)
}

/// J-measure of the rule `X → A`, in nats.
pub fn j_measure(t: &ContingencyTable) -> Result<f64> {
    if t.n_x == 0 {
        return Err(Error::domain("J-measure undefined when fr(X) = 0"));
    }
    let n = t.n as f64;
    let (px, pa) = (t.p_x(), t.p_a());
    let xa = t.n_xa as f64 / n;
    let x_na = t.n_x_not_a() as f64 / n;
    Ok(xlogxy(xa, px * pa) + xlogxy(x_na, px * (1.0 - pa)))
}

/// Every measure that is defined for `t`.
pub fn all_measures(t: &ContingencyTable) -> Vec<MeasureValue> {
    let mut out = vec![MeasureValue {
        id: MeasureId::Leverage,
        value: leverage(t),
        defined: true,
    }];
    let mut push = |id, r: Result<f64>| {
        if let Ok(value) = r {
            out.push(MeasureValue {
                id,
                value,
                defined: true,
            });
        }
    };
    push(MeasureId::Lift, lift(t));
    push(MeasureId::Precision, precision(t));
    push(MeasureId::Chi2, chi2_2x2(t, false));
    push(MeasureId::Chi2Cc, chi2_2x2(t, true));
    push(MeasureId::MutualInformation, Ok(mutual_information_2x2(t)));
    push(MeasureId::JMeasure, j_measure(t));
    out.push(odds_ratio(t));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: u64, x: u64, a: u64, xa: u64) -> ContingencyTable {
        ContingencyTable::new(n, x, a, xa).unwrap()
    }

    #[test]
    fn leverage_examples() {
        assert!((leverage(&t(1000, 300, 300, 120)) - 0.030).abs() < 1e-12);
        assert_eq!(leverage(&t(100, 50, 50, 25)), 0.0);
        assert!((leverage(&t(100, 30, 50, 30)) - 0.15).abs() < 1e-12);
    }

    #[test]
    fn lift_examples() {
        assert!((lift(&t(1000, 300, 300, 120)).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(lift(&t(100, 50, 50, 25)).unwrap(), 1.0);
        assert!((lift(&t(100, 60, 50, 50)).unwrap() - 5.0 / 3.0).abs() < 1e-12);
        assert!(lift(&t(10, 0, 5, 0)).is_err());
    }

    #[test]
    fn precision_examples() {
        // sports -> ¬disease: 400 of 500
        assert!((precision(&t(1000, 500, 700, 400)).unwrap() - 0.8).abs() < 1e-12);
        assert_eq!(precision(&t(10, 4, 6, 4)).unwrap(), 1.0);
        assert!(precision(&t(10, 0, 6, 0)).is_err());
    }

    #[test]
    fn odds_ratio_examples() {
        let or = odds_ratio(&t(10, 5, 5, 4));
        assert!(or.defined);
        assert_eq!(or.value, 16.0);
        assert_eq!(odds_ratio(&t(100, 50, 50, 25)).value, 1.0);
        let or = odds_ratio(&t(10, 5, 5, 5));
        assert!(!or.defined);
        assert!(or.value.is_infinite());
    }

    #[test]
    fn chi2_examples() {
        let c = chi2_2x2(&t(1000, 300, 300, 120), false).unwrap();
        assert!((c - 0.9 / 0.0441).abs() < 1e-9);
        assert!((c - 20.408).abs() < 1e-3);
        assert_eq!(chi2_2x2(&t(100, 50, 50, 25), false).unwrap(), 0.0);
        assert!(chi2_2x2(&t(10, 0, 5, 0), false).is_err());
    }

    #[test]
    fn continuity_correction_clips() {
        // |δ| = 0.01 < 0.5/n = 0.05
        let tab = t(10, 5, 5, 3);
        assert_eq!(chi2_2x2(&tab, true).unwrap(), 0.0);
        assert!(chi2_2x2(&tab, false).unwrap() > 0.0);
    }

    #[test]
    fn mutual_information_examples() {
        let mi = mutual_information_2x2(&t(100, 60, 50, 50));
        let expected = 0.5 * (0.5f64 / 0.3).ln() + 0.1 * (0.1f64 / 0.3).ln() + 0.4 * (0.4f64 / 0.2).ln();
        assert!((mi - expected).abs() < 1e-12);
        assert!((mi - 0.422810455).abs() < 1e-9);
        assert_eq!(mutual_information_2x2(&t(100, 50, 50, 25)), 0.0);
    }

    #[test]
    fn j_measure_examples() {
        let jy = j_measure(&t(100, 60, 50, 50)).unwrap();
        assert!((jy - 0.15).abs() < 0.005);
        assert_eq!(j_measure(&t(100, 50, 50, 25)).unwrap(), 0.0);
        let jx = j_measure(&t(100, 30, 50, 30)).unwrap();
        assert!((jx - 0.3 * 2f64.ln()).abs() < 1e-12);
        assert!((jx - 0.208).abs() < 1e-3);
    }
}
