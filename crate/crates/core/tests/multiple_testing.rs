mod common;

use common::*;
use depmine::miner::{Consequents, MinerConfig};
use depmine::multiple::*;
use depmine::{ContingencyTable, Dataset, Error, ExactTests};
use proptest::prelude::*;

#[test]
fn bonferroni_two_tests() {
    let r = adjust(&[0.025, 0.026], Method::Bonferroni, 0.05, None).unwrap();
    assert_eq!(r.rejected, vec![true, false]);
    assert_eq!(r.adjusted_ps, vec![0.05, 0.052]);
}

#[test]
fn holm_and_bh_examples() {
    let holm = adjust(&[0.01, 0.04], Method::Holm, 0.05, None).unwrap();
    assert_eq!(holm.rejected, vec![true, true]);
    let bh = adjust(&[0.01, 0.02, 0.04, 0.9], Method::Bh, 0.05, None).unwrap();
    assert_eq!(bh.k, 2);
    assert_eq!(bh.rejected, vec![true, true, false, false]);
}

#[test]
fn weighted_bonferroni() {
    // thresholds w_i α / m: 0.0375 and 0.0125
    let r = adjust(&[0.03, 0.03], Method::WeightedBonferroni, 0.05, Some(&[1.5, 0.5])).unwrap();
    assert_eq!(r.rejected, vec![true, false]);
    assert!(adjust(&[0.03, 0.03], Method::WeightedBonferroni, 0.05, Some(&[1.5, 1.5])).is_err());
    assert!(adjust(&[0.03, 0.03], Method::WeightedBonferroni, 0.05, Some(&[2.0])).is_err());
    assert!(adjust(&[0.03, 0.03], Method::WeightedBonferroni, 0.05, None).is_err());
}

#[test]
fn input_errors() {
    assert!(matches!(adjust(&[0.0], Method::Bh, 0.05, None), Err(Error::Domain(_))));
    assert!(matches!(adjust(&[1.2], Method::Bh, 0.05, None), Err(Error::Domain(_))));
    assert!(matches!(adjust(&[f64::NAN], Method::Bh, 0.05, None), Err(Error::Domain(_))));
    assert!(adjust(&[0.1], Method::Bh, 1.5, None).is_err());
    assert!("nope".parse::<Method>().is_err());
    assert_eq!("bhy".parse::<Method>().unwrap(), Method::Bhy);
}

#[test]
fn p_value_parsing() {
    assert_eq!(parse_p_values("0.01, 0.02\n0.04 # note\n\n0.9").unwrap(), vec![0.01, 0.02, 0.04, 0.9]);
    assert!(matches!(parse_p_values("0.1\nabc"), Err(Error::Parse { line: 2, .. })));
    assert!(parse_p_values("0").is_err());
    assert!(parse_p_values("").unwrap().is_empty());
}

#[test]
fn layered_levels() {
    let l = layered_alphas(0.05, 2, &[10, 100]).unwrap();
    assert!((l.alpha_l[0] - 0.0025).abs() < 1e-15);
    assert!((l.alpha_l[1] - 0.00025).abs() < 1e-15);
    let one = layered_alphas(0.05, 1, &[40]).unwrap();
    assert!((one.alpha_l[0] - 0.05 / 40.0).abs() < 1e-15);
    assert!(layered_alphas(0.05, 2, &[10]).is_err());
    assert!(layered_alphas(0.05, 1, &[0]).is_err());
}

#[test]
fn minimum_attainable_p() {
    let ex = ExactTests::new(100);
    let p = min_attainable_fisher_p(&ex, 20, 10, 4).unwrap();
    assert!((p - 0.043).abs() < 5e-4);
    assert_eq!(min_attainable_fisher_p(&ex, 20, 10, 20).unwrap(), 1.0);
    for n in 1..=10u64 {
        for fx in 0..=n {
            for fa in 0..=n {
                let got = min_attainable_fisher_p(&ex, n, fx, fa).unwrap();
                let want = min_attainable_oracle(n, fx, fa);
                assert!((got.ln() - want.ln()).abs() <= 1e-9 * want.ln().abs().max(1.0), "{n} {fx} {fa}");
            }
        }
    }
}

#[test]
fn testability_examples() {
    let p = 0.0433;
    let one = testability_filter(&[p], 0.05);
    assert_eq!(one.testable, vec![0]);
    assert!(testability_filter(&[p, p], 0.05).testable.is_empty());
    assert!(testability_filter(&[], 0.05).testable.is_empty());
}

/// Smallest `k` with at most `k` hypotheses at `p* ≤ alpha/k`, found by
/// scanning every candidate.
fn testable_oracle(p_stars: &[f64], alpha: f64) -> (usize, Vec<usize>) {
    for k in 1..=p_stars.len().max(1) {
        let level = alpha / k as f64;
        let set: Vec<usize> = (0..p_stars.len()).filter(|&i| p_stars[i] <= level).collect();
        if set.len() <= k {
            return (k, set);
        }
    }
    unreachable!("k = m always qualifies")
}

fn p_list() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![0.00001f64..0.05, 0.05f64..=1.0, Just(1.0), Just(0.01)], 1..40)
}

proptest! {
    #[test]
    fn adjusted_values_are_consistent(ps in p_list(), alpha in 0.001f64..0.5) {
        for method in [Method::Bonferroni, Method::Sidak, Method::Holm, Method::Hochberg, Method::Bh, Method::Bhy] {
            let r = adjust(&ps, method, alpha, None).unwrap();
            prop_assert_eq!(r.m, ps.len() as u64);
            prop_assert_eq!(r.k, r.rejected.iter().filter(|&&x| x).count());
            for i in 0..ps.len() {
                let a = r.adjusted_ps[i];
                prop_assert!(a > 0.0 && a <= 1.0);
                prop_assert!(a >= ps[i] * (1.0 - 1e-12));
                prop_assert_eq!(r.rejected[i], a <= alpha);
                for j in 0..ps.len() {
                    if ps[i] < ps[j] {
                        prop_assert!(r.adjusted_ps[i] <= r.adjusted_ps[j], "{} not monotone", method);
                        // never reject j while retaining a smaller i
                        prop_assert!(!(r.rejected[j] && !r.rejected[i]));
                    }
                }
            }
        }
    }

    #[test]
    fn dominance_chain(ps in p_list()) {
        let get = |m| adjust(&ps, m, 0.05, None).unwrap().adjusted_ps;
        let (bon, holm, hoch, bh) = (get(Method::Bonferroni), get(Method::Holm), get(Method::Hochberg), get(Method::Bh));
        let sidak = get(Method::Sidak);
        for i in 0..ps.len() {
            prop_assert!(bon[i] >= holm[i] && holm[i] >= hoch[i] && hoch[i] >= bh[i]);
            prop_assert!(sidak[i] <= bon[i]);
        }
    }

    #[test]
    fn bhy_scales_bh(ps in p_list()) {
        let m = ps.len() as u64;
        let c: f64 = (1..=m).map(|i| 1.0 / i as f64).sum();
        prop_assert!((harmonic(m) - c).abs() < 1e-12);
        let bh = adjust(&ps, Method::Bh, 0.05, None).unwrap().adjusted_ps;
        let bhy = adjust(&ps, Method::Bhy, 0.05, None).unwrap().adjusted_ps;
        for (a, b) in bh.iter().zip(&bhy) {
            prop_assert!((b - (a * c).min(1.0)).abs() <= 1e-12);
        }
    }

    #[test]
    fn sidak_formula(p in 0.0001f64..1.0, m in 1u64..500) {
        let want = 1.0 - (1.0 - p).powf(m as f64);
        prop_assert!((sidak(p, m) - want).abs() < 1e-9);
        prop_assert!(sidak(p, m) <= (m as f64 * p).min(1.0) + 1e-15);
    }

    #[test]
    fn layered_budget_is_alpha(alpha in 0.001f64..0.5, s in prop::collection::vec(1u64..10_000, 1..6)) {
        let l = layered_alphas(alpha, s.len(), &s).unwrap();
        let spent: f64 = l.alpha_l.iter().zip(&s).map(|(a, &c)| a * c as f64).sum();
        prop_assert!((spent - alpha).abs() <= 1e-12 * alpha);
    }

    #[test]
    fn testability_matches_scan(ps in prop::collection::vec(prop_oneof![0.0f64..0.06, 0.0f64..1.0], 1..30), alpha in 0.01f64..0.2) {
        let t = testability_filter(&ps, alpha);
        let (k, set) = testable_oracle(&ps, alpha);
        prop_assert_eq!(t.m_eff, k);
        prop_assert_eq!(t.testable, set);
        prop_assert!((t.level - alpha / k as f64).abs() < 1e-15);
    }
}

fn rule_dataset(seed: u64, n: usize, strength: f64) -> Dataset {
    use rand::Rng;
    let mut g = rng(seed);
    let rows: Vec<Vec<bool>> = (0..n)
        .map(|_| {
            let a = g.random_bool(0.4);
            let t = if a { g.random_bool(strength) } else { g.random_bool(0.15) };
            vec![a, g.random_bool(0.5), g.random_bool(0.3), t]
        })
        .collect();
    Dataset::from_rows(&["a", "b", "c", "t"], &rows).unwrap()
}

fn target_config() -> MinerConfig {
    MinerConfig {
        consequents: Consequents::Named(vec!["t".into()]),
        allow_negated_consequent: false,
        max_antecedent: 1,
        ..MinerConfig::default()
    }
}

#[test]
fn holdout_with_one_rule_is_uncorrected() {
    let d = rule_dataset(1, 200, 0.9);
    let r = holdout_evaluate(&d, 0.5, 3, &target_config(), 1, Method::Bonferroni, 0.05, None).unwrap();
    assert_eq!(r.k, 1);
    assert_eq!(r.n_exploratory + r.n_holdout, 200);
    let only = &r.rules[0];
    assert_eq!(only.adjusted_p, only.holdout_p);
    assert_eq!(only.accepted, only.holdout_p <= 0.05);
    let t = &only.rule.table;
    assert_eq!(t.n as usize, r.n_holdout);
}

#[test]
fn holdout_keeps_a_planted_rule() {
    let mut survived = 0;
    for seed in 0..20 {
        let d = rule_dataset(100 + seed, 300, 0.9);
        let r = holdout_evaluate(&d, 0.5, seed, &target_config(), 3, Method::Bonferroni, 0.05, None).unwrap();
        if r.survivors().any(|h| h.rule.antecedent == vec![0]) {
            survived += 1;
        }
    }
    assert!(survived >= 19, "planted rule survived {survived}/20");
}

#[test]
fn holdout_rejects_an_exploratory_only_pattern() {
    let n = 200;
    let seed = 5;
    let shape = Dataset::from_rows(&["x"], &vec![vec![false]; n]).unwrap();
    let (explore, _) = split_rows(&shape, 0.5, seed, None).unwrap();
    // a and t coincide on the exploratory rows and never co-occur elsewhere
    let rows: Vec<Vec<bool>> = (0..n)
        .map(|r| {
            let on = r % 2 == 0;
            if explore.contains(r) {
                vec![on, r % 3 == 0, on]
            } else {
                vec![on, r % 3 == 0, !on]
            }
        })
        .collect();
    let d = Dataset::from_rows(&["a", "b", "t"], &rows).unwrap();
    let ex = ExactTests::new(n);
    let holdout = d.restrict_rows(&explore.complement());
    let t = holdout.extract_table(&[0], 2, depmine::Sign::Positive).unwrap();
    assert_eq!(t.n_xa, 0);
    let r = holdout_evaluate(&d, 0.5, seed, &target_config(), 2, Method::Bonferroni, 0.05, None).unwrap();
    let mined = r.rules.iter().find(|h| h.rule.antecedent == vec![0]).expect("mined on the exploratory part");
    assert!(mined.exploratory_p < 1e-10);
    assert!(!mined.accepted);
    assert_eq!(mined.holdout_p, ex.fisher_p(&t, depmine::Direction::Positive).p());
}

#[test]
fn split_is_seeded_and_stratified() {
    let d = rule_dataset(9, 101, 0.8);
    let (a, b) = split_rows(&d, 0.3, 7, None).unwrap();
    let (a2, _) = split_rows(&d, 0.3, 7, None).unwrap();
    assert_eq!(a, a2);
    assert_eq!(a.len() + b.len(), 101);
    assert_eq!(a.intersection_len(&b), 0);
    let (s, _) = split_rows(&d, 0.5, 7, Some(3)).unwrap();
    let ones = d.column(3).len();
    assert_eq!(s.intersection_len(d.column(3)), (ones as f64 * 0.5).round() as usize);
    assert!(matches!(split_rows(&d, 1.0, 7, None), Err(Error::Config(_))));
}

#[test]
fn simulated_error_rates() {
    let bon = simulate_error_rates(Method::Bonferroni, 50, 50, 0.05, 1.0, 1000, 1).unwrap();
    assert!(bon.v <= bon.r && bon.m0 == 50);
    // FWER at most alpha, three binomial standard errors of slack
    let se = (0.05f64 * 0.95 / 1000.0).sqrt();
    assert!(bon.fwer_estimate <= 0.05 + 3.0 * se);
    let bh = simulate_error_rates(Method::Bh, 50, 40, 0.05, 0.001, 1000, 2).unwrap();
    assert!(bh.fdr_estimate <= 0.05 * 40.0 / 50.0 + 3.0 * se);
    assert!(simulate_error_rates(Method::Bh, 5, 6, 0.05, 1.0, 10, 0).is_err());
}

#[test]
fn tables_for_min_attainable_are_extreme() {
    let ex = ExactTests::new(50);
    let t = ContingencyTable::new(30, 8, 12, 8).unwrap();
    let p = min_attainable_fisher_p(&ex, 30, 8, 12).unwrap();
    assert!((p.ln() - fisher_ln_p(&t, true)).abs() < 1e-9);
}
