mod common;

use std::collections::BTreeSet;

use common::*;
use depmine::miner::*;
use depmine::multiple::Method;
use depmine::redundancy::{Interpretation, Verdict};
use depmine::{ContingencyTable, Dataset, Direction, Error, ExactTests, RulePattern, Sign};
use proptest::prelude::*;
use rand::Rng;

fn hd_config() -> MinerConfig {
    MinerConfig {
        consequents: Consequents::Named(vec!["heart_disease".into()]),
        ..MinerConfig::default()
    }
}

type Key = (BTreeSet<String>, Sign);

fn keys(d: &Dataset, r: &MiningReport) -> BTreeSet<Key> {
    r.rules
        .iter()
        .map(|m| (m.rule.antecedent.iter().map(|&i| d.names()[i].clone()).collect(), m.rule.sign))
        .collect()
}

fn key(names: &[&str], sign: Sign) -> Key {
    (names.iter().map(|s| s.to_string()).collect(), sign)
}

#[test]
fn heart_disease_rules() {
    let d = heart_disease();
    let report = mine_rules(&d, &hd_config()).unwrap();
    assert_eq!(report.m, 30);
    let found = keys(&d, &report);
    let frozen: BTreeSet<Key> = [
        key(&["smoking", "female"], Sign::Positive),
        key(&["sports", "stress"], Sign::Negated),
        key(&["sports"], Sign::Negated),
        key(&["sports", "coffee"], Sign::Negated),
        key(&["smoking", "stress"], Sign::Positive),
        key(&["coffee", "stress"], Sign::Positive),
        key(&["smoking"], Sign::Positive),
        key(&["coffee", "female"], Sign::Positive),
        key(&["stress", "female"], Sign::Positive),
    ]
    .into_iter()
    .collect();
    assert_eq!(found, frozen);
    // coffee adds nothing, sports weakens the dependency
    assert!(!found.contains(&key(&["smoking", "coffee"], Sign::Positive)));
    assert!(!found.contains(&key(&["smoking", "sports"], Sign::Positive)));
    assert!(!found.contains(&key(&["female", "sports"], Sign::Negated)));
    let exhaustive = mine_rules_exhaustive(&d, &hd_config()).unwrap();
    assert_eq!(format!("{:?}", report.rules), format!("{:?}", exhaustive.rules));
    assert_eq!(report.m, exhaustive.m);
    let value = mine_rules(&d, &MinerConfig { interpretation: Interpretation::ValueBased, ..hd_config() }).unwrap();
    assert_eq!(keys(&d, &value), frozen);
}

#[test]
fn report_is_sorted_and_bounded() {
    let d = heart_disease();
    let r = mine_rules(&d, &hd_config()).unwrap();
    for w in r.rules.windows(2) {
        assert!(w[0].adjusted_p <= w[1].adjusted_p);
    }
    let top = mine_rules(&d, &MinerConfig { top_k: 3, ..hd_config() }).unwrap();
    assert_eq!(top.rules.len(), 3);
    assert_eq!(format!("{:?}", top.rules), format!("{:?}", &r.rules[..3]));
}

#[test]
fn independent_columns_rarely_yield_rules() {
    let seeds = 40;
    let mut empty = 0;
    for seed in 0..seeds {
        let mut g = rng(1000 + seed);
        let rows: Vec<Vec<bool>> = (0..120).map(|_| (0..6).map(|_| g.random_bool(0.4)).collect()).collect();
        let names = ["a", "b", "c", "d", "e", "f"];
        let d = Dataset::from_rows(&names, &rows).unwrap();
        if mine_rules(&d, &MinerConfig::default()).unwrap().rules.is_empty() {
            empty += 1;
        }
    }
    assert!(empty * 100 >= 95 * seeds, "{empty}/{seeds} empty");
}

#[test]
fn identical_output_across_workers() {
    let d = random_dataset(&mut rng(77), 80, 7);
    for correction in [Correction::Method(Method::Bonferroni), Correction::Method(Method::Bh), Correction::Layered] {
        let cfg = |w| MinerConfig { workers: Some(w), correction, max_antecedent: 3, ..MinerConfig::default() };
        let one = format!("{:?}", mine_rules(&d, &cfg(1)).unwrap().rules);
        for w in [2, 3, 8] {
            assert_eq!(format!("{:?}", mine_rules(&d, &cfg(w)).unwrap().rules), one);
        }
    }
}

#[test]
fn configuration_errors() {
    let d = heart_disease();
    let bad = [
        MinerConfig { alpha: 0.0, ..hd_config() },
        MinerConfig { alpha: 1.0, ..hd_config() },
        MinerConfig { max_antecedent: 0, ..hd_config() },
        MinerConfig { top_k: 0, ..hd_config() },
        MinerConfig { min_freq: Some(5000), ..hd_config() },
        MinerConfig { z_screen: true, ..hd_config() },
        MinerConfig { correction: Correction::Method(Method::WeightedBonferroni), ..hd_config() },
    ];
    for cfg in bad {
        assert!(matches!(mine_rules(&d, &cfg), Err(Error::Config(_))), "{cfg:?}");
    }
    let unknown = MinerConfig { consequents: Consequents::Named(vec!["nope".into()]), ..hd_config() };
    assert!(matches!(mine_rules(&d, &unknown), Err(Error::UnknownAttribute(_))));
    assert!("weighted_bonferroni".parse::<Correction>().is_err());
    assert!("fisher".parse::<MiningTest>().is_ok() && "t".parse::<MiningTest>().is_err());
}

#[test]
fn panel_matches_individual_operations() {
    let d = heart_disease();
    let ex = ExactTests::new(d.n_rows());
    let ids = d.attr_ids(&["smoking", "stress"]).unwrap();
    let hd = d.attr_id("heart_disease").unwrap();
    let rule = RulePattern::new(&d, &ids, hd, Sign::Positive).unwrap();
    let mut capped = ExactTests::new(d.n_rows());
    capped.multinomial_cap = 100;
    assert!(matches!(explain_rule(&capped, &d, &rule, 0.05, false), Err(Error::Capacity { .. })));
    let p = explain_rule(&capped, &d, &rule, 0.05, true).unwrap();
    assert!(p.tests.iter().all(|t| t.test != depmine::TestId::MultinomialValue));
    let mut ex_small = ExactTests::new(d.n_rows());
    ex_small.multinomial_cap = 1000;
    let panel = explain_rule(&ex_small, &d, &rule, 0.05, false).unwrap();
    assert_eq!(panel.rule.table, rule.table);
    let t = &rule.table;
    let get = |id| panel.tests.iter().find(|r| r.test == id).unwrap().ln_p();
    assert_eq!(get(depmine::TestId::FisherPos), ex.fisher_p(t, Direction::Positive).ln_p());
    assert_eq!(get(depmine::TestId::FisherNeg), ex.fisher_p(t, Direction::Negative).ln_p());
    assert_eq!(get(depmine::TestId::BinomComplete), ex.binom_complete_p(t, Direction::Positive).ln_p());
    assert_eq!(get(depmine::TestId::MultinomialValue), ex_small.multinomial_value_p(t).unwrap().ln_p());
    assert_eq!(panel.measures, depmine::measures::all_measures(t));
    assert_eq!(panel.value_based.len(), 2);
    assert_eq!(panel.variable_based.len(), 2);
}

#[test]
fn independence_panel() {
    let d = replicate(&["x", "a"], &[(&[true, true], 25), (&[true, false], 25), (&[false, true], 25), (&[false, false], 25)]);
    let ex = ExactTests::new(100);
    let rule = RulePattern::new(&d, &[0], 1, Sign::Positive).unwrap();
    let panel = explain_rule(&ex, &d, &rule, 0.05, false).unwrap();
    assert_eq!(rule.table.leverage(), 0.0);
    use depmine::TestId::*;
    for t in &panel.tests {
        match t.test {
            ZPartial | ZComplete | Chi2Test | MiTest => assert_eq!(t.p(), 0.5),
            FisherPos | FisherNeg | BinomPartial | BinomComplete => assert!(t.p() > 0.5, "{t:?}"),
            MultinomialValue | DoubleBinomValue => assert!(t.p() > 0.3, "{t:?}"),
            _ => {}
        }
    }
}

fn test_kind() -> impl Strategy<Value = MiningTest> {
    prop_oneof![Just(MiningTest::Fisher), Just(MiningTest::BinomComplete), Just(MiningTest::Chi2), Just(MiningTest::Mi)]
}

fn correction() -> impl Strategy<Value = Correction> {
    prop_oneof![
        Just(Correction::Method(Method::Bonferroni)),
        Just(Correction::Method(Method::Sidak)),
        Just(Correction::Method(Method::Holm)),
        Just(Correction::Method(Method::Hochberg)),
        Just(Correction::Method(Method::Bh)),
        Just(Correction::Method(Method::Bhy)),
        Just(Correction::Layered),
        Just(Correction::None),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reported_rules_are_significant_and_complete(
        seed in any::<u64>(),
        n in 15usize..60,
        k in 3usize..6,
        test in test_kind(),
        correction in correction(),
        value_based in any::<bool>(),
        max_antecedent in 1usize..4,
    ) {
        let d = random_dataset(&mut rng(seed), n, k);
        let cfg = MinerConfig {
            test,
            correction,
            max_antecedent,
            interpretation: if value_based { Interpretation::ValueBased } else { Interpretation::VariableBased },
            ..MinerConfig::default()
        };
        let r = mine_rules(&d, &cfg).unwrap();
        for m in &r.rules {
            prop_assert!(m.adjusted_p <= cfg.alpha);
            prop_assert!(m.raw_p <= m.adjusted_p * (1.0 + 1e-12));
            prop_assert_eq!(m.verdict, Verdict::Productive);
            prop_assert!(m.rule.antecedent.len() <= max_antecedent);
            prop_assert!((m.log_p.exp() - m.raw_p).abs() <= 1e-12 * m.raw_p.max(1e-300));
        }
        let e = mine_rules_exhaustive(&d, &cfg).unwrap();
        prop_assert_eq!(format!("{:?}", r.rules), format!("{:?}", e.rules));
    }

    #[test]
    fn bound_is_below_every_specialization(seed in any::<u64>(), n in 5usize..50, test in test_kind(), xmask in 1usize..16, extra in 1usize..16) {
        let d = random_dataset(&mut rng(seed), n, 5);
        let ex = ExactTests::new(n);
        let a = 4;
        let x: Vec<usize> = (0..4).filter(|i| xmask >> i & 1 == 1).collect();
        let y: Vec<usize> = (0..4).filter(|i| (xmask | extra) >> i & 1 == 1).collect();
        for sign in [Sign::Positive, Sign::Negated] {
            let tx = d.extract_table(&x, a, sign).unwrap();
            let ty = d.extract_table(&y, a, sign).unwrap();
            let bound = ln_p_bound(&ex, &tx, test);
            prop_assert!(bound <= score_ln_p(&ex, &ty, test) + 1e-9, "{} vs {}", bound, score_ln_p(&ex, &ty, test));
        }
    }

    #[test]
    fn fisher_bound_matches_diagonal(n in 2u64..60, seed in any::<u64>()) {
        let t = random_table(&mut rng(seed), n);
        let ex = ExactTests::new(60);
        prop_assume!(t.n_xa > 0);
        let diag = ContingencyTable::new(t.n, t.n_xa, t.n_a, t.n_xa).unwrap();
        prop_assert!(close_ln(ln_p_bound(&ex, &t, MiningTest::Fisher), fisher_ln_p(&diag, true), 1e-9));
    }
}
