//! `depmine`: mine and evaluate statistically significant dependency
//! patterns in binary data.

mod output;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use depmine::data::DEFAULT_MAX_CELL_ATTRS;
use depmine::itemsets::{itemset_binom_p, itemset_chi2, self_sufficiency, ProductivityStatus};
use depmine::miner::{
    explain_rule, mine_rules, score_ln_p, Consequents, Correction, MinerConfig, MiningTest,
};
use depmine::multiple::{adjust_with_m, holdout_evaluate, parse_p_values, Method};
use depmine::randomization::{empirical_p, minp_adjust_from_null, randomize, MinPMode, PermutationScheme, SchemeKind};
use depmine::redundancy::{overall_verdict, Interpretation, JudgeOptions};
use depmine::{parse_rule_spec, Dataset, Error, ExactTests, Format, RulePattern, TestId};
use serde_json::json;
use sha2::{Digest, Sha256};

use output::{sci, verdict_name, InputInfo, Provenance, Report, Row, Section};

#[derive(Parser, Debug)]
#[command(name = "depmine", version, about = "Statistically sound dependency rule discovery in binary data")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Tsv)]
    output: OutputFormat,

    /// Seed for every random choice; recorded in the output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "DEPMINE_WORKERS")]
    workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mine significant, non-superfluous dependency rules.
    Mine {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        miner: MinerArgs,
    },
    /// Evaluate one rule under every test and both interpretations.
    EvalRule {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Fail instead of skipping tests whose enumeration exceeds its cap.
        #[arg(long)]
        strict_capacity: bool,
        #[arg(long)]
        multinomial_cap: Option<u64>,
        #[arg(long)]
        double_binomial_cap: Option<u64>,
    },
    /// Evaluate a dependency set: bipartitions, redundancy and productivity
    /// outside its supersets.
    EvalSet {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated attribute names.
        #[arg(long, value_delimiter = ',', required = true)]
        items: Vec<String>,
        /// A known superset, comma-separated; repeatable.
        #[arg(long = "superset")]
        supersets: Vec<String>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_CELL_ATTRS)]
        max_attrs: usize,
    },
    /// Draw randomized datasets and compute empirical and minP-adjusted
    /// p-values for the given rules.
    Randomize {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Scheme::Swap)]
        scheme: Scheme,
        /// Number of randomized datasets.
        #[arg(long, default_value_t = 999)]
        b: usize,
        /// Swap attempts per dataset (default: a multiple of the number of ones).
        #[arg(long)]
        swap_steps: Option<usize>,
        /// Rule to evaluate, e.g. `smoking, stress -> heart`; repeatable.
        #[arg(long = "rule")]
        rules: Vec<String>,
        #[arg(long, default_value = "fisher")]
        test: MiningTest,
        #[arg(long, value_enum, default_value_t = MinP::StepDown)]
        minp: MinP,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Write every randomized dataset into this directory.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Adjust a list of p-values for multiple testing.
    Adjust {
        /// File of whitespace- or comma-separated p-values; `-` reads stdin.
        #[arg(default_value = "-")]
        file: String,
        #[arg(long, default_value = "bonferroni")]
        method: Method,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Family size when larger than the number of listed p-values.
        #[arg(long)]
        m: Option<u64>,
        /// Comma-separated weights for weighted Bonferroni.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
    },
    /// Mine on an exploratory split and re-test on the hold-out split.
    Holdout {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        miner: MinerArgs,
        /// Fraction of rows used for exploration.
        #[arg(long, default_value_t = 0.5)]
        split_ratio: f64,
        /// Number of rules carried to the hold-out test.
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value = "holm")]
        method: Method,
        /// Keep the proportion of this attribute equal in both splits.
        #[arg(long)]
        stratify: Option<String>,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Dataset path; `-` reads stdin.
    input: String,
    /// Dataset format (default: csv01 for `.csv` files, transactions otherwise).
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct RuleArgs {
    /// Rule such as `smoking, stress -> !heart`.
    #[arg(long, conflicts_with_all = ["antecedent", "consequent"])]
    rule: Option<String>,
    /// Comma-separated antecedent attributes.
    #[arg(long, value_delimiter = ',', requires = "consequent")]
    antecedent: Vec<String>,
    /// Consequent attribute; prefix with `!` to negate.
    #[arg(long, requires = "antecedent")]
    consequent: Option<String>,
}

#[derive(Args, Debug)]
struct MinerArgs {
    #[arg(long, default_value = "fisher")]
    test: MiningTest,
    #[arg(long, value_enum, default_value_t = Interp::Variable)]
    interpretation: Interp,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value = "bonferroni")]
    correction: Correction,
    #[arg(long, default_value_t = 2)]
    max_antecedent: usize,
    /// Restrict consequents to these attributes; repeatable or comma-separated.
    #[arg(long = "consequent", value_delimiter = ',')]
    consequents: Vec<String>,
    /// Only mine rules with a positive consequent.
    #[arg(long)]
    no_negated: bool,
    #[arg(long, default_value_t = 100)]
    top_k: usize,
    #[arg(long)]
    min_freq: Option<usize>,
    /// Screen complete binomial tests with the normal approximation.
    #[arg(long)]
    z_screen: bool,
    /// Count every declared hypothesis instead of only the testable ones.
    #[arg(long)]
    no_testability: bool,
    /// Compare against every proper generalization, not only the immediate ones.
    #[arg(long)]
    all_subsets: bool,
    /// Skip the exact improvement test when Fisher's p already decides.
    #[arg(long)]
    shortcut: bool,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OutputFormat {
    Tsv,
    Json,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Interp {
    Variable,
    Value,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Scheme {
    Column,
    Swap,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum MinP {
    SingleStep,
    StepDown,
}

impl MinerArgs {
    fn config(&self, seed: u64, workers: Option<usize>) -> MinerConfig {
        MinerConfig {
            test: self.test,
            interpretation: match self.interpretation {
                Interp::Variable => Interpretation::VariableBased,
                Interp::Value => Interpretation::ValueBased,
            },
            max_antecedent: self.max_antecedent,
            consequents: if self.consequents.is_empty() {
                Consequents::All
            } else {
                Consequents::Named(self.consequents.clone())
            },
            allow_negated_consequent: !self.no_negated,
            alpha: self.alpha,
            correction: self.correction,
            top_k: self.top_k,
            min_freq: self.min_freq,
            seed,
            workers,
            judge: JudgeOptions {
                all_subsets: self.all_subsets,
                shortcut: self.shortcut,
            },
            z_screen: self.z_screen,
            testability: !self.no_testability,
        }
    }
}

fn read_source(path: &str) -> Result<Vec<u8>, Error> {
    if path == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        std::fs::read(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{path}: {e}"))))
    }
}

fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn load(input: &InputArgs) -> Result<(Dataset, InputInfo), Error> {
    let bytes = read_source(&input.input)?;
    let format = input.format.unwrap_or_else(|| {
        if input.input.to_ascii_lowercase().ends_with(".csv") {
            Format::Csv01
        } else {
            Format::Transactions
        }
    });
    let d = Dataset::parse(&bytes, format)?;
    let info = InputInfo {
        path: input.input.clone(),
        sha256: sha256(&bytes),
        format: match format {
            Format::Csv01 => "csv01".into(),
            Format::Transactions => "transactions".into(),
        },
        n_rows: d.n_rows(),
        n_cols: d.n_cols(),
    };
    Ok((d, info))
}

fn rule_from_spec(d: &Dataset, spec: &str) -> Result<RulePattern, Error> {
    let (lhs, rhs, sign) = parse_rule_spec(spec)?;
    RulePattern::new(d, &d.attr_ids(&lhs)?, d.attr_id(&rhs)?, sign)
}

fn resolve_rule(d: &Dataset, args: &RuleArgs) -> Result<RulePattern, Error> {
    match (&args.rule, &args.consequent) {
        (Some(spec), _) => rule_from_spec(d, spec),
        (None, Some(c)) => rule_from_spec(d, &format!("{} -> {c}", args.antecedent.join(", "))),
        (None, None) => Err(Error::Config("give --rule or --antecedent with --consequent".into())),
    }
}

fn split_names(list: &str) -> Vec<String> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect()
}

fn test_name(id: TestId) -> String {
    serde_json::to_value(id).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn run(cli: Cli, argv: Vec<String>) -> Result<String, Error> {
    let seed = cli.seed;
    let workers = cli.workers;
    let prov = |command: &str, input: Option<InputInfo>, config: serde_json::Value| Provenance {
        command: command.into(),
        input,
        seed,
        argv: argv.clone(),
        config,
    };
    let report = match &cli.command {
        Command::Mine { input, miner } => {
            let (d, info) = load(input)?;
            let cfg = miner.config(seed, workers);
            let mined = mine_rules(&d, &cfg)?;
            let mut cfg_echo = serde_json::to_value(&cfg).expect("serializable");
            cfg_echo["workers"] = serde_json::Value::Null;
            let mut r = Report::new(prov("mine", Some(info), cfg_echo));
            r.summary.push(("m".into(), json!(mined.m)));
            r.summary.push(("alpha".into(), json!(mined.alpha)));
            r.summary.push(("correction".into(), json!(mined.correction.to_string())));
            r.summary.push(("test".into(), json!(cfg.test.to_string())));
            for m in &mined.rules {
                let mut row = Row::for_rule(&d, &m.rule, m.raw_p, m.log_p, Some(m.adjusted_p));
                row.verdicts.push(("verdict".into(), verdict_name(m.verdict).into()));
                r.rows.push(row);
            }
            r
        }
        Command::EvalRule { input, rule, alpha, strict_capacity, multinomial_cap, double_binomial_cap } => {
            let (d, info) = load(input)?;
            let rule = resolve_rule(&d, rule)?;
            let mut ex = ExactTests::new(d.n_rows());
            if let Some(c) = multinomial_cap {
                ex.multinomial_cap = *c;
            }
            if let Some(c) = double_binomial_cap {
                ex.double_binomial_cap = *c;
            }
            let panel = explain_rule(&ex, &d, &rule, *alpha, !strict_capacity)?;
            for id in [TestId::MultinomialValue, TestId::DoubleBinomValue] {
                if !panel.tests.iter().any(|t| t.test == id) {
                    eprintln!("depmine: note: {} skipped, n exceeds its enumeration cap", test_name(id));
                }
            }
            let config = json!({
                "rule": panel.rule.display(&d),
                "alpha": alpha,
                "strict_capacity": strict_capacity,
                "multinomial_cap": ex.multinomial_cap,
                "double_binomial_cap": ex.double_binomial_cap,
            });
            let mut r = Report::new(prov("eval-rule", Some(info), config));
            let fisher = ex.fisher_p(&panel.rule.table, depmine::Direction::Positive);
            let mut row = Row::for_rule(&d, &panel.rule, fisher.p(), fisher.ln_p(), None);
            row.verdicts.push(("value_based".into(), verdict_name(overall_verdict(&panel.value_based)).into()));
            row.verdicts.push(("variable_based".into(), verdict_name(overall_verdict(&panel.variable_based)).into()));
            r.rows.push(row);
            r.sections.push(Section {
                name: "tests",
                header: &["test", "statistic", "p_value", "log_p"],
                rows: panel
                    .tests
                    .iter()
                    .map(|t| {
                        vec![
                            test_name(t.test),
                            t.statistic.map_or_else(|| "-".into(), |s| format!("{s:.6}")),
                            sci(t.p()),
                            t.ln_p().to_string(),
                        ]
                    })
                    .collect(),
            });
            r.sections.push(Section {
                name: "measures",
                header: &["measure", "value"],
                rows: panel
                    .measures
                    .iter()
                    .map(|m| {
                        let name = serde_json::to_value(m.id).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
                        vec![name, if m.defined { format!("{:.6}", m.value) } else { "-".into() }]
                    })
                    .collect(),
            });
            let mut improvement = Vec::new();
            for (interp, results) in [("value_based", &panel.value_based), ("variable_based", &panel.variable_based)] {
                for res in results {
                    improvement.push(vec![
                        interp.to_string(),
                        res.parent.display(&d),
                        sci(res.p_forward),
                        res.p_backward.map_or_else(|| "-".into(), sci),
                        verdict_name(res.verdict).into(),
                    ]);
                }
            }
            r.sections.push(Section {
                name: "improvement",
                header: &["interpretation", "generalization", "p_forward", "p_backward", "verdict"],
                rows: improvement,
            });
            r
        }
        Command::EvalSet { input, items, supersets, alpha, max_attrs } => {
            let (d, info) = load(input)?;
            let ex = ExactTests::new(d.n_rows());
            let x = d.attr_ids(items)?;
            let sups: Vec<Vec<usize>> =
                supersets.iter().map(|s| d.attr_ids(&split_names(s))).collect::<Result<_, _>>()?;
            let v = self_sufficiency(&ex, &d, &x, &sups, *alpha, *max_attrs)?;
            let chi2 = itemset_chi2(&v.pattern).ok();
            let binom = itemset_binom_p(&ex, &v.pattern);
            let names = |ids: &[usize]| ids.iter().map(|&a| d.name(a)).collect::<Vec<_>>().join(", ");
            let config = json!({ "items": items, "supersets": supersets, "alpha": alpha, "max_attrs": max_attrs });
            let mut r = Report::new(prov("eval-set", Some(info), config));
            let n = d.n_rows() as f64;
            let expected: f64 = v.pattern.singleton_freqs().iter().map(|&f| f as f64 / n).product();
            let p_x = v.pattern.freq as f64 / n;
            let mut row = Row {
                pattern: format!("{{{}}}", names(&v.pattern.items)),
                fr: v.pattern.freq,
                phi: None,
                delta: p_x - expected,
                gamma: (expected > 0.0).then(|| p_x / expected),
                raw_p: v.worst_p,
                log_p: v.worst_p.ln(),
                adjusted_p: None,
                verdicts: Vec::new(),
                extra: serde_json::Map::new(),
            };
            let yes = |b: bool| if b { "yes" } else { "no" }.to_string();
            row.verdicts.push(("productive".into(), yes(v.productive)));
            row.verdicts.push(("nonredundant".into(), yes(v.nonredundant)));
            row.verdicts.push((
                "independently_productive".into(),
                match v.independently_productive {
                    ProductivityStatus::Productive => "yes",
                    ProductivityStatus::NotProductive => "no",
                    ProductivityStatus::Undecidable => "undecidable",
                }
                .into(),
            ));
            row.verdicts.push(("self_sufficient".into(), yes(v.self_sufficient())));
            row.extra.insert("items".into(), json!(v.pattern.items.iter().map(|&a| d.name(a)).collect::<Vec<_>>()));
            if let Some((y, z)) = &v.witness {
                row.extra.insert("redundancy_witness".into(), json!([names(y), names(z)]));
            }
            r.rows.push(row);
            let mut tests = vec![vec!["bipartition_worst".into(), "-".into(), sci(v.worst_p), v.worst_p.ln().to_string()]];
            if let Some(c) = chi2 {
                tests.push(vec![
                    "chi2".into(),
                    c.statistic.map_or_else(|| "-".into(), |s| format!("{s:.6}")),
                    sci(c.p()),
                    c.ln_p().to_string(),
                ]);
            }
            tests.push(vec!["binomial".into(), "-".into(), sci(binom.p()), binom.ln_p().to_string()]);
            r.sections.push(Section { name: "tests", header: &["test", "statistic", "p_value", "log_p"], rows: tests });
            r
        }
        Command::Randomize { input, scheme, b, swap_steps, rules, test, minp, alpha, dump } => {
            let (d, info) = load(input)?;
            let kind = match scheme {
                Scheme::Column => SchemeKind::ColumnPermutation,
                Scheme::Swap => SchemeKind::SwapRandomization,
            };
            let mut sch = PermutationScheme::new(kind, *b, seed);
            sch.swap_steps = *swap_steps;
            let rules: Vec<RulePattern> = rules.iter().map(|s| rule_from_spec(&d, s)).collect::<Result<_, _>>()?;
            let rand = randomize(&d, &sch, workers)?;
            if rand.degenerate {
                eprintln!("depmine: note: no swap is possible; every randomized dataset equals the input");
            }
            if let Some(dir) = dump {
                std::fs::create_dir_all(dir)?;
                for (i, r) in rand.datasets.iter().enumerate() {
                    std::fs::write(dir.join(format!("randomized_{i:05}.csv")), r.to_csv01())?;
                }
            }
            let ex = ExactTests::new(d.n_rows());
            let ln_ps = |data: &Dataset| -> Vec<f64> {
                rules
                    .iter()
                    .map(|r| {
                        let t = data.extract_table(&r.antecedent, r.consequent, r.sign).expect("same columns");
                        score_ln_p(&ex, &t, *test)
                    })
                    .collect()
            };
            let raw = ln_ps(&d);
            let null: Vec<Vec<f64>> = rand.datasets.iter().map(ln_ps).collect();
            let mode = match minp {
                MinP::SingleStep => MinPMode::SingleStep,
                MinP::StepDown => MinPMode::StepDown,
            };
            let config = json!({
                "scheme": kind, "b": b, "swap_steps": swap_steps, "rules": rules.iter().map(|r| r.display(&d)).collect::<Vec<_>>(),
                "test": test.to_string(), "minp": mode, "alpha": alpha,
            });
            let mut r = Report::new(prov("randomize", Some(info), config));
            r.summary.push(("b".into(), json!(b)));
            r.summary.push(("degenerate".into(), json!(rand.degenerate)));
            if !rules.is_empty() {
                let raw_p: Vec<f64> = raw.iter().map(|l| l.exp().max(f64::MIN_POSITIVE)).collect();
                let null_p: Vec<Vec<f64>> =
                    null.iter().map(|row| row.iter().map(|l| l.exp().max(f64::MIN_POSITIVE)).collect()).collect();
                let adj = minp_adjust_from_null(&raw_p, &null_p, mode, *alpha)?;
                if adj.underresolved {
                    eprintln!("depmine: note: b is too small to resolve alpha; increase --b");
                }
                r.summary.push(("underresolved".into(), json!(adj.underresolved)));
                for (i, rule) in rules.iter().enumerate() {
                    let stats: Vec<f64> = null.iter().map(|row| -row[i]).collect();
                    let e = empirical_p(-raw[i], &stats)?;
                    let mut row = Row::for_rule(&d, rule, raw_p[i], raw[i], Some(adj.adjusted[i]));
                    row.verdicts.push(("empirical_p".into(), sci(e.p_em)));
                    row.verdicts.push(("exceed".into(), format!("{}/{}", e.exceed_count, e.b)));
                    row.extra.insert("empirical_p".into(), serde_json::to_value(e.p_em).expect("finite"));
                    r.rows.push(row);
                }
            }
            r
        }
        Command::Adjust { file, method, alpha, m, weights } => {
            let bytes = read_source(file)?;
            let text = String::from_utf8(bytes.clone()).map_err(|_| Error::Parse { line: 1, message: "input is not UTF-8".into() })?;
            let ps = parse_p_values(&text)?;
            let m = m.unwrap_or(ps.len() as u64);
            let res = adjust_with_m(&ps, m, *method, *alpha, weights.as_deref())?;
            let info = InputInfo { path: file.clone(), sha256: sha256(&bytes), format: "p_values".into(), n_rows: ps.len(), n_cols: 1 };
            let config = json!({ "method": method.as_str(), "alpha": alpha, "m": m, "weights": weights });
            let mut r = Report::new(prov("adjust", Some(info), config));
            r.summary.push(("method".into(), json!(method.as_str())));
            r.summary.push(("m".into(), json!(res.m)));
            r.summary.push(("rejected".into(), json!(res.k)));
            r.row_header = "index\traw_p\tadjusted_p\trejected";
            for (i, p) in ps.iter().enumerate() {
                r.plain_rows.push(vec![i.to_string(), sci(*p), sci(res.adjusted_ps[i]), res.rejected[i].to_string()]);
            }
            r
        }
        Command::Holdout { input, miner, split_ratio, k, method, stratify } => {
            let (d, info) = load(input)?;
            let cfg = miner.config(seed, workers);
            let strat = stratify.as_deref().map(|s| d.attr_id(s)).transpose()?;
            let rep = holdout_evaluate(&d, *split_ratio, seed, &cfg, *k, *method, miner.alpha, strat)?;
            let mut cfg_echo = serde_json::to_value(&cfg).expect("serializable");
            cfg_echo["workers"] = serde_json::Value::Null;
            let config = json!({ "miner": cfg_echo, "split_ratio": split_ratio, "k": k, "method": method.as_str(), "stratify": stratify });
            let mut r = Report::new(prov("holdout", Some(info), config));
            r.summary.push(("n_exploratory".into(), json!(rep.n_exploratory)));
            r.summary.push(("n_holdout".into(), json!(rep.n_holdout)));
            r.summary.push(("k".into(), json!(rep.k)));
            r.summary.push(("survivors".into(), json!(rep.survivors().count())));
            for h in &rep.rules {
                let mut row = Row::for_rule(&d, &h.rule, h.holdout_p, h.holdout_p.ln(), Some(h.adjusted_p));
                row.verdicts.push(("accepted".into(), if h.accepted { "yes" } else { "no" }.into()));
                row.verdicts.push(("exploratory_p".into(), sci(h.exploratory_p)));
                row.extra.insert("exploratory_p".into(), serde_json::to_value(h.exploratory_p).expect("finite"));
                r.rows.push(row);
            }
            r
        }
    };
    Ok(match cli.output {
        OutputFormat::Tsv => report.tsv(),
        OutputFormat::Json => report.json(),
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 1,
        Error::Parse { .. } | Error::Domain(_) | Error::UnknownAttribute(_) | Error::Io(_) => 2,
        Error::Capacity { .. } => 3,
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let line = msg.lines().next().unwrap_or("usage error");
            eprintln!("depmine: {}", line.trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    match run(cli, argv.into_iter().skip(1).collect()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("depmine: {}", e.to_string().replace('\n', " "));
            ExitCode::from(exit_code(&e))
        }
    }
}
