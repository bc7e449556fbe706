//! Subcommand implementations. File artifacts are fully deterministic per
//! flag set; wall-clock timings appear only in the stdout/JSON reports.

use crate::{
    Algo, BenchArgs, ConvertArgs, CurveArgs, EncoderArgs, ForestArgs, InputArgs, InputFormat,
    KernelKind, MineArgs, NoiseArgs, PipelineArgs, SvmArgs, TreeArgs,
};
use fpmine::baselines::{train_forest, train_tree, FeaturesPerSplit, ForestConfig, TreeConfig};
use fpmine::error::{Error, Result};
use fpmine::fmtnum::sig6;
use fpmine::miners::{apriori_mine, fpgrowth_mine, FrequentItemsets, MiningConfig};
use fpmine::rng::derive_seed;
use fpmine::rules::{aggregate_topk, generate_rules, RuleConfig};
use fpmine::svm::{svm_train_traced, KernelSpec, SvmConfig};
use fpmine::svmminer::{
    build_training_set, guided_search, svm_guided_mine, CandidateScorer, ClassifierSpec,
    EncoderConfig, PipelineConfig, PruningClassifier,
};
use fpmine::txdb::{load_categorical_csv, load_fimi, to_fimi, CsvConfig, TransactionDb};
use serde_json::json;
use std::fs;
use std::time::Instant;

fn load_db(args: &InputArgs) -> Result<TransactionDb> {
    let text = fs::read_to_string(&args.input)?;
    match args.format {
        InputFormat::Fimi => load_fimi(&text),
        InputFormat::Csv => load_categorical_csv(
            &text,
            &CsvConfig {
                delimiter: args.delimiter,
                drop_columns: args.drop_columns.clone(),
            },
        ),
    }
}

fn kernel_from(args: &SvmArgs) -> Option<KernelSpec> {
    match args.kernel {
        KernelKind::Rbf => args.gamma.map(|gamma| KernelSpec::Rbf { gamma }),
        KernelKind::Linear => Some(KernelSpec::Linear),
        KernelKind::Poly => Some(KernelSpec::Polynomial {
            degree: args.degree,
            scale: args.poly_scale,
            coef0: args.coef0,
        }),
    }
}

fn svm_config(args: &SvmArgs, seed: u64) -> SvmConfig {
    SvmConfig {
        c: args.cost,
        kkt_tol: args.svm_tol,
        max_passes: args.svm_max_passes,
        rng_seed: derive_seed(seed, "svm"),
        ..SvmConfig::default()
    }
}

fn tree_config(args: &TreeArgs, seed: u64) -> TreeConfig {
    TreeConfig {
        max_depth: args.max_depth,
        min_samples_split: args.min_samples_split,
        rng_seed: derive_seed(seed, "tree"),
    }
}

fn forest_config(args: &ForestArgs, seed: u64) -> Result<ForestConfig> {
    let features_per_split = if args.features_per_split == "sqrt" {
        FeaturesPerSplit::Sqrt
    } else {
        let k: usize = args.features_per_split.parse().map_err(|_| {
            Error::InvalidConfig(format!(
                "features-per-split must be \"sqrt\" or a positive integer, got {:?}",
                args.features_per_split
            ))
        })?;
        FeaturesPerSplit::Fixed(k)
    };
    Ok(ForestConfig {
        n_trees: args.n_trees,
        bootstrap: !args.no_bootstrap,
        features_per_split,
        rng_seed: derive_seed(seed, "forest"),
    })
}

fn encoder_config(args: &EncoderArgs, seed: u64) -> EncoderConfig {
    EncoderConfig {
        m_indicator_items: args.m_indicators,
        include_stats: !args.no_stats,
        sample_fraction: args.sample_fraction,
        rng_seed: derive_seed(seed, "encoder"),
    }
}

fn pipeline_config(
    minsup: f64,
    max_len: Option<usize>,
    args: &PipelineArgs,
    classifier: ClassifierSpec,
    seed: u64,
) -> PipelineConfig {
    let mut cfg = PipelineConfig::new(minsup, classifier);
    cfg.train_fraction = args.train_fraction;
    cfg.relax_factor = args.relax_factor;
    cfg.verify = !args.no_verify;
    cfg.max_len = max_len;
    cfg.rng_seed = derive_seed(seed, "pipeline");
    cfg
}

pub fn mine(args: &MineArgs) -> Result<()> {
    let db = load_db(&args.input)?;
    let mine_cfg = {
        let mut c = MiningConfig::new(args.minsup);
        c.max_len = args.max_len;
        c
    };

    let (itemsets, report) = match args.algo {
        Algo::Apriori => (apriori_mine(&db, &mine_cfg)?, None),
        Algo::Fpgrowth => (fpgrowth_mine(&db, &mine_cfg)?, None),
        Algo::Svm => {
            let classifier = ClassifierSpec::Svm {
                kernel: kernel_from(&args.svm),
                config: svm_config(&args.svm, args.seed),
            };
            let cfg = pipeline_config(
                args.minsup,
                args.max_len,
                &args.pipeline,
                classifier,
                args.seed,
            );
            let enc = encoder_config(&args.encoder, args.seed);
            let (fi, report) = svm_guided_mine(&db, &cfg, &enc)?;
            (fi, Some(report))
        }
    };

    fs::write(&args.output, itemsets.to_fimi_text())?;

    let n_rules = match &args.rules_output {
        Some(path) => {
            let rules = generate_rules(
                &itemsets,
                &db,
                &RuleConfig {
                    minconf: args.minconf,
                    top_k: 20,
                },
            )?;
            fs::write(path, fpmine::rules::rules_to_csv(&rules))?;
            Some(rules.len())
        }
        None => None,
    };

    if args.json {
        let mut obj = json!({
            "command": "mine",
            "transactions": db.len(),
            "n_items": db.n_items(),
            "minsup": args.minsup,
            "n_itemsets": itemsets.len(),
            "output": args.output,
        });
        if let Some(n) = n_rules {
            obj["n_rules"] = json!(n);
            obj["rules_output"] = json!(args.rules_output);
        }
        if let Some(r) = &report {
            obj["classifier_report"] = serde_json::to_value(r).expect("report serializes");
        }
        println!("{obj}");
    } else {
        println!(
            "mined {} itemsets from {} transactions ({} items) at minsup {}",
            itemsets.len(),
            db.len(),
            db.n_items(),
            sig6(args.minsup)
        );
        println!("itemsets written to {}", args.output);
        if let (Some(n), Some(path)) = (n_rules, &args.rules_output) {
            println!(
                "{n} rules at minconf {} written to {path}",
                sig6(args.minconf)
            );
        }
        if let Some(r) = &report {
            print!("{}", r.to_kv_text());
        }
    }
    Ok(())
}

const BENCH_MODELS: [&str; 5] = ["apriori", "fpgrowth", "dt", "rf", "svm"];

struct BenchRow {
    model: &'static str,
    metrics: Option<(f64, f64, f64)>,
    wall_time_ms: u64,
}

fn metrics_of(
    fi: &FrequentItemsets,
    db: &TransactionDb,
    rules_cfg: &RuleConfig,
) -> Result<Option<(f64, f64, f64)>> {
    let rules = generate_rules(fi, db, rules_cfg)?;
    match aggregate_topk(&rules, rules_cfg.top_k) {
        Ok(triple) => Ok(Some(triple)),
        Err(Error::EmptyRuleList) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn bench(args: &BenchArgs) -> Result<()> {
    let db = load_db(&args.input)?;
    let rules_cfg = RuleConfig {
        minconf: args.minconf,
        top_k: args.top_k,
    };
    let mine_cfg = {
        let mut c = MiningConfig::new(args.minsup);
        c.max_len = args.max_len;
        c
    };
    let enc = encoder_config(&args.encoder, args.seed);

    let mut rows = Vec::with_capacity(5);
    for model in BENCH_MODELS {
        let started = Instant::now();
        let fi = match model {
            "apriori" => apriori_mine(&db, &mine_cfg)?,
            "fpgrowth" => fpgrowth_mine(&db, &mine_cfg)?,
            _ => {
                let classifier = match model {
                    "dt" => ClassifierSpec::DecisionTree(tree_config(&args.tree, args.seed)),
                    "rf" => ClassifierSpec::RandomForest {
                        tree: tree_config(&args.tree, args.seed),
                        forest: forest_config(&args.forest, args.seed)?,
                    },
                    _ => ClassifierSpec::Svm {
                        kernel: kernel_from(&args.svm),
                        config: svm_config(&args.svm, args.seed),
                    },
                };
                let cfg = pipeline_config(
                    args.minsup,
                    args.max_len,
                    &args.pipeline,
                    classifier,
                    args.seed,
                );
                svm_guided_mine(&db, &cfg, &enc)?.0
            }
        };
        let metrics = metrics_of(&fi, &db, &rules_cfg)?;
        rows.push(BenchRow {
            model,
            metrics,
            wall_time_ms: started.elapsed().as_millis() as u64,
        });
    }

    // The file artifact carries only the deterministic columns; timings go
    // to the report so repeated runs stay byte-identical.
    let mut csv = String::from("model,support,confidence,lift\n");
    for r in &rows {
        let (s, c, l) = match r.metrics {
            Some((s, c, l)) => (sig6(s), sig6(c), sig6(l)),
            None => (String::new(), String::new(), String::new()),
        };
        csv.push_str(&format!("{},{},{},{}\n", r.model, s, c, l));
    }
    fs::write(&args.output, csv)?;

    if args.json {
        let rows_json: Vec<_> = rows
            .iter()
            .map(|r| {
                json!({
                    "model": r.model,
                    "support": r.metrics.map(|m| m.0),
                    "confidence": r.metrics.map(|m| m.1),
                    "lift": r.metrics.map(|m| m.2),
                    "wall_time_ms": r.wall_time_ms,
                })
            })
            .collect();
        println!(
            "{}",
            json!({ "command": "bench", "output": args.output, "rows": rows_json })
        );
    } else {
        println!("model      support confidence lift    wall_ms");
        for r in &rows {
            let (s, c, l) = match r.metrics {
                Some((s, c, l)) => (sig6(s), sig6(c), sig6(l)),
                None => ("-".into(), "-".into(), "-".into()),
            };
            println!(
                "{:<10} {:<7} {:<10} {:<7} {}",
                r.model, s, c, l, r.wall_time_ms
            );
        }
        println!("table written to {}", args.output);
    }
    Ok(())
}

/// Prefix-vote view of a forest: the model after k trees.
struct ForestPrefix<'a> {
    forest: &'a fpmine::baselines::RandomForestModel,
    k: usize,
}

impl CandidateScorer for ForestPrefix<'_> {
    fn score(
        &self,
        _itemset: &fpmine::txdb::Itemset,
        features: &fpmine::svm::FeatureVector,
    ) -> Result<fpmine::svm::Label> {
        self.forest.predict_with_prefix(features, self.k)
    }
}

pub fn curve(args: &CurveArgs) -> Result<()> {
    let db = load_db(&args.input)?;
    let rules_cfg = RuleConfig {
        minconf: args.minconf,
        top_k: args.top_k,
    };
    let mine_cfg = {
        let mut c = MiningConfig::new(args.minsup);
        c.max_len = args.max_len;
        c
    };
    let enc = encoder_config(&args.encoder, args.seed);

    // One shared training split: every iterative model sees the same
    // candidates, so the curves differ only by classifier.
    let base_cfg = pipeline_config(
        args.minsup,
        args.max_len,
        &args.pipeline,
        ClassifierSpec::Svm {
            kernel: kernel_from(&args.svm),
            config: svm_config(&args.svm, args.seed),
        },
        args.seed,
    );
    let split = build_training_set(&db, &base_cfg, &enc)?;
    let training = fpmine::svmminer::to_training_set(&split.train)?;

    let confidence_of = |scorer: &dyn CandidateScorer| -> Result<Option<f64>> {
        let (fi, _) = guided_search(&db, scorer, &split.encoder, &base_cfg)?;
        metrics_of(&fi, &db, &rules_cfg).map(|m| m.map(|(_, c, _)| c))
    };

    // svm group: one snapshot per optimization pass.
    let kernel = kernel_from(&args.svm).unwrap_or_else(|| KernelSpec::rbf_auto(training.dim()));
    let (_, _, snapshots) =
        svm_train_traced(&training, &kernel, &svm_config(&args.svm, args.seed))?;
    let mut svm_curve = Vec::with_capacity(snapshots.len());
    for snap in snapshots {
        svm_curve.push(confidence_of(&PruningClassifier::Svm(snap))?);
    }

    // dt group: one point per depth limit.
    let mut dt_curve = Vec::with_capacity(args.tree.max_depth);
    for depth in 1..=args.tree.max_depth {
        let cfg = TreeConfig {
            max_depth: depth,
            ..tree_config(&args.tree, args.seed)
        };
        let tree = train_tree(&training, &cfg)?;
        dt_curve.push(confidence_of(&PruningClassifier::Tree(tree))?);
    }

    // rf group: one point per added tree.
    let forest = train_forest(
        &training,
        &tree_config(&args.tree, args.seed),
        &forest_config(&args.forest, args.seed)?,
    )?;
    let mut rf_curve = Vec::with_capacity(forest.n_trees());
    for k in 1..=forest.n_trees() {
        rf_curve.push(confidence_of(&ForestPrefix { forest: &forest, k })?);
    }

    // Exact miners have no training axis: a flat line documents that.
    let apriori_conf =
        metrics_of(&apriori_mine(&db, &mine_cfg)?, &db, &rules_cfg)?.map(|(_, c, _)| c);
    let fpgrowth_conf =
        metrics_of(&fpgrowth_mine(&db, &mine_cfg)?, &db, &rules_cfg)?.map(|(_, c, _)| c);

    let flat_len = svm_curve
        .len()
        .max(dt_curve.len())
        .max(rf_curve.len())
        .max(1);
    let mut csv = String::from("model,iteration,confidence\n");
    let mut emit = |model: &str, values: &[Option<f64>]| {
        for (i, v) in values.iter().enumerate() {
            let cell = v.map(sig6).unwrap_or_default();
            csv.push_str(&format!("{},{},{}\n", model, i + 1, cell));
        }
    };
    emit("apriori", &vec![apriori_conf; flat_len]);
    emit("fpgrowth", &vec![fpgrowth_conf; flat_len]);
    emit("dt", &dt_curve);
    emit("rf", &rf_curve);
    emit("svm", &svm_curve);
    fs::write(&args.output, &csv)?;

    if args.json {
        println!(
            "{}",
            json!({
                "command": "curve",
                "output": args.output,
                "svm_iterations": svm_curve.len(),
                "dt_iterations": dt_curve.len(),
                "rf_iterations": rf_curve.len(),
                "svm_first": svm_curve.first().copied().flatten(),
                "svm_final": svm_curve.last().copied().flatten(),
            })
        );
    } else {
        println!(
            "curve written to {} (svm {} passes, dt {} depths, rf {} trees)",
            args.output,
            svm_curve.len(),
            dt_curve.len(),
            rf_curve.len()
        );
    }
    Ok(())
}

pub fn noise(args: &NoiseArgs) -> Result<()> {
    let db = load_db(&args.input)?;
    let rules_cfg = RuleConfig {
        minconf: args.minconf,
        top_k: args.top_k,
    };
    let classifier = ClassifierSpec::Svm {
        kernel: kernel_from(&args.svm),
        config: svm_config(&args.svm, args.seed),
    };
    let cfg = pipeline_config(
        args.minsup,
        args.max_len,
        &args.pipeline,
        classifier,
        args.seed,
    );
    let enc = encoder_config(&args.encoder, args.seed);

    let table =
        fpmine::robustness::noise_sweep(&db, &cfg, &enc, &rules_cfg, &args.levels, args.n_seeds)?;

    fs::write(&args.out_cells, table.to_cells_csv())?;
    fs::write(&args.out_summary, table.to_summary_csv())?;

    if args.json {
        let rows: Vec<_> = table
            .level_means()
            .iter()
            .map(|r| {
                json!({
                    "level": r.level,
                    "support": r.support,
                    "confidence": r.confidence,
                    "lift": r.lift,
                    "f1": r.f1,
                })
            })
            .collect();
        println!(
            "{}",
            json!({
                "command": "noise",
                "out_cells": args.out_cells,
                "out_summary": args.out_summary,
                "levels": rows,
            })
        );
    } else {
        println!("level   support confidence lift    f1");
        for r in table.level_means() {
            let cell = |x: Option<f64>| x.map(sig6).unwrap_or_else(|| "-".into());
            println!(
                "{:<7} {:<7} {:<10} {:<7} {}",
                sig6(r.level),
                cell(r.support),
                cell(r.confidence),
                cell(r.lift),
                cell(r.f1)
            );
        }
        println!(
            "cells written to {}, summary to {}",
            args.out_cells, args.out_summary
        );
    }
    Ok(())
}

pub fn convert(args: &ConvertArgs) -> Result<()> {
    let text = fs::read_to_string(&args.input)?;
    let db = load_categorical_csv(
        &text,
        &CsvConfig {
            delimiter: args.delimiter,
            drop_columns: args.drop_columns.clone(),
        },
    )?;

    fs::write(&args.output, to_fimi(&db))?;

    let map_path = args
        .map
        .clone()
        .unwrap_or_else(|| format!("{}.items", args.output));
    let mut map_text = String::new();
    if let Some(labels) = db.item_labels() {
        for (id, label) in labels.iter().enumerate() {
            map_text.push_str(&format!("{id}\t{label}\n"));
        }
    }
    fs::write(&map_path, map_text)?;

    if args.json {
        println!(
            "{}",
            json!({
                "command": "convert",
                "transactions": db.len(),
                "n_items": db.n_items(),
                "output": args.output,
                "map": map_path,
            })
        );
    } else {
        println!(
            "converted {} rows into {} transactions over {} items",
            db.len(),
            db.len(),
            db.n_items()
        );
        println!("fimi written to {}, id map to {}", args.output, map_path);
    }
    Ok(())
}
