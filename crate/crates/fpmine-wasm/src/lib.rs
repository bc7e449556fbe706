//! Browser bindings: three interactive operations over JSON strings, thin
//! enough that the page's JS stays a dumb renderer. Every operation is
//! deterministic per seed, and errors come back as `{"error": "..."}`
//! rather than thrown exceptions.
//!
//! Build for the web with
//! `wasm-pack build crates/fpmine-wasm --target web --out-dir ../../www/pkg`.

use fpmine::baselines::{train_forest, train_tree, ForestConfig, TreeConfig};
use fpmine::error::{Error, Result};
use fpmine::miners::{apriori_mine, fpgrowth_mine, FrequentItemsets, MiningConfig};
use fpmine::rng::derive_seed;
use fpmine::robustness::noise_sweep;
use fpmine::rules::{aggregate_topk, generate_rules, RuleConfig};
use fpmine::svm::{svm_train_traced, KernelSpec, SvmConfig};
use fpmine::svmminer::{
    build_training_set, guided_search, svm_guided_mine, to_training_set, CandidateScorer,
    ClassifierSpec, EncoderConfig, PipelineConfig, PruningClassifier,
};
use fpmine::txdb::{gen_synthetic, load_fimi, SyntheticSpec, TransactionDb};
use serde::Deserialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Source {
    Synthetic {
        n_transactions: usize,
        n_items: u32,
        n_seed_patterns: usize,
        mean_transaction_len: usize,
        pattern_injection_prob: f64,
        seed: u64,
    },
    Fimi {
        text: String,
    },
}

impl Source {
    fn load(&self) -> Result<TransactionDb> {
        match self {
            Source::Synthetic {
                n_transactions,
                n_items,
                n_seed_patterns,
                mean_transaction_len,
                pattern_injection_prob,
                seed,
            } => gen_synthetic(&SyntheticSpec {
                n_transactions: *n_transactions,
                n_items: *n_items,
                n_seed_patterns: *n_seed_patterns,
                mean_transaction_len: *mean_transaction_len,
                pattern_injection_prob: *pattern_injection_prob,
                rng_seed: *seed,
            }),
            Source::Fimi { text } => load_fimi(text),
        }
    }
}

fn default_minconf() -> f64 {
    0.5
}
fn default_top_k() -> usize {
    20
}
fn default_cost() -> f64 {
    1.0
}
fn default_train_fraction() -> f64 {
    0.5
}
fn default_sample_fraction() -> f64 {
    0.25
}
fn default_m_indicators() -> usize {
    16
}

#[derive(Deserialize)]
struct MineParams {
    source: Source,
    algo: String,
    minsup: f64,
    #[serde(default = "default_minconf")]
    minconf: f64,
    #[serde(default = "default_top_k")]
    top_k: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_cost")]
    cost: f64,
    #[serde(default = "default_train_fraction")]
    train_fraction: f64,
    #[serde(default = "default_sample_fraction")]
    sample_fraction: f64,
    #[serde(default = "default_m_indicators")]
    m_indicators: usize,
}

fn pipeline_from(p: &MineParams) -> (PipelineConfig, EncoderConfig) {
    let mut cfg = PipelineConfig::new(
        p.minsup,
        ClassifierSpec::Svm {
            kernel: None,
            config: SvmConfig {
                c: p.cost,
                rng_seed: derive_seed(p.seed, "svm"),
                ..SvmConfig::default()
            },
        },
    );
    cfg.train_fraction = p.train_fraction;
    cfg.rng_seed = derive_seed(p.seed, "pipeline");
    let enc = EncoderConfig {
        m_indicator_items: p.m_indicators,
        include_stats: true,
        sample_fraction: p.sample_fraction,
        rng_seed: derive_seed(p.seed, "encoder"),
    };
    (cfg, enc)
}

fn itemsets_json(fi: &FrequentItemsets) -> Vec<Value> {
    fi.iter()
        .map(|(itemset, count)| {
            json!({
                "items": itemset.to_string(),
                "count": count,
                "support": count as f64 / fi.db_len() as f64,
            })
        })
        .collect()
}

fn mine_impl(params_json: &str) -> Result<Value> {
    let p: MineParams = serde_json::from_str(params_json)
        .map_err(|e| Error::InvalidConfig(format!("bad parameters: {e}")))?;
    let db = p.source.load()?;
    let mine_cfg = MiningConfig::new(p.minsup);

    let (fi, report) = match p.algo.as_str() {
        "apriori" => (apriori_mine(&db, &mine_cfg)?, None),
        "fpgrowth" => (fpgrowth_mine(&db, &mine_cfg)?, None),
        "svm" => {
            let (cfg, enc) = pipeline_from(&p);
            let (fi, report) = svm_guided_mine(&db, &cfg, &enc)?;
            (fi, Some(report))
        }
        other => {
            return Err(Error::InvalidConfig(format!(
                "algo must be apriori, fpgrowth or svm, got {other:?}"
            )))
        }
    };

    let rules = generate_rules(
        &fi,
        &db,
        &RuleConfig {
            minconf: p.minconf,
            top_k: p.top_k,
        },
    )?;
    let aggregate = match aggregate_topk(&rules, p.top_k) {
        Ok((s, c, l)) => Some(json!({ "support": s, "confidence": c, "lift": l })),
        Err(Error::EmptyRuleList) => None,
        Err(e) => return Err(e),
    };
    let rules_json: Vec<Value> = rules
        .iter()
        .take(50)
        .map(|r| {
            json!({
                "antecedent": r.antecedent.to_string(),
                "consequent": r.consequent.to_string(),
                "support": r.support,
                "confidence": r.confidence,
                "lift": r.lift,
            })
        })
        .collect();

    let mut out = json!({
        "transactions": db.len(),
        "n_items": db.n_items(),
        "n_itemsets": fi.len(),
        "itemsets": itemsets_json(&fi),
        "n_rules": rules.len(),
        "rules": rules_json,
        "aggregate": aggregate,
    });
    if let Some(r) = report {
        out["classifier_report"] = serde_json::to_value(&r).expect("report serializes");
    }
    Ok(out)
}

#[derive(Deserialize)]
struct NoiseParams {
    source: Source,
    minsup: f64,
    #[serde(default = "default_minconf")]
    minconf: f64,
    #[serde(default = "default_top_k")]
    top_k: usize,
    levels: Vec<f64>,
    n_seeds: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_cost")]
    cost: f64,
    #[serde(default = "default_train_fraction")]
    train_fraction: f64,
    #[serde(default = "default_sample_fraction")]
    sample_fraction: f64,
}

fn noise_impl(params_json: &str) -> Result<Value> {
    let p: NoiseParams = serde_json::from_str(params_json)
        .map_err(|e| Error::InvalidConfig(format!("bad parameters: {e}")))?;
    let db = p.source.load()?;
    let mut cfg = PipelineConfig::new(
        p.minsup,
        ClassifierSpec::Svm {
            kernel: None,
            config: SvmConfig {
                c: p.cost,
                rng_seed: derive_seed(p.seed, "svm"),
                ..SvmConfig::default()
            },
        },
    );
    cfg.train_fraction = p.train_fraction;
    cfg.rng_seed = derive_seed(p.seed, "pipeline");
    let enc = EncoderConfig {
        m_indicator_items: 16,
        include_stats: true,
        sample_fraction: p.sample_fraction,
        rng_seed: derive_seed(p.seed, "encoder"),
    };
    let rules_cfg = RuleConfig {
        minconf: p.minconf,
        top_k: p.top_k,
    };
    let table = noise_sweep(&db, &cfg, &enc, &rules_cfg, &p.levels, p.n_seeds)?;
    let rows: Vec<Value> = table
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
    Ok(json!({ "levels": rows }))
}

#[derive(Deserialize)]
struct CurveParams {
    source: Source,
    minsup: f64,
    #[serde(default = "default_minconf")]
    minconf: f64,
    #[serde(default = "default_top_k")]
    top_k: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_cost")]
    cost: f64,
    #[serde(default = "default_train_fraction")]
    train_fraction: f64,
    n_trees: usize,
    max_depth: usize,
}

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

fn curve_impl(params_json: &str) -> Result<Value> {
    let p: CurveParams = serde_json::from_str(params_json)
        .map_err(|e| Error::InvalidConfig(format!("bad parameters: {e}")))?;
    let db = p.source.load()?;
    let rules_cfg = RuleConfig {
        minconf: p.minconf,
        top_k: p.top_k,
    };
    let svm_cfg = SvmConfig {
        c: p.cost,
        rng_seed: derive_seed(p.seed, "svm"),
        ..SvmConfig::default()
    };
    let mut cfg = PipelineConfig::new(
        p.minsup,
        ClassifierSpec::Svm {
            kernel: None,
            config: svm_cfg.clone(),
        },
    );
    cfg.train_fraction = p.train_fraction;
    cfg.rng_seed = derive_seed(p.seed, "pipeline");
    let enc = EncoderConfig {
        m_indicator_items: 16,
        include_stats: true,
        sample_fraction: 0.25,
        rng_seed: derive_seed(p.seed, "encoder"),
    };

    let split = build_training_set(&db, &cfg, &enc)?;
    let training = to_training_set(&split.train)?;

    let confidence_of = |scorer: &dyn CandidateScorer| -> Result<Option<f64>> {
        let (fi, _) = guided_search(&db, scorer, &split.encoder, &cfg)?;
        let rules = generate_rules(&fi, &db, &rules_cfg)?;
        match aggregate_topk(&rules, rules_cfg.top_k) {
            Ok((_, c, _)) => Ok(Some(c)),
            Err(Error::EmptyRuleList) => Ok(None),
            Err(e) => Err(e),
        }
    };

    let kernel = KernelSpec::rbf_auto(training.dim());
    let (_, _, snapshots) = svm_train_traced(&training, &kernel, &svm_cfg)?;
    let mut svm_curve = Vec::with_capacity(snapshots.len());
    for snap in snapshots {
        svm_curve.push(confidence_of(&PruningClassifier::Svm(snap))?);
    }

    let tree_cfg = TreeConfig {
        rng_seed: derive_seed(p.seed, "tree"),
        ..TreeConfig::default()
    };
    let mut dt_curve = Vec::with_capacity(p.max_depth);
    for depth in 1..=p.max_depth {
        let t = train_tree(
            &training,
            &TreeConfig {
                max_depth: depth,
                ..tree_cfg.clone()
            },
        )?;
        dt_curve.push(confidence_of(&PruningClassifier::Tree(t))?);
    }

    let forest = train_forest(
        &training,
        &tree_cfg,
        &ForestConfig {
            n_trees: p.n_trees,
            rng_seed: derive_seed(p.seed, "forest"),
            ..ForestConfig::default()
        },
    )?;
    let mut rf_curve = Vec::with_capacity(forest.n_trees());
    for k in 1..=forest.n_trees() {
        rf_curve.push(confidence_of(&ForestPrefix { forest: &forest, k })?);
    }

    let mine_cfg = MiningConfig::new(p.minsup);
    let exact = |fi: FrequentItemsets| -> Result<Option<f64>> {
        let rules = generate_rules(&fi, &db, &rules_cfg)?;
        match aggregate_topk(&rules, rules_cfg.top_k) {
            Ok((_, c, _)) => Ok(Some(c)),
            Err(Error::EmptyRuleList) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let apriori_conf = exact(apriori_mine(&db, &mine_cfg)?)?;
    let fpgrowth_conf = exact(fpgrowth_mine(&db, &mine_cfg)?)?;
    let flat_len = svm_curve
        .len()
        .max(dt_curve.len())
        .max(rf_curve.len())
        .max(1);

    Ok(json!({
        "groups": {
            "apriori": vec![apriori_conf; flat_len],
            "fpgrowth": vec![fpgrowth_conf; flat_len],
            "dt": dt_curve,
            "rf": rf_curve,
            "svm": svm_curve,
        }
    }))
}

fn to_json_string(result: Result<Value>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

/// Mine a database (synthetic spec or pasted FIMI text) and return
/// itemsets, rules and aggregate metrics as JSON.
#[wasm_bindgen]
pub fn mine_demo(params_json: &str) -> String {
    to_json_string(mine_impl(params_json))
}

/// Run the noise-robustness sweep and return per-level metric means.
#[wasm_bindgen]
pub fn noise_demo(params_json: &str) -> String {
    to_json_string(noise_impl(params_json))
}

/// Confidence-vs-iteration curves for all five model groups.
#[wasm_bindgen]
pub fn curve_demo(params_json: &str) -> String {
    to_json_string(curve_impl(params_json))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic_source() -> &'static str {
        r#"{"kind":"synthetic","n_transactions":200,"n_items":12,"n_seed_patterns":3,
            "mean_transaction_len":5,"pattern_injection_prob":0.6,"seed":7}"#
    }

    #[test]
    fn mine_demo_returns_itemsets_and_rules() {
        let params = format!(
            r#"{{"source":{},"algo":"apriori","minsup":0.3,"minconf":0.2,"seed":1}}"#,
            synthetic_source()
        );
        let out: Value = serde_json::from_str(&mine_demo(&params)).unwrap();
        assert!(out.get("error").is_none(), "{out}");
        assert!(out["n_itemsets"].as_u64().unwrap() > 0);
        assert_eq!(
            out["itemsets"].as_array().unwrap().len(),
            out["n_itemsets"].as_u64().unwrap() as usize
        );
    }

    #[test]
    fn mine_demo_svm_carries_report() {
        let params = format!(
            r#"{{"source":{},"algo":"svm","minsup":0.3,"seed":1}}"#,
            synthetic_source()
        );
        let out: Value = serde_json::from_str(&mine_demo(&params)).unwrap();
        assert!(out.get("error").is_none(), "{out}");
        assert!(
            out["classifier_report"]["n_candidates_scored"]
                .as_u64()
                .unwrap()
                > 0
        );
    }

    #[test]
    fn mine_demo_accepts_fimi_text() {
        let params = r#"{"source":{"kind":"fimi","text":"0 1 2\n0 1\n0 2\n1 2\n0 1 2\n"},
            "algo":"fpgrowth","minsup":0.6}"#;
        let out: Value = serde_json::from_str(&mine_demo(params)).unwrap();
        assert_eq!(out["n_itemsets"], 6);
    }

    #[test]
    fn noise_demo_reports_requested_levels() {
        let params = format!(
            r#"{{"source":{},"minsup":0.3,"levels":[0.0,0.1],"n_seeds":2,"seed":3}}"#,
            synthetic_source()
        );
        let out: Value = serde_json::from_str(&noise_demo(&params)).unwrap();
        assert!(out.get("error").is_none(), "{out}");
        assert_eq!(out["levels"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn curve_demo_emits_all_groups() {
        let params = format!(
            r#"{{"source":{},"minsup":0.3,"seed":3,"n_trees":5,"max_depth":4}}"#,
            synthetic_source()
        );
        let out: Value = serde_json::from_str(&curve_demo(&params)).unwrap();
        assert!(out.get("error").is_none(), "{out}");
        let groups = out["groups"].as_object().unwrap();
        for g in ["apriori", "fpgrowth", "dt", "rf", "svm"] {
            assert!(groups.contains_key(g), "missing group {g}");
        }
        assert_eq!(groups["rf"].as_array().unwrap().len(), 5);
        assert_eq!(groups["dt"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn errors_come_back_as_json() {
        let out: Value = serde_json::from_str(&mine_demo("not json")).unwrap();
        assert!(out["error"].as_str().unwrap().contains("bad parameters"));

        let params = r#"{"source":{"kind":"fimi","text":""},"algo":"apriori","minsup":0.5}"#;
        let out: Value = serde_json::from_str(&mine_demo(params)).unwrap();
        assert!(out["error"].as_str().is_some());
    }

    #[test]
    fn demo_is_deterministic() {
        let params = format!(
            r#"{{"source":{},"algo":"svm","minsup":0.3,"seed":9}}"#,
            synthetic_source()
        );
        assert_eq!(mine_demo(&params), mine_demo(&params));
    }
}
