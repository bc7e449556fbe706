//! Noise injection and the noise-sweep harness.
//!
//! Two perturbations model imperfect data: independent label flips on a
//! training set, and length-preserving item swaps on transactions (one
//! member removed, one non-member inserted). The sweep applies both at the
//! same rate per level and reports per-level means of the rule metrics and
//! the classifier F1. Injectors are pure: inputs are never mutated, and a
//! rate of zero returns input-equal output.

use crate::error::{Error, Result};
use crate::fmtnum::sig6;
use crate::rng::{derive_seed, Rng};
use crate::rules::{aggregate_topk, generate_rules, RuleConfig};
use crate::svm::TrainingSet;
use crate::svmminer::{
    build_training_set, evaluate_classifier, fit_classifier, guided_search, ClassifierReport,
    EncoderConfig, PipelineConfig,
};
use crate::txdb::{ItemId, Itemset, Transaction, TransactionDb};

/// One noise setting: both probabilities plus the seed that makes the
/// perturbation reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    pub label_flip_prob: f64,
    pub item_swap_prob: f64,
    pub rng_seed: u64,
}

impl NoiseSpec {
    pub fn uniform(p: f64, rng_seed: u64) -> Self {
        NoiseSpec {
            label_flip_prob: p,
            item_swap_prob: p,
            rng_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("label_flip_prob", self.label_flip_prob),
            ("item_swap_prob", self.item_swap_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be in [0, 1], got {p}"
                )));
            }
        }
        Ok(())
    }

    /// Swap noise on a database; the two perturbation kinds draw from
    /// separate streams derived from the spec seed.
    pub fn apply_to_transactions(&self, db: &TransactionDb) -> Result<TransactionDb> {
        self.validate()?;
        inject_transaction_noise(db, self.item_swap_prob, derive_seed(self.rng_seed, "swap"))
    }

    /// Flip noise on a training set.
    pub fn apply_to_labels(&self, data: &TrainingSet) -> Result<TrainingSet> {
        self.validate()?;
        inject_label_noise(
            data,
            self.label_flip_prob,
            derive_seed(self.rng_seed, "flip"),
        )
    }
}

fn check_prob(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidConfig(format!(
            "noise probability must be in [0, 1], got {p}"
        )));
    }
    Ok(())
}

/// Flips each label independently with probability `p`; vectors untouched.
pub fn inject_label_noise(data: &TrainingSet, p: f64, seed: u64) -> Result<TrainingSet> {
    check_prob(p)?;
    let mut rng = Rng::from_seed(seed);
    let labels = data
        .labels()
        .iter()
        .map(|&l| if rng.next_bool(p) { l.flipped() } else { l })
        .collect();
    data.with_labels(labels)
}

/// With probability `p` per transaction, removes one uniformly chosen
/// member item and inserts one uniformly chosen non-member (a
/// length-preserving swap); full-universe transactions only lose an item.
pub fn inject_transaction_noise(db: &TransactionDb, p: f64, seed: u64) -> Result<TransactionDb> {
    check_prob(p)?;
    if db.n_items() < 2 {
        return Err(Error::InvalidConfig(
            "transaction noise needs a universe of at least 2 items".into(),
        ));
    }
    let n_items = db.n_items();
    let mut rng = Rng::from_seed(seed);
    let mut transactions = Vec::with_capacity(db.len());

    for t in db.transactions() {
        if !rng.next_bool(p) {
            transactions.push(t.clone());
            continue;
        }
        let items = t.items();
        let remove_at = rng.next_usize_below(items.len());
        let mut new_items: Vec<ItemId> = items
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != remove_at)
            .map(|(_, it)| *it)
            .collect();

        let n_non_members = n_items as usize - items.len();
        if n_non_members > 0 {
            // The r-th id (in ascending order) not present in the original
            // transaction; the removed item stays excluded, so the result
            // always differs from the input.
            let r = rng.next_usize_below(n_non_members);
            let mut seen = 0usize;
            let mut chosen = None;
            let mut cursor = 0usize;
            for id in 0..n_items {
                let id = ItemId(id);
                if cursor < items.len() && items[cursor] == id {
                    cursor += 1;
                    continue;
                }
                if seen == r {
                    chosen = Some(id);
                    break;
                }
                seen += 1;
            }
            let chosen = chosen.expect("non-member count was positive");
            let pos = new_items.binary_search(&chosen).unwrap_err();
            new_items.insert(pos, chosen);
        }
        transactions.push(Transaction::new(Itemset::from_sorted(new_items)));
    }

    TransactionDb::from_parts(
        transactions,
        db.n_items(),
        db.item_labels().map(|ls| ls.to_vec()),
        db.source().clone(),
    )
}

/// One sweep cell. Rule metrics are absent when the cell produced no rules;
/// every metric is absent when classifier training failed for the cell
/// (possible at high flip rates on small candidate sets).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub level: f64,
    pub seed_index: usize,
    pub support: Option<f64>,
    pub confidence: Option<f64>,
    pub lift: Option<f64>,
    pub f1: Option<f64>,
    pub report: Option<ClassifierReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub level: f64,
    pub support: Option<f64>,
    pub confidence: Option<f64>,
    pub lift: Option<f64>,
    pub f1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub cells: Vec<SweepCell>,
    pub levels: Vec<f64>,
}

impl SweepTable {
    /// Per-level means over the cells where the metric is present.
    pub fn level_means(&self) -> Vec<SweepRow> {
        self.levels
            .iter()
            .map(|&level| {
                let cells: Vec<&SweepCell> =
                    self.cells.iter().filter(|c| c.level == level).collect();
                let mean = |get: fn(&SweepCell) -> Option<f64>| {
                    let values: Vec<f64> = cells.iter().filter_map(|c| get(c)).collect();
                    if values.is_empty() {
                        None
                    } else {
                        Some(values.iter().sum::<f64>() / values.len() as f64)
                    }
                };
                SweepRow {
                    level,
                    support: mean(|c| c.support),
                    confidence: mean(|c| c.confidence),
                    lift: mean(|c| c.lift),
                    f1: mean(|c| c.f1),
                }
            })
            .collect()
    }

    pub fn to_cells_csv(&self) -> String {
        let mut out = String::from("level,seed,support,confidence,lift,f1\n");
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                sig6(c.level),
                c.seed_index,
                opt(c.support),
                opt(c.confidence),
                opt(c.lift),
                opt(c.f1)
            ));
        }
        out
    }

    pub fn to_summary_csv(&self) -> String {
        let mut out = String::from("level,support,confidence,lift,f1\n");
        for r in self.level_means() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                sig6(r.level),
                opt(r.support),
                opt(r.confidence),
                opt(r.lift),
                opt(r.f1)
            ));
        }
        out
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(sig6).unwrap_or_default()
}

/// Runs the guided pipeline at each (noise level, seed) cell: transactions
/// perturbed at rate p, training labels flipped at rate p, then mining,
/// rule generation, and top-k aggregation. Seed index 0 keeps the base
/// pipeline seed, so the level-0/seed-0 cell reproduces a clean
/// `svm_guided_mine` run bit-exactly.
pub fn noise_sweep(
    db: &TransactionDb,
    pipeline: &PipelineConfig,
    enc: &EncoderConfig,
    rules_cfg: &RuleConfig,
    levels: &[f64],
    n_seeds: usize,
) -> Result<SweepTable> {
    if levels.is_empty() || levels[0] != 0.0 {
        return Err(Error::InvalidConfig("noise levels must start at 0".into()));
    }
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig(
            "noise levels must be strictly ascending".into(),
        ));
    }
    for &p in levels {
        check_prob(p)?;
    }
    if n_seeds < 1 {
        return Err(Error::InvalidConfig("n_seeds must be >= 1".into()));
    }
    pipeline.validate()?;
    rules_cfg.validate()?;

    let mut cells = Vec::with_capacity(levels.len() * n_seeds);
    for (li, &level) in levels.iter().enumerate() {
        for s in 0..n_seeds {
            let cell_cfg = if s == 0 {
                pipeline.clone()
            } else {
                let mut c = pipeline.clone();
                c.rng_seed = derive_seed(pipeline.rng_seed, &format!("sweep-seed-{s}"));
                c
            };
            let tx_seed = derive_seed(pipeline.rng_seed, &format!("tx-noise-{li}-{s}"));
            let label_seed = derive_seed(pipeline.rng_seed, &format!("label-noise-{li}-{s}"));

            let cell = run_cell(db, &cell_cfg, enc, rules_cfg, level, s, tx_seed, label_seed)?;
            cells.push(cell);
        }
    }
    Ok(SweepTable {
        cells,
        levels: levels.to_vec(),
    })
}

#[allow(clippy::too_many_arguments)]
fn run_cell(
    db: &TransactionDb,
    cfg: &PipelineConfig,
    enc: &EncoderConfig,
    rules_cfg: &RuleConfig,
    level: f64,
    seed_index: usize,
    tx_seed: u64,
    label_seed: u64,
) -> Result<SweepCell> {
    let noisy_db = inject_transaction_noise(db, level, tx_seed)?;

    // Same steps as svm_guided_mine, with label flips spliced in between
    // building the training set and fitting the classifier.
    let outcome = (|| -> Result<(Option<ClassifierReport>, _)> {
        let split = build_training_set(&noisy_db, cfg, enc)?;
        let training = crate::svmminer::to_training_set(&split.train)?;
        let noisy_training = inject_label_noise(&training, level, label_seed)?;
        let classifier = fit_classifier(&cfg.classifier, &noisy_training)?;
        let report = if split.held_out.is_empty() {
            None
        } else {
            Some(evaluate_classifier(&classifier, &split.held_out)?)
        };
        let (fi, stats) = guided_search(&noisy_db, &classifier, &split.encoder, cfg)?;
        let report = report.map(|mut r| {
            r.n_candidates_scored = stats.n_scored;
            r.n_pruned = stats.n_pruned;
            r.n_verified = stats.n_verified;
            r
        });
        Ok((report, fi))
    })();

    match outcome {
        Ok((report, fi)) => {
            let rules = generate_rules(&fi, &noisy_db, rules_cfg)?;
            let (support, confidence, lift) = match aggregate_topk(&rules, rules_cfg.top_k) {
                Ok((s, c, l)) => (Some(s), Some(c), Some(l)),
                Err(Error::EmptyRuleList) => (None, None, None),
                Err(e) => return Err(e),
            };
            Ok(SweepCell {
                level,
                seed_index,
                support,
                confidence,
                lift,
                f1: report.as_ref().map(|r| r.f1),
                report,
            })
        }
        // Single-class training after noise: the cell is absent, not zero.
        Err(Error::SingleClassTrainingSet) => Ok(SweepCell {
            level,
            seed_index,
            support: None,
            confidence: None,
            lift: None,
            f1: None,
            report: None,
        }),
        Err(e) => Err(e),
    }
}
