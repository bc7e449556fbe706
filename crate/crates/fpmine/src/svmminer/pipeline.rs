//! The classifier-guided mining pipeline.
//!
//! `build_training_set` labels candidates exactly on a transaction
//! partition (enumerated level-wise at a relaxed threshold so both classes
//! appear), `fit_classifier` trains the configured model on the encoded
//! candidates, and `guided_search` runs a level-wise search over the full
//! database in which the classifier decides whether each candidate is
//! worth keeping. With `verify` on (the default) every accepted candidate
//! is exactly counted and kept only if truly frequent, so the output is a
//! sound subset of the exact miners' output.

use super::encoder::{CandidateEncoder, EncoderConfig};
use crate::baselines::{
    train_forest, train_tree, DecisionTreeModel, ForestConfig, RandomForestModel, TreeConfig,
};
use crate::error::{Error, Result};
use crate::fmtnum::sig6;
use crate::miners::{apriori_mine, FrequentItemsets, MiningConfig};
use crate::rng::{derive_seed, Rng};
use crate::svm::{svm_train, FeatureVector, KernelSpec, Label, SvmConfig, SvmModel, TrainingSet};
use crate::txdb::{ItemId, Itemset, TransactionDb};
use serde::Serialize;

/// Which model prunes the search.
#[derive(Debug, Clone)]
pub enum ClassifierSpec {
    /// `kernel: None` selects rbf with gamma = 1/dimension.
    Svm {
        kernel: Option<KernelSpec>,
        config: SvmConfig,
    },
    DecisionTree(TreeConfig),
    RandomForest {
        tree: TreeConfig,
        forest: ForestConfig,
    },
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub minsup: f64,
    /// Fraction of transactions used to build exact labels, in (0, 1].
    pub train_fraction: f64,
    pub classifier: ClassifierSpec,
    /// Exactly count accepted candidates and keep only the truly frequent.
    pub verify: bool,
    pub max_len: Option<usize>,
    /// Training candidates are enumerated at `minsup * relax_factor` so
    /// infrequent-but-close negatives exist.
    pub relax_factor: f64,
    pub rng_seed: u64,
}

impl PipelineConfig {
    pub fn new(minsup: f64, classifier: ClassifierSpec) -> Self {
        PipelineConfig {
            minsup,
            train_fraction: 0.5,
            classifier,
            verify: true,
            max_len: None,
            relax_factor: 0.5,
            rng_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.minsup > 0.0 && self.minsup <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "minsup must be in (0, 1], got {}",
                self.minsup
            )));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "train_fraction must be in (0, 1], got {}",
                self.train_fraction
            )));
        }
        if !(self.relax_factor > 0.0 && self.relax_factor <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "relax_factor must be in (0, 1], got {}",
                self.relax_factor
            )));
        }
        if self.max_len == Some(0) {
            return Err(Error::InvalidConfig("max_len must be >= 1".into()));
        }
        Ok(())
    }

    fn level_allowed(&self, len: usize) -> bool {
        self.max_len.is_none_or(|cap| len <= cap)
    }
}

/// A candidate with exact ground truth from the labeling partition.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledCandidate {
    pub itemset: Itemset,
    pub features: FeatureVector,
    /// +1 iff `exact_support >= minsup`.
    pub label: Label,
    pub exact_support: f64,
}

#[derive(Debug, Clone)]
pub struct TrainingSplit {
    /// Fitted on the labeling partition and reused for search scoring, so
    /// the classifier sees one consistent feature space.
    pub encoder: CandidateEncoder,
    pub train: Vec<LabeledCandidate>,
    pub held_out: Vec<LabeledCandidate>,
}

pub fn build_training_set(
    db: &TransactionDb,
    cfg: &PipelineConfig,
    enc: &EncoderConfig,
) -> Result<TrainingSplit> {
    cfg.validate()?;
    enc.validate()?;

    let n = db.len();
    let n_part = ((cfg.train_fraction * n as f64).round() as usize).clamp(1, n);
    let mut rng = Rng::from_seed(derive_seed(cfg.rng_seed, "partition"));
    let part_indices = rng.sample_indices(n, n_part);
    let partition = db.restrict(&part_indices)?;

    let relaxed = cfg.minsup * cfg.relax_factor;
    let mut mine_cfg = MiningConfig::new(relaxed);
    mine_cfg.max_len = cfg.max_len;
    let candidates_fi = apriori_mine(&partition, &mine_cfg)?;

    let encoder = CandidateEncoder::fit(&partition, enc)?;

    let mut candidates = Vec::with_capacity(candidates_fi.len());
    for (itemset, count) in candidates_fi.iter() {
        let exact_support = count as f64 / n_part as f64;
        let label = if exact_support >= cfg.minsup {
            Label::Pos
        } else {
            Label::Neg
        };
        let features = encoder.encode(itemset)?;
        candidates.push(LabeledCandidate {
            itemset: itemset.clone(),
            features,
            label,
            exact_support,
        });
    }
    if candidates.is_empty() {
        return Err(Error::SingleClassTrainingSet);
    }

    let mut split_rng = Rng::from_seed(derive_seed(cfg.rng_seed, "candidate-split"));
    split_rng.shuffle(&mut candidates);
    let n_held = candidates.len() / 5;
    let held_out = candidates.split_off(candidates.len() - n_held);
    let train = candidates;

    let has_pos = train.iter().any(|c| c.label == Label::Pos);
    let has_neg = train.iter().any(|c| c.label == Label::Neg);
    if !(has_pos && has_neg) {
        return Err(Error::SingleClassTrainingSet);
    }

    Ok(TrainingSplit {
        encoder,
        train,
        held_out,
    })
}

/// Converts labeled candidates into the classifier-facing training set.
pub fn to_training_set(candidates: &[LabeledCandidate]) -> Result<TrainingSet> {
    TrainingSet::new(
        candidates.iter().map(|c| c.features.clone()).collect(),
        candidates.iter().map(|c| c.label).collect(),
    )
}

/// A trained pruning model of any supported kind.
#[derive(Debug, Clone)]
pub enum PruningClassifier {
    Svm(SvmModel),
    Tree(DecisionTreeModel),
    Forest(RandomForestModel),
}

impl PruningClassifier {
    pub fn classify(&self, features: &FeatureVector) -> Result<Label> {
        match self {
            PruningClassifier::Svm(m) => Ok(m.decision(features)?.1),
            PruningClassifier::Tree(m) => m.predict(features),
            PruningClassifier::Forest(m) => m.predict(features),
        }
    }
}

pub fn fit_classifier(spec: &ClassifierSpec, data: &TrainingSet) -> Result<PruningClassifier> {
    match spec {
        ClassifierSpec::Svm { kernel, config } => {
            let kernel = kernel
                .clone()
                .unwrap_or_else(|| KernelSpec::rbf_auto(data.dim()));
            let (model, _) = svm_train(data, &kernel, config)?;
            Ok(PruningClassifier::Svm(model))
        }
        ClassifierSpec::DecisionTree(cfg) => Ok(PruningClassifier::Tree(train_tree(data, cfg)?)),
        ClassifierSpec::RandomForest { tree, forest } => {
            Ok(PruningClassifier::Forest(train_forest(data, tree, forest)?))
        }
    }
}

/// Decides whether a candidate looks frequent. Implemented by the trained
/// classifiers (which only look at the features); test oracles may look at
/// the itemset itself.
pub trait CandidateScorer {
    fn score(&self, itemset: &Itemset, features: &FeatureVector) -> Result<Label>;
}

impl CandidateScorer for PruningClassifier {
    fn score(&self, _itemset: &Itemset, features: &FeatureVector) -> Result<Label> {
        self.classify(features)
    }
}

/// Classifier quality on held-out candidates plus search bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifierReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// True when a zero denominator forced a metric to 0.
    pub zero_division: bool,
    pub n_heldout: usize,
    pub n_candidates_scored: usize,
    pub n_pruned: usize,
    pub n_verified: usize,
}

impl ClassifierReport {
    fn degenerate() -> Self {
        ClassifierReport {
            precision: 0.0,
            recall: 0.0,
            f1: 0.0,
            zero_division: true,
            n_heldout: 0,
            n_candidates_scored: 0,
            n_pruned: 0,
            n_verified: 0,
        }
    }

    /// Flat key=value block, one entry per line.
    pub fn to_kv_text(&self) -> String {
        format!(
            "precision={}\nrecall={}\nf1={}\nzero_division={}\nn_heldout={}\nn_candidates_scored={}\nn_pruned={}\nn_verified={}\n",
            sig6(self.precision),
            sig6(self.recall),
            sig6(self.f1),
            self.zero_division,
            self.n_heldout,
            self.n_candidates_scored,
            self.n_pruned,
            self.n_verified
        )
    }

    pub fn csv_header() -> &'static str {
        "precision,recall,f1,zero_division,n_heldout,n_candidates_scored,n_pruned,n_verified"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            sig6(self.precision),
            sig6(self.recall),
            sig6(self.f1),
            self.zero_division,
            self.n_heldout,
            self.n_candidates_scored,
            self.n_pruned,
            self.n_verified
        )
    }
}

/// Standard precision/recall/F1 with +1 as the positive class.
pub fn evaluate_classifier<S: CandidateScorer + ?Sized>(
    clf: &S,
    held_out: &[LabeledCandidate],
) -> Result<ClassifierReport> {
    if held_out.is_empty() {
        return Err(Error::EmptyHeldOut);
    }
    let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
    for cand in held_out {
        let predicted = clf.score(&cand.itemset, &cand.features)?;
        match (predicted, cand.label) {
            (Label::Pos, Label::Pos) => tp += 1,
            (Label::Pos, Label::Neg) => fp += 1,
            (Label::Neg, Label::Pos) => fn_ += 1,
            (Label::Neg, Label::Neg) => {}
        }
    }
    let mut zero_division = false;
    let mut ratio = |num: usize, den: usize| {
        if den == 0 {
            zero_division = true;
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        zero_division = true;
        0.0
    };
    Ok(ClassifierReport {
        precision,
        recall,
        f1,
        zero_division,
        n_heldout: held_out.len(),
        n_candidates_scored: 0,
        n_pruned: 0,
        n_verified: 0,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub n_scored: usize,
    pub n_pruned: usize,
    pub n_verified: usize,
}

/// Level-wise search over the full database with classifier pruning.
/// Candidates scored negative are dropped and never expanded; accepted
/// candidates are exactly counted (the count is always recorded in the
/// output) and, with `verify`, kept only if truly frequent. Expansion uses
/// the same join-and-prune step as Apriori over the kept frontier.
pub fn guided_search(
    db: &TransactionDb,
    scorer: &(impl CandidateScorer + ?Sized),
    encoder: &CandidateEncoder,
    cfg: &PipelineConfig,
) -> Result<(FrequentItemsets, SearchStats)> {
    cfg.validate()?;
    let n = db.len();
    let mut result = FrequentItemsets::new(n, cfg.minsup);
    let mut stats = SearchStats::default();

    let mut level_candidates: Vec<Itemset> = if cfg.level_allowed(1) {
        db.singleton_counts()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| Itemset::from_sorted(vec![ItemId(i as u32)]))
            .collect()
    } else {
        Vec::new()
    };

    let mut level = 1usize;
    while !level_candidates.is_empty() {
        let mut kept = Vec::new();
        for cand in &level_candidates {
            let features = encoder.encode(cand)?;
            stats.n_scored += 1;
            match scorer.score(cand, &features)? {
                Label::Neg => stats.n_pruned += 1,
                Label::Pos => {
                    let count = db.support_count(cand)?;
                    if cfg.verify {
                        stats.n_verified += 1;
                        if count as f64 / n as f64 >= cfg.minsup {
                            result.insert(cand.clone(), count);
                            kept.push(cand.clone());
                        }
                    } else {
                        result.insert(cand.clone(), count);
                        kept.push(cand.clone());
                    }
                }
            }
        }

        level += 1;
        if kept.is_empty() || !cfg.level_allowed(level) {
            break;
        }
        level_candidates = crate::miners::apriori::generate_candidates(&kept);
    }

    Ok((result, stats))
}

/// The full pipeline: label candidates on a partition, train the configured
/// classifier, report its held-out quality, then run the guided search over
/// the whole database.
pub fn svm_guided_mine(
    db: &TransactionDb,
    cfg: &PipelineConfig,
    enc: &EncoderConfig,
) -> Result<(FrequentItemsets, ClassifierReport)> {
    let split = build_training_set(db, cfg, enc)?;
    let training = to_training_set(&split.train)?;
    let classifier = fit_classifier(&cfg.classifier, &training)?;

    let mut report = if split.held_out.is_empty() {
        ClassifierReport::degenerate()
    } else {
        evaluate_classifier(&classifier, &split.held_out)?
    };

    let (itemsets, stats) = guided_search(db, &classifier, &split.encoder, cfg)?;
    report.n_candidates_scored = stats.n_scored;
    report.n_pruned = stats.n_pruned;
    report.n_verified = stats.n_verified;
    Ok((itemsets, report))
}
