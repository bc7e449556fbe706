//! Support determination as binary classification: candidate itemsets are
//! encoded as feature vectors, a classifier trained on exactly-labeled
//! candidates decides which candidates look frequent, and a level-wise
//! search expands only through candidates the classifier accepts (and,
//! with verification on, exact counting confirms). Verification keeps the
//! output sound; the classifier only costs recall.

mod encoder;
mod pipeline;

pub use encoder::{CandidateEncoder, EncoderConfig};
pub use pipeline::{
    build_training_set, evaluate_classifier, fit_classifier, guided_search, svm_guided_mine,
    to_training_set, CandidateScorer, ClassifierReport, ClassifierSpec, LabeledCandidate,
    PipelineConfig, PruningClassifier, SearchStats, TrainingSplit,
};
