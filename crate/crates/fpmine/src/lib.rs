//! # fpmine
//!
//! A frequent-pattern mining toolkit built around two routes to the same
//! answer: classic exact miners (Apriori, FP-Growth) and a classifier-guided
//! candidate search in which a kernel SVM (or a decision tree / random
//! forest baseline) decides whether a candidate itemset looks frequent
//! before it is expanded. With verification enabled the guided miner is
//! sound: everything it reports is exactly frequent; the classifier only
//! costs recall.
//!
//! Modules:
//! - [`txdb`] — transaction databases, FIMI/CSV loaders, exact support
//!   counting, and a deterministic synthetic generator.
//! - [`miners`] — Apriori, FP-Growth over an FP-tree, and a brute-force
//!   oracle for testing.
//! - [`rules`] — association-rule generation with support/confidence/lift.
//! - [`svm`] — a from-scratch soft-margin kernel SVM trained by sequential
//!   pairwise optimization.
//! - [`baselines`] — CART decision tree and random forest classifiers.
//! - [`svmminer`] — itemset feature encoding and the classifier-guided
//!   level-wise search.
//! - [`robustness`] — label/transaction noise injection and the noise
//!   sweep harness.

pub mod baselines;
pub mod error;
pub mod fmtnum;
pub mod miners;
pub mod modelio;
pub mod rng;
pub mod robustness;
pub mod rules;
pub mod svm;
pub mod svmminer;
pub mod txdb;

pub use error::{Error, Result};
pub use miners::{FrequentItemsets, MiningConfig};
pub use rules::{AssociationRule, RuleConfig};
pub use svm::{FeatureVector, KernelSpec, Label, SvmConfig, SvmModel, TrainingSet};
pub use txdb::{ItemId, Itemset, SyntheticSpec, Transaction, TransactionDb};
