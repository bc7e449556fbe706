//! Soft-margin kernel SVM, from scratch.
//!
//! Training solves the dual of the usual primal
//! `min 1/2 ||w||^2 + C sum zeta_i` subject to
//! `y_i (w . phi(x_i) + b) >= 1 - zeta_i`, `zeta_i >= 0`,
//! by sequential two-multiplier updates ([`svm_train`]). The decision
//! function is `sign(sum_i alpha_i y_i K(x_i, x) + b)` with `sign(0)`
//! defined as +1.

mod kernel;
mod solver;

pub use kernel::{kernel_eval, KernelSpec};
pub use solver::{svm_train, svm_train_traced, SolverDiagnostics};

use crate::error::{Error, Result};
use crate::modelio;
use serde::{Deserialize, Serialize};

/// A fixed-length real vector with finite entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("feature value {bad}")));
        }
        Ok(FeatureVector(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Binary class label, +1 for the frequent-pattern class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Label {
    Neg,
    Pos,
}

impl Label {
    pub fn to_f64(self) -> f64 {
        match self {
            Label::Neg => -1.0,
            Label::Pos => 1.0,
        }
    }

    /// sign(0) = +1 by convention; the pruning pipeline consumes labels, so
    /// the tie-break must be fixed.
    pub fn from_sign(x: f64) -> Self {
        if x < 0.0 {
            Label::Neg
        } else {
            Label::Pos
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Label::Neg => Label::Pos,
            Label::Pos => Label::Neg,
        }
    }
}

impl From<Label> for i8 {
    fn from(l: Label) -> i8 {
        match l {
            Label::Neg => -1,
            Label::Pos => 1,
        }
    }
}

impl TryFrom<i8> for Label {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            -1 => Ok(Label::Neg),
            1 => Ok(Label::Pos),
            other => Err(format!("label must be -1 or +1, got {other}")),
        }
    }
}

/// Labeled vectors for binary classification. Single-class sets construct
/// fine but are rejected at training time.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    vectors: Vec<FeatureVector>,
    labels: Vec<Label>,
    dim: usize,
}

impl TrainingSet {
    pub fn new(vectors: Vec<FeatureVector>, labels: Vec<Label>) -> Result<Self> {
        if vectors.len() != labels.len() {
            return Err(Error::InvalidConfig(format!(
                "{} vectors but {} labels",
                vectors.len(),
                labels.len()
            )));
        }
        if vectors.len() < 2 {
            return Err(Error::InvalidConfig(
                "a training set needs at least 2 samples".into(),
            ));
        }
        let dim = vectors[0].len();
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
        }
        Ok(TrainingSet {
            vectors,
            labels,
            dim,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[FeatureVector] {
        &self.vectors
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn has_both_classes(&self) -> bool {
        self.labels.contains(&Label::Pos) && self.labels.contains(&Label::Neg)
    }

    /// A copy with the given labels substituted (used by noise injection).
    pub fn with_labels(&self, labels: Vec<Label>) -> Result<Self> {
        TrainingSet::new(self.vectors.clone(), labels)
    }
}

/// Per-dimension standardization fitted on training data and replayed at
/// inference. Constant dimensions are left centered but unscaled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    means: Vec<f64>,
    stds: Vec<f64>,
}

impl Scaler {
    pub fn fit(vectors: &[FeatureVector]) -> Self {
        let dim = vectors.first().map_or(0, FeatureVector::len);
        let n = vectors.len() as f64;
        let mut means = vec![0.0; dim];
        for v in vectors {
            for (m, x) in means.iter_mut().zip(v.as_slice()) {
                *m += x;
            }
        }
        for m in &mut means {
            *m /= n;
        }
        let mut vars = vec![0.0; dim];
        for v in vectors {
            for ((var, x), m) in vars.iter_mut().zip(v.as_slice()).zip(&means) {
                let d = x - m;
                *var += d * d;
            }
        }
        let stds = vars
            .into_iter()
            .map(|v| {
                let s = (v / n).sqrt();
                if s < 1e-12 {
                    1.0
                } else {
                    s
                }
            })
            .collect();
        Scaler { means, stds }
    }

    pub fn transform(&self, x: &FeatureVector) -> Result<FeatureVector> {
        if x.len() != self.means.len() {
            return Err(Error::DimensionMismatch {
                expected: self.means.len(),
                got: x.len(),
            });
        }
        let values = x
            .as_slice()
            .iter()
            .zip(&self.means)
            .zip(&self.stds)
            .map(|((x, m), s)| (x - m) / s)
            .collect();
        FeatureVector::new(values)
    }
}

/// Solver configuration. `standardize: None` means "on for rbf and
/// polynomial kernels, off for linear".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmConfig {
    /// Slack penalty from the primal objective.
    pub c: f64,
    pub kkt_tol: f64,
    /// Maximum number of consecutive optimization passes without a
    /// successful pairwise update before giving up.
    pub max_passes: usize,
    pub numeric_eps: f64,
    pub rng_seed: u64,
    pub standardize: Option<bool>,
}

impl Default for SvmConfig {
    fn default() -> Self {
        SvmConfig {
            c: 1.0,
            kkt_tol: 1e-3,
            max_passes: 200,
            numeric_eps: 1e-12,
            rng_seed: 0,
            standardize: None,
        }
    }
}

impl SvmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "C must be positive, got {}",
                self.c
            )));
        }
        if !(self.kkt_tol > 0.0 && self.kkt_tol.is_finite()) {
            return Err(Error::InvalidConfig("kkt_tol must be positive".into()));
        }
        if self.max_passes == 0 {
            return Err(Error::InvalidConfig("max_passes must be >= 1".into()));
        }
        if !(self.numeric_eps >= 0.0 && self.numeric_eps.is_finite()) {
            return Err(Error::InvalidConfig("numeric_eps must be >= 0".into()));
        }
        Ok(())
    }

    pub(crate) fn standardize_for(&self, kernel: &KernelSpec) -> bool {
        self.standardize
            .unwrap_or(!matches!(kernel, KernelSpec::Linear))
    }
}

/// A trained classifier: support vectors (stored in the standardized space
/// when a scaler is present), their dual coefficients and labels, the bias,
/// and the kernel. Zero-alpha points are dropped at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    kernel: KernelSpec,
    scaler: Option<Scaler>,
    support_vectors: Vec<FeatureVector>,
    alphas: Vec<f64>,
    sv_labels: Vec<Label>,
    bias: f64,
}

impl SvmModel {
    pub(crate) fn from_training(
        kernel: KernelSpec,
        scaler: Option<Scaler>,
        vectors: &[FeatureVector],
        alphas: &[f64],
        labels: &[Label],
        bias: f64,
    ) -> Self {
        let mut support_vectors = Vec::new();
        let mut kept_alphas = Vec::new();
        let mut sv_labels = Vec::new();
        for ((v, &a), &l) in vectors.iter().zip(alphas).zip(labels) {
            if a > 0.0 {
                support_vectors.push(v.clone());
                kept_alphas.push(a);
                sv_labels.push(l);
            }
        }
        SvmModel {
            kernel,
            scaler,
            support_vectors,
            alphas: kept_alphas,
            sv_labels,
            bias,
        }
    }

    pub fn n_support_vectors(&self) -> usize {
        self.support_vectors.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn sv_labels(&self) -> &[Label] {
        &self.sv_labels
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    /// Raw margin and its sign: `sum_i alpha_i y_i K(sv_i, x) + b`.
    pub fn decision(&self, x: &FeatureVector) -> Result<(f64, Label)> {
        let query = match &self.scaler {
            Some(s) => s.transform(x)?,
            None => x.clone(),
        };
        let mut margin = self.bias;
        for ((sv, &a), &l) in self
            .support_vectors
            .iter()
            .zip(&self.alphas)
            .zip(&self.sv_labels)
        {
            margin += a * l.to_f64() * kernel_eval(&self.kernel, sv, &query)?;
        }
        Ok((margin, Label::from_sign(margin)))
    }

    pub fn to_json(&self) -> String {
        modelio::to_versioned_json("svm", self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        modelio::from_versioned_json("svm", text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feature_vector_rejects_non_finite() {
        assert!(FeatureVector::new(vec![1.0, f64::NAN]).is_err());
        assert!(FeatureVector::new(vec![1.0, f64::INFINITY]).is_err());
        assert!(FeatureVector::new(vec![1.0, -2.0]).is_ok());
    }

    #[test]
    fn label_sign_convention() {
        assert_eq!(Label::from_sign(0.0), Label::Pos);
        assert_eq!(Label::from_sign(-0.1), Label::Neg);
        assert_eq!(Label::from_sign(0.1), Label::Pos);
        assert_eq!(Label::Pos.flipped(), Label::Neg);
    }

    #[test]
    fn training_set_shape_checks() {
        let v = |xs: &[f64]| FeatureVector::new(xs.to_vec()).unwrap();
        assert!(TrainingSet::new(vec![v(&[1.0])], vec![Label::Pos]).is_err());
        assert!(TrainingSet::new(
            vec![v(&[1.0]), v(&[1.0, 2.0])],
            vec![Label::Pos, Label::Neg]
        )
        .is_err());
        let ok = TrainingSet::new(vec![v(&[1.0]), v(&[2.0])], vec![Label::Pos, Label::Pos]);
        assert!(ok.is_ok());
        assert!(!ok.unwrap().has_both_classes());
    }

    #[test]
    fn scaler_standardizes_and_handles_constant_dims() {
        let vs: Vec<FeatureVector> = [[0.0, 5.0], [2.0, 5.0], [4.0, 5.0]]
            .iter()
            .map(|a| FeatureVector::new(a.to_vec()).unwrap())
            .collect();
        let scaler = Scaler::fit(&vs);
        let t = scaler.transform(&vs[0]).unwrap();
        // mean 2, population std sqrt(8/3)
        let expected = -2.0 / (8.0f64 / 3.0).sqrt();
        assert!((t.as_slice()[0] - expected).abs() < 1e-12);
        assert_eq!(t.as_slice()[1], 0.0); // constant dim: centered, unscaled
    }
}
