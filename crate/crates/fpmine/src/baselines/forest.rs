//! Random forest: seeded bootstrap resamples, random feature subsets per
//! split, majority vote with ties to +1. Per-tree seeds derive
//! deterministically from the forest seed, so a forest of n trees shares
//! its first k trees with the forest of k trees under the same seed.

use super::tree::{grow_tree, DecisionTreeModel, FeaturePool, TreeConfig};
use crate::error::{Error, Result};
use crate::modelio;
use crate::rng::{derive_seed, Rng};
use crate::svm::{FeatureVector, Label, TrainingSet};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeaturesPerSplit {
    /// floor(sqrt(dimension)), at least 1.
    Sqrt,
    Fixed(usize),
}

impl FeaturesPerSplit {
    fn resolve(self, dim: usize) -> Result<usize> {
        match self {
            FeaturesPerSplit::Sqrt => Ok(((dim as f64).sqrt().floor() as usize).max(1)),
            FeaturesPerSplit::Fixed(k) => {
                if k == 0 {
                    Err(Error::InvalidConfig(
                        "features_per_split must be >= 1".into(),
                    ))
                } else if k > dim {
                    Err(Error::InvalidConfig(format!(
                        "features_per_split {k} exceeds dimension {dim}"
                    )))
                } else {
                    Ok(k)
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub bootstrap: bool,
    pub features_per_split: FeaturesPerSplit,
    pub rng_seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 50,
            bootstrap: true,
            features_per_split: FeaturesPerSplit::Sqrt,
            rng_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForestModel {
    trees: Vec<DecisionTreeModel>,
    /// Per-tree rng provenance: the derived seed each tree was grown with.
    tree_seeds: Vec<u64>,
    dim: usize,
}

impl RandomForestModel {
    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn trees(&self) -> &[DecisionTreeModel] {
        &self.trees
    }

    pub fn tree_seeds(&self) -> &[u64] {
        &self.tree_seeds
    }

    pub fn predict(&self, x: &FeatureVector) -> Result<Label> {
        self.predict_with_prefix(x, self.trees.len())
    }

    /// Majority vote over the first `k` trees (tie resolves to +1); the
    /// training-curve report votes over growing prefixes.
    pub fn predict_with_prefix(&self, x: &FeatureVector, k: usize) -> Result<Label> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let k = k.min(self.trees.len()).max(1);
        let mut pos = 0usize;
        for tree in &self.trees[..k] {
            if tree.predict(x)? == Label::Pos {
                pos += 1;
            }
        }
        Ok(if 2 * pos >= k { Label::Pos } else { Label::Neg })
    }

    pub fn to_json(&self) -> String {
        modelio::to_versioned_json("random_forest", self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        modelio::from_versioned_json("random_forest", text)
    }
}

pub fn train_forest(
    data: &TrainingSet,
    tree_cfg: &TreeConfig,
    cfg: &ForestConfig,
) -> Result<RandomForestModel> {
    tree_cfg.validate()?;
    if cfg.n_trees < 1 {
        return Err(Error::InvalidConfig("n_trees must be >= 1".into()));
    }
    let k = cfg.features_per_split.resolve(data.dim())?;

    let mut trees = Vec::with_capacity(cfg.n_trees);
    let mut tree_seeds = Vec::with_capacity(cfg.n_trees);
    for t in 0..cfg.n_trees {
        let seed = derive_seed(cfg.rng_seed, &format!("tree-{t}"));
        let mut rng = Rng::from_seed(seed);

        let indices: Vec<usize> = if cfg.bootstrap {
            (0..data.len())
                .map(|_| rng.next_usize_below(data.len()))
                .collect()
        } else {
            (0..data.len()).collect()
        };

        let tree = if k == data.dim() && !cfg.bootstrap {
            // Degenerates to a plain CART tree.
            grow_tree(data, &indices, tree_cfg, &mut FeaturePool::All)?
        } else {
            grow_tree(
                data,
                &indices,
                tree_cfg,
                &mut FeaturePool::Sampled { k, rng: &mut rng },
            )?
        };
        trees.push(tree);
        tree_seeds.push(seed);
    }

    Ok(RandomForestModel {
        trees,
        tree_seeds,
        dim: data.dim(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::train_tree;

    fn fv(values: &[f64]) -> FeatureVector {
        FeatureVector::new(values.to_vec()).unwrap()
    }

    fn staircase() -> TrainingSet {
        TrainingSet::new(
            vec![fv(&[0.0]), fv(&[1.0]), fv(&[2.0]), fv(&[3.0])],
            vec![Label::Neg, Label::Neg, Label::Pos, Label::Pos],
        )
        .unwrap()
    }

    fn blobs(n: usize, dim: usize, seed: u64) -> TrainingSet {
        let mut rng = Rng::from_seed(seed);
        let mut vectors = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n {
            let pos = i % 2 == 0;
            let center = if pos { 2.0 } else { -2.0 };
            vectors.push(fv(&(0..dim)
                .map(|_| center + rng.next_f64())
                .collect::<Vec<_>>()));
            labels.push(if pos { Label::Pos } else { Label::Neg });
        }
        TrainingSet::new(vectors, labels).unwrap()
    }

    #[test]
    fn single_unbootstrapped_full_feature_forest_equals_tree() {
        let data = blobs(30, 3, 42);
        let tree_cfg = TreeConfig::default();
        let forest_cfg = ForestConfig {
            n_trees: 1,
            bootstrap: false,
            features_per_split: FeaturesPerSplit::Fixed(3),
            rng_seed: 7,
        };
        let forest = train_forest(&data, &tree_cfg, &forest_cfg).unwrap();
        let tree = train_tree(&data, &tree_cfg).unwrap();
        let mut rng = Rng::from_seed(9);
        for _ in 0..50 {
            let q = fv(&[
                rng.next_f64() * 8.0 - 4.0,
                rng.next_f64() * 8.0 - 4.0,
                rng.next_f64() * 8.0 - 4.0,
            ]);
            assert_eq!(forest.predict(&q).unwrap(), tree.predict(&q).unwrap());
        }
    }

    #[test]
    fn forests_are_deterministic_per_seed() {
        let data = blobs(40, 4, 3);
        let cfg = ForestConfig {
            n_trees: 10,
            ..ForestConfig::default()
        };
        let f1 = train_forest(&data, &TreeConfig::default(), &cfg).unwrap();
        let f2 = train_forest(&data, &TreeConfig::default(), &cfg).unwrap();
        assert_eq!(f1.to_json(), f2.to_json());
    }

    #[test]
    fn bootstrap_forest_recovers_staircase_threshold() {
        // Empirical: 25 bootstrapped stumps on the 4-point staircase vote
        // the right way on at least 3 of the 4 training points.
        let data = staircase();
        let cfg = ForestConfig {
            n_trees: 25,
            bootstrap: true,
            features_per_split: FeaturesPerSplit::Fixed(1),
            rng_seed: 11,
        };
        let forest = train_forest(&data, &TreeConfig::default(), &cfg).unwrap();
        let correct = data
            .vectors()
            .iter()
            .zip(data.labels())
            .filter(|(v, l)| forest.predict(v).unwrap() == **l)
            .count();
        assert!(correct >= 3, "training accuracy {correct}/4");
    }

    #[test]
    fn prefix_vote_of_identical_trees_matches_single_tree() {
        let data = blobs(20, 2, 5);
        let cfg = ForestConfig {
            n_trees: 5,
            bootstrap: false,
            features_per_split: FeaturesPerSplit::Fixed(2),
            rng_seed: 1,
        };
        // Without bootstrap and with all features, every tree is identical.
        let forest = train_forest(&data, &TreeConfig::default(), &cfg).unwrap();
        for v in data.vectors() {
            let single = forest.trees()[0].predict(v).unwrap();
            for k in 1..=5 {
                assert_eq!(forest.predict_with_prefix(v, k).unwrap(), single);
            }
        }
    }

    #[test]
    fn oversized_feature_count_rejected() {
        let data = blobs(10, 2, 8);
        let cfg = ForestConfig {
            features_per_split: FeaturesPerSplit::Fixed(3),
            ..ForestConfig::default()
        };
        assert!(matches!(
            train_forest(&data, &TreeConfig::default(), &cfg),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn sqrt_feature_default_resolves() {
        assert_eq!(FeaturesPerSplit::Sqrt.resolve(9).unwrap(), 3);
        assert_eq!(FeaturesPerSplit::Sqrt.resolve(2).unwrap(), 1);
        assert_eq!(FeaturesPerSplit::Sqrt.resolve(1).unwrap(), 1);
    }

    #[test]
    fn json_round_trip_preserves_predictions() {
        let data = blobs(24, 3, 13);
        let forest = train_forest(&data, &TreeConfig::default(), &ForestConfig::default()).unwrap();
        let back = RandomForestModel::from_json(&forest.to_json()).unwrap();
        for v in data.vectors() {
            assert_eq!(forest.predict(v).unwrap(), back.predict(v).unwrap());
        }
    }
}
