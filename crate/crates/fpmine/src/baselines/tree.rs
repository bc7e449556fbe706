//! CART binary classification tree. Greedy recursive splitting minimizing
//! weighted Gini impurity; split candidates are midpoints between
//! consecutive sorted unique feature values; descent goes left when
//! `feature < threshold`.

use crate::error::{Error, Result};
use crate::modelio;
use crate::rng::Rng;
use crate::svm::{FeatureVector, Label, TrainingSet};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeConfig {
    pub max_depth: usize,
    pub min_samples_split: usize,
    pub rng_seed: u64,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            max_depth: 12,
            min_samples_split: 2,
            rng_seed: 0,
        }
    }
}

impl TreeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_depth < 1 {
            return Err(Error::InvalidConfig("max_depth must be >= 1".into()));
        }
        if self.min_samples_split < 2 {
            return Err(Error::InvalidConfig(
                "min_samples_split must be >= 2".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Node {
    Leaf {
        label: Label,
        /// (negative, positive) sample counts that reached this leaf.
        counts: (usize, usize),
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTreeModel {
    nodes: Vec<Node>,
    dim: usize,
}

impl DecisionTreeModel {
    pub fn predict(&self, x: &FeatureVector) -> Result<Label> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let values = x.as_slice();
        let mut idx = 0usize;
        loop {
            match &self.nodes[idx] {
                Node::Leaf { label, .. } => return Ok(*label),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    idx = if values[*feature] < *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn depth(&self) -> usize {
        self.depth_from(0)
    }

    fn depth_from(&self, idx: usize) -> usize {
        match &self.nodes[idx] {
            Node::Leaf { .. } => 0,
            Node::Split { left, right, .. } => {
                1 + self.depth_from(*left).max(self.depth_from(*right))
            }
        }
    }

    pub fn to_json(&self) -> String {
        modelio::to_versioned_json("decision_tree", self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        modelio::from_versioned_json("decision_tree", text)
    }
}

/// Which features a split may consider; the forest passes a random subset.
pub(crate) enum FeaturePool<'a> {
    All,
    Sampled { k: usize, rng: &'a mut Rng },
}

pub fn train_tree(data: &TrainingSet, cfg: &TreeConfig) -> Result<DecisionTreeModel> {
    cfg.validate()?;
    let indices: Vec<usize> = (0..data.len()).collect();
    grow_tree(data, &indices, cfg, &mut FeaturePool::All)
}

pub(crate) fn grow_tree(
    data: &TrainingSet,
    indices: &[usize],
    cfg: &TreeConfig,
    pool: &mut FeaturePool<'_>,
) -> Result<DecisionTreeModel> {
    let mut nodes = Vec::new();
    grow(data, indices, 0, cfg, pool, &mut nodes);
    Ok(DecisionTreeModel {
        nodes,
        dim: data.dim(),
    })
}

fn grow(
    data: &TrainingSet,
    indices: &[usize],
    depth: usize,
    cfg: &TreeConfig,
    pool: &mut FeaturePool<'_>,
    nodes: &mut Vec<Node>,
) -> usize {
    let labels = data.labels();
    let n_pos = indices.iter().filter(|&&i| labels[i] == Label::Pos).count();
    let n_neg = indices.len() - n_pos;

    let make_leaf = |nodes: &mut Vec<Node>| {
        let label = if n_pos >= n_neg {
            Label::Pos
        } else {
            Label::Neg
        };
        let idx = nodes.len();
        nodes.push(Node::Leaf {
            label,
            counts: (n_neg, n_pos),
        });
        idx
    };

    if n_pos == 0 || n_neg == 0 || depth >= cfg.max_depth || indices.len() < cfg.min_samples_split {
        return make_leaf(nodes);
    }

    let candidates: Vec<usize> = match pool {
        FeaturePool::All => (0..data.dim()).collect(),
        FeaturePool::Sampled { k, rng } => rng.sample_indices(data.dim(), *k),
    };

    let best = find_best_split(data, indices, &candidates);
    let Some((feature, threshold)) = best else {
        return make_leaf(nodes);
    };

    let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
        .iter()
        .partition(|&&i| data.vectors()[i].as_slice()[feature] < threshold);

    // Reserve the split slot, then grow children.
    let idx = nodes.len();
    nodes.push(Node::Leaf {
        label: Label::Pos,
        counts: (0, 0),
    });
    let left = grow(data, &left_idx, depth + 1, cfg, pool, nodes);
    let right = grow(data, &right_idx, depth + 1, cfg, pool, nodes);
    nodes[idx] = Node::Split {
        feature,
        threshold,
        left,
        right,
    };
    idx
}

/// Scans candidate features in order and thresholds ascending; the first
/// strictly better weighted Gini wins, so the choice is deterministic.
fn find_best_split(
    data: &TrainingSet,
    indices: &[usize],
    candidates: &[usize],
) -> Option<(usize, f64)> {
    let labels = data.labels();
    let total = indices.len() as f64;
    let mut best: Option<(f64, usize, f64)> = None;

    for &feature in candidates {
        let mut order: Vec<usize> = indices.to_vec();
        order.sort_by(|&a, &b| {
            data.vectors()[a].as_slice()[feature].total_cmp(&data.vectors()[b].as_slice()[feature])
        });

        let mut left_pos = 0usize;
        let mut left_n = 0usize;
        let total_pos = order.iter().filter(|&&i| labels[i] == Label::Pos).count();

        for w in 0..order.len() - 1 {
            let i = order[w];
            left_n += 1;
            if labels[i] == Label::Pos {
                left_pos += 1;
            }
            let v_here = data.vectors()[i].as_slice()[feature];
            let v_next = data.vectors()[order[w + 1]].as_slice()[feature];
            if v_here == v_next {
                continue;
            }
            let threshold = 0.5 * (v_here + v_next);

            let right_n = order.len() - left_n;
            let right_pos = total_pos - left_pos;
            let gini_l = gini_binary(left_pos, left_n);
            let gini_r = gini_binary(right_pos, right_n);
            let weighted = (left_n as f64 * gini_l + right_n as f64 * gini_r) / total;

            if best.is_none_or(|(g, _, _)| weighted < g) {
                best = Some((weighted, feature, threshold));
            }
        }
    }
    best.map(|(_, f, t)| (f, t))
}

fn gini_binary(pos: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = pos as f64 / n as f64;
    2.0 * p * (1.0 - p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(values: &[f64]) -> FeatureVector {
        FeatureVector::new(values.to_vec()).unwrap()
    }

    fn tset(points: &[(&[f64], Label)]) -> TrainingSet {
        TrainingSet::new(
            points.iter().map(|(v, _)| fv(v)).collect(),
            points.iter().map(|(_, l)| *l).collect(),
        )
        .unwrap()
    }

    #[test]
    fn two_points_force_single_midpoint_split() {
        let data = tset(&[(&[0.0, 7.0], Label::Neg), (&[2.0, 7.0], Label::Pos)]);
        let tree = train_tree(&data, &TreeConfig::default()).unwrap();
        assert_eq!(tree.depth(), 1);
        assert_eq!(tree.predict(&fv(&[0.0, 7.0])).unwrap(), Label::Neg);
        assert_eq!(tree.predict(&fv(&[2.0, 7.0])).unwrap(), Label::Pos);
        // Split sits at the midpoint of feature 0.
        assert_eq!(tree.predict(&fv(&[0.99, 0.0])).unwrap(), Label::Neg);
        assert_eq!(tree.predict(&fv(&[1.01, 0.0])).unwrap(), Label::Pos);
    }

    #[test]
    fn one_dimensional_staircase() {
        // Gini over the 3 candidate midpoints 0.5 / 1.5 / 2.5 is minimized
        // at 1.5 (both children pure).
        let data = tset(&[
            (&[0.0], Label::Neg),
            (&[1.0], Label::Neg),
            (&[2.0], Label::Pos),
            (&[3.0], Label::Pos),
        ]);
        let tree = train_tree(&data, &TreeConfig::default()).unwrap();
        assert_eq!(tree.depth(), 1);
        match &tree.nodes[0] {
            Node::Split {
                feature, threshold, ..
            } => {
                assert_eq!(*feature, 0);
                assert_eq!(*threshold, 1.5);
            }
            other => panic!("expected a split at the root, got {other:?}"),
        }
        for (v, l) in [(0.0, Label::Neg), (1.0, Label::Neg), (2.0, Label::Pos)] {
            assert_eq!(tree.predict(&fv(&[v])).unwrap(), l);
        }
        // Boundary convention: 1.5 is not < 1.5, so it descends right.
        assert_eq!(tree.predict(&fv(&[1.5])).unwrap(), Label::Pos);
    }

    #[test]
    fn distinct_points_reach_perfect_training_accuracy() {
        let mut rng = Rng::from_seed(5);
        let points: Vec<(Vec<f64>, Label)> = (0..40)
            .map(|i| {
                let v: Vec<f64> = (0..3).map(|_| rng.next_f64() * 10.0).collect();
                let l = if i % 3 == 0 { Label::Pos } else { Label::Neg };
                (v, l)
            })
            .collect();
        let data = TrainingSet::new(
            points.iter().map(|(v, _)| fv(v)).collect(),
            points.iter().map(|(_, l)| *l).collect(),
        )
        .unwrap();
        let cfg = TreeConfig {
            max_depth: 64,
            ..TreeConfig::default()
        };
        let tree = train_tree(&data, &cfg).unwrap();
        for (v, l) in data.vectors().iter().zip(data.labels()) {
            assert_eq!(tree.predict(v).unwrap(), *l);
        }
    }

    #[test]
    fn depth_cap_is_respected() {
        let data = tset(&[
            (&[0.0], Label::Neg),
            (&[1.0], Label::Pos),
            (&[2.0], Label::Neg),
            (&[3.0], Label::Pos),
        ]);
        let cfg = TreeConfig {
            max_depth: 1,
            ..TreeConfig::default()
        };
        let tree = train_tree(&data, &cfg).unwrap();
        assert!(tree.depth() <= 1);
    }

    #[test]
    fn scale_covariance() {
        // Multiplying one feature by c > 0 in training and query leaves
        // predictions unchanged (midpoints scale with the data).
        let base = [
            (vec![0.0, 3.0], Label::Neg),
            (vec![1.0, 1.0], Label::Neg),
            (vec![2.0, 4.0], Label::Pos),
            (vec![3.0, 2.0], Label::Pos),
        ];
        let c = 37.5;
        let scaled: Vec<(Vec<f64>, Label)> = base
            .iter()
            .map(|(v, l)| (vec![v[0] * c, v[1]], *l))
            .collect();
        let mk = |pts: &[(Vec<f64>, Label)]| {
            TrainingSet::new(
                pts.iter().map(|(v, _)| fv(v)).collect(),
                pts.iter().map(|(_, l)| *l).collect(),
            )
            .unwrap()
        };
        let t1 = train_tree(&mk(&base), &TreeConfig::default()).unwrap();
        let t2 = train_tree(&mk(&scaled), &TreeConfig::default()).unwrap();
        for q in [[0.4, 2.0], [1.7, 3.5], [2.9, 0.1]] {
            let p1 = t1.predict(&fv(&q)).unwrap();
            let p2 = t2.predict(&fv(&[q[0] * c, q[1]])).unwrap();
            assert_eq!(p1, p2);
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let data = tset(&[(&[0.0], Label::Neg), (&[1.0], Label::Pos)]);
        let tree = train_tree(&data, &TreeConfig::default()).unwrap();
        assert!(matches!(
            tree.predict(&fv(&[0.0, 1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let data = tset(&[
            (&[0.0], Label::Neg),
            (&[1.0], Label::Neg),
            (&[2.0], Label::Pos),
            (&[3.0], Label::Pos),
        ]);
        let tree = train_tree(&data, &TreeConfig::default()).unwrap();
        let back = DecisionTreeModel::from_json(&tree.to_json()).unwrap();
        assert_eq!(tree, back);
    }
}
