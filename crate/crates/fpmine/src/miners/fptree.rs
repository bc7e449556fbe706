//! FP-tree construction and FP-Growth mining.
//!
//! The tree stores frequency-ordered prefix paths with count accumulation;
//! a header table threads every node of an item in insertion order. Mining
//! walks items least-frequent-first, extracting conditional pattern bases
//! and recursing on conditional trees. No candidate generation happens.

use super::{min_count_for, FrequentItemsets, MiningConfig};
use crate::error::Result;
use crate::txdb::{ItemId, Itemset, TransactionDb};
use std::collections::HashMap;

#[derive(Debug, Clone)]
struct FpNode {
    item: Option<ItemId>, // None only for the root
    count: u64,
    parent: usize,
    /// Children ordered by item id.
    children: Vec<(ItemId, usize)>,
}

#[derive(Debug, Clone)]
pub struct FpTree {
    nodes: Vec<FpNode>,
    /// Item -> indices of every node carrying that item, in insertion order.
    header: HashMap<ItemId, Vec<usize>>,
    /// Frequency-descending item ranking (ties broken by ascending id);
    /// the insertion order of every path.
    item_order: Vec<ItemId>,
    rank: HashMap<ItemId, usize>,
}

impl FpTree {
    fn empty() -> Self {
        FpTree {
            nodes: vec![FpNode {
                item: None,
                count: 0,
                parent: 0,
                children: Vec::new(),
            }],
            header: HashMap::new(),
            item_order: Vec::new(),
            rank: HashMap::new(),
        }
    }

    /// Builds a tree from weighted item lists, dropping items whose weighted
    /// count falls below `min_count`.
    fn from_weighted(paths: &[(Vec<ItemId>, u64)], min_count: u64) -> Self {
        let mut counts: HashMap<ItemId, u64> = HashMap::new();
        for (items, w) in paths {
            for &it in items {
                *counts.entry(it).or_insert(0) += w;
            }
        }

        let mut kept: Vec<(ItemId, u64)> = counts
            .into_iter()
            .filter(|&(_, c)| c >= min_count)
            .collect();
        kept.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

        let mut tree = FpTree::empty();
        tree.item_order = kept.iter().map(|&(it, _)| it).collect();
        tree.rank = tree
            .item_order
            .iter()
            .enumerate()
            .map(|(r, &it)| (it, r))
            .collect();

        for (items, w) in paths {
            let mut filtered: Vec<ItemId> = items
                .iter()
                .copied()
                .filter(|it| tree.rank.contains_key(it))
                .collect();
            filtered.sort_by_key(|it| tree.rank[it]);
            tree.insert_path(&filtered, *w);
        }
        tree
    }

    fn insert_path(&mut self, items: &[ItemId], weight: u64) {
        let mut current = 0usize;
        for &item in items {
            let next = match self.nodes[current]
                .children
                .binary_search_by_key(&item, |&(it, _)| it)
            {
                Ok(pos) => {
                    let idx = self.nodes[current].children[pos].1;
                    self.nodes[idx].count += weight;
                    idx
                }
                Err(pos) => {
                    let idx = self.nodes.len();
                    self.nodes.push(FpNode {
                        item: Some(item),
                        count: weight,
                        parent: current,
                        children: Vec::new(),
                    });
                    self.nodes[current].children.insert(pos, (item, idx));
                    self.header.entry(item).or_default().push(idx);
                    idx
                }
            };
            current = next;
        }
    }

    pub fn item_order(&self) -> &[ItemId] {
        &self.item_order
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Sum of counts over the header chain: equals the number of loaded
    /// transactions containing the item (after infrequent-item filtering).
    pub fn header_count(&self, item: ItemId) -> u64 {
        self.header
            .get(&item)
            .map(|chain| chain.iter().map(|&i| self.nodes[i].count).sum())
            .unwrap_or(0)
    }

    /// Count on the node reached by following `path` from the root, where
    /// `path` is given in the tree's insertion order. None if absent.
    pub fn path_count(&self, path: &[ItemId]) -> Option<u64> {
        let mut current = 0usize;
        for &item in path {
            match self.nodes[current]
                .children
                .binary_search_by_key(&item, |&(it, _)| it)
            {
                Ok(pos) => current = self.nodes[current].children[pos].1,
                Err(_) => return None,
            }
        }
        if current == 0 {
            None
        } else {
            Some(self.nodes[current].count)
        }
    }

    /// Prefix paths co-occurring with `item`: (path from root, count), the
    /// conditional pattern base of FP-Growth.
    fn conditional_pattern_base(&self, item: ItemId) -> Vec<(Vec<ItemId>, u64)> {
        let mut base = Vec::new();
        if let Some(chain) = self.header.get(&item) {
            for &node_idx in chain {
                let weight = self.nodes[node_idx].count;
                let mut path = Vec::new();
                let mut cur = self.nodes[node_idx].parent;
                while cur != 0 {
                    path.push(self.nodes[cur].item.expect("non-root node has an item"));
                    cur = self.nodes[cur].parent;
                }
                if !path.is_empty() {
                    path.reverse();
                    base.push((path, weight));
                }
            }
        }
        base
    }

    #[cfg(test)]
    fn check_structure(&self) {
        for node in &self.nodes[1..] {
            let child_sum: u64 = node
                .children
                .iter()
                .map(|&(_, i)| self.nodes[i].count)
                .sum();
            assert!(node.count >= child_sum, "node count below child sum");
            for w in node.children.windows(2) {
                assert!(w[0].0 < w[1].0, "children not ordered by item");
            }
        }
    }
}

pub fn build_fptree(db: &TransactionDb, cfg: &MiningConfig) -> Result<FpTree> {
    cfg.validate()?;
    let min_count = min_count_for(cfg.minsup, db.len());
    let paths: Vec<(Vec<ItemId>, u64)> = db
        .transactions()
        .iter()
        .map(|t| (t.items().to_vec(), 1))
        .collect();
    Ok(FpTree::from_weighted(&paths, min_count))
}

pub fn fpgrowth_mine(db: &TransactionDb, cfg: &MiningConfig) -> Result<FrequentItemsets> {
    cfg.validate()?;
    let n = db.len();
    let min_count = min_count_for(cfg.minsup, n);
    let tree = build_fptree(db, cfg)?;
    let mut result = FrequentItemsets::new(n, cfg.minsup);
    let mut suffix = Vec::new();
    mine_tree(&tree, &mut suffix, min_count, cfg, &mut result);
    Ok(result)
}

fn mine_tree(
    tree: &FpTree,
    suffix: &mut Vec<ItemId>,
    min_count: u64,
    cfg: &MiningConfig,
    out: &mut FrequentItemsets,
) {
    let card = suffix.len() + 1;
    if !cfg.level_allowed(card) {
        return;
    }
    for &item in tree.item_order.iter().rev() {
        let count = tree.header_count(item);
        debug_assert!(count >= min_count);

        let mut items = suffix.clone();
        items.push(item);
        items.sort_unstable();
        out.insert(Itemset::from_sorted(items), count);

        if cfg.level_allowed(card + 1) {
            let base = tree.conditional_pattern_base(item);
            if !base.is_empty() {
                let cond = FpTree::from_weighted(&base, min_count);
                if !cond.item_order.is_empty() {
                    suffix.push(item);
                    mine_tree(&cond, suffix, min_count, cfg, out);
                    suffix.pop();
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::miners::{apriori_mine, brute_force_mine};
    use crate::txdb::test_fixtures::db5;

    const A: ItemId = ItemId(0);
    const B: ItemId = ItemId(1);
    const C: ItemId = ItemId(2);

    #[test]
    fn db5_tree_structure() {
        // Hand insertion with the tie-break a < b < c (all counts equal):
        // root -> a(4) -> b(3) -> c(2); a -> c(1); root -> b(1) -> c(1).
        let tree = build_fptree(&db5(), &MiningConfig::new(0.6)).unwrap();
        tree.check_structure();
        assert_eq!(tree.item_order(), &[A, B, C]);
        assert_eq!(tree.header_count(A), 4);
        assert_eq!(tree.header_count(B), 4);
        assert_eq!(tree.header_count(C), 4);
        assert_eq!(tree.path_count(&[A]), Some(4));
        assert_eq!(tree.path_count(&[A, B]), Some(3));
        assert_eq!(tree.path_count(&[A, B, C]), Some(2));
        assert_eq!(tree.path_count(&[A, C]), Some(1));
        assert_eq!(tree.path_count(&[B]), Some(1));
        assert_eq!(tree.path_count(&[B, C]), Some(1));
        assert_eq!(tree.n_nodes(), 7); // root + 6
    }

    #[test]
    fn everything_filtered_leaves_bare_root() {
        let tree = build_fptree(&db5(), &MiningConfig::new(0.9)).unwrap();
        assert_eq!(tree.n_nodes(), 1);
        assert!(tree.item_order().is_empty());
    }

    #[test]
    fn repeated_transaction_merges_into_one_path() {
        let db = TransactionDb::from_item_vecs(&vec![vec![1, 2, 3]; 4]).unwrap();
        let tree = build_fptree(&db, &MiningConfig::new(0.5)).unwrap();
        assert_eq!(tree.n_nodes(), 4);
        assert_eq!(tree.path_count(&[ItemId(1), ItemId(2), ItemId(3)]), Some(4));
    }

    #[test]
    fn matches_apriori_on_db5() {
        for minsup in [0.2, 0.4, 0.6, 0.8, 1.0] {
            let cfg = MiningConfig::new(minsup);
            assert_eq!(
                fpgrowth_mine(&db5(), &cfg).unwrap(),
                apriori_mine(&db5(), &cfg).unwrap(),
                "minsup = {minsup}"
            );
        }
    }

    #[test]
    fn identical_transactions_yield_all_subsets() {
        let db = TransactionDb::from_item_vecs(&vec![vec![0, 2, 5]; 3]).unwrap();
        let fi = fpgrowth_mine(&db, &MiningConfig::new(1.0)).unwrap();
        assert_eq!(fi.len(), 7); // 2^3 - 1 subsets, all with support 1.0
        for (_, count) in fi.iter() {
            assert_eq!(count, 3);
        }
    }

    #[test]
    fn random_sweep_matches_brute_force() {
        use crate::rng::Rng;
        let mut rng = Rng::from_seed(77);
        for round in 0..10 {
            let n_items = 4 + rng.next_usize_below(6) as u32;
            let n_tx = 20 + rng.next_usize_below(60);
            let rows: Vec<Vec<u32>> = (0..n_tx)
                .map(|_| {
                    let len = 1 + rng.next_usize_below(n_items as usize);
                    (0..len)
                        .map(|_| rng.next_below(u64::from(n_items)) as u32)
                        .collect()
                })
                .collect();
            let db = TransactionDb::from_item_vecs(&rows).unwrap();
            for minsup in [0.15, 0.4] {
                let cfg = MiningConfig::new(minsup);
                let oracle = brute_force_mine(&db, &cfg).unwrap();
                assert_eq!(
                    fpgrowth_mine(&db, &cfg).unwrap(),
                    oracle,
                    "round {round} minsup {minsup}"
                );
                assert_eq!(
                    apriori_mine(&db, &cfg).unwrap(),
                    oracle,
                    "round {round} minsup {minsup}"
                );
            }
        }
    }

    #[test]
    fn max_len_respected() {
        let fi = fpgrowth_mine(&db5(), &MiningConfig::new(0.4).with_max_len(2)).unwrap();
        assert!(fi.iter().all(|(s, _)| s.len() <= 2));
        assert_eq!(
            fi,
            apriori_mine(&db5(), &MiningConfig::new(0.4).with_max_len(2)).unwrap()
        );
    }
}
