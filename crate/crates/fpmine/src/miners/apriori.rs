//! Level-wise Apriori: frequent 1-itemsets, then join candidates sharing a
//! (k-1)-prefix, prune those with an infrequent (k-1)-subset, and count each
//! level in one pass over the database.

use super::{min_count_for, FrequentItemsets, MiningConfig};
use crate::error::Result;
use crate::txdb::{ItemId, Itemset, TransactionDb};
use std::collections::BTreeSet;

pub fn apriori_mine(db: &TransactionDb, cfg: &MiningConfig) -> Result<FrequentItemsets> {
    cfg.validate()?;
    let n = db.len();
    let min_count = min_count_for(cfg.minsup, n);
    let mut result = FrequentItemsets::new(n, cfg.minsup);

    let mut frontier: Vec<Itemset> = Vec::new();
    if cfg.level_allowed(1) {
        for (i, &count) in db.singleton_counts().iter().enumerate() {
            if count >= min_count {
                let set = Itemset::from_sorted(vec![ItemId(i as u32)]);
                result.insert(set.clone(), count);
                frontier.push(set);
            }
        }
    }

    let mut level = 2usize;
    while !frontier.is_empty() && cfg.level_allowed(level) {
        let candidates = generate_candidates(&frontier);
        if candidates.is_empty() {
            break;
        }

        // One database pass: a membership bitmap per transaction, then a
        // containment test per candidate.
        let mut counts = vec![0u64; candidates.len()];
        let mut present = vec![false; db.n_items() as usize];
        for t in db.transactions() {
            if t.len() < level {
                continue;
            }
            for it in t.items() {
                present[it.index()] = true;
            }
            for (ci, cand) in candidates.iter().enumerate() {
                if cand.iter().all(|it| present[it.index()]) {
                    counts[ci] += 1;
                }
            }
            for it in t.items() {
                present[it.index()] = false;
            }
        }

        let mut next = Vec::new();
        for (cand, count) in candidates.into_iter().zip(counts) {
            if count >= min_count {
                result.insert(cand.clone(), count);
                next.push(cand);
            }
        }
        frontier = next;
        level += 1;
    }

    Ok(result)
}

/// Join + prune. The frontier is lexicographically sorted, so pairs sharing
/// a (k-1)-prefix are adjacent runs and candidates come out sorted too.
/// Shared with the classifier-guided search, which runs the same expansion
/// over its verified frontier.
pub(crate) fn generate_candidates(frontier: &[Itemset]) -> Vec<Itemset> {
    let frontier_set: BTreeSet<&Itemset> = frontier.iter().collect();
    let mut candidates = Vec::new();
    let k = frontier[0].len();

    for i in 0..frontier.len() {
        for j in (i + 1)..frontier.len() {
            let a = frontier[i].items();
            let b = frontier[j].items();
            if a[..k - 1] != b[..k - 1] {
                break; // sorted frontier: no further j shares the prefix
            }
            let mut items = a.to_vec();
            items.push(b[k - 1]);
            let cand = Itemset::from_sorted(items);
            if all_subsets_frequent(&cand, &frontier_set) {
                candidates.push(cand);
            }
        }
    }
    candidates
}

fn all_subsets_frequent(cand: &Itemset, frontier: &BTreeSet<&Itemset>) -> bool {
    let items = cand.items();
    (0..items.len()).all(|drop| {
        let sub: Vec<ItemId> = items
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != drop)
            .map(|(_, it)| *it)
            .collect();
        frontier.contains(&Itemset::from_sorted(sub))
    })
}
