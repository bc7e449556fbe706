//! Brute-force oracle: enumerate every non-empty subset of the appearing
//! items and count each one against the database. Exponential by design,
//! guarded to small universes; exists so the real miners have something
//! independent to be checked against.

use super::{FrequentItemsets, MiningConfig};
use crate::error::{Error, Result};
use crate::txdb::{ItemId, Itemset, TransactionDb};

pub const BRUTE_FORCE_MAX_ITEMS: u32 = 20;

pub fn brute_force_mine(db: &TransactionDb, cfg: &MiningConfig) -> Result<FrequentItemsets> {
    cfg.validate()?;
    if db.n_items() > BRUTE_FORCE_MAX_ITEMS {
        return Err(Error::UniverseTooLarge {
            n_items: db.n_items(),
            limit: BRUTE_FORCE_MAX_ITEMS,
        });
    }

    let appearing: Vec<ItemId> = db
        .singleton_counts()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, _)| ItemId(i as u32))
        .collect();

    let n = db.len();
    let mut result = FrequentItemsets::new(n, cfg.minsup);
    let k = appearing.len();
    for mask in 1u32..(1u32 << k) {
        let card = mask.count_ones() as usize;
        if !cfg.level_allowed(card) {
            continue;
        }
        let items: Vec<ItemId> = (0..k)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| appearing[i])
            .collect();
        let itemset = Itemset::from_sorted(items);
        let count = db.support_count(&itemset)?;
        if count as f64 / n as f64 >= cfg.minsup {
            result.insert(itemset, count);
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::txdb::test_fixtures::db5;

    #[test]
    fn db5_at_point_six() {
        // Hand enumeration over the 5 transactions: singletons appear in 4,
        // pairs in 3, the triple in 2.
        let fi = brute_force_mine(&db5(), &MiningConfig::new(0.6)).unwrap();
        assert_eq!(fi.len(), 6);
        for ids in [vec![0u32], vec![1], vec![2]] {
            assert_eq!(fi.count_of(&Itemset::new(ids)).unwrap(), 4);
        }
        for ids in [vec![0u32, 1], vec![0, 2], vec![1, 2]] {
            assert_eq!(fi.count_of(&Itemset::new(ids)).unwrap(), 3);
        }
        assert!(!fi.contains(&Itemset::new([0, 1, 2])));
    }

    #[test]
    fn db5_at_one_is_empty() {
        // Max pairwise support is 0.6, triple 0.4, singletons 0.8.
        let fi = brute_force_mine(&db5(), &MiningConfig::new(1.0)).unwrap();
        assert!(fi.is_empty());
    }

    #[test]
    fn guard_rejects_large_universe() {
        let db = TransactionDb::from_item_vecs(&[vec![0, 24]]).unwrap();
        assert!(matches!(
            brute_force_mine(&db, &MiningConfig::new(0.5)),
            Err(Error::UniverseTooLarge { .. })
        ));
    }

    #[test]
    fn max_len_caps_cardinality() {
        let fi = brute_force_mine(&db5(), &MiningConfig::new(0.4).with_max_len(1)).unwrap();
        assert!(fi.iter().all(|(s, _)| s.len() == 1));
        assert_eq!(fi.len(), 3);
    }
}
