//! Exact frequent-itemset miners: level-wise Apriori and FP-Growth over an
//! FP-tree, plus a brute-force enumeration oracle used by the test suites.
//! All miners agree itemset-for-itemset and count-for-count on every
//! database; the support threshold comparison is inclusive (>= minsup).

pub(crate) mod apriori;
mod brute;
mod fptree;

pub use apriori::apriori_mine;
pub use brute::{brute_force_mine, BRUTE_FORCE_MAX_ITEMS};
pub use fptree::{build_fptree, fpgrowth_mine, FpTree};

use crate::error::{Error, Result};
use crate::txdb::Itemset;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct MiningConfig {
    /// Minimum relative support in (0, 1]. Zero is rejected: the output
    /// would be every subset present in the data.
    pub minsup: f64,
    /// Optional cap on itemset cardinality.
    pub max_len: Option<usize>,
}

impl MiningConfig {
    pub fn new(minsup: f64) -> Self {
        MiningConfig {
            minsup,
            max_len: None,
        }
    }

    pub fn with_max_len(mut self, max_len: usize) -> Self {
        self.max_len = Some(max_len);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.minsup.is_finite() || self.minsup <= 0.0 || self.minsup > 1.0 {
            return Err(Error::InvalidConfig(format!(
                "minsup must be in (0, 1], got {}",
                self.minsup
            )));
        }
        if self.max_len == Some(0) {
            return Err(Error::InvalidConfig("max_len must be >= 1".into()));
        }
        Ok(())
    }

    pub(crate) fn level_allowed(&self, len: usize) -> bool {
        self.max_len.is_none_or(|cap| len <= cap)
    }
}

/// Smallest absolute count c with c/n >= minsup. Derived carefully so the
/// integer threshold agrees exactly with the floating-point comparison used
/// everywhere else, including at boundaries like 0.3 * 10.
pub(crate) fn min_count_for(minsup: f64, n: usize) -> u64 {
    let mut c = (minsup * n as f64).ceil() as u64;
    while c > 0 && ((c - 1) as f64 / n as f64) >= minsup {
        c -= 1;
    }
    while (c as f64) / (n as f64) < minsup {
        c += 1;
    }
    c
}

/// Output of every miner: itemset -> exact transaction count, stored with
/// the database size so relative supports are reproducible rationals.
/// Iteration order is lexicographic by item sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequentItemsets {
    entries: BTreeMap<Itemset, u64>,
    db_len: usize,
    minsup: f64,
}

impl FrequentItemsets {
    pub(crate) fn new(db_len: usize, minsup: f64) -> Self {
        FrequentItemsets {
            entries: BTreeMap::new(),
            db_len,
            minsup,
        }
    }

    pub(crate) fn insert(&mut self, itemset: Itemset, count: u64) {
        debug_assert!(!itemset.is_empty(), "miners never emit the empty set");
        self.entries.insert(itemset, count);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn db_len(&self) -> usize {
        self.db_len
    }

    pub fn minsup(&self) -> f64 {
        self.minsup
    }

    pub fn count_of(&self, itemset: &Itemset) -> Option<u64> {
        self.entries.get(itemset).copied()
    }

    pub fn support_of(&self, itemset: &Itemset) -> Option<f64> {
        self.count_of(itemset)
            .map(|c| c as f64 / self.db_len as f64)
    }

    pub fn contains(&self, itemset: &Itemset) -> bool {
        self.entries.contains_key(itemset)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Itemset, u64)> + '_ {
        self.entries.iter().map(|(k, v)| (k, *v))
    }

    /// Conventional FIMI output: items, then "#SUP:" and the absolute count.
    pub fn to_fimi_text(&self) -> String {
        let mut out = String::new();
        for (itemset, count) in self.iter() {
            out.push_str(&format!("{itemset} #SUP: {count}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_count_matches_float_comparison() {
        for &(minsup, n) in &[
            (0.3, 10usize),
            (0.1, 200),
            (0.5, 5),
            (0.6, 5),
            (1.0, 7),
            (0.333333, 3),
            (0.01, 1000),
        ] {
            let c = min_count_for(minsup, n);
            assert!(c as f64 / n as f64 >= minsup, "minsup={minsup} n={n} c={c}");
            if c > 0 {
                assert!(
                    ((c - 1) as f64 / n as f64) < minsup,
                    "minsup={minsup} n={n} c={c} not minimal"
                );
            }
        }
    }

    #[test]
    fn config_rejects_zero_and_above_one() {
        assert!(MiningConfig::new(0.0).validate().is_err());
        assert!(MiningConfig::new(1.0001).validate().is_err());
        assert!(MiningConfig::new(f64::NAN).validate().is_err());
        assert!(MiningConfig::new(0.5).validate().is_ok());
        assert!(MiningConfig::new(1.0).validate().is_ok());
    }

    #[test]
    fn fimi_text_is_lexicographic() {
        let mut fi = FrequentItemsets::new(5, 0.2);
        fi.insert(Itemset::new([1]), 4);
        fi.insert(Itemset::new([0, 1]), 3);
        fi.insert(Itemset::new([0]), 4);
        assert_eq!(fi.to_fimi_text(), "0 #SUP: 4\n0 1 #SUP: 3\n1 #SUP: 4\n");
    }
}
