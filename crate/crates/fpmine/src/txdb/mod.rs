//! Transaction database: item/itemset/transaction types, exact support
//! counting, format loaders, and a deterministic synthetic generator.
//!
//! Items are densified to contiguous ids at load time; the original tokens
//! (when the input had any, e.g. CSV cells) are kept in `item_labels`.
//! A database is immutable after construction and safe to share across
//! threads for concurrent reads.

mod csv;
mod fimi;
mod synthetic;

pub use csv::{load_categorical_csv, CsvConfig};
pub use fimi::{load_fimi, to_fimi};
pub use synthetic::{gen_synthetic, SyntheticProvenance, SyntheticSpec};

use crate::error::{Error, Result};
use std::fmt;

/// Dense index into the item universe of the owning database.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId(pub u32);

impl ItemId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A canonical itemset: strictly increasing item ids, no duplicates.
/// May be empty as a query argument; miners never emit an empty set.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Itemset {
    items: Vec<ItemId>,
}

impl Itemset {
    /// Builds a canonical itemset from raw ids: sorts and deduplicates.
    pub fn new(ids: impl IntoIterator<Item = u32>) -> Self {
        let mut items: Vec<ItemId> = ids.into_iter().map(ItemId).collect();
        items.sort_unstable();
        items.dedup();
        Itemset { items }
    }

    pub fn empty() -> Self {
        Itemset { items: Vec::new() }
    }

    /// Wraps a slice already known to be strictly increasing.
    pub fn from_sorted(items: Vec<ItemId>) -> Self {
        debug_assert!(items.windows(2).all(|w| w[0] < w[1]));
        Itemset { items }
    }

    pub fn items(&self) -> &[ItemId] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.items.binary_search(&item).is_ok()
    }

    /// True when every item of `self` occurs in the sorted slice `other`.
    pub fn is_subset_of(&self, other: &[ItemId]) -> bool {
        is_sorted_subset(&self.items, other)
    }

    pub fn union(&self, other: &Itemset) -> Itemset {
        let mut merged = Vec::with_capacity(self.items.len() + other.items.len());
        let (mut i, mut j) = (0, 0);
        while i < self.items.len() && j < other.items.len() {
            match self.items[i].cmp(&other.items[j]) {
                std::cmp::Ordering::Less => {
                    merged.push(self.items[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    merged.push(other.items[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    merged.push(self.items[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        merged.extend_from_slice(&self.items[i..]);
        merged.extend_from_slice(&other.items[j..]);
        Itemset { items: merged }
    }

    /// Set difference `self \ other`.
    pub fn without(&self, other: &Itemset) -> Itemset {
        let items = self
            .items
            .iter()
            .copied()
            .filter(|it| !other.contains(*it))
            .collect();
        Itemset { items }
    }

    pub fn is_disjoint(&self, other: &Itemset) -> bool {
        !self.items.iter().any(|it| other.contains(*it))
    }

    pub fn iter(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.items.iter().copied()
    }
}

impl fmt::Display for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for it in &self.items {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{it}")?;
            first = false;
        }
        Ok(())
    }
}

fn is_sorted_subset(sub: &[ItemId], sup: &[ItemId]) -> bool {
    let mut j = 0;
    for item in sub {
        while j < sup.len() && sup[j] < *item {
            j += 1;
        }
        if j >= sup.len() || sup[j] != *item {
            return false;
        }
        j += 1;
    }
    true
}

/// One market basket: a non-empty canonical itemset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    items: Itemset,
}

impl Transaction {
    pub fn new(items: Itemset) -> Self {
        Transaction { items }
    }

    pub fn items(&self) -> &[ItemId] {
        self.items.items()
    }

    pub fn itemset(&self) -> &Itemset {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Where a database came from; synthetic databases carry their ground truth.
#[derive(Debug, Clone, PartialEq)]
pub enum DbSource {
    Fimi,
    Csv,
    InMemory,
    Synthetic(SyntheticProvenance),
}

/// An immutable transaction database over a dense item universe.
#[derive(Debug, Clone, PartialEq)]
pub struct TransactionDb {
    transactions: Vec<Transaction>,
    n_items: u32,
    item_labels: Option<Vec<String>>,
    source: DbSource,
}

impl TransactionDb {
    pub(crate) fn from_parts(
        transactions: Vec<Transaction>,
        n_items: u32,
        item_labels: Option<Vec<String>>,
        source: DbSource,
    ) -> Result<Self> {
        if transactions.is_empty() {
            return Err(Error::EmptyDatabase);
        }
        for t in &transactions {
            if let Some(last) = t.items().last() {
                if last.0 >= n_items {
                    return Err(Error::ItemOutOfUniverse {
                        item: last.0,
                        n_items,
                    });
                }
            }
        }
        Ok(TransactionDb {
            transactions,
            n_items,
            item_labels,
            source,
        })
    }

    /// Builds a database directly from item-id vectors; the universe size is
    /// inferred as max id + 1. Handy for tests and embedding.
    pub fn from_item_vecs(rows: &[Vec<u32>]) -> Result<Self> {
        let mut transactions = Vec::with_capacity(rows.len());
        let mut max_id = 0u32;
        for row in rows {
            let set = Itemset::new(row.iter().copied());
            if set.is_empty() {
                continue;
            }
            max_id = max_id.max(set.items().last().unwrap().0);
            transactions.push(Transaction::new(set));
        }
        Self::from_parts(transactions, max_id + 1, None, DbSource::InMemory)
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn n_items(&self) -> u32 {
        self.n_items
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    pub fn item_labels(&self) -> Option<&[String]> {
        self.item_labels.as_deref()
    }

    pub fn label_of(&self, item: ItemId) -> Option<&str> {
        self.item_labels
            .as_ref()
            .and_then(|ls| ls.get(item.index()))
            .map(String::as_str)
    }

    pub fn source(&self) -> &DbSource {
        &self.source
    }

    fn check_universe(&self, x: &Itemset) -> Result<()> {
        if let Some(last) = x.items().last() {
            if last.0 >= self.n_items {
                return Err(Error::ItemOutOfUniverse {
                    item: last.0,
                    n_items: self.n_items,
                });
            }
        }
        Ok(())
    }

    /// Number of transactions containing `x`. The empty set is contained in
    /// every transaction.
    pub fn support_count(&self, x: &Itemset) -> Result<u64> {
        self.check_universe(x)?;
        Ok(self
            .transactions
            .iter()
            .filter(|t| x.is_subset_of(t.items()))
            .count() as u64)
    }

    /// Relative support: |{t : x ⊆ t}| / |db|, in [0, 1].
    pub fn support(&self, x: &Itemset) -> Result<f64> {
        Ok(self.support_count(x)? as f64 / self.transactions.len() as f64)
    }

    /// Per-item transaction counts over the whole universe, one scan.
    pub fn singleton_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.n_items as usize];
        for t in &self.transactions {
            for it in t.items() {
                counts[it.index()] += 1;
            }
        }
        counts
    }

    /// Restrict to the transactions at the given indices (kept in order).
    /// Provenance is preserved; labels are shared.
    pub fn restrict(&self, indices: &[usize]) -> Result<TransactionDb> {
        let transactions = indices
            .iter()
            .map(|&i| self.transactions[i].clone())
            .collect();
        TransactionDb::from_parts(
            transactions,
            self.n_items,
            self.item_labels.clone(),
            self.source.clone(),
        )
    }
}
