//! Deterministic synthetic transaction generator: background items drawn
//! uniformly, plus (with a configured probability) one full seed pattern
//! per transaction. Seed patterns are recorded in the database provenance
//! so tests can measure recovery against a known ground truth.

use super::{DbSource, Itemset, Transaction, TransactionDb};
use crate::error::{Error, Result};
use crate::rng::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_transactions: usize,
    pub n_items: u32,
    pub n_seed_patterns: usize,
    pub mean_transaction_len: usize,
    pub pattern_injection_prob: f64,
    pub rng_seed: u64,
}

impl SyntheticSpec {
    fn validate(&self) -> Result<()> {
        if self.n_transactions < 1
            || self.n_items < 1
            || self.n_seed_patterns < 1
            || self.mean_transaction_len < 1
        {
            return Err(Error::InvalidConfig(
                "synthetic spec counts must all be >= 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.pattern_injection_prob) {
            return Err(Error::InvalidConfig(
                "pattern_injection_prob must be in [0, 1]".into(),
            ));
        }
        if self.mean_transaction_len > self.n_items as usize {
            return Err(Error::InvalidConfig(format!(
                "mean_transaction_len {} exceeds universe size {}",
                self.mean_transaction_len, self.n_items
            )));
        }
        Ok(())
    }
}

/// Ground truth attached to a generated database.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticProvenance {
    pub spec: SyntheticSpec,
    pub seed_patterns: Vec<Itemset>,
    /// How many transactions actually received a pattern injection.
    pub n_injected: usize,
}

pub fn gen_synthetic(spec: &SyntheticSpec) -> Result<TransactionDb> {
    spec.validate()?;
    let mut rng = Rng::from_seed(spec.rng_seed);
    let n_items = spec.n_items as usize;

    // Pattern length: roughly half a transaction, at least a pair when the
    // universe allows it.
    let pattern_len = (spec.mean_transaction_len / 2).max(2).min(n_items);
    let seed_patterns: Vec<Itemset> = (0..spec.n_seed_patterns)
        .map(|_| {
            let ids = rng.sample_indices(n_items, pattern_len);
            Itemset::new(ids.into_iter().map(|i| i as u32))
        })
        .collect();

    // Background length uniform on [1, L] with mean close to the requested
    // value; capped by the universe.
    let len_upper = (2 * spec.mean_transaction_len - 1).min(n_items).max(1);

    let mut transactions = Vec::with_capacity(spec.n_transactions);
    let mut n_injected = 0usize;
    for _ in 0..spec.n_transactions {
        let len = 1 + rng.next_usize_below(len_upper);
        let background = rng.sample_indices(n_items, len);
        let mut set = Itemset::new(background.into_iter().map(|i| i as u32));
        if rng.next_bool(spec.pattern_injection_prob) {
            let which = rng.next_usize_below(seed_patterns.len());
            set = set.union(&seed_patterns[which]);
            n_injected += 1;
        }
        transactions.push(Transaction::new(set));
    }

    TransactionDb::from_parts(
        transactions,
        spec.n_items,
        None,
        DbSource::Synthetic(SyntheticProvenance {
            spec: spec.clone(),
            seed_patterns,
            n_injected,
        }),
    )
}
