//! Itemset -> feature vector encoding.
//!
//! Layout: M binary indicators for the top-M most frequent items (1 when
//! the item is a member), optionally followed by statistical features:
//! cardinality, then min/mean/max singleton support over the members, then
//! a support estimate counted on a seeded transaction sample. The layout
//! length is fixed per configuration, and encoding is deterministic.

use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::svm::FeatureVector;
use crate::txdb::{ItemId, Itemset, Transaction, TransactionDb};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncoderConfig {
    /// Indicator slots for the top-M frequent items.
    pub m_indicator_items: usize,
    pub include_stats: bool,
    /// Fraction of transactions in the seeded sample backing the support
    /// estimate feature, in (0, 1].
    pub sample_fraction: f64,
    pub rng_seed: u64,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        EncoderConfig {
            m_indicator_items: 16,
            include_stats: true,
            sample_fraction: 0.25,
            rng_seed: 0,
        }
    }
}

impl EncoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m_indicator_items < 1 {
            return Err(Error::InvalidConfig(
                "m_indicator_items must be >= 1".into(),
            ));
        }
        if !(self.sample_fraction > 0.0 && self.sample_fraction <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "sample_fraction must be in (0, 1], got {}",
                self.sample_fraction
            )));
        }
        Ok(())
    }
}

/// Precomputed database statistics plus the frozen transaction sample.
/// Fitted once, then reused for every candidate in the same pipeline so
/// that training and search share one feature space.
#[derive(Debug, Clone)]
pub struct CandidateEncoder {
    config: EncoderConfig,
    n_items: u32,
    singleton_supports: Vec<f64>,
    /// Top-M items by (support desc, id asc); one indicator slot each.
    top_items: Vec<ItemId>,
    sample: Vec<Transaction>,
}

impl CandidateEncoder {
    pub fn fit(db: &TransactionDb, config: &EncoderConfig) -> Result<Self> {
        config.validate()?;
        let n = db.len();
        let singleton_supports: Vec<f64> = db
            .singleton_counts()
            .iter()
            .map(|&c| c as f64 / n as f64)
            .collect();

        let mut ranking: Vec<ItemId> = (0..db.n_items()).map(ItemId).collect();
        ranking.sort_by(|a, b| {
            singleton_supports[b.index()]
                .total_cmp(&singleton_supports[a.index()])
                .then(a.cmp(b))
        });
        ranking.truncate(config.m_indicator_items);

        let sample_size = ((config.sample_fraction * n as f64).round() as usize).clamp(1, n);
        let mut rng = Rng::from_seed(config.rng_seed);
        let indices = rng.sample_indices(n, sample_size);
        let sample = indices
            .iter()
            .map(|&i| db.transactions()[i].clone())
            .collect();

        Ok(CandidateEncoder {
            config: config.clone(),
            n_items: db.n_items(),
            singleton_supports,
            top_items: ranking,
            sample,
        })
    }

    pub fn dim(&self) -> usize {
        self.top_items.len() + if self.config.include_stats { 5 } else { 0 }
    }

    pub fn top_items(&self) -> &[ItemId] {
        &self.top_items
    }

    pub fn encode(&self, x: &Itemset) -> Result<FeatureVector> {
        if x.is_empty() {
            return Err(Error::InvalidConfig(
                "cannot encode an empty itemset".into(),
            ));
        }
        if let Some(last) = x.items().last() {
            if last.0 >= self.n_items {
                return Err(Error::ItemOutOfUniverse {
                    item: last.0,
                    n_items: self.n_items,
                });
            }
        }

        let mut values = Vec::with_capacity(self.dim());
        for &item in &self.top_items {
            values.push(if x.contains(item) { 1.0 } else { 0.0 });
        }

        if self.config.include_stats {
            let supports: Vec<f64> = x
                .iter()
                .map(|it| self.singleton_supports[it.index()])
                .collect();
            let min = supports.iter().copied().fold(f64::INFINITY, f64::min);
            let max = supports.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mean = supports.iter().sum::<f64>() / supports.len() as f64;
            let hits = self
                .sample
                .iter()
                .filter(|t| x.is_subset_of(t.items()))
                .count();
            let estimate = hits as f64 / self.sample.len() as f64;

            values.push(x.len() as f64);
            values.push(min);
            values.push(mean);
            values.push(max);
            values.push(estimate);
        }

        FeatureVector::new(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::txdb::test_fixtures::db5;

    fn db5_encoder(m: usize) -> CandidateEncoder {
        let cfg = EncoderConfig {
            m_indicator_items: m,
            include_stats: true,
            sample_fraction: 1.0,
            rng_seed: 0,
        };
        CandidateEncoder::fit(&db5(), &cfg).unwrap()
    }

    #[test]
    fn db5_pair_layout() {
        // Rank ties (all 0.8) break by ascending id, so slots are a, b, c.
        // With the full sample, the estimate is the exact support 0.6.
        let enc = db5_encoder(3);
        let v = enc.encode(&Itemset::new([0, 1])).unwrap();
        assert_eq!(v.as_slice(), &[1.0, 1.0, 0.0, 2.0, 0.8, 0.8, 0.8, 0.6]);
    }

    #[test]
    fn items_below_top_m_leave_indicators_zero() {
        let enc = db5_encoder(1);
        let v = enc.encode(&Itemset::new([1, 2])).unwrap();
        // Indicator block all zero, stats still informative.
        assert_eq!(v.as_slice()[0], 0.0);
        assert_eq!(v.as_slice()[1], 2.0);
        assert_eq!(v.as_slice()[4], 0.8);
    }

    #[test]
    fn encoding_is_deterministic() {
        let cfg = EncoderConfig {
            m_indicator_items: 3,
            include_stats: true,
            sample_fraction: 0.6,
            rng_seed: 42,
        };
        let e1 = CandidateEncoder::fit(&db5(), &cfg).unwrap();
        let e2 = CandidateEncoder::fit(&db5(), &cfg).unwrap();
        let x = Itemset::new([0, 2]);
        assert_eq!(e1.encode(&x).unwrap(), e2.encode(&x).unwrap());
    }

    #[test]
    fn out_of_universe_rejected() {
        let enc = db5_encoder(3);
        assert!(matches!(
            enc.encode(&Itemset::new([9])),
            Err(Error::ItemOutOfUniverse { .. })
        ));
        assert!(enc.encode(&Itemset::empty()).is_err());
    }

    #[test]
    fn m_larger_than_universe_saturates() {
        let enc = db5_encoder(10);
        assert_eq!(enc.top_items().len(), 3);
        assert_eq!(enc.dim(), 8);
    }

    #[test]
    fn stats_can_be_disabled() {
        let cfg = EncoderConfig {
            m_indicator_items: 3,
            include_stats: false,
            sample_fraction: 1.0,
            rng_seed: 0,
        };
        let enc = CandidateEncoder::fit(&db5(), &cfg).unwrap();
        assert_eq!(enc.dim(), 3);
        let v = enc.encode(&Itemset::new([0])).unwrap();
        assert_eq!(v.as_slice(), &[1.0, 0.0, 0.0]);
    }
}
