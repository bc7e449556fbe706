//! Categorical CSV loader. Each cell becomes the item token
//! `col<j>=<value>` (j is the original column index); tokens are mapped to
//! dense ids in first-seen order. One transaction per row. No quoting
//! support: the target datasets contain none.

use super::{DbSource, Itemset, Transaction, TransactionDb};
use crate::error::{Error, Result};
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct CsvConfig {
    pub delimiter: char,
    /// Original column indices to exclude (e.g. a class column).
    pub drop_columns: Vec<usize>,
}

impl Default for CsvConfig {
    fn default() -> Self {
        CsvConfig {
            delimiter: ',',
            drop_columns: Vec::new(),
        }
    }
}

pub fn load_categorical_csv(text: &str, config: &CsvConfig) -> Result<TransactionDb> {
    let mut dict: HashMap<String, u32> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut transactions = Vec::new();
    let mut expected_cols: Option<usize> = None;

    for (row_idx, line) in text.lines().enumerate() {
        let cells: Vec<&str> = line.split(config.delimiter).collect();
        let expected = *expected_cols.get_or_insert(cells.len());
        if cells.len() != expected {
            return Err(Error::RaggedRow {
                row: row_idx + 1,
                expected,
                found: cells.len(),
            });
        }

        let mut ids = Vec::with_capacity(cells.len());
        for (col, cell) in cells.iter().enumerate() {
            if config.drop_columns.contains(&col) {
                continue;
            }
            let token = format!("col{col}={cell}");
            let id = *dict.entry(token.clone()).or_insert_with(|| {
                labels.push(token);
                (labels.len() - 1) as u32
            });
            ids.push(id);
        }
        if ids.is_empty() {
            continue;
        }
        transactions.push(Transaction::new(Itemset::new(ids)));
    }

    if transactions.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    let n_items = labels.len() as u32;
    TransactionDb::from_parts(transactions, n_items, Some(labels), DbSource::Csv)
}
