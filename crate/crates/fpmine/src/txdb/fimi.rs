//! FIMI text format: one transaction per line, base-10 item ids separated
//! by spaces or tabs, LF or CRLF line endings. Empty lines are skipped;
//! duplicate items within a line are deduplicated.

use super::{DbSource, Itemset, Transaction, TransactionDb};
use crate::error::{Error, Result};

pub fn load_fimi(text: &str) -> Result<TransactionDb> {
    let mut transactions = Vec::new();
    let mut max_id = 0u32;

    for (line_idx, line) in text.lines().enumerate() {
        let mut ids: Vec<u32> = Vec::new();
        let bytes = line.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            if bytes[pos] == b' ' || bytes[pos] == b'\t' {
                pos += 1;
                continue;
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos] != b' ' && bytes[pos] != b'\t' {
                pos += 1;
            }
            let token = &line[start..pos];
            match token.parse::<u32>() {
                Ok(id) => {
                    max_id = max_id.max(id);
                    ids.push(id);
                }
                Err(_) => {
                    return Err(Error::FimiParse {
                        line: line_idx + 1,
                        column: start + 1,
                        message: format!("expected a non-negative integer, found {token:?}"),
                    });
                }
            }
        }
        if ids.is_empty() {
            continue;
        }
        transactions.push(Transaction::new(Itemset::new(ids)));
    }

    if transactions.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    TransactionDb::from_parts(transactions, max_id + 1, None, DbSource::Fimi)
}

/// Serializes back to FIMI text with LF line endings and a trailing newline.
pub fn to_fimi(db: &TransactionDb) -> String {
    let mut out = String::new();
    for t in db.transactions() {
        let mut first = true;
        for item in t.items() {
            if !first {
                out.push(' ');
            }
            out.push_str(&item.0.to_string());
            first = false;
        }
        out.push('\n');
    }
    out
}
