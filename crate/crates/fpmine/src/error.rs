//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Non-integer token while parsing FIMI text. Line and column are 1-based.
    #[error("FIMI parse error at line {line}, column {column}: {message}")]
    FimiParse {
        line: usize,
        column: usize,
        message: String,
    },

    /// CSV row whose column count differs from the first row. Row is 1-based.
    #[error("CSV format error at row {row}: expected {expected} columns, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("database contains no transactions")]
    EmptyDatabase,

    /// An itemset referenced an item id outside the database universe.
    #[error("item id {item} is outside the universe (n_items = {n_items})")]
    ItemOutOfUniverse { item: u32, n_items: u32 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Brute-force mining guard: the 2^n enumeration is only allowed for
    /// small universes.
    #[error("universe too large for brute-force enumeration: {n_items} items (limit {limit})")]
    UniverseTooLarge { n_items: u32, limit: u32 },

    #[error("training set contains a single class; adjust the relaxed enumeration threshold so both frequent and infrequent candidates appear")]
    SingleClassTrainingSet,

    #[error("feature dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    /// Rule metrics are undefined when an antecedent or consequent never
    /// occurs in the database.
    #[error("rule is undefined: {0} has zero support")]
    UndefinedRule(String),

    #[error("cannot aggregate an empty rule list")]
    EmptyRuleList,

    #[error("cannot evaluate a classifier on an empty held-out set")]
    EmptyHeldOut,

    #[error("model deserialization failed: {0}")]
    ModelFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
