//! Versioned, self-describing model files. JSON keeps float round-trips
//! exact (shortest-representation encoding), so a reloaded model reproduces
//! identical decisions.

use crate::error::{Error, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

const FORMAT: &str = "fpmine-model";
const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    format: String,
    version: u32,
    kind: String,
    model: T,
}

pub fn to_versioned_json<T: Serialize>(kind: &str, model: &T) -> String {
    let env = Envelope {
        format: FORMAT.to_string(),
        version: VERSION,
        kind: kind.to_string(),
        model,
    };
    serde_json::to_string_pretty(&env).expect("model types serialize infallibly")
}

pub fn from_versioned_json<T: DeserializeOwned>(kind: &str, text: &str) -> Result<T> {
    let env: Envelope<T> =
        serde_json::from_str(text).map_err(|e| Error::ModelFormat(e.to_string()))?;
    if env.format != FORMAT {
        return Err(Error::ModelFormat(format!(
            "unexpected format tag {:?}",
            env.format
        )));
    }
    if env.version != VERSION {
        return Err(Error::ModelFormat(format!(
            "unsupported version {} (supported: {VERSION})",
            env.version
        )));
    }
    if env.kind != kind {
        return Err(Error::ModelFormat(format!(
            "expected a {kind:?} model, found {:?}",
            env.kind
        )));
    }
    Ok(env.model)
}
