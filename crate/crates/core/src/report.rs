//! Provenance block attached to every emitted artifact.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::rng::RNG_ID;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub rng_id: String,
    pub seed: u64,
    /// SHA-256 of the compact JSON of the effective configuration.
    pub config_hash: String,
}

pub fn config_hash<T: Serialize>(config: &T) -> String {
    let bytes = serde_json::to_vec(config).expect("config serializes");
    let digest = Sha256::digest(&bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn provenance<T: Serialize>(config: &T, seed: u64) -> Provenance {
    Provenance { version: VERSION.to_string(), rng_id: RNG_ID.to_string(), seed, config_hash: config_hash(config) }
}

/// Output document: provenance, the merged configuration and the result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document<C, R> {
    pub provenance: Provenance,
    pub effective_config: C,
    pub result: R,
}

impl<C: Serialize, R: Serialize> Document<C, R> {
    pub fn new(effective_config: C, seed: u64, result: R) -> Self {
        Document { provenance: provenance(&effective_config, seed), effective_config, result }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }
}
