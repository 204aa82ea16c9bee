//! JSON report envelope shared by all subcommands, with deterministic
//! float formatting and input digests.

use serde_json::Value;
use sha2::{Digest, Sha256};

/// Rounds to 12 significant decimal digits so serialized payloads are
/// byte-stable across runs and platforms.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("scientific notation round-trip")
}

/// JSON number carrying 12 significant digits.
pub fn jf(x: f64) -> Value {
    Value::from(sig12(x))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Applies `sig12` to every number in a JSON tree.
pub fn round_floats(value: &mut Value) {
    match value {
        Value::Number(num) => {
            if let Some(f) = num.as_f64() {
                if num.as_i64().is_none() && num.as_u64().is_none() {
                    *value = Value::from(sig12(f));
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Envelope for one CLI invocation. `wall_time_ms` is the only field that
/// may differ between identical runs; everything else is deterministic.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RunReport {
    pub subcommand: String,
    pub input_digest: String,
    pub seeds: Vec<u64>,
    pub rng: &'static str,
    pub tool_version: &'static str,
    pub payload: Value,
    pub wall_time_ms: u64,
}

impl RunReport {
    pub fn new(subcommand: &str, input_digest: String, seeds: Vec<u64>, payload: Value) -> Self {
        let mut payload = payload;
        round_floats(&mut payload);
        Self {
            subcommand: subcommand.to_string(),
            input_digest,
            seeds,
            rng: crate::sampling::RNG_ALGORITHM,
            tool_version: env!("CARGO_PKG_VERSION"),
            payload,
            wall_time_ms: 0,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
