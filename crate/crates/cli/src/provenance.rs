//! Provenance stamping shared by every output file: tool version, seed,
//! config digest and creation time.
//!
//! The timestamp honours `SOURCE_DATE_EPOCH` so that identical invocations
//! can produce byte-identical outputs.

use chrono::{DateTime, Utc};
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("sha256:{:x}", hasher.finalize())
}

pub fn timestamp() -> String {
    if let Ok(epoch) = std::env::var("SOURCE_DATE_EPOCH") {
        if let Ok(secs) = epoch.parse::<i64>() {
            if let Some(dt) = DateTime::<Utc>::from_timestamp(secs, 0) {
                return dt.naive_utc().format("%Y-%m-%dT%H:%M:%S").to_string();
            }
        }
    }
    Utc::now().naive_utc().format("%Y-%m-%dT%H:%M:%S").to_string()
}

/// `# key = value` comment block put at the top of CSV outputs.
pub fn header(version: &str, seed: u64, config_digest: &str, extra: &[(String, String)]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# garmex {version}\n"));
    out.push_str(&format!("# seed = {seed}\n"));
    out.push_str(&format!("# config_digest = {config_digest}\n"));
    out.push_str(&format!("# created = {}\n", timestamp()));
    for (k, v) in extra {
        out.push_str(&format!("# {k} = {v}\n"));
    }
    out
}
