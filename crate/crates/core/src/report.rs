//! Schema-versioned JSON run reports.
//!
//! The deterministic part of a report is hashed; wall-clock timing lives in
//! a sidecar field outside the hash so identical invocations agree on it.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    /// the subcommand and its arguments
    pub command: Vec<String>,
    pub inputs: Value,
    pub tolerances: Value,
    pub outputs: Value,
    /// `ok`, `verification_failed`, `no_solution` or `numeric_failure`
    pub status: String,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_seconds: f64,
}

/// What gets written: the report, its digest and the timing sidecar.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub report: RunReport,
    pub sha256: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing: Option<Timing>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            inputs: Value::Null,
            tolerances: Value::Null,
            outputs: Value::Null,
            status: "ok".into(),
            warnings: Vec::new(),
        }
    }

    /// Hex SHA-256 of the compact JSON encoding.
    pub fn digest(&self) -> Result<String> {
        let bytes = serde_json::to_vec(self)?;
        let sum = Sha256::digest(&bytes);
        Ok(sum.iter().map(|b| format!("{b:02x}")).collect())
    }

    pub fn seal(self, timing: Option<Timing>) -> Result<Envelope> {
        let sha256 = self.digest()?;
        Ok(Envelope { report: self, sha256, timing })
    }
}

impl Envelope {
    /// Recomputes the digest and compares it with the stored one.
    pub fn verify(&self) -> Result<bool> {
        Ok(self.report.digest()? == self.sha256)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn digest_ignores_timing() {
        let mut r = RunReport::new(vec!["cheeger".into(), "disc.json".into()]);
        r.outputs = json!({"h": 2.0});
        let a = r.clone().seal(Some(Timing { elapsed_seconds: 0.1 })).unwrap();
        let b = r.seal(Some(Timing { elapsed_seconds: 7.0 })).unwrap();
        assert_eq!(a.sha256, b.sha256);
        assert_eq!(a.sha256.len(), 64);
        assert!(a.verify().unwrap());
    }

    #[test]
    fn digest_tracks_content() {
        let mut r = RunReport::new(vec![]);
        let a = r.digest().unwrap();
        r.status = "no_solution".into();
        assert_ne!(a, r.digest().unwrap());
    }

    #[test]
    fn round_trip() {
        let mut r = RunReport::new(vec!["dimension".into()]);
        r.outputs = json!({"slope": 0.63, "counts": [1, 2, 4]});
        let env = r.seal(None).unwrap();
        let s = serde_json::to_string(&env).unwrap();
        assert!(!s.contains("timing"));
        let back: Envelope = serde_json::from_str(&s).unwrap();
        assert_eq!(back, env);
        assert!(back.verify().unwrap());
    }
}
