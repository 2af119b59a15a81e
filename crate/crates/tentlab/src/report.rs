//! Machine-readable certification reports.
//!
//! A report is a flat list of named checks, each carrying measured
//! constants, the tolerances they were held to, and a human-readable
//! witness map. Key-value maps are ordered so that serializing the same
//! report twice yields identical bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Report format version, bumped on any incompatible field change.
pub const SCHEMA_VERSION: u32 = 1;

/// Outcome of one check. `Report` marks measurements that carry no
/// pass/fail claim of their own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Report,
}

/// One certified inequality or measurement.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// The property being certified, in words.
    pub anchor: String,
    pub status: CheckStatus,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub constants: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub witness: BTreeMap<String, String>,
    /// Wall-clock duration, present only when timing was requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            status: CheckStatus::Report,
            constants: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            witness: BTreeMap::new(),
            wall_ms: None,
        }
    }

    pub fn passing(mut self, ok: bool) -> Self {
        self.status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        self
    }

    pub fn constant(mut self, key: impl Into<String>, value: f64) -> Self {
        self.constants.insert(key.into(), value);
        self
    }

    pub fn tolerance(mut self, key: impl Into<String>, value: f64) -> Self {
        self.tolerances.insert(key.into(), value);
        self
    }

    pub fn witness(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.witness.insert(key.into(), value.into());
        self
    }
}

/// A named sequence of (x, y) samples for plotting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Curve {
    pub name: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
}

/// The full output of one certification run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificationReport {
    pub schema_version: u32,
    /// Preset name or source path of the space the run used.
    pub space: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<Curve>,
}

impl CertificationReport {
    pub fn new(space: impl Into<String>, seed: u64) -> Self {
        CertificationReport {
            schema_version: SCHEMA_VERSION,
            space: space.into(),
            seed,
            checks: Vec::new(),
            curves: Vec::new(),
        }
    }

    /// True when no check failed; `Report` entries do not count against.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failed_names(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
