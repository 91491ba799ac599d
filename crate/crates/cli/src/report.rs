//! Machine-readable outputs. Every report parses back into an equal value.

use std::collections::BTreeMap;

use entgame_core::formats::{ArenaFile, CertificateFile};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueReport {
    pub lower: String,
    pub upper: String,
    pub lower_decimal: f64,
    pub upper_decimal: f64,
    pub adam_matrix: Vec<Vec<String>>,
    pub eve_matrix: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub despot_strategy: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tribune_strategy: Option<BTreeMap<String, String>>,
    pub saddle_verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecideReport {
    pub query: String,
    pub alpha: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate_verified: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SimulateReport {
    /// Plays counted per state after each move.
    Forest { despot_states: Vec<String>, tribune_states: Vec<String>, levels: Vec<Vec<String>>, tail: f64, trend: f64 },
    /// Norms of the running matrix product.
    Payoff {
        log2_norms: Vec<f64>,
        tail: f64,
        trend: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        zero_at: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegerCheck {
    pub turns: usize,
    pub invariant_held: bool,
    pub first_violation: Option<usize>,
    pub forced_cheat_at: Option<usize>,
    pub flash_at: Option<usize>,
    pub annihilated_at: Option<usize>,
    pub halting_time: Option<usize>,
    pub payoff_estimate: f64,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorEntry {
    pub start: usize,
    pub length: usize,
    pub closed_by: String,
    pub ratio: String,
    pub within_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonnegCheck {
    pub horizon: usize,
    pub halting: bool,
    pub magnitude_ok: bool,
    pub factors: Vec<FactorEntry>,
    pub max_factor_growth: Option<f64>,
    pub annihilated_at: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub integer: IntegerCheck,
    pub nonneg: NonnegCheck,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MpgReport {
    pub arena: ArenaFile,
    pub lower: String,
    pub upper: String,
    pub log2_value: f64,
    pub mean_payoff: String,
}
