//! Query result documents.

use serde::{Deserialize, Serialize};

pub const QUERY_VERSION: &str = "credal-query/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResultDocument {
    pub version: String,
    pub query: QueryEcho,
    pub method: String,
    pub bound: f64,
    pub direction: String,
    pub order: Vec<String>,
    pub orders_tried: usize,
    pub steps: usize,
    pub witness: Vec<WitnessEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

/// The inputs, as given on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryEcho {
    pub network: String,
    pub event: String,
    pub method: String,
    pub order: String,
    pub n_orders: usize,
    pub seed: u64,
    pub max_steps: usize,
}

/// Weights in domain order. `key` is a CPD row such as `V|s3`; `node` is the
/// sum-node id for per-node (untied) witnesses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub key: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node: Option<usize>,
    pub weights: Vec<f64>,
}

/// Milliseconds spent answering the query and compiling circuits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub query_ms: f64,
    pub compile_ms: f64,
}

impl QueryResultDocument {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("documents serialize");
        out.push('\n');
        out
    }
}
