use std::collections::BTreeMap;

use lpm_core::{MinerConfig, MiningResult};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub version: u32,
    pub config: ConfigEcho,
    pub results: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub min_support: f64,
    pub min_confidence: f64,
    pub min_determinism: f64,
    pub min_language_fit: f64,
    pub min_coverage: f64,
    pub max_iterations: usize,
    pub min_leaves: usize,
    pub language_fit_bound: usize,
    pub weights: Weights,
    pub top_k: usize,
    pub pruning: bool,
    pub prune_loop_left: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub support: f64,
    pub confidence: f64,
    pub language_fit: f64,
    pub determinism: f64,
    pub coverage: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub fit: u64,
    pub total: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub rank: usize,
    pub tree: String,
    pub score: f64,
    pub support: f64,
    pub confidence: f64,
    pub per_activity: BTreeMap<String, Fit>,
    pub language_fit: f64,
    pub language_fit_bound: usize,
    pub determinism: f64,
    pub coverage: f64,
    pub k_total: u64,
}

/// Rounds to six decimal places.
fn r6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

pub fn document(result: &MiningResult, config: &MinerConfig) -> Document {
    let w = config.weights;
    Document {
        version: SCHEMA_VERSION,
        config: ConfigEcho {
            min_support: r6(config.min_support),
            min_confidence: r6(config.min_confidence),
            min_determinism: r6(config.min_determinism),
            min_language_fit: r6(config.min_language_fit),
            min_coverage: r6(config.min_coverage),
            max_iterations: config.max_iterations,
            min_leaves: config.min_leaves,
            language_fit_bound: config.language_fit_bound,
            weights: Weights {
                support: r6(w.support),
                confidence: r6(w.confidence),
                language_fit: r6(w.language_fit),
                determinism: r6(w.determinism),
                coverage: r6(w.coverage),
            },
            top_k: config.top_k,
            pruning: config.pruning_enabled,
            prune_loop_left: config.prune_loop_left,
        },
        results: result
            .selected
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let r = &m.report;
                Entry {
                    rank: i + 1,
                    tree: m.tree.to_string(),
                    score: r6(r.weighted_score),
                    support: r6(r.support),
                    confidence: r6(r.confidence),
                    per_activity: r
                        .per_activity
                        .iter()
                        .map(|(a, f)| {
                            (
                                a.to_string(),
                                Fit {
                                    fit: f.fit,
                                    total: f.total,
                                },
                            )
                        })
                        .collect(),
                    language_fit: r6(r.language_fit),
                    language_fit_bound: r.language_fit_bound,
                    determinism: r6(r.determinism),
                    coverage: r6(r.coverage),
                    k_total: r.k_total,
                }
            })
            .collect(),
    }
}

/// Serializes the ranked result set. Metric values are rounded to six decimals.
pub fn export_json(result: &MiningResult, config: &MinerConfig) -> String {
    let mut text =
        serde_json::to_string_pretty(&document(result, config)).expect("document serializes");
    text.push('\n');
    text
}
