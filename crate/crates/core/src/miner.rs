//! Iterative discovery of local process models: evaluate the candidate set,
//! select the models that pass every threshold, expand the survivors, repeat.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::Error;
use crate::event_log::EventLog;
use crate::metrics::{evaluate, rank, EvalConfig, MetricWeights, QualityReport};
use crate::petri_net::{to_petri_net, AcceptingPetriNet};
use crate::process_tree::{ExpansionShape, ProcessTree, ShapeSet};

#[derive(Clone, Debug, PartialEq)]
pub struct MinerConfig {
    pub min_support: f64,
    pub min_confidence: f64,
    pub min_determinism: f64,
    pub min_language_fit: f64,
    pub min_coverage: f64,
    /// Number of expansion rounds; models grow to at most `max_iterations + 1` leaves.
    pub max_iterations: usize,
    pub min_leaves: usize,
    pub language_fit_bound: usize,
    pub weights: MetricWeights,
    pub top_k: usize,
    pub pruning_enabled: bool,
    /// Also prune `loop(b,a)` expansions of low-support candidates.
    pub prune_loop_left: bool,
    /// Keep at most this many candidates (best weighted score first) for expansion.
    pub frontier_cap: Option<usize>,
}

impl Default for MinerConfig {
    fn default() -> Self {
        MinerConfig {
            min_support: 0.7,
            min_confidence: 0.0,
            min_determinism: 0.0,
            min_language_fit: 0.0,
            min_coverage: 0.0,
            max_iterations: 4,
            min_leaves: 3,
            language_fit_bound: crate::metrics::DEFAULT_LANGUAGE_FIT_BOUND,
            weights: MetricWeights::default(),
            top_k: 20,
            pruning_enabled: true,
            prune_loop_left: false,
            frontier_cap: Some(10_000),
        }
    }
}

impl MinerConfig {
    pub fn validate(&self) -> Result<(), Error> {
        let unit = |name: &str, v: f64, upper_open: bool| {
            let ok = v.is_finite() && v >= 0.0 && if upper_open { v < 1.0 } else { v <= 1.0 };
            if ok {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} out of range: {v}")))
            }
        };
        unit("min_support", self.min_support, true)?;
        unit("min_confidence", self.min_confidence, false)?;
        unit("min_determinism", self.min_determinism, false)?;
        unit("min_language_fit", self.min_language_fit, false)?;
        unit("min_coverage", self.min_coverage, false)?;
        if self.max_iterations < 1 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        if self.min_leaves < 2 {
            return Err(Error::Config("min_leaves must be at least 2".into()));
        }
        if self.top_k < 1 {
            return Err(Error::Config("top_k must be at least 1".into()));
        }
        if self.language_fit_bound < 1 {
            return Err(Error::Config(
                "language_fit_bound must be at least 1".into(),
            ));
        }
        if self.frontier_cap == Some(0) {
            return Err(Error::Config("frontier_cap must be positive".into()));
        }
        Ok(())
    }

    fn eval_config(&self) -> EvalConfig {
        EvalConfig {
            language_fit_bound: self.language_fit_bound,
            weights: self.weights,
        }
    }

    /// Whether a report passes every threshold.
    pub fn accepts(&self, r: &QualityReport) -> bool {
        r.support >= self.min_support
            && r.confidence >= self.min_confidence
            && r.determinism >= self.min_determinism
            && r.language_fit >= self.min_language_fit
            && r.coverage >= self.min_coverage
    }
}

/// A model in the result set.
#[derive(Clone, Debug, PartialEq)]
pub struct SelectedLpm {
    pub tree: ProcessTree,
    pub net: AcceptingPetriNet,
    pub report: QualityReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MiningResult {
    /// Ranked by weighted score, truncated to `top_k`.
    pub selected: Vec<SelectedLpm>,
    /// Expansion rounds performed.
    pub iterations_run: usize,
    pub candidates_evaluated: usize,
    /// Evaluated candidates whose expansion shapes were restricted by pruning.
    pub candidates_pruned: usize,
}

/// Expansion shapes that may still lead to a model meeting the thresholds.
///
/// Below the support threshold, sequence, parallel and loop expansions can
/// only lower support; below the determinism threshold, choice and parallel
/// expansions can only lower determinism.
pub fn prune_operators(report: &QualityReport, config: &MinerConfig) -> ShapeSet {
    let mut shapes = ShapeSet::ALL;
    if !config.pruning_enabled {
        return shapes;
    }
    if report.support < config.min_support {
        shapes.remove(ExpansionShape::SeqRight);
        shapes.remove(ExpansionShape::SeqLeft);
        shapes.remove(ExpansionShape::And);
        shapes.remove(ExpansionShape::LoopRight);
        if config.prune_loop_left {
            shapes.remove(ExpansionShape::LoopLeft);
        }
    }
    if report.determinism < config.min_determinism {
        shapes.remove(ExpansionShape::Xor);
        shapes.remove(ExpansionShape::And);
    }
    shapes
}

/// Runs discovery on `log`.
pub fn mine(log: &EventLog, config: &MinerConfig) -> Result<MiningResult, Error> {
    config.validate()?;
    let alphabet = log.alphabet().clone();
    if alphabet.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    if log.total_events() == 0 {
        return Err(Error::EmptyLog);
    }
    let eval_config = config.eval_config();

    let mut seen: HashSet<ProcessTree> = HashSet::new();
    let mut candidates: Vec<ProcessTree> = alphabet
        .iter()
        .map(|a| ProcessTree::Leaf(a.clone()))
        .filter(|t| seen.insert(t.canonical_form()))
        .collect();

    let mut selected: Vec<(ProcessTree, QualityReport)> = Vec::new();
    let mut iterations_run = 0;
    let mut candidates_evaluated = 0;
    let mut candidates_pruned = 0;

    loop {
        let reports: Vec<QualityReport> = candidates
            .par_iter()
            .map(|t| evaluate(t, log, &eval_config))
            .collect::<Result<_, _>>()?;
        candidates_evaluated += candidates.len();

        let mut frontier: Vec<(ProcessTree, ShapeSet, f64)> = Vec::new();
        for (tree, report) in candidates.into_iter().zip(reports) {
            let shapes = prune_operators(&report, config);
            if shapes != ShapeSet::ALL {
                candidates_pruned += 1;
            }
            let score = report.weighted_score;
            if tree.leaf_count() >= config.min_leaves && config.accepts(&report) {
                selected.push((tree.clone(), report));
            }
            if !shapes.is_empty() {
                frontier.push((tree, shapes, score));
            }
        }

        if frontier.is_empty() || iterations_run >= config.max_iterations {
            break;
        }
        if let Some(cap) = config.frontier_cap {
            if frontier.len() > cap {
                frontier.sort_by(|a, b| b.2.total_cmp(&a.2));
                frontier.truncate(cap);
            }
        }

        let mut next = Vec::new();
        for (tree, shapes, _) in &frontier {
            for e in tree.expansions_with(&alphabet, *shapes) {
                if seen.insert(e.canonical_form()) {
                    next.push(e);
                }
            }
        }
        iterations_run += 1;
        if next.is_empty() {
            break;
        }
        candidates = next;
    }

    let selected = rank(selected, &config.weights, config.top_k)
        .into_iter()
        .map(|(tree, report)| SelectedLpm {
            net: to_petri_net(&tree),
            tree,
            report,
        })
        .collect();
    Ok(MiningResult {
        selected,
        iterations_run,
        candidates_evaluated,
        candidates_pruned,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event_log::Trace;
    use crate::segmentation::ReplayStats;
    use std::collections::BTreeMap;

    fn report(support: f64, determinism: f64) -> QualityReport {
        QualityReport {
            support,
            confidence: 1.0,
            per_activity: BTreeMap::new(),
            language_fit: 1.0,
            language_fit_bound: 5,
            determinism,
            coverage: 1.0,
            k_total: 0,
            replay: ReplayStats::default(),
            weighted_score: 0.0,
        }
    }

    fn config(min_support: f64, min_determinism: f64) -> MinerConfig {
        MinerConfig {
            min_support,
            min_determinism,
            ..MinerConfig::default()
        }
    }

    #[test]
    fn pruning_rules() {
        let c = config(0.5, 0.5);
        assert_eq!(prune_operators(&report(0.6, 0.6), &c), ShapeSet::ALL);
        let low_support = prune_operators(&report(0.4, 0.6), &c);
        assert_eq!(
            low_support,
            [ExpansionShape::Xor, ExpansionShape::LoopLeft]
                .into_iter()
                .collect()
        );
        let strict = MinerConfig {
            prune_loop_left: true,
            ..c.clone()
        };
        assert_eq!(
            prune_operators(&report(0.4, 0.6), &strict),
            [ExpansionShape::Xor].into_iter().collect()
        );
        assert!(prune_operators(&report(0.4, 0.4), &strict).is_empty());
        let low_det = prune_operators(&report(0.6, 0.4), &c);
        assert!(!low_det.contains(ExpansionShape::Xor));
        assert!(!low_det.contains(ExpansionShape::And));
        assert_eq!(low_det.len(), 4);
        let off = MinerConfig {
            pruning_enabled: false,
            ..c
        };
        assert_eq!(prune_operators(&report(0.0, 0.0), &off), ShapeSet::ALL);
    }

    #[test]
    fn empty_alphabet_is_an_error() {
        let log = EventLog::new();
        assert!(matches!(
            mine(&log, &MinerConfig::default()),
            Err(Error::EmptyAlphabet)
        ));
    }

    #[test]
    fn invalid_config() {
        let log: EventLog = [Trace::from_names(["a"])].into_iter().collect();
        for bad in [
            MinerConfig {
                top_k: 0,
                ..MinerConfig::default()
            },
            MinerConfig {
                min_leaves: 1,
                ..MinerConfig::default()
            },
            MinerConfig {
                max_iterations: 0,
                ..MinerConfig::default()
            },
            MinerConfig {
                min_support: 1.0,
                ..MinerConfig::default()
            },
            MinerConfig {
                min_coverage: 1.5,
                ..MinerConfig::default()
            },
        ] {
            assert!(matches!(mine(&log, &bad), Err(Error::Config(_))));
        }
    }

    #[test]
    fn repeated_pair() {
        let mut log = EventLog::new();
        log.add_trace(Trace::from_names(["a", "b"]), 100);
        let cfg = MinerConfig {
            min_support: 0.9,
            min_leaves: 2,
            max_iterations: 1,
            frontier_cap: None,
            ..MinerConfig::default()
        };
        let result = mine(&log, &cfg).unwrap();
        let hit = result
            .selected
            .iter()
            .find(|s| s.tree.to_string() == "seq(a,b)")
            .expect("seq(a,b) selected");
        assert_eq!(hit.report.k_total, 100);
        assert!((hit.report.support - 100.0 / 101.0).abs() < 1e-12);
        assert_eq!(hit.report.confidence, 1.0);
        assert_eq!(result.iterations_run, 1);
    }

    #[test]
    fn first_round_evaluates_the_alphabet() {
        let log: EventLog = [Trace::from_names(["a", "b", "c"])].into_iter().collect();
        let cfg = MinerConfig {
            max_iterations: 1,
            min_support: 0.99,
            min_determinism: 0.99,
            frontier_cap: None,
            ..MinerConfig::default()
        };
        // Every leaf has support 1/2 and determinism 1: xor and loop(b,a)
        // survive pruning. Distinct results: 6 xor pairs, 9 loop(b,a).
        let result = mine(&log, &cfg).unwrap();
        assert_eq!(result.candidates_evaluated, 3 + 15);
        assert_eq!(result.candidates_pruned, 18);
    }
}
