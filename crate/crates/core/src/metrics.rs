//! Quality metrics of a local process model on an event log, and ranking.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::event_log::{Activity, EventLog, Trace};
use crate::petri_net::to_petri_net;
use crate::process_tree::{LanguageSet, ProcessTree};
use crate::segmentation::{ReplayStats, Segmenter};

/// Default length bound for language fit.
pub const DEFAULT_LANGUAGE_FIT_BOUND: usize = 5;

/// Fitting and total occurrences of one activity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ActivityFit {
    pub fit: u64,
    pub total: u64,
}

impl ActivityFit {
    pub fn ratio(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.fit as f64 / self.total as f64
        }
    }
}

/// Weights of the five metrics in the ranking score. Normalized to sum 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricWeights {
    pub support: f64,
    pub confidence: f64,
    pub language_fit: f64,
    pub determinism: f64,
    pub coverage: f64,
}

impl MetricWeights {
    pub fn new(
        support: f64,
        confidence: f64,
        language_fit: f64,
        determinism: f64,
        coverage: f64,
    ) -> Result<Self, Error> {
        let all = [support, confidence, language_fit, determinism, coverage];
        if all.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Config("weights must be non-negative".into()));
        }
        let sum: f64 = all.iter().sum();
        if sum <= 0.0 {
            return Err(Error::Config("at least one weight must be positive".into()));
        }
        Ok(MetricWeights {
            support: support / sum,
            confidence: confidence / sum,
            language_fit: language_fit / sum,
            determinism: determinism / sum,
            coverage: coverage / sum,
        })
    }

    /// Weighted sum of the report's metrics.
    pub fn score(&self, r: &QualityReport) -> f64 {
        self.support * r.support
            + self.confidence * r.confidence
            + self.language_fit * r.language_fit
            + self.determinism * r.determinism
            + self.coverage * r.coverage
    }
}

impl Default for MetricWeights {
    fn default() -> Self {
        MetricWeights::new(1.0, 1.0, 1.0, 1.0, 1.0).expect("equal weights")
    }
}

/// Evaluation settings.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalConfig {
    pub language_fit_bound: usize,
    pub weights: MetricWeights,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            language_fit_bound: DEFAULT_LANGUAGE_FIT_BOUND,
            weights: MetricWeights::default(),
        }
    }
}

/// The five quality metrics of one model on one log.
#[derive(Clone, Debug, PartialEq)]
pub struct QualityReport {
    pub support: f64,
    pub confidence: f64,
    pub per_activity: BTreeMap<Activity, ActivityFit>,
    pub language_fit: f64,
    pub language_fit_bound: usize,
    pub determinism: f64,
    pub coverage: f64,
    /// Total number of segments over the log.
    pub k_total: u64,
    pub replay: ReplayStats,
    pub weighted_score: f64,
}

/// `k / (k + 1)`.
pub fn support_metric(k_total: u64) -> f64 {
    k_total as f64 / (k_total as f64 + 1.0)
}

/// Harmonic mean of the per-activity fit ratios; 0 when any activity never fits.
///
/// Fails when an activity has no occurrences at all.
pub fn confidence_metric(per_activity: &BTreeMap<Activity, ActivityFit>) -> Result<f64, Error> {
    if let Some((a, _)) = per_activity.iter().find(|(_, f)| f.total == 0) {
        return Err(Error::UnknownActivity(a.clone()));
    }
    if per_activity.is_empty() || per_activity.values().any(|f| f.fit == 0) {
        return Ok(0.0);
    }
    let denom: f64 = per_activity
        .values()
        .map(|f| f.total as f64 / f.fit as f64)
        .sum();
    Ok(per_activity.len() as f64 / denom)
}

/// Share of the bounded model language observed among the segments.
pub fn language_fit_metric(language: &LanguageSet, observed: &BTreeSet<Trace>) -> f64 {
    if language.is_empty() {
        return 0.0;
    }
    let hit = language
        .traces
        .iter()
        .filter(|t| observed.contains(*t))
        .count();
    hit as f64 / language.len() as f64
}

/// Firings divided by enabled transitions summed over firings; 0 without replay.
pub fn determinism_metric(stats: &ReplayStats) -> f64 {
    if stats.firing_count == 0 {
        0.0
    } else {
        stats.firing_count as f64 / stats.enabled_sum as f64
    }
}

/// Share of log events whose activity belongs to the model.
pub fn coverage_metric(projected_total: u64, total: u64) -> Result<f64, Error> {
    if total == 0 {
        return Err(Error::EmptyLog);
    }
    Ok(projected_total as f64 / total as f64)
}

/// Evaluates `tree` on `log`.
///
/// The log is projected on the model's labels and every distinct projected
/// trace is segmented once; counts are scaled by multiplicity.
pub fn evaluate(
    tree: &ProcessTree,
    log: &EventLog,
    config: &EvalConfig,
) -> Result<QualityReport, Error> {
    if config.language_fit_bound == 0 {
        return Err(Error::Config("language fit bound must be positive".into()));
    }
    let total_events = log.total_events();
    if total_events == 0 {
        return Err(Error::EmptyLog);
    }
    let labels = tree.activities();
    if let Some(a) = labels.iter().find(|a| !log.alphabet().contains(*a)) {
        return Err(Error::UnknownActivity(a.clone()));
    }
    let projected = log.project(&labels);
    let apn_bl = to_petri_net(tree).add_backloop();

    let mut k_total = 0u64;
    let mut fit: BTreeMap<Activity, u64> = labels.iter().map(|a| (a.clone(), 0)).collect();
    let mut observed = BTreeSet::new();
    let mut replay = ReplayStats::default();
    let mut segmenter = Segmenter::new(&apn_bl);
    for (trace, mult) in projected.traces() {
        let seg = segmenter.segment(trace);
        k_total += seg.k() as u64 * mult;
        for s in &seg.segments {
            for a in s.iter() {
                *fit.get_mut(a).expect("segment labels come from the model") += mult;
            }
            observed.insert(s.clone());
        }
        replay.record(&apn_bl, &seg, mult)?;
    }

    let per_activity: BTreeMap<Activity, ActivityFit> = fit
        .into_iter()
        .map(|(a, fit)| {
            let total = log.activity_count(&a);
            (a, ActivityFit { fit, total })
        })
        .collect();

    let language = tree.language(config.language_fit_bound);
    let mut report = QualityReport {
        support: support_metric(k_total),
        confidence: confidence_metric(&per_activity)?,
        per_activity,
        language_fit: language_fit_metric(&language, &observed),
        language_fit_bound: config.language_fit_bound,
        determinism: determinism_metric(&replay),
        coverage: coverage_metric(projected.total_events(), total_events)?,
        k_total,
        replay,
        weighted_score: 0.0,
    };
    report.weighted_score = config.weights.score(&report);
    Ok(report)
}

/// Sorts by weighted score (recomputed with `weights`), descending, and keeps
/// the first `top_k`. Ties: higher support, fewer leaves, tree text.
pub fn rank<T: AsRef<ProcessTree>>(
    reports: Vec<(T, QualityReport)>,
    weights: &MetricWeights,
    top_k: usize,
) -> Vec<(T, QualityReport)> {
    let mut keyed: Vec<(String, (T, QualityReport))> = reports
        .into_iter()
        .map(|(t, mut r)| {
            r.weighted_score = weights.score(&r);
            (t.as_ref().canonical_form().to_string(), (t, r))
        })
        .collect();
    keyed.sort_by(|(ka, (ta, ra)), (kb, (tb, rb))| {
        rb.weighted_score
            .total_cmp(&ra.weighted_score)
            .then(rb.support.total_cmp(&ra.support))
            .then(ta.as_ref().leaf_count().cmp(&tb.as_ref().leaf_count()))
            .then(ka.cmp(kb))
    });
    keyed.into_iter().take(top_k).map(|(_, x)| x).collect()
}

impl AsRef<ProcessTree> for ProcessTree {
    fn as_ref(&self) -> &ProcessTree {
        self
    }
}
