//! Discovery of local process models: small process trees with sequence,
//! choice, concurrency and loop operators describing behavior that recurs
//! inside the traces of an event log.
//!
//! The pipeline:
//!
//! 1. [`event_log`] reads a log and projects it on a model's labels.
//! 2. [`process_tree`] holds candidate models and grows them one leaf at a time.
//! 3. [`petri_net`] translates trees to accepting Petri nets and adds the
//!    backloop that lets one trace contain several executions.
//! 4. [`segmentation`] aligns traces on the backloop net to find the fitting
//!    segments.
//! 5. [`metrics`] scores a model by support, confidence, language fit,
//!    determinism and coverage.
//! 6. [`miner`] drives evaluation and expansion with threshold-based pruning.
//!
//! ```
//! use lpm_core::{mine, EventLog, MinerConfig, Trace};
//!
//! let mut log = EventLog::new();
//! log.add_trace(Trace::from_names(["a", "b", "c", "x", "a", "b", "c"]), 5);
//! let config = MinerConfig { min_support: 0.9, max_iterations: 2, ..MinerConfig::default() };
//! let result = mine(&log, &config).unwrap();
//! assert!(result.selected.iter().any(|m| m.tree.to_string() == "seq(a,seq(b,c))"));
//! ```

pub mod error;
pub mod event_log;
pub mod metrics;
pub mod miner;
pub mod petri_net;
pub mod process_tree;
pub mod segmentation;

pub use error::{Error, LogError, NetError, SegmentError};
pub use event_log::{Activity, CsvConfig, EventLog, Trace};
pub use metrics::{
    confidence_metric, coverage_metric, determinism_metric, evaluate, language_fit_metric, rank,
    support_metric, ActivityFit, EvalConfig, MetricWeights, QualityReport,
};
pub use miner::{mine, prune_operators, MinerConfig, MiningResult, SelectedLpm};
pub use petri_net::{
    to_petri_net, AcceptingPetriNet, LabeledPetriNet, Marking, PlaceId, TransitionId,
};
pub use process_tree::{ExpansionShape, LanguageSet, Operator, ProcessTree, ShapeSet};
pub use segmentation::{
    replay_stats, segment, segment_bruteforce, Move, MoveKind, ReplayStats, Segmentation, Segmenter,
};
