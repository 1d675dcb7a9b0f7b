//! Command-line front end: load a log, mine local process models, write the
//! ranked results as JSON and the models as DOT.

mod dot;
mod json;

use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use lpm_core::{mine, CsvConfig, EventLog, MetricWeights, MinerConfig};

pub use dot::export_dot;
pub use json::{export_json, ConfigEcho, Document, Entry, Fit, Weights, SCHEMA_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Xes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Dot,
    Both,
}

#[derive(Debug, Parser)]
#[command(
    name = "lpm",
    version,
    about = "Discover local process models in an event log"
)]
pub struct Args {
    /// Event log (.csv or .xes)
    #[arg(long)]
    pub log: PathBuf,
    /// Log format; inferred from the file extension when omitted
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = 0.7)]
    pub min_support: f64,
    #[arg(long, default_value_t = 0.0)]
    pub min_confidence: f64,
    #[arg(long, default_value_t = 0.0)]
    pub min_determinism: f64,
    #[arg(long, default_value_t = 0.0)]
    pub min_language_fit: f64,
    #[arg(long, default_value_t = 0.0)]
    pub min_coverage: f64,
    /// Expansion rounds; models have at most this many leaves plus one
    #[arg(long, default_value_t = 4)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 3)]
    pub min_leaves: usize,
    /// Length bound of the model language used for language fit
    #[arg(long, default_value_t = 5)]
    pub language_fit_bound: usize,
    /// Ranking weights for support, confidence, language fit, determinism, coverage
    #[arg(long, value_name = "S,C,L,D,V", default_value = "1,1,1,1,1")]
    pub weights: String,
    #[arg(long, default_value_t = 20)]
    pub top_k: usize,
    /// Disable monotonicity pruning
    #[arg(long)]
    pub no_prune: bool,
    /// Also prune loop(b,a) expansions below the support threshold
    #[arg(long)]
    pub prune_loop_left: bool,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Output::Both)]
    pub output: Output,
    /// CSV column holding the case identifier
    #[arg(long, default_value = "case")]
    pub case_column: String,
    /// CSV column holding the activity name
    #[arg(long, default_value = "activity")]
    pub activity_column: String,
    /// CSV column used to order events within a case
    #[arg(long, default_value = "timestamp")]
    pub timestamp_column: String,
    /// Keep CSV events in file order instead of sorting by timestamp
    #[arg(long)]
    pub row_order: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Input(_) => 3,
            CliError::Output(_) => 1,
        }
    }
}

fn parse_weights(s: &str) -> Result<MetricWeights, CliError> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Config(format!("weights `{s}`: {e}")))?;
    let [s_, c, l, d, v] = parts[..] else {
        return Err(CliError::Config(format!(
            "weights `{s}`: expected five values"
        )));
    };
    MetricWeights::new(s_, c, l, d, v).map_err(|e| CliError::Config(e.to_string()))
}

impl Args {
    pub fn miner_config(&self) -> Result<MinerConfig, CliError> {
        let config = MinerConfig {
            min_support: self.min_support,
            min_confidence: self.min_confidence,
            min_determinism: self.min_determinism,
            min_language_fit: self.min_language_fit,
            min_coverage: self.min_coverage,
            max_iterations: self.max_iterations,
            min_leaves: self.min_leaves,
            language_fit_bound: self.language_fit_bound,
            weights: parse_weights(&self.weights)?,
            top_k: self.top_k,
            pruning_enabled: !self.no_prune,
            prune_loop_left: self.prune_loop_left,
            ..MinerConfig::default()
        };
        config
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(config)
    }

    fn format(&self) -> Result<Format, CliError> {
        if let Some(f) = self.format {
            return Ok(f);
        }
        let ext = self
            .log
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        match ext.as_deref() {
            Some("csv") => Ok(Format::Csv),
            Some("xes") => Ok(Format::Xes),
            _ => Err(CliError::Config(format!(
                "cannot infer the format of {}; pass --format",
                self.log.display()
            ))),
        }
    }

    fn csv_config(&self) -> CsvConfig {
        CsvConfig {
            case_column: self.case_column.clone(),
            activity_column: self.activity_column.clone(),
            timestamp_column: (!self.row_order).then(|| self.timestamp_column.clone()),
            ..CsvConfig::default()
        }
    }
}

pub fn load_log(path: &Path, format: Format, csv: &CsvConfig) -> Result<EventLog, CliError> {
    let file = File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let log = match format {
        Format::Csv => EventLog::parse_csv(file, csv),
        Format::Xes => EventLog::parse_xes(BufReader::new(file)),
    }
    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if log.total_events() == 0 {
        return Err(CliError::Input(format!(
            "{}: log has no events",
            path.display()
        )));
    }
    Ok(log)
}

/// Runs the whole pipeline and returns the summary lines that were printed.
pub fn run(args: &Args) -> Result<Vec<String>, CliError> {
    let config = args.miner_config()?;
    let format = args.format()?;
    let log = load_log(&args.log, format, &args.csv_config())?;
    let result = mine(&log, &config).map_err(|e| CliError::Input(e.to_string()))?;

    let write = |name: String, text: &str| {
        let path = args.out_dir.join(name);
        fs::write(&path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
    };
    fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::Output(format!("{}: {e}", args.out_dir.display())))?;
    if matches!(args.output, Output::Json | Output::Both) {
        write("lpms.json".into(), &export_json(&result, &config))?;
    }
    if matches!(args.output, Output::Dot | Output::Both) {
        for (i, m) in result.selected.iter().enumerate() {
            write(format!("lpm_{}.dot", i + 1), &export_dot(&m.net, &m.report))?;
        }
    }

    let lines: Vec<String> = result
        .selected
        .iter()
        .enumerate()
        .map(|(i, m)| {
            format!(
                "{:>3}  {}  score={:.4} support={:.4} confidence={:.4}",
                i + 1,
                m.tree,
                m.report.weighted_score,
                m.report.support,
                m.report.confidence
            )
        })
        .collect();
    for line in &lines {
        println!("{line}");
    }
    eprintln!(
        "{} models selected; {} candidates evaluated in {} expansion rounds, {} pruned",
        result.selected.len(),
        result.candidates_evaluated,
        result.iterations_run,
        result.candidates_pruned
    );
    Ok(lines)
}
