//! Event logs as finite multisets of activity traces.
//!
//! Logs can be read from CSV (one row per event) or from the XES interchange
//! format. Only the activity label of each event is retained.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::{BufRead, Read};
use std::ops::Deref;
use std::sync::Arc;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use crate::error::LogError;

/// An activity label. Two activities are equal iff their names are equal
/// (byte-wise, case-sensitive).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Activity(Arc<str>);

impl Activity {
    /// Creates an activity from a non-empty name.
    ///
    /// Panics if `name` is empty; use [`Activity::try_new`] for untrusted input.
    pub fn new(name: impl AsRef<str>) -> Self {
        Self::try_new(name).expect("activity name must be non-empty")
    }

    pub fn try_new(name: impl AsRef<str>) -> Option<Self> {
        let name = name.as_ref();
        if name.is_empty() {
            None
        } else {
            Some(Activity(Arc::from(name)))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for Activity {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Activity {
    fn from(name: &str) -> Self {
        Activity::new(name)
    }
}

/// A finite sequence of activities. The empty trace is legal.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trace(Vec<Activity>);

impl Trace {
    pub fn new(events: Vec<Activity>) -> Self {
        Trace(events)
    }

    /// Builds a trace from activity names.
    pub fn from_names<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Self {
        Trace(names.into_iter().map(Activity::new).collect())
    }

    pub fn events(&self) -> &[Activity] {
        &self.0
    }

    pub fn into_events(self) -> Vec<Activity> {
        self.0
    }

    /// The subsequence of events whose activity is in `labels`.
    pub fn project(&self, labels: &BTreeSet<Activity>) -> Trace {
        Trace(
            self.0
                .iter()
                .filter(|a| labels.contains(*a))
                .cloned()
                .collect(),
        )
    }

    pub fn count(&self, activity: &Activity) -> usize {
        self.0.iter().filter(|a| *a == activity).count()
    }
}

impl Deref for Trace {
    type Target = [Activity];

    fn deref(&self) -> &[Activity] {
        &self.0
    }
}

impl FromIterator<Activity> for Trace {
    fn from_iter<I: IntoIterator<Item = Activity>>(iter: I) -> Self {
        Trace(iter.into_iter().collect())
    }
}

impl fmt::Debug for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(">")
    }
}

/// A multiset of traces over an activity alphabet.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EventLog {
    traces: BTreeMap<Trace, u64>,
    alphabet: BTreeSet<Activity>,
}

impl EventLog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `multiplicity` copies of `trace`. A multiplicity of zero is ignored.
    pub fn add_trace(&mut self, trace: Trace, multiplicity: u64) {
        if multiplicity == 0 {
            return;
        }
        self.alphabet.extend(trace.iter().cloned());
        *self.traces.entry(trace).or_insert(0) += multiplicity;
    }

    /// Adds activities to the alphabet without adding events.
    pub fn widen_alphabet(&mut self, activities: impl IntoIterator<Item = Activity>) {
        self.alphabet.extend(activities);
    }

    /// Distinct traces with their multiplicities, in a deterministic order.
    pub fn traces(&self) -> impl Iterator<Item = (&Trace, u64)> {
        self.traces.iter().map(|(t, m)| (t, *m))
    }

    pub fn alphabet(&self) -> &BTreeSet<Activity> {
        &self.alphabet
    }

    pub fn multiplicity(&self, trace: &Trace) -> u64 {
        self.traces.get(trace).copied().unwrap_or(0)
    }

    /// Number of traces counted with multiplicity.
    pub fn num_traces(&self) -> u64 {
        self.traces.values().sum()
    }

    pub fn num_distinct_traces(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    /// Projects every trace on `labels`. Traces that become identical are
    /// merged; traces that become empty are kept.
    pub fn project(&self, labels: &BTreeSet<Activity>) -> EventLog {
        let mut out = EventLog::new();
        for (trace, m) in &self.traces {
            out.add_trace(trace.project(labels), *m);
        }
        out.alphabet = self.alphabet.intersection(labels).cloned().collect();
        out
    }

    /// Occurrences of `activity` over the whole log.
    pub fn activity_count(&self, activity: &Activity) -> u64 {
        self.traces
            .iter()
            .map(|(t, m)| t.count(activity) as u64 * m)
            .sum()
    }

    /// Total number of events, weighted by multiplicity.
    pub fn total_events(&self) -> u64 {
        self.traces.iter().map(|(t, m)| t.len() as u64 * m).sum()
    }

    /// Reads a CSV event table. See [`CsvConfig`] for column mapping.
    pub fn parse_csv<R: Read>(source: R, config: &CsvConfig) -> Result<EventLog, LogError> {
        parse_csv(source, config)
    }

    /// Reads an XES document.
    pub fn parse_xes<R: BufRead>(source: R) -> Result<EventLog, LogError> {
        parse_xes(source)
    }
}

impl FromIterator<Trace> for EventLog {
    fn from_iter<I: IntoIterator<Item = Trace>>(iter: I) -> Self {
        let mut log = EventLog::new();
        for t in iter {
            log.add_trace(t, 1);
        }
        log
    }
}

/// Column mapping for CSV input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvConfig {
    pub case_column: String,
    pub activity_column: String,
    /// When set, events of a case are ordered by this column (RFC 3339 or
    /// epoch seconds); ties keep row order.
    pub timestamp_column: Option<String>,
    pub delimiter: u8,
}

impl Default for CsvConfig {
    fn default() -> Self {
        CsvConfig {
            case_column: "case".to_string(),
            activity_column: "activity".to_string(),
            timestamp_column: Some("timestamp".to_string()),
            delimiter: b',',
        }
    }
}

impl CsvConfig {
    /// Default column names, events kept in row order.
    pub fn row_order() -> Self {
        CsvConfig {
            timestamp_column: None,
            ..Self::default()
        }
    }
}

fn column_index(headers: &csv::StringRecord, name: &str) -> Result<usize, LogError> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| LogError::MissingColumn(name.to_string()))
}

/// Parses an RFC 3339 date-time or an epoch-seconds number into nanoseconds.
fn parse_timestamp(raw: &str) -> Option<i128> {
    let raw = raw.trim();
    if let Ok(dt) = chrono::DateTime::parse_from_rfc3339(raw) {
        return Some(dt.timestamp() as i128 * 1_000_000_000 + dt.timestamp_subsec_nanos() as i128);
    }
    if let Ok(secs) = raw.parse::<i64>() {
        return Some(secs as i128 * 1_000_000_000);
    }
    match raw.parse::<f64>() {
        Ok(secs) if secs.is_finite() => Some((secs * 1e9).round() as i128),
        _ => None,
    }
}

fn parse_csv<R: Read>(source: R, config: &CsvConfig) -> Result<EventLog, LogError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(config.delimiter)
        .has_headers(true)
        .flexible(false)
        .from_reader(source);
    let headers = reader.headers()?.clone();
    let case_idx = column_index(&headers, &config.case_column)?;
    let activity_idx = column_index(&headers, &config.activity_column)?;
    let ts_idx = match &config.timestamp_column {
        Some(name) => Some(column_index(&headers, name)?),
        None => None,
    };

    // case id -> (first-seen order, events as (timestamp, row, activity))
    let mut cases: HashMap<String, usize> = HashMap::new();
    let mut events: Vec<Vec<(i128, usize, Activity)>> = Vec::new();

    for (row_idx, record) in reader.records().enumerate() {
        let record = record?;
        // 1-based data row; the header is row 0.
        let row = row_idx + 1;
        let case = record.get(case_idx).unwrap_or_default().to_string();
        let name = record.get(activity_idx).unwrap_or_default();
        let activity = Activity::try_new(name).ok_or(LogError::EmptyActivity { row })?;
        let ts = match ts_idx {
            Some(i) => {
                let raw = record.get(i).unwrap_or_default();
                parse_timestamp(raw).ok_or_else(|| LogError::Timestamp {
                    row,
                    value: raw.to_string(),
                })?
            }
            None => 0,
        };
        let next = cases.len();
        let slot = *cases.entry(case).or_insert(next);
        if slot == events.len() {
            events.push(Vec::new());
        }
        events[slot].push((ts, row, activity));
    }

    let mut log = EventLog::new();
    for mut case_events in events {
        case_events.sort_by_key(|(ts, row, _)| (*ts, *row));
        log.add_trace(case_events.into_iter().map(|(_, _, a)| a).collect(), 1);
    }
    Ok(log)
}

fn concept_name(e: &BytesStart<'_>) -> Result<Option<String>, quick_xml::Error> {
    let mut key = None;
    let mut value = None;
    for attr in e.attributes() {
        let attr = attr.map_err(quick_xml::Error::from)?;
        match attr.key.local_name().as_ref() {
            b"key" => key = Some(attr.unescape_value()?.into_owned()),
            b"value" => value = Some(attr.unescape_value()?.into_owned()),
            _ => {}
        }
    }
    Ok(match key.as_deref() {
        Some("concept:name") => value,
        _ => None,
    })
}

fn parse_xes<R: BufRead>(source: R) -> Result<EventLog, LogError> {
    let mut reader = Reader::from_reader(source);
    let mut buf = Vec::new();
    let mut log = EventLog::new();

    // Element path below <log>, used to find attributes that belong directly to an event.
    let mut stack: Vec<Vec<u8>> = Vec::new();
    let mut trace_index = 0usize;
    let mut current: Option<Vec<Activity>> = None;
    let mut event_name: Option<String> = None;
    let mut saw_log = false;

    let xml_err = |reader: &Reader<R>, e: quick_xml::Error| LogError::Xml {
        position: reader.buffer_position(),
        message: e.to_string(),
    };

    loop {
        let ev = reader.read_event_into(&mut buf);
        let ev = match ev {
            Ok(ev) => ev,
            Err(e) => return Err(xml_err(&reader, e)),
        };
        match ev {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let is_empty = matches!(ev, Event::Empty(_));
                let name = e.local_name().as_ref().to_vec();
                let parent = stack.last().map(|p| p.as_slice());
                match (name.as_slice(), parent) {
                    (b"log", None) => saw_log = true,
                    (b"trace", Some(b"log")) => {
                        current = Some(Vec::new());
                        if is_empty {
                            log.add_trace(Trace::new(current.take().unwrap_or_default()), 1);
                            trace_index += 1;
                        }
                    }
                    (b"event", Some(b"trace")) => {
                        event_name = None;
                        if is_empty {
                            return Err(LogError::MissingConceptName { trace: trace_index });
                        }
                    }
                    (b"string", Some(b"event")) => {
                        if let Some(v) = concept_name(e).map_err(|err| xml_err(&reader, err))? {
                            event_name = Some(v);
                        }
                    }
                    _ => {}
                }
                if !is_empty {
                    stack.push(name);
                }
            }
            Event::End(ref e) => {
                let name = e.local_name().as_ref().to_vec();
                stack.pop();
                let parent = stack.last().map(|p| p.as_slice());
                match (name.as_slice(), parent) {
                    (b"event", Some(b"trace")) => {
                        let activity = event_name
                            .take()
                            .and_then(Activity::try_new)
                            .ok_or(LogError::MissingConceptName { trace: trace_index })?;
                        if let Some(t) = current.as_mut() {
                            t.push(activity);
                        }
                    }
                    (b"trace", Some(b"log")) => {
                        log.add_trace(Trace::new(current.take().unwrap_or_default()), 1);
                        trace_index += 1;
                    }
                    _ => {}
                }
            }
            Event::Eof => break,
            _ => {}
        }
        buf.clear();
    }

    if !stack.is_empty() {
        return Err(LogError::Xml {
            position: reader.buffer_position(),
            message: "unexpected end of document".to_string(),
        });
    }
    if !saw_log {
        return Err(LogError::Xml {
            position: reader.buffer_position(),
            message: "missing <log> root element".to_string(),
        });
    }
    Ok(log)
}
