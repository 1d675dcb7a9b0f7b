#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fs::File;
use std::path::PathBuf;

use lpm_core::{Activity, CsvConfig, EventLog, Operator, ProcessTree, Trace};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

pub fn figure1_log() -> EventLog {
    let file = File::open(fixture("figure1.csv")).expect("fixture present");
    EventLog::parse_csv(file, &CsvConfig::default()).expect("fixture parses")
}

pub fn tree(s: &str) -> ProcessTree {
    s.parse().expect("valid tree text")
}

pub fn trace(s: &str) -> Trace {
    Trace::from_names(s.split_whitespace())
}

pub fn alphabet(names: &[&str]) -> BTreeSet<Activity> {
    names.iter().map(Activity::new).collect()
}

pub fn activities(n: usize) -> Vec<Activity> {
    ["a", "b", "c", "d", "e", "f"][..n]
        .iter()
        .map(Activity::new)
        .collect()
}

pub fn random_tree<R: Rng>(rng: &mut R, leaves: usize, sigma: &[Activity]) -> ProcessTree {
    if leaves == 1 {
        return ProcessTree::Leaf(sigma.choose(rng).expect("non-empty").clone());
    }
    let left = rng.gen_range(1..leaves);
    let op = *[Operator::Seq, Operator::Xor, Operator::And, Operator::Loop]
        .choose(rng)
        .expect("non-empty");
    ProcessTree::node(
        op,
        random_tree(rng, left, sigma),
        random_tree(rng, leaves - left, sigma),
    )
}

/// A trace mixing executions drawn from `words` with noise from `sigma`.
pub fn random_trace<R: Rng>(
    rng: &mut R,
    words: &[Trace],
    sigma: &[Activity],
    max_len: usize,
) -> Trace {
    let target = rng.gen_range(1..=max_len);
    let mut events: Vec<Activity> = Vec::new();
    while events.len() < target {
        if !words.is_empty() && rng.gen_bool(0.6) {
            events.extend(words.choose(rng).expect("non-empty").iter().cloned());
        } else {
            events.push(sigma.choose(rng).expect("non-empty").clone());
        }
    }
    events.truncate(max_len);
    Trace::new(events)
}

/// A log whose traces mix executions of the given trees with noise, plus one
/// trace listing `sigma`.
pub fn random_log<R: Rng>(rng: &mut R, trees: &[&ProcessTree], sigma: &[Activity]) -> EventLog {
    let words: Vec<Trace> = trees
        .iter()
        .flat_map(|t| t.language(6).traces)
        .filter(|w| !w.is_empty())
        .collect();
    let mut log = EventLog::new();
    for _ in 0..rng.gen_range(1..=5) {
        let t = random_trace(rng, &words, sigma, 14);
        log.add_trace(t, rng.gen_range(1..=3));
    }
    // Every activity occurs at least once, so confidence is defined.
    log.add_trace(Trace::new(sigma.to_vec()), 1);
    log
}
