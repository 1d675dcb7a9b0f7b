use criterion::{criterion_group, criterion_main, Criterion};
use lpm_core::{
    evaluate, mine, segment, to_petri_net, EvalConfig, EventLog, MinerConfig, ProcessTree, Trace,
};

const TRACES: [&str; 7] = [
    "A A C B A A C B B C",
    "C A C B A A A B C B",
    "A A B D C D A B C B",
    "C A C B B B A D B C",
    "B A B C C",
    "D A C B C A A C A B",
    "D A B C D C A C A B C",
];

fn log() -> EventLog {
    TRACES
        .iter()
        .map(|t| Trace::from_names(t.split_whitespace()))
        .collect()
}

fn benches(c: &mut Criterion) {
    let log = log();
    let tree: ProcessTree = "seq(A,and(B,C))".parse().unwrap();
    let net = to_petri_net(&tree).add_backloop();
    let trace = Trace::from_names(TRACES[0].split_whitespace()).project(&tree.activities());

    c.bench_function("segment", |b| b.iter(|| segment(&net, &trace)));
    c.bench_function("evaluate", |b| {
        b.iter(|| evaluate(&tree, &log, &EvalConfig::default()).unwrap())
    });
    let config = MinerConfig {
        max_iterations: 2,
        ..MinerConfig::default()
    };
    c.bench_function("mine", |b| b.iter(|| mine(&log, &config).unwrap()));
}

criterion_group!(discovery, benches);
criterion_main!(discovery);
