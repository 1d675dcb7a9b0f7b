use std::fmt::Write;

use lpm_core::{AcceptingPetriNet, QualityReport};

/// Renders a model as a Graphviz digraph. Visible transitions carry the
/// number of fitting events over all events of their activity.
pub fn export_dot(apn: &AcceptingPetriNet, report: &QualityReport) -> String {
    let net = apn.net();
    let mut out = String::new();
    out.push_str("digraph lpm {\n");
    out.push_str("    graph [rankdir=LR]\n");
    out.push_str("    node [fontname=\"Helvetica\"]\n");

    for p in net.places() {
        let initial = apn.initial().tokens(p) > 0;
        let is_final = apn.finals().iter().any(|m| m.tokens(p) > 0);
        let shape = if is_final { "doublecircle" } else { "circle" };
        let label = if initial { "&bull;" } else { "" };
        writeln!(
            out,
            "    {p} [shape={shape} label=\"{label}\" width=0.4 fixedsize=true]"
        )
        .unwrap();
    }
    for (i, t) in net.transitions().iter().enumerate() {
        match &t.label {
            Some(a) => {
                let label = match report.per_activity.get(a) {
                    Some(f) => format!("{a} {}/{}", f.fit, f.total),
                    None => a.to_string(),
                };
                writeln!(out, "    t{i} [shape=box label=\"{}\"]", escape(&label)).unwrap();
            }
            None => writeln!(
                out,
                "    t{i} [shape=box style=filled fillcolor=black label=\"\" width=0.15 height=0.4]"
            )
            .unwrap(),
        }
    }
    for (i, t) in net.transitions().iter().enumerate() {
        for p in &t.inputs {
            writeln!(out, "    {p} -> t{i}").unwrap();
        }
        for p in &t.outputs {
            writeln!(out, "    t{i} -> {p}").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
