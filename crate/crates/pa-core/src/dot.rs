use crate::pa::Pa;

/// Graphviz rendering: one node per state and a small fan-out node per transition whose
/// outgoing edges carry the probabilities.
pub fn to_dot(pa: &Pa) -> String {
    let mut out = String::from("digraph pa {\n  rankdir=LR;\n");
    for s in pa.states() {
        let shape = if s == pa.initial() { "doublecircle" } else { "circle" };
        out.push_str(&format!("  s{s} [label=\"{}\", shape={shape}];\n", escape(pa.name(s))));
    }
    for (id, t) in pa.transitions().iter().enumerate() {
        out.push_str(&format!("  t{id} [shape=point];\n"));
        out.push_str(&format!(
            "  s{} -> t{id} [label=\"{}\", arrowhead=none];\n",
            t.source,
            escape(&t.label.to_string())
        ));
        for (s, p) in t.dist.iter() {
            out.push_str(&format!("  t{id} -> s{s} [label=\"{p}\", style=dashed];\n"));
        }
    }
    out.push_str("}\n");
    out
}

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}
