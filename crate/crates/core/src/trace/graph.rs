use std::fmt::Write;

use crate::model::{NodeKind, SafetyModel};

fn shape(kind: NodeKind) -> &'static str {
    match kind {
        NodeKind::Controller => "box",
        NodeKind::Actuator => "hexagon",
        NodeKind::ControlledProcess => "box3d",
        NodeKind::Sensor => "ellipse",
        NodeKind::External => "note",
    }
}

fn dot_quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            other => out.push(other),
        }
    }
    out.push('"');
    out
}

/// Graphviz rendering of the control structure: one statement per node
/// (shape by kind), solid edges for control actions, dashed edges for
/// feedback. Nodes and edges appear in id order.
pub fn export_control_structure(model: &SafetyModel) -> String {
    let cs = model.canonical().structure;
    let mut out = String::from("digraph control_structure {\n  rankdir=TB;\n");
    for n in &cs.nodes {
        writeln!(
            out,
            "  {} [label={}, shape={}, kind={}];",
            dot_quote(&n.id),
            dot_quote(&n.label),
            shape(n.kind),
            n.kind.as_str()
        )
        .unwrap();
    }
    for a in &cs.actions {
        writeln!(
            out,
            "  {} -> {} [id={}, label={}, style=solid];",
            dot_quote(&a.source),
            dot_quote(&a.target),
            dot_quote(&a.id),
            dot_quote(&a.label)
        )
        .unwrap();
    }
    for f in &cs.feedback {
        writeln!(
            out,
            "  {} -> {} [id={}, label={}, style=dashed];",
            dot_quote(&f.source),
            dot_quote(&f.target),
            dot_quote(&f.id),
            dot_quote(&f.label)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    #[test]
    fn single_controller() {
        let m = parse("structure {\n controller C \"the \\\"core\\\"\"\n}\n", "t").model;
        assert_eq!(
            export_control_structure(&m),
            "digraph control_structure {\n  rankdir=TB;\n  \"C\" [label=\"the \\\"core\\\"\", shape=box, kind=controller];\n}\n"
        );
    }
}
