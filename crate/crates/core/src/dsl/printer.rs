//! Canonical text form of a model.

use std::fmt::Write;

use crate::model::*;

pub const HEADER: &str = "# hazlang safety model (canonical form)";

/// Quotes `s` as a DSL string literal.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
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

fn id_list<'a>(ids: impl IntoIterator<Item = &'a String>) -> String {
    let ids: Vec<&str> = ids.into_iter().map(String::as_str).collect();
    format!("[{}]", ids.join(", "))
}

/// Emits the canonical form: a header comment, then sections in fixed order
/// with entities sorted by id, one declaration per line.
pub fn serialize(model: &SafetyModel) -> String {
    let m = model.canonical();
    let mut sections: Vec<Vec<String>> = Vec::new();

    if let Some(c) = m.default_controllability {
        sections.push(vec![format!("default_controllability {c}")]);
    }
    sections.push(m.accidents.iter().map(accident_line).collect());
    sections.push(m.hazards.iter().map(hazard_line).collect());
    sections.push(
        m.constraints
            .iter()
            .map(|c| {
                format!(
                    "constraint {} {} mitigates {}",
                    c.id,
                    quote(&c.description),
                    id_list(&c.mitigates)
                )
            })
            .collect(),
    );
    if !m.structure.is_empty() {
        sections.push(structure_lines(&m.structure));
    }
    sections.push(
        m.process_models
            .iter()
            .flat_map(process_model_lines)
            .collect(),
    );
    sections.push(
        m.items
            .iter()
            .map(|i| {
                format!(
                    "item {} {} members {} purpose {}",
                    i.id,
                    quote(&i.name),
                    id_list(&i.members),
                    quote(&i.purpose)
                )
            })
            .collect(),
    );
    sections.push(
        m.situations
            .iter()
            .map(|s| {
                let mut line = format!("situation {} {}", s.id, quote(&s.description));
                if let Some(mode) = &s.operating_mode {
                    write!(line, " mode {}", quote(mode)).unwrap();
                }
                line
            })
            .collect(),
    );
    sections.push(
        m.hazards
            .iter()
            .filter_map(|h| {
                h.classification.map(|c| {
                    format!(
                        "classify {} severity {} exposure {}",
                        h.id, c.severity, c.exposure
                    )
                })
            })
            .collect(),
    );
    sections.push(
        m.events
            .iter()
            .map(|e| {
                let mut line = format!(
                    "event {} hazard {} situation {}",
                    e.id, e.hazard, e.situation
                );
                if let Some(c) = e.controllability {
                    write!(line, " controllability {c}").unwrap();
                }
                line
            })
            .collect(),
    );
    sections.push(
        m.goals
            .iter()
            .map(|g| {
                format!(
                    "goal {} event {} asil {} {}",
                    g.id,
                    g.event,
                    g.asil,
                    quote(&g.text)
                )
            })
            .collect(),
    );
    sections.push(m.ucas.iter().map(uca_line).collect());
    sections.push(
        m.cscs
            .iter()
            .map(|c| format!("csc {} uca {} {}", c.id, c.uca, quote(&c.text)))
            .collect(),
    );
    sections.push(m.scenarios.iter().map(scenario_line).collect());

    let mut out = String::from(HEADER);
    out.push('\n');
    for section in sections.into_iter().filter(|s| !s.is_empty()) {
        out.push('\n');
        for line in section {
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}

fn accident_line(a: &Accident) -> String {
    let mut line = format!("accident {} {}", a.id, quote(&a.description));
    if let Some(note) = &a.severity_note {
        write!(line, " note {}", quote(note)).unwrap();
    }
    line
}

fn hazard_line(h: &Hazard) -> String {
    let mut line = format!(
        "hazard {} {} leads_to {}",
        h.id,
        quote(&h.description),
        id_list(&h.leads_to)
    );
    if let Some(cond) = &h.condition {
        write!(line, " condition {}", quote(cond)).unwrap();
    }
    line
}

fn structure_lines(cs: &ControlStructure) -> Vec<String> {
    let mut lines = vec!["structure {".to_string()];
    for n in &cs.nodes {
        lines.push(format!(
            "  {} {} {}",
            n.kind.keyword(),
            n.id,
            quote(&n.label)
        ));
    }
    for a in &cs.actions {
        let mut line = format!(
            "  action {} from {} to {} {}",
            a.id,
            a.source,
            a.target,
            quote(&a.label)
        );
        if !a.payload_fields.is_empty() {
            let fields: Vec<String> = a.payload_fields.iter().map(|f| quote(f)).collect();
            write!(line, " payload {}", fields.join(", ")).unwrap();
        }
        lines.push(line);
    }
    for f in &cs.feedback {
        lines.push(format!(
            "  feedback {} from {} to {} {}",
            f.id,
            f.source,
            f.target,
            quote(&f.label)
        ));
    }
    lines.push("}".to_string());
    lines
}

fn process_model_lines(pm: &ProcessModel) -> Vec<String> {
    let mut lines = vec![format!("process_model of {} {{", pm.owner)];
    for v in &pm.variables {
        lines.push(format!("  var {} : {{ {} }}", v.name, v.values.join(", ")));
    }
    lines.push("}".to_string());
    lines
}

fn context_clause(ctx: &Context) -> String {
    let mut parts: Vec<String> = ctx
        .assignments
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    if let Some(text) = &ctx.free_text {
        parts.push(quote(text));
    }
    if parts.is_empty() {
        String::new()
    } else {
        format!(" context {{ {} }}", parts.join(", "))
    }
}

/// One `uca` declaration, as it appears in canonical output.
pub fn uca_line(u: &UnsafeControlAction) -> String {
    format!(
        "uca {} action {} type {}{} {} hazards {} status {}",
        u.id,
        u.action,
        u.guide_word,
        context_clause(&u.context),
        quote(&u.description),
        id_list(&u.hazards),
        u.status.as_str()
    )
}

fn scenario_line(s: &CausalScenario) -> String {
    let mut line = format!(
        "scenario {} uca {} factor {} {}",
        s.id,
        s.uca,
        s.factor_category,
        quote(&s.description)
    );
    if let Some(c) = &s.derived_constraint {
        write!(line, " constraint {}", quote(c)).unwrap();
    }
    line
}
