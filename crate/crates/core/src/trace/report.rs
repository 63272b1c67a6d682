use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::hara::{assess_event, AssessedEvent};
use crate::model::{GuideWord, ItemDefinition, SafetyModel, UcaStatus};
use crate::stpa::item_definitions;

use super::TraceMatrix;

pub const JSON_SCHEMA_NAME: &str = "hazlang.report";
pub const JSON_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error("unsupported report format `{0}` (expected md, json or csv)")]
    UnsupportedFormat(String),
}

impl ReportError {
    pub fn code(&self) -> &'static str {
        match self {
            ReportError::UnsupportedFormat(_) => "UNSUPPORTED_FORMAT",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(ReportError::UnsupportedFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportFile {
    pub name: String,
    pub contents: String,
}

/// Rendered output. Markdown and JSON produce one file, CSV one per
/// artifact kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub files: Vec<ReportFile>,
}

impl Report {
    pub fn file(&self, name: &str) -> Option<&str> {
        self.files
            .iter()
            .find(|f| f.name == name)
            .map(|f| f.contents.as_str())
    }
}

/// The JSON export document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub version: u32,
    pub model: SafetyModel,
    pub items: Vec<ItemDefinition>,
    pub hara: Vec<AssessedEvent>,
    pub trace: TraceMatrix,
}

pub fn emit_report(
    model: &SafetyModel,
    matrix: &TraceMatrix,
    format: &str,
) -> Result<Report, ReportError> {
    Ok(render_report(model, matrix, format.parse()?))
}

pub fn render_report(model: &SafetyModel, matrix: &TraceMatrix, format: ReportFormat) -> Report {
    let model = model.canonical();
    let files = match format {
        ReportFormat::Markdown => vec![ReportFile {
            name: "report.md".into(),
            contents: markdown(&model, matrix),
        }],
        ReportFormat::Json => vec![ReportFile {
            name: "report.json".into(),
            contents: json(&model, matrix),
        }],
        ReportFormat::Csv => csv_files(&model, matrix),
    };
    Report { files }
}

/// Events that can be rated, in id order. Unclassified hazards and
/// dangling references are left to the findings.
fn rated_events(model: &SafetyModel, matrix: &TraceMatrix) -> Vec<AssessedEvent> {
    model
        .events
        .iter()
        .filter_map(|e| assess_event(model, e, matrix.default_controllability).ok())
        .collect()
}

fn json(model: &SafetyModel, matrix: &TraceMatrix) -> String {
    let doc = ReportDocument {
        schema: JSON_SCHEMA_NAME.into(),
        version: JSON_SCHEMA_VERSION,
        model: model.clone(),
        items: item_definitions(model),
        hara: rated_events(model, matrix),
        trace: matrix.clone(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("report document serializes");
    text.push('\n');
    text
}

fn cell(s: &str) -> String {
    s.replace('\\', "\\\\")
        .replace('|', "\\|")
        .replace('\n', " ")
}

fn join<'a>(ids: impl IntoIterator<Item = &'a String>, sep: &str) -> String {
    ids.into_iter()
        .map(String::as_str)
        .collect::<Vec<_>>()
        .join(sep)
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn render(&self, out: &mut String) {
        if self.rows.is_empty() {
            out.push_str("_None._\n");
            return;
        }
        writeln!(out, "| {} |", self.header.join(" | ")).unwrap();
        writeln!(out, "|{}", "---|".repeat(self.header.len())).unwrap();
        for r in &self.rows {
            let cells: Vec<String> = r
                .iter()
                .map(|c| if c.is_empty() { "-".into() } else { cell(c) })
                .collect();
            writeln!(out, "| {} |", cells.join(" | ")).unwrap();
        }
    }
}

fn section(out: &mut String, level: usize, title: &str) {
    writeln!(out, "\n{} {}\n", "#".repeat(level), title).unwrap();
}

fn markdown(model: &SafetyModel, matrix: &TraceMatrix) -> String {
    let mut out = String::from("# Safety analysis report\n");

    section(&mut out, 2, "Accidents");
    let mut t = Table::new(&["ID", "Description", "Note"]);
    for a in &model.accidents {
        t.row(vec![
            a.id.clone(),
            a.description.clone(),
            a.severity_note.clone().unwrap_or_default(),
        ]);
    }
    t.render(&mut out);

    section(&mut out, 2, "Hazards");
    let mut t = Table::new(&["ID", "Description", "Leads to", "S", "E"]);
    for h in &model.hazards {
        t.row(vec![
            h.id.clone(),
            h.description.clone(),
            join(&h.leads_to, ", "),
            h.severity().map(|s| s.to_string()).unwrap_or_default(),
            h.exposure().map(|e| e.to_string()).unwrap_or_default(),
        ]);
    }
    t.render(&mut out);

    section(&mut out, 2, "System safety constraints");
    let mut t = Table::new(&["ID", "Constraint", "Mitigates"]);
    for c in &model.constraints {
        t.row(vec![
            c.id.clone(),
            c.description.clone(),
            join(&c.mitigates, ", "),
        ]);
    }
    t.render(&mut out);

    section(&mut out, 2, "Control structure");
    let mut t = Table::new(&["ID", "Kind", "Label"]);
    for n in &model.structure.nodes {
        t.row(vec![n.id.clone(), n.kind.as_str().into(), n.label.clone()]);
    }
    t.render(&mut out);
    section(&mut out, 3, "Control actions");
    let mut t = Table::new(&["ID", "From", "To", "Label", "Payload"]);
    for a in &model.structure.actions {
        t.row(vec![
            a.id.clone(),
            a.source.clone(),
            a.target.clone(),
            a.label.clone(),
            join(&a.payload_fields, ", "),
        ]);
    }
    t.render(&mut out);
    section(&mut out, 3, "Feedback");
    let mut t = Table::new(&["ID", "From", "To", "Label"]);
    for f in &model.structure.feedback {
        t.row(vec![
            f.id.clone(),
            f.source.clone(),
            f.target.clone(),
            f.label.clone(),
        ]);
    }
    t.render(&mut out);
    section(&mut out, 3, "Process models");
    let mut t = Table::new(&["Controller", "Variable", "Values"]);
    for pm in &model.process_models {
        for v in &pm.variables {
            t.row(vec![
                pm.owner.clone(),
                v.name.clone(),
                join(&v.values, ", "),
            ]);
        }
    }
    t.render(&mut out);

    section(&mut out, 2, "Items");
    let mut t = Table::new(&["ID", "Name", "Members", "Inputs", "Outputs", "Purpose"]);
    for i in item_definitions(model) {
        t.row(vec![
            i.id,
            i.name,
            join(&i.members, ", "),
            join(&i.boundary_in, ", "),
            join(&i.boundary_out, ", "),
            i.purpose,
        ]);
    }
    t.render(&mut out);

    section(&mut out, 2, "Operational situations");
    let mut t = Table::new(&["ID", "Situation", "Operating mode"]);
    for s in &model.situations {
        t.row(vec![
            s.id.clone(),
            s.description.clone(),
            s.operating_mode.clone().unwrap_or_default(),
        ]);
    }
    t.render(&mut out);

    section(&mut out, 2, "Hazard analysis and risk assessment");
    let rated = rated_events(model, matrix);
    let mut t = Table::new(&[
        "Event",
        "Hazard",
        "Situation",
        "S",
        "E",
        "C",
        "ASIL",
        "Safety goal",
    ]);
    for e in &model.events {
        let goals: Vec<&String> = model
            .goals
            .iter()
            .filter(|g| g.event == e.id)
            .map(|g| &g.id)
            .collect();
        match rated.iter().find(|r| r.id == e.id) {
            Some(r) => t.row(vec![
                r.id.clone(),
                r.hazard.clone(),
                r.situation.clone(),
                r.severity.to_string(),
                r.exposure.to_string(),
                r.controllability.to_string(),
                r.asil.label(),
                join(goals, ", "),
            ]),
            None => t.row(vec![
                e.id.clone(),
                e.hazard.clone(),
                e.situation.clone(),
                String::new(),
                String::new(),
                e.controllability.map(|c| c.to_string()).unwrap_or_default(),
                "unrated".into(),
                join(goals, ", "),
            ]),
        }
    }
    t.render(&mut out);

    section(&mut out, 2, "Safety goals");
    let mut t = Table::new(&["ID", "Safety goal", "Event", "ASIL"]);
    for g in &model.goals {
        let asil = if g.asil == crate::model::AsilRating::QM {
            "QM (informative)".to_string()
        } else {
            g.asil.label()
        };
        t.row(vec![g.id.clone(), g.text.clone(), g.event.clone(), asil]);
    }
    t.render(&mut out);

    section(&mut out, 2, "Unsafe control actions");
    let mut header = vec!["Control action"];
    header.extend(GuideWord::ALL.iter().map(|g| g.column_title()));
    let mut t = Table::new(&header);
    for a in &model.structure.actions {
        let mut row = vec![format!("{} ({})", a.label, a.id)];
        for g in GuideWord::ALL {
            let ids: Vec<&String> = model
                .ucas
                .iter()
                .filter(|u| {
                    u.status == UcaStatus::Confirmed && u.action == a.id && u.guide_word == g
                })
                .map(|u| &u.id)
                .collect();
            row.push(join(ids, ", "));
        }
        t.row(row);
    }
    t.render(&mut out);
    section(&mut out, 3, "UCA details");
    let mut t = Table::new(&[
        "ID",
        "Action",
        "Type",
        "Context",
        "Description",
        "Hazards",
        "Status",
    ]);
    for u in &model.ucas {
        t.row(vec![
            u.id.clone(),
            u.action.clone(),
            u.guide_word.as_str().into(),
            u.context.phrase(),
            u.description.clone(),
            join(&u.hazards, ", "),
            u.status.as_str().into(),
        ]);
    }
    t.render(&mut out);

    section(&mut out, 2, "Corresponding safety constraints");
    let mut t = Table::new(&["ID", "UCA", "Constraint"]);
    for c in &model.cscs {
        t.row(vec![c.id.clone(), c.uca.clone(), c.text.clone()]);
    }
    t.render(&mut out);

    section(&mut out, 2, "Causal scenarios");
    let mut t = Table::new(&[
        "ID",
        "UCA",
        "Causal factor",
        "Scenario",
        "Derived constraint",
    ]);
    for s in &model.scenarios {
        t.row(vec![
            s.id.clone(),
            s.uca.clone(),
            s.factor_category.as_str().into(),
            s.description.clone(),
            s.derived_constraint.clone().unwrap_or_default(),
        ]);
    }
    t.render(&mut out);

    section(&mut out, 2, "Traceability findings");
    let mut t = Table::new(&["Rule", "Entity", "Message"]);
    for f in &matrix.orphans {
        t.row(vec![
            f.rule.as_str().into(),
            f.entity.clone(),
            f.message.clone(),
        ]);
    }
    t.render(&mut out);

    out
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn csv_files(model: &SafetyModel, matrix: &TraceMatrix) -> Vec<ReportFile> {
    let opt = |o: Option<String>| o.unwrap_or_default();
    let mut files = Vec::new();
    let mut add = |name: &str, header: &[&str], rows: Vec<Vec<String>>| {
        files.push(ReportFile {
            name: name.into(),
            contents: csv_text(header, rows),
        });
    };

    add(
        "accidents.csv",
        &["id", "description", "note"],
        model
            .accidents
            .iter()
            .map(|a| {
                vec![
                    a.id.clone(),
                    a.description.clone(),
                    opt(a.severity_note.clone()),
                ]
            })
            .collect(),
    );
    add(
        "hazards.csv",
        &["id", "description", "leads_to", "severity", "exposure"],
        model
            .hazards
            .iter()
            .map(|h| {
                vec![
                    h.id.clone(),
                    h.description.clone(),
                    join(&h.leads_to, ";"),
                    opt(h.severity().map(|s| s.to_string())),
                    opt(h.exposure().map(|e| e.to_string())),
                ]
            })
            .collect(),
    );
    add(
        "constraints.csv",
        &["id", "description", "mitigates"],
        model
            .constraints
            .iter()
            .map(|c| vec![c.id.clone(), c.description.clone(), join(&c.mitigates, ";")])
            .collect(),
    );
    add(
        "nodes.csv",
        &["id", "kind", "label"],
        model
            .structure
            .nodes
            .iter()
            .map(|n| vec![n.id.clone(), n.kind.as_str().into(), n.label.clone()])
            .collect(),
    );
    add(
        "control_actions.csv",
        &["id", "source", "target", "label", "payload"],
        model
            .structure
            .actions
            .iter()
            .map(|a| {
                vec![
                    a.id.clone(),
                    a.source.clone(),
                    a.target.clone(),
                    a.label.clone(),
                    join(&a.payload_fields, ";"),
                ]
            })
            .collect(),
    );
    add(
        "feedback.csv",
        &["id", "source", "target", "label"],
        model
            .structure
            .feedback
            .iter()
            .map(|f| {
                vec![
                    f.id.clone(),
                    f.source.clone(),
                    f.target.clone(),
                    f.label.clone(),
                ]
            })
            .collect(),
    );
    add(
        "process_models.csv",
        &["controller", "variable", "values"],
        model
            .process_models
            .iter()
            .flat_map(|pm| {
                pm.variables
                    .iter()
                    .map(|v| vec![pm.owner.clone(), v.name.clone(), join(&v.values, ";")])
            })
            .collect(),
    );
    add(
        "items.csv",
        &[
            "id",
            "name",
            "members",
            "boundary_in",
            "boundary_out",
            "purpose",
        ],
        item_definitions(model)
            .into_iter()
            .map(|i| {
                vec![
                    i.id,
                    i.name,
                    join(&i.members, ";"),
                    join(&i.boundary_in, ";"),
                    join(&i.boundary_out, ";"),
                    i.purpose,
                ]
            })
            .collect(),
    );
    add(
        "situations.csv",
        &["id", "description", "operating_mode"],
        model
            .situations
            .iter()
            .map(|s| {
                vec![
                    s.id.clone(),
                    s.description.clone(),
                    opt(s.operating_mode.clone()),
                ]
            })
            .collect(),
    );
    add(
        "hazardous_events.csv",
        &[
            "id",
            "hazard",
            "situation",
            "severity",
            "exposure",
            "controllability",
            "asil",
        ],
        rated_events(model, matrix)
            .into_iter()
            .map(|e| {
                vec![
                    e.id,
                    e.hazard,
                    e.situation,
                    e.severity.to_string(),
                    e.exposure.to_string(),
                    e.controllability.to_string(),
                    e.asil.to_string(),
                ]
            })
            .collect(),
    );
    add(
        "safety_goals.csv",
        &["id", "event", "asil", "text"],
        model
            .goals
            .iter()
            .map(|g| {
                vec![
                    g.id.clone(),
                    g.event.clone(),
                    g.asil.to_string(),
                    g.text.clone(),
                ]
            })
            .collect(),
    );
    add(
        "ucas.csv",
        &[
            "id",
            "action",
            "guide_word",
            "context",
            "description",
            "hazards",
            "status",
        ],
        model
            .ucas
            .iter()
            .map(|u| {
                vec![
                    u.id.clone(),
                    u.action.clone(),
                    u.guide_word.as_str().into(),
                    u.context.phrase(),
                    u.description.clone(),
                    join(&u.hazards, ";"),
                    u.status.as_str().into(),
                ]
            })
            .collect(),
    );
    add(
        "cscs.csv",
        &["id", "uca", "text"],
        model
            .cscs
            .iter()
            .map(|c| vec![c.id.clone(), c.uca.clone(), c.text.clone()])
            .collect(),
    );
    add(
        "scenarios.csv",
        &["id", "uca", "factor", "description", "constraint"],
        model
            .scenarios
            .iter()
            .map(|s| {
                vec![
                    s.id.clone(),
                    s.uca.clone(),
                    s.factor_category.as_str().into(),
                    s.description.clone(),
                    opt(s.derived_constraint.clone()),
                ]
            })
            .collect(),
    );
    add(
        "links.csv",
        &["from", "to", "kind"],
        matrix
            .links
            .iter()
            .map(|l| vec![l.from.clone(), l.to.clone(), l.kind.as_str().into()])
            .collect(),
    );
    add(
        "findings.csv",
        &["rule", "entity", "message"],
        matrix
            .orphans
            .iter()
            .map(|f| vec![f.rule.as_str().into(), f.entity.clone(), f.message.clone()])
            .collect(),
    );
    files
}
