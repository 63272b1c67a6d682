//! Traceability across every artifact kind, plus report and graph output.

mod graph;
mod report;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::hara::{default_controllability, determine_asil};
use crate::model::{ControllabilityClass, SafetyModel, UcaStatus};

pub use graph::export_control_structure;
pub use report::{
    emit_report, render_report, Report, ReportDocument, ReportError, ReportFile, ReportFormat,
    JSON_SCHEMA_NAME, JSON_SCHEMA_VERSION,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LinkKind {
    #[serde(rename = "hazard->accident")]
    HazardAccident,
    #[serde(rename = "constraint->hazard")]
    ConstraintHazard,
    #[serde(rename = "event->hazard")]
    EventHazard,
    #[serde(rename = "event->situation")]
    EventSituation,
    #[serde(rename = "goal->event")]
    GoalEvent,
    #[serde(rename = "uca->hazard")]
    UcaHazard,
    #[serde(rename = "uca->action")]
    UcaAction,
    #[serde(rename = "csc->uca")]
    CscUca,
    #[serde(rename = "scenario->uca")]
    ScenarioUca,
}

impl LinkKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LinkKind::HazardAccident => "hazard->accident",
            LinkKind::ConstraintHazard => "constraint->hazard",
            LinkKind::EventHazard => "event->hazard",
            LinkKind::EventSituation => "event->situation",
            LinkKind::GoalEvent => "goal->event",
            LinkKind::UcaHazard => "uca->hazard",
            LinkKind::UcaAction => "uca->action",
            LinkKind::CscUca => "csc->uca",
            LinkKind::ScenarioUca => "scenario->uca",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Link {
    pub from: String,
    pub to: String,
    pub kind: LinkKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FindingRule {
    HazardNoAccident,
    HazardNoEvent,
    EventNoGoal,
    ConfirmedUcaNoHazard,
    ConfirmedUcaNoCsc,
    ConfirmedUcaNoScenario,
    GoalAsilMismatch,
}

impl FindingRule {
    pub fn as_str(self) -> &'static str {
        match self {
            FindingRule::HazardNoAccident => "HAZARD_NO_ACCIDENT",
            FindingRule::HazardNoEvent => "HAZARD_NO_EVENT",
            FindingRule::EventNoGoal => "EVENT_NO_GOAL",
            FindingRule::ConfirmedUcaNoHazard => "CONFIRMED_UCA_NO_HAZARD",
            FindingRule::ConfirmedUcaNoCsc => "CONFIRMED_UCA_NO_CSC",
            FindingRule::ConfirmedUcaNoScenario => "CONFIRMED_UCA_NO_SCENARIO",
            FindingRule::GoalAsilMismatch => "GOAL_ASIL_MISMATCH",
        }
    }
}

impl fmt::Display for FindingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Finding {
    pub rule: FindingRule,
    pub entity: String,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.rule, self.entity, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceMatrix {
    /// Controllability applied to events that state none.
    pub default_controllability: ControllabilityClass,
    pub links: Vec<Link>,
    pub orphans: Vec<Finding>,
}

impl TraceMatrix {
    pub fn links_from<'a>(&'a self, from: &'a str) -> impl Iterator<Item = &'a Link> + 'a {
        self.links.iter().filter(move |l| l.from == from)
    }

    pub fn links_to<'a>(
        &'a self,
        to: &'a str,
        kind: LinkKind,
    ) -> impl Iterator<Item = &'a Link> + 'a {
        self.links
            .iter()
            .filter(move |l| l.to == to && l.kind == kind)
    }
}

/// Builds the matrix with the model's default controllability.
pub fn build_trace_matrix(model: &SafetyModel) -> TraceMatrix {
    build_trace_matrix_with(model, default_controllability(model, None))
}

/// Derives links purely from declared references (only those whose
/// endpoints resolve) and computes the orphan findings.
pub fn build_trace_matrix_with(
    model: &SafetyModel,
    default_c: ControllabilityClass,
) -> TraceMatrix {
    let mut links = BTreeSet::new();
    let mut link = |from: &str, to: &str, kind: LinkKind, resolves: bool| {
        if resolves {
            links.insert(Link {
                from: from.to_string(),
                to: to.to_string(),
                kind,
            });
        }
    };

    for h in &model.hazards {
        for a in &h.leads_to {
            link(
                &h.id,
                a,
                LinkKind::HazardAccident,
                model.accident(a).is_some(),
            );
        }
    }
    for c in &model.constraints {
        for h in &c.mitigates {
            link(
                &c.id,
                h,
                LinkKind::ConstraintHazard,
                model.hazard(h).is_some(),
            );
        }
    }
    for e in &model.events {
        link(
            &e.id,
            &e.hazard,
            LinkKind::EventHazard,
            model.hazard(&e.hazard).is_some(),
        );
        link(
            &e.id,
            &e.situation,
            LinkKind::EventSituation,
            model.situation(&e.situation).is_some(),
        );
    }
    for g in &model.goals {
        link(
            &g.id,
            &g.event,
            LinkKind::GoalEvent,
            model.event(&g.event).is_some(),
        );
    }
    for u in &model.ucas {
        for h in &u.hazards {
            link(&u.id, h, LinkKind::UcaHazard, model.hazard(h).is_some());
        }
        link(
            &u.id,
            &u.action,
            LinkKind::UcaAction,
            model.action(&u.action).is_some(),
        );
    }
    for c in &model.cscs {
        link(&c.id, &c.uca, LinkKind::CscUca, model.uca(&c.uca).is_some());
    }
    for s in &model.scenarios {
        link(
            &s.id,
            &s.uca,
            LinkKind::ScenarioUca,
            model.uca(&s.uca).is_some(),
        );
    }

    let mut matrix = TraceMatrix {
        default_controllability: default_c,
        links: links.into_iter().collect(),
        orphans: Vec::new(),
    };
    matrix
        .links
        .sort_by(|a, b| (&a.from, &a.to, a.kind).cmp(&(&b.from, &b.to, b.kind)));
    matrix.orphans = compute_findings(model, &matrix);
    matrix
}

/// Orphan findings, recomputable from the model and the links alone.
pub fn compute_findings(model: &SafetyModel, matrix: &TraceMatrix) -> Vec<Finding> {
    let mut out = Vec::new();
    let mut finding = |rule: FindingRule, entity: &str, message: String| {
        out.push(Finding {
            rule,
            entity: entity.to_string(),
            message,
        });
    };
    let has_from = |from: &str, kind: LinkKind| matrix.links_from(from).any(|l| l.kind == kind);
    let has_to = |to: &str, kind: LinkKind| matrix.links_to(to, kind).next().is_some();

    for h in &model.hazards {
        if !has_from(&h.id, LinkKind::HazardAccident) {
            finding(
                FindingRule::HazardNoAccident,
                &h.id,
                "hazard leads to no accident".into(),
            );
        }
        if h.classification.is_none() {
            finding(
                FindingRule::HazardNoEvent,
                &h.id,
                "hazard has no severity/exposure classification, so no hazardous event can be rated".into(),
            );
        } else if !has_to(&h.id, LinkKind::EventHazard) {
            finding(
                FindingRule::HazardNoEvent,
                &h.id,
                "hazard is not part of any hazardous event".into(),
            );
        }
    }

    for e in &model.events {
        if !has_to(&e.id, LinkKind::GoalEvent) {
            finding(
                FindingRule::EventNoGoal,
                &e.id,
                "hazardous event has no safety goal".into(),
            );
        }
    }

    for g in &model.goals {
        let Some(event) = model.event(&g.event) else {
            continue;
        };
        let Some(class) = model.hazard(&event.hazard).and_then(|h| h.classification) else {
            continue;
        };
        let c = event
            .controllability
            .unwrap_or(matrix.default_controllability);
        let expected = determine_asil(class.severity, class.exposure, c);
        if g.asil != expected {
            finding(
                FindingRule::GoalAsilMismatch,
                &g.id,
                format!(
                    "goal states {} but event `{}` rates {} ({} {} {})",
                    g.asil.label(),
                    event.id,
                    expected.label(),
                    class.severity,
                    class.exposure,
                    c
                ),
            );
        }
    }

    for u in model
        .ucas
        .iter()
        .filter(|u| u.status == UcaStatus::Confirmed)
    {
        if !has_from(&u.id, LinkKind::UcaHazard) {
            finding(
                FindingRule::ConfirmedUcaNoHazard,
                &u.id,
                "confirmed UCA links no hazard".into(),
            );
        }
        if !has_to(&u.id, LinkKind::CscUca) {
            finding(
                FindingRule::ConfirmedUcaNoCsc,
                &u.id,
                "confirmed UCA has no corresponding safety constraint".into(),
            );
        }
        if !has_to(&u.id, LinkKind::ScenarioUca) {
            finding(
                FindingRule::ConfirmedUcaNoScenario,
                &u.id,
                "confirmed UCA has no causal scenario".into(),
            );
        }
    }

    out.sort_by(|a, b| (&a.entity, a.rule).cmp(&(&b.entity, b.rule)));
    out
}
