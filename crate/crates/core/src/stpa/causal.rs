use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::structure::{downstream, has_feedback_path};
use super::StpaError;
use crate::diagnostic::{Diagnostic, Rule};
use crate::model::{
    CausalFactorCategory as Cat, NodeKind, SafetyModel, UcaStatus, UnsafeControlAction,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecklistEntry {
    pub category: Cat,
    pub prompt: String,
    /// Control-structure element (node or edge id) the prompt is about.
    pub element: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalChecklist {
    pub uca: String,
    pub entries: Vec<ChecklistEntry>,
    /// Cross-references to control-structure warnings affecting this loop.
    pub notes: Vec<Diagnostic>,
}

/// Walks the control loop of a confirmed UCA's action and emits one prompt
/// per applicable causal-factor category and loop element.
///
/// Entries are ordered by category (declaration order of
/// [`CausalFactorCategory`](crate::model::CausalFactorCategory)), then by
/// element id.
pub fn causal_factor_checklist(
    uca: &UnsafeControlAction,
    model: &SafetyModel,
) -> Result<CausalChecklist, StpaError> {
    if uca.status != UcaStatus::Confirmed {
        return Err(StpaError::NotConfirmed(uca.id.clone()));
    }
    let edge = model
        .action(&uca.action)
        .ok_or_else(|| StpaError::UnknownAction(uca.action.clone()))?;
    let source = model
        .node(&edge.source)
        .ok_or_else(|| StpaError::UnknownNode(edge.source.clone()))?;
    let target = model
        .node(&edge.target)
        .ok_or_else(|| StpaError::UnknownNode(edge.target.clone()))?;
    let u = &uca.id;
    let label = |id: &str| model.node(id).map_or(id.to_string(), |n| n.label.clone());

    let mut entries: Vec<ChecklistEntry> = Vec::new();
    let mut push = |category: Cat, element: &str, prompt: String| {
        entries.push(ChecklistEntry {
            category,
            prompt,
            element: element.to_string(),
        });
    };

    push(
        Cat::ControllerProcessModelFlaw,
        &source.id,
        format!(
            "Can the process model of {} diverge from the real process state so that {u} occurs?",
            source.label
        ),
    );
    push(
        Cat::ControllerAlgorithmFlaw,
        &source.id,
        format!(
            "Can a flaw in the control algorithm of {} produce {u}?",
            source.label
        ),
    );
    push(
        Cat::ControlPathFailure,
        &edge.id,
        format!(
            "Can the control path carrying `{}` to {} lose, corrupt or delay the action?",
            edge.label, target.label
        ),
    );

    let controlled = downstream(model, &target.id);
    for id in &controlled {
        match model.node(id).map(|n| n.kind) {
            Some(NodeKind::Actuator) => push(
                Cat::ActuatorFailure,
                id,
                format!(
                    "Can actuator {} fail to execute the action or execute it wrongly?",
                    label(id)
                ),
            ),
            Some(NodeKind::ControlledProcess) => push(
                Cat::ControlledProcessDisturbance,
                id,
                format!(
                    "Can a disturbance of {} defeat the control action?",
                    label(id)
                ),
            ),
            _ => {}
        }
    }

    let returning: Vec<_> = model
        .structure
        .feedback
        .iter()
        .filter(|f| f.target == source.id)
        .collect();
    let mut sensors = BTreeSet::new();
    for f in &returning {
        push(
            Cat::FeedbackMissingOrDelayed,
            &f.id,
            format!(
                "Can feedback `{}` from {} to {} be missing, wrong or delayed?",
                f.label,
                label(&f.source),
                source.label
            ),
        );
        if model
            .node(&f.source)
            .is_some_and(|n| n.kind == NodeKind::Sensor)
        {
            sensors.insert(f.source.as_str());
        }
    }
    for id in sensors {
        push(
            Cat::SensorFailure,
            id,
            format!(
                "Can sensor {} report an incorrect or stale measurement?",
                label(id)
            ),
        );
    }

    let is_external = |id: &str| model.node(id).is_some_and(|n| n.kind == NodeKind::External);
    let mut loop_edges: Vec<(&str, &str, &str, &str)> =
        vec![(&edge.id, &edge.source, &edge.target, &edge.label)];
    loop_edges.extend(
        model
            .structure
            .actions
            .iter()
            .filter(|a| a.id != edge.id && controlled.contains(a.source.as_str()))
            .map(|a| {
                (
                    a.id.as_str(),
                    a.source.as_str(),
                    a.target.as_str(),
                    a.label.as_str(),
                )
            }),
    );
    loop_edges.extend(returning.iter().map(|f| {
        (
            f.id.as_str(),
            f.source.as_str(),
            f.target.as_str(),
            f.label.as_str(),
        )
    }));
    for (id, from, to, edge_label) in loop_edges {
        if is_external(from) || is_external(to) {
            push(
                Cat::CommunicationLoss,
                id,
                format!(
                    "Can loss of communication on `{edge_label}` between {} and {} lead to {u}?",
                    label(from),
                    label(to)
                ),
            );
        }
    }

    push(
        Cat::ExternalEnvironment,
        &target.id,
        format!(
            "Can environmental conditions around {} make `{}` unsafe?",
            target.label, edge.label
        ),
    );
    push(
        Cat::HumanInteraction,
        &source.id,
        format!(
            "Can human interaction (driver, operator, other road users) with {} lead to {u}?",
            source.label
        ),
    );

    entries.sort_by(|a, b| {
        a.category
            .cmp(&b.category)
            .then_with(|| a.element.cmp(&b.element))
    });
    entries.dedup_by(|a, b| a.category == b.category && a.element == b.element);

    let mut notes = Vec::new();
    if !has_feedback_path(model, &source.id, &target.id) {
        notes.push(
            Diagnostic::warning(
                Rule::NoFeedback,
                format!(
                    "no feedback path from `{}` back to controller `{}`",
                    target.id, source.id
                ),
            )
            .with_entity(&edge.id),
        );
    }

    Ok(CausalChecklist {
        uca: uca.id.clone(),
        entries,
        notes,
    })
}
