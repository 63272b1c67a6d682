use std::collections::{BTreeMap, BTreeSet};

use crate::diagnostic::{sort_diagnostics, Diagnostic, Rule};
use crate::model::{NodeKind, SafetyModel};

/// Nodes reachable from `start` along control actions, `start` included.
pub(crate) fn downstream<'m>(model: &'m SafetyModel, start: &'m str) -> BTreeSet<&'m str> {
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(n) = stack.pop() {
        for a in model.structure.actions.iter().filter(|a| a.source == n) {
            if seen.insert(a.target.as_str()) {
                stack.push(a.target.as_str());
            }
        }
    }
    seen
}

/// True when some feedback path leads from the controlled side of
/// `controller -> target` back to `controller`.
///
/// The controlled side is `target` plus everything downstream of it along
/// control actions. Paths run over feedback edges only, with sensors as the
/// sole intermediate nodes; control actions never count as feedback.
pub fn has_feedback_path(model: &SafetyModel, controller: &str, target: &str) -> bool {
    let mut frontier: Vec<&str> = downstream(model, target).into_iter().collect();
    let mut seen: BTreeSet<&str> = frontier.iter().copied().collect();
    while let Some(n) = frontier.pop() {
        for f in model.structure.feedback.iter().filter(|f| f.source == n) {
            if f.target == controller {
                return true;
            }
            let is_sensor = model
                .node(&f.target)
                .is_some_and(|node| node.kind == NodeKind::Sensor);
            if is_sensor && seen.insert(f.target.as_str()) {
                frontier.push(f.target.as_str());
            }
        }
    }
    false
}

/// Warnings about the control structure: `NO_FEEDBACK` for every
/// controller/target pair joined by a control action without a feedback
/// path back, and `NO_PROCESS_MODEL` for every acting controller that
/// declares no process model.
pub fn validate_control_structure(model: &SafetyModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let is_controller = |id: &str| {
        model
            .node(id)
            .is_some_and(|n| n.kind == NodeKind::Controller)
    };

    // first action edge (by id) for each controller/target pair
    let mut pairs: BTreeMap<(&str, &str), &str> = BTreeMap::new();
    for a in &model.structure.actions {
        if !is_controller(&a.source) {
            continue;
        }
        pairs
            .entry((a.source.as_str(), a.target.as_str()))
            .and_modify(|e| {
                if a.id.as_str() < *e {
                    *e = a.id.as_str();
                }
            })
            .or_insert(a.id.as_str());
    }
    for ((controller, target), edge) in pairs {
        if !has_feedback_path(model, controller, target) {
            out.push(
                Diagnostic::warning(
                    Rule::NoFeedback,
                    format!("no feedback path from `{target}` back to controller `{controller}`"),
                )
                .with_entity(edge),
            );
        }
    }

    let acting: BTreeSet<&str> = model
        .structure
        .actions
        .iter()
        .map(|a| a.source.as_str())
        .filter(|s| is_controller(s))
        .collect();
    for controller in acting {
        if model.process_model_of(controller).is_none() {
            out.push(
                Diagnostic::warning(
                    Rule::NoProcessModel,
                    format!(
                        "controller `{controller}` issues control actions but has no process model"
                    ),
                )
                .with_entity(controller),
            );
        }
    }

    sort_diagnostics(&mut out);
    out
}
