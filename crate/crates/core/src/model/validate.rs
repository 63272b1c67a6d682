//! Referential integrity over a fully parsed model.

use std::collections::{BTreeMap, BTreeSet};

use super::{has_modal, NodeKind, SafetyModel, UcaStatus};
use crate::diagnostic::{sort_diagnostics, Diagnostic, Rule};

/// Returns every invariant violation of `model`. Violations are data: the
/// list is empty iff the model is internally consistent. The result is
/// sorted, so declaration order in the source does not affect it.
pub fn validate_model(model: &SafetyModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let kinds = id_kinds(model, &mut out);

    let expect = |out: &mut Vec<Diagnostic>, owner: &str, target: &str, want: &str| match kinds
        .get(target)
    {
        Some(kind) if *kind == want => {}
        Some(kind) => out.push(
            Diagnostic::error(
                Rule::DanglingRef,
                format!("`{target}` is a {kind}, expected a {want}"),
            )
            .with_entity(owner),
        ),
        None => out.push(
            Diagnostic::error(Rule::DanglingRef, format!("unknown {want} `{target}`"))
                .with_entity(owner),
        ),
    };
    let non_empty = |out: &mut Vec<Diagnostic>, owner: &str, field: &str, text: &str| {
        if text.trim().is_empty() {
            out.push(
                Diagnostic::error(Rule::EmptyText, format!("{field} is empty")).with_entity(owner),
            );
        }
    };

    for a in &model.accidents {
        non_empty(&mut out, &a.id, "description", &a.description);
    }

    for h in &model.hazards {
        non_empty(&mut out, &h.id, "description", &h.description);
        if h.leads_to.is_empty() {
            out.push(
                Diagnostic::error(Rule::EmptyLinkset, "hazard leads to no accident")
                    .with_entity(&h.id),
            );
        }
        for a in &h.leads_to {
            expect(&mut out, &h.id, a, "accident");
        }
    }

    for c in &model.constraints {
        non_empty(&mut out, &c.id, "description", &c.description);
        if c.mitigates.is_empty() {
            out.push(
                Diagnostic::error(Rule::EmptyLinkset, "constraint mitigates no hazard")
                    .with_entity(&c.id),
            );
        }
        for h in &c.mitigates {
            expect(&mut out, &c.id, h, "hazard");
        }
        if !has_modal(&c.description) {
            out.push(
                Diagnostic::error(
                    Rule::ModalMissing,
                    "constraint text needs `shall` or `must`",
                )
                .with_entity(&c.id),
            );
        }
    }

    validate_structure(model, &kinds, &mut out);

    for item in &model.items {
        non_empty(&mut out, &item.id, "name", &item.name);
        if item.members.is_empty() {
            out.push(
                Diagnostic::error(Rule::EmptyLinkset, "item has no members").with_entity(&item.id),
            );
            continue;
        }
        for m in &item.members {
            expect(&mut out, &item.id, m, "node");
        }
        if !model.structure.is_weakly_connected(&item.members) {
            out.push(
                Diagnostic::error(Rule::Disconnected, "item members are not weakly connected")
                    .with_entity(&item.id),
            );
        }
    }

    for s in &model.situations {
        non_empty(&mut out, &s.id, "description", &s.description);
    }

    for e in &model.events {
        expect(&mut out, &e.id, &e.hazard, "hazard");
        expect(&mut out, &e.id, &e.situation, "situation");
        if let Some(h) = model.hazard(&e.hazard) {
            if h.classification.is_none() {
                out.push(
                    Diagnostic::warning(
                        Rule::UnclassifiedHazard,
                        format!(
                            "hazard `{}` has no severity/exposure; the event cannot be rated",
                            h.id
                        ),
                    )
                    .with_entity(&e.id),
                );
            }
        }
    }

    for g in &model.goals {
        expect(&mut out, &g.id, &g.event, "event");
        if !has_modal(&g.text) {
            out.push(
                Diagnostic::error(Rule::ModalMissing, "safety goal text needs `must`")
                    .with_entity(&g.id),
            );
        }
    }

    for u in &model.ucas {
        non_empty(&mut out, &u.id, "description", &u.description);
        expect(&mut out, &u.id, &u.action, "action");
        for h in &u.hazards {
            expect(&mut out, &u.id, h, "hazard");
        }
        if u.status == UcaStatus::Confirmed && u.hazards.is_empty() {
            out.push(
                Diagnostic::error(Rule::EmptyLinkset, "confirmed UCA links no hazard")
                    .with_entity(&u.id),
            );
        }
        if u.context.assignments.is_empty() {
            continue;
        }
        let pm = model
            .action(&u.action)
            .and_then(|a| model.process_model_of(&a.source));
        for (var, value) in &u.context.assignments {
            let declared = pm.and_then(|pm| pm.variable(var));
            match declared {
                None => out.push(
                    Diagnostic::error(
                        Rule::ContextValue,
                        format!("context variable `{var}` is not in the source controller's process model"),
                    )
                    .with_entity(&u.id),
                ),
                Some(v) if !v.values.contains(value) => out.push(
                    Diagnostic::error(
                        Rule::ContextValue,
                        format!("`{value}` is not a declared value of `{var}`"),
                    )
                    .with_entity(&u.id),
                ),
                Some(_) => {}
            }
        }
    }

    let mut csc_per_uca: BTreeMap<&str, usize> = BTreeMap::new();
    for c in &model.cscs {
        expect(&mut out, &c.id, &c.uca, "uca");
        require_confirmed(model, &c.id, &c.uca, &mut out);
        if !has_modal(&c.text) {
            out.push(
                Diagnostic::error(
                    Rule::ModalMissing,
                    "constraint text needs `shall` or `must`",
                )
                .with_entity(&c.id),
            );
        }
        *csc_per_uca.entry(c.uca.as_str()).or_default() += 1;
    }
    for (uca, n) in csc_per_uca {
        if n > 1 {
            out.push(
                Diagnostic::error(
                    Rule::CscNotUnique,
                    format!("{n} corresponding constraints declared for one UCA"),
                )
                .with_entity(uca),
            );
        }
    }

    for s in &model.scenarios {
        non_empty(&mut out, &s.id, "description", &s.description);
        expect(&mut out, &s.id, &s.uca, "uca");
        require_confirmed(model, &s.id, &s.uca, &mut out);
    }

    sort_diagnostics(&mut out);
    out.dedup();
    out
}

/// Maps each declared id to its entity kind, reporting duplicates.
fn id_kinds<'m>(
    model: &'m SafetyModel,
    out: &mut Vec<Diagnostic>,
) -> BTreeMap<&'m str, &'static str> {
    let mut kinds = BTreeMap::new();
    for (kind, id) in model.declared_ids() {
        if let Some(first) = kinds.insert(id, kind) {
            kinds.insert(id, first);
            out.push(
                Diagnostic::error(
                    Rule::DuplicateId,
                    format!("`{id}` already declared as a {first}"),
                )
                .with_entity(id),
            );
        }
    }
    kinds
}

fn require_confirmed(model: &SafetyModel, owner: &str, uca: &str, out: &mut Vec<Diagnostic>) {
    if let Some(u) = model.uca(uca) {
        if u.status != UcaStatus::Confirmed {
            out.push(
                Diagnostic::error(
                    Rule::UcaNotConfirmed,
                    format!("`{uca}` is {}, not confirmed", u.status.as_str()),
                )
                .with_entity(owner),
            );
        }
    }
}

fn validate_structure(
    model: &SafetyModel,
    kinds: &BTreeMap<&str, &'static str>,
    out: &mut Vec<Diagnostic>,
) {
    let cs = &model.structure;
    if !cs.nodes.is_empty() && !cs.nodes.iter().any(|n| n.kind == NodeKind::Controller) {
        out.push(Diagnostic::error(
            Rule::NoController,
            "control structure declares no controller",
        ));
    }
    for n in &cs.nodes {
        if n.label.trim().is_empty() {
            out.push(Diagnostic::error(Rule::EmptyText, "label is empty").with_entity(&n.id));
        }
    }

    let endpoint = |out: &mut Vec<Diagnostic>, edge: &str, node: &str| {
        let resolved = cs.node(node);
        if resolved.is_none() {
            let msg = match kinds.get(node) {
                Some(kind) => format!("`{node}` is a {kind}, expected a node"),
                None => format!("unknown node `{node}`"),
            };
            out.push(Diagnostic::error(Rule::DanglingRef, msg).with_entity(edge));
        }
        resolved
    };

    for a in &cs.actions {
        if a.label.trim().is_empty() {
            out.push(Diagnostic::error(Rule::EmptyText, "label is empty").with_entity(&a.id));
        }
        if let Some(src) = endpoint(out, &a.id, &a.source) {
            if !src.kind.can_act() {
                out.push(
                    Diagnostic::error(
                        Rule::EdgeKind,
                        format!(
                            "control action issued by {} `{}`",
                            src.kind.as_str(),
                            src.id
                        ),
                    )
                    .with_entity(&a.id),
                );
            }
        }
        endpoint(out, &a.id, &a.target);
    }

    for f in &cs.feedback {
        if f.label.trim().is_empty() {
            out.push(Diagnostic::error(Rule::EmptyText, "label is empty").with_entity(&f.id));
        }
        endpoint(out, &f.id, &f.source);
        if let Some(dst) = endpoint(out, &f.id, &f.target) {
            if !dst.kind.can_receive_feedback() {
                out.push(
                    Diagnostic::error(
                        Rule::EdgeKind,
                        format!("feedback delivered to {} `{}`", dst.kind.as_str(), dst.id),
                    )
                    .with_entity(&f.id),
                );
            }
        }
    }

    let mut owners = BTreeSet::new();
    for pm in &model.process_models {
        if !owners.insert(pm.owner.as_str()) {
            out.push(
                Diagnostic::error(Rule::DuplicateId, "second process model for one controller")
                    .with_entity(&pm.owner),
            );
        }
        match cs.node(&pm.owner) {
            None => out.push(
                Diagnostic::error(Rule::DanglingRef, format!("unknown node `{}`", pm.owner))
                    .with_entity(&pm.owner),
            ),
            Some(n) if n.kind != NodeKind::Controller => out.push(
                Diagnostic::error(
                    Rule::PmOnNoncontroller,
                    format!("process model attached to {} `{}`", n.kind.as_str(), n.id),
                )
                .with_entity(&pm.owner),
            ),
            Some(_) => {}
        }
        let mut names = BTreeSet::new();
        for v in &pm.variables {
            let entity = format!("{}.{}", pm.owner, v.name);
            if !names.insert(v.name.as_str()) {
                out.push(
                    Diagnostic::error(
                        Rule::DuplicateId,
                        format!("variable `{}` declared twice", v.name),
                    )
                    .with_entity(&entity),
                );
            }
            if v.values.len() < 2 {
                out.push(
                    Diagnostic::error(
                        Rule::Range,
                        format!("variable `{}` needs at least two values", v.name),
                    )
                    .with_entity(&entity),
                );
            }
            let mut seen = BTreeSet::new();
            for value in &v.values {
                if value.is_empty() || !seen.insert(value.as_str()) {
                    out.push(
                        Diagnostic::error(
                            Rule::DuplicateId,
                            format!("value `{value}` repeated or empty"),
                        )
                        .with_entity(&entity),
                    );
                }
            }
        }
    }
}
