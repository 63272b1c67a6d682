//! Random model generation for round-trip and count-law properties.

use std::collections::BTreeSet;

use hazlang::model::*;
use proptest::prelude::*;
use proptest::sample::select;

/// Free text, including characters that need escaping.
fn text() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-zA-Z0-9 ,.:;()\\-]{0,24}",
        "[a-z \"\\\\\n#{}\\[\\]=é漢]{0,16}",
    ]
}

fn word() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,5}"
}

fn id_set(pool: &'static [&'static str]) -> impl Strategy<Value = BTreeSet<String>> {
    prop::collection::btree_set(select(pool).prop_map(String::from), 0..3)
}

const REFS: &[&str] = &[
    "A1", "H1", "H2", "N1", "N2", "act1", "E1", "U1", "OS1", "missing",
];

fn opt<T: std::fmt::Debug + Clone>(
    s: impl Strategy<Value = T>,
) -> impl Strategy<Value = Option<T>> {
    prop::option::of(s)
}

fn node_kind() -> impl Strategy<Value = NodeKind> {
    select(vec![
        NodeKind::Controller,
        NodeKind::Actuator,
        NodeKind::ControlledProcess,
        NodeKind::Sensor,
        NodeKind::External,
    ])
}

fn classes() -> impl Strategy<Value = Classification> {
    (
        select(SeverityClass::ALL.to_vec()),
        select(ExposureClass::ALL.to_vec()),
    )
        .prop_map(|(severity, exposure)| Classification { severity, exposure })
}

fn context() -> impl Strategy<Value = Context> {
    (
        prop::collection::btree_map(word(), word(), 0..3),
        opt(text()),
    )
        .prop_map(|(assignments, free_text)| Context {
            assignments,
            free_text,
        })
}

/// Builds a model whose ids are unique across the namespace; references
/// are drawn from a fixed pool and may dangle, which the parser accepts.
pub fn model() -> impl Strategy<Value = SafetyModel> {
    let head = (
        opt(select(ControllabilityClass::ALL.to_vec())),
        prop::collection::vec((text(), opt(text())), 0..3),
        prop::collection::vec((text(), id_set(REFS), opt(classes()), opt(text())), 0..4),
        prop::collection::vec((text(), id_set(REFS)), 0..3),
        prop::collection::vec((node_kind(), text()), 0..5),
        prop::collection::vec(
            (
                select(REFS),
                select(REFS),
                text(),
                prop::collection::vec(text(), 0..3),
            ),
            0..3,
        ),
        prop::collection::vec((select(REFS), select(REFS), text()), 0..3),
    );
    let tail = (
        prop::collection::btree_map(word(), prop::collection::vec(word(), 1..4), 0..3),
        prop::collection::vec((text(), id_set(REFS), text()), 0..2),
        prop::collection::vec((text(), opt(text())), 0..3),
        prop::collection::vec(
            (
                select(REFS),
                select(REFS),
                opt(select(ControllabilityClass::ALL.to_vec())),
            ),
            0..3,
        ),
        prop::collection::vec(
            (text(), select(REFS), select(AsilRating::ALL.to_vec())),
            0..3,
        ),
        prop::collection::vec(
            (
                select(REFS),
                select(GuideWord::ALL.to_vec()),
                context(),
                text(),
                id_set(REFS),
                select(UcaStatus::ALL.to_vec()),
            ),
            0..4,
        ),
        prop::collection::vec((select(REFS), text()), 0..3),
        prop::collection::vec(
            (
                select(REFS),
                select(CausalFactorCategory::ALL.to_vec()),
                text(),
                opt(text()),
            ),
            0..3,
        ),
    );
    (head, tail).prop_map(|(head, tail)| {
        let (pragma, accidents, hazards, constraints, nodes, actions, feedback) = head;
        let (vars, items, situations, events, goals, ucas, cscs, scenarios) = tail;
        let s = |x: &str| x.to_string();
        let mut m = SafetyModel {
            default_controllability: pragma,
            ..Default::default()
        };
        m.accidents = accidents
            .into_iter()
            .enumerate()
            .map(|(i, (description, severity_note))| Accident {
                id: format!("AC.{i}"),
                description,
                severity_note,
            })
            .collect();
        m.hazards = hazards
            .into_iter()
            .enumerate()
            .map(
                |(i, (description, leads_to, classification, condition))| Hazard {
                    id: format!("HA.{i}"),
                    description,
                    leads_to,
                    classification,
                    condition,
                },
            )
            .collect();
        m.constraints = constraints
            .into_iter()
            .enumerate()
            .map(|(i, (description, mitigates))| SystemSafetyConstraint {
                id: format!("SC.{i}"),
                description,
                mitigates,
            })
            .collect();
        m.structure.nodes = nodes
            .into_iter()
            .enumerate()
            .map(|(i, (kind, label))| Node {
                id: format!("node{i}"),
                kind,
                label,
            })
            .collect();
        m.structure.actions = actions
            .into_iter()
            .enumerate()
            .map(|(i, (a, b, label, payload_fields))| ControlActionEdge {
                id: format!("ca{i}"),
                source: s(a),
                target: s(b),
                label,
                payload_fields,
            })
            .collect();
        m.structure.feedback = feedback
            .into_iter()
            .enumerate()
            .map(|(i, (a, b, label))| FeedbackEdge {
                id: format!("fb{i}"),
                source: s(a),
                target: s(b),
                label,
            })
            .collect();
        if !vars.is_empty() {
            m.process_models.push(ProcessModel {
                owner: "node0".into(),
                variables: vars
                    .into_iter()
                    .map(|(name, mut values)| {
                        let mut seen = BTreeSet::new();
                        values.retain(|v| seen.insert(v.clone()));
                        ProcessVariable { name, values }
                    })
                    .collect(),
            });
        }
        m.items = items
            .into_iter()
            .enumerate()
            .map(|(i, (name, members, purpose))| Item {
                id: format!("IT.{i}"),
                name,
                members,
                purpose,
            })
            .collect();
        m.situations = situations
            .into_iter()
            .enumerate()
            .map(|(i, (description, operating_mode))| OperationalSituation {
                id: format!("OS{i}"),
                description,
                operating_mode,
            })
            .collect();
        m.events = events
            .into_iter()
            .enumerate()
            .map(|(i, (h, o, controllability))| HazardousEvent {
                id: format!("HE.{i}"),
                hazard: s(h),
                situation: s(o),
                controllability,
            })
            .collect();
        m.goals = goals
            .into_iter()
            .enumerate()
            .map(|(i, (text, event, asil))| SafetyGoal {
                id: format!("SG.{i}"),
                text,
                event: s(event),
                asil,
            })
            .collect();
        m.ucas = ucas
            .into_iter()
            .enumerate()
            .map(
                |(i, (action, guide_word, context, description, hazards, status))| {
                    UnsafeControlAction {
                        id: format!("UCA-{i}"),
                        action: s(action),
                        guide_word,
                        context,
                        description,
                        hazards,
                        status,
                    }
                },
            )
            .collect();
        m.cscs = cscs
            .into_iter()
            .enumerate()
            .map(|(i, (uca, text))| CorrespondingSafetyConstraint {
                id: format!("SC-{i}"),
                uca: s(uca),
                text,
            })
            .collect();
        m.scenarios = scenarios
            .into_iter()
            .enumerate()
            .map(
                |(i, (uca, factor_category, description, derived_constraint))| CausalScenario {
                    id: format!("CS.{i}"),
                    uca: s(uca),
                    factor_category,
                    description,
                    derived_constraint,
                },
            )
            .collect();
        m
    })
}

/// A control structure with `k` actions out of one controller whose process
/// model has the given variable domain sizes.
pub fn count_law_model(k: usize, sizes: &[usize]) -> SafetyModel {
    let mut m = SafetyModel::default();
    m.structure.nodes.push(Node {
        id: "CTRL".into(),
        kind: NodeKind::Controller,
        label: "controller".into(),
    });
    for a in 0..k {
        m.structure.nodes.push(Node {
            id: format!("ACT{a}"),
            kind: NodeKind::Actuator,
            label: format!("actuator {a}"),
        });
        m.structure.actions.push(ControlActionEdge {
            id: format!("cmd{a}"),
            source: "CTRL".into(),
            target: format!("ACT{a}"),
            label: format!("command {a}"),
            payload_fields: vec![],
        });
    }
    m.process_models.push(ProcessModel {
        owner: "CTRL".into(),
        variables: sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| ProcessVariable {
                name: format!("v{i}"),
                values: (0..n).map(|j| format!("x{j}")).collect(),
            })
            .collect(),
    });
    m
}
