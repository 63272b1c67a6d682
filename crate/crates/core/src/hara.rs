//! Hazard analysis and risk assessment: hazardous-event formation, ASIL
//! determination from S/E/C and safety-goal formulation.

use serde::{Deserialize, Serialize};

use crate::model::{
    AsilRating, ControllabilityClass, ExposureClass, HazardousEvent, SafetyGoal, SafetyModel,
    SeverityClass,
};

/// Name of the environment variable that supplies a default controllability.
pub const DEFAULT_CONTROLLABILITY_ENV: &str = "HAZLANG_DEFAULT_CONTROLLABILITY";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HaraError {
    #[error("hazard `{0}` has no severity/exposure classification")]
    UnclassifiedHazard(String),
    #[error("unknown {kind} `{id}`")]
    DanglingRef { kind: &'static str, id: String },
}

impl HaraError {
    pub fn code(&self) -> &'static str {
        match self {
            HaraError::UnclassifiedHazard(_) => "UNCLASSIFIED_HAZARD",
            HaraError::DanglingRef { .. } => "DANGLING_REF",
        }
    }
}

/// ASIL from severity, exposure and controllability.
///
/// Any zero class gives QM. Otherwise the class indices are summed:
/// 10 is D, 9 is C, 8 is B, 7 is A and anything lower is QM. This
/// reproduces the ISO 26262-3 determination table cell for cell.
pub fn determine_asil(s: SeverityClass, e: ExposureClass, c: ControllabilityClass) -> AsilRating {
    if s.level() == 0 || e.level() == 0 || c.level() == 0 {
        return AsilRating::QM;
    }
    match s.level() + e.level() + c.level() {
        10 => AsilRating::D,
        9 => AsilRating::C,
        8 => AsilRating::B,
        7 => AsilRating::A,
        _ => AsilRating::QM,
    }
}

/// Controllability used for events that do not state one: the model's
/// `default_controllability` pragma, else `external` (CLI flag or
/// environment), else C3. C3 reflects a fully automated vehicle whose
/// occupants are not expected to take over.
pub fn default_controllability(
    model: &SafetyModel,
    external: Option<ControllabilityClass>,
) -> ControllabilityClass {
    model
        .default_controllability
        .or(external)
        .unwrap_or(ControllabilityClass::C3)
}

/// A hazard paired with an operational situation and rated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssessedEvent {
    pub id: String,
    pub hazard: String,
    pub situation: String,
    pub severity: SeverityClass,
    pub exposure: ExposureClass,
    pub controllability: ControllabilityClass,
    pub asil: AsilRating,
    pub safety_goal: SafetyGoal,
}

/// Input pair for [`form_hazardous_events`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventPair {
    pub hazard: String,
    pub situation: String,
    pub controllability: Option<ControllabilityClass>,
}

impl EventPair {
    pub fn new(
        hazard: &str,
        situation: &str,
        controllability: Option<ControllabilityClass>,
    ) -> Self {
        Self {
            hazard: hazard.to_string(),
            situation: situation.to_string(),
            controllability,
        }
    }
}

/// Forms one rated event per pair, numbered `HE.1`, `HE.2`, ... in input
/// order. Missing controllability falls back to
/// [`default_controllability`] of the model.
pub fn form_hazardous_events(
    model: &SafetyModel,
    pairs: &[EventPair],
) -> Result<Vec<AssessedEvent>, HaraError> {
    let events: Vec<HazardousEvent> = pairs
        .iter()
        .enumerate()
        .map(|(n, p)| HazardousEvent {
            id: format!("HE.{}", n + 1),
            hazard: p.hazard.clone(),
            situation: p.situation.clone(),
            controllability: p.controllability,
        })
        .collect();
    assess_events(model, &events, default_controllability(model, None))
}

/// Rates the given events. Output keeps input order.
pub fn assess_events(
    model: &SafetyModel,
    events: &[HazardousEvent],
    default_c: ControllabilityClass,
) -> Result<Vec<AssessedEvent>, HaraError> {
    events
        .iter()
        .map(|e| assess_event(model, e, default_c))
        .collect()
}

/// Rates every event declared in the model, sorted by id.
pub fn assess_declared_events(
    model: &SafetyModel,
    default_c: ControllabilityClass,
) -> Result<Vec<AssessedEvent>, HaraError> {
    let mut out = assess_events(model, &model.events, default_c)?;
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

pub fn assess_event(
    model: &SafetyModel,
    event: &HazardousEvent,
    default_c: ControllabilityClass,
) -> Result<AssessedEvent, HaraError> {
    let hazard = model
        .hazard(&event.hazard)
        .ok_or_else(|| HaraError::DanglingRef {
            kind: "hazard",
            id: event.hazard.clone(),
        })?;
    if model.situation(&event.situation).is_none() {
        return Err(HaraError::DanglingRef {
            kind: "situation",
            id: event.situation.clone(),
        });
    }
    let class = hazard
        .classification
        .ok_or_else(|| HaraError::UnclassifiedHazard(hazard.id.clone()))?;
    let controllability = event.controllability.unwrap_or(default_c);
    let asil = determine_asil(class.severity, class.exposure, controllability);
    Ok(AssessedEvent {
        id: event.id.clone(),
        hazard: event.hazard.clone(),
        situation: event.situation.clone(),
        severity: class.severity,
        exposure: class.exposure,
        controllability,
        asil,
        safety_goal: formulate_safety_goal(event, asil, model),
    })
}

/// `HE.<n>` maps to `SG.<n>`; other event ids get an `SG.` prefix.
pub fn goal_id(event_id: &str) -> String {
    match event_id.strip_prefix("HE.") {
        Some(rest) if !rest.is_empty() => format!("SG.{rest}"),
        _ => format!("SG.{event_id}"),
    }
}

/// Subject of generated safety goals: the name of the first declared item
/// (by id), or "system".
pub fn item_name(model: &SafetyModel) -> String {
    model
        .items
        .iter()
        .min_by(|a, b| a.id.cmp(&b.id))
        .map_or_else(|| "system".to_string(), |i| i.name.clone())
}

/// Hazardous condition for goal text: the hazard's authored condition
/// phrase, else its description without a leading subject that repeats
/// the item name.
pub fn hazard_condition(description: &str, condition: Option<&str>, item: &str) -> String {
    if let Some(c) = condition {
        return c.trim().to_string();
    }
    let text = description.trim().trim_end_matches('.');
    for prefix in [format!("the {item} "), format!("{item} ")] {
        if let Some(head) = text.get(..prefix.len()) {
            if head.eq_ignore_ascii_case(&prefix) {
                return text[prefix.len()..].to_string();
            }
        }
    }
    text.to_string()
}

/// `The <item> must not <hazard condition> while <situation>`; the goal
/// inherits the event's ASIL.
pub fn formulate_safety_goal(
    event: &HazardousEvent,
    asil: AsilRating,
    model: &SafetyModel,
) -> SafetyGoal {
    let item = item_name(model);
    let condition = model.hazard(&event.hazard).map_or_else(
        || event.hazard.clone(),
        |h| hazard_condition(&h.description, h.condition.as_deref(), &item),
    );
    let situation = model
        .situation(&event.situation)
        .map_or(event.situation.as_str(), |s| s.description.as_str());
    SafetyGoal {
        id: goal_id(&event.id),
        text: format!("The {item} must not {condition} while {situation}"),
        event: event.id.clone(),
        asil,
    }
}
