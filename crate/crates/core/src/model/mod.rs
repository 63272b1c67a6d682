//! Domain types of the combined STPA / ISO 26262 concept-phase vocabulary.
//!
//! Terminology alignment between the two worlds:
//!
//! | STPA                         | ISO 26262                         | type here                        |
//! |------------------------------|-----------------------------------|----------------------------------|
//! | accident (loss)              | harm                              | [`Accident`]                     |
//! | hazard                       | hazard                            | [`Hazard`]                       |
//! | system safety constraint     | safety goal (system level)        | [`SystemSafetyConstraint`]       |
//! | process model / context      | operational situation (partially) | [`ProcessModel`], [`Context`]    |
//! | unsafe control action        | hazardous event (malfunction)     | [`UnsafeControlAction`]          |
//! | causal scenario              | -                                 | [`CausalScenario`]               |
//!
//! A [`SafetyModel`] keeps every collection in declaration order. Call
//! [`SafetyModel::canonicalize`] to get the id-sorted form used for output.

mod classes;
pub mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use classes::{
    AsilRating, ClassParseError, ControllabilityClass, ExposureClass, SeverityClass,
};
pub use validate::validate_model;

pub type Id = String;
pub type IdSet = BTreeSet<Id>;

/// Returns true when `s` is a valid identifier: a letter followed by
/// letters, digits, `_`, `.` or `-`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() => {}
        _ => return false,
    }
    chars.all(is_identifier_continue)
}

pub(crate) fn is_identifier_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '.' || c == '-'
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Accident {
    pub id: Id,
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub severity_note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub severity: SeverityClass,
    pub exposure: ExposureClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hazard {
    pub id: Id,
    pub description: String,
    pub leads_to: IdSet,
    /// Severity and exposure, set by a `classify` declaration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
    /// Short verb phrase for the hazardous condition ("lose the steering
    /// control"), used when templating safety goals.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
}

impl Hazard {
    pub fn severity(&self) -> Option<SeverityClass> {
        self.classification.map(|c| c.severity)
    }

    pub fn exposure(&self) -> Option<ExposureClass> {
        self.classification.map(|c| c.exposure)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSafetyConstraint {
    pub id: Id,
    pub description: String,
    pub mitigates: IdSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Controller,
    Actuator,
    ControlledProcess,
    Sensor,
    External,
}

impl NodeKind {
    pub const ALL: [NodeKind; 5] = [
        NodeKind::Controller,
        NodeKind::Actuator,
        NodeKind::ControlledProcess,
        NodeKind::Sensor,
        NodeKind::External,
    ];

    /// Keyword used inside a `structure` block.
    pub fn keyword(self) -> &'static str {
        match self {
            NodeKind::Controller => "controller",
            NodeKind::Actuator => "actuator",
            NodeKind::ControlledProcess => "process",
            NodeKind::Sensor => "sensor",
            NodeKind::External => "external",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.keyword() == s)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Controller => "controller",
            NodeKind::Actuator => "actuator",
            NodeKind::ControlledProcess => "controlled_process",
            NodeKind::Sensor => "sensor",
            NodeKind::External => "external",
        }
    }

    /// Kinds allowed to issue control actions.
    pub fn can_act(self) -> bool {
        matches!(self, NodeKind::Controller | NodeKind::Actuator)
    }

    /// Kinds allowed to receive feedback. Sensors relay measurements of the
    /// controlled process back to controllers.
    pub fn can_receive_feedback(self) -> bool {
        matches!(
            self,
            NodeKind::Controller | NodeKind::Actuator | NodeKind::Sensor
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: Id,
    pub kind: NodeKind,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlActionEdge {
    pub id: Id,
    pub source: Id,
    pub target: Id,
    pub label: String,
    #[serde(default)]
    pub payload_fields: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackEdge {
    pub id: Id,
    pub source: Id,
    pub target: Id,
    pub label: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlStructure {
    pub nodes: Vec<Node>,
    pub actions: Vec<ControlActionEdge>,
    pub feedback: Vec<FeedbackEdge>,
}

impl ControlStructure {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.actions.is_empty() && self.feedback.is_empty()
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn action(&self, id: &str) -> Option<&ControlActionEdge> {
        self.actions.iter().find(|a| a.id == id)
    }

    pub fn feedback_edge(&self, id: &str) -> Option<&FeedbackEdge> {
        self.feedback.iter().find(|f| f.id == id)
    }

    /// True when the subgraph induced by `members` is weakly connected.
    /// Members that are not nodes of the structure are isolated vertices.
    pub fn is_weakly_connected(&self, members: &IdSet) -> bool {
        let Some(start) = members.iter().next() else {
            return false;
        };
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let mut stack = vec![start.as_str()];
        seen.insert(start.as_str());
        while let Some(current) = stack.pop() {
            for (_, source, target) in self.edges() {
                if !members.contains(source) || !members.contains(target) {
                    continue;
                }
                let next = if source == current {
                    target
                } else if target == current {
                    source
                } else {
                    continue;
                };
                if seen.insert(next) {
                    stack.push(next);
                }
            }
        }
        seen.len() == members.len()
    }

    /// All edges as `(id, source, target)`, actions first.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, &str)> {
        self.actions
            .iter()
            .map(|a| (a.id.as_str(), a.source.as_str(), a.target.as_str()))
            .chain(
                self.feedback
                    .iter()
                    .map(|f| (f.id.as_str(), f.source.as_str(), f.target.as_str())),
            )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessVariable {
    pub name: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessModel {
    pub owner: Id,
    pub variables: Vec<ProcessVariable>,
}

impl ProcessModel {
    pub fn variable(&self, name: &str) -> Option<&ProcessVariable> {
        self.variables.iter().find(|v| v.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationalSituation {
    pub id: Id,
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operating_mode: Option<String>,
}

/// A declared pairing of a hazard with an operational situation. The ASIL
/// and safety goal are derived by the HARA engine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HazardousEvent {
    pub id: Id,
    pub hazard: Id,
    pub situation: Id,
    /// Falls back to the model's default controllability when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub controllability: Option<ControllabilityClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SafetyGoal {
    pub id: Id,
    pub text: String,
    pub event: Id,
    pub asil: AsilRating,
}

/// The four hazardous types a control action is evaluated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GuideWord {
    NotProvided,
    ProvidedUnsafe,
    WrongTimingOrOrder,
    StoppedTooSoonOrAppliedTooLong,
}

impl GuideWord {
    pub const ALL: [GuideWord; 4] = [
        GuideWord::NotProvided,
        GuideWord::ProvidedUnsafe,
        GuideWord::WrongTimingOrOrder,
        GuideWord::StoppedTooSoonOrAppliedTooLong,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GuideWord::NotProvided => "not_provided",
            GuideWord::ProvidedUnsafe => "provided_unsafe",
            GuideWord::WrongTimingOrOrder => "wrong_timing_or_order",
            GuideWord::StoppedTooSoonOrAppliedTooLong => "stopped_too_soon_or_applied_too_long",
        }
    }

    /// Verb phrase used in generated UCA descriptions.
    pub fn phrase(self) -> &'static str {
        match self {
            GuideWord::NotProvided => "does not provide",
            GuideWord::ProvidedUnsafe => "provides unsafely",
            GuideWord::WrongTimingOrOrder => "provides at the wrong time or order",
            GuideWord::StoppedTooSoonOrAppliedTooLong => "stops too soon or applies too long",
        }
    }

    /// Column heading of the guide-word table.
    pub fn column_title(self) -> &'static str {
        match self {
            GuideWord::NotProvided => "Not providing",
            GuideWord::ProvidedUnsafe => "Providing incorrect",
            GuideWord::WrongTimingOrOrder => "Providing at wrong timing/order",
            GuideWord::StoppedTooSoonOrAppliedTooLong => "Stopped too soon/applied too long",
        }
    }
}

impl fmt::Display for GuideWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GuideWord {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|g| g.as_str() == s).ok_or(())
    }
}

#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum UcaStatus {
    #[default]
    Candidate,
    Confirmed,
    Rejected,
}

impl UcaStatus {
    pub const ALL: [UcaStatus; 3] = [
        UcaStatus::Candidate,
        UcaStatus::Confirmed,
        UcaStatus::Rejected,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            UcaStatus::Candidate => "candidate",
            UcaStatus::Confirmed => "confirmed",
            UcaStatus::Rejected => "rejected",
        }
    }
}

impl FromStr for UcaStatus {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|g| g.as_str() == s).ok_or(())
    }
}

/// Partial assignment of process-model variables, optionally replaced in
/// prose by authored free text.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Context {
    pub assignments: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_text: Option<String>,
}

impl Context {
    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty() && self.free_text.is_none()
    }

    /// Prose rendering: the free text when authored, otherwise
    /// `var=value` pairs in variable-name order. Empty for the unit context.
    pub fn phrase(&self) -> String {
        if let Some(text) = &self.free_text {
            return text.clone();
        }
        self.assignments
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnsafeControlAction {
    pub id: Id,
    pub action: Id,
    pub guide_word: GuideWord,
    pub context: Context,
    pub description: String,
    pub hazards: IdSet,
    pub status: UcaStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondingSafetyConstraint {
    pub id: Id,
    pub uca: Id,
    pub text: String,
}

/// Control-loop element a causal scenario is attributed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalFactorCategory {
    ControllerProcessModelFlaw,
    ControllerAlgorithmFlaw,
    ControlPathFailure,
    ActuatorFailure,
    ControlledProcessDisturbance,
    FeedbackMissingOrDelayed,
    SensorFailure,
    CommunicationLoss,
    ExternalEnvironment,
    HumanInteraction,
}

impl CausalFactorCategory {
    pub const ALL: [CausalFactorCategory; 10] = [
        CausalFactorCategory::ControllerProcessModelFlaw,
        CausalFactorCategory::ControllerAlgorithmFlaw,
        CausalFactorCategory::ControlPathFailure,
        CausalFactorCategory::ActuatorFailure,
        CausalFactorCategory::ControlledProcessDisturbance,
        CausalFactorCategory::FeedbackMissingOrDelayed,
        CausalFactorCategory::SensorFailure,
        CausalFactorCategory::CommunicationLoss,
        CausalFactorCategory::ExternalEnvironment,
        CausalFactorCategory::HumanInteraction,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CausalFactorCategory::ControllerProcessModelFlaw => "controller_process_model_flaw",
            CausalFactorCategory::ControllerAlgorithmFlaw => "controller_algorithm_flaw",
            CausalFactorCategory::ControlPathFailure => "control_path_failure",
            CausalFactorCategory::ActuatorFailure => "actuator_failure",
            CausalFactorCategory::ControlledProcessDisturbance => "controlled_process_disturbance",
            CausalFactorCategory::FeedbackMissingOrDelayed => "feedback_missing_or_delayed",
            CausalFactorCategory::SensorFailure => "sensor_failure",
            CausalFactorCategory::CommunicationLoss => "communication_loss",
            CausalFactorCategory::ExternalEnvironment => "external_environment",
            CausalFactorCategory::HumanInteraction => "human_interaction",
        }
    }
}

impl fmt::Display for CausalFactorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CausalFactorCategory {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|c| c.as_str() == s).ok_or(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalScenario {
    pub id: Id,
    pub uca: Id,
    pub factor_category: CausalFactorCategory,
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived_constraint: Option<String>,
}

/// An item as declared by the analyst. Boundaries are computed, see
/// [`crate::stpa::derive_item_definition`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub id: Id,
    pub name: String,
    pub members: IdSet,
    pub purpose: String,
}

/// An item together with the control-structure edges crossing its boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemDefinition {
    pub id: Id,
    pub name: String,
    pub members: IdSet,
    pub boundary_in: IdSet,
    pub boundary_out: IdSet,
    pub purpose: String,
}

/// The whole analysis: single source of truth for every pipeline stage.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SafetyModel {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_controllability: Option<ControllabilityClass>,
    pub accidents: Vec<Accident>,
    pub hazards: Vec<Hazard>,
    pub constraints: Vec<SystemSafetyConstraint>,
    pub structure: ControlStructure,
    pub process_models: Vec<ProcessModel>,
    pub items: Vec<Item>,
    pub situations: Vec<OperationalSituation>,
    pub events: Vec<HazardousEvent>,
    pub goals: Vec<SafetyGoal>,
    pub ucas: Vec<UnsafeControlAction>,
    pub cscs: Vec<CorrespondingSafetyConstraint>,
    pub scenarios: Vec<CausalScenario>,
}

impl SafetyModel {
    pub fn accident(&self, id: &str) -> Option<&Accident> {
        self.accidents.iter().find(|a| a.id == id)
    }

    pub fn hazard(&self, id: &str) -> Option<&Hazard> {
        self.hazards.iter().find(|h| h.id == id)
    }

    pub fn situation(&self, id: &str) -> Option<&OperationalSituation> {
        self.situations.iter().find(|s| s.id == id)
    }

    pub fn event(&self, id: &str) -> Option<&HazardousEvent> {
        self.events.iter().find(|e| e.id == id)
    }

    pub fn uca(&self, id: &str) -> Option<&UnsafeControlAction> {
        self.ucas.iter().find(|u| u.id == id)
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.structure.node(id)
    }

    pub fn action(&self, id: &str) -> Option<&ControlActionEdge> {
        self.structure.action(id)
    }

    pub fn process_model_of(&self, owner: &str) -> Option<&ProcessModel> {
        self.process_models.iter().find(|p| p.owner == owner)
    }

    /// Number of declared entities of every kind.
    pub fn entity_count(&self) -> usize {
        self.accidents.len()
            + self.hazards.len()
            + self.constraints.len()
            + self.structure.nodes.len()
            + self.structure.actions.len()
            + self.structure.feedback.len()
            + self.process_models.len()
            + self.items.len()
            + self.situations.len()
            + self.events.len()
            + self.goals.len()
            + self.ucas.len()
            + self.cscs.len()
            + self.scenarios.len()
    }

    /// Every id declared in the model's single id namespace, with the kind
    /// of entity that declares it, in declaration order.
    pub fn declared_ids(&self) -> Vec<(&'static str, &str)> {
        let mut ids: Vec<(&'static str, &str)> = Vec::new();
        ids.extend(self.accidents.iter().map(|x| ("accident", x.id.as_str())));
        ids.extend(self.hazards.iter().map(|x| ("hazard", x.id.as_str())));
        ids.extend(
            self.constraints
                .iter()
                .map(|x| ("constraint", x.id.as_str())),
        );
        ids.extend(self.structure.nodes.iter().map(|x| ("node", x.id.as_str())));
        ids.extend(
            self.structure
                .actions
                .iter()
                .map(|x| ("action", x.id.as_str())),
        );
        ids.extend(
            self.structure
                .feedback
                .iter()
                .map(|x| ("feedback", x.id.as_str())),
        );
        ids.extend(self.items.iter().map(|x| ("item", x.id.as_str())));
        ids.extend(self.situations.iter().map(|x| ("situation", x.id.as_str())));
        ids.extend(self.events.iter().map(|x| ("event", x.id.as_str())));
        ids.extend(self.goals.iter().map(|x| ("goal", x.id.as_str())));
        ids.extend(self.ucas.iter().map(|x| ("uca", x.id.as_str())));
        ids.extend(self.cscs.iter().map(|x| ("csc", x.id.as_str())));
        ids.extend(self.scenarios.iter().map(|x| ("scenario", x.id.as_str())));
        ids
    }

    /// Sorts every collection by id (process models by owner, variables by
    /// name). Value lists keep their declared order.
    pub fn canonicalize(&mut self) {
        self.accidents.sort_by(|a, b| a.id.cmp(&b.id));
        self.hazards.sort_by(|a, b| a.id.cmp(&b.id));
        self.constraints.sort_by(|a, b| a.id.cmp(&b.id));
        self.structure.nodes.sort_by(|a, b| a.id.cmp(&b.id));
        self.structure.actions.sort_by(|a, b| a.id.cmp(&b.id));
        self.structure.feedback.sort_by(|a, b| a.id.cmp(&b.id));
        self.process_models.sort_by(|a, b| a.owner.cmp(&b.owner));
        for pm in &mut self.process_models {
            pm.variables.sort_by(|a, b| a.name.cmp(&b.name));
        }
        self.items.sort_by(|a, b| a.id.cmp(&b.id));
        self.situations.sort_by(|a, b| a.id.cmp(&b.id));
        self.events.sort_by(|a, b| a.id.cmp(&b.id));
        self.goals.sort_by(|a, b| a.id.cmp(&b.id));
        self.ucas.sort_by(|a, b| a.id.cmp(&b.id));
        self.cscs.sort_by(|a, b| a.id.cmp(&b.id));
        self.scenarios.sort_by(|a, b| a.id.cmp(&b.id));
    }

    pub fn canonical(&self) -> SafetyModel {
        let mut m = self.clone();
        m.canonicalize();
        m
    }
}

/// True when `text` contains `word` as a whole word, ignoring ASCII case.
pub(crate) fn contains_word(text: &str, word: &str) -> bool {
    text.split(|c: char| !c.is_alphanumeric())
        .any(|w| w.eq_ignore_ascii_case(word))
}

/// True when `text` carries a modal keyword (`shall` or `must`).
pub fn has_modal(text: &str) -> bool {
    contains_word(text, "shall") || contains_word(text, "must")
}
