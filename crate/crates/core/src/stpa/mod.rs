//! STPA steps over a validated model: item derivation from the control
//! structure, structure well-formedness, context enumeration, UCA candidate
//! generation, corresponding constraints and causal-factor checklists.

mod causal;
mod context;
mod item;
mod structure;
mod uca;

pub use causal::{causal_factor_checklist, CausalChecklist, ChecklistEntry};
pub use context::enumerate_contexts;
pub use item::{derive_item_definition, item_definitions};
pub use structure::{has_feedback_path, validate_control_structure};
pub use uca::{
    action_phrase, corresponding_constraint_id, derive_corresponding_constraint,
    generate_uca_candidates,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StpaError {
    #[error("item has no members")]
    EmptyMembers,
    #[error("item members are not weakly connected")]
    Disconnected,
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown control action `{0}`")]
    UnknownAction(String),
    #[error("unknown process variable `{0}`")]
    UnknownVariable(String),
    #[error("UCA `{0}` is not confirmed")]
    NotConfirmed(String),
}

impl StpaError {
    pub fn code(&self) -> &'static str {
        match self {
            StpaError::EmptyMembers => "EMPTY_MEMBERS",
            StpaError::Disconnected => "DISCONNECTED",
            StpaError::UnknownNode(_) => "DANGLING_REF",
            StpaError::UnknownAction(_) => "UNKNOWN_ACTION",
            StpaError::UnknownVariable(_) => "UNKNOWN_VARIABLE",
            StpaError::NotConfirmed(_) => "NOT_CONFIRMED",
        }
    }
}
