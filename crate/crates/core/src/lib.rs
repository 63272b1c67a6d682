//! Hazard analysis engine combining STPA with the ISO 26262 concept phase.
//!
//! Pipeline: parse a `.stpa` model ([`dsl`]), check it ([`model::validate_model`],
//! [`stpa::validate_control_structure`]), rate hazardous events ([`hara`]),
//! generate and refine unsafe control actions ([`stpa`]), then check
//! end-to-end traceability and publish reports ([`trace`]).

#![forbid(unsafe_code)]

pub mod cli;
pub mod diagnostic;
pub mod dsl;
pub mod hara;
pub mod model;
pub mod stpa;
pub mod trace;

pub use diagnostic::{Diagnostic, Level, Rule, SourceSpan};
pub use model::SafetyModel;
