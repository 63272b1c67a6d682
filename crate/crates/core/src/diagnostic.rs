//! Diagnostics shared by the parser, the model validator and the control
//! structure checks.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A location in a model source file. Lines and columns are 1-based and
/// count characters, not bytes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    pub fn new(file: impl Into<String>, line: usize, column: usize, length: usize) -> Self {
        Self {
            file: file.into(),
            line: line.max(1),
            column: column.max(1),
            length: length.max(1),
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Error,
    Warning,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Level::Error => "error",
            Level::Warning => "warning",
        }
    }
}

/// Stable rule codes. Tests and tooling match on these, never on messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Rule {
    // parser
    Encoding,
    Syntax,
    DuplicateId,
    // model validation
    DanglingRef,
    NoController,
    EmptyLinkset,
    Range,
    PmOnNoncontroller,
    ModalMissing,
    EmptyText,
    EdgeKind,
    ContextValue,
    UnclassifiedHazard,
    UcaNotConfirmed,
    CscNotUnique,
    Disconnected,
    // control structure
    NoFeedback,
    NoProcessModel,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Encoding => "ENCODING",
            Rule::Syntax => "SYNTAX",
            Rule::DuplicateId => "DUPLICATE_ID",
            Rule::DanglingRef => "DANGLING_REF",
            Rule::NoController => "NO_CONTROLLER",
            Rule::EmptyLinkset => "EMPTY_LINKSET",
            Rule::Range => "RANGE",
            Rule::PmOnNoncontroller => "PM_ON_NONCONTROLLER",
            Rule::ModalMissing => "MODAL_MISSING",
            Rule::EmptyText => "EMPTY_TEXT",
            Rule::EdgeKind => "EDGE_KIND",
            Rule::ContextValue => "CONTEXT_VALUE",
            Rule::UnclassifiedHazard => "UNCLASSIFIED_HAZARD",
            Rule::UcaNotConfirmed => "UCA_NOT_CONFIRMED",
            Rule::CscNotUnique => "CSC_NOT_UNIQUE",
            Rule::Disconnected => "DISCONNECTED",
            Rule::NoFeedback => "NO_FEEDBACK",
            Rule::NoProcessModel => "NO_PROCESS_MODEL",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub level: Level,
    pub rule: Rule,
    /// Id of the offending entity, when there is one.
    pub entity: Option<String>,
    pub message: String,
    pub span: Option<SourceSpan>,
    /// Secondary location, e.g. the first declaration of a duplicated id.
    pub related: Option<SourceSpan>,
}

impl Diagnostic {
    pub fn error(rule: Rule, message: impl Into<String>) -> Self {
        Self {
            level: Level::Error,
            rule,
            entity: None,
            message: message.into(),
            span: None,
            related: None,
        }
    }

    pub fn warning(rule: Rule, message: impl Into<String>) -> Self {
        Self {
            level: Level::Warning,
            ..Self::error(rule, message)
        }
    }

    pub fn with_entity(mut self, entity: impl Into<String>) -> Self {
        self.entity = Some(entity.into());
        self
    }

    pub fn with_span(mut self, span: SourceSpan) -> Self {
        self.span = Some(span);
        self
    }

    pub fn with_related(mut self, span: SourceSpan) -> Self {
        self.related = Some(span);
        self
    }

    pub fn is_error(&self) -> bool {
        self.level == Level::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(span) = &self.span {
            write!(f, "{span}: ")?;
        }
        write!(f, "{}[{}]", self.level.as_str(), self.rule)?;
        if let Some(entity) = &self.entity {
            write!(f, " {entity}")?;
        }
        write!(f, ": {}", self.message)?;
        if let Some(related) = &self.related {
            write!(f, " (see {related})")?;
        }
        Ok(())
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}

/// Sorts diagnostics into their stable presentation order.
pub fn sort_diagnostics(diagnostics: &mut [Diagnostic]) {
    diagnostics.sort_by(|a, b| {
        let pos = |d: &Diagnostic| d.span.as_ref().map(|s| (s.line, s.column));
        pos(a)
            .cmp(&pos(b))
            .then_with(|| a.entity.cmp(&b.entity))
            .then_with(|| a.rule.cmp(&b.rule))
            .then_with(|| a.message.cmp(&b.message))
    });
}
