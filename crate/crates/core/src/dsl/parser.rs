//! Recursive-descent parser for `.stpa` model files.
//!
//! Declarations are keyword-led and normally fit on one line. A declaration
//! may continue on following lines, but any line that starts with a
//! declaration keyword begins a new declaration. That rule is what lets the
//! parser report an unclosed list at the end of its own line and resume at
//! the next declaration.

use std::collections::{BTreeMap, BTreeSet};

use super::lexer::{tokenize, Token, TokenKind};
use crate::diagnostic::{sort_diagnostics, Diagnostic, Rule, SourceSpan};
use crate::model::*;

pub(crate) const TOP_KEYWORDS: &[&str] = &[
    "default_controllability",
    "accident",
    "hazard",
    "constraint",
    "structure",
    "process_model",
    "item",
    "situation",
    "classify",
    "event",
    "goal",
    "uca",
    "csc",
    "scenario",
];

const STRUCTURE_KEYWORDS: &[&str] = &[
    "controller",
    "actuator",
    "process",
    "sensor",
    "external",
    "action",
    "feedback",
];

/// Output of [`parse`]: the model (structurally complete when there are no
/// error diagnostics), the diagnostics, and where each id was declared.
#[derive(Debug, Clone, Default)]
pub struct Parsed {
    pub model: SafetyModel,
    pub diagnostics: Vec<Diagnostic>,
    pub spans: SpanTable,
}

impl Parsed {
    pub fn has_errors(&self) -> bool {
        crate::diagnostic::has_errors(&self.diagnostics)
    }
}

/// Declaration site of every id (and `OWNER.var` for process variables).
#[derive(Debug, Clone, Default)]
pub struct SpanTable(BTreeMap<String, SourceSpan>);

impl SpanTable {
    pub fn get(&self, id: &str) -> Option<&SourceSpan> {
        self.0.get(id)
    }

    /// Fills in the span of every diagnostic that names an entity but has no
    /// location yet.
    pub fn locate(&self, diagnostics: &mut [Diagnostic]) {
        for d in diagnostics {
            if d.span.is_none() {
                if let Some(entity) = &d.entity {
                    d.span = self.get(entity).cloned();
                }
            }
        }
    }
}

/// Parses raw bytes, reporting `ENCODING` when they are not UTF-8.
pub fn parse_bytes(bytes: &[u8], file_name: &str) -> Parsed {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse(text, file_name),
        Err(err) => {
            let valid = &bytes[..err.valid_up_to()];
            // valid prefix is UTF-8 by construction
            let prefix = std::str::from_utf8(valid).unwrap_or_default();
            let line = prefix.matches('\n').count() + 1;
            let column = prefix.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            Parsed {
                diagnostics: vec![Diagnostic::error(
                    Rule::Encoding,
                    format!(
                        "input is not valid UTF-8 (byte offset {})",
                        err.valid_up_to()
                    ),
                )
                .with_span(SourceSpan::new(file_name, line, column, 1))],
                ..Parsed::default()
            }
        }
    }
}

pub fn parse(source: &str, file_name: &str) -> Parsed {
    let mut p = Parser {
        tokens: tokenize(source),
        pos: 0,
        file: file_name.to_string(),
        block: Block::Top,
        model: SafetyModel::default(),
        diagnostics: Vec::new(),
        spans: BTreeMap::new(),
        classifications: Vec::new(),
        pm_owners: BTreeMap::new(),
    };
    p.parse_file();
    p.finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Block {
    Top,
    Structure,
    ProcessModel,
}

/// Marker for a reported syntax error; the parser then recovers.
struct Failed;

type PResult<T> = Result<T, Failed>;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    file: String,
    block: Block,
    model: SafetyModel,
    diagnostics: Vec<Diagnostic>,
    spans: BTreeMap<String, SourceSpan>,
    classifications: Vec<(String, SourceSpan, Classification)>,
    pm_owners: BTreeMap<String, SourceSpan>,
}

impl Parser {
    fn finish(mut self) -> Parsed {
        let mut classified: BTreeMap<String, SourceSpan> = BTreeMap::new();
        for (hazard, span, class) in std::mem::take(&mut self.classifications) {
            if let Some(first) = classified.get(&hazard) {
                let d = Diagnostic::error(
                    Rule::DuplicateId,
                    format!("hazard `{hazard}` classified twice"),
                )
                .with_entity(&hazard)
                .with_span(span)
                .with_related(first.clone());
                self.diagnostics.push(d);
                continue;
            }
            match self.model.hazards.iter_mut().find(|h| h.id == hazard) {
                Some(h) => {
                    h.classification = Some(class);
                    classified.insert(hazard, span);
                }
                None => self.diagnostics.push(
                    Diagnostic::error(
                        Rule::DanglingRef,
                        format!("classify names unknown hazard `{hazard}`"),
                    )
                    .with_entity(&hazard)
                    .with_span(span),
                ),
            }
        }
        sort_diagnostics(&mut self.diagnostics);
        Parsed {
            model: self.model,
            diagnostics: self.diagnostics,
            spans: SpanTable(self.spans),
        }
    }

    // ---- token access -------------------------------------------------

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn span_of(&self, t: &Token) -> SourceSpan {
        SourceSpan::new(&self.file, t.line, t.column, t.len)
    }

    /// True when the next token begins a new declaration in the current
    /// block (or ends the input).
    fn at_boundary(&self) -> bool {
        let t = self.peek();
        match &t.kind {
            TokenKind::Eof => true,
            _ if !t.line_start => false,
            TokenKind::Ident(word) => {
                TOP_KEYWORDS.contains(&word.as_str())
                    || (self.block == Block::Structure
                        && STRUCTURE_KEYWORDS.contains(&word.as_str()))
                    || (self.block == Block::ProcessModel && word == "var")
            }
            TokenKind::RBrace => self.block != Block::Top,
            _ => false,
        }
    }

    fn error_here(&mut self, expected: &str) -> Failed {
        let (span, found) = if self.at_boundary() {
            // point just past the last token of the unfinished line
            let prev = &self.tokens[self.pos.saturating_sub(1)];
            let span = if self.pos == 0 {
                SourceSpan::new(&self.file, 1, 1, 1)
            } else {
                SourceSpan::new(&self.file, prev.line, prev.end_column(), 1)
            };
            (span, "end of line".to_string())
        } else {
            let t = self.peek();
            (self.span_of(t), t.kind.describe())
        };
        self.diagnostics.push(
            Diagnostic::error(Rule::Syntax, format!("expected {expected}, found {found}"))
                .with_span(span),
        );
        Failed
    }

    /// Skips to the next declaration boundary of the current block.
    fn recover(&mut self) {
        while !self.at_boundary() {
            self.bump();
        }
    }

    fn expect_ident(&mut self, what: &str) -> PResult<(String, SourceSpan)> {
        if !self.at_boundary() {
            if let TokenKind::Ident(s) = &self.peek().kind {
                let s = s.clone();
                let t = self.bump();
                return Ok((s, self.span_of(&t)));
            }
        }
        Err(self.error_here(what))
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<()> {
        if !self.at_boundary() && matches!(&self.peek().kind, TokenKind::Ident(s) if s == kw) {
            self.bump();
            return Ok(());
        }
        Err(self.error_here(&format!("`{kw}`")))
    }

    fn expect_string(&mut self, what: &str) -> PResult<String> {
        if !self.at_boundary() {
            if let TokenKind::Str(s) = &self.peek().kind {
                let s = s.clone();
                self.bump();
                return Ok(s);
            }
        }
        Err(self.error_here(what))
    }

    fn expect_punct(&mut self, kind: TokenKind) -> PResult<()> {
        // closing braces may legitimately start a line
        let boundary_ok = kind == TokenKind::RBrace;
        if (boundary_ok || !self.at_boundary()) && self.peek().kind == kind {
            self.bump();
            return Ok(());
        }
        Err(self.error_here(&kind.describe()))
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if !self.at_boundary() && matches!(&self.peek().kind, TokenKind::Ident(s) if s == kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_punct(&mut self, kind: &TokenKind) -> bool {
        if !self.at_boundary() && &self.peek().kind == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    /// Requires the declaration to end here.
    /// A complete declaration ends at a boundary or at any token that starts
    /// a new line; the block loop reports the latter if it is not a keyword.
    fn end_declaration(&mut self) -> PResult<()> {
        if self.at_boundary() || self.peek().line_start {
            Ok(())
        } else {
            Err(self.error_here("end of declaration"))
        }
    }

    // ---- composite pieces ---------------------------------------------

    fn id_list(&mut self, what: &str) -> PResult<IdSet> {
        self.expect_punct(TokenKind::LBracket)?;
        let mut ids = IdSet::new();
        if self.eat_punct(&TokenKind::RBracket) {
            return Ok(ids);
        }
        loop {
            let (id, _) = self.expect_ident(what)?;
            ids.insert(id);
            if self.eat_punct(&TokenKind::Comma) {
                if self.eat_punct(&TokenKind::RBracket) {
                    return Ok(ids);
                }
                continue;
            }
            self.expect_punct(TokenKind::RBracket)?;
            return Ok(ids);
        }
    }

    fn class<T: std::str::FromStr<Err = ClassParseError>>(&mut self, what: &str) -> PResult<T> {
        let (word, span) = self.expect_ident(what)?;
        word.parse::<T>().map_err(|e| {
            let rule = match e {
                ClassParseError::Range(_) => Rule::Range,
                ClassParseError::Syntax(_) => Rule::Syntax,
            };
            self.diagnostics
                .push(Diagnostic::error(rule, format!("expected {what}: {e}")).with_span(span));
            Failed
        })
    }

    fn enum_word<T: std::str::FromStr>(&mut self, what: &str, choices: &[&str]) -> PResult<T> {
        let (word, span) = self.expect_ident(what)?;
        word.parse::<T>().map_err(|_| {
            self.diagnostics.push(
                Diagnostic::error(
                    Rule::Syntax,
                    format!(
                        "unknown {what} `{word}`; expected one of {}",
                        choices.join(", ")
                    ),
                )
                .with_span(span),
            );
            Failed
        })
    }

    /// Records the declaration of `id`. Returns false (after reporting) when
    /// the id is already taken.
    fn declare(&mut self, id: &str, span: SourceSpan) -> bool {
        if let Some(first) = self.spans.get(id) {
            let d = Diagnostic::error(Rule::DuplicateId, format!("`{id}` is already declared"))
                .with_entity(id)
                .with_span(span)
                .with_related(first.clone());
            self.diagnostics.push(d);
            return false;
        }
        self.spans.insert(id.to_string(), span);
        true
    }

    // ---- declarations -------------------------------------------------

    fn parse_file(&mut self) {
        loop {
            let t = self.peek().clone();
            match &t.kind {
                TokenKind::Eof => return,
                TokenKind::Ident(word) if TOP_KEYWORDS.contains(&word.as_str()) => {
                    let word = word.clone();
                    self.bump();
                    if self.top_declaration(&word).is_err() {
                        self.recover();
                    }
                }
                _ => {
                    let span = self.span_of(&t);
                    self.diagnostics.push(
                        Diagnostic::error(
                            Rule::Syntax,
                            format!(
                                "expected a declaration keyword, found {}",
                                t.kind.describe()
                            ),
                        )
                        .with_span(span),
                    );
                    self.bump();
                    self.recover();
                }
            }
        }
    }

    fn top_declaration(&mut self, keyword: &str) -> PResult<()> {
        match keyword {
            "default_controllability" => {
                let c = self.class::<ControllabilityClass>("controllability class C0..C3")?;
                self.end_declaration()?;
                self.model.default_controllability = Some(c);
            }
            "accident" => {
                let (id, span) = self.expect_ident("accident id")?;
                let description = self.expect_string("accident description")?;
                let severity_note = if self.eat_keyword("note") {
                    Some(self.expect_string("note text")?)
                } else {
                    None
                };
                self.end_declaration()?;
                if self.declare(&id, span) {
                    self.model.accidents.push(Accident {
                        id,
                        description,
                        severity_note,
                    });
                }
            }
            "hazard" => {
                let (id, span) = self.expect_ident("hazard id")?;
                let description = self.expect_string("hazard description")?;
                self.expect_keyword("leads_to")?;
                let leads_to = self.id_list("accident id")?;
                let condition = if self.eat_keyword("condition") {
                    Some(self.expect_string("condition phrase")?)
                } else {
                    None
                };
                self.end_declaration()?;
                if self.declare(&id, span) {
                    self.model.hazards.push(Hazard {
                        id,
                        description,
                        leads_to,
                        classification: None,
                        condition,
                    });
                }
            }
            "constraint" => {
                let (id, span) = self.expect_ident("constraint id")?;
                let description = self.expect_string("constraint text")?;
                self.expect_keyword("mitigates")?;
                let mitigates = self.id_list("hazard id")?;
                self.end_declaration()?;
                if self.declare(&id, span) {
                    self.model.constraints.push(SystemSafetyConstraint {
                        id,
                        description,
                        mitigates,
                    });
                }
            }
            "structure" => self.structure_block()?,
            "process_model" => self.process_model_block()?,
            "item" => {
                let (id, span) = self.expect_ident("item id")?;
                let name = self.expect_string("item name")?;
                self.expect_keyword("members")?;
                let members = self.id_list("node id")?;
                self.expect_keyword("purpose")?;
                let purpose = self.expect_string("item purpose")?;
                self.end_declaration()?;
                if self.declare(&id, span) {
                    self.model.items.push(Item {
                        id,
                        name,
                        members,
                        purpose,
                    });
                }
            }
            "situation" => {
                let (id, span) = self.expect_ident("situation id")?;
                let description = self.expect_string("situation description")?;
                let operating_mode = if self.eat_keyword("mode") {
                    Some(self.expect_string("operating mode")?)
                } else {
                    None
                };
                self.end_declaration()?;
                if self.declare(&id, span) {
                    self.model.situations.push(OperationalSituation {
                        id,
                        description,
                        operating_mode,
                    });
                }
            }
            "classify" => {
                let (hazard, span) = self.expect_ident("hazard id")?;
                self.expect_keyword("severity")?;
                let severity = self.class::<SeverityClass>("severity class S0..S3")?;
                self.expect_keyword("exposure")?;
                let exposure = self.class::<ExposureClass>("exposure class E0..E4")?;
                self.end_declaration()?;
                self.classifications
                    .push((hazard, span, Classification { severity, exposure }));
            }
            "event" => {
                let (id, span) = self.expect_ident("event id")?;
                self.expect_keyword("hazard")?;
                let (hazard, _) = self.expect_ident("hazard id")?;
                self.expect_keyword("situation")?;
                let (situation, _) = self.expect_ident("situation id")?;
                let controllability = if self.eat_keyword("controllability") {
                    Some(self.class::<ControllabilityClass>("controllability class C0..C3")?)
                } else {
                    None
                };
                self.end_declaration()?;
                if self.declare(&id, span) {
                    self.model.events.push(HazardousEvent {
                        id,
                        hazard,
                        situation,
                        controllability,
                    });
                }
            }
            "goal" => {
                let (id, span) = self.expect_ident("goal id")?;
                self.expect_keyword("event")?;
                let (event, _) = self.expect_ident("event id")?;
                self.expect_keyword("asil")?;
                let asil = self.enum_word::<AsilRating>("ASIL", &["QM", "A", "B", "C", "D"])?;
                let text = self.expect_string("safety goal text")?;
                self.end_declaration()?;
                if self.declare(&id, span) {
                    self.model.goals.push(SafetyGoal {
                        id,
                        text,
                        event,
                        asil,
                    });
                }
            }
            "uca" => self.uca_declaration()?,
            "csc" => {
                let (id, span) = self.expect_ident("constraint id")?;
                self.expect_keyword("uca")?;
                let (uca, _) = self.expect_ident("UCA id")?;
                let text = self.expect_string("constraint text")?;
                self.end_declaration()?;
                if self.declare(&id, span) {
                    self.model
                        .cscs
                        .push(CorrespondingSafetyConstraint { id, uca, text });
                }
            }
            "scenario" => {
                let (id, span) = self.expect_ident("scenario id")?;
                self.expect_keyword("uca")?;
                let (uca, _) = self.expect_ident("UCA id")?;
                self.expect_keyword("factor")?;
                let names: Vec<&str> = CausalFactorCategory::ALL
                    .iter()
                    .map(|c| c.as_str())
                    .collect();
                let factor_category =
                    self.enum_word::<CausalFactorCategory>("causal factor", &names)?;
                let description = self.expect_string("scenario description")?;
                let derived_constraint = if self.eat_keyword("constraint") {
                    Some(self.expect_string("constraint text")?)
                } else {
                    None
                };
                self.end_declaration()?;
                if self.declare(&id, span) {
                    self.model.scenarios.push(CausalScenario {
                        id,
                        uca,
                        factor_category,
                        description,
                        derived_constraint,
                    });
                }
            }
            _ => unreachable!("not a top-level keyword: {keyword}"),
        }
        Ok(())
    }

    fn uca_declaration(&mut self) -> PResult<()> {
        let (id, span) = self.expect_ident("UCA id")?;
        self.expect_keyword("action")?;
        let (action, _) = self.expect_ident("control action id")?;
        self.expect_keyword("type")?;
        let names: Vec<&str> = GuideWord::ALL.iter().map(|g| g.as_str()).collect();
        let guide_word = self.enum_word::<GuideWord>("guide word", &names)?;
        let context = if self.eat_keyword("context") {
            self.context_block()?
        } else {
            Context::default()
        };
        let description = self.expect_string("UCA description")?;
        self.expect_keyword("hazards")?;
        let hazards = self.id_list("hazard id")?;
        let status = if self.eat_keyword("status") {
            self.enum_word::<UcaStatus>("status", &["candidate", "confirmed", "rejected"])?
        } else {
            UcaStatus::Candidate
        };
        self.end_declaration()?;
        if self.declare(&id, span) {
            self.model.ucas.push(UnsafeControlAction {
                id,
                action,
                guide_word,
                context,
                description,
                hazards,
                status,
            });
        }
        Ok(())
    }

    /// `{ var=value, ..., "free text" }`
    fn context_block(&mut self) -> PResult<Context> {
        self.expect_punct(TokenKind::LBrace)?;
        let mut ctx = Context::default();
        if self.eat_punct(&TokenKind::RBrace) {
            return Ok(ctx);
        }
        loop {
            if !self.at_boundary() && matches!(self.peek().kind, TokenKind::Str(_)) {
                let t = self.peek().clone();
                let text = self.expect_string("context text")?;
                if ctx.free_text.replace(text).is_some() {
                    self.diagnostics.push(
                        Diagnostic::error(
                            Rule::Syntax,
                            "context allows at most one free-text string",
                        )
                        .with_span(self.span_of(&t)),
                    );
                    return Err(Failed);
                }
            } else {
                let (var, var_span) = self.expect_ident("process variable")?;
                self.expect_punct(TokenKind::Equals)?;
                let (value, _) = self.expect_ident("variable value")?;
                if ctx.assignments.insert(var.clone(), value).is_some() {
                    self.diagnostics.push(
                        Diagnostic::error(
                            Rule::Syntax,
                            format!("variable `{var}` assigned twice in context"),
                        )
                        .with_span(var_span),
                    );
                    return Err(Failed);
                }
            }
            if self.eat_punct(&TokenKind::Comma) {
                continue;
            }
            if self.eat_punct(&TokenKind::RBrace) {
                return Ok(ctx);
            }
            return Err(self.error_here("`,` or `}`"));
        }
    }

    fn structure_block(&mut self) -> PResult<()> {
        self.expect_punct(TokenKind::LBrace)?;
        let outer = self.block;
        self.block = Block::Structure;
        let result = self.structure_body();
        self.block = outer;
        result
    }

    fn structure_body(&mut self) -> PResult<()> {
        loop {
            let t = self.peek().clone();
            match &t.kind {
                TokenKind::RBrace => {
                    self.bump();
                    return Ok(());
                }
                TokenKind::Ident(word) if STRUCTURE_KEYWORDS.contains(&word.as_str()) => {
                    let word = word.clone();
                    self.bump();
                    if self.structure_line(&word).is_err() {
                        self.recover();
                    }
                }
                TokenKind::Eof => return Err(self.error_here("`}` closing `structure`")),
                TokenKind::Ident(word) if t.line_start && TOP_KEYWORDS.contains(&word.as_str()) => {
                    return Err(self.error_here("`}` closing `structure`"));
                }
                _ => {
                    self.diagnostics.push(
                        Diagnostic::error(
                            Rule::Syntax,
                            format!(
                                "expected a node or edge declaration, found {}",
                                t.kind.describe()
                            ),
                        )
                        .with_span(self.span_of(&t)),
                    );
                    self.bump();
                    self.recover();
                }
            }
        }
    }

    fn structure_line(&mut self, keyword: &str) -> PResult<()> {
        if let Some(kind) = NodeKind::from_keyword(keyword) {
            let (id, span) = self.expect_ident("node id")?;
            let label = self.expect_string("node label")?;
            self.end_declaration()?;
            if self.declare(&id, span) {
                self.model.structure.nodes.push(Node { id, kind, label });
            }
            return Ok(());
        }
        let (id, span) = self.expect_ident("edge id")?;
        self.expect_keyword("from")?;
        let (source, _) = self.expect_ident("source node")?;
        self.expect_keyword("to")?;
        let (target, _) = self.expect_ident("target node")?;
        let label = self.expect_string("edge label")?;
        if keyword == "action" {
            let mut payload_fields = Vec::new();
            if self.eat_keyword("payload") {
                payload_fields.push(self.expect_string("payload field")?);
                while self.eat_punct(&TokenKind::Comma) {
                    payload_fields.push(self.expect_string("payload field")?);
                }
            }
            self.end_declaration()?;
            if self.declare(&id, span) {
                self.model.structure.actions.push(ControlActionEdge {
                    id,
                    source,
                    target,
                    label,
                    payload_fields,
                });
            }
        } else {
            self.end_declaration()?;
            if self.declare(&id, span) {
                self.model.structure.feedback.push(FeedbackEdge {
                    id,
                    source,
                    target,
                    label,
                });
            }
        }
        Ok(())
    }

    fn process_model_block(&mut self) -> PResult<()> {
        self.expect_keyword("of")?;
        let (owner, owner_span) = self.expect_ident("controller id")?;
        self.expect_punct(TokenKind::LBrace)?;
        let outer = self.block;
        self.block = Block::ProcessModel;
        let mut variables = Vec::new();
        let result = self.process_model_body(&owner, &mut variables);
        self.block = outer;
        result?;
        if let Some(first) = self.pm_owners.get(&owner) {
            let d = Diagnostic::error(
                Rule::DuplicateId,
                format!("second process model for `{owner}`"),
            )
            .with_entity(&owner)
            .with_span(owner_span)
            .with_related(first.clone());
            self.diagnostics.push(d);
        } else {
            self.pm_owners.insert(owner.clone(), owner_span);
            self.model
                .process_models
                .push(ProcessModel { owner, variables });
        }
        Ok(())
    }

    fn process_model_body(
        &mut self,
        owner: &str,
        variables: &mut Vec<ProcessVariable>,
    ) -> PResult<()> {
        let mut names = BTreeSet::new();
        loop {
            let t = self.peek().clone();
            match &t.kind {
                TokenKind::RBrace => {
                    self.bump();
                    return Ok(());
                }
                TokenKind::Ident(word) if word == "var" => {
                    self.bump();
                    match self.variable() {
                        Ok((var, span)) => {
                            let key = format!("{owner}.{}", var.name);
                            if names.insert(var.name.clone()) {
                                self.spans.entry(key).or_insert(span);
                                variables.push(var);
                            } else {
                                let d = Diagnostic::error(
                                    Rule::DuplicateId,
                                    format!("variable `{}` declared twice", var.name),
                                )
                                .with_entity(&key)
                                .with_span(span);
                                let d = match self.spans.get(&key) {
                                    Some(first) => d.with_related(first.clone()),
                                    None => d,
                                };
                                self.diagnostics.push(d);
                            }
                        }
                        Err(Failed) => self.recover(),
                    }
                }
                TokenKind::Eof => return Err(self.error_here("`}` closing `process_model`")),
                TokenKind::Ident(word) if t.line_start && TOP_KEYWORDS.contains(&word.as_str()) => {
                    return Err(self.error_here("`}` closing `process_model`"));
                }
                _ => {
                    self.diagnostics.push(
                        Diagnostic::error(
                            Rule::Syntax,
                            format!("expected `var`, found {}", t.kind.describe()),
                        )
                        .with_span(self.span_of(&t)),
                    );
                    self.bump();
                    self.recover();
                }
            }
        }
    }

    /// `name : { v1, v2, ... }`
    fn variable(&mut self) -> PResult<(ProcessVariable, SourceSpan)> {
        let (name, span) = self.expect_ident("variable name")?;
        self.expect_punct(TokenKind::Colon)?;
        self.expect_punct(TokenKind::LBrace)?;
        let mut values = Vec::new();
        if !self.eat_punct(&TokenKind::RBrace) {
            loop {
                let (value, _) = self.expect_ident("variable value")?;
                values.push(value);
                if self.eat_punct(&TokenKind::Comma) {
                    continue;
                }
                // the closing brace of a value set never starts a line on its own
                // in canonical output, but accept it anywhere
                if self.peek().kind == TokenKind::RBrace {
                    self.bump();
                    break;
                }
                return Err(self.error_here("`,` or `}`"));
            }
        }
        Ok((ProcessVariable { name, values }, span))
    }
}
