//! Command-line front end. [`run`] is the whole program minus process
//! plumbing, so tests drive it with in-memory writers.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::diagnostic::{has_errors, sort_diagnostics, Diagnostic};
use crate::dsl::{parse_bytes, quote, uca_line};
use crate::hara::{
    assess_declared_events, default_controllability, determine_asil, DEFAULT_CONTROLLABILITY_ENV,
};
use crate::model::{
    validate_model, ControllabilityClass, ExposureClass, SafetyModel, SeverityClass, UcaStatus,
    UnsafeControlAction,
};
use crate::stpa::{
    causal_factor_checklist, derive_corresponding_constraint, generate_uca_candidates,
    validate_control_structure,
};
use crate::trace::{
    build_trace_matrix_with, export_control_structure, render_report, ReportFormat,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERRORS: i32 = 1;
pub const EXIT_FINDINGS: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "hazlang",
    version,
    about = "STPA and ISO 26262 hazard analysis over .stpa models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a model.
    Check { file: PathBuf },
    /// Print candidate UCAs for a control action as DSL lines.
    GenUca {
        file: PathBuf,
        #[arg(long)]
        action: String,
        /// Comma-separated process-model variables of the action's source.
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
    },
    /// Print corresponding safety constraints for confirmed UCAs as DSL lines.
    GenCsc {
        file: PathBuf,
        /// Only this UCA; default is every confirmed UCA.
        #[arg(long)]
        uca: Option<String>,
    },
    /// Rate one S/E/C combination.
    Asil {
        severity: SeverityClass,
        exposure: ExposureClass,
        controllability: ControllabilityClass,
    },
    /// Rate every hazardous event and print the HARA table.
    Hara {
        file: PathBuf,
        #[arg(long)]
        default_controllability: Option<ControllabilityClass>,
    },
    /// List traceability findings; exit 2 if there are any.
    Trace {
        file: PathBuf,
        #[arg(long)]
        default_controllability: Option<ControllabilityClass>,
    },
    /// Write a report as md, json or csv (csv writes a directory).
    Report {
        file: PathBuf,
        #[arg(long, default_value = "md")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        default_controllability: Option<ControllabilityClass>,
    },
    /// Export the control structure in dot format.
    Graph {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the causal-factor checklist for a confirmed UCA.
    Checklist {
        file: PathBuf,
        #[arg(long)]
        uca: String,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

// Console writes are best-effort: a closed pipe must not turn into a panic.
macro_rules! say {
    ($w:expr, $($arg:tt)*) => {{ let _ = writeln!($w, $($arg)*); }};
}

/// Runs the CLI and returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let mut io = Io { out, err };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(code) => code,
    }
}

fn dispatch(command: Command, io: &mut Io<'_>) -> Result<i32, i32> {
    match command {
        Command::Check { file } => {
            let model = load(&file, io, true)?;
            say!(io.out, "{} entities", model.entity_count());
            Ok(EXIT_OK)
        }
        Command::GenUca { file, action, vars } => {
            let model = load(&file, io, false)?;
            let candidates = generate_uca_candidates(&model, &action, &vars).map_err(|e| {
                say!(io.err, "error[{}]: {e}", e.code());
                EXIT_ERRORS
            })?;
            for u in &candidates {
                say!(io.out, "{}", uca_line(u));
            }
            Ok(EXIT_OK)
        }
        Command::GenCsc { file, uca } => {
            let model = load(&file, io, false)?;
            let selected: Vec<&UnsafeControlAction> = match &uca {
                Some(id) => match model.uca(id) {
                    Some(u) => vec![u],
                    None => {
                        say!(io.err, "error[DANGLING_REF]: unknown UCA `{id}`");
                        return Err(EXIT_ERRORS);
                    }
                },
                None => model
                    .ucas
                    .iter()
                    .filter(|u| u.status == UcaStatus::Confirmed)
                    .collect(),
            };
            for u in selected {
                let c = derive_corresponding_constraint(u, &model).map_err(|e| {
                    say!(io.err, "error[{}]: {e}", e.code());
                    EXIT_ERRORS
                })?;
                say!(io.out, "csc {} uca {} {}", c.id, c.uca, quote(&c.text));
            }
            Ok(EXIT_OK)
        }
        Command::Asil {
            severity,
            exposure,
            controllability,
        } => {
            say!(
                io.out,
                "{}",
                determine_asil(severity, exposure, controllability).label()
            );
            Ok(EXIT_OK)
        }
        Command::Hara {
            file,
            default_controllability: flag,
        } => {
            let model = load(&file, io, false)?;
            let c = default_controllability(&model, external_controllability(flag, io)?);
            let events = assess_declared_events(&model, c).map_err(|e| {
                say!(io.err, "error[{}]: {e}", e.code());
                EXIT_ERRORS
            })?;
            let rows: Vec<Vec<String>> = events
                .iter()
                .map(|e| {
                    vec![
                        e.id.clone(),
                        e.hazard.clone(),
                        e.situation.clone(),
                        e.severity.to_string(),
                        e.exposure.to_string(),
                        e.controllability.to_string(),
                        e.asil.label(),
                        e.safety_goal.id.clone(),
                    ]
                })
                .collect();
            let table = ascii_table(
                &[
                    "Event",
                    "Hazard",
                    "Situation",
                    "S",
                    "E",
                    "C",
                    "ASIL",
                    "Goal",
                ],
                &rows,
            );
            let _ = write!(io.out, "{table}");
            for e in &events {
                let note = if e.asil == crate::model::AsilRating::QM {
                    " (informative)"
                } else {
                    ""
                };
                say!(
                    io.out,
                    "{} [{}]{}: {}",
                    e.safety_goal.id,
                    e.asil.label(),
                    note,
                    e.safety_goal.text
                );
            }
            Ok(EXIT_OK)
        }
        Command::Trace {
            file,
            default_controllability: flag,
        } => {
            let model = load(&file, io, false)?;
            let c = default_controllability(&model, external_controllability(flag, io)?);
            let matrix = build_trace_matrix_with(&model, c);
            say!(
                io.out,
                "{} links, {} findings",
                matrix.links.len(),
                matrix.orphans.len()
            );
            for f in &matrix.orphans {
                say!(io.out, "{f}");
            }
            Ok(if matrix.orphans.is_empty() {
                EXIT_OK
            } else {
                EXIT_FINDINGS
            })
        }
        Command::Report {
            file,
            format,
            out,
            default_controllability: flag,
        } => {
            let format: ReportFormat = format.parse().map_err(|e: crate::trace::ReportError| {
                say!(io.err, "error[{}]: {e}", e.code());
                EXIT_USAGE
            })?;
            if format == ReportFormat::Csv && out.is_none() {
                say!(io.err, "error: --out <dir> is required for csv reports");
                return Err(EXIT_USAGE);
            }
            let model = load(&file, io, false)?;
            let c = default_controllability(&model, external_controllability(flag, io)?);
            let report = render_report(&model, &build_trace_matrix_with(&model, c), format);
            match (format, out) {
                (ReportFormat::Csv, Some(dir)) => {
                    std::fs::create_dir_all(&dir).map_err(|e| io_error(io, &dir, e))?;
                    for f in &report.files {
                        let path = dir.join(&f.name);
                        std::fs::write(&path, &f.contents).map_err(|e| io_error(io, &path, e))?;
                    }
                }
                (_, Some(path)) => {
                    std::fs::write(&path, &report.files[0].contents)
                        .map_err(|e| io_error(io, &path, e))?;
                }
                (_, None) => {
                    let _ = write!(io.out, "{}", report.files[0].contents);
                }
            }
            Ok(EXIT_OK)
        }
        Command::Graph { file, out } => {
            let model = load(&file, io, false)?;
            let dot = export_control_structure(&model);
            match out {
                Some(path) => std::fs::write(&path, dot).map_err(|e| io_error(io, &path, e))?,
                None => {
                    let _ = write!(io.out, "{dot}");
                }
            }
            Ok(EXIT_OK)
        }
        Command::Checklist { file, uca } => {
            let model = load(&file, io, false)?;
            let Some(u) = model.uca(&uca) else {
                say!(io.err, "error[DANGLING_REF]: unknown UCA `{uca}`");
                return Err(EXIT_ERRORS);
            };
            let list = causal_factor_checklist(u, &model).map_err(|e| {
                say!(io.err, "error[{}]: {e}", e.code());
                EXIT_ERRORS
            })?;
            for e in &list.entries {
                say!(io.out, "[{}] {}: {}", e.category, e.element, e.prompt);
            }
            for d in &list.notes {
                say!(io.err, "{d}");
            }
            Ok(EXIT_OK)
        }
    }
}

/// Parses and validates `path`. Diagnostics go to stderr; warnings only
/// when `show_warnings` is set. Any error yields exit 1.
fn load(path: &Path, io: &mut Io<'_>, show_warnings: bool) -> Result<SafetyModel, i32> {
    let bytes = std::fs::read(path).map_err(|e| io_error(io, path, e))?;
    let parsed = parse_bytes(&bytes, &path.display().to_string());
    let mut diagnostics: Vec<Diagnostic> = parsed.diagnostics;
    if !has_errors(&diagnostics) {
        let mut more = validate_model(&parsed.model);
        more.extend(validate_control_structure(&parsed.model));
        parsed.spans.locate(&mut more);
        diagnostics.extend(more);
    }
    sort_diagnostics(&mut diagnostics);
    let failed = has_errors(&diagnostics);
    for d in diagnostics.iter().filter(|d| show_warnings || d.is_error()) {
        say!(io.err, "{d}");
    }
    if failed {
        Err(EXIT_ERRORS)
    } else {
        Ok(parsed.model)
    }
}

fn external_controllability(
    flag: Option<ControllabilityClass>,
    io: &mut Io<'_>,
) -> Result<Option<ControllabilityClass>, i32> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(DEFAULT_CONTROLLABILITY_ENV) {
        Ok(v) if !v.trim().is_empty() => v.trim().parse().map(Some).map_err(|e| {
            say!(io.err, "error: {DEFAULT_CONTROLLABILITY_ENV}: {e}");
            EXIT_USAGE
        }),
        _ => Ok(None),
    }
}

fn io_error(io: &mut Io<'_>, path: &Path, e: std::io::Error) -> i32 {
    say!(io.err, "error: {}: {e}", path.display());
    EXIT_ERRORS
}

fn ascii_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(header.to_vec());
    out.push_str(&line(
        widths
            .iter()
            .map(|w| "-".repeat(*w))
            .collect::<Vec<_>>()
            .iter()
            .map(String::as_str)
            .collect(),
    ));
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    out
}
