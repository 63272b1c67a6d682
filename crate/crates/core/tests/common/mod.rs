#![allow(dead_code)]

use std::path::PathBuf;

use hazlang::dsl::parse;
use hazlang::SafetyModel;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn fixture_text() -> String {
    std::fs::read_to_string(fixture_path("automated_driving.stpa")).expect("fixture readable")
}

pub fn fixture_model() -> SafetyModel {
    let p = parse(&fixture_text(), "automated_driving.stpa");
    assert!(
        p.diagnostics.iter().all(|d| !d.is_error()),
        "{:?}",
        p.diagnostics
    );
    p.model
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn cli(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = hazlang::cli::run(
        std::iter::once("hazlang").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

/// Removes every line containing `needle`, together with the indented
/// continuation lines that follow it.
pub fn without_declaration(text: &str, needle: &str) -> String {
    let mut out = String::new();
    let mut skipping = false;
    for line in text.lines() {
        let continuation = line.starts_with(' ') && !line.trim().is_empty();
        if line.contains(needle) && !continuation {
            skipping = true;
            continue;
        }
        if skipping && continuation {
            continue;
        }
        skipping = false;
        out.push_str(line);
        out.push('\n');
    }
    out
}

/// Writes `text` to a temp file and returns its guard and path string.
pub fn temp_model(text: &str) -> (tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.stpa");
    std::fs::write(&path, text).unwrap();
    let s = path.display().to_string();
    (dir, s)
}
pub mod gen;
pub mod oracle;
