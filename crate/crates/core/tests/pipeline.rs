mod common;

use common::{cli, fixture_path, fixture_text, temp_model, without_declaration};
use hazlang::dsl::parse;
use hazlang::trace::{build_trace_matrix, emit_report, export_control_structure, FindingRule};

fn fixture() -> String {
    fixture_path("automated_driving.stpa").display().to_string()
}

#[test]
fn check_reports_entity_count() {
    let run = cli(&["check", &fixture()]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let model = common::fixture_model();
    assert_eq!(run.stdout, format!("{} entities\n", model.entity_count()));
}

#[test]
fn check_on_empty_file() {
    let (_dir, file) = temp_model("");
    let run = cli(&["check", &file]);
    assert_eq!(
        (run.code, run.stdout.as_str(), run.stderr.as_str()),
        (0, "0 entities\n", "")
    );
}

#[test]
fn check_reports_located_errors_and_exits_1() {
    let (_dir, file) =
        temp_model("accident A \"a\"\nhazard H \"h\" leads_to [A\nhazard H2 \"h\" leads_to [Z]\n");
    let run = cli(&["check", &file]);
    assert_eq!(run.code, 1);
    assert!(
        run.stderr.contains(":2:25: error[SYNTAX]"),
        "{}",
        run.stderr
    );
    let (_dir, file) = temp_model("hazard H \"h\" leads_to [Z]\n");
    let run = cli(&["check", &file]);
    assert_eq!(run.code, 1);
    assert!(
        run.stderr
            .contains(":1:8: error[DANGLING_REF] H: unknown accident `Z`"),
        "{}",
        run.stderr
    );
}

#[test]
fn warnings_do_not_fail_check() {
    let (_dir, file) = temp_model("structure {\n  controller C \"c\"\n  actuator A \"a\"\n  action go from C to A \"go\"\n}\n");
    let run = cli(&["check", &file]);
    assert_eq!(run.code, 0);
    assert!(
        run.stderr.contains("warning[NO_FEEDBACK] go"),
        "{}",
        run.stderr
    );
    assert!(
        run.stderr.contains("warning[NO_PROCESS_MODEL] C"),
        "{}",
        run.stderr
    );
}

#[test]
fn missing_file_exits_1() {
    assert_eq!(cli(&["check", "/nonexistent/model.stpa"]).code, 1);
}

#[test]
fn hara_prints_the_rated_event() {
    let run = cli(&["hara", &fixture()]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(
        run.stdout
            .contains("HE.1   HA.1    OS1        S3  E3  C3  ASIL C  SG.1"),
        "{}",
        run.stdout
    );
    assert!(run
        .stdout
        .contains("must not lose the steering control while driving on a highway"));
    assert!(run.stdout.is_ascii());
}

#[test]
fn fixture_traces_cleanly() {
    let run = cli(&["trace", &fixture()]);
    assert_eq!(
        (run.code, run.stdout.as_str()),
        (0, "9 links, 0 findings\n")
    );
}

fn seeded(needle: &str) -> Vec<(FindingRule, String)> {
    let text = without_declaration(&fixture_text(), needle);
    let p = parse(&text, "seeded.stpa");
    assert!(!p.has_errors(), "{:?}", p.diagnostics);
    build_trace_matrix(&p.model)
        .orphans
        .into_iter()
        .map(|f| (f.rule, f.entity))
        .collect()
}

#[test]
fn seeded_defects_yield_exactly_one_finding() {
    let cases = [
        ("classify HA.1", FindingRule::HazardNoEvent, "HA.1"),
        ("event HE.1", FindingRule::HazardNoEvent, "HA.1"),
        ("goal SG.1", FindingRule::EventNoGoal, "HE.1"),
        ("csc SC-1", FindingRule::ConfirmedUcaNoCsc, "UCA-1"),
        (
            "scenario CS.1",
            FindingRule::ConfirmedUcaNoScenario,
            "UCA-1",
        ),
    ];
    for (needle, rule, entity) in cases {
        let text = if needle == "event HE.1" {
            // the goal depends on the event, so it goes too
            without_declaration(&without_declaration(&fixture_text(), needle), "goal SG.1")
        } else {
            without_declaration(&fixture_text(), needle)
        };
        let p = parse(&text, "seeded.stpa");
        let findings: Vec<_> = build_trace_matrix(&p.model)
            .orphans
            .into_iter()
            .map(|f| (f.rule, f.entity))
            .collect();
        assert_eq!(findings, vec![(rule, entity.to_string())], "{needle}");

        let (_dir, file) = temp_model(&text);
        let run = cli(&["trace", &file]);
        assert_eq!(run.code, 2, "{needle}: {}", run.stderr);
        assert!(run.stdout.contains(rule.as_str()));
    }
}

#[test]
fn unlinked_accident_and_hazard_findings() {
    assert_eq!(
        seeded("status confirmed"),
        vec![],
        "a candidate UCA is not subject to the confirmed-UCA rules"
    );
    let text = fixture_text().replace("leads_to [AC.1]", "leads_to []");
    let p = parse(&text, "t");
    let rules: Vec<_> = build_trace_matrix(&p.model)
        .orphans
        .into_iter()
        .map(|f| f.rule)
        .collect();
    assert_eq!(rules, vec![FindingRule::HazardNoAccident]);
}

#[test]
fn goal_asil_mismatch_is_reported() {
    let text = fixture_text().replace("asil C", "asil D");
    let (_dir, file) = temp_model(&text);
    let run = cli(&["trace", &file]);
    assert_eq!(run.code, 2);
    assert!(
        run.stdout.contains("GOAL_ASIL_MISMATCH SG.1"),
        "{}",
        run.stdout
    );
}

#[test]
fn markdown_report_layout() {
    let run = cli(&["report", &fixture(), "--format", "md"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let md = run.stdout;
    for heading in [
        "## Accidents",
        "## Hazards",
        "## System safety constraints",
        "## Hazard analysis and risk assessment",
        "## Safety goals",
        "## Unsafe control actions",
        "## Corresponding safety constraints",
        "## Causal scenarios",
        "## Traceability findings",
    ] {
        assert!(md.contains(&format!("\n{heading}\n")), "{heading}");
    }
    assert!(md.contains("| HE.1 | HA.1 | OS1 | S3 | E3 | C3 | ASIL C | SG.1 |"));
    assert!(md.ends_with("_None._\n"));
}

#[test]
fn report_files_and_formats() {
    let dir = tempfile::tempdir().unwrap();
    let md = dir.path().join("r.md");
    assert_eq!(
        cli(&[
            "report",
            &fixture(),
            "--format",
            "markdown",
            "--out",
            md.to_str().unwrap()
        ])
        .code,
        0
    );
    assert!(std::fs::read_to_string(&md).unwrap().ends_with('\n'));

    let csv_dir = dir.path().join("csv");
    let run = cli(&[
        "report",
        &fixture(),
        "--format",
        "csv",
        "--out",
        csv_dir.to_str().unwrap(),
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let hazards = std::fs::read_to_string(csv_dir.join("hazards.csv")).unwrap();
    let mut reader = csv::Reader::from_reader(hazards.as_bytes());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        vec!["id", "description", "leads_to", "severity", "exposure"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), common::fixture_model().hazards.len());
    assert_eq!(&rows[0][0], "HA.1");
    assert_eq!(&rows[0][3], "S3");
    let ucas = std::fs::read_to_string(csv_dir.join("ucas.csv")).unwrap();
    assert_eq!(
        csv::Reader::from_reader(ucas.as_bytes()).records().count(),
        1
    );

    assert_eq!(cli(&["report", &fixture(), "--format", "pdf"]).code, 64);
    assert_eq!(cli(&["report", &fixture(), "--format", "csv"]).code, 64);
}

#[test]
fn reports_are_deterministic() {
    let model = common::fixture_model();
    let matrix = build_trace_matrix(&model);
    for format in ["md", "json", "csv"] {
        let a = emit_report(&model, &matrix, format).unwrap();
        let mut shuffled = model.clone();
        shuffled.structure.nodes.reverse();
        shuffled.structure.feedback.reverse();
        let b = emit_report(&shuffled, &build_trace_matrix(&shuffled), format).unwrap();
        assert_eq!(a, b, "{format}");
        assert!(a.files.iter().all(|f| f.contents.ends_with('\n')));
    }
    let first = cli(&["report", &fixture(), "--format", "json"]).stdout;
    assert_eq!(
        first,
        cli(&["report", &fixture(), "--format", "json"]).stdout
    );
}

#[test]
fn graph_export_matches_model_counts() {
    let model = common::fixture_model();
    let dot = export_control_structure(&model);
    let node_lines = dot.lines().filter(|l| l.contains("shape=")).count();
    let solid = dot
        .lines()
        .filter(|l| l.contains(" -> ") && l.contains("style=solid"))
        .count();
    let dashed = dot
        .lines()
        .filter(|l| l.contains(" -> ") && l.contains("style=dashed"))
        .count();
    assert_eq!(node_lines, model.structure.nodes.len());
    assert_eq!(solid, model.structure.actions.len());
    assert_eq!(dashed, model.structure.feedback.len());
    assert!(
        dot.contains("\"ADP\" -> \"MC\" [id=\"trajectory\", label=\"trajectory\", style=solid];")
    );
    assert!(dot.contains(
        "\"CAM\" -> \"ADP\" [id=\"cam_objects\", label=\"camera objects\", style=dashed];"
    ));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cs.dot");
    assert_eq!(
        cli(&["graph", &fixture(), "--out", out.to_str().unwrap()]).code,
        0
    );
    assert_eq!(std::fs::read_to_string(out).unwrap(), dot);
}

#[test]
fn checklist_for_uca_1() {
    let run = cli(&["checklist", &fixture(), "--uca", "UCA-1"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.contains("[communication_loss] backend_data:"));
    assert!(run.stdout.contains("[control_path_failure] trajectory:"));
    let run = cli(&["checklist", &fixture(), "--uca", "UCA-9"]);
    assert_eq!(run.code, 1);
}
