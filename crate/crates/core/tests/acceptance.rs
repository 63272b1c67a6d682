//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always shown.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use hazlang::dsl::{parse, serialize};
use hazlang::hara::determine_asil;
use hazlang::model::{
    AsilRating, ControllabilityClass as C, ExposureClass as E, GuideWord, SeverityClass as S,
    UcaStatus,
};
use hazlang::stpa::generate_uca_candidates;
use hazlang::trace::{build_trace_matrix, emit_report, FindingRule};
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);
/// Header titles, then per row the UCA ids under each guide word.
type GuideWordTable = (Vec<String>, Vec<Vec<Vec<String>>>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn c1_asil_anchor() -> Outcome {
    let rating = determine_asil(S::S3, E::E3, C::C3);
    ensure!(rating == AsilRating::C, "S3/E3/C3 rated {rating}");
    Ok("S3 E3 C3 -> ASIL C".into())
}

fn c2_asil_table() -> Outcome {
    let table = common::oracle::asil_table();
    ensure!(table.len() == 80, "table has {} cells", table.len());
    for &(s, e, c, expected) in &table {
        let got = determine_asil(s, e, c);
        ensure!(
            got == expected,
            "{s} {e} {c}: got {got}, table says {expected}"
        );
    }
    for &(s, e, c, _) in &table {
        let here = determine_asil(s, e, c);
        if s.level() == 0 || e.level() == 0 || c.level() == 0 {
            ensure!(here == AsilRating::QM, "{s} {e} {c} not absorbed to QM");
        }
        let ups = [
            S::from_level(s.level() + 1).map(|s2| determine_asil(s2, e, c)),
            E::from_level(e.level() + 1).map(|e2| determine_asil(s, e2, c)),
            C::from_level(c.level() + 1).map(|c2| determine_asil(s, e, c2)),
        ];
        for up in ups.into_iter().flatten() {
            ensure!(up >= here, "not monotone at {s} {e} {c}");
        }
    }
    Ok("80/80 cells, monotone, QM-absorbing".into())
}

fn c3_fixture_pipeline() -> Outcome {
    let path = common::fixture_path("automated_driving.stpa")
        .display()
        .to_string();

    let check = common::cli(&["check", &path]);
    ensure!(
        check.code == 0,
        "check exited {}: {}",
        check.code,
        check.stderr
    );
    ensure!(
        !check.stderr.contains("error["),
        "check reported errors: {}",
        check.stderr
    );

    let hara = common::cli(&["hara", &path]);
    ensure!(hara.code == 0, "hara exited {}: {}", hara.code, hara.stderr);
    ensure!(
        hara.stdout.contains("ASIL C"),
        "HE.1 not rated ASIL C: {}",
        hara.stdout
    );
    let sg1 = hara
        .stdout
        .lines()
        .find(|l| l.starts_with("SG.1"))
        .unwrap_or_default();
    ensure!(
        sg1.contains("must not lose the steering control while driving on a highway"),
        "SG.1 text: {sg1}"
    );

    let gen = common::cli(&[
        "gen-uca",
        &path,
        "--action",
        "trajectory",
        "--vars",
        "road_type",
    ]);
    ensure!(gen.code == 0, "gen-uca exited {}: {}", gen.code, gen.stderr);
    ensure!(
        gen.stdout.lines().count() == 24,
        "gen-uca printed {} lines",
        gen.stdout.lines().count()
    );

    let csc = common::cli(&["gen-csc", &path, "--uca", "UCA-1"]);
    ensure!(csc.code == 0, "gen-csc exited {}", csc.code);
    ensure!(
        csc.stdout.starts_with("csc SC-1 "),
        "derived id: {}",
        csc.stdout
    );
    ensure!(
        csc.stdout
            .contains("must always provide a valid trajectory"),
        "derived SC-1: {}",
        csc.stdout
    );
    let model = common::fixture_model();
    let authored = model
        .cscs
        .iter()
        .find(|c| c.id == "SC-1")
        .map(|c| c.text.as_str())
        .unwrap_or_default();
    ensure!(
        authored.contains("must always provide a valid trajectory"),
        "authored SC-1: {authored}"
    );

    let trace = common::cli(&["trace", &path]);
    ensure!(
        trace.code == 0,
        "trace exited {}: {}",
        trace.code,
        trace.stdout
    );
    ensure!(trace.stdout.contains(" 0 findings"), "{}", trace.stdout);

    for format in ["md", "json"] {
        let report = common::cli(&["report", &path, "--format", format]);
        ensure!(
            report.code == 0 && !report.stdout.is_empty(),
            "report {format} exited {}",
            report.code
        );
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let csv = common::cli(&[
        "report",
        &path,
        "--format",
        "csv",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    ensure!(csv.code == 0, "report csv exited {}", csv.code);
    Ok("check, hara, gen-uca, gen-csc, trace, report: 0 errors, 0 findings".into())
}

fn c4_candidate_count_law() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 100,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = (1usize..=3, proptest::collection::vec(1usize..=5, 0..=4));
    let largest = std::cell::Cell::new(0);
    runner
        .run(&strategy, |(k, sizes)| {
            let model = common::gen::count_law_model(k, &sizes);
            let vars: Vec<String> = (0..sizes.len()).map(|i| format!("v{i}")).collect();
            let per_action = common::oracle::assignments(&sizes).len() * GuideWord::ALL.len();
            let mut total = 0;
            for a in &model.structure.actions {
                let n = generate_uca_candidates(&model, &a.id, &vars)
                    .expect("generation")
                    .len();
                proptest::prop_assert_eq!(n, per_action);
                total += n;
            }
            let law = 4 * k * sizes.iter().product::<usize>();
            proptest::prop_assert_eq!(total, law);
            largest.set(largest.get().max(total));
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!(
        "100 cases, total = 4*k*prod(v) against brute force (largest {})",
        largest.get()
    ))
}

fn c5_item_boundary() -> Outcome {
    let (ok, rejected) = common::oracle::check_item_subsets()?;
    ensure!(ok + rejected == 63, "checked {} subsets", ok + rejected);
    Ok(format!(
        "63 subsets: {ok} connected match the cut, {rejected} rejected as disconnected"
    ))
}

fn round_trip(text: &str) -> Result<(), String> {
    let p = parse(text, "rt.stpa");
    ensure!(
        p.diagnostics.is_empty(),
        "reparse diagnostics {:?}",
        p.diagnostics
    );
    let again = serialize(&p.model);
    ensure!(again == text, "second serialization differs");
    Ok(())
}

fn c6_round_trip() -> Outcome {
    round_trip(&serialize(&common::fixture_model()))?;
    let mut runner = TestRunner::new(Config {
        cases: 50,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&common::gen::model(), |model| {
            round_trip(&serialize(&model)).map_err(proptest::test_runner::TestCaseError::fail)
        })
        .map_err(|e| e.to_string())?;
    Ok("fixture and 50 generated models are byte-identical on reserialization".into())
}

fn c7_seeded_defects() -> Outcome {
    let text = common::fixture_text();
    let cases: [(&str, &[&str], FindingRule); 4] = [
        (
            "classify line",
            &["classify HA.1"],
            FindingRule::HazardNoEvent,
        ),
        // the goal refers to the event and goes with it
        (
            "event",
            &["event HE.1", "goal SG.1"],
            FindingRule::HazardNoEvent,
        ),
        ("CSC", &["csc SC-1"], FindingRule::ConfirmedUcaNoCsc),
        (
            "scenario",
            &["scenario CS.1"],
            FindingRule::ConfirmedUcaNoScenario,
        ),
    ];
    for (name, needles, rule) in cases {
        let seeded = needles
            .iter()
            .fold(text.clone(), |t, n| common::without_declaration(&t, n));
        let p = parse(&seeded, "seeded.stpa");
        ensure!(!p.has_errors(), "{name}: parse errors {:?}", p.diagnostics);
        let rules: Vec<FindingRule> = build_trace_matrix(&p.model)
            .orphans
            .iter()
            .map(|f| f.rule)
            .collect();
        ensure!(
            rules == vec![rule],
            "{name}: findings {rules:?}, expected [{rule}]"
        );
        let (_dir, file) = common::temp_model(&seeded);
        let run = common::cli(&["trace", &file]);
        ensure!(run.code == 2, "{name}: trace exited {}", run.code);
    }
    Ok("classify, event, CSC, scenario each give exactly one finding; trace exits 2".into())
}

fn uca_table(md: &str) -> Result<GuideWordTable, String> {
    let section = md
        .split("\n## Unsafe control actions\n")
        .nth(1)
        .ok_or("no UCA section")?;
    let rows: Vec<&str> = section
        .lines()
        .skip_while(|l| !l.starts_with('|'))
        .take_while(|l| l.starts_with('|'))
        .collect();
    ensure!(rows.len() >= 2, "UCA table has no rows");
    let split = |l: &str| -> Vec<String> {
        l.trim()
            .trim_matches('|')
            .split(" | ")
            .map(|c| c.trim().to_string())
            .collect()
    };
    let header = split(rows[0]);
    let body = rows[2..]
        .iter()
        .map(|r| {
            split(r)[1..]
                .iter()
                .map(|c| {
                    if c == "-" {
                        vec![]
                    } else {
                        c.split(", ").map(String::from).collect()
                    }
                })
                .collect()
        })
        .collect();
    Ok((header, body))
}

fn check_guide_word_table(model: &hazlang::SafetyModel) -> Result<usize, String> {
    let report = emit_report(model, &build_trace_matrix(model), "md").map_err(|e| e.to_string())?;
    let (header, body) = uca_table(report.file("report.md").unwrap_or_default())?;
    let expected = [
        "not providing",
        "providing incorrect",
        "providing at wrong timing/order",
        "stopped too soon/applied too long",
    ];
    ensure!(
        header.len() == 5,
        "header has {} columns: {header:?}",
        header.len()
    );
    let titles: Vec<String> = header[1..].iter().map(|h| h.to_lowercase()).collect();
    ensure!(titles == expected, "guide-word columns {titles:?}");

    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for row in &body {
        ensure!(row.len() == 4, "row with {} guide-word cells", row.len());
        for cell in row {
            for id in cell {
                *seen.entry(id.as_str()).or_default() += 1;
            }
        }
    }
    let confirmed: Vec<&str> = model
        .ucas
        .iter()
        .filter(|u| u.status == UcaStatus::Confirmed)
        .map(|u| u.id.as_str())
        .collect();
    for id in &confirmed {
        ensure!(
            seen.get(id) == Some(&1),
            "{id} appears {} times",
            seen.get(id).copied().unwrap_or(0)
        );
    }
    ensure!(
        seen.len() == confirmed.len(),
        "table lists unconfirmed ids: {seen:?}"
    );
    Ok(confirmed.len())
}

fn c8_guide_word_coverage() -> Outcome {
    let fixture = common::fixture_model();
    let n_fixture = check_guide_word_table(&fixture)?;

    // a denser table: every trajectory candidate confirmed
    let mut dense = fixture.clone();
    let candidates = generate_uca_candidates(&dense, "trajectory", &["road_type", "vehicle_state"])
        .map_err(|e| e.to_string())?;
    for mut u in candidates {
        u.status = UcaStatus::Confirmed;
        u.hazards.insert("HA.1".into());
        dense.ucas.push(u);
    }
    let n_dense = check_guide_word_table(&dense)?;
    Ok(format!("4 columns as enumerated; fixture {n_fixture} and dense {n_dense} confirmed UCAs each in one cell"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 ASIL anchor", c1_asil_anchor, Duration::from_millis(1)),
        (
            "2 ASIL table equivalence",
            c2_asil_table,
            Duration::from_secs(1),
        ),
        (
            "3 fixture pipeline",
            c3_fixture_pipeline,
            Duration::from_secs(1),
        ),
        (
            "4 candidate-count law",
            c4_candidate_count_law,
            Duration::from_secs(5),
        ),
        (
            "5 item-boundary oracle",
            c5_item_boundary,
            Duration::from_secs(1),
        ),
        ("6 round-trip", c6_round_trip, Duration::from_secs(5)),
        (
            "7 seeded-defect traceability",
            c7_seeded_defects,
            Duration::from_secs(1),
        ),
        (
            "8 guide-word coverage",
            c8_guide_word_coverage,
            Duration::MAX,
        ),
    ];
    let mut failed = 0;
    for (name, criterion, limit) in criteria {
        let start = Instant::now();
        let outcome = criterion();
        let elapsed = start.elapsed();
        let bound = if limit == Duration::MAX {
            String::new()
        } else {
            format!(" (limit {limit:?})")
        };
        let line = match outcome {
            Ok(detail) if elapsed <= limit => format!("PASS  {name}: {detail} [{elapsed:.2?}]"),
            Ok(detail) => format!("FAIL  {name}: {detail}, but took {elapsed:.2?}{bound}"),
            Err(why) => format!("FAIL  {name}: {why} [{elapsed:.2?}]"),
        };
        if line.starts_with("FAIL") {
            failed += 1;
        }
        println!("{line}");
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
