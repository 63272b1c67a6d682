//! Independent reference computations used as test oracles.

use std::collections::BTreeSet;

use hazlang::dsl::parse;
use hazlang::model::{AsilRating, ControllabilityClass, ExposureClass, SeverityClass};
use hazlang::stpa::derive_item_definition;

pub type AsilCell = (
    SeverityClass,
    ExposureClass,
    ControllabilityClass,
    AsilRating,
);

/// The hand-transcribed determination table, one entry per S/E/C cell.
pub fn asil_table() -> Vec<AsilCell> {
    let text = std::fs::read_to_string(super::fixture_path("asil_table.txt")).unwrap();
    let mut cells = Vec::new();
    for line in text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
    {
        let cols: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(cols.len(), 6, "{line}");
        let s: SeverityClass = cols[0].parse().unwrap();
        let e: ExposureClass = cols[1].parse().unwrap();
        for (c, rating) in ControllabilityClass::ALL.iter().copied().zip(&cols[2..]) {
            cells.push((s, e, c, rating.parse().unwrap()));
        }
    }
    cells
}

/// Every full assignment over the given domain sizes, by odometer counting.
pub fn assignments(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if sizes.contains(&0) {
        return out;
    }
    let mut digits = vec![0; sizes.len()];
    loop {
        out.push(digits.clone());
        let mut i = sizes.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < sizes[i] {
                break;
            }
            digits[i] = 0;
        }
    }
}

pub const SIX_NODES: &str = r#"
structure {
  controller P "planner"
  controller M "motion"
  actuator S "steering"
  process V "vehicle"
  sensor W "wheel sensor"
  external B "backend"
  action plan from P to M "plan"
  action turn from M to S "turn"
  action move from S to V "move"
  feedback spin from V to W "spin"
  feedback speed from W to M "speed"
  feedback telemetry from W to P "telemetry"
  feedback map from B to P "map"
}
"#;

const NODES: [&str; 6] = ["P", "M", "S", "V", "W", "B"];
const EDGES: [(&str, &str, &str); 7] = [
    ("plan", "P", "M"),
    ("turn", "M", "S"),
    ("move", "S", "V"),
    ("spin", "V", "W"),
    ("speed", "W", "M"),
    ("telemetry", "W", "P"),
    ("map", "B", "P"),
];

/// Weak connectivity via union-find over the edges inside the subset.
fn connected(subset: &BTreeSet<String>) -> bool {
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let idx = |n: &str| NODES.iter().position(|x| *x == n).unwrap();
    let mut parent: Vec<usize> = (0..NODES.len()).collect();
    for (_, a, b) in EDGES {
        if subset.contains(a) && subset.contains(b) {
            let (ra, rb) = (find(&mut parent, idx(a)), find(&mut parent, idx(b)));
            parent[ra] = rb;
        }
    }
    let roots: BTreeSet<usize> = subset.iter().map(|n| find(&mut parent, idx(n))).collect();
    roots.len() == 1
}

/// Every edge with exactly one endpoint inside, split by direction.
fn cut(subset: &BTreeSet<String>) -> (BTreeSet<String>, BTreeSet<String>) {
    let mut inbound = BTreeSet::new();
    let mut outbound = BTreeSet::new();
    for (id, a, b) in EDGES {
        match (subset.contains(a), subset.contains(b)) {
            (false, true) => {
                inbound.insert(id.to_string());
            }
            (true, false) => {
                outbound.insert(id.to_string());
            }
            _ => {}
        }
    }
    (inbound, outbound)
}

/// Derives an item for all 63 non-empty subsets of the six-node structure
/// and compares each against the oracle. Returns (connected, rejected)
/// counts or the first mismatch.
pub fn check_item_subsets() -> Result<(usize, usize), String> {
    let p = parse(SIX_NODES, "six.stpa");
    if !p.diagnostics.is_empty() {
        return Err(format!("{:?}", p.diagnostics));
    }
    let model = p.model;
    let (mut ok, mut rejected) = (0, 0);
    for mask in 1u32..(1 << NODES.len()) {
        let subset: BTreeSet<String> = NODES
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, n)| n.to_string())
            .collect();
        let result = derive_item_definition(&model, "IT", "item", &subset, None);
        match (connected(&subset), result) {
            (true, Ok(def)) => {
                let (inbound, outbound) = cut(&subset);
                if def.boundary_in != inbound
                    || def.boundary_out != outbound
                    || def.members != subset
                {
                    return Err(format!(
                        "{subset:?}: got {def:?}, expected in {inbound:?} out {outbound:?}"
                    ));
                }
                ok += 1;
            }
            (false, Err(e)) if e.code() == "DISCONNECTED" => rejected += 1,
            (c, r) => return Err(format!("{subset:?}: connected={c}, got {r:?}")),
        }
    }
    Ok((ok, rejected))
}
