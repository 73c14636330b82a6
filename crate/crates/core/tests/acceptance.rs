//! End-to-end acceptance gate: runs every verification suite and reports
//! one line per criterion. Each criterion aggregates the named checks at
//! their stated tolerances.

use std::time::Instant;

use tangent_harmonics::verify::{run_suite, CheckResult, Suite, VerifyConfig};

const CRITERIA: &[(&str, &str, &[&str])] = &[
    ("01", "exact 3j orthogonality, symmetry phases, and 6j routes", &["01a", "01b", "01c"]),
    ("02", "scalar Gram matrix is 8 pi^2 times the identity", &["02"]),
    ("03", "harmonics match rotation matrix elements", &["03"]),
    ("04", "degree-zero reduction to surface harmonics", &["04"]),
    ("05", "flow operators reproduce eigenvalues and ladders", &["05a", "05b"]),
    ("06", "polar factors satisfy their differential equation", &["06"]),
    ("07", "pointwise products match coupled expansions", &["07a", "07b"]),
    ("08", "recursive and explicit d-tensor constructions agree", &["08"]),
    ("09", "invariant tensors have frozen components and vanish under flows", &[
        "09a", "09b", "09c",
    ]),
    ("10", "transposition and contraction match componentwise operations", &["10a", "10b"]),
    ("11", "closed products match reprojection and pointwise dots", &["11a", "11b"]),
    ("12", "d-tensor Gram matrix is 8 pi^2 times the identity", &["12"]),
    ("13", "vertical differentials match fiber differences", &["13"]),
    ("14", "Finsler metrics, inverses, and emitted degrees", &["14a", "14b", "14c", "14d"]),
];

const INVARIANTS: &[(&str, &str, &[&str])] = &[
    ("d*", "d-tensor algebra invariants", &["d1", "d2", "d3"]),
    ("f*", "Finsler model invariants", &["f1", "f2"]),
    ("g*", "geometry flow invariants", &["g1", "g2", "g3", "g4", "g5", "g6"]),
];

fn describe(checks: &[&CheckResult]) -> String {
    checks
        .iter()
        .map(|c| format!("{} {:.2e} <= {:.2e}", c.id, c.measured, c.tolerance))
        .collect::<Vec<_>>()
        .join("; ")
}

#[test]
fn acceptance() {
    let started = Instant::now();
    let report = run_suite(Suite::All, &VerifyConfig::default());
    let elapsed = started.elapsed();

    let mut failures = Vec::new();
    for (label, description, ids) in CRITERIA.iter().chain(INVARIANTS) {
        let checks: Vec<&CheckResult> = ids
            .iter()
            .map(|id| {
                report
                    .checks
                    .iter()
                    .find(|c| c.id == *id)
                    .unwrap_or_else(|| panic!("check {id} missing from the report"))
            })
            .collect();
        let passed = checks.iter().all(|c| c.passed);
        println!(
            "criterion {label} {}  {description}  ({})",
            if passed { "PASS" } else { "FAIL" },
            describe(&checks)
        );
        if !passed {
            failures.push(*label);
        }
    }
    println!("suite completed in {:.1} s", elapsed.as_secs_f64());

    let expected: usize = CRITERIA.iter().chain(INVARIANTS).map(|(_, _, ids)| ids.len()).sum();
    assert_eq!(report.checks.len(), expected, "unexpected check count in the report");
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
    assert!(elapsed.as_secs_f64() < 300.0, "suite exceeded the five-minute budget");
}
