//! Acceptance criteria, one line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use cotype_zeta::verify::{Suite, DEFAULT_MAX_WORK};

const CRITERIA: [(u32, &str, Suite); 9] = [
    (1, "symbolic identities", Suite::Identities),
    (
        2,
        "series coefficients vs closed-lattice counts",
        Suite::Coefficients,
    ),
    (3, "g-formulas inside pi o^n", Suite::GFormulas),
    (
        4,
        "flag parametrization vs Hermite enumeration",
        Suite::Parametrization,
    ),
    (5, "S closed form vs measure oracle", Suite::SLemma),
    (6, "flag combinatorics", Suite::Flags),
    (7, "Liu recursion and correspondences", Suite::Recursion),
    (8, "ring independence", Suite::RingIndependence),
    (9, "poles and abscissa bounds", Suite::Poles),
];

fn main() -> ExitCode {
    let mut failed = 0;
    for (k, name, suite) in CRITERIA {
        let t = Instant::now();
        let (ok, detail) = match suite.run(DEFAULT_MAX_WORK) {
            Ok(rep) => {
                let bad: Vec<String> = rep
                    .checks
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| format!("{}: {}", c.label, c.detail))
                    .collect();
                let detail = if bad.is_empty() {
                    format!("{} checks", rep.checks.len())
                } else {
                    bad.join(" | ")
                };
                (bad.is_empty(), detail)
            }
            Err(e) => (false, format!("error: {e}")),
        };
        failed += !ok as u32;
        let mark = if ok { "PASS" } else { "FAIL" };
        println!(
            "criterion {k} [{mark}] {name}: {detail} ({:.1?})",
            t.elapsed()
        );
    }
    if failed == 0 {
        println!("acceptance: all {} criteria passed", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria failed", CRITERIA.len());
        ExitCode::FAILURE
    }
}
