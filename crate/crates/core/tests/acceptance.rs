//! One line per acceptance criterion, followed by its measurements.
//!
//! Criterion 7 is expected to fail: its eigenmeasure tolerance is not
//! reachable by the prescribed weighted average at N = 40 (see README).
//! Every other criterion must pass.

use slitherkit::suite::{eigenmeasure_error, run_all};
use slitherkit::Status;

const EXPECTED_FAILURES: [u8; 1] = [7];

#[test]
fn acceptance() {
    let results = run_all();
    for c in &results {
        println!("{c}");
        for m in &c.measurements {
            println!("    {m}");
        }
    }
    let errs: Vec<String> = [40, 80, 160, 320]
        .iter()
        .map(|&n| format!("N = {n}: {:.3e}", eigenmeasure_error(n).unwrap()))
        .collect();
    println!("eigenmeasure angular error by N: {}", errs.join(", "));
    for c in &results {
        let expected = if EXPECTED_FAILURES.contains(&c.id) { Status::Violation } else { Status::Pass };
        assert_eq!(c.status, expected, "criterion {}: {:?}", c.id, c.measurements);
    }
}
