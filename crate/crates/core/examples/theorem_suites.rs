//! Runs a few boundedness suites and writes the CSV report.
//!
//! Run with `cargo run --release --example theorem_suites [out_dir]`.

use intrinsic_lp::grid::Grid;
use intrinsic_lp::verify::{emit_report, run_suite, SuiteId, SuiteParams};
use std::path::PathBuf;

fn main() -> intrinsic_lp::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("ilp_suites"));
    let grid = Grid::interval(-1.0, 1.0, 129)?;
    let params = SuiteParams::default();

    let mut results = Vec::new();
    for id in [SuiteId::T21, SuiteId::CorG, SuiteId::T23, SuiteId::T41] {
        let r = run_suite(id, &grid, &params)?;
        let failed: Vec<_> = r.hypotheses.failures().map(|c| c.check.clone()).collect();
        println!(
            "{:8} rows {:3} max ratio {:.4} hypotheses {}",
            id.as_str(),
            r.table.rows.len(),
            r.max_ratio(),
            if failed.is_empty() { "ok".to_string() } else { failed.join(",") }
        );
        results.push(r);
    }
    let summary = emit_report(&out, &results)?;
    println!("report in {} (all passed: {})", out.display(), summary.all_passed());
    Ok(())
}
