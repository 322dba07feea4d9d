//! CSV reports for suite runs. Numbers are written with 17 significant
//! digits so reruns can be compared byte for byte.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::suites::{RatioRow, SuiteResult};
use crate::error::Result;
use crate::grid::fmt17;

pub const RATIO_HEADER: &str = "suite,function,norm_in,norm_out,ratio,pass";
pub const HYPOTHESIS_HEADER: &str = "suite,check,param,fitted_constant,pass";
pub const SUMMARY_HEADER: &str = "suite,rows,max_ratio,status,corpus_hash";

/// Blank for values that were not computed.
fn num(v: f64) -> String {
    if v.is_nan() { String::new() } else { fmt17(v) }
}

pub fn write_ratio_csv<W: Write>(mut w: W, rows: &[RatioRow]) -> Result<()> {
    writeln!(w, "{RATIO_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.suite,
            r.function,
            num(r.norm_in),
            num(r.norm_out),
            num(r.ratio),
            r.status.as_str()
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportSummary {
    /// (suite, max ratio, passed) in run order.
    pub suites: Vec<(String, f64, bool)>,
}

impl ReportSummary {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.2)
    }

    pub fn max_ratio(&self) -> f64 {
        self.suites.iter().map(|s| s.1).fold(0.0, f64::max)
    }
}

fn status(r: &SuiteResult) -> &'static str {
    if !r.ran() {
        "skipped_hypothesis"
    } else if r.passed() {
        "pass"
    } else {
        "fail"
    }
}

/// Writes `ratios.csv`, `hypotheses.csv` and `summary.csv` into `dir`.
pub fn emit_report(dir: &Path, results: &[SuiteResult]) -> Result<ReportSummary> {
    fs::create_dir_all(dir)?;
    let rows: Vec<RatioRow> = results.iter().flat_map(|r| r.table.rows.iter().cloned()).collect();
    write_ratio_csv(fs::File::create(dir.join("ratios.csv"))?, &rows)?;

    let mut h = fs::File::create(dir.join("hypotheses.csv"))?;
    writeln!(h, "{HYPOTHESIS_HEADER}")?;
    for r in results {
        for c in &r.hypotheses.checks {
            writeln!(h, "{},{},{},{},{}", r.id, c.check, c.param, fmt17(c.constant), c.pass)?;
        }
    }

    let mut s = fs::File::create(dir.join("summary.csv"))?;
    writeln!(s, "{SUMMARY_HEADER}")?;
    let mut summary = ReportSummary { suites: Vec::new() };
    for r in results {
        writeln!(s, "{},{},{},{},{}", r.id, r.table.rows.len(), fmt17(r.max_ratio()), status(r), r.corpus_hash)?;
        summary.suites.push((r.id.to_string(), r.max_ratio(), r.passed()));
    }
    Ok(summary)
}
