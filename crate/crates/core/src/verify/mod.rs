//! Empirical verification: the test-function corpus, hypothesis checklists,
//! theorem suites and their CSV reports.

pub mod corpus;
pub mod hypothesis;
pub mod report;
pub mod suites;

pub use corpus::{Corpus, CorpusMember, MemberKind};
pub use hypothesis::{lambda_threshold, Checklist, HypothesisCheck, HypothesisReport};
pub use report::{emit_report, write_ratio_csv, ReportSummary};
pub use suites::{
    aperture_slope, boundedness_ratio, campanato_suite, dyadic_chain, gstar_domination, lemma41_tail_check,
    run_suite, Measure, RatioRow, RatioTable, RowStatus, Section, SuiteId, SuiteParams, SuiteResult, TailCheck,
    TheoremSuite,
};
