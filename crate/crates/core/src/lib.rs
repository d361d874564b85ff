//! Statement-level fault localization toolkit.
//!
//! Given a test suite's coverage spectrum and a program's dependence graph,
//! this crate ranks statements by how likely they are to hold the fault, and
//! measures how good such rankings are across a corpus of known bugs.
//!
//! The pieces:
//!
//! - [`spectra`]: coverage spectra (statement universe + per-test coverage
//!   and verdicts) with text and JSON encodings.
//! - [`sbfl`]: suspiciousness formulas over incidence counts, and ordinal
//!   ranking of whole universes.
//! - [`slicing`]: backward dependence graphs, static and approximate dynamic
//!   slices, and distance-tiered slice rankings.
//! - [`hybrid`]: "inspect the formula's top picks, then walk the slice" —
//!   the combination of the two ranking styles.
//! - [`metrics`]: per-case effectiveness scores and corpus-level comparison
//!   statistics (win odds ratios, rank-sum tests, cumulative-frequency
//!   curves).
//! - [`corpus`]: bug-case manifests and the evaluation harness that turns a
//!   corpus into a deterministic report.
//! - [`report`]: TSV and JSON renderings of rankings and reports.
//!
//! # Example
//!
//! ```
//! use faultloc::{rank, suspiciousness_vector, CoverageSpectrum, FormulaId};
//!
//! let spectrum = CoverageSpectrum::parse_text(
//!     "statements m.c:1,m.c:2,m.c:3\n\
//!      test t1 PASS m.c:1,m.c:2\n\
//!      test t2 FAIL m.c:1,m.c:3\n",
//! )?;
//! let vector = suspiciousness_vector(&spectrum, FormulaId::Ochiai)?;
//! let ranking = rank(&vector);
//! // m.c:3 is covered only by the failing test: most suspicious.
//! assert_eq!(ranking.entries()[0].statement().to_string(), "m.c:3");
//! # Ok::<(), faultloc::Error>(())
//! ```

pub mod corpus;
pub mod error;
pub mod hybrid;
pub mod metrics;
pub mod report;
pub mod sbfl;
pub mod slicing;
pub mod spectra;

pub use corpus::{
    compare_report, evaluate_corpus, evaluate_manifest, Aggregate, BugCase, CaseRecord, CaseStatus,
    ComparisonRecord, CorpusManifest, CurvePoint, ErrorType, EvaluationReport, NamedStratum,
    StratumStats, Technique, TechniqueOverrides, TechniqueSpec, TechniqueStats,
};
pub use error::{Error, Result};
pub use hybrid::{hybrid_ranking, HybridConfig};
pub use metrics::{
    compare_techniques, cumulative_frequency, expense_and_mult_score, mann_whitney_u, odds_ratio,
    odds_ratio_with_rho, score_from_ranking, CasePair, ComparisonStats, EffectivenessScore,
    ExpenseScore, MannWhitney,
};
pub use report::{
    comparison_to_json, comparison_to_tsv, evaluation_to_json, evaluation_to_tsv, ranking_to_json,
    ranking_to_tsv,
};
pub use sbfl::{
    rank, suspiciousness, suspiciousness_vector, top_n, FormulaFamily, FormulaId, RankedEntry,
    Ranking, RankingPolicy, Score, SuspiciousnessVector,
};
pub use slicing::{
    approx_dynamic_slice, slice_ranking, static_slice, DependenceGraph, EdgeKind, Slice, SliceKind,
    SliceRequest,
};
pub use spectra::{
    CoverageSpectrum, StatementId, StatementStats, SuiteTotals, TestRecord, Verdict,
};
