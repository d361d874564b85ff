//! Bug-case corpora and the evaluation harness.
//!
//! A corpus manifest lists bug cases — each pointing at a spectrum file, a
//! dependence graph file, a slicing criterion, and the statements that must
//! be changed to repair the program — plus the techniques to run. Evaluation
//! applies every technique to every case, records a score or an honest
//! failure per `(case, technique)` pair, and aggregates: per-technique
//! summaries, head-to-head comparisons, and the same statistics stratified
//! by error type and by fault count.
//!
//! Everything in the report lives in ordered containers and is produced by a
//! sequential pass over the manifest, so evaluating the same corpus twice
//! yields byte-identical serialized reports.

use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hybrid::{hybrid_ranking, HybridConfig};
use crate::metrics::{
    compare_techniques, cumulative_frequency, expense_and_mult_score, score_from_ranking, CasePair,
    ComparisonStats,
};
use crate::sbfl::{rank, suspiciousness_vector, FormulaId, Ranking};
use crate::slicing::{approx_dynamic_slice, slice_ranking, DependenceGraph, SliceRequest};
use crate::spectra::{CoverageSpectrum, StatementId};

/// Whether a bug is an organically introduced defect or a seeded mutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ErrorType {
    /// Seeded or mutated defect.
    #[serde(rename = "ARTIFICIAL")]
    Artificial,
    /// Defect that occurred in real development.
    #[serde(rename = "REAL")]
    Real,
}

impl ErrorType {
    /// The canonical uppercase label.
    pub fn label(self) -> &'static str {
        match self {
            ErrorType::Artificial => "ARTIFICIAL",
            ErrorType::Real => "REAL",
        }
    }
}

/// One buggy program version to localize.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BugCase {
    /// Unique case identifier.
    pub id: String,
    /// Path to the coverage spectrum file.
    pub spectrum_path: PathBuf,
    /// Path to the dependence graph file.
    pub graph_path: PathBuf,
    /// Statement where the failure is observed; the slicing criterion.
    pub criterion: StatementId,
    /// Fault groups: each group is a set of statements changed together to
    /// repair one error. Groups and their members must be non-empty.
    pub fault_groups: Vec<Vec<StatementId>>,
    /// Provenance of the defect.
    pub error_type: ErrorType,
    /// Number of distinct errors in this version (defaults to the number of
    /// fault groups when the manifest omits it).
    pub fault_count: u32,
}

/// A parsed technique request, before defaults and overrides are applied.
///
/// The textual forms are a formula name (`tarantula`), the literal keyword
/// `formula` (meaning "whatever formula is configured"), `slice`, or
/// `hybrid` with optional colon-separated parameters, e.g.
/// `hybrid:n=2:formula=tarantula`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TechniqueSpec {
    /// A formula ranking; `None` defers the formula choice to overrides or
    /// the default.
    Formula(Option<FormulaId>),
    /// Pure slice ranking.
    Slice,
    /// Hybrid ranking with optionally pinned parameters.
    Hybrid {
        /// Head size, if pinned by the technique label.
        n: Option<usize>,
        /// Head formula, if pinned by the technique label.
        formula: Option<FormulaId>,
    },
}

/// Externally supplied parameter overrides. They beat parameters pinned in a
/// technique label, which in turn beat the built-in defaults
/// (`kulczynski2`, `n = 2`). An explicit formula *name* used as a technique
/// is not a parameter and is never overridden.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TechniqueOverrides {
    /// Replacement for deferred/pinned formula parameters.
    pub formula: Option<FormulaId>,
    /// Replacement for deferred/pinned hybrid head sizes.
    pub n: Option<usize>,
}

impl TechniqueSpec {
    /// Parses a technique label string.
    pub fn parse(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let base = parts.next().expect("split yields at least one part");
        let mut params = Vec::new();
        for part in parts {
            let (key, value) = part.split_once('=').ok_or_else(|| {
                Error::invalid(format!(
                    "technique parameter `{part}` is not of the form key=value"
                ))
            })?;
            params.push((key.trim(), value.trim()));
        }

        match base {
            "slice" | "formula" => {
                if let Some((key, _)) = params.first() {
                    return Err(Error::invalid(format!(
                        "technique `{base}` takes no parameters, got `{key}`"
                    )));
                }
                Ok(if base == "slice" {
                    TechniqueSpec::Slice
                } else {
                    TechniqueSpec::Formula(None)
                })
            }
            "hybrid" => {
                let mut n = None;
                let mut formula = None;
                for (key, value) in params {
                    match key {
                        "n" => {
                            if n.is_some() {
                                return Err(Error::invalid("duplicate hybrid parameter `n`"));
                            }
                            n = Some(value.parse::<usize>().map_err(|_| {
                                Error::invalid(format!(
                                    "hybrid parameter n must be a non-negative integer, got `{value}`"
                                ))
                            })?);
                        }
                        "formula" => {
                            if formula.is_some() {
                                return Err(Error::invalid("duplicate hybrid parameter `formula`"));
                            }
                            formula = Some(value.parse::<FormulaId>()?);
                        }
                        other => {
                            return Err(Error::invalid(format!(
                                "unknown hybrid parameter `{other}` (expected n or formula)"
                            )));
                        }
                    }
                }
                Ok(TechniqueSpec::Hybrid { n, formula })
            }
            name => {
                if let Some((key, _)) = params.first() {
                    return Err(Error::invalid(format!(
                        "technique `{name}` takes no parameters, got `{key}`"
                    )));
                }
                let formula = name.parse::<FormulaId>().map_err(|_| {
                    Error::invalid(format!(
                        "unknown technique `{name}` (expected a formula name, `formula`, `slice`, or `hybrid`)"
                    ))
                })?;
                Ok(TechniqueSpec::Formula(Some(formula)))
            }
        }
    }

    /// Applies overrides and defaults, yielding a runnable technique.
    pub fn resolve(&self, overrides: &TechniqueOverrides) -> Technique {
        match *self {
            TechniqueSpec::Formula(Some(f)) => Technique::Formula(f),
            TechniqueSpec::Formula(None) => {
                Technique::Formula(overrides.formula.unwrap_or(FormulaId::Kulczynski2))
            }
            TechniqueSpec::Slice => Technique::Slice,
            TechniqueSpec::Hybrid { n, formula } => Technique::Hybrid(HybridConfig {
                n: overrides.n.or(n).unwrap_or(2),
                formula: overrides
                    .formula
                    .or(formula)
                    .unwrap_or(FormulaId::Kulczynski2),
            }),
        }
    }
}

/// A fully resolved technique, ready to run against a bug case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Technique {
    /// Rank by a suspiciousness formula.
    Formula(FormulaId),
    /// Rank by the approximate dynamic slice.
    Slice,
    /// Formula head, then the slice.
    Hybrid(HybridConfig),
}

impl Technique {
    /// Stable label used throughout reports; hybrid labels carry their full
    /// configuration so differently parameterized runs stay distinguishable.
    pub fn label(&self) -> String {
        match self {
            Technique::Formula(f) => f.name().to_string(),
            Technique::Slice => "slice".to_string(),
            Technique::Hybrid(cfg) => format!("hybrid:n={}:formula={}", cfg.n, cfg.formula),
        }
    }
}

/// A loaded corpus manifest: bug cases plus requested techniques.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusManifest {
    /// Bug cases in manifest order.
    pub cases: Vec<BugCase>,
    /// Technique specs in manifest order.
    pub techniques: Vec<TechniqueSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestDoc {
    techniques: Vec<String>,
    cases: Vec<CaseDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CaseDoc {
    id: String,
    spectrum: String,
    graph: String,
    criterion: String,
    faulty: Vec<Vec<String>>,
    error_type: ErrorType,
    #[serde(default)]
    fault_count: Option<u32>,
}

impl CorpusManifest {
    /// Parses a manifest document; relative `spectrum`/`graph` paths are
    /// resolved against `base_dir`.
    pub fn parse_json(input: &str, base_dir: &Path) -> Result<Self> {
        let doc: ManifestDoc = serde_json::from_str(input)?;
        if doc.cases.is_empty() {
            return Err(Error::invalid("manifest lists no bug cases"));
        }
        if doc.techniques.is_empty() {
            return Err(Error::invalid("manifest lists no techniques"));
        }
        let techniques = doc
            .techniques
            .iter()
            .map(|s| TechniqueSpec::parse(s))
            .collect::<Result<Vec<_>>>()?;

        let mut seen_ids = HashSet::new();
        let mut cases = Vec::with_capacity(doc.cases.len());
        for c in doc.cases {
            if c.id.is_empty() {
                return Err(Error::invalid("bug case id is empty"));
            }
            if !seen_ids.insert(c.id.clone()) {
                return Err(Error::invalid(format!("duplicate bug case id `{}`", c.id)));
            }
            if c.faulty.is_empty() || c.faulty.iter().any(|g| g.is_empty()) {
                return Err(Error::invalid(format!(
                    "bug case `{}` must list at least one non-empty fault group",
                    c.id
                )));
            }
            let fault_groups = c
                .faulty
                .iter()
                .map(|g| g.iter().map(|s| s.parse()).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let fault_count = match c.fault_count {
                Some(0) => {
                    return Err(Error::invalid(format!(
                        "bug case `{}` declares fault_count 0",
                        c.id
                    )))
                }
                Some(n) => n,
                None => fault_groups.len() as u32,
            };
            cases.push(BugCase {
                id: c.id,
                spectrum_path: base_dir.join(c.spectrum),
                graph_path: base_dir.join(c.graph),
                criterion: c.criterion.parse()?,
                fault_groups,
                error_type: c.error_type,
                fault_count,
            });
        }
        Ok(CorpusManifest { cases, techniques })
    }

    /// Loads a manifest file; relative case paths resolve against the
    /// manifest's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse_json(&text, base)
    }
}

/// Outcome status of one `(case, technique)` evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseStatus {
    /// The technique produced a ranking and the fault was scored.
    Ok,
    /// The technique could not be applied; see the record's error.
    Failed,
}

/// One `(case, technique)` evaluation result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    /// Bug case id.
    pub bug: String,
    /// Technique label.
    pub technique: String,
    /// Whether the evaluation succeeded.
    pub status: CaseStatus,
    /// Failure description when `status` is `failed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Statements inspected to reach the easiest faulty statement.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inspected: Option<usize>,
    /// Size of the ranked universe.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub universe: Option<usize>,
    /// `1 - inspected/universe`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<f64>,
    /// `inspected/universe * 100`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expense: Option<f64>,
    /// `1 - expense/100`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score_mult: Option<f64>,
    /// The case's error type (copied for stratification).
    pub error_type: ErrorType,
    /// The case's fault count (copied for stratification).
    pub fault_count: u32,
}

/// One point of a cumulative-frequency curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// Inspection-count threshold.
    pub inspected: usize,
    /// Percentage of cases localized within the threshold.
    pub percent: f64,
}

/// Summary of one technique over one stratum of cases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TechniqueStats {
    /// Technique label.
    pub technique: String,
    /// Cases attempted.
    pub cases: usize,
    /// Cases that failed to evaluate.
    pub failures: usize,
    /// Mean score over successful cases, absent when none succeeded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_score: Option<f64>,
    /// Cumulative-frequency curve of inspection counts over successful
    /// cases.
    pub cumulative_frequency: Vec<CurvePoint>,
}

/// Head-to-head record of two techniques over one stratum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRecord {
    /// First technique label.
    pub technique_a: String,
    /// Second technique label.
    pub technique_b: String,
    /// Cases both techniques evaluated successfully.
    pub cases: usize,
    /// Cases where `technique_a` inspected strictly fewer statements.
    pub wins_a: u64,
    /// Cases where `technique_b` inspected strictly fewer statements.
    pub wins_b: u64,
    /// Smoothed odds ratio of the win counts; absent without shared cases.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub odds_ratio: Option<f64>,
    /// Rank-sum U statistic over the paired score samples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    /// Two-sided p-value of the rank-sum test.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_value: Option<f64>,
}

/// Technique summaries and pairwise comparisons for one stratum of cases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratumStats {
    /// One summary per technique, in report technique order.
    pub techniques: Vec<TechniqueStats>,
    /// One record per unordered technique pair, in technique order.
    pub comparisons: Vec<ComparisonRecord>,
}

/// A stratum with its grouping key (an error type or a fault count).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedStratum {
    /// The grouping key's label.
    pub stratum: String,
    /// The stratum's statistics.
    #[serde(flatten)]
    pub stats: StratumStats,
}

/// All aggregated statistics of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    /// Statistics over every case.
    pub overall: StratumStats,
    /// Statistics per error type, labels sorted.
    pub by_error_type: Vec<NamedStratum>,
    /// Statistics per fault count, counts ascending.
    pub by_fault_count: Vec<NamedStratum>,
}

/// The full outcome of evaluating a corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    /// Resolved technique labels, in evaluation order.
    pub techniques: Vec<String>,
    /// One record per `(case, technique)` pair, case-major.
    pub cases: Vec<CaseRecord>,
    /// Aggregated statistics.
    pub aggregate: Aggregate,
}

impl EvaluationReport {
    /// Parses a report previously serialized as JSON.
    pub fn from_json(input: &str) -> Result<Self> {
        Ok(serde_json::from_str(input)?)
    }

    /// Loads a JSON report file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::from_json(&text)
    }
}

struct CaseMetrics {
    inspected: usize,
    universe: usize,
    score: f64,
    expense: f64,
    score_mult: f64,
}

/// Runs one technique against one loaded case.
fn run_one(
    technique: &Technique,
    case: &BugCase,
    spectrum: &CoverageSpectrum,
    graph: &mut Option<std::result::Result<DependenceGraph, String>>,
) -> Result<CaseMetrics> {
    let flat: Vec<StatementId> = case.fault_groups.iter().flatten().cloned().collect();
    for s in &flat {
        if !spectrum.contains(s) {
            return Err(Error::UnknownStatement(format!(
                "{s} (faulty but not in the statement universe)"
            )));
        }
    }

    let ranking: Ranking = match technique {
        Technique::Formula(f) => rank(&suspiciousness_vector(spectrum, *f)?),
        Technique::Slice | Technique::Hybrid(_) => {
            let loaded = graph.get_or_insert_with(|| {
                DependenceGraph::load(&case.graph_path).map_err(|e| e.to_string())
            });
            let g = match loaded {
                Ok(g) => g,
                Err(msg) => return Err(Error::invalid(msg.clone())),
            };
            let request =
                SliceRequest::from_failing_run(spectrum, g, &case.criterion, flat.clone())?;
            match technique {
                Technique::Slice => {
                    slice_ranking(&approx_dynamic_slice(g, &request)?, spectrum.statements())
                }
                Technique::Hybrid(cfg) => hybrid_ranking(cfg, spectrum, g, &request)?,
                Technique::Formula(_) => unreachable!("outer match covers formulas"),
            }
        }
    };

    let eff = score_from_ranking(&ranking, &flat)?;
    let exp = expense_and_mult_score(&ranking, &case.fault_groups)?;
    Ok(CaseMetrics {
        inspected: eff.inspected,
        universe: eff.universe,
        score: eff.value,
        expense: exp.expense,
        score_mult: exp.score_mult,
    })
}

/// Evaluates every technique against every case.
///
/// Case-level problems (unreadable files, missing failing test, unavailable
/// formula, ...) become `failed` records rather than aborting the run, so
/// every `(case, technique)` pair appears exactly once in the result.
/// Corpus-level problems — an empty case or technique list, or two specs
/// resolving to the same label — are errors.
pub fn evaluate_corpus(
    cases: &[BugCase],
    specs: &[TechniqueSpec],
    overrides: &TechniqueOverrides,
) -> Result<EvaluationReport> {
    if cases.is_empty() {
        return Err(Error::invalid("corpus contains no bug cases"));
    }
    if specs.is_empty() {
        return Err(Error::invalid("no techniques requested"));
    }
    let techniques: Vec<Technique> = specs.iter().map(|s| s.resolve(overrides)).collect();
    let labels: Vec<String> = techniques.iter().map(Technique::label).collect();
    let mut seen = HashSet::new();
    for label in &labels {
        if !seen.insert(label.as_str()) {
            return Err(Error::invalid(format!(
                "techniques resolve to duplicate label `{label}`"
            )));
        }
    }

    let mut records = Vec::with_capacity(cases.len() * techniques.len());
    for case in cases {
        let spectrum = CoverageSpectrum::load(&case.spectrum_path).map_err(|e| e.to_string());
        let mut graph: Option<std::result::Result<DependenceGraph, String>> = None;
        for (technique, label) in techniques.iter().zip(&labels) {
            let outcome = match &spectrum {
                Ok(sp) => run_one(technique, case, sp, &mut graph).map_err(|e| e.to_string()),
                Err(msg) => Err(msg.clone()),
            };
            let record = match outcome {
                Ok(m) => CaseRecord {
                    bug: case.id.clone(),
                    technique: label.clone(),
                    status: CaseStatus::Ok,
                    error: None,
                    inspected: Some(m.inspected),
                    universe: Some(m.universe),
                    score: Some(m.score),
                    expense: Some(m.expense),
                    score_mult: Some(m.score_mult),
                    error_type: case.error_type,
                    fault_count: case.fault_count,
                },
                Err(msg) => CaseRecord {
                    bug: case.id.clone(),
                    technique: label.clone(),
                    status: CaseStatus::Failed,
                    error: Some(msg),
                    inspected: None,
                    universe: None,
                    score: None,
                    expense: None,
                    score_mult: None,
                    error_type: case.error_type,
                    fault_count: case.fault_count,
                },
            };
            records.push(record);
        }
    }

    let refs: Vec<&CaseRecord> = records.iter().collect();
    let overall = build_stratum(&labels, &refs);

    let mut error_types: Vec<ErrorType> = records.iter().map(|r| r.error_type).collect();
    error_types.sort();
    error_types.dedup();
    let by_error_type = error_types
        .into_iter()
        .map(|et| {
            let subset: Vec<&CaseRecord> = refs
                .iter()
                .copied()
                .filter(|r| r.error_type == et)
                .collect();
            NamedStratum {
                stratum: et.label().to_string(),
                stats: build_stratum(&labels, &subset),
            }
        })
        .collect();

    let mut fault_counts: Vec<u32> = records.iter().map(|r| r.fault_count).collect();
    fault_counts.sort_unstable();
    fault_counts.dedup();
    let by_fault_count = fault_counts
        .into_iter()
        .map(|fc| {
            let subset: Vec<&CaseRecord> = refs
                .iter()
                .copied()
                .filter(|r| r.fault_count == fc)
                .collect();
            NamedStratum {
                stratum: fc.to_string(),
                stats: build_stratum(&labels, &subset),
            }
        })
        .collect();

    Ok(EvaluationReport {
        techniques: labels,
        cases: records,
        aggregate: Aggregate {
            overall,
            by_error_type,
            by_fault_count,
        },
    })
}

/// Convenience wrapper: evaluate a manifest with its own technique list.
pub fn evaluate_manifest(
    manifest: &CorpusManifest,
    overrides: &TechniqueOverrides,
) -> Result<EvaluationReport> {
    evaluate_corpus(&manifest.cases, &manifest.techniques, overrides)
}

fn build_stratum(labels: &[String], records: &[&CaseRecord]) -> StratumStats {
    let techniques = labels
        .iter()
        .map(|label| {
            let recs: Vec<&CaseRecord> = records
                .iter()
                .copied()
                .filter(|r| &r.technique == label)
                .collect();
            let failures = recs
                .iter()
                .filter(|r| r.status == CaseStatus::Failed)
                .count();
            let scores: Vec<f64> = recs.iter().filter_map(|r| r.score).collect();
            let inspected: Vec<usize> = recs.iter().filter_map(|r| r.inspected).collect();
            let mean_score = if scores.is_empty() {
                None
            } else {
                Some(scores.iter().sum::<f64>() / scores.len() as f64)
            };
            let curve = if inspected.is_empty() {
                Vec::new()
            } else {
                cumulative_frequency(&inspected)
                    .expect("successful cases have positive inspection counts")
                    .into_iter()
                    .map(|(inspected, percent)| CurvePoint { inspected, percent })
                    .collect()
            };
            TechniqueStats {
                technique: label.clone(),
                cases: recs.len(),
                failures,
                mean_score,
                cumulative_frequency: curve,
            }
        })
        .collect();

    let mut comparisons = Vec::new();
    for (i, a) in labels.iter().enumerate() {
        for b in &labels[i + 1..] {
            let pairs = paired_outcomes(records, a, b);
            let record = match compare_techniques(&pairs) {
                Ok(stats) => ComparisonRecord {
                    technique_a: a.clone(),
                    technique_b: b.clone(),
                    cases: pairs.len(),
                    wins_a: stats.wins_a,
                    wins_b: stats.wins_b,
                    odds_ratio: Some(stats.odds_ratio),
                    u: Some(stats.u),
                    p_value: Some(stats.p_value),
                },
                Err(_) => ComparisonRecord {
                    technique_a: a.clone(),
                    technique_b: b.clone(),
                    cases: 0,
                    wins_a: 0,
                    wins_b: 0,
                    odds_ratio: None,
                    u: None,
                    p_value: None,
                },
            };
            comparisons.push(record);
        }
    }

    StratumStats {
        techniques,
        comparisons,
    }
}

/// Pairs the successful outcomes of two techniques by bug id, in case order.
fn paired_outcomes(records: &[&CaseRecord], a: &str, b: &str) -> Vec<CasePair> {
    let ok_of = |label: &str| -> Vec<&CaseRecord> {
        records
            .iter()
            .copied()
            .filter(|r| r.technique == label && r.status == CaseStatus::Ok)
            .collect()
    };
    let b_by_bug: HashMap<&str, &CaseRecord> =
        ok_of(b).into_iter().map(|r| (r.bug.as_str(), r)).collect();
    ok_of(a)
        .into_iter()
        .filter_map(|ra| {
            b_by_bug.get(ra.bug.as_str()).map(|rb| CasePair {
                inspected_a: ra.inspected.expect("ok records carry inspected"),
                inspected_b: rb.inspected.expect("ok records carry inspected"),
                score_a: ra.score.expect("ok records carry score"),
                score_b: rb.score.expect("ok records carry score"),
            })
        })
        .collect()
}

/// Recomputes the head-to-head statistics of two techniques from a report.
///
/// Both labels must appear in the report, and the techniques must share at
/// least one successfully evaluated case.
pub fn compare_report(
    report: &EvaluationReport,
    technique_a: &str,
    technique_b: &str,
) -> Result<ComparisonStats> {
    for t in [technique_a, technique_b] {
        if !report.techniques.iter().any(|l| l == t) {
            return Err(Error::invalid(format!(
                "technique `{t}` is not in the report (present: {})",
                report.techniques.join(", ")
            )));
        }
    }
    let refs: Vec<&CaseRecord> = report.cases.iter().collect();
    let pairs = paired_outcomes(&refs, technique_a, technique_b);
    compare_techniques(&pairs)
}
