//! Coverage spectra: which statements each test executed, and whether the
//! test passed or failed.
//!
//! A spectrum consists of a *universe* of statements (the ranked population)
//! plus one record per test. From it we derive, for every statement, the four
//! counts that drive suspiciousness formulas: `ef`/`ep` (failing/passing tests
//! that covered the statement) and `nf`/`np` (failing/passing tests that did
//! not).
//!
//! Two interchangeable encodings are supported: a line-oriented text format
//! and a JSON mirror. Parsing either representation and re-serializing it
//! yields a semantically identical spectrum (coverage rows are sets, so the
//! canonical form lists each row sorted and deduplicated).

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifies one source statement as a `(unit, line)` pair.
///
/// `unit` is an opaque source-file label and `line` is a 1-based line number.
/// The rendered form `unit:line` is used as the statement's textual id in all
/// file formats; since a unit label may itself contain `:`, the *last* colon
/// separates unit from line when parsing.
///
/// Ordering is by line number first and unit label second, which is the
/// tie-breaking order used everywhere a deterministic statement order is
/// needed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StatementId {
    unit: String,
    line: u32,
}

impl StatementId {
    /// Builds a statement id, validating both components.
    ///
    /// The unit label must be non-empty and free of whitespace and of the
    /// characters `,`, `"`, and `#`, all of which act as delimiters in the
    /// text formats. The line number must be at least 1.
    pub fn new(unit: impl Into<String>, line: u32) -> Result<Self> {
        let unit = unit.into();
        if unit.is_empty() {
            return Err(Error::invalid("statement unit label is empty"));
        }
        if let Some(bad) = unit
            .chars()
            .find(|c| c.is_whitespace() || matches!(c, ',' | '"' | '#'))
        {
            return Err(Error::invalid(format!(
                "statement unit label `{unit}` contains forbidden character `{bad}`"
            )));
        }
        if line == 0 {
            return Err(Error::invalid(format!(
                "statement line number must be at least 1 (unit `{unit}`)"
            )));
        }
        Ok(StatementId { unit, line })
    }

    /// The source-file label.
    pub fn unit(&self) -> &str {
        &self.unit
    }

    /// The 1-based line number.
    pub fn line(&self) -> u32 {
        self.line
    }
}

impl fmt::Display for StatementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.unit, self.line)
    }
}

impl FromStr for StatementId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (unit, line) = s.rsplit_once(':').ok_or_else(|| {
            Error::invalid(format!("statement id `{s}` is missing a `:line` suffix"))
        })?;
        let line: u32 = line.parse().map_err(|_| {
            Error::invalid(format!("statement id `{s}` has a malformed line number"))
        })?;
        StatementId::new(unit, line)
    }
}

impl PartialOrd for StatementId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for StatementId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.line, &self.unit).cmp(&(other.line, &other.unit))
    }
}

/// Outcome of one test execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// The test passed.
    Pass,
    /// The test failed.
    Fail,
}

impl Verdict {
    /// The canonical textual form (`PASS` or `FAIL`).
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        }
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "PASS" => Ok(Verdict::Pass),
            "FAIL" => Ok(Verdict::Fail),
            other => Err(Error::invalid(format!(
                "verdict must be PASS or FAIL, got `{other}`"
            ))),
        }
    }
}

/// One test execution: its id, verdict, and the set of covered statements.
///
/// Coverage is kept in canonical form: sorted by [`StatementId`] order and
/// deduplicated, so equality on records is set equality on coverage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestRecord {
    id: String,
    verdict: Verdict,
    covered: Vec<StatementId>,
}

impl TestRecord {
    /// The test's identifier (unique within a spectrum).
    pub fn id(&self) -> &str {
        &self.id
    }

    /// Whether the test passed or failed.
    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    /// Statements this test covered, in canonical `(line, unit)` order.
    pub fn covered(&self) -> &[StatementId] {
        &self.covered
    }
}

/// Per-statement incidence counts relative to one spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StatementStats {
    /// Failing tests that covered the statement.
    pub ef: u32,
    /// Passing tests that covered the statement.
    pub ep: u32,
    /// Failing tests that did not cover the statement.
    pub nf: u32,
    /// Passing tests that did not cover the statement.
    pub np: u32,
}

/// Suite-level totals: how many tests failed and how many passed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteTotals {
    /// Total failing tests.
    pub failing: u32,
    /// Total passing tests.
    pub passing: u32,
}

/// A complete coverage spectrum: statement universe plus per-test records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageSpectrum {
    statements: Vec<StatementId>,
    index: HashMap<StatementId, usize>,
    tests: Vec<TestRecord>,
    totals: SuiteTotals,
}

/// JSON mirror of the text format.
#[derive(Serialize, Deserialize)]
struct SpectrumDoc {
    statements: Vec<String>,
    tests: Vec<TestDoc>,
}

#[derive(Serialize, Deserialize)]
struct TestDoc {
    id: String,
    verdict: String,
    covered: Vec<String>,
}

impl CoverageSpectrum {
    /// Assembles and validates a spectrum from already-parsed parts.
    ///
    /// Validation rules, shared by both parsers:
    /// - the universe must be non-empty and free of duplicate ids;
    /// - test ids must be non-empty and unique;
    /// - every covered statement must belong to the universe.
    ///
    /// Coverage rows are treated as sets: duplicates within a row collapse.
    pub fn build(
        statements: Vec<StatementId>,
        tests: Vec<(String, Verdict, Vec<StatementId>)>,
    ) -> Result<Self> {
        if statements.is_empty() {
            return Err(Error::invalid("spectrum declares no statements"));
        }
        let mut index = HashMap::with_capacity(statements.len());
        for (i, s) in statements.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::invalid(format!(
                    "duplicate statement `{s}` in universe"
                )));
            }
        }

        let mut seen_ids = HashSet::new();
        let mut records = Vec::with_capacity(tests.len());
        let mut totals = SuiteTotals {
            failing: 0,
            passing: 0,
        };
        for (id, verdict, mut covered) in tests {
            if id.is_empty() {
                return Err(Error::invalid("test id is empty"));
            }
            if !seen_ids.insert(id.clone()) {
                return Err(Error::invalid(format!("duplicate test id `{id}`")));
            }
            for s in &covered {
                if !index.contains_key(s) {
                    return Err(Error::UnknownStatement(format!(
                        "{s} (covered by test `{id}` but not in the universe)"
                    )));
                }
            }
            covered.sort();
            covered.dedup();
            match verdict {
                Verdict::Fail => totals.failing += 1,
                Verdict::Pass => totals.passing += 1,
            }
            records.push(TestRecord {
                id,
                verdict,
                covered,
            });
        }

        Ok(CoverageSpectrum {
            statements,
            index,
            tests: records,
            totals,
        })
    }

    /// Parses the line-oriented text format.
    ///
    /// ```text
    /// # comment                                (anywhere; rest of line ignored)
    /// statements unit:line[,unit:line...]      (exactly one, before any test)
    /// test <id> <PASS|FAIL> [unit:line[,...]]  (coverage omitted => empty row)
    /// ```
    ///
    /// Statement lists are single whitespace-free tokens; blank lines are
    /// skipped. A test line may omit its coverage field entirely to express a
    /// test that covered nothing.
    pub fn parse_text(input: &str) -> Result<Self> {
        let mut statements: Option<Vec<StatementId>> = None;
        let mut tests = Vec::new();

        for (lineno, raw) in input.lines().enumerate() {
            let lineno = lineno + 1;
            let line = match raw.split_once('#') {
                Some((before, _)) => before.trim(),
                None => raw.trim(),
            };
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let keyword = fields.next().expect("non-empty line has a first field");
            match keyword {
                "statements" => {
                    if statements.is_some() {
                        return Err(Error::parse(lineno, "duplicate `statements` header"));
                    }
                    let list = fields.next().ok_or_else(|| {
                        Error::parse(lineno, "`statements` header lists no statements")
                    })?;
                    if fields.next().is_some() {
                        return Err(Error::parse(
                            lineno,
                            "unexpected extra field after statement list (the list must contain no spaces)",
                        ));
                    }
                    statements =
                        Some(parse_statement_list(list).map_err(|e| {
                            Error::parse(lineno, format!("bad statement list: {e}"))
                        })?);
                }
                "test" => {
                    if statements.is_none() {
                        return Err(Error::parse(
                            lineno,
                            "`test` record appears before the `statements` header",
                        ));
                    }
                    let id = fields
                        .next()
                        .ok_or_else(|| Error::parse(lineno, "`test` record is missing an id"))?;
                    let verdict = fields.next().ok_or_else(|| {
                        Error::parse(lineno, "`test` record is missing a verdict")
                    })?;
                    let verdict: Verdict = verdict
                        .parse()
                        .map_err(|e| Error::parse(lineno, format!("{e}")))?;
                    let covered = match fields.next() {
                        Some(list) => parse_statement_list(list)
                            .map_err(|e| Error::parse(lineno, format!("bad coverage list: {e}")))?,
                        None => Vec::new(),
                    };
                    if fields.next().is_some() {
                        return Err(Error::parse(
                            lineno,
                            "unexpected extra field after coverage list (the list must contain no spaces)",
                        ));
                    }
                    tests.push((id.to_string(), verdict, covered));
                }
                other => {
                    return Err(Error::parse(
                        lineno,
                        format!("expected `statements` or `test`, got `{other}`"),
                    ));
                }
            }
        }

        let statements =
            statements.ok_or_else(|| Error::invalid("spectrum has no `statements` header"))?;
        CoverageSpectrum::build(statements, tests)
    }

    /// Parses the JSON mirror of the text format.
    ///
    /// ```json
    /// {
    ///   "statements": ["middle.c:3", "middle.c:4"],
    ///   "tests": [ {"id": "t1", "verdict": "PASS", "covered": ["middle.c:3"]} ]
    /// }
    /// ```
    pub fn parse_json(input: &str) -> Result<Self> {
        let doc: SpectrumDoc = serde_json::from_str(input)?;
        let statements = doc
            .statements
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<_>>>()?;
        let tests = doc
            .tests
            .into_iter()
            .map(|t| {
                let verdict: Verdict = t.verdict.parse()?;
                let covered = t
                    .covered
                    .iter()
                    .map(|s| s.parse())
                    .collect::<Result<Vec<_>>>()?;
                Ok((t.id, verdict, covered))
            })
            .collect::<Result<Vec<_>>>()?;
        CoverageSpectrum::build(statements, tests)
    }

    /// Loads a spectrum from disk, choosing the parser by file extension:
    /// `.json` selects the JSON mirror, anything else the text format.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        if path.extension().is_some_and(|ext| ext == "json") {
            Self::parse_json(&text)
        } else {
            Self::parse_text(&text)
        }
    }

    /// Serializes to the canonical text form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("statements ");
        out.push_str(&join_ids(&self.statements));
        out.push('\n');
        for t in &self.tests {
            out.push_str("test ");
            out.push_str(&t.id);
            out.push(' ');
            out.push_str(t.verdict.as_str());
            if !t.covered.is_empty() {
                out.push(' ');
                out.push_str(&join_ids(&t.covered));
            }
            out.push('\n');
        }
        out
    }

    /// Serializes to the canonical JSON form (pretty-printed, trailing newline).
    pub fn to_json(&self) -> String {
        let doc = SpectrumDoc {
            statements: self.statements.iter().map(|s| s.to_string()).collect(),
            tests: self
                .tests
                .iter()
                .map(|t| TestDoc {
                    id: t.id.clone(),
                    verdict: t.verdict.as_str().to_string(),
                    covered: t.covered.iter().map(|s| s.to_string()).collect(),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("spectrum doc serializes");
        s.push('\n');
        s
    }

    /// The statement universe, in declaration order.
    pub fn statements(&self) -> &[StatementId] {
        &self.statements
    }

    /// Number of statements in the universe.
    pub fn universe_size(&self) -> usize {
        self.statements.len()
    }

    /// Whether `s` belongs to the universe.
    pub fn contains(&self, s: &StatementId) -> bool {
        self.index.contains_key(s)
    }

    /// All test records, in declaration order.
    pub fn tests(&self) -> &[TestRecord] {
        &self.tests
    }

    /// Suite totals (failing and passing test counts).
    pub fn totals(&self) -> SuiteTotals {
        self.totals
    }

    /// The first failing test in declaration order, if any.
    pub fn first_failing(&self) -> Option<&TestRecord> {
        self.tests.iter().find(|t| t.verdict == Verdict::Fail)
    }

    /// Incidence counts for a single statement.
    pub fn stats(&self, s: &StatementId) -> Result<StatementStats> {
        let idx = *self
            .index
            .get(s)
            .ok_or_else(|| Error::UnknownStatement(s.to_string()))?;
        Ok(self.stats_all()[idx])
    }

    /// Incidence counts for every statement, parallel to [`Self::statements`].
    ///
    /// Guaranteed relations: `ef + nf == totals.failing` and
    /// `ep + np == totals.passing` for every entry, and summing `ef + ep`
    /// across entries equals the total number of coverage incidences.
    pub fn stats_all(&self) -> Vec<StatementStats> {
        let mut ef = vec![0u32; self.statements.len()];
        let mut ep = vec![0u32; self.statements.len()];
        for t in &self.tests {
            let bucket: &mut Vec<u32> = match t.verdict {
                Verdict::Fail => &mut ef,
                Verdict::Pass => &mut ep,
            };
            for s in &t.covered {
                bucket[self.index[s]] += 1;
            }
        }
        ef.into_iter()
            .zip(ep)
            .map(|(ef, ep)| StatementStats {
                ef,
                ep,
                nf: self.totals.failing - ef,
                np: self.totals.passing - ep,
            })
            .collect()
    }
}

fn parse_statement_list(list: &str) -> Result<Vec<StatementId>> {
    list.split(',').map(|tok| tok.parse()).collect()
}

fn join_ids(ids: &[StatementId]) -> String {
    ids.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
