//! Serialization of rankings, evaluation reports, and comparisons.
//!
//! Two sibling encodings everywhere: a human-oriented TSV form and a JSON
//! form for tooling. Both are deterministic functions of their inputs. JSON
//! carries raw floating-point values; TSV formats scores to six decimals and
//! percentages to two (rounding half to even), which is where a reader stops
//! caring.

use serde::Serialize;

use crate::corpus::{CaseStatus, EvaluationReport, StratumStats};
use crate::metrics::{ComparisonStats, EffectivenessScore};
use crate::sbfl::{Ranking, RankingPolicy, Score, SuspiciousnessVector};

/// Renders a ranking as TSV: a `rank unit line score` table, plus trailing
/// comment lines with the effectiveness metrics when they were computed.
///
/// The score column prints the suspiciousness value behind each position; a
/// ranking not produced by scores (a pure slice ranking) prints `-`.
pub fn ranking_to_tsv(
    ranking: &Ranking,
    scores: Option<&SuspiciousnessVector>,
    effectiveness: Option<&EffectivenessScore>,
) -> String {
    let mut out = String::from("rank\tunit\tline\tscore\n");
    for entry in ranking.entries() {
        let s = entry.statement();
        let score = scores
            .and_then(|v| v.score_of(s))
            .map_or_else(|| "-".to_string(), |sc| sc.to_string());
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            entry.rank(),
            s.unit(),
            s.line(),
            score
        ));
    }
    if let Some(eff) = effectiveness {
        out.push_str(&format!("# inspected: {}\n", eff.inspected));
        out.push_str(&format!("# score: {:.6}\n", eff.value));
    }
    out
}

#[derive(Serialize)]
struct RankingJson<'a> {
    technique: &'a str,
    policy: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    symptom: Option<String>,
    universe: usize,
    entries: Vec<RankingEntryJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    effectiveness: Option<EffectivenessJson>,
}

#[derive(Serialize)]
struct RankingEntryJson {
    rank: usize,
    unit: String,
    line: u32,
    score: serde_json::Value,
}

#[derive(Serialize)]
struct EffectivenessJson {
    inspected: usize,
    universe: usize,
    score: f64,
}

/// Renders a ranking as pretty-printed JSON (trailing newline included).
///
/// Plain scores serialize as numbers, lexicographic pairs as two-element
/// arrays, and score-less positions as `null`.
pub fn ranking_to_json(
    technique: &str,
    ranking: &Ranking,
    scores: Option<&SuspiciousnessVector>,
    effectiveness: Option<&EffectivenessScore>,
) -> String {
    let symptom = match ranking.policy() {
        RankingPolicy::ModifiedCompetition { symptom } => symptom.as_ref().map(|s| s.to_string()),
        RankingPolicy::Ordinal => None,
    };
    let entries = ranking
        .entries()
        .iter()
        .map(|entry| {
            let s = entry.statement();
            let score = match scores.and_then(|v| v.score_of(s)) {
                Some(Score::Value(x)) => serde_json::json!(x),
                Some(Score::Pair(a, b)) => serde_json::json!([a, b]),
                None => serde_json::Value::Null,
            };
            RankingEntryJson {
                rank: entry.rank(),
                unit: s.unit().to_string(),
                line: s.line(),
                score,
            }
        })
        .collect();
    let doc = RankingJson {
        technique,
        policy: ranking.policy().label(),
        symptom,
        universe: ranking.universe_size(),
        entries,
        effectiveness: effectiveness.map(|eff| EffectivenessJson {
            inspected: eff.inspected,
            universe: eff.universe,
            score: eff.value,
        }),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("ranking doc serializes");
    s.push('\n');
    s
}

/// Renders an evaluation report as pretty-printed JSON (trailing newline
/// included).
pub fn evaluation_to_json(report: &EvaluationReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn opt_num<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn opt_score(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.6}"))
}

fn opt_percent(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.2}"))
}

/// Keeps free-form text from breaking the TSV table shape.
fn tsv_safe(text: &str) -> String {
    text.replace(['\t', '\n'], " ")
}

fn push_stratum_tsv(out: &mut String, heading: &str, stats: &StratumStats) {
    out.push_str(&format!("# techniques: {heading}\n"));
    out.push_str("technique\tcases\tfailures\tmean_score\n");
    for t in &stats.techniques {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            t.technique,
            t.cases,
            t.failures,
            opt_score(t.mean_score)
        ));
    }
    out.push_str(&format!("# comparisons: {heading}\n"));
    out.push_str("technique_a\ttechnique_b\tcases\twins_a\twins_b\todds_ratio\tu\tp_value\n");
    for c in &stats.comparisons {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            c.technique_a,
            c.technique_b,
            c.cases,
            c.wins_a,
            c.wins_b,
            opt_score(c.odds_ratio),
            opt_score(c.u),
            opt_score(c.p_value)
        ));
    }
    out.push_str(&format!("# cumulative_frequency: {heading}\n"));
    out.push_str("technique\tinspected\tpercent\n");
    for t in &stats.techniques {
        for p in &t.cumulative_frequency {
            out.push_str(&format!(
                "{}\t{}\t{:.2}\n",
                t.technique, p.inspected, p.percent
            ));
        }
    }
}

/// Renders an evaluation report as TSV: the per-case table first, then the
/// summary blocks of the overall statistics and of every stratum.
pub fn evaluation_to_tsv(report: &EvaluationReport) -> String {
    let mut out = String::from("# cases\n");
    out.push_str(
        "bug\ttechnique\tstatus\tinspected\tuniverse\tscore\texpense\tscore_mult\terror_type\tfault_count\terror\n",
    );
    for r in &report.cases {
        let status = match r.status {
            CaseStatus::Ok => "ok",
            CaseStatus::Failed => "failed",
        };
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.bug,
            r.technique,
            status,
            opt_num(r.inspected),
            opt_num(r.universe),
            opt_score(r.score),
            opt_percent(r.expense),
            opt_score(r.score_mult),
            r.error_type.label(),
            r.fault_count,
            r.error.as_deref().map_or_else(|| "-".to_string(), tsv_safe),
        ));
    }
    push_stratum_tsv(&mut out, "overall", &report.aggregate.overall);
    for named in &report.aggregate.by_error_type {
        push_stratum_tsv(
            &mut out,
            &format!("error_type={}", named.stratum),
            &named.stats,
        );
    }
    for named in &report.aggregate.by_fault_count {
        push_stratum_tsv(
            &mut out,
            &format!("fault_count={}", named.stratum),
            &named.stats,
        );
    }
    out
}

#[derive(Serialize)]
struct ComparisonJson<'a> {
    technique_a: &'a str,
    technique_b: &'a str,
    wins_a: u64,
    wins_b: u64,
    odds_ratio: f64,
    u: f64,
    p_value: f64,
}

/// Renders a head-to-head comparison as pretty-printed JSON (trailing
/// newline included).
pub fn comparison_to_json(technique_a: &str, technique_b: &str, stats: &ComparisonStats) -> String {
    let doc = ComparisonJson {
        technique_a,
        technique_b,
        wins_a: stats.wins_a,
        wins_b: stats.wins_b,
        odds_ratio: stats.odds_ratio,
        u: stats.u,
        p_value: stats.p_value,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("comparison doc serializes");
    s.push('\n');
    s
}

/// Renders a head-to-head comparison as a one-row TSV table.
pub fn comparison_to_tsv(technique_a: &str, technique_b: &str, stats: &ComparisonStats) -> String {
    let mut out =
        String::from("technique_a\ttechnique_b\twins_a\twins_b\todds_ratio\tu\tp_value\n");
    out.push_str(&format!(
        "{}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6}\n",
        technique_a,
        technique_b,
        stats.wins_a,
        stats.wins_b,
        stats.odds_ratio,
        stats.u,
        stats.p_value
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sbfl::{rank, suspiciousness_vector, FormulaId};
    use crate::spectra::CoverageSpectrum;

    fn spectrum() -> CoverageSpectrum {
        CoverageSpectrum::parse_text(
            "statements a.c:1,a.c:2,a.c:3\n\
             test p PASS a.c:1,a.c:2\n\
             test f FAIL a.c:1,a.c:3\n",
        )
        .unwrap()
    }

    #[test]
    fn ranking_tsv_shape() {
        let sp = spectrum();
        let vector = suspiciousness_vector(&sp, FormulaId::Tarantula).unwrap();
        let ranking = rank(&vector);
        let faulty = vec![crate::spectra::StatementId::new("a.c", 3).unwrap()];
        let eff = crate::metrics::score_from_ranking(&ranking, &faulty).unwrap();
        let tsv = ranking_to_tsv(&ranking, Some(&vector), Some(&eff));
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines[0], "rank\tunit\tline\tscore");
        assert_eq!(lines[1], "1\ta.c\t3\t1.000000");
        assert_eq!(lines[4], "# inspected: 1");
        assert!(lines[5].starts_with("# score: 0.6666"));
    }

    #[test]
    fn ranking_json_scores_and_nulls() {
        let sp = spectrum();
        let vector = suspiciousness_vector(&sp, FormulaId::LexOchiai).unwrap();
        let ranking = rank(&vector);
        let json = ranking_to_json("lexochiai", &ranking, Some(&vector), None);
        let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(doc["technique"], "lexochiai");
        assert_eq!(doc["policy"], "ordinal");
        assert!(doc.get("symptom").is_none());
        // Pair scores serialize as two-element arrays.
        assert!(doc["entries"][0]["score"].is_array());
        // Without a vector the score column is null.
        let bare = ranking_to_json("slice", &ranking, None, None);
        let doc: serde_json::Value = serde_json::from_str(&bare).unwrap();
        assert!(doc["entries"][0]["score"].is_null());
    }

    #[test]
    fn comparison_tsv_is_one_row() {
        let stats = ComparisonStats {
            wins_a: 2,
            wins_b: 1,
            odds_ratio: 5.0 / 3.0,
            u: 4.5,
            p_value: 0.7,
        };
        let tsv = comparison_to_tsv("a", "b", &stats);
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1], "a\tb\t2\t1\t1.666667\t4.500000\t0.700000");
    }
}
