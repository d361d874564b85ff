//! Effectiveness metrics for localization rankings and statistics for
//! comparing techniques across a corpus of bugs.
//!
//! Per-case metrics reduce a ranking plus the known-faulty statements to a
//! scalar: the *score* (fraction of the program a programmer does **not**
//! inspect before finding a fault) and the *expense* (the same inspection
//! effort as a percentage of the program). Corpus-level statistics compare
//! paired per-case results of two techniques: win counts, a smoothed odds
//! ratio, and a rank-sum test with normal approximation.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::sbfl::Ranking;
use crate::spectra::StatementId;

/// How well one ranking localized one bug.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectivenessScore {
    /// `1 - inspected/universe`: the saved fraction of the program.
    pub value: f64,
    /// Statements examined before (and including) the first faulty one.
    pub inspected: usize,
    /// Size of the ranked universe.
    pub universe: usize,
}

/// Effort to reach a fault, expressed against fault groups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpenseScore {
    /// Percentage of the universe examined: `inspected/universe * 100`.
    pub expense: f64,
    /// `1 - expense/100`, the score induced by the expense.
    pub score_mult: f64,
    /// Statements examined before reaching the easiest-to-find faulty one.
    pub inspected: usize,
}

/// Scores a ranking against a flat set of faulty statements.
///
/// A bug is found at its easiest-to-reach faulty statement, so the cost is
/// the minimum inspection count over `faulty`; statements outside the ranked
/// universe cannot be found and are skipped. With no faulty statement ranked
/// at all the score is undefined and an error is returned.
pub fn score_from_ranking(ranking: &Ranking, faulty: &[StatementId]) -> Result<EffectivenessScore> {
    let inspected = faulty
        .iter()
        .filter_map(|s| ranking.inspected(s))
        .min()
        .ok_or(Error::NoFaultInUniverse)?;
    let universe = ranking.universe_size();
    Ok(EffectivenessScore {
        value: 1.0 - inspected as f64 / universe as f64,
        inspected,
        universe,
    })
}

/// Scores a ranking against fault *groups* (a group is a set of statements
/// that must be changed together to repair one error).
///
/// Reaching any statement of any group starts the repair, so the expense is
/// driven by the minimum inspection count across all statements of all
/// groups. Groups must be non-empty and at least one statement must be
/// ranked.
pub fn expense_and_mult_score(
    ranking: &Ranking,
    fault_groups: &[Vec<StatementId>],
) -> Result<ExpenseScore> {
    if fault_groups.is_empty() || fault_groups.iter().any(|g| g.is_empty()) {
        return Err(Error::invalid("fault groups must be non-empty"));
    }
    let inspected = fault_groups
        .iter()
        .flatten()
        .filter_map(|s| ranking.inspected(s))
        .min()
        .ok_or(Error::NoFaultInUniverse)?;
    let expense = inspected as f64 / ranking.universe_size() as f64 * 100.0;
    Ok(ExpenseScore {
        expense,
        score_mult: 1.0 - expense / 100.0,
        inspected,
    })
}

/// Smoothing constant added to every cell of the win/loss table.
pub const ODDS_RATIO_RHO: f64 = 0.5;

/// Odds ratio of "technique A succeeds" versus "technique B succeeds" given
/// `a` wins for A and `b` wins for B over the same cases, smoothed by
/// [`ODDS_RATIO_RHO`] so zero cells stay finite.
///
/// Values above 1 favor A, below 1 favor B; `odds_ratio(x, y)` and
/// `odds_ratio(y, x)` are exact reciprocals.
pub fn odds_ratio(a: u64, b: u64) -> f64 {
    odds_ratio_with_rho(a, b, ODDS_RATIO_RHO)
}

/// [`odds_ratio`] with an explicit smoothing constant.
pub fn odds_ratio_with_rho(a: u64, b: u64, rho: f64) -> f64 {
    let a = a as f64;
    let b = b as f64;
    let n = a + b;
    ((a + rho) / (n + rho - a)) / ((b + rho) / (n + rho - b))
}

/// Result of a rank-sum location test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MannWhitney {
    /// The U statistic of the first sample.
    pub u: f64,
    /// Two-sided p-value from the tie-corrected, continuity-corrected normal
    /// approximation. When the variance degenerates (all observations tied)
    /// the samples are indistinguishable and the p-value is 1.
    pub p_value: f64,
}

/// Mann-Whitney U test of whether two samples come from the same
/// distribution.
///
/// Both samples must be non-empty and finite. The U statistic is computed
/// from average ranks (ties share the mean of the positions they span), so
/// it equals the brute-force count of winning pairs plus half the tied
/// pairs.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<MannWhitney> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid(
            "rank-sum test requires two non-empty samples",
        ));
    }
    if a.iter().chain(b).any(|x| !x.is_finite()) {
        return Err(Error::invalid("rank-sum test requires finite samples"));
    }

    let mut pooled: Vec<(f64, bool)> = a
        .iter()
        .map(|&x| (x, true))
        .chain(b.iter().map(|&x| (x, false)))
        .collect();
    pooled.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("samples are finite"));

    // Average ranks over runs of equal values, accumulating the tie
    // correction term as we go.
    let mut rank_sum_a = 0.0;
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i;
        while j < pooled.len() && pooled[j].0 == pooled[i].0 {
            j += 1;
        }
        let run = (j - i) as f64;
        let avg_rank = ((i + 1) + j) as f64 / 2.0;
        rank_sum_a += avg_rank * pooled[i..j].iter().filter(|(_, is_a)| *is_a).count() as f64;
        tie_term += run * run * run - run;
        i = j;
    }

    let na = a.len() as f64;
    let nb = b.len() as f64;
    let n = na + nb;
    let u = rank_sum_a - na * (na + 1.0) / 2.0;
    let mean = na * nb / 2.0;
    let variance = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));

    let p_value = if variance <= 0.0 {
        1.0
    } else {
        let diff = u - mean;
        // Continuity correction: shift half a unit toward the mean. (Note
        // that f64::signum treats +0.0 as positive, so guard the exact tie.)
        let corrected = if diff == 0.0 {
            0.0
        } else {
            diff - 0.5 * diff.signum()
        };
        let z = corrected / variance.sqrt();
        let normal = Normal::new(0.0, 1.0).expect("unit normal");
        (2.0 * (1.0 - normal.cdf(z.abs()))).clamp(0.0, 1.0)
    };

    Ok(MannWhitney { u, p_value })
}

/// Builds the cumulative-frequency curve of inspection counts: for each
/// distinct count, the percentage of cases localized by examining at most
/// that many statements.
///
/// Counts must be at least 1 (a found fault always costs one inspection);
/// an empty input has no curve and is rejected.
pub fn cumulative_frequency(counts: &[usize]) -> Result<Vec<(usize, f64)>> {
    if counts.is_empty() {
        return Err(Error::invalid(
            "cumulative frequency of zero cases is undefined",
        ));
    }
    if counts.contains(&0) {
        return Err(Error::invalid("inspection counts start at 1"));
    }
    let mut sorted = counts.to_vec();
    sorted.sort_unstable();
    let total = sorted.len() as f64;
    let mut curve = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        curve.push((sorted[i], j as f64 / total * 100.0));
        i = j;
    }
    Ok(curve)
}

/// One bug case's paired outcome under two techniques.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasePair {
    /// Statements technique A inspected.
    pub inspected_a: usize,
    /// Statements technique B inspected.
    pub inspected_b: usize,
    /// Technique A's effectiveness score.
    pub score_a: f64,
    /// Technique B's effectiveness score.
    pub score_b: f64,
}

/// Head-to-head statistics of two techniques over shared bug cases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonStats {
    /// Cases where A inspected strictly fewer statements.
    pub wins_a: u64,
    /// Cases where B inspected strictly fewer statements.
    pub wins_b: u64,
    /// Smoothed odds ratio of the win counts (above 1 favors A).
    pub odds_ratio: f64,
    /// U statistic of A's score sample against B's.
    pub u: f64,
    /// Two-sided p-value of the rank-sum test.
    pub p_value: f64,
}

/// Compares two techniques over the bug cases both of them completed.
///
/// A technique wins a case by inspecting strictly fewer statements; ties
/// count for neither side. The rank-sum test is fed the two score samples.
pub fn compare_techniques(pairs: &[CasePair]) -> Result<ComparisonStats> {
    if pairs.is_empty() {
        return Err(Error::invalid(
            "techniques share no successfully evaluated cases to compare",
        ));
    }
    let wins_a = pairs
        .iter()
        .filter(|p| p.inspected_a < p.inspected_b)
        .count() as u64;
    let wins_b = pairs
        .iter()
        .filter(|p| p.inspected_b < p.inspected_a)
        .count() as u64;
    let scores_a: Vec<f64> = pairs.iter().map(|p| p.score_a).collect();
    let scores_b: Vec<f64> = pairs.iter().map(|p| p.score_b).collect();
    let test = mann_whitney_u(&scores_a, &scores_b)?;
    Ok(ComparisonStats {
        wins_a,
        wins_b,
        odds_ratio: odds_ratio(wins_a, wins_b),
        u: test.u,
        p_value: test.p_value,
    })
}
