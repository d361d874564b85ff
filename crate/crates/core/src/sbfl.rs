//! Spectrum-based suspiciousness formulas and statement ranking.
//!
//! Every formula maps a statement's incidence counts `(ef, ep, nf, np)` —
//! plus the suite totals — to a suspiciousness score; ranking then sorts the
//! universe by descending score. Divisions are guarded so that scores stay
//! finite on all inputs: a quotient with zero numerator is defined as `0`,
//! and a positive numerator over a zero denominator divides by a small
//! epsilon instead.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::spectra::{CoverageSpectrum, StatementId, StatementStats, SuiteTotals};

/// Grouping of formulas by provenance of their shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaFamily {
    /// Widely used classics.
    Popular,
    /// Hand-designed formulas.
    HumanGenerated,
    /// Formulas discovered by genetic programming.
    GpEvolved,
    /// Formulas tuned for programs containing a single fault.
    SingleBugOptimal,
}

impl FormulaFamily {
    /// Stable lowercase label used in documentation and reports.
    pub fn label(self) -> &'static str {
        match self {
            FormulaFamily::Popular => "popular",
            FormulaFamily::HumanGenerated => "human-generated",
            FormulaFamily::GpEvolved => "gp-evolved",
            FormulaFamily::SingleBugOptimal => "single-bug-optimal",
        }
    }
}

/// The registered suspiciousness formulas.
///
/// Two of them, [`FormulaId::M9185`] and [`FormulaId::PattSim2`], are
/// registered names whose definitions are not shipped; every scoring entry
/// point reports them as unavailable rather than guessing a definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaId {
    Tarantula,
    Ochiai,
    Jaccard,
    Wong1,
    RusselRao,
    Binary,
    Naish1,
    Naish2,
    DStar2,
    DStar3,
    Gp02,
    Gp03,
    Gp13,
    Gp19,
    M9185,
    Kulczynski2,
    LexOchiai,
    PattSim2,
}

impl FormulaId {
    /// Every registered formula, available or not.
    pub const ALL: [FormulaId; 18] = [
        FormulaId::Tarantula,
        FormulaId::Ochiai,
        FormulaId::Jaccard,
        FormulaId::Wong1,
        FormulaId::RusselRao,
        FormulaId::Binary,
        FormulaId::Naish1,
        FormulaId::Naish2,
        FormulaId::DStar2,
        FormulaId::DStar3,
        FormulaId::Gp02,
        FormulaId::Gp03,
        FormulaId::Gp13,
        FormulaId::Gp19,
        FormulaId::M9185,
        FormulaId::Kulczynski2,
        FormulaId::LexOchiai,
        FormulaId::PattSim2,
    ];

    /// Canonical lowercase name, accepted (case-insensitively, with optional
    /// `_`/`-` separators) by the parser.
    pub fn name(self) -> &'static str {
        match self {
            FormulaId::Tarantula => "tarantula",
            FormulaId::Ochiai => "ochiai",
            FormulaId::Jaccard => "jaccard",
            FormulaId::Wong1 => "wong1",
            FormulaId::RusselRao => "russelrao",
            FormulaId::Binary => "binary",
            FormulaId::Naish1 => "naish1",
            FormulaId::Naish2 => "naish2",
            FormulaId::DStar2 => "dstar2",
            FormulaId::DStar3 => "dstar3",
            FormulaId::Gp02 => "gp02",
            FormulaId::Gp03 => "gp03",
            FormulaId::Gp13 => "gp13",
            FormulaId::Gp19 => "gp19",
            FormulaId::M9185 => "m9185",
            FormulaId::Kulczynski2 => "kulczynski2",
            FormulaId::LexOchiai => "lexochiai",
            FormulaId::PattSim2 => "pattsim2",
        }
    }

    /// The family this formula belongs to.
    pub fn family(self) -> FormulaFamily {
        match self {
            FormulaId::Tarantula | FormulaId::Ochiai | FormulaId::Jaccard => FormulaFamily::Popular,
            FormulaId::Wong1
            | FormulaId::RusselRao
            | FormulaId::Binary
            | FormulaId::Naish1
            | FormulaId::Naish2
            | FormulaId::DStar2
            | FormulaId::DStar3 => FormulaFamily::HumanGenerated,
            FormulaId::Gp02 | FormulaId::Gp03 | FormulaId::Gp13 | FormulaId::Gp19 => {
                FormulaFamily::GpEvolved
            }
            FormulaId::M9185
            | FormulaId::Kulczynski2
            | FormulaId::LexOchiai
            | FormulaId::PattSim2 => FormulaFamily::SingleBugOptimal,
        }
    }

    /// Whether a scoring definition is shipped for this formula.
    pub fn is_available(self) -> bool {
        !matches!(self, FormulaId::M9185 | FormulaId::PattSim2)
    }

    /// The registered formulas that can actually be evaluated.
    pub fn available() -> impl Iterator<Item = FormulaId> {
        Self::ALL.into_iter().filter(|f| f.is_available())
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormulaId {
    type Err = Error;

    /// Accepts canonical names case-insensitively, ignoring `_` and `-`
    /// separators (`DStar2`, `dstar2`, and `d_star_2` all parse alike).
    fn from_str(s: &str) -> Result<Self> {
        let normalized: String = s
            .chars()
            .filter(|c| *c != '_' && *c != '-')
            .collect::<String>()
            .to_ascii_lowercase();
        FormulaId::ALL
            .into_iter()
            .find(|f| f.name() == normalized)
            .ok_or_else(|| Error::invalid(format!("unknown formula `{s}`")))
    }
}

/// A suspiciousness score: a plain value, or a lexicographically compared
/// pair for formulas that rank by one component and break ties with another.
///
/// Pairs are never collapsed to a single number — they order and serialize
/// as pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Score {
    /// Single-valued score.
    Value(f64),
    /// Lexicographic pair: compare the first component, then the second.
    Pair(f64, f64),
}

impl Score {
    /// The comparison key; plain values sort as `(value, 0)`.
    pub fn key(self) -> (f64, f64) {
        match self {
            Score::Value(v) => (v, 0.0),
            Score::Pair(a, b) => (a, b),
        }
    }

    /// True when every component is a finite number.
    pub fn is_finite(self) -> bool {
        match self {
            Score::Value(v) => v.is_finite(),
            Score::Pair(a, b) => a.is_finite() && b.is_finite(),
        }
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Score::Value(v) => write!(f, "{v:.6}"),
            Score::Pair(a, b) => write!(f, "({a},{b:.6})"),
        }
    }
}

/// Epsilon substituted for zero denominators under a positive numerator.
const GUARD_EPSILON: f64 = 1e-9;

/// Division with totality guards: `0` when the numerator is zero, otherwise
/// an epsilon-padded denominator when the denominator is zero.
fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else if den == 0.0 {
        num / (den + GUARD_EPSILON)
    } else {
        num / den
    }
}

/// Scores one statement's counts with `formula`.
///
/// `stats` must be consistent with `totals` (`ef + nf == failing`,
/// `ep + np == passing`); inconsistent inputs are rejected. Returns
/// [`Error::FormulaUnavailable`] for registered-but-undefined formulas, and
/// a finite score in every other case.
pub fn suspiciousness(
    formula: FormulaId,
    stats: &StatementStats,
    totals: SuiteTotals,
) -> Result<Score> {
    if stats.ef + stats.nf != totals.failing || stats.ep + stats.np != totals.passing {
        return Err(Error::invalid(format!(
            "statement counts (ef={}, ep={}, nf={}, np={}) disagree with suite totals \
             (failing={}, passing={})",
            stats.ef, stats.ep, stats.nf, stats.np, totals.failing, totals.passing
        )));
    }
    let ef = f64::from(stats.ef);
    let ep = f64::from(stats.ep);
    let nf = f64::from(stats.nf);
    let np = f64::from(stats.np);
    let failed = f64::from(totals.failing);
    let passed = f64::from(totals.passing);

    let score = match formula {
        FormulaId::Tarantula => {
            let fail_rate = ratio(ef, failed);
            let pass_rate = ratio(ep, passed);
            Score::Value(ratio(fail_rate, fail_rate + pass_rate))
        }
        FormulaId::Ochiai => Score::Value(ratio(ef, (failed * (ef + ep)).sqrt())),
        FormulaId::Jaccard => Score::Value(ratio(ef, failed + ep)),
        FormulaId::Wong1 => Score::Value(ef),
        FormulaId::RusselRao => Score::Value(ratio(ef, ef + nf + ep + np)),
        FormulaId::Binary => Score::Value(if stats.nf == 0 { 1.0 } else { 0.0 }),
        FormulaId::Naish1 => Score::Value(if stats.nf == 0 { np } else { -1.0 }),
        FormulaId::Naish2 => Score::Value(ef - ep / (ep + np + 1.0)),
        FormulaId::DStar2 => Score::Value(ratio(ef.powi(2), ep + nf)),
        FormulaId::DStar3 => Score::Value(ratio(ef.powi(3), ep + nf)),
        FormulaId::Gp02 => Score::Value(2.0 * (ef + np.sqrt()) + ep.sqrt()),
        FormulaId::Gp03 => Score::Value((ef * ef - ep.sqrt()).abs().sqrt()),
        FormulaId::Gp13 => Score::Value(ef * (1.0 + ratio(1.0, 2.0 * ep + ef))),
        FormulaId::Gp19 => Score::Value(ef * (ep - ef + nf - np).abs().sqrt()),
        FormulaId::Kulczynski2 => Score::Value(0.5 * (ratio(ef, ef + nf) + ratio(ef, ef + ep))),
        FormulaId::LexOchiai => Score::Pair(ef, ratio(ef, (failed * (ef + ep)).sqrt())),
        FormulaId::M9185 | FormulaId::PattSim2 => {
            return Err(Error::FormulaUnavailable(formula.name().to_string()))
        }
    };
    debug_assert!(score.is_finite(), "guarded formulas produce finite scores");
    Ok(score)
}

/// Suspiciousness scores for every statement of a spectrum, in universe order.
#[derive(Debug, Clone, PartialEq)]
pub struct SuspiciousnessVector {
    formula: FormulaId,
    entries: Vec<(StatementId, Score)>,
}

impl SuspiciousnessVector {
    /// Builds a vector from externally computed `(statement, score)` pairs,
    /// e.g. to rank scores produced by a custom pipeline. Statements must be
    /// distinct and at least one entry is required.
    pub fn from_entries(formula: FormulaId, entries: Vec<(StatementId, Score)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid(
                "a suspiciousness vector needs at least one entry",
            ));
        }
        let mut seen = std::collections::HashSet::new();
        for (statement, _) in &entries {
            if !seen.insert(statement.clone()) {
                return Err(Error::invalid(format!(
                    "duplicate statement in suspiciousness vector: {statement}"
                )));
            }
        }
        Ok(SuspiciousnessVector { formula, entries })
    }

    /// The formula that produced these scores.
    pub fn formula(&self) -> FormulaId {
        self.formula
    }

    /// `(statement, score)` pairs in the spectrum's universe order.
    pub fn entries(&self) -> &[(StatementId, Score)] {
        &self.entries
    }

    /// The score of one statement, if it belongs to the universe.
    pub fn score_of(&self, s: &StatementId) -> Option<Score> {
        self.entries
            .iter()
            .find(|(stmt, _)| stmt == s)
            .map(|(_, score)| *score)
    }
}

/// Scores every statement in the spectrum with `formula`.
///
/// Localization needs at least one failing test to have anything to explain,
/// so a spectrum whose tests all pass is rejected.
pub fn suspiciousness_vector(
    spectrum: &CoverageSpectrum,
    formula: FormulaId,
) -> Result<SuspiciousnessVector> {
    if spectrum.totals().failing == 0 {
        return Err(Error::invalid(
            "spectrum has no failing test; there is no fault to localize",
        ));
    }
    let totals = spectrum.totals();
    let entries = spectrum
        .statements()
        .iter()
        .zip(spectrum.stats_all())
        .map(|(s, stats)| Ok((s.clone(), suspiciousness(formula, &stats, totals)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuspiciousnessVector { formula, entries })
}

/// How positions in a ranking translate into inspection cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankingPolicy {
    /// Every statement occupies its own position; cost of a statement is its
    /// rank.
    Ordinal,
    /// Tied statements share the rank of the best position in their tier;
    /// inspecting a statement costs one more than the number of strictly
    /// better-ranked statements, and the designated symptom statement (if
    /// any) is exempt from that count because it is already known to the
    /// inspecting programmer.
    ModifiedCompetition {
        /// Statement whose position is never charged as inspection effort.
        symptom: Option<StatementId>,
    },
}

impl RankingPolicy {
    /// Stable lowercase label used in serialized rankings.
    pub fn label(&self) -> &'static str {
        match self {
            RankingPolicy::Ordinal => "ordinal",
            RankingPolicy::ModifiedCompetition { .. } => "modified_competition",
        }
    }
}

/// One ranked statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedEntry {
    statement: StatementId,
    rank: usize,
}

impl RankedEntry {
    /// The ranked statement.
    pub fn statement(&self) -> &StatementId {
        &self.statement
    }

    /// Its 1-based rank. Under a modified-competition policy several entries
    /// may share a rank.
    pub fn rank(&self) -> usize {
        self.rank
    }
}

/// A total order over a statement universe, plus the policy that says how to
/// charge inspection cost against it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    entries: Vec<RankedEntry>,
    policy: RankingPolicy,
}

impl Ranking {
    pub(crate) fn new(entries: Vec<(StatementId, usize)>, policy: RankingPolicy) -> Self {
        debug_assert!(
            entries.windows(2).all(|w| w[0].1 <= w[1].1),
            "ranks are non-decreasing in entry order"
        );
        debug_assert!(entries.first().is_none_or(|e| e.1 == 1));
        Ranking {
            entries: entries
                .into_iter()
                .map(|(statement, rank)| RankedEntry { statement, rank })
                .collect(),
            policy,
        }
    }

    /// Ranked entries, best first.
    pub fn entries(&self) -> &[RankedEntry] {
        &self.entries
    }

    /// Statements in ranked order, best first.
    pub fn order(&self) -> impl Iterator<Item = &StatementId> {
        self.entries.iter().map(|e| &e.statement)
    }

    /// Number of ranked statements.
    pub fn universe_size(&self) -> usize {
        self.entries.len()
    }

    /// The cost-charging policy.
    pub fn policy(&self) -> &RankingPolicy {
        &self.policy
    }

    /// The rank of `s`, if ranked.
    pub fn rank_of(&self, s: &StatementId) -> Option<usize> {
        self.entries
            .iter()
            .find(|e| &e.statement == s)
            .map(|e| e.rank)
    }

    /// How many statements a programmer examines before reaching `s`,
    /// inclusive, under this ranking's policy. `None` if `s` is not ranked.
    ///
    /// Ordinal rankings charge the rank itself. Modified-competition rankings
    /// charge one plus the number of strictly better-ranked statements,
    /// skipping the symptom statement since it is the already-observed
    /// starting point rather than a candidate.
    pub fn inspected(&self, s: &StatementId) -> Option<usize> {
        let rank = self.rank_of(s)?;
        match &self.policy {
            RankingPolicy::Ordinal => Some(rank),
            RankingPolicy::ModifiedCompetition { symptom } => {
                let closer = self
                    .entries
                    .iter()
                    .filter(|e| e.rank < rank && Some(&e.statement) != symptom.as_ref())
                    .count();
                Some(closer + 1)
            }
        }
    }
}

/// Sorts a suspiciousness vector into an ordinal ranking.
///
/// Descending score order; ties break by ascending line number, then by unit
/// label, so equal scores still yield one deterministic total order. Each
/// statement gets a distinct rank `1..=n`.
pub fn rank(vector: &SuspiciousnessVector) -> Ranking {
    let mut items: Vec<(&StatementId, (f64, f64))> = vector
        .entries()
        .iter()
        .map(|(s, score)| (s, score.key()))
        .collect();
    items.sort_by(|(sa, ka), (sb, kb)| {
        kb.partial_cmp(ka)
            .unwrap_or(Ordering::Equal)
            .then_with(|| sa.cmp(sb))
    });
    let entries = items
        .into_iter()
        .enumerate()
        .map(|(i, (s, _))| (s.clone(), i + 1))
        .collect();
    Ranking::new(entries, RankingPolicy::Ordinal)
}

/// The first `n` statements of a ranking (all of them when `n` exceeds the
/// universe size).
pub fn top_n(ranking: &Ranking, n: usize) -> Vec<StatementId> {
    ranking
        .entries()
        .iter()
        .take(n)
        .map(|e| e.statement().clone())
        .collect()
}
