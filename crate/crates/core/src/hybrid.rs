//! Hybrid localization: inspect a few top-scored statements first, then walk
//! the dependence slice.
//!
//! Suspiciousness formulas and slices fail in different ways — a formula can
//! bury the fault under coincidentally-correlated statements, while a slice
//! can be large. The hybrid ranking hedges: the `n` most suspicious
//! statements occupy the first positions; if the fault is not among them,
//! inspection continues through the approximate dynamic slice in distance
//! order, and finally through whatever the slice missed.

use crate::error::Result;
use crate::sbfl::{rank, suspiciousness_vector, top_n, FormulaId, Ranking};
use crate::slicing::{approx_dynamic_slice, ranked_with_prefix, DependenceGraph, SliceRequest};
use crate::spectra::CoverageSpectrum;

/// Parameters of the hybrid technique: how many top-scored statements to
/// take, and which formula scores them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HybridConfig {
    /// Number of leading formula-ranked statements inspected before the
    /// slice takes over.
    pub n: usize,
    /// Formula that produces the leading statements.
    pub formula: FormulaId,
}

impl Default for HybridConfig {
    /// Two formula-ranked statements scored by `kulczynski2`.
    fn default() -> Self {
        HybridConfig {
            n: 2,
            formula: FormulaId::Kulczynski2,
        }
    }
}

/// Builds the hybrid ranking over the spectrum's whole statement universe.
///
/// The first `min(n, universe)` positions are the formula ranking's head,
/// each with its own ordinal rank. The remaining statements follow in slice
/// order — distance tiers sharing a rank, then non-slice statements as
/// singletons — exactly as in a pure slice ranking, minus the statements the
/// head already placed.
///
/// Degenerate cases keep the two ingredient techniques as end points of the
/// spectrum of configurations: with `n >= universe` the result *is* the
/// formula's ordinal ranking, and with `n == 0` it coincides with the pure
/// slice ranking.
///
/// The policy is modified-competition. The slicing criterion counts as the
/// symptom (exempt from inspection cost) unless the formula head already
/// claimed it — a head position is a deliberate recommendation, and reading
/// one is always charged.
pub fn hybrid_ranking(
    config: &HybridConfig,
    spectrum: &CoverageSpectrum,
    graph: &DependenceGraph,
    request: &SliceRequest,
) -> Result<Ranking> {
    let vector = suspiciousness_vector(spectrum, config.formula)?;
    let ordinal = rank(&vector);
    // Slice inputs are validated even when a large `n` means the slice
    // cannot influence the order: a hybrid request with a bad criterion or
    // executed set is an input error regardless of configuration.
    let slice = approx_dynamic_slice(graph, request)?;

    if config.n >= spectrum.universe_size() {
        return Ok(ordinal);
    }

    let head = top_n(&ordinal, config.n);
    let symptom = if head.contains(request.criterion()) {
        None
    } else {
        Some(request.criterion().clone())
    };
    Ok(ranked_with_prefix(
        &head,
        &slice,
        spectrum.statements(),
        symptom,
    ))
}
