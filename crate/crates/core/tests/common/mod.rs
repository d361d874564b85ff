//! Shared helpers for the integration suites: fixture paths, generators for
//! random spectra and dependence graphs, and independent oracles that
//! recompute statistics the slow way.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};
use std::path::PathBuf;

use proptest::prelude::*;

use faultloc::sbfl::FormulaId;
use faultloc::slicing::{DependenceGraph, EdgeKind, SliceRequest};
use faultloc::spectra::{CoverageSpectrum, StatementId, Verdict};

/// Absolute path of the repository's `fixtures/` directory.
pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Absolute path of one fixture file.
pub fn fixture(name: &str) -> PathBuf {
    fixtures_dir().join(name)
}

/// Shorthand statement constructor.
pub fn sid(unit: &str, line: u32) -> StatementId {
    StatementId::new(unit, line).unwrap()
}

/// The `i`-th evaluable formula, wrapping around; lets properties sample the
/// whole formula catalogue from a plain index.
pub fn nth_formula(i: usize) -> FormulaId {
    let all: Vec<FormulaId> = FormulaId::available().collect();
    all[i % all.len()]
}

/// The twelve statements of the `middle` fixture universe, in order.
pub fn middle_universe() -> Vec<StatementId> {
    [3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 15]
        .into_iter()
        .map(|l| sid("middle.c", l))
        .collect()
}

/// Random spectra: 2..=12 statements, 1..=8 tests with arbitrary coverage
/// rows. The first test always fails so every spectrum has a failure to
/// localize; the remaining verdicts are random.
pub fn arb_spectrum() -> impl Strategy<Value = CoverageSpectrum> {
    (2usize..=12)
        .prop_flat_map(|n| {
            let row = proptest::collection::vec(any::<bool>(), n);
            let tests = proptest::collection::vec((row, any::<bool>()), 1..=8);
            (Just(n), tests)
        })
        .prop_map(|(n, rows)| {
            let statements: Vec<StatementId> = (1..=n as u32).map(|l| sid("u.c", l)).collect();
            let tests = rows
                .into_iter()
                .enumerate()
                .map(|(i, (mask, pass))| {
                    let covered = masked(&statements, &mask);
                    let verdict = if i == 0 || !pass {
                        Verdict::Fail
                    } else {
                        Verdict::Pass
                    };
                    (format!("t{}", i + 1), verdict, covered)
                })
                .collect();
            CoverageSpectrum::build(statements, tests).expect("generated spectrum is valid")
        })
}

/// Random dependence graphs: 2..=12 nodes and up to `2n` random edges of
/// random kind. Control self-loops are skipped because the builder rejects
/// them; data self-loops are kept.
pub fn arb_graph() -> impl Strategy<Value = DependenceGraph> {
    (2usize..=12)
        .prop_flat_map(|n| {
            let edges = proptest::collection::vec((0..n, 0..n, any::<bool>()), 0..=2 * n);
            (Just(n), edges)
        })
        .prop_map(|(n, raw)| {
            let nodes: Vec<StatementId> = (1..=n as u32).map(|l| sid("u.c", l)).collect();
            let edges = raw
                .into_iter()
                .filter_map(|(f, t, data)| {
                    let kind = if data {
                        EdgeKind::Data
                    } else {
                        EdgeKind::Control
                    };
                    (f != t || kind == EdgeKind::Data)
                        .then(|| (nodes[f].clone(), nodes[t].clone(), kind))
                })
                .collect();
            DependenceGraph::build(nodes, edges).expect("generated graph is valid")
        })
}

/// A graph plus a slicing criterion and an executed set that contains the
/// criterion, and a second executed set extending the first (for
/// monotonicity checks).
pub fn arb_slice_setup() -> impl Strategy<
    Value = (
        DependenceGraph,
        StatementId,
        Vec<StatementId>,
        Vec<StatementId>,
    ),
> {
    arb_graph()
        .prop_flat_map(|g| {
            let n = g.nodes().len();
            let mask = proptest::collection::vec(any::<bool>(), n);
            let extra = proptest::collection::vec(any::<bool>(), n);
            (Just(g), 0..n, mask, extra)
        })
        .prop_map(|(g, ci, mask, extra)| {
            let criterion = g.nodes()[ci].clone();
            let mut executed = masked(g.nodes(), &mask);
            if !executed.contains(&criterion) {
                executed.push(criterion.clone());
            }
            let mut superset = executed.clone();
            superset.extend(masked(g.nodes(), &extra));
            superset.sort();
            superset.dedup();
            (g, criterion, executed, superset)
        })
}

/// A spectrum and a dependence graph over the same statement universe, plus
/// a slice request derived from the spectrum's failing run. The failing test
/// always covers the criterion.
pub fn arb_hybrid_setup() -> impl Strategy<Value = (CoverageSpectrum, DependenceGraph, SliceRequest)>
{
    (2usize..=12)
        .prop_flat_map(|n| {
            let row = proptest::collection::vec(any::<bool>(), n);
            let tests = proptest::collection::vec((row, any::<bool>()), 1..=6);
            let edges = proptest::collection::vec((0..n, 0..n, any::<bool>()), 0..=2 * n);
            (Just(n), 0..n, tests, edges)
        })
        .prop_map(|(n, ci, mut rows, raw_edges)| {
            let statements: Vec<StatementId> = (1..=n as u32).map(|l| sid("u.c", l)).collect();
            rows[0].0[ci] = true;
            let tests = rows
                .into_iter()
                .enumerate()
                .map(|(i, (mask, pass))| {
                    let covered = masked(&statements, &mask);
                    let verdict = if i == 0 || !pass {
                        Verdict::Fail
                    } else {
                        Verdict::Pass
                    };
                    (format!("t{}", i + 1), verdict, covered)
                })
                .collect();
            let spectrum =
                CoverageSpectrum::build(statements.clone(), tests).expect("valid spectrum");
            let edges = raw_edges
                .into_iter()
                .filter_map(|(f, t, data)| {
                    let kind = if data {
                        EdgeKind::Data
                    } else {
                        EdgeKind::Control
                    };
                    (f != t || kind == EdgeKind::Data)
                        .then(|| (statements[f].clone(), statements[t].clone(), kind))
                })
                .collect();
            let graph = DependenceGraph::build(statements.clone(), edges).expect("valid graph");
            let request =
                SliceRequest::from_failing_run(&spectrum, &graph, &statements[ci], Vec::new())
                    .expect("criterion is covered by the failing test");
            (spectrum, graph, request)
        })
}

fn masked(statements: &[StatementId], mask: &[bool]) -> Vec<StatementId> {
    statements
        .iter()
        .zip(mask)
        .filter(|(_, &m)| m)
        .map(|(s, _)| s.clone())
        .collect()
}

/// Breadth-first distances recomputed from scratch over `graph`'s edge list,
/// expanding only into `allowed` nodes (the start itself is unconditional).
pub fn bfs_oracle(
    graph: &DependenceGraph,
    start: &StatementId,
    allowed: &HashSet<StatementId>,
) -> HashMap<StatementId, usize> {
    let mut successors: HashMap<&StatementId, Vec<&StatementId>> = HashMap::new();
    for (from, to, _) in graph.edges() {
        successors.entry(from).or_default().push(to);
    }
    let mut dist = HashMap::new();
    dist.insert(start.clone(), 0usize);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(cur) = queue.pop_front() {
        let d = dist[&cur];
        for &next in successors.get(&cur).into_iter().flatten() {
            if allowed.contains(next) && !dist.contains_key(next) {
                dist.insert(next.clone(), d + 1);
                queue.push_back(next.clone());
            }
        }
    }
    dist
}

/// The U statistic by exhaustive pair counting: one point per pair the first
/// sample wins, half a point per tie.
pub fn brute_force_u(a: &[f64], b: &[f64]) -> f64 {
    let mut u = 0.0;
    for &x in a {
        for &y in b {
            if x > y {
                u += 1.0;
            } else if x == y {
                u += 0.5;
            }
        }
    }
    u
}

/// Standard normal CDF via a rational approximation of `erf` (absolute error
/// below 1.5e-7), independent of the statistics crate the library uses.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

fn erf(x: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = ((((1.061405429 * t - 1.453152027) * t + 1.421413741) * t - 0.284496736) * t
        + 0.254829592)
        * t;
    sign * (1.0 - poly * (-x * x).exp())
}
