//! Backward dependence graphs and approximate dynamic slicing.
//!
//! Nodes are statements; a directed edge `s -> s'` records that `s` depends
//! on `s'` (through data flow or a control decision), so following edges
//! forward walks *backward* through the computation that fed a statement. A
//! static slice from a criterion statement is everything reachable that way;
//! the approximate dynamic slice restricts the walk to statements that the
//! failing execution actually covered.
//!
//! Slices remember each member's breadth-first distance from the criterion.
//! Distance tiers drive slice-based ranking: nearer dependence neighborhoods
//! are inspected first.

use std::collections::{HashMap, HashSet, VecDeque};
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sbfl::{Ranking, RankingPolicy};
use crate::spectra::{CoverageSpectrum, StatementId};

/// The two dependence varieties tracked on edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    /// The source statement reads a value the target produced.
    Data,
    /// The target's branching decision governs whether the source runs.
    Control,
}

impl EdgeKind {
    /// Canonical lowercase label used in both file formats.
    pub fn label(self) -> &'static str {
        match self {
            EdgeKind::Data => "data",
            EdgeKind::Control => "control",
        }
    }
}

impl FromStr for EdgeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "data" => Ok(EdgeKind::Data),
            "control" => Ok(EdgeKind::Control),
            other => Err(Error::invalid(format!(
                "edge kind must be `data` or `control`, got `{other}`"
            ))),
        }
    }
}

/// A backward dependence graph over statement nodes.
///
/// Construction canonicalizes the representation — nodes sorted in statement
/// order, edges sorted and deduplicated — so two graphs with the same node
/// and edge sets compare equal regardless of declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependenceGraph {
    nodes: Vec<StatementId>,
    index: HashMap<StatementId, usize>,
    edges: Vec<(usize, usize, EdgeKind)>,
    successors: Vec<Vec<usize>>,
}

/// JSON mirror of the DOT format.
#[derive(Serialize, Deserialize)]
struct GraphDoc {
    nodes: Vec<String>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    from: String,
    to: String,
    kind: String,
}

impl DependenceGraph {
    /// Assembles and validates a graph from already-parsed parts.
    ///
    /// Rules shared by both parsers: every edge endpoint must be a declared
    /// node, and a statement cannot control-depend on itself (a data
    /// self-loop, as in a self-updating assignment, is allowed). Duplicate
    /// node or edge declarations collapse.
    pub fn build(
        nodes: Vec<StatementId>,
        edges: Vec<(StatementId, StatementId, EdgeKind)>,
    ) -> Result<Self> {
        let mut sorted = nodes;
        sorted.sort();
        sorted.dedup();
        let index: HashMap<StatementId, usize> = sorted
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();

        let mut idx_edges = Vec::with_capacity(edges.len());
        for (from, to, kind) in &edges {
            let fi = *index.get(from).ok_or_else(|| {
                Error::invalid(format!(
                    "dangling edge endpoint `{from}` is not a declared node"
                ))
            })?;
            let ti = *index.get(to).ok_or_else(|| {
                Error::invalid(format!(
                    "dangling edge endpoint `{to}` is not a declared node"
                ))
            })?;
            if fi == ti && *kind == EdgeKind::Control {
                return Err(Error::invalid(format!(
                    "statement `{from}` cannot control-depend on itself"
                )));
            }
            idx_edges.push((fi, ti, *kind));
        }
        idx_edges.sort();
        idx_edges.dedup();

        let mut successors = vec![Vec::new(); sorted.len()];
        for &(from, to, _) in &idx_edges {
            successors[from].push(to);
        }
        for succ in &mut successors {
            succ.sort_unstable();
            succ.dedup();
        }

        Ok(DependenceGraph {
            nodes: sorted,
            index,
            edges: idx_edges,
            successors,
        })
    }

    /// Parses the DOT-compatible format.
    ///
    /// ```text
    /// digraph dependence {
    ///   "a.c:1";
    ///   "a.c:2";
    ///   "a.c:2" -> "a.c:1" [kind="data"];
    /// }
    /// ```
    ///
    /// Node ids are always double-quoted; every edge carries exactly one
    /// `kind` attribute; `//` and `#` start comments (outside quotes);
    /// trailing semicolons are optional.
    pub fn parse_dot(input: &str) -> Result<Self> {
        static HEADER: OnceLock<Regex> = OnceLock::new();
        static NODE: OnceLock<Regex> = OnceLock::new();
        static EDGE: OnceLock<Regex> = OnceLock::new();
        let header = HEADER
            .get_or_init(|| Regex::new(r"^digraph(\s+[A-Za-z0-9_]+)?\s*\{$").expect("valid regex"));
        let node = NODE.get_or_init(|| Regex::new(r#"^"([^"]+)"\s*;?$"#).expect("valid regex"));
        let edge = EDGE.get_or_init(|| {
            Regex::new(r#"^"([^"]+)"\s*->\s*"([^"]+)"\s*\[\s*kind\s*=\s*"([^"]+)"\s*\]\s*;?$"#)
                .expect("valid regex")
        });

        let mut nodes = Vec::new();
        let mut edges = Vec::new();
        let mut opened = false;
        let mut closed = false;

        for (lineno, raw) in input.lines().enumerate() {
            let lineno = lineno + 1;
            let line = strip_dot_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            if closed {
                return Err(Error::parse(lineno, "content after closing `}`"));
            }
            if !opened {
                if header.is_match(line) {
                    opened = true;
                    continue;
                }
                return Err(Error::parse(lineno, "expected `digraph <name> {`"));
            }
            if line == "}" {
                closed = true;
                continue;
            }
            if let Some(cap) = edge.captures(line) {
                let from: StatementId = cap[1]
                    .parse()
                    .map_err(|e| Error::parse(lineno, format!("{e}")))?;
                let to: StatementId = cap[2]
                    .parse()
                    .map_err(|e| Error::parse(lineno, format!("{e}")))?;
                let kind: EdgeKind = cap[3]
                    .parse()
                    .map_err(|e| Error::parse(lineno, format!("{e}")))?;
                edges.push((from, to, kind));
            } else if let Some(cap) = node.captures(line) {
                let id: StatementId = cap[1]
                    .parse()
                    .map_err(|e| Error::parse(lineno, format!("{e}")))?;
                nodes.push(id);
            } else {
                return Err(Error::parse(
                    lineno,
                    "expected `\"id\";` or `\"id\" -> \"id\" [kind=\"data|control\"];`",
                ));
            }
        }

        if !opened {
            return Err(Error::invalid("graph document has no `digraph` header"));
        }
        if !closed {
            return Err(Error::invalid("graph document is missing its closing `}`"));
        }
        DependenceGraph::build(nodes, edges)
    }

    /// Parses the JSON mirror of the DOT format.
    ///
    /// ```json
    /// {
    ///   "nodes": ["a.c:1", "a.c:2"],
    ///   "edges": [ {"from": "a.c:2", "to": "a.c:1", "kind": "data"} ]
    /// }
    /// ```
    pub fn parse_json(input: &str) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_str(input)?;
        let nodes = doc
            .nodes
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<_>>>()?;
        let edges = doc
            .edges
            .into_iter()
            .map(|e| Ok((e.from.parse()?, e.to.parse()?, e.kind.parse()?)))
            .collect::<Result<Vec<_>>>()?;
        DependenceGraph::build(nodes, edges)
    }

    /// Loads a graph from disk, choosing the parser by extension: `.json`
    /// selects the JSON mirror, anything else the DOT format.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        if path.extension().is_some_and(|ext| ext == "json") {
            Self::parse_json(&text)
        } else {
            Self::parse_dot(&text)
        }
    }

    /// Serializes to the canonical DOT form.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dependence {\n");
        for n in &self.nodes {
            out.push_str(&format!("  \"{n}\";\n"));
        }
        for &(from, to, kind) in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [kind=\"{}\"];\n",
                self.nodes[from],
                self.nodes[to],
                kind.label()
            ));
        }
        out.push_str("}\n");
        out
    }

    /// Serializes to the canonical JSON form (pretty-printed, trailing newline).
    pub fn to_json(&self) -> String {
        let doc = GraphDoc {
            nodes: self.nodes.iter().map(|n| n.to_string()).collect(),
            edges: self
                .edges
                .iter()
                .map(|&(from, to, kind)| EdgeDoc {
                    from: self.nodes[from].to_string(),
                    to: self.nodes[to].to_string(),
                    kind: kind.label().to_string(),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("graph doc serializes");
        s.push('\n');
        s
    }

    /// Graph nodes in canonical statement order.
    pub fn nodes(&self) -> &[StatementId] {
        &self.nodes
    }

    /// Whether `s` is a node of this graph.
    pub fn contains(&self, s: &StatementId) -> bool {
        self.index.contains_key(s)
    }

    /// Edges as `(from, to, kind)` triples in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (&StatementId, &StatementId, EdgeKind)> {
        self.edges
            .iter()
            .map(|&(f, t, k)| (&self.nodes[f], &self.nodes[t], k))
    }

    /// Breadth-first distances from `start`, walking dependence edges and
    /// visiting only nodes for which `allowed` holds.
    fn bfs_distances(&self, start: usize, allowed: impl Fn(usize) -> bool) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.nodes.len()];
        dist[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(cur) = queue.pop_front() {
            let d = dist[cur].expect("queued nodes have a distance");
            for &next in &self.successors[cur] {
                if dist[next].is_none() && allowed(next) {
                    dist[next] = Some(d + 1);
                    queue.push_back(next);
                }
            }
        }
        dist
    }
}

/// Removes `//` and `#` comments that start outside of double quotes.
fn strip_dot_comment(line: &str) -> &str {
    let mut in_quote = false;
    let bytes = line.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'"' => in_quote = !in_quote,
            b'#' if !in_quote => return &line[..i],
            b'/' if !in_quote && bytes.get(i + 1) == Some(&b'/') => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Which slicing construction produced a slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceKind {
    /// Everything statically reachable from the criterion.
    Static,
    /// Static reachability restricted to statements the failing run executed.
    ApproxDynamic,
}

/// Inputs for computing an approximate dynamic slice: the criterion
/// statement (typically where the failure was observed), the statements the
/// failing run executed, and — for evaluation bookkeeping — the statements
/// known to be faulty.
///
/// The faulty set plays no role in slice computation; it may be empty when a
/// slice is requested purely for ranking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceRequest {
    criterion: StatementId,
    executed: Vec<StatementId>,
    faulty: Vec<StatementId>,
}

impl SliceRequest {
    /// Builds a request. The executed set is canonicalized (sorted,
    /// deduplicated); validation against a particular graph happens when the
    /// slice is computed.
    pub fn new(
        criterion: StatementId,
        executed: Vec<StatementId>,
        faulty: Vec<StatementId>,
    ) -> Self {
        let mut executed = executed;
        executed.sort();
        executed.dedup();
        SliceRequest {
            criterion,
            executed,
            faulty,
        }
    }

    /// Derives the request for localizing a spectrum's failure: the executed
    /// set is the coverage of the spectrum's first failing test.
    ///
    /// Checks the cross-input contracts up front: every graph node must
    /// belong to the statement universe (a graph for a different program
    /// version is an input error), the criterion must be both a universe
    /// statement and a graph node, and the spectrum must contain a failing
    /// test. Covered statements that are not graph nodes are dropped from
    /// the executed set — with no dependence edges they could never be
    /// reached by the slice walk anyway.
    pub fn from_failing_run(
        spectrum: &CoverageSpectrum,
        graph: &DependenceGraph,
        criterion: &StatementId,
        faulty: Vec<StatementId>,
    ) -> Result<Self> {
        for node in graph.nodes() {
            if !spectrum.contains(node) {
                return Err(Error::invalid(format!(
                    "graph node `{node}` is not in the statement universe"
                )));
            }
        }
        if !spectrum.contains(criterion) {
            return Err(Error::UnknownStatement(format!(
                "{criterion} (criterion is not in the statement universe)"
            )));
        }
        if !graph.contains(criterion) {
            return Err(Error::UnknownStatement(format!(
                "{criterion} (criterion is not a graph node)"
            )));
        }
        let failing = spectrum.first_failing().ok_or_else(|| {
            Error::invalid("spectrum has no failing test; there is no failing run to slice")
        })?;
        let executed = failing
            .covered()
            .iter()
            .filter(|s| graph.contains(s))
            .cloned()
            .collect();
        Ok(SliceRequest::new(criterion.clone(), executed, faulty))
    }

    /// The slicing criterion.
    pub fn criterion(&self) -> &StatementId {
        &self.criterion
    }

    /// Statements covered by the failing run, in canonical order.
    pub fn executed(&self) -> &[StatementId] {
        &self.executed
    }

    /// Statements known to be faulty (bookkeeping only).
    pub fn faulty(&self) -> &[StatementId] {
        &self.faulty
    }
}

/// A computed slice: members tagged with their breadth-first distance from
/// the criterion, sorted by distance and then statement order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slice {
    criterion: StatementId,
    kind: SliceKind,
    members: Vec<(StatementId, usize)>,
}

impl Slice {
    fn from_distances(
        graph: &DependenceGraph,
        criterion: StatementId,
        kind: SliceKind,
        dist: Vec<Option<usize>>,
    ) -> Self {
        let mut members: Vec<(StatementId, usize)> = dist
            .into_iter()
            .enumerate()
            .filter_map(|(i, d)| d.map(|d| (graph.nodes[i].clone(), d)))
            .collect();
        members.sort_by(|(sa, da), (sb, db)| da.cmp(db).then_with(|| sa.cmp(sb)));
        Slice {
            criterion,
            kind,
            members,
        }
    }

    /// The slicing criterion (always a member, at distance 0).
    pub fn criterion(&self) -> &StatementId {
        &self.criterion
    }

    /// Which construction produced this slice.
    pub fn kind(&self) -> SliceKind {
        self.kind
    }

    /// `(statement, distance)` pairs sorted by distance, then statement.
    pub fn members(&self) -> &[(StatementId, usize)] {
        &self.members
    }

    /// Number of statements in the slice.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// True when the slice has no members (never the case for slices built
    /// by this crate, which always include their criterion).
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Whether `s` is in the slice.
    pub fn contains(&self, s: &StatementId) -> bool {
        self.members.iter().any(|(m, _)| m == s)
    }

    /// The dependence distance of `s` from the criterion, if `s` is a member.
    pub fn distance(&self, s: &StatementId) -> Option<usize> {
        self.members.iter().find(|(m, _)| m == s).map(|&(_, d)| d)
    }

    /// Members grouped by ascending distance; each tier is sorted in
    /// statement order.
    pub fn tiers(&self) -> Vec<(usize, Vec<&StatementId>)> {
        let mut tiers: Vec<(usize, Vec<&StatementId>)> = Vec::new();
        for (s, d) in &self.members {
            match tiers.last_mut() {
                Some((dist, tier)) if dist == d => tier.push(s),
                _ => tiers.push((*d, vec![s])),
            }
        }
        tiers
    }
}

/// Computes the static backward slice: every statement reachable from
/// `criterion` along dependence edges, including the criterion itself.
pub fn static_slice(graph: &DependenceGraph, criterion: &StatementId) -> Result<Slice> {
    let start = *graph
        .index
        .get(criterion)
        .ok_or_else(|| Error::UnknownStatement(criterion.to_string()))?;
    let dist = graph.bfs_distances(start, |_| true);
    Ok(Slice::from_distances(
        graph,
        criterion.clone(),
        SliceKind::Static,
        dist,
    ))
}

/// Computes the approximate dynamic slice: static reachability restricted to
/// the statements the failing run executed.
///
/// Every executed statement must be a graph node, and the criterion must
/// itself have been executed — a failure can only be observed at a statement
/// that ran.
pub fn approx_dynamic_slice(graph: &DependenceGraph, request: &SliceRequest) -> Result<Slice> {
    let criterion = request.criterion();
    let start = *graph
        .index
        .get(criterion)
        .ok_or_else(|| Error::UnknownStatement(criterion.to_string()))?;
    let mut executed = HashSet::with_capacity(request.executed().len());
    for s in request.executed() {
        let idx = *graph.index.get(s).ok_or_else(|| {
            Error::UnknownStatement(format!("{s} (in the executed set but not a graph node)"))
        })?;
        executed.insert(idx);
    }
    if !executed.contains(&start) {
        return Err(Error::CriterionNotExecuted(criterion.to_string()));
    }
    let dist = graph.bfs_distances(start, |i| executed.contains(&i));
    Ok(Slice::from_distances(
        graph,
        criterion.clone(),
        SliceKind::ApproxDynamic,
        dist,
    ))
}

/// Builds a ranking whose head is `prefix` (ordinal positions `1..=k`),
/// followed by the slice's distance tiers (tier members share a rank), and
/// finally the remaining universe statements as singleton positions in
/// statement order. Statements already placed by the prefix are skipped when
/// their tier arrives.
///
/// Panics if a prefix entry or slice member lies outside `universe`; callers
/// derive both from the same spectrum, so a violation is a programming error.
pub(crate) fn ranked_with_prefix(
    prefix: &[StatementId],
    slice: &Slice,
    universe: &[StatementId],
    symptom: Option<StatementId>,
) -> Ranking {
    let universe_set: HashSet<&StatementId> = universe.iter().collect();
    for s in prefix {
        assert!(
            universe_set.contains(s),
            "prefix statement `{s}` outside universe"
        );
    }
    for (s, _) in slice.members() {
        assert!(
            universe_set.contains(s),
            "slice member `{s}` outside universe"
        );
    }

    let prefix_set: HashSet<&StatementId> = prefix.iter().collect();
    let mut entries: Vec<(StatementId, usize)> = prefix
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i + 1))
        .collect();
    let mut placed = entries.len();

    for (_, tier) in slice.tiers() {
        let kept: Vec<&StatementId> = tier
            .into_iter()
            .filter(|s| !prefix_set.contains(*s))
            .collect();
        if kept.is_empty() {
            continue;
        }
        let rank = placed + 1;
        placed += kept.len();
        entries.extend(kept.into_iter().map(|s| (s.clone(), rank)));
    }

    let mut rest: Vec<&StatementId> = universe
        .iter()
        .filter(|s| !prefix_set.contains(*s) && !slice.contains(s))
        .collect();
    rest.sort();
    for s in rest {
        entries.push((s.clone(), placed + 1));
        placed += 1;
    }

    Ranking::new(entries, RankingPolicy::ModifiedCompetition { symptom })
}

/// Ranks a whole statement universe around a slice: the criterion first,
/// then each distance tier (members of a tier share a rank), then every
/// statement outside the slice in statement order.
///
/// The resulting policy is modified-competition with the criterion as the
/// symptom: reading the ranking starts from the already-observed failure
/// point, so the criterion's own position is never charged as inspection
/// effort.
///
/// Panics if a slice member lies outside `universe`.
pub fn slice_ranking(slice: &Slice, universe: &[StatementId]) -> Ranking {
    ranked_with_prefix(&[], slice, universe, Some(slice.criterion().clone()))
}
