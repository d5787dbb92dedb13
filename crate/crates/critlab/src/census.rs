//! Exhaustive isomorph-free generation of small graphs, filtering to
//! k-critical instances, and the audit pipeline for the clique-count bounds.
//!
//! Generation is by canonical augmentation: level n holds one lex-minimally
//! labeled representative per isomorphism class, and a child on n+1 vertices
//! is kept iff it is itself lex-minimally labeled. Dropping the last vertex
//! of a lex-minimal labeling leaves a lex-minimal labeling, so every class
//! surfaces exactly once, under its canonical parent.
//!
//! The census runs each surviving graph through the enabled checks and
//! aggregates violations per vertex count. Aggregation is commutative, so
//! reports do not depend on worker count or input order.

use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;
use std::sync::OnceLock;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::canon::{canonical_form, is_canonically_labeled};
use crate::cliques::{contains_any_w, enumerate_cliques, has_clique, incidence_matrix};
use crate::coloring::{greedy_upper_bound, k_colorable};
use crate::criticality::{edge_bound_audit, su_statistic};
use crate::gf2::rank;
use crate::graph::{Graph, GraphError, MAX_VERTICES};
use crate::graph6;
use crate::trace::{build_trace, check_trace};

/// Largest vertex count the internal generator serves.
pub const GENERATION_LIMIT: usize = 10;
/// Levels up to here are cached process-wide; level 10 is streamed.
const CACHE_LIMIT: usize = 9;
/// Past this order, canonical relabeling is off the table and graphs are
/// recorded exactly as scanned.
const CANONICAL_RECORD_LIMIT: usize = 16;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("invalid census configuration: {0}")]
    InvalidConfig(String),
    #[error("graph6 parse error on line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: graph6::DecodeError,
    },
    #[error("read error on line {line}: {source}")]
    Io {
        line: usize,
        #[source]
        source: std::io::Error,
    },
    #[error("internal generation is capped at {GENERATION_LIMIT} vertices, got {0}; feed a graph6 stream instead")]
    GenerationLimit(usize),
    #[error("malformed report: {0}")]
    InvalidReport(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One audit performed on each surviving k-critical graph.
///
/// Serialized names double as the command-line tokens.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Check {
    /// t_{k-1}(G) <= n - k + 3 for n > k.
    #[serde(rename = "thm2")]
    MainBound,
    /// t_{k-1}(G) < n - 3k/5 + 2 for n > k, checked as 5t + 3k < 5n + 10.
    #[serde(rename = "thm1")]
    KsBound,
    /// t_{k-1}(G) <= n, equality only for K_k.
    #[serde(rename = "az_bound")]
    AzBound,
    /// A (k-3)-clique with a cycle in its common neighborhood forces
    /// G = W(n-k+3, k-3) with the cycle length odd.
    #[serde(rename = "lemma1")]
    WContainment,
    /// Without such a witness, the clique incidence rows are independent.
    #[serde(rename = "lemma2")]
    CliqueRank,
    /// Per-edge bound t_{k-1}(G) <= n - (k - 2 - d).
    #[serde(rename = "lemma3")]
    EdgeBound,
    /// Some edge lies in at most one (k-1)-clique, for n > k. Verified for
    /// k <= 7; report-only beyond.
    #[serde(rename = "su")]
    Su,
    /// The full certificate walk succeeds and its checker accepts.
    #[serde(rename = "extended_rank")]
    ExtendedRank,
    /// Record graphs with t_{k-1}(G) = n - k + 3 exactly.
    #[serde(rename = "equality_census")]
    EqualityCensus,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::MainBound,
        Check::KsBound,
        Check::AzBound,
        Check::WContainment,
        Check::CliqueRank,
        Check::EdgeBound,
        Check::Su,
        Check::ExtendedRank,
        Check::EqualityCensus,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Check::MainBound => "thm2",
            Check::KsBound => "thm1",
            Check::AzBound => "az_bound",
            Check::WContainment => "lemma1",
            Check::CliqueRank => "lemma2",
            Check::EdgeBound => "lemma3",
            Check::Su => "su",
            Check::ExtendedRank => "extended_rank",
            Check::EqualityCensus => "equality_census",
        }
    }

    pub fn from_token(s: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.token() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SourceKind {
    #[serde(rename = "internal_generator")]
    InternalGenerator,
    #[serde(rename = "graph6_stream")]
    Graph6Stream,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusConfig {
    pub k: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub source: SourceKind,
    pub checks: BTreeSet<Check>,
    /// Worker threads; 0 uses the process-wide default pool.
    pub parallelism: usize,
}

impl CensusConfig {
    /// Config with every check enabled.
    pub fn full(k: usize, n_min: usize, n_max: usize, source: SourceKind) -> CensusConfig {
        CensusConfig {
            k,
            n_min,
            n_max,
            source,
            checks: Check::ALL.into_iter().collect(),
            parallelism: 0,
        }
    }

    pub fn validate(&self) -> Result<(), CensusError> {
        let fail = |msg: String| Err(CensusError::InvalidConfig(msg));
        if self.k < 2 {
            return fail(format!("k must be at least 2, got {}", self.k));
        }
        if !self.checks.is_empty() && self.k < 4 {
            return fail(format!(
                "the bound checks require k >= 4 (got k = {})",
                self.k
            ));
        }
        if self.n_min < 1 || self.n_max > MAX_VERTICES || self.n_min > self.n_max {
            return fail(format!(
                "vertex range {}..={} must sit inside 1..={MAX_VERTICES}",
                self.n_min, self.n_max
            ));
        }
        if self.source == SourceKind::InternalGenerator && self.n_max > GENERATION_LIMIT {
            return Err(CensusError::GenerationLimit(self.n_max));
        }
        Ok(())
    }
}

/// A graph whose smallest per-edge clique count exceeds 1 where the
/// conjecture is report-only (k >= 8).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SuException {
    pub graph6: String,
    pub min_d: usize,
}

/// Aggregated results for one vertex count.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NReport {
    pub n: usize,
    pub scanned: usize,
    pub critical: usize,
    pub max_t: Option<usize>,
    /// Every violating graph across all checks, sorted and deduplicated.
    pub violations: Vec<String>,
    /// The same violations keyed by check token.
    pub violations_by_check: BTreeMap<String, Vec<String>>,
    /// Graphs with t_{k-1} = n - k + 3, in canonical labeling where the
    /// order permits (n <= 16), else exactly as scanned.
    pub equality: Vec<String>,
    /// Largest per-graph min-edge clique count seen (the conjecture says
    /// this never exceeds 1 for n > k).
    pub su_min: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub su_exceptions: Vec<SuException>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub config: CensusConfig,
    pub per_n: Vec<NReport>,
    pub elapsed_ms: u128,
}

impl CensusReport {
    pub fn has_violations(&self) -> bool {
        self.per_n.iter().any(|r| !r.violations.is_empty())
    }

    pub fn total_critical(&self) -> usize {
        self.per_n.iter().map(|r| r.critical).sum()
    }

    /// Report-only findings destined for a separate file.
    pub fn su_exception_entries(&self) -> Vec<(usize, &SuException)> {
        self.per_n
            .iter()
            .flat_map(|r| r.su_exceptions.iter().map(move |e| (r.n, e)))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

// ---------------------------------------------------------------------------
// Generation.

fn accepted_children(parent: &Graph) -> Vec<Graph> {
    let m = parent.order();
    (0u64..1 << m)
        .filter_map(|mask| {
            let child = parent
                .with_appended_vertex(mask)
                .expect("generator stays under the vertex cap");
            is_canonically_labeled(&child).then_some(child)
        })
        .collect()
}

/// Representatives on `n` vertices, built once per process and shared.
fn cached_level(n: usize) -> &'static [Graph] {
    static CELLS: [OnceLock<Vec<Graph>>; CACHE_LIMIT + 1] =
        [const { OnceLock::new() }; CACHE_LIMIT + 1];
    debug_assert!(n >= 1 && n <= CACHE_LIMIT);
    CELLS[n].get_or_init(|| {
        if n == 1 {
            vec![Graph::empty(1).expect("one vertex fits")]
        } else {
            let nested: Vec<Vec<Graph>> = cached_level(n - 1)
                .par_iter()
                .map(accepted_children)
                .collect();
            nested.into_iter().flatten().collect()
        }
    })
}

/// One representative per isomorphism class of simple graphs on `n`
/// vertices. At n = 10 this materializes about twelve million graphs;
/// prefer [`for_each_generated`] there.
pub fn generate_all(n: usize) -> Result<Vec<Graph>, CensusError> {
    match n {
        0 => Ok(vec![Graph::empty(0)?]),
        1..=CACHE_LIMIT => Ok(cached_level(n).to_vec()),
        GENERATION_LIMIT => {
            let mut out = Vec::new();
            for_each_generated(n, |g| out.push(g.clone()))?;
            Ok(out)
        }
        _ => Err(CensusError::GenerationLimit(n)),
    }
}

/// Streams the canonical representatives on `n` vertices in a fixed order
/// without holding a level beyond 9 in memory.
pub fn for_each_generated<F: FnMut(&Graph)>(n: usize, mut f: F) -> Result<(), CensusError> {
    match n {
        0 => {
            f(&Graph::empty(0)?);
            Ok(())
        }
        1..=CACHE_LIMIT => {
            for g in cached_level(n) {
                f(g);
            }
            Ok(())
        }
        GENERATION_LIMIT => {
            for parent in cached_level(n - 1) {
                for child in accepted_children(parent) {
                    f(&child);
                }
            }
            Ok(())
        }
        _ => Err(CensusError::GenerationLimit(n)),
    }
}

// ---------------------------------------------------------------------------
// Criticality filter, cheapest rejection first. Each stage is answerable on
// its own; `certify_critical` chains them.

pub(crate) fn has_isolated_vertex(g: &Graph) -> bool {
    g.order() > 1 && g.vertices().any(|v| g.degree(v) == 0)
}

pub(crate) fn passes_degree_filter(g: &Graph, k: usize) -> bool {
    g.min_degree().is_some_and(|d| d >= k - 1)
}

/// A K_k inside anything bigger than K_k itself refutes criticality.
pub(crate) fn passes_proper_clique_filter(g: &Graph, k: usize) -> bool {
    !has_clique(g, k) || (g.order() == k && g.is_complete())
}

/// Greedy coloring with at most k-1 colors proves chi < k.
pub(crate) fn passes_greedy_filter(g: &Graph, k: usize) -> bool {
    greedy_upper_bound(g) > k - 1
}

pub(crate) fn has_chromatic_number_k(g: &Graph, k: usize) -> bool {
    k_colorable(g, k - 1).is_none() && k_colorable(g, k).is_some()
}

/// Every single-edge deletion drops the chromatic number. Together with the
/// isolated-vertex guard this certifies full criticality: removing a vertex
/// removes at least one edge, so vertex deletions are covered.
pub(crate) fn edges_all_critical(g: &Graph, k: usize) -> bool {
    g.edges().all(|(u, v)| {
        let h = g.without_edge(u, v).expect("iterating real edges");
        k_colorable(&h, k - 1).is_some()
    })
}

/// Census-grade criticality decision, equivalent to
/// `is_k_critical(g, k).is_critical()` but organized for early rejection.
pub fn certify_critical(g: &Graph, k: usize) -> bool {
    debug_assert!(k >= 2);
    g.order() >= 1
        && !has_isolated_vertex(g)
        && passes_degree_filter(g, k)
        && passes_proper_clique_filter(g, k)
        && passes_greedy_filter(g, k)
        && has_chromatic_number_k(g, k)
        && edges_all_critical(g, k)
}

// ---------------------------------------------------------------------------
// Per-graph audit.

struct CriticalFindings {
    t: usize,
    failed: Vec<Check>,
    equality: Option<String>,
    su_min_d: Option<usize>,
    su_exception: Option<SuException>,
}

fn record_graph6(g: &Graph) -> String {
    if g.order() <= CANONICAL_RECORD_LIMIT {
        let canonical = canonical_form(g).expect("order within canonical limit");
        graph6::encode(&canonical)
    } else {
        graph6::encode(g)
    }
}

fn audit_graph(g: &Graph, cfg: &CensusConfig) -> Option<CriticalFindings> {
    let k = cfg.k;
    if !certify_critical(g, k) {
        return None;
    }
    let n = g.order();
    let above_k = n > k;
    let has = |c: Check| cfg.checks.contains(&c);

    let catalog = enumerate_cliques(g, k - 1).expect("k - 1 >= 1");
    let t = catalog.len();
    let mut failed = Vec::new();

    if has(Check::MainBound) && above_k && t > n - k + 3 {
        failed.push(Check::MainBound);
    }
    if has(Check::KsBound) && above_k && 5 * t + 3 * k >= 5 * n + 10 {
        failed.push(Check::KsBound);
    }
    if has(Check::AzBound) {
        let az_ok = t < n || (t == n && n == k && g.is_complete());
        if !az_ok {
            failed.push(Check::AzBound);
        }
    }

    let needs_w = has(Check::WContainment) || has(Check::CliqueRank);
    let w_witness = if needs_w {
        contains_any_w(g, k - 3).expect("d >= 1 for k >= 4")
    } else {
        None
    };
    if has(Check::WContainment) && w_witness.is_some() {
        let join_ok = matches!(g.w_form(k - 3), Some((ell, _)) if ell % 2 == 1);
        if !join_ok {
            failed.push(Check::WContainment);
        }
    }
    if has(Check::CliqueRank) && w_witness.is_none() {
        let m = incidence_matrix(&catalog, &[]).expect("no singletons to reject");
        if rank(&m) != t {
            failed.push(Check::CliqueRank);
        }
    }

    let needs_audit = has(Check::EdgeBound) || (has(Check::Su) && above_k);
    let mut su_min_d = None;
    let mut su_exception = None;
    if needs_audit {
        let audit = edge_bound_audit(g, k, &catalog);
        if has(Check::EdgeBound) && !audit.passed() {
            failed.push(Check::EdgeBound);
        }
        if has(Check::Su) && above_k {
            let md = su_statistic(&audit).expect("critical graphs have edges");
            su_min_d = Some(md);
            if md > 1 {
                if k <= 7 {
                    failed.push(Check::Su);
                } else {
                    su_exception = Some(SuException {
                        graph6: record_graph6(g),
                        min_d: md,
                    });
                }
            }
        }
    }

    if has(Check::ExtendedRank) && above_k {
        let walk_ok = match build_trace(g, k) {
            Ok(cert) => check_trace(g, k, &cert).ok(),
            Err(_) => false,
        };
        if !walk_ok {
            failed.push(Check::ExtendedRank);
        }
    }

    let equality = (has(Check::EqualityCensus) && above_k && t == n - k + 3)
        .then(|| record_graph6(g));

    failed.sort_unstable();
    Some(CriticalFindings {
        t,
        failed,
        equality,
        su_min_d,
        su_exception,
    })
}

// ---------------------------------------------------------------------------
// Aggregation. Order-independent merges keep reports deterministic across
// worker schedules and input orderings.

#[derive(Default)]
struct NAccum {
    scanned: usize,
    critical: usize,
    max_t: Option<usize>,
    violations: BTreeMap<Check, BTreeSet<String>>,
    equality: BTreeSet<String>,
    su_min: Option<usize>,
    su_exceptions: BTreeSet<SuException>,
}

impl NAccum {
    fn absorb(&mut self, g: &Graph, cfg: &CensusConfig) {
        self.scanned += 1;
        let Some(f) = audit_graph(g, cfg) else {
            return;
        };
        self.critical += 1;
        self.max_t = Some(self.max_t.map_or(f.t, |m| m.max(f.t)));
        if !f.failed.is_empty() {
            let g6 = graph6::encode(g);
            for c in f.failed {
                self.violations.entry(c).or_default().insert(g6.clone());
            }
        }
        if let Some(e) = f.equality {
            self.equality.insert(e);
        }
        if let Some(md) = f.su_min_d {
            self.su_min = Some(self.su_min.map_or(md, |m| m.max(md)));
        }
        if let Some(e) = f.su_exception {
            self.su_exceptions.insert(e);
        }
    }

    fn merge(mut self, other: NAccum) -> NAccum {
        self.scanned += other.scanned;
        self.critical += other.critical;
        self.max_t = match (self.max_t, other.max_t) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        for (c, set) in other.violations {
            self.violations.entry(c).or_default().extend(set);
        }
        self.equality.extend(other.equality);
        self.su_min = match (self.su_min, other.su_min) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        self.su_exceptions.extend(other.su_exceptions);
        self
    }

    fn into_report(self, n: usize) -> NReport {
        let mut flat: BTreeSet<&String> = BTreeSet::new();
        for set in self.violations.values() {
            flat.extend(set.iter());
        }
        NReport {
            n,
            scanned: self.scanned,
            critical: self.critical,
            max_t: self.max_t,
            violations: flat.into_iter().cloned().collect(),
            violations_by_check: self
                .violations
                .iter()
                .map(|(c, set)| (c.token().to_string(), set.iter().cloned().collect()))
                .collect(),
            equality: self.equality.into_iter().collect(),
            su_min: self.su_min,
            su_exceptions: self.su_exceptions.into_iter().collect(),
        }
    }
}

fn accumulate_slice(graphs: &[Graph], cfg: &CensusConfig) -> NAccum {
    graphs
        .par_iter()
        .fold(NAccum::default, |mut acc, g| {
            acc.absorb(g, cfg);
            acc
        })
        .reduce(NAccum::default, NAccum::merge)
}

/// Level 10 never materializes: parents fan out inside the workers.
fn accumulate_streamed_top(cfg: &CensusConfig) -> NAccum {
    cached_level(CACHE_LIMIT)
        .par_iter()
        .fold(NAccum::default, |mut acc, parent| {
            for child in accepted_children(parent) {
                acc.absorb(&child, cfg);
            }
            acc
        })
        .reduce(NAccum::default, NAccum::merge)
}

fn make_pool(jobs: usize) -> Result<Option<rayon::ThreadPool>, CensusError> {
    if jobs == 0 {
        return Ok(None);
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map(Some)
        .map_err(|e| CensusError::InvalidConfig(format!("cannot build a {jobs}-thread pool: {e}")))
}

fn in_pool<T: Send>(pool: &Option<rayon::ThreadPool>, work: impl FnOnce() -> T + Send) -> T {
    match pool {
        Some(p) => p.install(work),
        None => work(),
    }
}

/// Full census over the internal generator.
pub fn run_census(cfg: &CensusConfig) -> Result<CensusReport, CensusError> {
    cfg.validate()?;
    if cfg.source != SourceKind::InternalGenerator {
        return Err(CensusError::InvalidConfig(
            "run_census serves the internal generator; use run_census_stream for graph6 input"
                .into(),
        ));
    }
    let start = Instant::now();
    let pool = make_pool(cfg.parallelism)?;
    let per_n = in_pool(&pool, || {
        (cfg.n_min..=cfg.n_max)
            .map(|n| {
                let acc = match n {
                    1..=CACHE_LIMIT => accumulate_slice(cached_level(n), cfg),
                    GENERATION_LIMIT => accumulate_streamed_top(cfg),
                    _ => unreachable!("validated against the generation cap"),
                };
                acc.into_report(n)
            })
            .collect()
    });
    Ok(CensusReport {
        config: cfg.clone(),
        per_n,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Full census over graph6 lines (one graph per line; blank lines skipped;
/// graphs outside the configured vertex range are ignored). The first
/// malformed line aborts the run with its line number.
pub fn run_census_stream<R: BufRead>(
    cfg: &CensusConfig,
    reader: R,
) -> Result<CensusReport, CensusError> {
    cfg.validate()?;
    if cfg.source != SourceKind::Graph6Stream {
        return Err(CensusError::InvalidConfig(
            "run_census_stream serves graph6 input; use run_census for the internal generator"
                .into(),
        ));
    }
    let start = Instant::now();
    let mut by_n: BTreeMap<usize, Vec<Graph>> = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| CensusError::Io {
            line: line_no,
            source,
        })?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let g = graph6::decode(text).map_err(|source| CensusError::Parse {
            line: line_no,
            source,
        })?;
        if (cfg.n_min..=cfg.n_max).contains(&g.order()) {
            by_n.entry(g.order()).or_default().push(g);
        }
    }
    let pool = make_pool(cfg.parallelism)?;
    let per_n = in_pool(&pool, || {
        (cfg.n_min..=cfg.n_max)
            .map(|n| {
                let acc = by_n
                    .get(&n)
                    .map_or_else(NAccum::default, |gs| accumulate_slice(gs, cfg));
                acc.into_report(n)
            })
            .collect()
    });
    Ok(CensusReport {
        config: cfg.clone(),
        per_n,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

// ---------------------------------------------------------------------------
// Equality census.

/// An equality graph, with the odd-wheel verdict filled in for k = 4 where
/// the characterization says wheels are the only possibility.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqualityEntry {
    pub graph6: String,
    /// For k = 4: whether the graph is an odd wheel. Absent for other k.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub odd_wheel: Option<bool>,
}

/// Groups the recorded equality graphs by vertex count.
pub fn equality_census(
    report: &CensusReport,
    k: usize,
) -> Result<BTreeMap<usize, Vec<EqualityEntry>>, CensusError> {
    if !report.config.checks.contains(&Check::EqualityCensus) {
        return Err(CensusError::InvalidConfig(
            "the report was produced without the equality_census check".into(),
        ));
    }
    let mut out = BTreeMap::new();
    for nr in &report.per_n {
        let mut entries = Vec::new();
        for g6 in &nr.equality {
            let g = graph6::decode(g6)
                .map_err(|e| CensusError::InvalidReport(format!("equality entry {g6}: {e}")))?;
            let odd_wheel = (k == 4).then(|| {
                matches!(g.w_form(1), Some((ell, _)) if ell % 2 == 1)
            });
            entries.push(EqualityEntry {
                graph6: g6.clone(),
                odd_wheel,
            });
        }
        out.insert(nr.n, entries);
    }
    Ok(out)
}
