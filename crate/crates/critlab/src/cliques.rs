//! Fixed-size clique enumeration, per-vertex and per-edge clique counts, the
//! clique/vertex incidence rows consumed by the GF(2) module, and detection
//! of joined clique-cycle subgraphs (a d-clique whose common neighborhood
//! contains a cycle).

use std::collections::BTreeMap;

use crate::graph::{Graph, GraphError, VertexSet, WParams};

/// All cliques of one fixed size, sorted ascending by bitmask value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueCatalog {
    order: usize,
    ell: usize,
    members: Vec<VertexSet>,
}

impl CliqueCatalog {
    /// Ambient vertex count of the host graph.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[VertexSet] {
        &self.members
    }
}

/// Clique counts around vertices and edges, for one clique size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueStats {
    order: usize,
    ell: usize,
    total: usize,
    per_vertex: Vec<usize>,
    per_edge: BTreeMap<(usize, usize), usize>,
}

impl CliqueStats {
    pub fn ell(&self) -> usize {
        self.ell
    }

    /// t_ell(G): number of ell-cliques.
    pub fn total(&self) -> usize {
        self.total
    }

    /// t_ell(v, G) for each vertex.
    pub fn per_vertex(&self) -> &[usize] {
        &self.per_vertex
    }

    /// Counts keyed by edge (u, v) with u < v; non-edges are not listed.
    pub fn per_edge(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.per_edge
    }

    /// t_ell(uv, G); 0 for pairs that are not edges.
    pub fn edge_count(&self, u: usize, v: usize) -> usize {
        *self.per_edge.get(&(u.min(v), u.max(v))).unwrap_or(&0)
    }

    /// Vertex with the fewest cliques through it, lowest index on ties.
    /// None only for the graph on zero vertices.
    pub fn min_count_vertex(&self) -> Option<usize> {
        (0..self.order).min_by_key(|&v| self.per_vertex[v])
    }
}

/// Rows of clique membership masks, optionally extended by singleton rows.
/// Row i < clique_rows is a clique; later rows are single vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    width: usize,
    clique_rows: usize,
    rows: Vec<u64>,
}

impl IncidenceMatrix {
    /// Matrix from raw rows; the first `clique_rows` rows are clique masks.
    pub fn from_rows(
        width: usize,
        clique_rows: usize,
        rows: Vec<u64>,
    ) -> Result<Self, GraphError> {
        if width > crate::graph::MAX_VERTICES {
            return Err(GraphError::TooManyVertices(width));
        }
        if clique_rows > rows.len() {
            return Err(GraphError::InvalidParameter(format!(
                "clique row count {clique_rows} exceeds row count {}",
                rows.len()
            )));
        }
        if rows.iter().any(|&r| r & !crate::graph::low_mask(width) != 0) {
            return Err(GraphError::InvalidParameter(
                "row has bits beyond the matrix width".into(),
            ));
        }
        Ok(IncidenceMatrix {
            width,
            clique_rows,
            rows,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn clique_rows(&self) -> usize {
        self.clique_rows
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }
}

fn collect_cliques(g: &Graph, candidates: u64, current: u64, need: usize, out: &mut Vec<VertexSet>) {
    if need == 0 {
        out.push(VertexSet::from_bits(current));
        return;
    }
    let mut cand = candidates;
    while cand.count_ones() as usize >= need {
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        collect_cliques(g, cand & g.neighbors(v), current | 1u64 << v, need - 1, out);
    }
}

/// Every clique on exactly `ell` vertices.
pub fn enumerate_cliques(g: &Graph, ell: usize) -> Result<CliqueCatalog, GraphError> {
    if ell == 0 {
        return Err(GraphError::InvalidParameter(
            "clique size must be at least 1".into(),
        ));
    }
    let mut members = Vec::new();
    collect_cliques(g, g.vertex_mask(), 0, ell, &mut members);
    members.sort_unstable();
    Ok(CliqueCatalog {
        order: g.order(),
        ell,
        members,
    })
}

pub fn clique_stats(g: &Graph, ell: usize) -> Result<CliqueStats, GraphError> {
    let cat = enumerate_cliques(g, ell)?;
    let mut per_vertex = vec![0usize; g.order()];
    let mut per_edge: BTreeMap<(usize, usize), usize> = g.edges().map(|e| (e, 0)).collect();
    for m in cat.members() {
        let vs: Vec<usize> = m.iter().collect();
        for (i, &u) in vs.iter().enumerate() {
            per_vertex[u] += 1;
            for &v in &vs[i + 1..] {
                *per_edge.get_mut(&(u, v)).unwrap() += 1;
            }
        }
    }
    Ok(CliqueStats {
        order: g.order(),
        ell,
        total: cat.len(),
        per_vertex,
        per_edge,
    })
}

/// Clique rows from the catalog followed by one singleton row per listed
/// vertex, over GF(2)^order.
pub fn incidence_matrix(
    cat: &CliqueCatalog,
    singletons: &[usize],
) -> Result<IncidenceMatrix, GraphError> {
    let mut rows: Vec<u64> = cat.members().iter().map(|m| m.bits()).collect();
    for &s in singletons {
        if s >= cat.order() {
            return Err(GraphError::VertexOutOfRange {
                vertex: s,
                order: cat.order(),
            });
        }
        rows.push(1u64 << s);
    }
    Ok(IncidenceMatrix {
        width: cat.order(),
        clique_rows: cat.len(),
        rows,
    })
}

/// Greedy maximal clique: repeatedly take the candidate with the most
/// remaining candidate neighbors, lowest index on ties. A cheap chromatic
/// lower bound, not a maximum clique.
pub fn greedy_clique(g: &Graph) -> VertexSet {
    let mut clique = VertexSet::EMPTY;
    let mut cand = g.vertex_mask();
    while cand != 0 {
        let v = VertexSet::from_bits(cand)
            .iter()
            .max_by_key(|&v| (g.neighbors(v) & cand).count_ones())
            .unwrap();
        clique.insert(v);
        cand &= g.neighbors(v);
    }
    clique
}

fn clique_exists(g: &Graph, candidates: u64, need: usize) -> bool {
    if need == 0 {
        return true;
    }
    let mut cand = candidates;
    while cand.count_ones() as usize >= need {
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        if clique_exists(g, cand & g.neighbors(v), need - 1) {
            return true;
        }
    }
    false
}

/// Is there a clique on k vertices? Early-exit search.
pub fn has_clique(g: &Graph, k: usize) -> bool {
    clique_exists(g, g.vertex_mask(), k)
}

/// A d-clique together with a cycle in its common neighborhood: witnesses
/// that the join of K_d and a cycle embeds in the host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WWitness {
    pub hub: VertexSet,
    pub cycle: Vec<usize>,
}

impl WWitness {
    /// Structural validity against a host graph: the hub is a d-clique, the
    /// cycle is a genuine cycle disjoint from it, and every hub vertex is
    /// adjacent to every cycle vertex.
    pub fn validate(&self, g: &Graph, d: usize) -> bool {
        if self.hub.len() != d || self.cycle.len() < 3 {
            return false;
        }
        let hubs: Vec<usize> = self.hub.iter().collect();
        if hubs.iter().any(|&h| h >= g.order()) {
            return false;
        }
        for (i, &a) in hubs.iter().enumerate() {
            for &b in &hubs[i + 1..] {
                if !g.has_edge(a, b) {
                    return false;
                }
            }
        }
        let len = self.cycle.len();
        let mut seen = VertexSet::EMPTY;
        for (i, &v) in self.cycle.iter().enumerate() {
            if v >= g.order() || seen.contains(v) || self.hub.contains(v) {
                return false;
            }
            seen.insert(v);
            if !g.has_edge(v, self.cycle[(i + 1) % len]) {
                return false;
            }
            if hubs.iter().any(|&h| !g.has_edge(h, v)) {
                return false;
            }
        }
        true
    }
}

/// First cycle found in the subgraph induced by `within`, as a vertex
/// sequence. Depth-first: a back edge closes the cycle.
fn find_cycle(g: &Graph, within: u64) -> Option<Vec<usize>> {
    let mut visited = 0u64;
    let mut stack: Vec<usize> = Vec::new();
    let mut on_stack = 0u64;

    fn dfs(
        g: &Graph,
        within: u64,
        v: usize,
        parent: Option<usize>,
        visited: &mut u64,
        stack: &mut Vec<usize>,
        on_stack: &mut u64,
    ) -> Option<Vec<usize>> {
        *visited |= 1u64 << v;
        *on_stack |= 1u64 << v;
        stack.push(v);
        for w in VertexSet::from_bits(g.neighbors(v) & within).iter() {
            if Some(w) == parent {
                continue;
            }
            if *on_stack >> w & 1 == 1 {
                let start = stack.iter().position(|&x| x == w).unwrap();
                return Some(stack[start..].to_vec());
            }
            if *visited >> w & 1 == 0 {
                if let Some(c) = dfs(g, within, w, Some(v), visited, stack, on_stack) {
                    return Some(c);
                }
            }
        }
        stack.pop();
        *on_stack &= !(1u64 << v);
        None
    }

    for s in VertexSet::from_bits(within).iter() {
        if visited >> s & 1 == 0 {
            if let Some(c) = dfs(g, within, s, None, &mut visited, &mut stack, &mut on_stack) {
                return Some(c);
            }
        }
    }
    None
}

fn hubs_to_iterate(g: &Graph, d: usize) -> Result<Vec<VertexSet>, GraphError> {
    if d == 0 {
        Ok(vec![VertexSet::EMPTY])
    } else {
        Ok(enumerate_cliques(g, d)?.members().to_vec())
    }
}

fn common_neighborhood(g: &Graph, hub: VertexSet) -> u64 {
    let mut common = g.vertex_mask();
    for h in hub.iter() {
        common &= g.neighbors(h);
    }
    common & !hub.bits()
}

/// Does some d-clique have a cycle (of any length) in its common
/// neighborhood? For d = 0 this asks whether the graph has a cycle at all.
pub fn contains_any_w(g: &Graph, d: usize) -> Result<Option<WWitness>, GraphError> {
    for hub in hubs_to_iterate(g, d)? {
        if let Some(cycle) = find_cycle(g, common_neighborhood(g, hub)) {
            let w = WWitness { hub, cycle };
            debug_assert!(w.validate(g, d));
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Exact-length cycle through `within`, every vertex above the anchor `s`.
fn cycle_of_length_from(
    g: &Graph,
    within: u64,
    s: usize,
    path: &mut Vec<usize>,
    used: u64,
    target: usize,
) -> bool {
    let cur = *path.last().unwrap();
    if path.len() == target {
        return g.has_edge(cur, s);
    }
    let above = !crate::graph::low_mask(s + 1);
    for w in VertexSet::from_bits(g.neighbors(cur) & within & !used & above).iter() {
        path.push(w);
        if cycle_of_length_from(g, within, s, path, used | 1u64 << w, target) {
            return true;
        }
        path.pop();
    }
    false
}

/// Embeds W(ell, d) = K_d joined with C_ell: a d-clique whose common
/// neighborhood carries a cycle of length exactly ell.
pub fn contains_w(g: &Graph, p: WParams) -> Result<Option<WWitness>, GraphError> {
    p.validate()?;
    let WParams { ell, d } = p;
    for hub in hubs_to_iterate(g, d)? {
        let common = common_neighborhood(g, hub);
        if (common.count_ones() as usize) < ell {
            continue;
        }
        // Each candidate cycle is rooted at its minimum vertex.
        for s in VertexSet::from_bits(common).iter() {
            let mut path = vec![s];
            if cycle_of_length_from(g, common, s, &mut path, 1u64 << s, ell) {
                let w = WWitness { hub, cycle: path };
                debug_assert!(w.validate(g, d));
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}
