//! Simple graphs on at most 64 vertices, stored as one adjacency bitmask per
//! vertex. Everything downstream (coloring search, clique enumeration, GF(2)
//! incidence rows) leans on cheap u64 set operations, so the 64-vertex cap is
//! structural, not incidental.

use std::fmt;

use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub const MAX_VERTICES: usize = 64;

/// Mask with the low `n` bits set. Valid for n <= 64.
#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    debug_assert!(n <= 64);
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph order {0} exceeds the {MAX_VERTICES}-vertex limit")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for a graph on {order} vertices")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {0} is not allowed")]
    SelfLoop(usize),
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(usize, usize),
    #[error("invalid construction parameter: {0}")]
    InvalidParameter(String),
    #[error("canonical labeling supports at most 16 vertices, got {0}")]
    CanonicalOrderLimit(usize),
}

/// Set of vertex indices, backed by a single word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    #[inline]
    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn singleton(v: usize) -> Self {
        debug_assert!(v < MAX_VERTICES);
        VertexSet(1u64 << v)
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < MAX_VERTICES);
        self.0 |= 1u64 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        debug_assert!(v < MAX_VERTICES);
        self.0 &= !(1u64 << v);
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Ascending vertex indices.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    #[inline]
    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    #[inline]
    pub fn minus(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

// On the wire a vertex set is a sorted index list, not a bitmask.
impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for v in self.iter() {
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = VertexSet;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a list of vertex indices below {MAX_VERTICES}")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<VertexSet, A::Error> {
                let mut s = VertexSet::EMPTY;
                while let Some(v) = seq.next_element::<usize>()? {
                    if v >= MAX_VERTICES {
                        return Err(serde::de::Error::custom(format!(
                            "vertex index {v} out of range"
                        )));
                    }
                    s.insert(v);
                }
                Ok(s)
            }
        }
        deserializer.deserialize_seq(V)
    }
}

/// Parameters of the family W(ell, d): the join of a clique on `d` vertices
/// with a cycle of length `ell`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct WParams {
    pub ell: usize,
    pub d: usize,
}

impl WParams {
    pub fn validate(self) -> Result<(), GraphError> {
        if self.ell < 3 {
            return Err(GraphError::InvalidParameter(format!(
                "cycle length {} must be at least 3",
                self.ell
            )));
        }
        if self.ell + self.d > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(self.ell + self.d));
        }
        Ok(())
    }
}

/// Undirected simple graph. Invariants: `adj.len() == n`, the adjacency
/// relation is symmetric and irreflexive, and no row has bits at or above `n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Graph, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph {
            n,
            adj: vec![0; n],
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// The same graph plus one new highest-index vertex whose neighborhood
    /// is `neighbors` (a bitmask over the existing vertices).
    pub fn with_appended_vertex(&self, neighbors: u64) -> Result<Graph, GraphError> {
        if self.n + 1 > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(self.n + 1));
        }
        if neighbors & !low_mask(self.n) != 0 {
            return Err(GraphError::VertexOutOfRange {
                vertex: 63 - neighbors.leading_zeros() as usize,
                order: self.n,
            });
        }
        let mut adj = self.adj.clone();
        adj.push(neighbors);
        let new_bit = 1u64 << self.n;
        for u in 0..self.n {
            if neighbors >> u & 1 == 1 {
                adj[u] |= new_bit;
            }
        }
        Ok(Graph { n: self.n + 1, adj })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    #[inline]
    pub fn vertex_mask(&self) -> u64 {
        low_mask(self.n)
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                order: self.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.adj[u] |= 1u64 << v;
        self.adj[v] |= 1u64 << u;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if u < self.n && v < self.n {
            self.adj[u] &= !(1u64 << v);
            self.adj[v] &= !(1u64 << u);
        }
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && u != v && self.adj[u] >> v & 1 == 1
    }

    /// Neighborhood of `v` as a bitmask.
    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn min_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| self.degree(v)).min()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as (u, v) with u < v, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            let above = self.adj[u] & !low_mask(u + 1);
            VertexSet::from_bits(above).iter().map(move |v| (u, v))
        })
    }

    pub fn is_complete(&self) -> bool {
        self.n >= 1 && (0..self.n).all(|v| self.degree(v) == self.n - 1)
    }

    /// Copy with one edge removed. Errors if (u, v) is not an edge.
    pub fn without_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        if !self.has_edge(u, v) {
            return Err(GraphError::NotAnEdge(u, v));
        }
        let mut g = self.clone();
        g.remove_edge(u, v);
        Ok(g)
    }

    /// Copy with vertex `v` deleted; vertices above `v` shift down by one.
    pub fn without_vertex(&self, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(v)?;
        let mut g = Graph::empty(self.n - 1)?;
        let shift = |w: usize| if w > v { w - 1 } else { w };
        for (a, b) in self.edges() {
            if a != v && b != v {
                g.add_edge(shift(a), shift(b)).unwrap();
            }
        }
        Ok(g)
    }

    /// Induced subgraph on `set`. Returns the subgraph and the map from new
    /// indices back to the original vertex labels (ascending).
    pub fn induced(&self, set: VertexSet) -> (Graph, Vec<usize>) {
        let set = VertexSet::from_bits(set.bits() & self.vertex_mask());
        let back: Vec<usize> = set.iter().collect();
        let mut g = Graph::empty(back.len()).unwrap();
        for i in 0..back.len() {
            for j in i + 1..back.len() {
                if self.has_edge(back[i], back[j]) {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        (g, back)
    }

    /// Relabeled copy: vertex `v` of `self` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length mismatch");
        let mut g = Graph::empty(self.n).unwrap();
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]).unwrap();
        }
        g
    }

    /// Quotient identifying the endpoints of an edge: `v` merges into `u`,
    /// indices above `v` shift down. Returns the quotient and the map from old
    /// vertices to new ones (with `map[u] == map[v]`).
    pub fn identify(&self, u: usize, v: usize) -> Result<(Graph, Vec<usize>), GraphError> {
        if !self.has_edge(u, v) {
            return Err(GraphError::NotAnEdge(u, v));
        }
        let map: Vec<usize> = (0..self.n)
            .map(|w| {
                let w = if w == v { u } else { w };
                if w > v {
                    w - 1
                } else {
                    w
                }
            })
            .collect();
        let mut g = Graph::empty(self.n - 1)?;
        for (a, b) in self.edges() {
            if (a, b) != (u.min(v), u.max(v)) && map[a] != map[b] {
                let _ = g.add_edge(map[a], map[b]);
            }
        }
        Ok((g, map))
    }

    #[cfg(debug_assertions)]
    pub(crate) fn assert_valid(&self) {
        assert!(self.n <= MAX_VERTICES);
        assert_eq!(self.adj.len(), self.n);
        for v in 0..self.n {
            assert_eq!(self.adj[v] & !self.vertex_mask(), 0, "stray bits in row {v}");
            assert_eq!(self.adj[v] >> v & 1, 0, "self-loop at {v}");
            for w in VertexSet::from_bits(self.adj[v]).iter() {
                assert!(self.adj[w] >> v & 1 == 1, "asymmetric pair ({v}, {w})");
            }
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=", self.n)?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

// ===== standard families ====================================================

impl Graph {
    pub fn complete(n: usize) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::InvalidParameter(
                "complete graph needs at least one vertex".into(),
            ));
        }
        let mut g = Graph::empty(n)?;
        for u in 0..n {
            g.adj[u] = low_mask(n) & !(1u64 << u);
        }
        Ok(g)
    }

    pub fn cycle(len: usize) -> Result<Graph, GraphError> {
        if len < 3 {
            return Err(GraphError::InvalidParameter(format!(
                "cycle length {len} must be at least 3"
            )));
        }
        let mut g = Graph::empty(len)?;
        for v in 0..len {
            g.add_edge(v, (v + 1) % len)?;
        }
        Ok(g)
    }

    /// Wheel with `rim` outer vertices: W(rim, 1).
    pub fn wheel(rim: usize) -> Result<Graph, GraphError> {
        Graph::w_graph(WParams { ell: rim, d: 1 })
    }

    /// W(ell, d): vertices 0..d form the clique, d..d+ell the cycle, and every
    /// clique vertex is joined to every cycle vertex.
    pub fn w_graph(p: WParams) -> Result<Graph, GraphError> {
        p.validate()?;
        let WParams { ell, d } = p;
        let mut g = Graph::empty(ell + d)?;
        for u in 0..d {
            for v in u + 1..ell + d {
                g.add_edge(u, v)?;
            }
        }
        for i in 0..ell {
            g.add_edge(d + i, d + (i + 1) % ell)?;
        }
        Ok(g)
    }

    /// Hajos join: delete edge (a, b) from g1 and (c, d) from g2, identify a
    /// with c, and add the edge (b, d). Vertices of g1 keep their labels; the
    /// remaining vertices of g2 follow in order.
    pub fn hajos_join(
        g1: &Graph,
        (a, b): (usize, usize),
        g2: &Graph,
        (c, d): (usize, usize),
    ) -> Result<Graph, GraphError> {
        if !g1.has_edge(a, b) {
            return Err(GraphError::NotAnEdge(a, b));
        }
        if !g2.has_edge(c, d) {
            return Err(GraphError::NotAnEdge(c, d));
        }
        let n = g1.n + g2.n - 1;
        let mut g = Graph::empty(n)?;
        for (u, v) in g1.edges() {
            if (u, v) != (a.min(b), a.max(b)) {
                g.add_edge(u, v)?;
            }
        }
        let map2 = |w: usize| {
            if w == c {
                a
            } else {
                g1.n + if w < c { w } else { w - 1 }
            }
        };
        for (u, v) in g2.edges() {
            if (u, v) != (c.min(d), c.max(d)) {
                g.add_edge(map2(u), map2(v))?;
            }
        }
        g.add_edge(b, map2(d))?;
        Ok(g)
    }
}

// ===== W-shape recognition ==================================================

/// Orders the vertices of `within` as a single cycle, if they induce one.
pub(crate) fn cycle_order(g: &Graph, within: u64) -> Option<Vec<usize>> {
    let set = VertexSet::from_bits(within);
    let len = set.len();
    if len < 3 {
        return None;
    }
    for v in set.iter() {
        if (g.neighbors(v) & within).count_ones() != 2 {
            return None;
        }
    }
    let start = within.trailing_zeros() as usize;
    let mut order = vec![start];
    let mut seen = 1u64 << start;
    let mut cur = start;
    while order.len() < len {
        let next = g.neighbors(cur) & within & !seen;
        if next == 0 {
            return None; // closed early: more than one cycle
        }
        cur = next.trailing_zeros() as usize;
        seen |= 1u64 << cur;
        order.push(cur);
    }
    // 2-regular and spanning; the closing edge exists by degree count.
    debug_assert!(g.has_edge(*order.last().unwrap(), start));
    Some(order)
}

impl Graph {
    /// If the graph *is* (isomorphic to) W(ell, d) for this `d`, returns
    /// (ell, map) where `map[v]` is the vertex's label in the constructor's
    /// labeling of W(ell, d). Degree counts pin the hub set whenever ell >= 4;
    /// the ell = 3 case is exactly the complete graph on d + 3 vertices.
    pub fn w_form(&self, d: usize) -> Option<(usize, Vec<usize>)> {
        let n = self.n;
        if n < d + 3 {
            return None;
        }
        if d == 0 {
            let order = cycle_order(self, self.vertex_mask())?;
            let mut map = vec![0; n];
            for (pos, &v) in order.iter().enumerate() {
                map[v] = pos;
            }
            return Some((n, map));
        }
        if self.is_complete() {
            return if n == d + 3 {
                Some((3, (0..n).collect()))
            } else {
                None
            };
        }
        let hubs: Vec<usize> = (0..n).filter(|&v| self.degree(v) == n - 1).collect();
        if hubs.len() != d {
            return None;
        }
        let hub_mask: u64 = hubs.iter().map(|&v| 1u64 << v).sum();
        let rim = self.vertex_mask() & !hub_mask;
        let order = cycle_order(self, rim)?;
        let mut map = vec![0; n];
        for (i, &h) in hubs.iter().enumerate() {
            map[h] = i;
        }
        for (pos, &v) in order.iter().enumerate() {
            map[v] = d + pos;
        }
        Some((n - d, map))
    }
}
