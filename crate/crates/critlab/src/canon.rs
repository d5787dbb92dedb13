//! Canonical labeling by minimizing the adjacency bit-string over all vertex
//! orderings, with branch-and-bound.
//!
//! The string is read in column order: position j contributes the j bits
//! [p_0 ~ p_j], ..., [p_{j-1} ~ p_j], most significant first. Column j only
//! involves positions up to j, so a prefix of the minimal string is the
//! minimal string of the graph with its last positions deleted. The orderly
//! generator in `census` relies on exactly that: a graph is accepted there iff
//! it already carries its own minimal labeling, which this module tests
//! without computing the full form.

use crate::graph::{Graph, GraphError};

const CANON_LIMIT: usize = 16;

/// Column values of the identity labeling.
fn identity_columns(g: &Graph) -> Vec<u64> {
    let n = g.order();
    let mut cols = vec![0u64; n];
    for j in 1..n {
        let mut c = 0u64;
        for i in 0..j {
            c = c << 1 | g.has_edge(i, j) as u64;
        }
        cols[j] = c;
    }
    cols
}

fn graph_from_columns(n: usize, cols: &[u64]) -> Graph {
    let mut g = Graph::empty(n).unwrap();
    for j in 1..n {
        for i in 0..j {
            if cols[j] >> (j - 1 - i) & 1 == 1 {
                g.add_edge(i, j).unwrap();
            }
        }
    }
    g
}

/// Transposing u and v is an automorphism iff their rows agree elsewhere.
#[inline]
fn interchangeable(g: &Graph, u: usize, v: usize) -> bool {
    (g.neighbors(u) ^ g.neighbors(v)) & !(1u64 << u | 1u64 << v) == 0
}

struct Search<'a> {
    g: &'a Graph,
    n: usize,
    used: u64,
    // partial[v] = bits of v's adjacency to the placed prefix, oldest first.
    partial: Vec<u64>,
    cur: Vec<u64>,
    best: Vec<u64>,
    // candidate scratch, one slot per depth to keep recursion allocation-free
    cand: Vec<Vec<(u64, usize)>>,
    abort_on_improve: bool,
    aborted: bool,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, best: Vec<u64>, abort_on_improve: bool) -> Self {
        let n = g.order();
        Search {
            g,
            n,
            used: 0,
            partial: vec![0; n],
            cur: vec![0; n],
            best,
            cand: vec![Vec::with_capacity(n); n],
            abort_on_improve,
            aborted: false,
        }
    }

    fn place(&mut self, v: usize) {
        self.used |= 1u64 << v;
        let row = self.g.neighbors(v);
        for w in 0..self.n {
            if self.used >> w & 1 == 0 {
                self.partial[w] = self.partial[w] << 1 | (row >> w & 1) as u64;
            }
        }
    }

    fn unplace(&mut self, v: usize) {
        for w in 0..self.n {
            if self.used >> w & 1 == 0 {
                self.partial[w] >>= 1;
            }
        }
        self.used &= !(1u64 << v);
    }

    /// Explores labelings extending the current prefix. `tight` means the
    /// prefix columns equal `best`'s. Returns true if `best` was lowered.
    fn dfs(&mut self, depth: usize, tight: bool) -> bool {
        if depth == self.n {
            if !tight {
                self.best.copy_from_slice(&self.cur);
                if self.abort_on_improve {
                    self.aborted = true;
                }
                return true;
            }
            return false;
        }
        let mut cands = std::mem::take(&mut self.cand[depth]);
        cands.clear();
        for v in 0..self.n {
            if self.used >> v & 1 == 0 {
                cands.push((self.partial[v], v));
            }
        }
        cands.sort_unstable();

        let mut tight = tight;
        let mut improved = false;
        let mut branched_len = 0usize;
        let mut branched = [0usize; 64];
        for idx in 0..cands.len() {
            let (col, v) = cands[idx];
            if tight && col > self.best[depth] {
                break;
            }
            if branched[..branched_len]
                .iter()
                .any(|&u| interchangeable(self.g, u, v))
            {
                continue;
            }
            branched[branched_len] = v;
            branched_len += 1;

            let child_tight = tight && col == self.best[depth];
            if self.abort_on_improve && !child_tight {
                // Any completion of a strictly smaller prefix beats `best`.
                self.aborted = true;
                return true;
            }
            self.cur[depth] = col;
            self.place(v);
            let sub = self.dfs(depth + 1, child_tight);
            self.unplace(v);
            if self.aborted {
                return true;
            }
            if sub {
                improved = true;
                // The new best runs through this prefix and this column.
                tight = true;
                debug_assert_eq!(self.best[depth], col);
            }
        }
        self.cand[depth] = cands;
        improved
    }
}

/// Greedy descent: always take the smallest column next. Seeds the search
/// with a decent complete labeling.
fn greedy_columns(g: &Graph) -> Vec<u64> {
    let n = g.order();
    let mut s = Search::new(g, vec![0; n], false);
    let mut cols = vec![0u64; n];
    for depth in 0..n {
        let (col, v) = (0..n)
            .filter(|&v| s.used >> v & 1 == 0)
            .map(|v| (s.partial[v], v))
            .min()
            .unwrap();
        cols[depth] = col;
        s.place(v);
    }
    cols
}

fn minimal_columns(g: &Graph) -> Vec<u64> {
    if g.order() == 0 {
        return Vec::new();
    }
    let seed = greedy_columns(g);
    let mut s = Search::new(g, seed, false);
    s.dfs(0, true);
    s.best
}

/// Lexicographically least labeled copy of `g` over all vertex orderings.
/// Isomorphic graphs map to the same result.
pub fn canonical_form(g: &Graph) -> Result<Graph, GraphError> {
    if g.order() > CANON_LIMIT {
        return Err(GraphError::CanonicalOrderLimit(g.order()));
    }
    Ok(graph_from_columns(g.order(), &minimal_columns(g)))
}

/// Does `g` already carry its minimal labeling? Aborts on the first ordering
/// found to beat the identity, so acceptance tests in the generator stay
/// cheap. Valid for any order, but exponential in principle; callers keep n
/// small.
pub(crate) fn is_canonically_labeled(g: &Graph) -> bool {
    if g.order() <= 1 {
        return true;
    }
    let own = identity_columns(g);
    let mut s = Search::new(g, own, true);
    s.dfs(0, true);
    !s.aborted
}

/// Isomorphism test via canonical forms. Order mismatch is a plain `false`;
/// orders beyond the canonical limit are an error.
pub fn is_isomorphic(g1: &Graph, g2: &Graph) -> Result<bool, GraphError> {
    if g1.order() != g2.order() {
        return Ok(false);
    }
    Ok(canonical_form(g1)? == canonical_form(g2)?)
}
