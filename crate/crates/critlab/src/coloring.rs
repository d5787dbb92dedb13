//! Exact proper-coloring search. Backtracking with saturation-first vertex
//! selection and a first-use color cap: a vertex may only take a color at
//! most one past the largest color used so far, which breaks color-name
//! symmetry without losing completeness.

use serde::{Deserialize, Serialize};

use crate::cliques::greedy_clique;
use crate::graph::{Graph, GraphError, VertexSet};

/// Proper coloring with colors 1..=palette.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Coloring {
    assignment: Vec<usize>,
    palette: usize,
}

impl Coloring {
    pub fn new(assignment: Vec<usize>, palette: usize) -> Self {
        Coloring {
            assignment,
            palette,
        }
    }

    #[inline]
    pub fn color(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn palette(&self) -> usize {
        self.palette
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Vertices of each color, indexed by color - 1.
    pub fn classes(&self) -> Vec<VertexSet> {
        let mut out = vec![VertexSet::EMPTY; self.palette];
        for (v, &c) in self.assignment.iter().enumerate() {
            if c >= 1 && c <= self.palette {
                out[c - 1].insert(v);
            }
        }
        out
    }

    /// Renames colors: old color c becomes map[c - 1]. The map must be a
    /// permutation of 1..=palette.
    pub(crate) fn remap(&self, map: &[usize]) -> Coloring {
        debug_assert_eq!(map.len(), self.palette);
        Coloring {
            assignment: self.assignment.iter().map(|&c| map[c - 1]).collect(),
            palette: self.palette,
        }
    }
}

/// True iff every vertex has a color in 1..=palette and no edge, other than
/// the optional skipped one, joins two vertices of the same color.
pub fn verify_coloring(g: &Graph, c: &Coloring, skip: Option<(usize, usize)>) -> bool {
    if c.assignment.len() != g.order() {
        return false;
    }
    if c.assignment.iter().any(|&x| x < 1 || x > c.palette) {
        return false;
    }
    let skip = skip.map(|(u, v)| (u.min(v), u.max(v)));
    g.edges()
        .all(|e| Some(e) == skip || c.assignment[e.0] != c.assignment[e.1])
}

fn search(g: &Graph, k: usize, colors: &mut [usize], colored: usize, max_used: usize) -> bool {
    let n = g.order();
    if colored == n {
        return true;
    }
    // Most saturated uncolored vertex, lowest index on ties.
    let mut pick = usize::MAX;
    let mut pick_mask = 0u64;
    let mut best_sat = usize::MAX;
    for v in 0..n {
        if colors[v] != 0 {
            continue;
        }
        let mut mask = 0u64;
        for w in VertexSet::from_bits(g.neighbors(v)).iter() {
            if colors[w] != 0 {
                mask |= 1u64 << (colors[w] - 1);
            }
        }
        let sat = mask.count_ones() as usize;
        if best_sat == usize::MAX || sat > best_sat {
            best_sat = sat;
            pick = v;
            pick_mask = mask;
        }
    }
    let cap = k.min(max_used + 1);
    for c in 1..=cap {
        if pick_mask >> (c - 1) & 1 == 0 {
            colors[pick] = c;
            if search(g, k, colors, colored + 1, max_used.max(c)) {
                return true;
            }
            colors[pick] = 0;
        }
    }
    false
}

/// Finds a proper coloring with at most k colors, or proves none exists.
pub fn k_colorable(g: &Graph, k: usize) -> Option<Coloring> {
    let n = g.order();
    if n == 0 {
        return Some(Coloring::new(Vec::new(), k));
    }
    if k == 0 {
        return None;
    }
    let mut colors = vec![0usize; n];
    if search(g, k, &mut colors, 0, 0) {
        let c = Coloring::new(colors, k);
        debug_assert!(verify_coloring(g, &c, None));
        Some(c)
    } else {
        None
    }
}

/// Color count of a straight saturation-order greedy pass; an upper bound
/// for the chromatic number, cheap enough for filtering.
pub fn greedy_upper_bound(g: &Graph) -> usize {
    let n = g.order();
    let mut colors = vec![0usize; n];
    let mut used = 0usize;
    for _ in 0..n {
        let mut pick = usize::MAX;
        let mut pick_mask = 0u64;
        let mut best_sat = usize::MAX;
        for v in 0..n {
            if colors[v] != 0 {
                continue;
            }
            let mut mask = 0u64;
            for w in VertexSet::from_bits(g.neighbors(v)).iter() {
                if colors[w] != 0 {
                    mask |= 1u64 << (colors[w] - 1);
                }
            }
            let sat = mask.count_ones() as usize;
            if best_sat == usize::MAX || sat > best_sat {
                best_sat = sat;
                pick = v;
                pick_mask = mask;
            }
        }
        let c = (1..).find(|&c| pick_mask >> (c - 1) & 1 == 0).unwrap();
        colors[pick] = c;
        used = used.max(c);
    }
    used.max(usize::from(n > 0))
}

/// Exact chromatic number, bracketed between a greedy clique lower bound and
/// the greedy coloring upper bound.
pub fn chromatic_number(g: &Graph) -> usize {
    let n = g.order();
    if n == 0 {
        return 0;
    }
    let lower = greedy_clique(g).len().max(1);
    let upper = greedy_upper_bound(g);
    for k in lower..upper {
        if k_colorable(g, k).is_some() {
            return k;
        }
    }
    upper
}

/// Proper coloring of G - uv that gives u and v the same color: colors the
/// quotient graph with u and v identified, then pulls the colors back.
pub fn identified_coloring(
    g: &Graph,
    (u, v): (usize, usize),
    palette: usize,
) -> Result<Option<Coloring>, GraphError> {
    let (q, map) = g.identify(u, v)?;
    Ok(k_colorable(&q, palette).map(|qc| {
        let c = Coloring::new(
            (0..g.order()).map(|w| qc.color(map[w])).collect(),
            palette,
        );
        debug_assert!(verify_coloring(g, &c, Some((u, v))));
        debug_assert_eq!(c.color(u), c.color(v));
        c
    }))
}
