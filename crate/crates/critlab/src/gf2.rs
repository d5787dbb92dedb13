//! GF(2) linear algebra over clique incidence rows: rank, dependency
//! witnesses, and parity bookkeeping for clique subfamilies.

use std::collections::BTreeMap;

use crate::cliques::{CliqueCatalog, IncidenceMatrix};
use crate::graph::{Graph, VertexSet};

/// Support of a zero-sum row selection: some cliques and some singleton rows
/// whose GF(2) sum vanishes. Clique indices point into the catalog block;
/// singleton indices point into the singleton block (0 = first singleton row).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dependency {
    pub clique_indices: Vec<usize>,
    pub singleton_indices: Vec<usize>,
}

impl Dependency {
    pub fn support_size(&self) -> usize {
        self.clique_indices.len() + self.singleton_indices.len()
    }
}

#[inline]
fn lowest_bit(x: u64) -> u64 {
    x & x.wrapping_neg()
}

fn rank_of_rows(rows: &[u64]) -> usize {
    // Reduce each row against the basis in insertion order; every basis
    // vector has a unique pivot (its lowest set bit) and no bits at earlier
    // pivots, so one pass suffices.
    let mut basis: Vec<u64> = Vec::new();
    for &row in rows {
        let mut r = row;
        for &b in &basis {
            if r & lowest_bit(b) != 0 {
                r ^= b;
            }
        }
        if r != 0 {
            basis.push(r);
        }
    }
    basis.len()
}

/// GF(2) row rank. The matrix itself is untouched.
pub fn rank(m: &IncidenceMatrix) -> usize {
    rank_of_rows(m.rows())
}

/// Word-array bitset over row indices, for combination bookkeeping when the
/// row count exceeds 64.
#[derive(Clone, PartialEq, Eq)]
struct Combo(Vec<u64>);

impl Combo {
    fn unit(i: usize, words: usize) -> Combo {
        let mut c = vec![0u64; words];
        c[i / 64] |= 1u64 << (i % 64);
        Combo(c)
    }

    fn xor_in(&mut self, other: &Combo) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.0.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                out.push(wi * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        out
    }
}

/// A nonempty zero-sum row selection, or None when the rows are independent.
/// Elimination carries identity bookkeeping; among the dependencies it
/// surfaces (one per dependent row) the smallest support wins, first found on
/// ties. Global minimality is not promised.
pub fn find_dependency(m: &IncidenceMatrix) -> Option<Dependency> {
    let rows = m.rows();
    let words = rows.len().div_ceil(64).max(1);
    let mut basis: Vec<(u64, Combo)> = Vec::new();
    let mut best: Option<Combo> = None;
    for (i, &row) in rows.iter().enumerate() {
        let mut r = row;
        let mut combo = Combo::unit(i, words);
        for (b, bc) in &basis {
            if r & lowest_bit(*b) != 0 {
                r ^= b;
                combo.xor_in(bc);
            }
        }
        if r == 0 {
            let better = best
                .as_ref()
                .map(|b| combo.count() < b.count())
                .unwrap_or(true);
            if better {
                best = Some(combo);
            }
        } else {
            basis.push((r, combo));
        }
    }
    best.map(|combo| {
        let mut clique_indices = Vec::new();
        let mut singleton_indices = Vec::new();
        for idx in combo.indices() {
            if idx < m.clique_rows() {
                clique_indices.push(idx);
            } else {
                singleton_indices.push(idx - m.clique_rows());
            }
        }
        Dependency {
            clique_indices,
            singleton_indices,
        }
    })
}

/// Re-checks a dependency witness: indices in range, selection nonempty, and
/// the selected rows XOR to zero.
pub fn verify_dependency(m: &IncidenceMatrix, d: &Dependency) -> bool {
    if d.support_size() == 0 {
        return false;
    }
    let singleton_rows = m.rows().len() - m.clique_rows();
    let mut acc = 0u64;
    for &i in &d.clique_indices {
        if i >= m.clique_rows() {
            return false;
        }
        acc ^= m.rows()[i];
    }
    for &j in &d.singleton_indices {
        if j >= singleton_rows {
            return false;
        }
        acc ^= m.rows()[m.clique_rows() + j];
    }
    acc == 0
}

/// Parity diagnostics of a clique subfamily.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityProfile {
    /// |family| mod 2.
    pub family_size_odd: bool,
    /// Vertices lying in an odd number of family members.
    pub vertex_parity: VertexSet,
    /// Pair incidence counts t(e, family), keyed (min, max); absent pairs
    /// have count 0.
    pub edge_count: BTreeMap<(usize, usize), usize>,
    /// Number of (z, T) incidences with T in the family and z in the focus
    /// class.
    pub lambda: usize,
}

impl ParityProfile {
    pub fn edge_count(&self, u: usize, v: usize) -> usize {
        *self.edge_count.get(&(u.min(v), u.max(v))).unwrap_or(&0)
    }
}

/// Exact parities and counts for the subfamily of catalog members selected by
/// `family` (catalog indices), with incidences counted against `focus_class`.
pub fn parity_profile(
    g: &Graph,
    cat: &CliqueCatalog,
    family: &[usize],
    focus_class: VertexSet,
) -> ParityProfile {
    debug_assert_eq!(g.order(), cat.order());
    let mut counts = vec![0usize; cat.order()];
    let mut edge_count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut lambda = 0usize;
    for &i in family {
        let member = cat.members()[i];
        lambda += member.intersection(focus_class).len();
        let vs: Vec<usize> = member.iter().collect();
        for (a, &u) in vs.iter().enumerate() {
            counts[u] += 1;
            for &v in &vs[a + 1..] {
                *edge_count.entry((u, v)).or_insert(0) += 1;
            }
        }
    }
    let vertex_parity = (0..cat.order()).filter(|&v| counts[v] % 2 == 1).collect();
    ParityProfile {
        family_size_odd: family.len() % 2 == 1,
        vertex_parity,
        edge_count,
        lambda,
    }
}
