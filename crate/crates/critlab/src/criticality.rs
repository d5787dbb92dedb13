//! k-criticality certification and per-edge clique-count audits.
//!
//! A graph is k-critical when its chromatic number is k and every proper
//! subgraph is (k-1)-colorable. With no isolated vertices, edge deletions
//! suffice: deleting a vertex removes a superset of the edges any single
//! edge deletion removes, so chi(G - e) <= k-1 for all e already forces
//! chi(G - v) <= k-1 for all v.

use std::collections::BTreeMap;

use crate::cliques::{has_clique, CliqueCatalog};
use crate::coloring::{chromatic_number, k_colorable};
use crate::graph::{Graph, GraphError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Critical,
    NotChromaticK { chi: usize },
    EdgeNotCritical { edge: (usize, usize), chi_without: usize },
    IsolatedVertex { vertex: usize },
}

/// Full diagnostics of a criticality check. Fields are populated even when
/// the verdict is negative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalityReport {
    pub k: usize,
    pub chi: usize,
    pub min_degree: usize,
    /// chi(G - e) per edge. When chi(G) = k this is decided by a single
    /// (k-1)-colorability test, since the value can only be k-1 or k.
    pub edge_chi: BTreeMap<(usize, usize), usize>,
    pub verdict: Verdict,
}

impl CriticalityReport {
    pub fn is_critical(&self) -> bool {
        self.verdict == Verdict::Critical
    }
}

/// Certifies or refutes k-criticality. Verdict priority when several
/// defects coexist: isolated vertex, then wrong chromatic number, then the
/// first edge (in lexicographic order) whose deletion keeps the chromatic
/// number at k.
pub fn is_k_critical(g: &Graph, k: usize) -> Result<CriticalityReport, GraphError> {
    if k < 2 {
        return Err(GraphError::InvalidParameter(format!(
            "criticality needs k >= 2, got {k}"
        )));
    }
    if g.order() == 0 {
        return Err(GraphError::InvalidParameter(
            "criticality needs at least one vertex".into(),
        ));
    }
    let n = g.order();
    let chi = chromatic_number(g);
    let min_degree = g.min_degree().unwrap();

    let mut edge_chi = BTreeMap::new();
    let mut bad_edge: Option<(usize, usize)> = None;
    for (u, v) in g.edges() {
        let reduced = g.without_edge(u, v).unwrap();
        let chi_without = if chi == k {
            if k_colorable(&reduced, k - 1).is_some() {
                k - 1
            } else {
                k
            }
        } else {
            chromatic_number(&reduced)
        };
        edge_chi.insert((u, v), chi_without);
        if chi == k && chi_without == k && bad_edge.is_none() {
            bad_edge = Some((u, v));
        }
    }

    let isolated = (n > 1).then(|| (0..n).find(|&v| g.degree(v) == 0)).flatten();
    let verdict = if let Some(vertex) = isolated {
        Verdict::IsolatedVertex { vertex }
    } else if chi != k {
        Verdict::NotChromaticK { chi }
    } else if let Some(edge) = bad_edge {
        Verdict::EdgeNotCritical {
            edge,
            chi_without: k,
        }
    } else {
        Verdict::Critical
    };

    if verdict == Verdict::Critical {
        assert!(
            min_degree >= k - 1,
            "critical graph with min degree {min_degree} < k-1"
        );
        assert!(
            !has_clique(g, k) || (n == k && g.is_complete()),
            "critical graph properly contains a {k}-clique"
        );
    }

    Ok(CriticalityReport {
        k,
        chi,
        min_degree,
        edge_chi,
        verdict,
    })
}

/// Per-edge clique multiplicities and the bounds they imply: an edge lying in
/// exactly d cliques of size k-1 bounds the clique total by n - (k-2-d).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeBoundAudit {
    pub k: usize,
    pub n: usize,
    /// t_{k-1}(G).
    pub total: usize,
    pub per_edge_d: BTreeMap<(usize, usize), usize>,
    pub implied_bounds: BTreeMap<(usize, usize), usize>,
    /// Smallest clique multiplicity over edges; None for edgeless graphs.
    pub min_d: Option<usize>,
    /// First edge lying in at most one clique, if any.
    pub su_witness: Option<(usize, usize)>,
    /// Edges whose implied bound the clique total exceeds.
    pub violations: Vec<(usize, usize)>,
}

impl EdgeBoundAudit {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Audits the per-edge bound for every edge. `cat` must be the (k-1)-clique
/// catalog of `g`; the caller certifies criticality separately.
pub fn edge_bound_audit(g: &Graph, k: usize, cat: &CliqueCatalog) -> EdgeBoundAudit {
    debug_assert_eq!(cat.ell(), k - 1);
    debug_assert_eq!(cat.order(), g.order());
    let n = g.order();
    let total = cat.len();
    let mut per_edge_d: BTreeMap<(usize, usize), usize> = g.edges().map(|e| (e, 0)).collect();
    for m in cat.members() {
        let vs: Vec<usize> = m.iter().collect();
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                *per_edge_d.get_mut(&(u, v)).unwrap() += 1;
            }
        }
    }
    let implied_bounds: BTreeMap<(usize, usize), usize> = per_edge_d
        .iter()
        .map(|(&e, &d)| (e, (n + d).saturating_sub(k - 2)))
        .collect();
    let violations: Vec<(usize, usize)> = implied_bounds
        .iter()
        .filter(|&(_, &bound)| total > bound)
        .map(|(&e, _)| e)
        .collect();
    let min_d = per_edge_d.values().copied().min();
    let su_witness = per_edge_d
        .iter()
        .find(|&(_, &d)| d <= 1)
        .map(|(&e, _)| e);
    EdgeBoundAudit {
        k,
        n,
        total,
        per_edge_d,
        implied_bounds,
        min_d,
        su_witness,
        violations,
    }
}

/// The smallest per-edge clique multiplicity. At most 1 on every known
/// k-critical graph with n > k (verified for k <= 7; open beyond).
pub fn su_statistic(audit: &EdgeBoundAudit) -> Option<usize> {
    audit.min_d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cliques::enumerate_cliques;
    use crate::graph::WParams;

    #[test]
    fn complete_graphs_are_critical() {
        let report = is_k_critical(&Graph::complete(4).unwrap(), 4).unwrap();
        assert_eq!(report.verdict, Verdict::Critical);
        assert_eq!(report.chi, 4);
        assert_eq!(report.min_degree, 3);
        assert!(report.edge_chi.values().all(|&c| c == 3));
    }

    #[test]
    fn odd_wheel_is_4_critical() {
        let report = is_k_critical(&Graph::wheel(5).unwrap(), 4).unwrap();
        assert_eq!(report.verdict, Verdict::Critical);
        assert!(report.edge_chi.values().all(|&c| c == 3));
    }

    #[test]
    fn even_cycle_is_not_3_chromatic() {
        let report = is_k_critical(&Graph::cycle(6).unwrap(), 3).unwrap();
        assert_eq!(report.verdict, Verdict::NotChromaticK { chi: 2 });
    }

    #[test]
    fn isolated_vertex_verdict() {
        let mut g = Graph::empty(5).unwrap();
        for u in 0..4 {
            for v in u + 1..4 {
                g.add_edge(u, v).unwrap();
            }
        }
        let report = is_k_critical(&g, 4).unwrap();
        assert_eq!(report.verdict, Verdict::IsolatedVertex { vertex: 4 });
        assert_eq!(report.chi, 4); // fields stay populated
        assert_eq!(report.min_degree, 0);
    }

    #[test]
    fn pendant_edge_is_not_critical() {
        // K4 plus a pendant vertex.
        let g = Graph::from_edges(
            5,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4)],
        )
        .unwrap();
        let report = is_k_critical(&g, 4).unwrap();
        assert_eq!(
            report.verdict,
            Verdict::EdgeNotCritical {
                edge: (0, 4),
                chi_without: 4
            }
        );
        assert_eq!(report.edge_chi[&(0, 4)], 4);
        assert_eq!(report.edge_chi[&(0, 1)], 3);
    }

    #[test]
    fn not_edge_critical_when_chi_low() {
        // chi != k populates edge_chi with true chromatic numbers.
        let c4 = Graph::cycle(4).unwrap();
        let report = is_k_critical(&c4, 3).unwrap();
        assert_eq!(report.verdict, Verdict::NotChromaticK { chi: 2 });
        assert!(report.edge_chi.values().all(|&c| c == 2));
    }

    #[test]
    fn parameter_guards() {
        assert!(is_k_critical(&Graph::complete(3).unwrap(), 1).is_err());
        assert!(is_k_critical(&Graph::empty(0).unwrap(), 4).is_err());
    }

    #[test]
    fn vertex_deletion_consistency_spot_check() {
        let w = Graph::wheel(5).unwrap();
        assert!(is_k_critical(&w, 4).unwrap().is_critical());
        for v in 0..w.order() {
            let reduced = w.without_vertex(v).unwrap();
            assert_eq!(chromatic_number(&reduced), 3, "vertex {v}");
        }
    }

    #[test]
    fn wheel_edge_bounds() {
        let w = Graph::wheel(5).unwrap();
        let cat = enumerate_cliques(&w, 3).unwrap();
        let audit = edge_bound_audit(&w, 4, &cat);
        assert_eq!(audit.total, 5);
        // Rim edges sit in one triangle: bound 6 - (4-2-1) = 5, tight.
        assert_eq!(audit.per_edge_d[&(1, 2)], 1);
        assert_eq!(audit.implied_bounds[&(1, 2)], 5);
        // Spokes sit in two: bound 6.
        assert_eq!(audit.per_edge_d[&(0, 1)], 2);
        assert_eq!(audit.implied_bounds[&(0, 1)], 6);
        assert!(audit.passed());
        assert_eq!(su_statistic(&audit), Some(1));
        assert_eq!(audit.su_witness, Some((1, 2)));
    }

    #[test]
    fn w72_edge_bounds() {
        let g = Graph::w_graph(WParams { ell: 7, d: 2 }).unwrap();
        let cat = enumerate_cliques(&g, 4).unwrap();
        let audit = edge_bound_audit(&g, 5, &cat);
        assert_eq!(audit.total, 7);
        // A cycle edge lies in one 4-clique: bound 9 - (5-2-1) = 7, tight.
        assert_eq!(audit.per_edge_d[&(2, 3)], 1);
        assert_eq!(audit.implied_bounds[&(2, 3)], 7);
        assert!(audit.passed());
        assert_eq!(su_statistic(&audit), Some(1));
    }

    #[test]
    fn k4_su_statistic() {
        let k4 = Graph::complete(4).unwrap();
        let cat = enumerate_cliques(&k4, 3).unwrap();
        let audit = edge_bound_audit(&k4, 4, &cat);
        assert_eq!(su_statistic(&audit), Some(2));
        assert_eq!(audit.su_witness, None);
        assert!(audit.passed());
    }
}
