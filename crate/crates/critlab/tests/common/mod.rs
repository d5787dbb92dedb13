//! Brute-force oracles shared by the integration suites. Everything here is
//! deliberately naive: independent implementations to check the fast paths
//! against, not production code.
//!
//! Each test binary compiles this module on its own, so a helper used by one
//! suite can look dead to another.
#![allow(dead_code)]

use critlab::Graph;
use rand::rngs::StdRng;
use rand::Rng;

/// Exhaustive chromatic number: try every assignment of up to `k` colors
/// before admitting defeat, for k = 1, 2, ...
pub fn chromatic_number_oracle(g: &Graph) -> usize {
    let n = g.order();
    if n == 0 {
        return 0;
    }
    for k in 1..=n {
        if colorable_oracle(g, k) {
            return k;
        }
    }
    unreachable!("n colors always suffice");
}

pub fn colorable_oracle(g: &Graph, k: usize) -> bool {
    fn assign(g: &Graph, k: usize, colors: &mut Vec<usize>) -> bool {
        let v = colors.len();
        if v == g.order() {
            return true;
        }
        for c in 1..=k {
            let clash = (0..v).any(|u| g.has_edge(u, v) && colors[u] == c);
            if !clash {
                colors.push(c);
                if assign(g, k, colors) {
                    return true;
                }
                colors.pop();
            }
        }
        false
    }
    assign(g, k, &mut Vec::new())
}

/// Every `ell`-subset that is pairwise adjacent, as sorted bitmasks.
pub fn cliques_oracle(g: &Graph, ell: usize) -> Vec<u64> {
    let n = g.order();
    let mut out = Vec::new();
    for mask in 0u64..1 << n {
        if mask.count_ones() as usize != ell {
            continue;
        }
        let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let ok = verts
            .iter()
            .enumerate()
            .all(|(i, &u)| verts[i + 1..].iter().all(|&v| g.has_edge(u, v)));
        if ok {
            out.push(mask);
        }
    }
    out
}

/// Erdos-Renyi graph on `n` vertices with edge probability `p`.
pub fn random_graph(rng: &mut StdRng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n).unwrap();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// A uniformly random permutation of 0..n.
pub fn random_permutation(rng: &mut StdRng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Graph on `n` vertices from the bits of `mask`, pairs in column-major
/// order (0,1),(0,2),(1,2),(0,3),...
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut g = Graph::empty(n).unwrap();
    let mut bit = 0;
    for j in 1..n {
        for i in 0..j {
            if mask >> bit & 1 == 1 {
                g.add_edge(i, j).unwrap();
            }
            bit += 1;
        }
    }
    g
}
