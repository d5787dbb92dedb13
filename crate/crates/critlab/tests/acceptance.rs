//! End-to-end acceptance audit. Each test verifies one headline guarantee of
//! the laboratory over the exhaustive small-graph censuses and prints a
//! single PASS line (visible with --nocapture); a violation panics with a
//! FAIL line naming what broke.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use common::{chromatic_number_oracle, cliques_oracle, graph_from_mask, random_graph};
use critlab::census::{
    certify_critical, equality_census, for_each_generated, generate_all, run_census,
    CensusConfig, CensusReport, SourceKind,
};
use critlab::cliques::{clique_stats, enumerate_cliques};
use critlab::coloring::chromatic_number;
use critlab::criticality::edge_bound_audit;
use critlab::trace::{build_trace, check_trace, TraceCertificate};
use critlab::{canonical_form, graph6, is_isomorphic, Graph, WParams};

fn full_census(k: usize, n_min: usize, n_max: usize) -> CensusReport {
    run_census(&CensusConfig::full(k, n_min, n_max, SourceKind::InternalGenerator))
        .unwrap_or_else(|e| panic!("FAIL: census k={k} n={n_min}..={n_max} did not run: {e}"))
}

/// Violations of one named check, as (n, graph6) pairs.
fn violations_of(report: &CensusReport, token: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    for nr in &report.per_n {
        if let Some(gs) = nr.violations_by_check.get(token) {
            out.extend(gs.iter().map(|g| (nr.n, g.clone())));
        }
    }
    out
}

fn assert_clean(report: &CensusReport, token: &str, what: &str) {
    let bad = violations_of(report, token);
    assert!(
        bad.is_empty(),
        "FAIL: {what}: k = {}, violations {bad:?}",
        report.config.k
    );
}

fn critical_counts(report: &CensusReport) -> Vec<(usize, usize)> {
    report.per_n.iter().map(|nr| (nr.n, nr.critical)).collect()
}

// ---------------------------------------------------------------------------
// Clique-total bound t_{k-1} <= n - k + 3 over the exhaustive censuses.

#[test]
fn bound_holds_for_every_4_critical_graph_on_5_to_9_vertices() {
    let t0 = Instant::now();
    let report = full_census(4, 5, 9);
    let elapsed = t0.elapsed();
    assert_clean(&report, "thm2", "4-critical graph exceeds t_3 <= n - 1");
    assert!(
        !report.has_violations(),
        "FAIL: k = 4 census flagged violations: {:?}",
        report
            .per_n
            .iter()
            .flat_map(|nr| nr.violations_by_check.iter())
            .collect::<Vec<_>>()
    );
    assert!(
        elapsed.as_secs() < 600,
        "FAIL: k = 4 full census took {elapsed:?}, budget is 10 minutes"
    );
    println!(
        "PASS: every 4-critical graph on 5..=9 vertices satisfies t_3 <= n - 1; \
         critical counts per n: {:?}; all checks clean in {:.1}s",
        critical_counts(&report),
        elapsed.as_secs_f64()
    );
}

#[test]
fn bound_holds_for_every_5_and_6_critical_graph_up_to_9_vertices() {
    let t0 = Instant::now();
    let r5 = full_census(5, 6, 9);
    let r6 = full_census(6, 7, 9);
    let elapsed = t0.elapsed();
    assert_clean(&r5, "thm2", "5-critical graph exceeds t_4 <= n - 2");
    assert_clean(&r6, "thm2", "6-critical graph exceeds t_5 <= n - 3");
    for r in [&r5, &r6] {
        assert!(
            !r.has_violations(),
            "FAIL: k = {} census flagged violations",
            r.config.k
        );
    }
    assert!(
        elapsed.as_secs() < 600,
        "FAIL: k = 5/6 censuses took {elapsed:?}, budget is 10 minutes"
    );
    println!(
        "PASS: every 5- and 6-critical graph up to 9 vertices satisfies t_(k-1) <= n - k + 3; \
         critical counts k=5: {:?}, k=6: {:?}; clean in {:.1}s",
        critical_counts(&r5),
        critical_counts(&r6),
        elapsed.as_secs_f64()
    );
}

// ---------------------------------------------------------------------------
// Equality graphs are exactly the predicted clique-cycle joins.

#[test]
fn equality_graphs_are_the_predicted_joins_and_only_odd_wheels_at_k4() {
    let r4 = full_census(4, 5, 9);
    let eq4 = equality_census(&r4, 4).unwrap();
    let find = |eq: &BTreeMap<usize, Vec<_>>, n: usize, reference: &Graph, what: &str| {
        let entries: &Vec<critlab::census::EqualityEntry> =
            eq.get(&n).unwrap_or_else(|| panic!("FAIL: no census row at n = {n}"));
        let hit = entries.iter().any(|e| {
            let g = graph6::decode(&e.graph6).unwrap();
            is_isomorphic(&g, reference).unwrap()
        });
        assert!(hit, "FAIL: {what} missing among equality graphs at n = {n}: {entries:?}");
    };
    let w51 = Graph::w_graph(WParams { ell: 5, d: 1 }).unwrap();
    let w71 = Graph::w_graph(WParams { ell: 7, d: 1 }).unwrap();
    find(&eq4, 6, &w51, "the 5-wheel W(5,1)");
    find(&eq4, 8, &w71, "the 7-wheel W(7,1)");
    let mut wheels = 0;
    for (n, entries) in &eq4 {
        for e in entries {
            assert_eq!(
                e.odd_wheel,
                Some(true),
                "FAIL: k = 4 equality graph at n = {n} is not an odd wheel: {}",
                e.graph6
            );
            wheels += 1;
        }
    }

    let r5 = full_census(5, 6, 9);
    let eq5 = equality_census(&r5, 5).unwrap();
    let w72 = Graph::w_graph(WParams { ell: 7, d: 2 }).unwrap();
    find(&eq5, 9, &w72, "the join W(7,2)");
    let w72_hit = eq5[&9]
        .iter()
        .map(|e| graph6::decode(&e.graph6).unwrap())
        .find(|g| is_isomorphic(g, &w72).unwrap())
        .unwrap();
    let t4 = enumerate_cliques(&w72_hit, 4).unwrap().len();
    assert_eq!(t4, 7, "FAIL: W(7,2) should carry exactly 7 copies of K_4, found {t4}");

    println!(
        "PASS: equality graphs at k = 4 are exactly odd wheels ({wheels} found, including \
         W(5,1) at n = 6 and W(7,1) at n = 8); at k = 5, n = 9 the join W(7,2) attains the \
         bound with t_4 = 7"
    );
}

// ---------------------------------------------------------------------------
// Clique total at most n, equality only at the complete graph.

#[test]
fn clique_total_is_at_most_order_with_equality_only_at_complete_graphs() {
    let mut checked = 0;
    for k in 4..=7usize {
        let report = full_census(k, k, 9);
        assert_clean(&report, "az_bound", "clique total exceeds the vertex count");
        for nr in &report.per_n {
            if nr.n == k {
                assert_eq!(
                    (nr.critical, nr.max_t),
                    (1, Some(k)),
                    "FAIL: at n = k = {k} the census should see exactly K_{k} with t = {k}"
                );
            } else if let Some(mt) = nr.max_t {
                assert!(
                    mt < nr.n,
                    "FAIL: k = {k}, n = {}: clique total {mt} reaches the vertex count \
                     on a non-complete graph",
                    nr.n
                );
            }
            checked += nr.critical;
        }
    }
    println!(
        "PASS: t_(k-1) <= n for all {checked} critical graphs (k in 4..=7, n <= 9), \
         with equality exactly at the complete graph K_k"
    );
}

// ---------------------------------------------------------------------------
// A clique-cycle witness forces the whole graph to be the join, cycle odd.

#[test]
fn witnessed_graphs_are_the_full_join_with_odd_cycle() {
    for k in 4..=7usize {
        let report = full_census(k, k + 1, 9);
        assert_clean(
            &report,
            "lemma1",
            "graph has a clique-cycle witness but is not the odd join",
        );
    }
    // Non-vacuity: the joins themselves are k-critical and sit in the range.
    for k in 4..=7usize {
        let w = Graph::w_graph(WParams { ell: 5, d: k - 3 }).unwrap();
        assert!(
            certify_critical(&w, k),
            "FAIL: W(5,{}) should be {k}-critical",
            k - 3
        );
    }
    println!(
        "PASS: every critical graph with a clique-cycle witness (k in 4..=7, n <= 9) is \
         the join W(n-k+3, k-3) with an odd cycle; the joins W(5, k-3) themselves are \
         critical witnesses"
    );
}

// ---------------------------------------------------------------------------
// Without a witness, the clique incidence rows are GF(2)-independent.

#[test]
fn witnessfree_graphs_have_independent_clique_rows() {
    let mut audited = 0;
    for k in 4..=7usize {
        let report = full_census(k, k + 1, 9);
        assert_clean(
            &report,
            "lemma2",
            "witness-free graph has dependent clique incidence rows",
        );
        audited += report.total_critical();
    }
    println!(
        "PASS: clique incidence rows are independent over GF(2) for every witness-free \
         critical graph (k in 4..=7, n <= 9; {audited} criticals audited)"
    );
}

// ---------------------------------------------------------------------------
// Per-edge bound t <= n - (k - 2 - d), tight on the 5-wheel's rim.

#[test]
fn per_edge_deficiency_bound_holds_and_is_tight_on_the_5_wheel_rim() {
    for k in 4..=7usize {
        let report = full_census(k, k + 1, 9);
        assert_clean(&report, "lemma3", "clique total exceeds a per-edge bound");
    }

    let wheel = Graph::wheel(5).unwrap();
    let catalog = enumerate_cliques(&wheel, 3).unwrap();
    let audit = edge_bound_audit(&wheel, 4, &catalog);
    assert!(audit.passed() && audit.total == 5);
    let rim = [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)];
    for e in rim {
        assert_eq!(
            (audit.per_edge_d[&e], audit.implied_bounds[&e]),
            (1, 5),
            "FAIL: rim edge {e:?} of the 5-wheel should lie in one triangle and imply \
             the bound 5"
        );
    }
    println!(
        "PASS: t_(k-1) <= n - (k - 2 - d) for every edge of every critical graph \
         (k in 4..=7, n <= 9); tight on the 5-wheel rim (bound 5, t_3 = 5)"
    );
}

// ---------------------------------------------------------------------------
// Every critical graph on more than k vertices has an edge in at most one
// (k-1)-clique, for k up to 7.

#[test]
fn every_small_critical_graph_has_an_edge_in_at_most_one_clique() {
    let mut audited = 0;
    for k in 4..=7usize {
        let report = full_census(k, k + 1, 9);
        assert_clean(&report, "su", "graph whose every edge lies in two or more cliques");
        for nr in &report.per_n {
            assert!(
                nr.su_exceptions.is_empty(),
                "FAIL: k = {k}, n = {}: unexplained sparse-edge exceptions {:?}",
                nr.n,
                nr.su_exceptions
            );
            if nr.critical > 0 {
                let m = nr.su_min.unwrap();
                assert!(m <= 1, "FAIL: k = {k}, n = {}: worst minimum edge count {m}", nr.n);
            }
            audited += nr.critical;
        }
    }
    println!(
        "PASS: all {audited} critical graphs (k in 4..=7, k < n <= 9) have an edge in \
         at most one (k-1)-clique"
    );
}

// ---------------------------------------------------------------------------
// Certificate walk: total on the census, checker sound against corruption.

/// Graphs outside the critical census whose walk lands in the rank branch;
/// they exercise the branch that no critical graph up to 9 vertices needs.
const RANK_BRANCH_FIXTURES: [(&str, usize); 6] = [
    ("FJa}o", 4),
    ("FJe~O", 4),
    ("GJa}v{", 5),
    ("GJe~V{", 5),
    ("HJa}v~~", 6),
    ("HJe~V~~", 6),
];

#[test]
fn certificate_walk_is_total_and_the_checker_rejects_corrupted_certificates() {
    // Totality and acceptance over the critical census.
    let mut pool: Vec<(Graph, usize, TraceCertificate)> = Vec::new();
    let mut branches: BTreeMap<&'static str, usize> = BTreeMap::new();
    for k in 4..=6usize {
        for n in k + 1..=9 {
            for_each_generated(n, |g| {
                if !certify_critical(g, k) {
                    return;
                }
                let cert = build_trace(g, k).unwrap_or_else(|e| {
                    panic!("FAIL: walk failed on critical {} (k = {k}): {e}", graph6::encode(g))
                });
                let chk = check_trace(g, k, &cert);
                assert!(
                    chk.ok(),
                    "FAIL: checker rejected a fresh certificate for {} (k = {k}): {:?}",
                    graph6::encode(g),
                    chk.failures
                );
                assert_rank_shape(g, k, &cert);
                *branches.entry(cert.branch_name()).or_default() += 1;
                pool.push((g.clone(), k, cert));
            })
            .unwrap();
        }
    }
    let census_certs = pool.len();

    // The rank branch is not exercised by any critical graph in range; cover
    // it with fixed graphs whose walk lands there.
    for (g6, k) in RANK_BRANCH_FIXTURES {
        let g = graph6::decode(g6).unwrap();
        let cert = build_trace(&g, k).unwrap();
        assert!(
            matches!(cert, TraceCertificate::RankBound { .. }),
            "FAIL: fixture {g6} no longer reaches the rank branch"
        );
        assert_rank_shape(&g, k, &cert);
        let chk = check_trace(&g, k, &cert);
        assert!(chk.ok(), "FAIL: checker rejected fixture {g6}: {:?}", chk.failures);
        pool.push((g, k, cert));
    }

    // Corruption fuzzing: 1000 single-field mutations, each one crafted to
    // break an invariant the checker owns; all must be rejected.
    let mut rng = StdRng::seed_from_u64(0xACCE97);
    let mut rejected = 0;
    for _ in 0..1000 {
        let (g, k, cert) = &pool[rng.gen_range(0..pool.len())];
        let (mutated, op) = corrupt_one_field(g, *k, cert, &mut rng);
        let bad: TraceCertificate = serde_json::from_value(mutated.clone())
            .unwrap_or_else(|e| panic!("FAIL: mutation {op} produced undecodable JSON: {e}"));
        let chk = check_trace(g, *k, &bad);
        assert!(
            !chk.ok(),
            "FAIL: checker accepted a corrupted certificate (op {op}) for {}: {}",
            graph6::encode(g),
            serde_json::to_string(&mutated).unwrap()
        );
        rejected += 1;
    }

    println!(
        "PASS: certificate walk total on {census_certs} census criticals (branches {:?}; \
         rank branch vacuous there, exercised by {} fixed graphs) and the checker \
         accepted all while rejecting {rejected}/1000 corrupted certificates",
        branches,
        RANK_BRANCH_FIXTURES.len()
    );
}

/// Rank certificates must claim exactly r + (k - 3) independent rows, within n.
fn assert_rank_shape(g: &Graph, k: usize, cert: &TraceCertificate) {
    if let TraceCertificate::RankBound { rank, r, .. } = cert {
        assert!(
            *rank == *r + (k - 3) && *rank <= g.order(),
            "FAIL: rank certificate for {} claims rank {rank}, r {r}, n {}",
            graph6::encode(g),
            g.order()
        );
    }
}

/// Rewrites exactly one field of the certificate JSON so that it violates an
/// invariant the checker verifies. Returns the mutated JSON and an operator
/// label for diagnostics.
fn corrupt_one_field(
    g: &Graph,
    k: usize,
    cert: &TraceCertificate,
    rng: &mut StdRng,
) -> (Value, &'static str) {
    let n = g.order();
    let mut v = serde_json::to_value(cert).unwrap();
    let as_usize = |x: &Value| x.as_u64().unwrap() as usize;
    match cert {
        TraceCertificate::WIsomorphic { .. } => {
            match rng.gen_range(0..4) {
                0 => {
                    // Breaks the odd-cycle-length requirement.
                    v["ell"] = (as_usize(&v["ell"]) + 1).into();
                    (v, "ell_parity")
                }
                1 => {
                    // Keeps parity but breaks ell = n - k + 3.
                    v["ell"] = (as_usize(&v["ell"]) + 2).into();
                    (v, "ell_length")
                }
                2 => {
                    // Any single change of one map entry collides with the
                    // entry already holding that value: not a permutation.
                    let m0 = as_usize(&v["map"][0]);
                    v["map"][0] = ((m0 + 1) % n).into();
                    (v, "map_perturb")
                }
                _ => {
                    let m1 = v["map"][1].clone();
                    v["map"][0] = m1;
                    (v, "map_duplicate")
                }
            }
        }
        TraceCertificate::EmptyEdge { .. } => {
            match rng.gen_range(0..4) {
                0 => {
                    v["bound"] = (as_usize(&v["bound"]) + 1).into();
                    (v, "bound_up")
                }
                1 => {
                    v["bound"] = (as_usize(&v["bound"]) - 1).into();
                    (v, "bound_down")
                }
                2 => {
                    // Point at an edge that does lie in a clique, if any.
                    let stats = clique_stats(g, k - 1).unwrap();
                    match stats.per_edge().iter().find(|&(_, &d)| d > 0) {
                        Some((&(a, b), _)) => {
                            v["edge"] = serde_json::json!([a, b]);
                            (v, "edge_covered")
                        }
                        None => {
                            v["bound"] = (as_usize(&v["bound"]) + 1).into();
                            (v, "bound_up")
                        }
                    }
                }
                _ => {
                    // Point at a non-edge; critical graphs here are never
                    // complete.
                    let (a, b) = non_edge(g).expect("non-complete input");
                    v["edge"] = serde_json::json!([a, b]);
                    (v, "edge_absent")
                }
            }
        }
        TraceCertificate::RankBound { .. } => {
            match rng.gen_range(0..9) {
                0 => {
                    v["rank"] = (as_usize(&v["rank"]) + 1).into();
                    (v, "rank_up")
                }
                1 => {
                    v["r"] = (as_usize(&v["r"]) + 1).into();
                    (v, "row_count_up")
                }
                2 => {
                    v["bound"] = (as_usize(&v["bound"]) + 1).into();
                    (v, "bound_up")
                }
                3 => {
                    // The surviving color must be k - 2 after remapping.
                    v["c"] = (k - 1).into();
                    (v, "survivor_color")
                }
                4 => {
                    let u = v["u"].clone();
                    v["v"] = u;
                    (v, "v_equals_u")
                }
                5 => {
                    let u = v["u"].clone();
                    v["x"] = u;
                    (v, "x_equals_u")
                }
                6 => {
                    // Wrong singleton count: must be exactly k - 3 rows.
                    let s0 = v["singletons"][0].clone();
                    v["singletons"].as_array_mut().unwrap().push(s0);
                    (v, "singleton_pad")
                }
                7 => {
                    // Transversal clique loses a vertex: size must be k - 1.
                    v["clique_a"].as_array_mut().unwrap().remove(0);
                    (v, "clique_shrunk")
                }
                _ => {
                    // u's color must equal k - 1, and 1 never does for k >= 4.
                    let u = as_usize(&v["u"]);
                    v["phi"]["assignment"][u] = 1.into();
                    (v, "color_of_u")
                }
            }
        }
    }
}

fn non_edge(g: &Graph) -> Option<(usize, usize)> {
    let n = g.order();
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).find(|&(a, b)| !g.has_edge(a, b))
}

// ---------------------------------------------------------------------------
// Brute-force oracle agreement.

#[test]
fn library_agrees_with_brute_force_oracles() {
    // Chromatic number against exhaustive assignment, all graphs to n = 7.
    let mut chi_checked = 0;
    for n in 1..=7usize {
        for_each_generated(n, |g| {
            assert_eq!(
                chromatic_number(g),
                chromatic_number_oracle(g),
                "FAIL: chromatic number disagrees on {}",
                graph6::encode(g)
            );
            chi_checked += 1;
        })
        .unwrap();
    }

    // Clique enumeration against the naive subset scan.
    let mut clique_checked = 0;
    for n in 1..=7usize {
        for_each_generated(n, |g| {
            for ell in 1..=4usize {
                let fast: BTreeSet<u64> = enumerate_cliques(g, ell)
                    .unwrap()
                    .members()
                    .iter()
                    .map(|s| s.bits())
                    .collect();
                let naive: BTreeSet<u64> = cliques_oracle(g, ell).into_iter().collect();
                assert_eq!(fast, naive, "FAIL: {ell}-cliques disagree on {}", graph6::encode(g));
                clique_checked += 1;
            }
        })
        .unwrap();
    }

    // Generator counts against canonical deduplication of all edge masks.
    let mut counts = Vec::new();
    for n in 1..=6usize {
        let pairs = n * (n - 1) / 2;
        let mut classes = BTreeSet::new();
        for mask in 0u64..(1 << pairs) {
            let g = graph_from_mask(n, mask);
            classes.insert(graph6::encode(&canonical_form(&g).unwrap()));
        }
        let generated = generate_all(n).unwrap().len();
        assert_eq!(
            generated,
            classes.len(),
            "FAIL: generator emitted {generated} graphs at n = {n}, dedup found {}",
            classes.len()
        );
        counts.push(generated);
    }
    assert_eq!(counts[3], 11, "FAIL: expected 11 graphs on 4 vertices");
    assert_eq!(counts[4], 34, "FAIL: expected 34 graphs on 5 vertices");

    println!(
        "PASS: chromatic number matches the exhaustive oracle on {chi_checked} graphs, \
         clique enumeration matches the subset oracle on {clique_checked} cases, and \
         generator counts {counts:?} match brute-force dedup for n <= 6"
    );
}

// ---------------------------------------------------------------------------
// graph6 codec round-trip.

#[test]
fn graph6_round_trip_is_bit_exact() {
    let mut catalog = 0;
    for_each_generated(7, |g| {
        let s = graph6::encode(g);
        let back = graph6::decode(&s).unwrap();
        assert_eq!(&back, g, "FAIL: decode(encode(g)) changed the graph for {s}");
        assert_eq!(graph6::encode(&back), s, "FAIL: re-encode changed the string {s}");
        catalog += 1;
    })
    .unwrap();

    let mut rng = StdRng::seed_from_u64(0x6A6A);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=32);
        let p = rng.gen_range(0.0..=1.0);
        let g = random_graph(&mut rng, n, p);
        let s = graph6::encode(&g);
        let back = graph6::decode(&s).unwrap();
        assert_eq!(back, g, "FAIL: random round-trip changed the graph for {s}");
        assert_eq!(graph6::encode(&back), s, "FAIL: random re-encode changed {s}");
    }

    println!(
        "PASS: graph6 round-trip is bit-exact on the full {catalog}-graph n = 7 catalog \
         and on 10000 random graphs up to 32 vertices"
    );
}
