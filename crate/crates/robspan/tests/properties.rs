//! Randomized invariants: structural laws that must hold for every
//! input, checked with proptest against small random instances.

use std::sync::Arc;

use proptest::prelude::*;

use robspan::adversary::attack_random;
use robspan::geom::{read_graph, write_graph, GeomGraph, PointSet, VertexSet};
use robspan::metrics::{
    conflict_graph, edge_length_census, min_vertex_cover, minimal_splus, spanner_violation,
    stretch, ConflictGraph, Mode,
};
use robspan::one_d::monotone_survivor_check;

/// 1-D graph on ranks 1..n that always contains the consecutive path,
/// plus a random selection of longer edges.
fn line_graph(n: usize, extra: &[(usize, usize)]) -> GeomGraph {
    let ps = Arc::new(PointSet::line(n));
    let mut edges: Vec<(u32, u32)> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
    for &(a, b) in extra {
        let (a, b) = (a % n, b % n);
        if a != b {
            let e = (a.min(b) as u32, a.max(b) as u32);
            if !edges.contains(&e) {
                edges.push(e);
            }
        }
    }
    GeomGraph::new(ps, edges).unwrap()
}

fn arb_line_graph() -> impl Strategy<Value = GeomGraph> {
    (3usize..16, proptest::collection::vec((0usize..16, 0usize..16), 0..12))
        .prop_map(|(n, extra)| line_graph(n, &extra))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn removal_composes(g in arb_line_graph(), a in proptest::collection::vec(0u32..16, 0..4), b in proptest::collection::vec(0u32..16, 0..4)) {
        let n = g.n() as u32;
        let a = VertexSet::new(a.into_iter().map(|v| v % n).collect());
        let b = VertexSet::new(b.into_iter().map(|v| v % n).collect());
        let two_step = g.remove_vertices(&a).unwrap().remove_vertices(&b).unwrap();
        let one_step = g.remove_vertices(&a.union(&b)).unwrap();
        let (av2, av1) = (two_step.active_vertices(), one_step.active_vertices());
        prop_assert_eq!(av2.as_slice(), av1.as_slice());
        for v in 0..n {
            prop_assert_eq!(two_step.neighbors(v), one_step.neighbors(v));
        }
    }

    #[test]
    fn census_partitions_all_edges(g in arb_line_graph()) {
        let max_len = g.edge_lengths().map(|(_, l)| l).fold(0.0f64, f64::max);
        let boundaries = [0.0, 1.5, 3.5, 7.5, max_len + 1.0];
        if boundaries.windows(2).all(|w| w[0] < w[1]) {
            let counts = edge_length_census(&g, &boundaries).unwrap();
            prop_assert_eq!(counts.iter().sum::<usize>(), g.num_edges());
        }
    }

    #[test]
    fn graph_file_roundtrip(g in arb_line_graph()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.graph");
        write_graph(&path, g.points(), &g).unwrap();
        let (ps, h) = read_graph(&path).unwrap();
        prop_assert_eq!(g.edges(), h.edges());
        prop_assert_eq!(g.points().len(), ps.len());
        // a second write is byte-identical
        let path2 = dir.path().join("h.graph");
        write_graph(&path2, &ps, &h).unwrap();
        prop_assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&path2).unwrap());
    }

    #[test]
    fn stretch_is_scale_invariant(g in arb_line_graph(), lambda in 0.1f64..50.0) {
        let scaled_pts: Vec<Vec<f64>> =
            g.points().iter().map(|p| p.iter().map(|&c| c * lambda).collect()).collect();
        let scaled = GeomGraph::new(
            Arc::new(PointSet::new(1, scaled_pts).unwrap()),
            g.edges().to_vec(),
        ).unwrap();
        let n = g.n() as u32;
        for u in 0..n.min(5) {
            for v in (u + 1)..n.min(5) {
                let a = stretch(&g, u, v).unwrap();
                let b = stretch(&scaled, u, v).unwrap();
                prop_assert!((a - b).abs() < 1e-9 * a.max(1.0), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn greedy_cover_within_twice_exact(edges in proptest::collection::vec((0u32..12, 0u32..12), 1..20)) {
        let edges: Vec<(u32, u32)> = edges
            .into_iter()
            .filter(|&(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        prop_assume!(!edges.is_empty());
        let mut verts: Vec<u32> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        verts.sort_unstable();
        verts.dedup();
        let h = ConflictGraph { vertices: VertexSet::new(verts), edges };
        let (exact, is_exact) = min_vertex_cover(&h, 64);
        prop_assert!(is_exact);
        let (greedy, _) = min_vertex_cover(&h, 0);
        prop_assert!(greedy.len() <= 2 * exact.len());
        // both are covers
        for cover in [&exact, &greedy] {
            for &(a, b) in &h.edges {
                prop_assert!(cover.contains(a) || cover.contains(b));
            }
        }
    }

    #[test]
    fn oracle_survivors_are_conflict_free(g in arb_line_graph(), s_raw in proptest::collection::vec(0u32..16, 0..3), t in 1.0f64..3.0) {
        let n = g.n() as u32;
        let s = VertexSet::new(s_raw.into_iter().map(|v| v % n).collect());
        let cert = minimal_splus(&g, &s, t, Mode::Deletion, 64).unwrap();
        prop_assert!(cert.verified);
        let h = conflict_graph(&g, &s, t).unwrap();
        for &(a, b) in &h.edges {
            prop_assert!(
                cert.s_plus.contains(a) || cert.s_plus.contains(b),
                "conflict ({a},{b}) survived"
            );
        }
    }

    #[test]
    fn monotone_check_matches_unit_stretch(g in arb_line_graph(), s_raw in proptest::collection::vec(0u32..16, 0..3)) {
        let n = g.n() as u32;
        let s = VertexSet::new(s_raw.into_iter().map(|v| v % n).collect());
        // casualty set from the exact oracle; both checks must agree on it
        let cert = minimal_splus(&g, &s, 1.0, Mode::Deletion, 64).unwrap();
        let fast = monotone_survivor_check(&g, &s, &cert.s_plus);
        let gs = g.remove_vertices(&s).unwrap();
        let survivors = gs.active_vertices().difference(&cert.s_plus);
        let slow = spanner_violation(&gs, &survivors, 1.0, Mode::Deletion).is_none();
        prop_assert_eq!(fast, slow);
        // and on the raw failure set without its casualty closure
        let fast_raw = monotone_survivor_check(&g, &s, &s);
        let survivors_raw = gs.active_vertices();
        let slow_raw = spanner_violation(&gs, &survivors_raw, 1.0, Mode::Deletion).is_none();
        prop_assert_eq!(fast_raw, slow_raw);
    }

    #[test]
    fn random_attack_is_uniform_ksubset(n in 1usize..200, k_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let k = ((n as f64) * k_frac) as usize;
        let s = attack_random(n, k, seed).unwrap();
        prop_assert_eq!(s.len(), k);
        prop_assert!(s.iter().all(|v| (v as usize) < n));
        let again = attack_random(n, k, seed).unwrap();
        prop_assert_eq!(s.as_slice(), again.as_slice());
    }
}
