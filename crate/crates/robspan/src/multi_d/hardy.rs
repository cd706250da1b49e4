//! Composition: decompose the tree cover at a coarse, n-dependent
//! component bound, then hand the pooled separator points to any inner
//! builder. Keeps the total edge count linear while the inner builder
//! handles a much smaller point set.

use std::sync::Arc;

use crate::geom::{GeomGraph, PointSet};
use crate::multi_d::cover::{centroid_decompose, shifted_quadtree_cover};
use crate::multi_d::robust::{BuildReport, LevelRow, COVER_SHIFTS};
use crate::{Error, Result};

/// Inner builder contract: given the full point set and the selected
/// point indices, return edges in the full index space.
pub type InnerBuilder<'a> = dyn Fn(&PointSet, &[u32]) -> Result<Vec<(u32, u32)>> + 'a;

pub fn build_hardy(
    ps: Arc<PointSet>,
    s_of_n: usize,
    inner: &InnerBuilder,
    seed: u64,
) -> Result<(GeomGraph, BuildReport)> {
    if s_of_n == 0 {
        return Err(Error::InvalidInput("component bound s(n) must be at least 1".into()));
    }
    let n = ps.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty point set".into()));
    }
    let cover = shifted_quadtree_cover(&ps, COVER_SHIFTS, seed)?;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for tree in &cover.trees {
        edges.extend(tree.point_edges());
    }
    edges.sort_unstable();
    edges.dedup();
    let tree_edges = edges.len();

    let mut x_points: Vec<u32> = cover
        .trees
        .iter()
        .flat_map(|tr| {
            centroid_decompose(tr, s_of_n)
                .x_nodes
                .into_iter()
                .map(|u| tr.nodes[u as usize].rep)
                .collect::<Vec<_>>()
        })
        .collect();
    x_points.sort_unstable();
    x_points.dedup();

    let inner_edges = if x_points.len() >= 2 { inner(&ps, &x_points)? } else { Vec::new() };
    edges.extend(inner_edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))));
    edges.sort_unstable();
    edges.dedup();

    let report = BuildReport {
        n,
        d: ps.dim(),
        tau_measured: cover.tau,
        stretch_bound: cover.tau,
        rows: vec![
            LevelRow { level: 0, k_prime: 0, x_size: 0, edges_added: tree_edges },
            LevelRow {
                level: 1,
                k_prime: s_of_n,
                x_size: x_points.len(),
                edges_added: edges.len() - tree_edges,
            },
        ],
    };
    Ok((GeomGraph::new(ps, edges)?, report))
}
