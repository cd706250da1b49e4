//! Multi-level robust spanner in d dimensions: tree cover plus a
//! fault-tolerant spanner over the separator points of each level.

use std::sync::Arc;

use crate::geom::{GeomGraph, PointSet, VertexSet};
use crate::metrics::{spanner_violation, Mode, RobustnessCertificate};
use crate::multi_d::cover::{centroid_decompose, shifted_quadtree_cover, SeparatorSet, TreeCover};
use crate::multi_d::wspd::ft_spanner_edges;
use crate::one_d::IteratedFunction;
use crate::{Error, Result};

pub const COVER_SHIFTS: usize = 3;

#[derive(Debug, Clone)]
pub struct LevelRow {
    pub level: usize,
    pub k_prime: usize,
    pub x_size: usize,
    pub edges_added: usize,
}

/// Per-build summary; serializes as CSV with one header row and one row
/// per level.
#[derive(Debug, Clone)]
pub struct BuildReport {
    pub n: usize,
    pub d: usize,
    pub tau_measured: f64,
    /// stretch the assembled graph is verified/certified against
    pub stretch_bound: f64,
    pub rows: Vec<LevelRow>,
}

impl BuildReport {
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "n,d,tau_measured,stretch_bound\n{},{},{:?},{:?}\nlevel,k_prime,x_size,edges_added\n",
            self.n, self.d, self.tau_measured, self.stretch_bound
        );
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.level, r.k_prime, r.x_size, r.edges_added));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Level {
    pub k_prime: usize,
    /// one separator decomposition per cover tree
    pub seps: Vec<SeparatorSet>,
    /// pooled separator points across all trees, sorted
    pub x_points: Vec<u32>,
}

/// The assembled graph together with the structures the casualty
/// builder needs.
pub struct RobustDd {
    pub graph: GeomGraph,
    pub cover: TreeCover,
    pub levels: Vec<Level>,
    pub report: BuildReport,
}

/// Tree-cover edges plus, for each level k' in the iterate sequence of
/// `f` capped at n, a k'-fault-tolerant sqrt(t)-spanner on the pooled
/// separator points.
pub fn build_robust_dd(
    ps: Arc<PointSet>,
    f: &IteratedFunction,
    t: f64,
    seed: u64,
) -> Result<RobustDd> {
    if t <= 1.0 || !t.is_finite() {
        return Err(Error::InvalidInput(format!("stretch must exceed 1, got {t}")));
    }
    let n = ps.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty point set".into()));
    }
    let cover = shifted_quadtree_cover(&ps, COVER_SHIFTS, seed)?;
    let t_prime = t.sqrt();

    let mut edges: Vec<(u32, u32)> = Vec::new();
    for tree in &cover.trees {
        edges.extend(tree.point_edges());
    }
    let tree_edge_count = {
        edges.sort_unstable();
        edges.dedup();
        edges.len()
    };

    // levels k' = f^i(k0), i = 0..=f*(n), duplicates merged
    let mut k_primes: Vec<usize> = Vec::new();
    if n > 1 {
        let top = f.f_star(n as f64)?;
        for i in 0..=top {
            let k = f.iterate(i).ceil() as usize;
            let k = k.max(1);
            if k_primes.last() != Some(&k) {
                k_primes.push(k);
            }
        }
    }

    let mut rows = vec![LevelRow { level: 0, k_prime: 0, x_size: 0, edges_added: tree_edge_count }];
    let mut levels = Vec::new();
    for (li, &k_prime) in k_primes.iter().enumerate() {
        let seps: Vec<SeparatorSet> =
            cover.trees.iter().map(|tr| centroid_decompose(tr, k_prime)).collect();
        let mut x_points: Vec<u32> = seps
            .iter()
            .zip(&cover.trees)
            .flat_map(|(sep, tr)| sep.x_nodes.iter().map(|&u| tr.nodes[u as usize].rep))
            .collect();
        x_points.sort_unstable();
        x_points.dedup();
        let before = edges.len();
        let ft = ft_spanner_edges(&ps, &x_points, t_prime, k_prime)?;
        edges.extend(ft);
        edges.sort_unstable();
        edges.dedup();
        rows.push(LevelRow {
            level: li + 1,
            k_prime,
            x_size: x_points.len(),
            edges_added: edges.len().saturating_sub(before),
        });
        levels.push(Level { k_prime, seps, x_points });
    }

    let stretch_bound = cover.tau * cover.tau * t_prime;
    let report = BuildReport {
        n,
        d: ps.dim(),
        tau_measured: cover.tau,
        stretch_bound,
        rows,
    };
    let graph = GeomGraph::new(ps, edges)?;
    Ok(RobustDd { graph, cover, levels, report })
}

/// Casualty budget reported for level k': separators kill at most 4
/// adjacent components per tree, components hold <= k' nodes.
pub fn dd_budget(num_trees: usize, k_prime: usize, k: usize) -> usize {
    1 + 4 * num_trees * k_prime * k
}

/// Kill rule over the tree cover: every failed point kills the
/// components (of every tree, after removing the level's separators)
/// that contain one of its nodes; a failed separator point also kills
/// the components adjacent to its removed node.
pub fn splus_dd(rdd: &RobustDd, s: &VertexSet) -> Result<RobustnessCertificate> {
    let g = &rdd.graph;
    let n = g.n();
    s.check_range(n)?;
    let k = s.len();
    if k == 0 {
        return Ok(RobustnessCertificate {
            t: rdd.report.stretch_bound,
            s: VertexSet::empty(),
            s_plus: VertexSet::empty(),
            mode: Mode::Deletion,
            verified: true,
            minimal: true,
        });
    }
    // smallest level with k' >= k
    let level = rdd
        .levels
        .iter()
        .find(|l| l.k_prime >= k)
        .ok_or_else(|| Error::NoLevel {
            k,
            max: rdd.levels.last().map_or(0, |l| l.k_prime),
        })?;

    let mut killed = vec![false; n];
    for (tree, sep) in rdd.cover.trees.iter().zip(&level.seps) {
        let mut kill_comp = vec![false; sep.members.len()];
        for x in s.iter() {
            for &node in &tree.nodes_of[x as usize] {
                let c = sep.comp_id[node as usize];
                if c >= 0 {
                    kill_comp[c as usize] = true;
                } else {
                    // x's node is a separator: kill adjacent components
                    for v in tree.neighbors(node) {
                        let cv = sep.comp_id[v as usize];
                        if cv >= 0 {
                            kill_comp[cv as usize] = true;
                        }
                    }
                }
            }
        }
        for (c, &dead) in kill_comp.iter().enumerate() {
            if dead {
                for &node in &sep.members[c] {
                    killed[tree.nodes[node as usize].rep as usize] = true;
                }
            }
        }
    }
    let mut ids: Vec<u32> = (0..n as u32).filter(|&v| killed[v as usize]).collect();
    ids.extend(s.iter());
    let s_plus = VertexSet::new(ids);

    let budget = dd_budget(rdd.cover.trees.len(), level.k_prime, k);
    if s_plus.len() > budget {
        return Err(Error::InvalidInput(format!(
            "casualty set of size {} exceeds the level budget {}",
            s_plus.len(),
            budget
        )));
    }
    let gs = g.remove_vertices(s)?;
    let survivors = gs.active_vertices().difference(&s_plus);
    if let Some(v) = spanner_violation(&gs, &survivors, rdd.report.stretch_bound, Mode::Deletion) {
        return Err(Error::Verification { u: v.u, v: v.v, stretch: v.stretch });
    }
    Ok(RobustnessCertificate {
        t: rdd.report.stretch_bound,
        s: s.clone(),
        s_plus,
        mode: Mode::Deletion,
        verified: true,
        minimal: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{is_t_spanner_of, minimal_splus};
    use crate::one_d::preset;
    use rand::seq::SliceRandom;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn kpow() -> IteratedFunction {
        preset("kpow", 1.0, (1u64 << 20) as f64).unwrap()
    }

    fn unit_square(n: usize, seed: u64) -> Arc<PointSet> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = (0..n)
            .map(|_| vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)])
            .collect();
        Arc::new(PointSet::new(2, pts).unwrap())
    }

    #[test]
    fn single_point_build() {
        let ps = Arc::new(PointSet::new(2, vec![vec![0.5, 0.5]]).unwrap());
        let rdd = build_robust_dd(ps, &kpow(), 2.0, 1).unwrap();
        assert_eq!(rdd.graph.num_edges(), 0);
        assert!(rdd.levels.is_empty());
    }

    #[test]
    fn line_64_build_and_certify() {
        let ps = Arc::new(PointSet::line(64));
        let f = kpow();
        let rdd = build_robust_dd(Arc::clone(&ps), &f, 2.0, 7).unwrap();
        // f*(64) = 2 for k^2 from k0=2: 2, 4, 16 (256 > 64)
        let fstar = f.f_star(64.0).unwrap();
        assert_eq!(fstar, 2);
        assert!(rdd.graph.num_edges() <= 40 * 64 * (fstar + 1));
        // self-consistency: the graph meets its own reported bound
        assert!(is_t_spanner_of(
            &rdd.graph,
            &rdd.graph.active_vertices(),
            rdd.report.stretch_bound,
            Mode::Deletion
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut all: Vec<u32> = (0..64).collect();
        for _ in 0..10 {
            all.shuffle(&mut rng);
            let s = VertexSet::new(all[..2].to_vec());
            let cert = splus_dd(&rdd, &s).unwrap();
            assert!(cert.verified);
            let level = rdd.levels.iter().find(|l| l.k_prime >= 2).unwrap();
            assert!(cert.s_plus.len() <= dd_budget(rdd.cover.trees.len(), level.k_prime, 2));
        }
    }

    #[test]
    fn unit_square_self_consistent() {
        let ps = unit_square(256, 11);
        let rdd = build_robust_dd(Arc::clone(&ps), &kpow(), 2.0, 13).unwrap();
        // tau is exact here (all pairs sampled), so the bound must hold
        assert!(is_t_spanner_of(
            &rdd.graph,
            &rdd.graph.active_vertices(),
            rdd.report.stretch_bound,
            Mode::Deletion
        ));
        // report rows cover every level plus the tree row
        assert_eq!(rdd.report.rows.len(), rdd.levels.len() + 1);
        let csv = rdd.report.to_csv();
        assert!(csv.starts_with("n,d,tau_measured,stretch_bound\n256,2,"));
    }

    #[test]
    fn empty_failure_set() {
        let ps = unit_square(20, 2);
        let rdd = build_robust_dd(ps, &kpow(), 2.0, 5).unwrap();
        let cert = splus_dd(&rdd, &VertexSet::empty()).unwrap();
        assert!(cert.s_plus.is_empty() && cert.verified);
    }

    #[test]
    fn no_level_error() {
        let ps = unit_square(20, 4);
        let rdd = build_robust_dd(ps, &kpow(), 2.0, 5).unwrap();
        let max_k = rdd.levels.last().unwrap().k_prime;
        let s = VertexSet::new((0..max_k as u32 + 1).collect());
        match splus_dd(&rdd, &s) {
            Err(Error::NoLevel { k, max }) => {
                assert_eq!(k, max_k + 1);
                assert_eq!(max, max_k);
            }
            other => panic!("expected NoLevel, got {other:?}"),
        }
    }

    #[test]
    fn oracle_dominance_small_2d() {
        let f = kpow();
        for n in [8usize, 11, 14] {
            let ps = unit_square(n, n as u64);
            let rdd = build_robust_dd(Arc::clone(&ps), &f, 2.0, 99).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64 + 1);
            let mut all: Vec<u32> = (0..n as u32).collect();
            for trial in 0..20 {
                all.shuffle(&mut rng);
                let k = 1 + (trial % 2);
                let s = VertexSet::new(all[..k].to_vec());
                let cert = match splus_dd(&rdd, &s) {
                    Ok(c) => c,
                    Err(Error::NoLevel { .. }) => continue,
                    Err(e) => panic!("{e}"),
                };
                let oracle = minimal_splus(
                    &rdd.graph,
                    &s,
                    rdd.report.stretch_bound,
                    Mode::Deletion,
                    32,
                )
                .unwrap();
                assert!(oracle.verified);
                if oracle.minimal {
                    assert!(oracle.s_plus.len() <= cert.s_plus.len());
                }
            }
        }
    }
}
