//! Well-separated pair decomposition via a fair split tree, and the
//! vertex-fault-tolerant spanner built from it.

use crate::geom::PointSet;
use crate::{Error, Result};

fn dist(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

#[derive(Debug, Clone)]
struct SplitNode {
    points: Vec<u32>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    left: Option<usize>,
    right: Option<usize>,
}

impl SplitNode {
    fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| (a + b) / 2.0).collect()
    }
    fn radius(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| (b - a) / 2.0)
            .map(|h| h * h)
            .sum::<f64>()
            .sqrt()
    }
}

/// The point index sets of one well-separated pair.
#[derive(Debug, Clone)]
pub struct WsPair {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

struct SplitTree {
    nodes: Vec<SplitNode>,
    root: usize,
}

impl SplitTree {
    fn build(ps: &PointSet, idxs: Vec<u32>) -> Self {
        let mut tree = SplitTree { nodes: Vec::new(), root: 0 };
        tree.root = tree.split(ps, idxs);
        tree
    }

    fn split(&mut self, ps: &PointSet, idxs: Vec<u32>) -> usize {
        let d = ps.dim();
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for &p in &idxs {
            for dd in 0..d {
                lo[dd] = lo[dd].min(ps.point(p)[dd]);
                hi[dd] = hi[dd].max(ps.point(p)[dd]);
            }
        }
        let id = self.nodes.len();
        self.nodes.push(SplitNode { points: idxs, lo, hi, left: None, right: None });
        if self.nodes[id].points.len() > 1 {
            // split the longest bounding-box dimension at its midpoint
            let (lo, hi) = (self.nodes[id].lo.clone(), self.nodes[id].hi.clone());
            let dim = (0..d)
                .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
                .unwrap();
            let mid = (lo[dim] + hi[dim]) / 2.0;
            let idxs = self.nodes[id].points.clone();
            let (mut left, mut right): (Vec<u32>, Vec<u32>) =
                idxs.into_iter().partition(|&p| ps.point(p)[dim] < mid);
            if left.is_empty() || right.is_empty() {
                // duplicate-free input guarantees a non-trivial split on
                // the widest dimension except for ties at the midpoint
                let mut all = std::mem::take(if left.is_empty() { &mut right } else { &mut left });
                all.sort_by(|&a, &b| ps.point(a)[dim].total_cmp(&ps.point(b)[dim]));
                let half = all.len() / 2;
                right = all.split_off(half);
                left = all;
            }
            let l = self.split(ps, left);
            let r = self.split(ps, right);
            self.nodes[id].left = Some(l);
            self.nodes[id].right = Some(r);
        }
        id
    }
}

fn well_separated(a: &SplitNode, b: &SplitNode, s: f64) -> bool {
    let r = a.radius().max(b.radius());
    dist(&a.center(), &b.center()) >= s * r + 2.0 * r
}

/// Decompose all pairs of distinct points into pairs of sets whose
/// enclosing balls of radius r are at distance >= `separation` * r.
pub fn wspd(ps: &PointSet, separation: f64) -> Result<Vec<WsPair>> {
    if separation <= 0.0 || !separation.is_finite() {
        return Err(Error::InvalidInput(format!("bad separation {separation}")));
    }
    if ps.len() < 2 {
        return Ok(Vec::new());
    }
    let tree = SplitTree::build(ps, (0..ps.len() as u32).collect());
    let mut out = Vec::new();
    let mut stack = vec![(tree.root, tree.root)];
    // seed with child pairs of the root; (root, root) expands below
    while let Some((u, v)) = stack.pop() {
        let (nu, nv) = (&tree.nodes[u], &tree.nodes[v]);
        if u == v {
            if let (Some(l), Some(r)) = (nu.left, nu.right) {
                stack.push((l, l));
                stack.push((r, r));
                stack.push((l, r));
            }
            continue;
        }
        if well_separated(nu, nv, separation) {
            out.push(WsPair { a: nu.points.clone(), b: nv.points.clone() });
            continue;
        }
        // split the node with the larger radius (break ties toward u)
        if nu.radius() >= nv.radius() {
            let (l, r) = (nu.left.unwrap(), nu.right.unwrap());
            stack.push((l, v));
            stack.push((r, v));
        } else {
            let (l, r) = (nv.left.unwrap(), nv.right.unwrap());
            stack.push((u, l));
            stack.push((u, r));
        }
    }
    Ok(out)
}

/// Edges of a k-vertex-fault-tolerant t-spanner on the points listed in
/// `subset` (indices into `ps`). Uses separation 4(t+1)/(t-1); each
/// well-separated pair contributes either a matching of k+1 cross edges
/// or, when a side is small, a complete bipartite block on k+1 picks.
pub fn ft_spanner_edges(ps: &PointSet, subset: &[u32], t: f64, k: usize) -> Result<Vec<(u32, u32)>> {
    if t <= 1.0 || !t.is_finite() {
        return Err(Error::InvalidInput(format!("stretch must exceed 1, got {t}")));
    }
    if subset.len() < 2 {
        return Ok(Vec::new());
    }
    let sub = PointSet::new(
        ps.dim(),
        subset.iter().map(|&p| ps.point(p).to_vec()).collect(),
    )?;
    let s = 4.0 * (t + 1.0) / (t - 1.0);
    let pairs = wspd(&sub, s)?;
    let mut edges = Vec::new();
    let want = k + 1;
    for pair in &pairs {
        let (a, b) = (&pair.a, &pair.b);
        if a.len() >= want && b.len() >= want {
            for i in 0..want {
                edges.push((a[i], b[i]));
            }
        } else {
            let na = a.len().min(want);
            let nb = b.len().min(want);
            for &pa in &a[..na] {
                for &pb in &b[..nb] {
                    edges.push((pa, pb));
                }
            }
        }
    }
    // map back to original indices, canonicalize
    let mut out: Vec<(u32, u32)> = edges
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (subset[u as usize], subset[v as usize]);
            (a.min(b), a.max(b))
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
