//! Tree covers from randomly shifted compressed quadtrees, and centroid
//! separator decomposition of the cover trees.
//!
//! Each cover tree is binary with one leaf per point; internal nodes are
//! mapped to distinct points of their subtree, so the node->point map
//! `rep` uses each point at most once internally per tree.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::PointSet;
use crate::{Error, Result};

const NO_NODE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct TreeNode {
    pub parent: u32, // NO_NODE at the root
    pub left: u32,   // NO_NODE at leaves
    pub right: u32,
    pub rep: u32, // point index
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.left == NO_NODE
    }
}

/// One rooted binary tree over all points.
#[derive(Debug, Clone)]
pub struct CoverTree {
    pub nodes: Vec<TreeNode>,
    pub root: u32,
    /// point index -> leaf node id
    pub leaf_of: Vec<u32>,
    /// point index -> node ids mapped to it (the leaf and at most one internal)
    pub nodes_of: Vec<Vec<u32>>,
    depth: Vec<u32>,
    /// polyline length of the rep path from each node up to the root
    root_dist: Vec<f64>,
}

impl CoverTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn neighbors(&self, u: u32) -> impl Iterator<Item = u32> + '_ {
        let node = &self.nodes[u as usize];
        [node.parent, node.left, node.right]
            .into_iter()
            .filter(|&v| v != NO_NODE)
    }

    fn lca(&self, mut a: u32, mut b: u32) -> u32 {
        while self.depth[a as usize] > self.depth[b as usize] {
            a = self.nodes[a as usize].parent;
        }
        while self.depth[b as usize] > self.depth[a as usize] {
            b = self.nodes[b as usize].parent;
        }
        while a != b {
            a = self.nodes[a as usize].parent;
            b = self.nodes[b as usize].parent;
        }
        a
    }

    /// Euclidean length of the rep polyline along the tree path between
    /// the leaves of points `x` and `y`.
    pub fn leaf_path_length(&self, x: u32, y: u32) -> f64 {
        let (a, b) = (self.leaf_of[x as usize], self.leaf_of[y as usize]);
        let l = self.lca(a, b);
        self.root_dist[a as usize] + self.root_dist[b as usize]
            - 2.0 * self.root_dist[l as usize]
    }

    /// Tree edges as point-index pairs (self-loops from repeated reps skipped).
    pub fn point_edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if node.parent != NO_NODE {
                let a = self.nodes[node.parent as usize].rep;
                let b = node.rep;
                if a != b {
                    out.push((a.min(b), a.max(b)));
                }
            }
            let _ = i;
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// A family of shifted-quadtree cover trees with the measured per-pair
/// tree stretch `tau`.
#[derive(Debug, Clone)]
pub struct TreeCover {
    pub trees: Vec<CoverTree>,
    /// max over sampled pairs of (best tree path length) / (distance)
    pub tau: f64,
}

const TAU_SAMPLE_CAP: usize = 100_000;

/// Build `num_shifts` compressed quadtrees over independently shifted
/// copies of the bounding box.
pub fn shifted_quadtree_cover(ps: &PointSet, num_shifts: usize, seed: u64) -> Result<TreeCover> {
    if ps.is_empty() {
        return Err(Error::InvalidInput("tree cover of an empty point set".into()));
    }
    if num_shifts == 0 {
        return Err(Error::InvalidInput("need at least one shift".into()));
    }
    let d = ps.dim();
    let (lo, hi) = ps.bounding_box();
    let extent = lo
        .iter()
        .zip(&hi)
        .map(|(a, b)| b - a)
        .fold(0f64, f64::max)
        .max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trees = Vec::with_capacity(num_shifts);
    for _ in 0..num_shifts {
        let shift: Vec<f64> = (0..d).map(|_| rng.gen_range(0.0..extent)).collect();
        let origin: Vec<f64> = lo.iter().zip(&shift).map(|(l, s)| l - s).collect();
        trees.push(build_tree(ps, &origin, 2.0 * extent)?);
    }
    let tau = measure_tau(ps, &trees, seed ^ 0x9e37_79b9_7f4a_7c15);
    let cover = TreeCover { trees, tau };
    check_cover_invariants(ps, &cover)?;
    Ok(cover)
}

fn check_cover_invariants(ps: &PointSet, cover: &TreeCover) -> Result<()> {
    for tree in &cover.trees {
        let mut leaf_seen = vec![0usize; ps.len()];
        let mut internal_seen = vec![0usize; ps.len()];
        for node in &tree.nodes {
            if node.is_leaf() {
                leaf_seen[node.rep as usize] += 1;
            } else {
                internal_seen[node.rep as usize] += 1;
                if node.right == NO_NODE {
                    return Err(Error::InvalidInput("non-binary internal node".into()));
                }
            }
        }
        if leaf_seen.iter().any(|&c| c != 1) {
            return Err(Error::InvalidInput("tree is missing a leaf for some point".into()));
        }
        if internal_seen.iter().any(|&c| c > 1) {
            return Err(Error::InvalidInput(
                "point appears as more than one internal node".into(),
            ));
        }
    }
    Ok(())
}

struct Builder<'a> {
    ps: &'a PointSet,
    nodes: Vec<TreeNode>,
}

impl Builder<'_> {
    fn leaf(&mut self, p: u32) -> u32 {
        self.nodes.push(TreeNode { parent: NO_NODE, left: NO_NODE, right: NO_NODE, rep: p });
        (self.nodes.len() - 1) as u32
    }

    fn internal(&mut self, left: u32, right: u32) -> u32 {
        let id = self.nodes.len() as u32;
        self.nodes.push(TreeNode { parent: NO_NODE, left, right, rep: u32::MAX });
        self.nodes[left as usize].parent = id;
        self.nodes[right as usize].parent = id;
        id
    }

    /// Compressed quadtree build over `idxs` within the cell at `origin`
    /// with side `size`; multi-child cells become left-leaning binary combs.
    fn build(&mut self, idxs: Vec<u32>, mut origin: Vec<f64>, mut size: f64) -> Result<u32> {
        if idxs.len() == 1 {
            return Ok(self.leaf(idxs[0]));
        }
        // descend (compressing single-child chains) until the cell splits
        let buckets = loop {
            if size <= 0.0 || !size.is_finite() {
                return Err(Error::InvalidInput("degenerate quadtree cell".into()));
            }
            let half = size / 2.0;
            let mut buckets: Vec<(usize, Vec<u32>)> = Vec::new();
            for &p in &idxs {
                let mut child = 0usize;
                for (dd, &o) in origin.iter().enumerate() {
                    if self.ps.point(p)[dd] >= o + half {
                        child |= 1 << dd;
                    }
                }
                match buckets.iter_mut().find(|(c, _)| *c == child) {
                    Some((_, v)) => v.push(p),
                    None => buckets.push((child, vec![p])),
                }
            }
            if buckets.len() > 1 {
                buckets.sort_by_key(|(c, _)| *c);
                break buckets;
            }
            // compress: all points in one subcell
            let child = buckets[0].0;
            for (dd, o) in origin.iter_mut().enumerate() {
                if child >> dd & 1 == 1 {
                    *o += half;
                }
            }
            size = half;
        };
        let half = size / 2.0;
        let mut child_ids = Vec::with_capacity(buckets.len());
        for (c, pts) in buckets {
            let mut o = origin.clone();
            for (dd, oc) in o.iter_mut().enumerate() {
                if c >> dd & 1 == 1 {
                    *oc += half;
                }
            }
            child_ids.push(self.build(pts, o, half)?);
        }
        // right fold into a left-leaning comb
        let mut acc = *child_ids.last().unwrap();
        for &c in child_ids.iter().rev().skip(1) {
            acc = self.internal(c, acc);
        }
        Ok(acc)
    }
}

fn build_tree(ps: &PointSet, origin: &[f64], size: f64) -> Result<CoverTree> {
    let mut b = Builder { ps, nodes: Vec::with_capacity(2 * ps.len()) };
    let idxs: Vec<u32> = (0..ps.len() as u32).collect();
    let root = b.build(idxs, origin.to_vec(), size)?;
    let mut nodes = b.nodes;

    // assign internal reps: post-order, each subtree hands one unused
    // point upward; the node takes the lower-indexed candidate
    let n_nodes = nodes.len();
    let mut free = vec![u32::MAX; n_nodes];
    // post-order via stack
    let mut order = Vec::with_capacity(n_nodes);
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        order.push(u);
        let node = &nodes[u as usize];
        if !node.is_leaf() {
            stack.push(node.left);
            stack.push(node.right);
        }
    }
    for &u in order.iter().rev() {
        let node = &nodes[u as usize];
        if node.is_leaf() {
            free[u as usize] = node.rep;
        } else {
            let (a, b2) = (free[node.left as usize], free[node.right as usize]);
            let (take, keep) = if a < b2 { (a, b2) } else { (b2, a) };
            nodes[u as usize].rep = take;
            free[u as usize] = keep;
        }
    }

    let mut depth = vec![0u32; n_nodes];
    let mut root_dist = vec![0f64; n_nodes];
    for &u in &order {
        // `order` is a pre-order: parents precede children
        let node = &nodes[u as usize];
        if node.parent != NO_NODE {
            let p = node.parent as usize;
            depth[u as usize] = depth[p] + 1;
            root_dist[u as usize] = root_dist[p] + ps.dist(nodes[p].rep, node.rep);
        }
    }

    let mut leaf_of = vec![NO_NODE; ps.len()];
    let mut nodes_of = vec![Vec::new(); ps.len()];
    for (i, node) in nodes.iter().enumerate() {
        nodes_of[node.rep as usize].push(i as u32);
        if node.is_leaf() {
            leaf_of[node.rep as usize] = i as u32;
        }
    }
    Ok(CoverTree { nodes, root, leaf_of, nodes_of, depth, root_dist })
}

fn measure_tau(ps: &PointSet, trees: &[CoverTree], seed: u64) -> f64 {
    let n = ps.len();
    if n < 2 {
        return 1.0;
    }
    let pair_stretch = |x: u32, y: u32| -> f64 {
        let d = ps.dist(x, y);
        trees
            .iter()
            .map(|t| t.leaf_path_length(x, y))
            .fold(f64::INFINITY, f64::min)
            / d
    };
    let mut tau = 1f64;
    if n * n <= TAU_SAMPLE_CAP {
        for x in 0..n as u32 {
            for y in x + 1..n as u32 {
                tau = tau.max(pair_stretch(x, y));
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..TAU_SAMPLE_CAP {
            let x = rng.gen_range(0..n as u32);
            let y = rng.gen_range(0..n as u32);
            if x != y {
                tau = tau.max(pair_stretch(x, y));
            }
        }
    }
    tau
}

/// A separator set for one cover tree: removing `x_nodes` leaves
/// components of at most `k_prime` nodes.
#[derive(Debug, Clone)]
pub struct SeparatorSet {
    pub k_prime: usize,
    pub x_nodes: Vec<u32>,
    /// node -> component index, -1 for removed nodes
    pub comp_id: Vec<i32>,
    /// component index -> member node ids
    pub members: Vec<Vec<u32>>,
}

/// Repeatedly remove a centroid of any component larger than `k_prime`.
pub fn centroid_decompose(tree: &CoverTree, k_prime: usize) -> SeparatorSet {
    let k_prime = k_prime.max(1);
    let n = tree.len();
    let mut removed = vec![false; n];
    let mut x_nodes = Vec::new();
    let mut stack = vec![tree.root];
    let mut seen = vec![false; n];
    while let Some(start) = stack.pop() {
        if removed[start as usize] || seen[start as usize] {
            continue;
        }
        // collect the component
        let mut comp = Vec::new();
        let mut bfs = vec![start];
        let mut mark = std::collections::HashSet::new();
        mark.insert(start);
        while let Some(u) = bfs.pop() {
            comp.push(u);
            for v in tree.neighbors(u) {
                if !removed[v as usize] && mark.insert(v) {
                    bfs.push(v);
                }
            }
        }
        if comp.len() <= k_prime {
            for &u in &comp {
                seen[u as usize] = true;
            }
            continue;
        }
        let c = find_centroid(tree, &removed, &comp);
        removed[c as usize] = true;
        x_nodes.push(c);
        for v in tree.neighbors(c) {
            if !removed[v as usize] {
                stack.push(v);
            }
        }
    }
    x_nodes.sort_unstable();

    // label residual components
    let mut comp_id = vec![-1i32; n];
    let mut members = Vec::new();
    for start in 0..n as u32 {
        if removed[start as usize] || comp_id[start as usize] >= 0 {
            continue;
        }
        let id = members.len() as i32;
        let mut group = Vec::new();
        let mut bfs = vec![start];
        comp_id[start as usize] = id;
        while let Some(u) = bfs.pop() {
            group.push(u);
            for v in tree.neighbors(u) {
                if !removed[v as usize] && comp_id[v as usize] < 0 {
                    comp_id[v as usize] = id;
                    bfs.push(v);
                }
            }
        }
        members.push(group);
    }
    SeparatorSet { k_prime, x_nodes, comp_id, members }
}

fn find_centroid(tree: &CoverTree, removed: &[bool], comp: &[u32]) -> u32 {
    let m = comp.len();
    let in_comp: std::collections::HashSet<u32> = comp.iter().copied().collect();
    // subtree sizes rooted at comp[0], iterative post-order
    let root = comp[0];
    let mut size = std::collections::HashMap::new();
    let mut parent = std::collections::HashMap::new();
    let mut order = Vec::with_capacity(m);
    let mut stack = vec![root];
    parent.insert(root, NO_NODE);
    while let Some(u) = stack.pop() {
        order.push(u);
        for v in tree.neighbors(u) {
            if !removed[v as usize] && in_comp.contains(&v) && !parent.contains_key(&v) {
                parent.insert(v, u);
                stack.push(v);
            }
        }
    }
    for &u in order.iter().rev() {
        let mut s = 1usize;
        for v in tree.neighbors(u) {
            if parent.get(&v) == Some(&u) {
                s += size[&v];
            }
        }
        size.insert(u, s);
    }
    // walk toward the heavy side until all parts are <= m/2
    let mut u = root;
    'outer: loop {
        let up = m - size[&u];
        let mut heavy = None;
        for v in tree.neighbors(u) {
            if parent.get(&v) == Some(&u) && size[&v] > m / 2 {
                heavy = Some(v);
            }
        }
        if let Some(v) = heavy {
            u = v;
            continue 'outer;
        }
        if up > m / 2 {
            // cannot happen after following heavy children, tree centroid exists
            u = parent[&u];
            continue 'outer;
        }
        return u;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid_points(side: usize) -> PointSet {
        let mut pts = Vec::new();
        for i in 0..side {
            for j in 0..side {
                pts.push(vec![i as f64, j as f64]);
            }
        }
        PointSet::new(2, pts).unwrap()
    }

    #[test]
    fn single_point_cover() {
        let ps = PointSet::new(2, vec![vec![0.0, 0.0]]).unwrap();
        let cover = shifted_quadtree_cover(&ps, 2, 1).unwrap();
        assert_eq!(cover.tau, 1.0);
        for t in &cover.trees {
            assert_eq!(t.len(), 1);
        }
    }

    #[test]
    fn two_point_cover() {
        let ps = PointSet::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let cover = shifted_quadtree_cover(&ps, 3, 7).unwrap();
        assert!(cover.tau.is_finite() && cover.tau >= 1.0);
        for t in &cover.trees {
            assert_eq!(t.len(), 3); // one root, two leaves
        }
    }

    #[test]
    fn grid_cover_invariants() {
        // invariants are asserted inside the constructor; 4x4 grid, 3 shifts
        let ps = grid_points(4);
        let cover = shifted_quadtree_cover(&ps, 3, 11).unwrap();
        assert_eq!(cover.trees.len(), 3);
        for t in &cover.trees {
            let leaves = t.nodes.iter().filter(|n| n.is_leaf()).count();
            assert_eq!(leaves, 16);
        }
    }

    #[test]
    fn one_d_cover_builds() {
        let ps = PointSet::line(37);
        let cover = shifted_quadtree_cover(&ps, 2, 5).unwrap();
        assert!(cover.tau >= 1.0);
    }

    #[test]
    fn path_lengths_match_bruteforce() {
        let ps = grid_points(3);
        let cover = shifted_quadtree_cover(&ps, 1, 3).unwrap();
        let tree = &cover.trees[0];
        // brute-force the leaf path by walking parents
        let walk = |mut a: u32, target: u32| -> Vec<u32> {
            let mut path = vec![a];
            while a != target {
                a = tree.nodes[a as usize].parent;
                path.push(a);
            }
            path
        };
        for x in 0..9u32 {
            for y in x + 1..9 {
                let (la, lb) = (tree.leaf_of[x as usize], tree.leaf_of[y as usize]);
                let l = tree.lca(la, lb);
                let mut len = 0.0;
                for leg in [walk(la, l), walk(lb, l)] {
                    for w in leg.windows(2) {
                        len += ps.dist(tree.nodes[w[0] as usize].rep, tree.nodes[w[1] as usize].rep);
                    }
                }
                assert!((len - tree.leaf_path_length(x, y)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn centroid_balanced_seven() {
        // hand-built balanced tree with 7 nodes: centroid is the root,
        // leaving two components of size 3
        let ps = PointSet::line(7);
        let cover = shifted_quadtree_cover(&ps, 1, 1).unwrap();
        // use an explicit balanced tree instead of the quadtree shape
        let mut nodes = Vec::new();
        for rep in 0..7u32 {
            nodes.push(TreeNode { parent: NO_NODE, left: NO_NODE, right: NO_NODE, rep });
        }
        let link = |nodes: &mut Vec<TreeNode>, p: u32, l: u32, r: u32| {
            nodes[p as usize].left = l;
            nodes[p as usize].right = r;
            nodes[l as usize].parent = p;
            nodes[r as usize].parent = p;
        };
        link(&mut nodes, 0, 1, 2);
        link(&mut nodes, 1, 3, 4);
        link(&mut nodes, 2, 5, 6);
        let tree = CoverTree {
            nodes,
            root: 0,
            leaf_of: vec![0; 7],
            nodes_of: vec![Vec::new(); 7],
            depth: vec![0, 1, 1, 2, 2, 2, 2],
            root_dist: vec![0.0; 7],
        };
        let sep = centroid_decompose(&tree, 3);
        assert_eq!(sep.x_nodes, vec![0]);
        assert_eq!(sep.members.len(), 2);
        assert!(sep.members.iter().all(|m| m.len() == 3));
        let _ = cover;
    }

    #[test]
    fn centroid_path_nine() {
        // path-shaped tree of 9 nodes, k'=2 -> 3 separators, components <= 2
        let mut nodes = Vec::new();
        for rep in 0..9u32 {
            nodes.push(TreeNode { parent: NO_NODE, left: NO_NODE, right: NO_NODE, rep });
        }
        for i in 0..8usize {
            nodes[i].left = (i + 1) as u32;
            nodes[i + 1].parent = i as u32;
        }
        let tree = CoverTree {
            nodes,
            root: 0,
            leaf_of: vec![0; 9],
            nodes_of: vec![Vec::new(); 9],
            depth: (0..9).collect(),
            root_dist: vec![0.0; 9],
        };
        let sep = centroid_decompose(&tree, 2);
        assert_eq!(sep.x_nodes.len(), 3);
        assert!(sep.members.iter().all(|m| m.len() <= 2));
    }

    #[test]
    fn decompose_trivial_when_k_large() {
        let ps = PointSet::line(10);
        let cover = shifted_quadtree_cover(&ps, 1, 2).unwrap();
        let sep = centroid_decompose(&cover.trees[0], cover.trees[0].len());
        assert!(sep.x_nodes.is_empty());
    }

    #[test]
    fn decompose_respects_bounds_on_random_covers() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let pts: Vec<Vec<f64>> = (0..40)
            .map(|_| vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)])
            .collect();
        let ps = PointSet::new(2, pts).unwrap();
        let cover = shifted_quadtree_cover(&ps, 2, 9).unwrap();
        for tree in &cover.trees {
            for k in [2usize, 5, 10] {
                let sep = centroid_decompose(tree, k);
                assert!(sep.members.iter().all(|m| m.len() <= k));
                // every non-removed node is in exactly one component
                let total: usize = sep.members.iter().map(|m| m.len()).sum();
                assert_eq!(total + sep.x_nodes.len(), tree.len());
                // removal bound
                assert!(sep.x_nodes.len() <= 2 * tree.len() / k + 1);
            }
        }
    }
}
