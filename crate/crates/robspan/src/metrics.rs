//! Ground-truth verification: shortest paths, stretch factors, the
//! robustness definition as a decidable predicate, and the minimal-S+
//! oracle via conflict-graph vertex cover.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::path::Path;

use crate::geom::{GeomGraph, VertexSet};
use crate::{Error, Result};

/// Additive tolerance on stretch ratios, absorbing floating-point path
/// summation. Integer 1-D inputs compare exactly.
pub const STRETCH_TOL: f64 = 1e-9;

/// Which robustness variant a certificate witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `G \ S` must be a t-spanner of `V \ S+` (paths may use casualties).
    Deletion,
    /// The stronger variant: `G \ S+` must be a t-spanner of `V \ S+`.
    Induced,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Deletion => write!(f, "deletion"),
            Mode::Induced => write!(f, "induced"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "deletion" => Ok(Mode::Deletion),
            "induced" => Ok(Mode::Induced),
            other => Err(Error::InvalidInput(format!("unknown mode `{other}`"))),
        }
    }
}

/// Witness that `G \ S` is a t-spanner of `V \ S+`.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessCertificate {
    pub t: f64,
    pub s: VertexSet,
    pub s_plus: VertexSet,
    pub mode: Mode,
    pub verified: bool,
    /// True only when S+ was produced by the exact vertex-cover oracle.
    pub minimal: bool,
}

impl fmt::Display for RobustnessCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "t={:?} mode={} |S|={} |S+|={} verified={} minimal={}",
            self.t,
            self.mode,
            self.s.len(),
            self.s_plus.len(),
            self.verified,
            self.minimal
        )?;
        let fmt_set = |set: &VertexSet| {
            set.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
        };
        writeln!(f, "S: {}", fmt_set(&self.s))?;
        write!(f, "S+: {}", fmt_set(&self.s_plus))
    }
}

impl RobustnessCertificate {
    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, format!("{self}\n"))?;
        Ok(())
    }
}

#[derive(Copy, Clone, PartialEq)]
struct HeapItem(f64, u32);

impl Eq for HeapItem {}
impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source shortest path lengths under Euclidean edge lengths.
/// Unreachable vertices get `f64::INFINITY`.
pub fn shortest_path_lengths(g: &GeomGraph, source: u32) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.n()];
    if !g.is_active(source) {
        return dist;
    }
    dist[source as usize] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(HeapItem(0.0, source));
    while let Some(HeapItem(d, u)) = heap.pop() {
        if d > dist[u as usize] {
            continue;
        }
        for &(v, len) in g.neighbors(u) {
            let nd = d + len;
            if nd < dist[v as usize] {
                dist[v as usize] = nd;
                heap.push(HeapItem(nd, v));
            }
        }
    }
    dist
}

/// Stretch factor `‖xy‖_G / ‖xy‖` for a single pair.
pub fn stretch(g: &GeomGraph, x: u32, y: u32) -> Result<f64> {
    if x == y {
        return Err(Error::InvalidInput("stretch of a pair requires x != y".into()));
    }
    let d = shortest_path_lengths(g, x)[y as usize];
    Ok(d / g.dist(x, y))
}

/// A surviving pair whose stretch exceeds the bound.
#[derive(Debug, Clone, Copy)]
pub struct Violation {
    pub u: u32,
    pub v: u32,
    pub stretch: f64,
}

/// First t-spanner violation among pairs of `w`, or `None`.
///
/// `Deletion` checks pairs of `w` in `g` as given; `Induced` first
/// restricts `g` to `w`.
pub fn spanner_violation(g: &GeomGraph, w: &VertexSet, t: f64, mode: Mode) -> Option<Violation> {
    let restricted;
    let g = match mode {
        Mode::Deletion => g,
        Mode::Induced => {
            let drop = g.active_vertices().difference(w);
            restricted = g.remove_vertices(&drop).ok()?;
            &restricted
        }
    };
    let verts = w.as_slice();
    for (i, &u) in verts.iter().enumerate() {
        if i + 1 == verts.len() {
            break;
        }
        let dist = shortest_path_lengths(g, u);
        for &v in &verts[i + 1..] {
            let ratio = dist[v as usize] / g.dist(u, v);
            if ratio > t + STRETCH_TOL {
                return Some(Violation { u, v, stretch: ratio });
            }
        }
    }
    None
}

pub fn is_t_spanner_of(g: &GeomGraph, w: &VertexSet, t: f64, mode: Mode) -> bool {
    spanner_violation(g, w, t, mode).is_none()
}

/// Graph on survivors `V \ S` whose edges are the pairs violating the
/// stretch bound in `G \ S`. `V \ S+` is a valid survivor set iff it is
/// an independent set here, so minimum vertex cover yields minimal S+.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    pub vertices: VertexSet,
    pub edges: Vec<(u32, u32)>,
}

pub fn conflict_graph(g: &GeomGraph, s: &VertexSet, t: f64) -> Result<ConflictGraph> {
    let gs = g.remove_vertices(s)?;
    let survivors = gs.active_vertices();
    let verts = survivors.as_slice();
    let mut edges = Vec::new();
    for (i, &u) in verts.iter().enumerate() {
        if i + 1 == verts.len() {
            break;
        }
        let dist = shortest_path_lengths(&gs, u);
        for &v in &verts[i + 1..] {
            if dist[v as usize] / gs.dist(u, v) > t + STRETCH_TOL {
                edges.push((u, v));
            }
        }
    }
    Ok(ConflictGraph { vertices: survivors, edges })
}

/// Minimum vertex cover. Exact branch-and-bound when the conflict graph
/// has at most `exact_cap` (and 64) vertices, otherwise a
/// maximal-matching 2-approximation flagged `is_exact = false`.
pub fn min_vertex_cover(h: &ConflictGraph, exact_cap: usize) -> (VertexSet, bool) {
    if h.edges.is_empty() {
        return (VertexSet::empty(), true);
    }
    // compress to touched vertices only
    let mut touched: Vec<u32> = h.edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    touched.sort_unstable();
    touched.dedup();
    if touched.len() <= exact_cap.min(64) {
        let idx_of = |v: u32| touched.binary_search(&v).unwrap();
        let mut adj = vec![0u64; touched.len()];
        for &(u, v) in &h.edges {
            let (a, b) = (idx_of(u), idx_of(v));
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        let alive = if touched.len() == 64 {
            u64::MAX
        } else {
            (1u64 << touched.len()) - 1
        };
        let mut best = alive; // trivial cover: everything
        exact_cover(&adj, alive, 0, &mut best);
        let cover: VertexSet = (0..touched.len())
            .filter(|&i| best >> i & 1 == 1)
            .map(|i| touched[i])
            .collect();
        (cover, true)
    } else {
        // greedy maximal matching, deterministic in edge order
        let mut in_cover = VertexSet::empty();
        let mut covered = std::collections::HashSet::new();
        for &(u, v) in &h.edges {
            if !covered.contains(&u) && !covered.contains(&v) {
                covered.insert(u);
                covered.insert(v);
            }
        }
        let mut ids: Vec<u32> = covered.into_iter().collect();
        ids.sort_unstable();
        for v in ids {
            in_cover = in_cover.union(&VertexSet::new(vec![v]));
        }
        (in_cover, false)
    }
}

/// Branch and bound with degree-0/1 reductions, branching on a
/// maximum-degree vertex. `chosen` is a popcount; `best` holds the best
/// cover mask found so far.
fn exact_cover(adj: &[u64], alive: u64, chosen: u64, best: &mut u64) {
    if chosen.count_ones() >= best.count_ones() {
        return;
    }
    let mut alive = alive;
    let mut chosen = chosen;
    // reductions
    loop {
        let mut changed = false;
        let mut iter = alive;
        while iter != 0 {
            let i = iter.trailing_zeros() as usize;
            iter &= iter - 1;
            let nb = adj[i] & alive;
            match nb.count_ones() {
                0 => {
                    alive &= !(1 << i);
                    changed = true;
                }
                1 => {
                    let j = nb.trailing_zeros();
                    chosen |= 1 << j;
                    alive &= !(1 << i);
                    alive &= !(1 << j);
                    changed = true;
                    if chosen.count_ones() >= best.count_ones() {
                        return;
                    }
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    if alive == 0 {
        if chosen.count_ones() < best.count_ones() {
            *best = chosen;
        }
        return;
    }
    // pick max-degree vertex
    let mut pick = 0;
    let mut deg = 0;
    let mut iter = alive;
    while iter != 0 {
        let i = iter.trailing_zeros() as usize;
        iter &= iter - 1;
        let d = (adj[i] & alive).count_ones();
        if d > deg {
            deg = d;
            pick = i;
        }
    }
    // branch: pick in cover
    exact_cover(adj, alive & !(1 << pick), chosen | 1 << pick, best);
    // branch: all neighbors of pick in cover
    let nb = adj[pick] & alive;
    exact_cover(adj, alive & !nb & !(1 << pick), chosen | nb, best);
}

/// The conflict-graph oracle: S+ = S ∪ min vertex cover of the conflicts,
/// re-verified before return. Induced mode iterates to a fixed point
/// because removing cover vertices can create new violations.
pub fn minimal_splus(
    g: &GeomGraph,
    s: &VertexSet,
    t: f64,
    mode: Mode,
    exact_cap: usize,
) -> Result<RobustnessCertificate> {
    s.check_range(g.n())?;
    let mut s_plus = s.clone();
    let mut exact = true;
    match mode {
        Mode::Deletion => {
            let h = conflict_graph(g, s, t)?;
            let (cover, is_exact) = min_vertex_cover(&h, exact_cap);
            exact = is_exact;
            s_plus = s_plus.union(&cover);
        }
        Mode::Induced => {
            // monotone: S+ only grows, terminates in at most n rounds
            for _ in 0..=g.n() {
                let h = conflict_graph(g, &s_plus, t)?;
                if h.edges.is_empty() {
                    break;
                }
                let (cover, is_exact) = min_vertex_cover(&h, exact_cap);
                exact = exact && is_exact;
                s_plus = s_plus.union(&cover);
            }
        }
    }
    let survivors = g.active_vertices().difference(&s_plus);
    let gs = g.remove_vertices(s)?;
    let verified = spanner_violation(&gs, &survivors, t, mode).is_none();
    Ok(RobustnessCertificate {
        t,
        s: s.clone(),
        s_plus,
        mode,
        verified,
        minimal: exact,
    })
}

/// Exact minimum `|N(S)|` over all `S` of each size `1..=s_max`, by
/// exhaustive bitmask enumeration. Guarded to tiny graphs.
pub fn magnification_bruteforce(g: &GeomGraph, s_max: usize) -> Result<Vec<(usize, usize)>> {
    let n = g.n();
    if n > 24 {
        return Err(Error::InvalidInput(format!(
            "magnification enumeration is limited to 24 vertices, got {n}"
        )));
    }
    if s_max > n / 2 {
        return Err(Error::InvalidInput(format!(
            "s_max {s_max} exceeds |V|/2 = {}",
            n / 2
        )));
    }
    let mut adj = vec![0u32; n];
    for &(u, v) in g.edges() {
        adj[u as usize] |= 1 << v;
        adj[v as usize] |= 1 << u;
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let mut out = Vec::new();
    for s in 1..=s_max {
        let mut best = usize::MAX;
        // Gosper's hack over all size-s subsets
        let mut mask: u32 = (1 << s) - 1;
        while mask <= full && mask != 0 {
            let mut nbh: u32 = 0;
            let mut it = mask;
            while it != 0 {
                let i = it.trailing_zeros() as usize;
                it &= it - 1;
                nbh |= adj[i];
            }
            nbh &= !mask & full;
            best = best.min(nbh.count_ones() as usize);
            // next subset of the same popcount
            let c = mask & mask.wrapping_neg();
            let r = mask.wrapping_add(c);
            if r == 0 {
                break;
            }
            mask = (((r ^ mask) >> 2) / c) | r;
        }
        out.push((s, best));
    }
    Ok(out)
}

/// Histogram of edge lengths over the half-open classes defined by
/// sorted `boundaries`: class `i` is `[boundaries[i], boundaries[i+1])`.
pub fn edge_length_census(g: &GeomGraph, boundaries: &[f64]) -> Result<Vec<usize>> {
    if boundaries.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("boundaries must be sorted ascending".into()));
    }
    if boundaries.len() < 2 {
        return Ok(Vec::new());
    }
    let mut counts = vec![0usize; boundaries.len() - 1];
    for (_, len) in g.edge_lengths() {
        // linear scan: class counts are small
        for i in 0..counts.len() {
            if len >= boundaries[i] && len < boundaries[i + 1] {
                counts[i] += 1;
                break;
            }
        }
    }
    Ok(counts)
}

/// Number of edges with length in the closed interval `[lo, hi]`.
/// Classes of this form may overlap, unlike `edge_length_census`.
pub fn edges_in_range(g: &GeomGraph, lo: f64, hi: f64) -> usize {
    g.edge_lengths().filter(|&(_, len)| len >= lo && len <= hi).count()
}
