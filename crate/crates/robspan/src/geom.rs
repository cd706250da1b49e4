//! Point sets, geometric graphs, induced-subgraph removal, and the text
//! file format shared by the CLI.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use crate::{Error, Result};

/// Euclidean distance between two points of the same dimension.
pub fn distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::InvalidInput(format!(
            "dimension mismatch: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    Ok(p.iter()
        .zip(q)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

/// An immutable ordered set of points in R^d.
///
/// For `dim == 1` the points are stored sorted in strictly increasing
/// order; the constructor sorts and rejects duplicates. Vertices are
/// addressed by index into this set everywhere in the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl PointSet {
    pub fn new(dim: usize, mut points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be >= 1".into()));
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "point has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidInput("non-finite coordinate".into()));
            }
        }
        if dim == 1 {
            points.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());
            for w in points.windows(2) {
                if w[0][0] >= w[1][0] {
                    return Err(Error::InvalidInput(format!(
                        "duplicate 1-D point {}",
                        w[0][0]
                    )));
                }
            }
        } else {
            let mut order: Vec<usize> = (0..points.len()).collect();
            order.sort_by(|&a, &b| points[a].partial_cmp(&points[b]).unwrap());
            for w in order.windows(2) {
                if points[w[0]] == points[w[1]] {
                    return Err(Error::InvalidInput(format!(
                        "duplicate point {:?}",
                        points[w[0]]
                    )));
                }
            }
        }
        Ok(PointSet { dim, points })
    }

    /// The 1-D integer point set {1, ..., n}.
    pub fn line(n: usize) -> Self {
        PointSet {
            dim: 1,
            points: (1..=n).map(|i| vec![i as f64]).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: u32) -> &[f64] {
        &self.points[i as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.points.iter().map(|p| p.as_slice())
    }

    /// Euclidean distance between the points at indices `u` and `v`.
    pub fn dist(&self, u: u32, v: u32) -> f64 {
        distance(self.point(u), self.point(v)).unwrap()
    }

    /// Axis-aligned bounding box `(lo, hi)`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in &self.points {
            for (d, &c) in p.iter().enumerate() {
                lo[d] = lo[d].min(c);
                hi[d] = hi[d].max(c);
            }
        }
        (lo, hi)
    }
}

/// A sorted list of distinct vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexSet(Vec<u32>);

impl VertexSet {
    pub fn new(mut ids: Vec<u32>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        VertexSet(ids)
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        VertexSet::new(v)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    /// Check that every index is below `n`.
    pub fn check_range(&self, n: usize) -> Result<()> {
        if let Some(&v) = self.0.last() {
            if v as usize >= n {
                return Err(Error::InvalidInput(format!(
                    "vertex index {v} out of range for {n} vertices"
                )));
            }
        }
        Ok(())
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut ids = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v: u32 = line.parse().map_err(|_| Error::Parse {
                line: ln + 1,
                msg: format!("bad vertex index `{line}`"),
            })?;
            ids.push(v);
        }
        Ok(VertexSet::new(ids))
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        for v in self.iter() {
            writeln!(out, "{v}").unwrap();
        }
        std::fs::write(path, out)?;
        Ok(())
    }
}

impl FromIterator<u32> for VertexSet {
    fn from_iter<T: IntoIterator<Item = u32>>(iter: T) -> Self {
        VertexSet::new(iter.into_iter().collect())
    }
}

/// An undirected geometric graph: vertex indices into a shared
/// [`PointSet`] plus an edge list with cached Euclidean lengths.
///
/// Vertex identities survive `remove_vertices`: removed vertices stay in
/// the index space but are marked inactive, so set algebra on casualty
/// sets is exact across subgraphs.
#[derive(Debug, Clone)]
pub struct GeomGraph {
    points: Arc<PointSet>,
    active: Vec<bool>,
    edges: Vec<(u32, u32)>,
    lengths: Vec<f64>,
    adj: Vec<Vec<(u32, f64)>>,
}

impl GeomGraph {
    pub fn new(points: Arc<PointSet>, edges: Vec<(u32, u32)>) -> Result<Self> {
        let n = points.len();
        let mut canon: Vec<(u32, u32)> = Vec::with_capacity(edges.len());
        for &(u, v) in &edges {
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at {u}")));
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        canon.dedup();
        if canon.len() != edges.len() {
            return Err(Error::InvalidInput("duplicate edge".into()));
        }
        let lengths: Vec<f64> = canon.iter().map(|&(u, v)| points.dist(u, v)).collect();
        let mut adj = vec![Vec::new(); n];
        for (i, &(u, v)) in canon.iter().enumerate() {
            let len = lengths_at(&lengths, i);
            adj[u as usize].push((v, len));
            adj[v as usize].push((u, len));
        }
        Ok(GeomGraph {
            points,
            active: vec![true; n],
            edges: canon,
            lengths,
            adj,
        })
    }

    pub fn points(&self) -> &Arc<PointSet> {
        &self.points
    }

    /// Number of vertices in the underlying point set (including inactive).
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn is_active(&self, v: u32) -> bool {
        self.active[v as usize]
    }

    pub fn active_vertices(&self) -> VertexSet {
        (0..self.n() as u32).filter(|&v| self.active[v as usize]).collect()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_lengths(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        self.edges.iter().copied().zip(self.lengths.iter().copied())
    }

    pub fn neighbors(&self, v: u32) -> &[(u32, f64)] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n() as u32).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn dist(&self, u: u32, v: u32) -> f64 {
        self.points.dist(u, v)
    }

    /// The subgraph induced by the active vertices minus `s`. Indices are
    /// preserved; `self` is unchanged.
    pub fn remove_vertices(&self, s: &VertexSet) -> Result<GeomGraph> {
        s.check_range(self.n())?;
        let mut active = self.active.clone();
        for v in s.iter() {
            active[v as usize] = false;
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut lengths = Vec::with_capacity(self.lengths.len());
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if active[u as usize] && active[v as usize] {
                edges.push((u, v));
                lengths.push(self.lengths[i]);
            }
        }
        let mut adj = vec![Vec::new(); self.n()];
        for (i, &(u, v)) in edges.iter().enumerate() {
            adj[u as usize].push((v, lengths[i]));
            adj[v as usize].push((u, lengths[i]));
        }
        Ok(GeomGraph {
            points: Arc::clone(&self.points),
            active,
            edges,
            lengths,
            adj,
        })
    }
}

fn lengths_at(lengths: &[f64], i: usize) -> f64 {
    lengths[i]
}

/// Render an `f64` as shortest round-trip decimal text.
fn fmt_coord(c: f64) -> String {
    format!("{c:?}")
}

/// Write the graph file format: `dim <d> n <n> m <m>`, then `n` coordinate
/// lines, then `m` `u v` edge lines with 0-based indices.
pub fn write_graph(path: &Path, points: &PointSet, graph: &GeomGraph) -> Result<()> {
    let mut out = String::new();
    writeln!(
        out,
        "dim {} n {} m {}",
        points.dim(),
        points.len(),
        graph.num_edges()
    )
    .unwrap();
    for p in points.iter() {
        let coords: Vec<String> = p.iter().map(|&c| fmt_coord(c)).collect();
        writeln!(out, "{}", coords.join(" ")).unwrap();
    }
    for &(u, v) in graph.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_graph(path: &Path) -> Result<(Arc<PointSet>, GeomGraph)> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let parse_usize = |tok: &str| -> Result<usize> {
        tok.parse().map_err(|_| Error::Parse {
            line: 1,
            msg: format!("bad header token `{tok}`"),
        })
    };
    if toks.len() != 6 || toks[0] != "dim" || toks[2] != "n" || toks[4] != "m" {
        return Err(Error::Parse {
            line: 1,
            msg: "expected header `dim <d> n <n> m <m>`".into(),
        });
    }
    let dim = parse_usize(toks[1])?;
    let n = parse_usize(toks[3])?;
    let m = parse_usize(toks[5])?;

    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        let (ln, line) = lines.next().ok_or(Error::Parse {
            line: n + 1,
            msg: "missing coordinate row".into(),
        })?;
        let coords: Result<Vec<f64>> = line
            .split_whitespace()
            .map(|t| {
                t.parse().map_err(|_| Error::Parse {
                    line: ln + 1,
                    msg: format!("bad coordinate `{t}`"),
                })
            })
            .collect();
        let coords = coords?;
        if coords.len() != dim {
            return Err(Error::Parse {
                line: ln + 1,
                msg: format!("expected {dim} coordinates, got {}", coords.len()),
            });
        }
        points.push(coords);
    }
    let mut edges = Vec::with_capacity(m);
    let mut edge_lines = 0;
    for (ln, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::Parse {
                line: ln + 1,
                msg: format!("expected `u v`, got `{line}`"),
            });
        }
        let mut pair = [0u32; 2];
        for (slot, t) in pair.iter_mut().zip(&toks) {
            *slot = t.parse().map_err(|_| Error::Parse {
                line: ln + 1,
                msg: format!("bad vertex index `{t}`"),
            })?;
            if *slot as usize >= n {
                return Err(Error::Parse {
                    line: ln + 1,
                    msg: format!("vertex index {slot} out of range"),
                });
            }
        }
        edges.push((pair[0], pair[1]));
        edge_lines += 1;
    }
    if edge_lines != m {
        return Err(Error::Parse {
            line: n + 1 + edge_lines,
            msg: format!("expected {m} edges, got {edge_lines}"),
        });
    }
    // Constructor-level ordering of 1-D points must match the file order,
    // so detect reordering rather than silently permuting edge indices.
    let ps = PointSet::new(dim, points.clone())?;
    if ps.iter().zip(points.iter()).any(|(a, b)| a != b.as_slice()) {
        return Err(Error::Parse {
            line: 2,
            msg: "1-D coordinates must be listed in increasing order".into(),
        });
    }
    let ps = Arc::new(ps);
    let graph = GeomGraph::new(Arc::clone(&ps), edges).map_err(|e| match e {
        Error::InvalidInput(msg) => Error::Parse { line: n + 2, msg },
        other => other,
    })?;
    Ok((ps, graph))
}
