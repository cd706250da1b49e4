//! Integer grid graph and its quadtree-shift casualty builder. The grid
//! satisfies the stronger, induced form of robustness at stretch 3 with
//! a casualty budget quadratic in the failure count.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::{GeomGraph, PointSet, VertexSet};
use crate::metrics::{spanner_violation, Mode, RobustnessCertificate};
use crate::{Error, Result};

pub const GRID_STRETCH: f64 = 3.0;
/// casualty budget is GRID_BUDGET_C * k^2
pub const GRID_BUDGET_C: usize = 64;

/// side x side unit grid with 2*side*(side-1) axis-parallel edges.
pub fn build_grid(side: usize) -> Result<(Arc<PointSet>, GeomGraph)> {
    if side == 0 {
        return Err(Error::InvalidInput("grid side must be at least 1".into()));
    }
    let mut pts = Vec::with_capacity(side * side);
    for i in 0..side {
        for j in 0..side {
            pts.push(vec![i as f64, j as f64]);
        }
    }
    let ps = Arc::new(PointSet::new(2, pts)?);
    let at = |i: usize, j: usize| (i * side + j) as u32;
    let mut edges = Vec::with_capacity(2 * side * (side - 1));
    for i in 0..side {
        for j in 0..side {
            if i + 1 < side {
                edges.push((at(i, j), at(i + 1, j)));
            }
            if j + 1 < side {
                edges.push((at(i, j), at(i, j + 1)));
            }
        }
    }
    let g = GeomGraph::new(Arc::clone(&ps), edges)?;
    Ok((ps, g))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Cell {
    level: u32,
    ax: i64,
    ay: i64,
}

impl Cell {
    /// grid-coordinate box covered by the cell under shift (sx, sy),
    /// half-open before clamping; returned closed and clamped to the grid
    fn grid_box(&self, sx: i64, sy: i64, side: i64) -> Option<(i64, i64, i64, i64)> {
        let w = 1i64 << self.level;
        let x0 = (self.ax * w - sx).max(0);
        let x1 = ((self.ax + 1) * w - 1 - sx).min(side - 1);
        let y0 = (self.ay * w - sy).max(0);
        let y1 = ((self.ay + 1) * w - 1 - sy).min(side - 1);
        (x0 <= x1 && y0 <= y1).then_some((x0, x1, y0, y1))
    }
}

fn boxes_intersect(a: (i64, i64, i64, i64), b: (i64, i64, i64, i64)) -> bool {
    a.0 <= b.1 && b.0 <= a.1 && a.2 <= b.3 && b.2 <= a.3
}

fn contains(b: (i64, i64, i64, i64), x: i64, y: i64) -> bool {
    b.0 <= x && x <= b.1 && b.2 <= y && y <= b.3
}

/// One shift attempt: level-0 cells at every failed vertex, promoted
/// until every cell's closed 1-ring avoids the other cells and all
/// failed vertices outside the cell.
fn cells_for_shift(
    s_xy: &[(i64, i64)],
    sx: i64,
    sy: i64,
    side: i64,
    max_level: u32,
) -> Vec<Cell> {
    let mut cells: Vec<Cell> = s_xy
        .iter()
        .map(|&(x, y)| Cell { level: 0, ax: x + sx, ay: y + sy })
        .collect();
    cells.sort_by_key(|c| (c.level, c.ax, c.ay));
    cells.dedup();
    loop {
        let boxes: Vec<_> = cells.iter().map(|c| c.grid_box(sx, sy, side)).collect();
        let mut promote = None;
        'scan: for (i, c) in cells.iter().enumerate() {
            if c.level >= max_level {
                continue;
            }
            let Some(b) = boxes[i] else { continue };
            let ring = (b.0 - 1, b.1 + 1, b.2 - 1, b.3 + 1);
            for (j, ob) in boxes.iter().enumerate() {
                if i != j && ob.is_some_and(|ob| boxes_intersect(ring, ob)) {
                    promote = Some(i);
                    break 'scan;
                }
            }
            for &(x, y) in s_xy {
                if contains(ring, x, y) && !contains(b, x, y) {
                    promote = Some(i);
                    break 'scan;
                }
            }
        }
        match promote {
            Some(i) => {
                let c = &mut cells[i];
                c.level += 1;
                c.ax >>= 1;
                c.ay >>= 1;
                cells.sort_by_key(|c| (c.level, c.ax, c.ay));
                cells.dedup();
            }
            None => return cells,
        }
    }
}

/// Casualty builder for the grid: draws a random quadtree shift, covers
/// S with promoted disjoint cells, and verifies the survivors form an
/// induced 3-spanner. Retries with a new shift on verification failure
/// or budget overrun.
pub fn splus_grid(
    g: &GeomGraph,
    side: usize,
    s: &VertexSet,
    seed: u64,
    max_retries: usize,
) -> Result<RobustnessCertificate> {
    if side * side != g.n() {
        return Err(Error::InvalidInput(format!(
            "graph has {} vertices, not a {side}x{side} grid",
            g.n()
        )));
    }
    s.check_range(g.n())?;
    let k = s.len();
    if k == 0 {
        return Ok(RobustnessCertificate {
            t: GRID_STRETCH,
            s: VertexSet::empty(),
            s_plus: VertexSet::empty(),
            mode: Mode::Induced,
            verified: true,
            minimal: true,
        });
    }
    let side_i = side as i64;
    let s_xy: Vec<(i64, i64)> = s
        .iter()
        .map(|v| ((v as i64) / side_i, (v as i64) % side_i))
        .collect();
    let m = (side as u64).next_power_of_two() as i64;
    let max_level = (2 * m as u64).trailing_zeros();
    let budget = GRID_BUDGET_C * k * k;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<RobustnessCertificate> = None;
    for _ in 0..max_retries.max(1) {
        let sx = rng.gen_range(0..m);
        let sy = rng.gen_range(0..m);
        let cells = cells_for_shift(&s_xy, sx, sy, side_i, max_level);
        let mut ids: Vec<u32> = Vec::new();
        for c in &cells {
            if let Some((x0, x1, y0, y1)) = c.grid_box(sx, sy, side_i) {
                for x in x0..=x1 {
                    for y in y0..=y1 {
                        ids.push((x * side_i + y) as u32);
                    }
                }
            }
        }
        ids.extend(s.iter());
        let s_plus = VertexSet::new(ids);
        let survivors = g.active_vertices().difference(&s_plus);
        let verified = spanner_violation(g, &survivors, GRID_STRETCH, Mode::Induced).is_none();
        let cert = RobustnessCertificate {
            t: GRID_STRETCH,
            s: s.clone(),
            s_plus,
            mode: Mode::Induced,
            verified,
            minimal: false,
        };
        if verified && cert.s_plus.len() <= budget {
            return Ok(cert);
        }
        if verified && best.as_ref().is_none_or(|b| cert.s_plus.len() < b.s_plus.len()) {
            best = Some(cert);
        }
    }
    Err(Error::RetriesExhausted {
        attempts: max_retries.max(1),
        best: best.map(Box::new),
    })
}
