//! Attack generators and a robustness prober. The interval-endpoints
//! attack mechanizes the lower-bound argument: delete a rank window plus
//! the left endpoints of every short edge crossing it, so any surviving
//! crossing edge is long. Refusal (too many short crossing edges for the
//! budget) is itself evidence of robustness.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::{GeomGraph, VertexSet};
use crate::metrics::{edges_in_range, minimal_splus, Mode, RobustnessCertificate};
use crate::one_d::IteratedFunction;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttackKind {
    IntervalEndpoints,
    Random,
}

impl std::fmt::Display for AttackKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AttackKind::IntervalEndpoints => write!(f, "interval_endpoints"),
            AttackKind::Random => write!(f, "random"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AttackSpec {
    pub kind: AttackKind,
    /// deletion budget
    pub k: usize,
    /// center rank (1-based) for the interval kinds
    pub i: usize,
    /// robustness constant being probed
    pub c: usize,
    /// stretch the attack targets
    pub t: f64,
    pub seed: u64,
}

fn check_interval_pre(g: &GeomGraph, i: usize, k: usize, c: usize) -> Result<()> {
    if g.points().dim() != 1 {
        return Err(Error::InvalidInput("interval attacks need 1-D ranked input".into()));
    }
    if k == 0 || !k.is_multiple_of(4) {
        return Err(Error::InvalidInput(format!("budget k must be a positive multiple of 4, got {k}")));
    }
    let n = g.n();
    if !(c * k < i && i + c * k < n) {
        return Err(Error::InvalidInput(format!(
            "center {i} out of range [{}, {}] for n={n}",
            c * k + 1,
            n.saturating_sub(c * k + 1)
        )));
    }
    Ok(())
}

/// Edges xy (as 0-based index pairs) whose ranks strictly straddle the
/// window [i-k/4, i+k/4] and whose rank length is at most 2ctk.
pub fn good_edges(g: &GeomGraph, i: usize, k: usize, c: usize, t: f64) -> Result<Vec<(u32, u32)>> {
    if g.n() == 0 {
        return Ok(Vec::new());
    }
    check_interval_pre(g, i, k, c)?;
    let limit = 2.0 * c as f64 * t * k as f64;
    let (lo, hi) = (i - k / 4, i + k / 4);
    Ok(g.edges()
        .iter()
        .copied()
        .filter(|&(u, v)| {
            let (x, y) = (u as usize + 1, v as usize + 1); // ranks
            x < lo && hi < y && (y - x) as f64 <= limit
        })
        .collect())
}

/// The window ranks plus the left endpoint of every good edge. Refuses
/// with the good-edge count when the set cannot fit the budget k —
/// the expected outcome on robust inputs.
pub fn attack_interval_endpoints(
    g: &GeomGraph,
    i: usize,
    k: usize,
    c: usize,
    t: f64,
) -> Result<VertexSet> {
    check_interval_pre(g, i, k, c)?;
    let good = good_edges(g, i, k, c, t)?;
    let mut ids: Vec<u32> = ((i - k / 4)..=(i + k / 4)).map(|r| (r - 1) as u32).collect();
    ids.extend(good.iter().map(|&(u, _)| u));
    let s = VertexSet::new(ids);
    if good.len() > k / 2 || s.len() > k {
        return Err(Error::AttackRefused { good: good.len(), budget: k / 2 });
    }
    debug_assert!(cut_property_holds(g, &s, i, 2.0 * c as f64 * t * k as f64));
    Ok(s)
}

/// Audit of the attack's guarantee: in G minus S, every surviving edge
/// whose ranks straddle i is longer than `limit` ranks.
pub fn cut_property_holds(g: &GeomGraph, s: &VertexSet, i: usize, limit: f64) -> bool {
    g.edges().iter().all(|&(u, v)| {
        let (x, y) = (u as usize + 1, v as usize + 1);
        if s.contains(u) || s.contains(v) || !(x < i && i < y) {
            return true;
        }
        (y - x) as f64 > limit
    })
}

/// Uniform k-subset of {0..n-1}, deterministic per seed.
pub fn attack_random(n: usize, k: usize, seed: u64) -> Result<VertexSet> {
    if k > n {
        return Err(Error::InvalidInput(format!("cannot delete {k} of {n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<u32> = (0..n as u32).collect();
    for j in 0..k {
        let pick = rng.gen_range(j..pool.len());
        pool.swap(j, pick);
    }
    pool.truncate(k);
    Ok(VertexSet::new(pool))
}

pub fn generate(g: &GeomGraph, spec: &AttackSpec) -> Result<VertexSet> {
    match spec.kind {
        AttackKind::IntervalEndpoints => {
            attack_interval_endpoints(g, spec.i, spec.k, spec.c, spec.t)
        }
        AttackKind::Random => attack_random(g.n(), spec.k, spec.seed),
    }
}

#[derive(Debug, Clone)]
pub struct ProbeRow {
    pub kind: AttackKind,
    pub k: usize,
    pub seed: u64,
    pub splus_constructive: Option<usize>,
    pub splus_oracle: Option<usize>,
    pub oracle_exact: bool,
    pub verified: bool,
    pub note: String,
}

#[derive(Debug, Clone)]
pub struct CensusRow {
    pub class: usize,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub flagged: bool,
}

#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub rows: Vec<ProbeRow>,
    pub census: Vec<CensusRow>,
}

impl ProbeReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,k,seed,splus_constructive,splus_oracle,oracle_exact,verified,note\n");
        let opt = |o: Option<usize>| o.map_or(String::new(), |v| v.to_string());
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.kind,
                r.k,
                r.seed,
                opt(r.splus_constructive),
                opt(r.splus_oracle),
                r.oracle_exact,
                r.verified,
                r.note
            ));
        }
        out.push_str("class,lo,hi,count,flagged\n");
        for c in &self.census {
            out.push_str(&format!("{},{:?},{:?},{},{}\n", c.class, c.lo, c.hi, c.count, c.flagged));
        }
        out
    }
}

/// Length classes [f^i(k0)/2, 2t*f^i(k0)] for i = 0..=f*(n).
pub fn census_classes(f: &IteratedFunction, t: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    let top = if n >= 2 { f.f_star(n as f64)? } else { 0 };
    Ok((0..=top)
        .map(|i| {
            let v = f.iterate(i);
            (v / 2.0, 2.0 * t * v)
        })
        .collect())
}

pub type SplusBuilder<'a> = dyn Fn(&GeomGraph, &VertexSet) -> Result<RobustnessCertificate> + 'a;

/// Runs every attack against the optional constructive builder and the
/// conflict-graph oracle, and appends the edge-length census. Per-attack
/// failures are recorded in the row, never thrown.
pub fn probe(
    g: &GeomGraph,
    t: f64,
    attacks: &[AttackSpec],
    builder: Option<&SplusBuilder>,
    exact_cap: usize,
    census_f: Option<(&IteratedFunction, usize)>,
) -> ProbeReport {
    let mut rows = Vec::with_capacity(attacks.len());
    for spec in attacks {
        let mut row = ProbeRow {
            kind: spec.kind,
            k: spec.k,
            seed: spec.seed,
            splus_constructive: None,
            splus_oracle: None,
            oracle_exact: false,
            verified: false,
            note: String::new(),
        };
        let s = match generate(g, spec) {
            Ok(s) => s,
            Err(e) => {
                row.note = match e {
                    Error::AttackRefused { good, budget } => {
                        format!("refused: {good} good edges exceed budget {budget}")
                    }
                    other => format!("attack failed: {other}"),
                };
                rows.push(row);
                continue;
            }
        };
        row.k = s.len();
        let mut verified = true;
        if let Some(b) = builder {
            match b(g, &s) {
                Ok(cert) => {
                    row.splus_constructive = Some(cert.s_plus.len());
                    verified &= cert.verified;
                }
                Err(e) => {
                    row.note = format!("builder failed: {e}");
                    verified = false;
                }
            }
        }
        match minimal_splus(g, &s, t, Mode::Deletion, exact_cap) {
            Ok(cert) => {
                row.splus_oracle = Some(cert.s_plus.len());
                row.oracle_exact = cert.minimal;
                verified &= cert.verified;
            }
            Err(e) => {
                row.note = format!("oracle failed: {e}");
                verified = false;
            }
        }
        row.verified = verified;
        rows.push(row);
    }

    let census = match census_f {
        None => Vec::new(),
        Some((f, flag_threshold)) => census_classes(f, t, g.n())
            .map(|classes| {
                classes
                    .iter()
                    .enumerate()
                    .map(|(i, &(lo, hi))| {
                        let count = edges_in_range(g, lo, hi);
                        CensusRow { class: i, lo, hi, count, flagged: count < flag_threshold }
                    })
                    .collect()
            })
            .unwrap_or_default(),
    };
    ProbeReport { rows, census }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::PointSet;
    use crate::one_d::{build_g2x, preset, splus_g2x, SplusOptions};
    use std::sync::Arc;

    fn path(n: usize) -> GeomGraph {
        let ps = Arc::new(PointSet::line(n));
        let edges = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
        GeomGraph::new(ps, edges).unwrap()
    }

    #[test]
    fn path_has_no_good_edges() {
        let g = path(100);
        for i in [10, 50, 90] {
            assert!(good_edges(&g, i, 4, 1, 2.0).unwrap().is_empty());
        }
    }

    #[test]
    fn good_edges_on_g2x_recheck() {
        let g = build_g2x(Arc::new(PointSet::line(64))).unwrap();
        let (i, k, c, t) = (32usize, 4usize, 1usize, 1.0f64);
        let found = good_edges(&g, i, k, c, t).unwrap();
        assert!(!found.is_empty());
        let limit = 2.0 * c as f64 * t * k as f64;
        for (u, v) in found {
            let (x, y) = (u as usize + 1, v as usize + 1);
            assert!(x < i - k / 4 && i + k / 4 < y);
            assert!((y - x) as f64 <= limit);
        }
    }

    #[test]
    fn interval_attack_on_path() {
        let g = path(60);
        let s = attack_interval_endpoints(&g, 30, 4, 1, 2.0).unwrap();
        // ranks 29..=31 -> indices 28..=30
        assert_eq!(s.as_slice(), &[28, 29, 30]);
        assert!(cut_property_holds(&g, &s, 30, 16.0));
        // oracle: survivors split 28 | 29, smaller side must fall
        let cert = minimal_splus(&g, &s, 2.0, Mode::Deletion, 64).unwrap();
        assert!(cert.verified && cert.minimal);
        assert_eq!(cert.s_plus.len(), 3 + 28);
    }

    #[test]
    fn attack_refused_on_g2x() {
        let g = build_g2x(Arc::new(PointSet::line(64))).unwrap();
        match attack_interval_endpoints(&g, 32, 4, 1, 1.0) {
            Err(Error::AttackRefused { good, budget }) => {
                assert!(good > budget || good > 0);
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn interval_attack_preconditions() {
        let g = path(100);
        assert!(attack_interval_endpoints(&g, 50, 5, 1, 2.0).is_err()); // k not /4
        assert!(attack_interval_endpoints(&g, 2, 4, 1, 2.0).is_err()); // i too small
        assert!(attack_interval_endpoints(&g, 99, 4, 1, 2.0).is_err()); // i too large
    }

    #[test]
    fn random_attack_bounds_and_determinism() {
        assert!(attack_random(10, 0, 1).unwrap().is_empty());
        assert_eq!(attack_random(10, 10, 1).unwrap().len(), 10);
        let a = attack_random(100, 7, 42).unwrap();
        let b = attack_random(100, 7, 42).unwrap();
        assert_eq!(a.as_slice(), b.as_slice());
        let c = attack_random(100, 7, 43).unwrap();
        assert_ne!(a.as_slice(), c.as_slice());
        assert!(attack_random(5, 6, 1).is_err());
    }

    #[test]
    fn census_classes_eventually_disjoint() {
        let f = preset("kpow", 1.0, (1u64 << 20) as f64).unwrap();
        let classes = census_classes(&f, 1.0, 1 << 16).unwrap();
        // for superlinear f the classes separate past some i0
        let mut separated = false;
        for w in classes.windows(2) {
            if w[1].0 > w[0].1 {
                separated = true;
            } else {
                assert!(!separated, "classes re-overlap after separating");
            }
        }
        assert!(separated);
    }

    #[test]
    fn probe_g2x_random_attacks() {
        let g = build_g2x(Arc::new(PointSet::line(256))).unwrap();
        let attacks: Vec<AttackSpec> = (0..5)
            .map(|j| AttackSpec {
                kind: AttackKind::Random,
                k: 4,
                i: 0,
                c: 1,
                t: 1.0,
                seed: j,
            })
            .collect();
        let opts = SplusOptions::default();
        let builder = move |g: &GeomGraph, s: &VertexSet| splus_g2x(g, s, &opts);
        let f = preset("double", 0.0, 256.0).unwrap();
        let report = probe(&g, 1.0, &attacks, Some(&builder), 32, Some((&f, 1)));
        assert_eq!(report.rows.len(), 5);
        for row in &report.rows {
            assert!(row.verified, "row failed: {row:?}");
            let (cons, ora) = (row.splus_constructive.unwrap(), row.splus_oracle.unwrap());
            if row.oracle_exact {
                assert!(ora <= cons);
            }
        }
        assert!(!report.census.is_empty());
        let csv = report.to_csv();
        assert!(csv.starts_with("kind,k,seed,"));
    }

    #[test]
    fn probe_census_only() {
        let g = path(32);
        let f = preset("double", 0.0, 32.0).unwrap();
        let report = probe(&g, 1.0, &[], None, 32, Some((&f, 8)));
        assert!(report.rows.is_empty());
        // all path edges have length 1: only the first class is populated
        assert!(report.census[0].count > 0);
        for c in &report.census[1..] {
            if c.lo > 1.0 {
                assert_eq!(c.count, 0);
                assert!(c.flagged);
            }
        }
    }
}
