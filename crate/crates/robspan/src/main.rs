use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use robspan::adversary::{self, AttackKind, AttackSpec};
use robspan::geom::{read_graph, write_graph, GeomGraph, PointSet, VertexSet};
use robspan::metrics::{
    magnification_bruteforce, minimal_splus, spanner_violation, Mode, RobustnessCertificate,
};
use robspan::multi_d::grid::{build_grid, splus_grid};
use robspan::multi_d::hardy::build_hardy;
use robspan::multi_d::robust::{build_robust_dd, splus_dd};
use robspan::multi_d::wspd::ft_spanner_edges;
use robspan::one_d::{
    build_g2x, build_gf, g2x_cost_bound, gf_cost_bound, preset, splus_g2x, splus_gf, SplusOptions,
};
use robspan::{Error, Result};

#[derive(Parser)]
#[command(name = "robspan", version, about = "robust geometric spanners: builders, attacks, certificates")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Construction {
    G2x,
    Gf,
    Grid,
    RobustDd,
    Hardy,
    Ft,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Producer {
    G2x,
    Gf,
    Grid,
    Dd,
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliAttackKind {
    Interval,
    Random,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a spanner and write it as a graph file plus a sidecar report
    Build {
        #[arg(value_enum)]
        construction: Construction,
        /// number of points (1-D constructions use ranks 1..n)
        #[arg(long, default_value_t = 64)]
        n: usize,
        /// grid side length
        #[arg(long, default_value_t = 8)]
        side: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// growth-function preset: klogk | ksqrtexp | kpow | double
        #[arg(long, default_value = "kpow")]
        preset: String,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        /// fault budget for the ft construction
        #[arg(long, default_value_t = 1)]
        k0: usize,
        #[arg(long, default_value_t = 2.0)]
        t: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Produce and verify a casualty-set certificate for a failure set
    Certify {
        graph: PathBuf,
        /// failure-set file, one vertex index per line
        s_file: PathBuf,
        #[arg(long, value_enum, default_value_t = Producer::Oracle)]
        producer: Producer,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value = "deletion")]
        mode: Mode,
        #[arg(long, default_value = "kpow")]
        preset: String,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        exact_cap: usize,
        #[arg(long, default_value_t = 64)]
        retries: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a failure set attacking a graph
    Attack {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = CliAttackKind::Random)]
        kind: CliAttackKind,
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// center rank for the interval attack
        #[arg(long, default_value_t = 0)]
        i: usize,
        /// robustness constant being probed
        #[arg(long, default_value_t = 1)]
        c: usize,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pit a builder and the exact oracle against a batch of attacks
    Probe {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = CliAttackKind::Random)]
        kind: CliAttackKind,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, value_enum)]
        builder: Option<Producer>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value = "double")]
        preset: String,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 1)]
        c: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        exact_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid of (n, k, trial) casualty-set experiments as CSV
    Sweep {
        #[arg(value_enum)]
        construction: Construction,
        #[arg(long, value_delimiter = ',', default_value = "256,512")]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,4")]
        k: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value = "kpow")]
        preset: String,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        exact_cap: usize,
        #[arg(long, default_value_t = 64)]
        retries: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Edge-length census over the growth function's length classes
    Census {
        graph: PathBuf,
        #[arg(long, default_value = "double")]
        preset: String,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// classes with fewer edges are flagged
        #[arg(long, default_value_t = 1)]
        threshold: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact minimal casualty set via the conflict-graph oracle
    Oracle {
        graph: PathBuf,
        s_file: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value = "deletion")]
        mode: Mode,
        #[arg(long, default_value_t = 32)]
        exact_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact minimum neighborhood size per failure-set size (tiny graphs)
    Magnification {
        graph: PathBuf,
        #[arg(long, default_value_t = 3)]
        smax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Ok(threads) = std::env::var("ROBSPAN_THREADS") {
        if let Ok(threads) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        }
    }
    match dispatch(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Verification { .. } => 2,
                Error::RetriesExhausted { .. } => 3,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(Error::from),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// scheduling-independent per-cell seed
fn cell_seed(seed: u64, n: u64, k: u64, trial: u64) -> u64 {
    let mut x = seed;
    for v in [n, k, trial] {
        x = x.wrapping_add(v).wrapping_add(0x9e37_79b9_7f4a_7c15);
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        x ^= x >> 31;
    }
    x
}

fn random_points(n: usize, dim: usize, seed: u64) -> Result<Arc<PointSet>> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    if dim == 1 {
        // sorted strictly increasing ranks with jitter-free spacing
        return Ok(Arc::new(PointSet::line(n)));
    }
    let pts = (0..n).map(|_| (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect()).collect();
    Ok(Arc::new(PointSet::new(dim, pts)?))
}

fn dispatch(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Build { construction, n, side, dim, preset: pname, epsilon, k0, t, seed, out } => {
            let mut report = format!("seed={seed}\n");
            let (points, graph) = match construction {
                Construction::G2x => {
                    let ps = Arc::new(PointSet::line(n));
                    let g = build_g2x(Arc::clone(&ps))?;
                    (ps, g)
                }
                Construction::Gf => {
                    let f = preset(&pname, epsilon, n as f64)?;
                    report.push_str(&format!("preset={pname} epsilon={epsilon:?} k0={:?}\n", f.k0()));
                    let ps = Arc::new(PointSet::line(n));
                    let g = build_gf(Arc::clone(&ps), &f)?;
                    (ps, g)
                }
                Construction::Grid => build_grid(side)?,
                Construction::RobustDd => {
                    let f = preset(&pname, epsilon, n as f64)?;
                    let ps = random_points(n, dim, seed)?;
                    let rdd = build_robust_dd(Arc::clone(&ps), &f, t, seed)?;
                    report.push_str(&rdd.report.to_csv());
                    (ps, rdd.graph)
                }
                Construction::Hardy => {
                    let f = preset(&pname, epsilon, n as f64)?;
                    let ps = random_points(n, dim, seed)?;
                    let s_of_n = (n.max(2) as f64).log2().ceil() as usize;
                    let inner = move |ps: &PointSet, sel: &[u32]| gf_on_subset(ps, sel, &f);
                    let (g, rep) = build_hardy(Arc::clone(&ps), s_of_n, &inner, seed)?;
                    report.push_str(&rep.to_csv());
                    (ps, g)
                }
                Construction::Ft => {
                    let ps = random_points(n, dim, seed)?;
                    let all: Vec<u32> = (0..n as u32).collect();
                    let edges = ft_spanner_edges(&ps, &all, t, k0)?;
                    let g = GeomGraph::new(Arc::clone(&ps), edges)?;
                    (ps, g)
                }
            };
            write_graph(&out, &points, &graph)?;
            report.push_str(&format!(
                "n={} edges={} max_degree={}\n",
                graph.n(),
                graph.num_edges(),
                graph.max_degree()
            ));
            let mut sidecar = out.as_os_str().to_owned();
            sidecar.push(".report");
            std::fs::write(PathBuf::from(sidecar), report)?;
            Ok(())
        }
        Cmd::Certify {
            graph,
            s_file,
            producer,
            t,
            mode,
            preset: pname,
            epsilon,
            seed,
            exact_cap,
            retries,
            out,
        } => {
            let (_, g) = read_graph(&graph)?;
            let s = VertexSet::read_file(&s_file)?;
            s.check_range(g.n())?;
            let cert = run_producer(&g, &s, producer, t, mode, &pname, epsilon, seed, exact_cap, retries)?;
            finish_certificate(&g, cert, out.as_deref())
        }
        Cmd::Attack { graph, kind, k, i, c, t, seed, out } => {
            let (_, g) = read_graph(&graph)?;
            let result = match kind {
                CliAttackKind::Interval => adversary::attack_interval_endpoints(&g, i, k, c, t),
                CliAttackKind::Random => adversary::attack_random(g.n(), k, seed),
            };
            match result {
                Ok(s) => match out {
                    Some(path) => s.write_file(&path),
                    None => {
                        let lines: Vec<String> = s.iter().map(|v| v.to_string()).collect();
                        println!("{}", lines.join("\n"));
                        Ok(())
                    }
                },
                Err(Error::AttackRefused { good, budget }) => {
                    // the refusal is the finding: the graph resists here
                    println!("refused: {good} good edges exceed budget {budget}");
                    Ok(())
                }
                Err(e) => Err(e),
            }
        }
        Cmd::Probe {
            graph,
            kind,
            k,
            trials,
            builder,
            t,
            preset: pname,
            epsilon,
            c,
            seed,
            exact_cap,
            out,
        } => {
            let (_, g) = read_graph(&graph)?;
            let n = g.n();
            let attacks: Vec<AttackSpec> = (0..trials)
                .map(|j| AttackSpec {
                    kind: match kind {
                        CliAttackKind::Interval => AttackKind::IntervalEndpoints,
                        CliAttackKind::Random => AttackKind::Random,
                    },
                    k,
                    // spread interval centers across the valid range
                    i: c * k + 1 + (j * n.saturating_sub(2 * (c * k + 1))) / trials.max(1),
                    c,
                    t,
                    seed: cell_seed(seed, n as u64, k as u64, j as u64),
                })
                .collect();
            let f = preset(&pname, epsilon, n.max(4) as f64)?;
            let opts = SplusOptions { seed, max_retries: 64 };
            let fb = f.clone();
            let closure: Box<adversary::SplusBuilder> = match builder {
                Some(Producer::G2x) => Box::new(move |g, s| splus_g2x(g, s, &opts)),
                Some(Producer::Gf) => Box::new(move |g, s| splus_gf(g, &fb, s, &opts)),
                Some(_) | None => Box::new(move |g, s| minimal_splus(g, s, t, Mode::Deletion, 0)),
            };
            let builder_ref = builder.map(|_| closure.as_ref());
            let report = adversary::probe(&g, t, &attacks, builder_ref, exact_cap, Some((&f, 1)));
            emit(out.as_deref(), &report.to_csv())
        }
        Cmd::Sweep {
            construction,
            n,
            k,
            trials,
            preset: pname,
            epsilon,
            seed,
            exact_cap,
            retries,
            out,
        } => {
            let csv = run_sweep(construction, &n, &k, trials, &pname, epsilon, seed, exact_cap, retries)?;
            emit(out.as_deref(), &csv)
        }
        Cmd::Census { graph, preset: pname, epsilon, t, threshold, out } => {
            let (_, g) = read_graph(&graph)?;
            let f = preset(&pname, epsilon, g.n().max(4) as f64)?;
            let report = adversary::probe(&g, t, &[], None, 0, Some((&f, threshold)));
            let mut csv = String::from("class,lo,hi,count,flagged\n");
            for r in &report.census {
                csv.push_str(&format!("{},{:?},{:?},{},{}\n", r.class, r.lo, r.hi, r.count, r.flagged));
            }
            emit(out.as_deref(), &csv)
        }
        Cmd::Oracle { graph, s_file, t, mode, exact_cap, out } => {
            let (_, g) = read_graph(&graph)?;
            let s = VertexSet::read_file(&s_file)?;
            s.check_range(g.n())?;
            let cert = minimal_splus(&g, &s, t, mode, exact_cap)?;
            finish_certificate(&g, cert, out.as_deref())
        }
        Cmd::Magnification { graph, smax, out } => {
            let (_, g) = read_graph(&graph)?;
            let rows = magnification_bruteforce(&g, smax)?;
            let mut csv = String::from("size,min_neighborhood\n");
            for (s, h) in rows {
                csv.push_str(&format!("{s},{h}\n"));
            }
            emit(out.as_deref(), &csv)
        }
    }
}

/// inner builder for the hardy composition: a growth-function spanner on
/// the selected points in rank order
fn gf_on_subset(
    ps: &PointSet,
    sel: &[u32],
    f: &robspan::one_d::IteratedFunction,
) -> Result<Vec<(u32, u32)>> {
    let mut order: Vec<u32> = sel.to_vec();
    order.sort_by(|&a, &b| {
        ps.point(a)
            .iter()
            .zip(ps.point(b))
            .map(|(x, y)| x.total_cmp(y))
            .find(|c| c.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let sub = Arc::new(PointSet::line(order.len()));
    let g = build_gf(sub, f)?;
    Ok(g.edges().iter().map(|&(u, v)| (order[u as usize], order[v as usize])).collect())
}

#[allow(clippy::too_many_arguments)]
fn run_producer(
    g: &GeomGraph,
    s: &VertexSet,
    producer: Producer,
    t: f64,
    mode: Mode,
    pname: &str,
    epsilon: f64,
    seed: u64,
    exact_cap: usize,
    retries: usize,
) -> Result<RobustnessCertificate> {
    let opts = SplusOptions { seed, max_retries: retries };
    match producer {
        Producer::G2x => splus_g2x(g, s, &opts),
        Producer::Gf => {
            let f = preset(pname, epsilon, g.n().max(4) as f64)?;
            splus_gf(g, &f, s, &opts)
        }
        Producer::Grid => {
            let side = (g.n() as f64).sqrt().round() as usize;
            splus_grid(g, side, s, seed, retries.max(1))
        }
        Producer::Dd => {
            let f = preset(pname, epsilon, g.n().max(4) as f64)?;
            let rdd = build_robust_dd(Arc::clone(g.points()), &f, t.max(1.5), seed)?;
            splus_dd(&rdd, s)
        }
        Producer::Oracle => minimal_splus(g, s, t, mode, exact_cap),
    }
}

fn finish_certificate(
    g: &GeomGraph,
    cert: RobustnessCertificate,
    out: Option<&Path>,
) -> Result<()> {
    if let Some(path) = out {
        cert.write_file(path)?;
    }
    println!("{cert}");
    if !cert.verified {
        let checked = match cert.mode {
            Mode::Deletion => g.remove_vertices(&cert.s)?,
            Mode::Induced => g.clone(),
        };
        let w = g.active_vertices().difference(&cert.s_plus);
        if let Some(v) = spanner_violation(&checked, &w, cert.t, cert.mode) {
            return Err(Error::Verification { u: v.u, v: v.v, stretch: v.stretch });
        }
        return Err(Error::InvalidInput("certificate failed verification".into()));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_sweep(
    construction: Construction,
    ns: &[usize],
    ks: &[usize],
    trials: usize,
    pname: &str,
    epsilon: f64,
    seed: u64,
    exact_cap: usize,
    retries: usize,
) -> Result<String> {
    use rayon::prelude::*;
    if ns.is_empty() || ks.is_empty() || trials == 0 {
        return Err(Error::InvalidInput("sweep needs nonempty n, k, and trials >= 1".into()));
    }
    if !matches!(construction, Construction::G2x | Construction::Gf) {
        return Err(Error::InvalidInput("sweep supports the 1-D constructions".into()));
    }
    let mut cells = Vec::new();
    for &n in ns {
        for &k in ks {
            for trial in 0..trials {
                cells.push((n, k, trial));
            }
        }
    }
    let rows: Vec<Result<String>> = cells
        .par_iter()
        .map(|&(n, k, trial)| -> Result<String> {
            let ps = Arc::new(PointSet::line(n));
            let (g, f, bound) = match construction {
                Construction::G2x => {
                    (build_g2x(Arc::clone(&ps))?, None, k as f64 + g2x_cost_bound(k))
                }
                _ => {
                    let f = preset(pname, epsilon, n as f64)?;
                    let g = build_gf(Arc::clone(&ps), &f)?;
                    let bound = k as f64 + gf_cost_bound(&f, k);
                    (g, Some(f), bound)
                }
            };
            let cs = cell_seed(seed, n as u64, k as u64, trial as u64);
            let s = adversary::attack_random(n, k, cs)?;
            let opts = SplusOptions { seed: cs, max_retries: retries };
            let (splus, verified, note) = match &f {
                None => match splus_g2x(&g, &s, &opts) {
                    Ok(c) => (Some(c.s_plus.len()), c.verified, String::new()),
                    Err(e) => (None, false, format!("{e}")),
                },
                Some(f) => match splus_gf(&g, f, &s, &opts) {
                    Ok(c) => (Some(c.s_plus.len()), c.verified, String::new()),
                    Err(e) => (None, false, format!("{e}")),
                },
            };
            let (oracle, oracle_exact) = if n <= 64 {
                let c = minimal_splus(&g, &s, 1.0, Mode::Deletion, exact_cap)?;
                (c.s_plus.len().to_string(), c.minimal.to_string())
            } else {
                (String::new(), String::new())
            };
            let within = splus.is_some_and(|v| v as f64 <= bound);
            Ok(format!(
                "{},{},{},{},{},{:?},{},{},{},{},{}\n",
                n,
                k,
                trial,
                g.num_edges(),
                splus.map_or(String::new(), |v| v.to_string()),
                bound,
                within,
                oracle,
                oracle_exact,
                verified,
                note
            ))
        })
        .collect();
    let mut csv = String::from(
        "n,k,trial,edges,splus,bound,within_bound,splus_oracle,oracle_exact,verified,note\n",
    );
    for row in rows {
        csv.push_str(&row?);
    }
    Ok(csv)
}
