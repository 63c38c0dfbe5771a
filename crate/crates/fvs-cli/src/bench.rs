//! Benchmark sweeps: run the local search across instance families and
//! record one CSV/JSON row per (instance, radius, seed) combination.
//!
//! Output is deterministic up to the wall_ms column: rows appear in config
//! order and every other field is a pure function of the config.

use anyhow::Result;
use serde::{Deserialize, Serialize};

use fvs_core::instances::{
    default_gadget_cells, gen_diagonal_grid, gen_grid, gen_k3n, gen_partial_ktree,
    verify_local_optimality, GadgetVariant,
};
use fvs_core::oracle::{exact_min_size, kind_feasible, ProblemKind};
use fvs_core::solver::{local_search, SearchParams};
use fvs_core::Graph;

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_keep_prob() -> f64 {
    1.0
}

#[derive(Deserialize)]
pub struct BenchConfig {
    /// Skip the exact oracle on instances with more vertices than this.
    pub oracle_size_cap: usize,
    pub sweeps: Vec<Sweep>,
}

#[derive(Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Sweep {
    Grid {
        sizes: Vec<u32>,
        c: Vec<usize>,
        #[serde(default = "default_seeds")]
        seeds: Vec<u64>,
    },
    K3n {
        n: Vec<u32>,
        c: Vec<usize>,
        #[serde(default = "default_seeds")]
        seeds: Vec<u64>,
    },
    PartialKtree {
        n: Vec<u32>,
        k: u32,
        #[serde(default = "default_keep_prob")]
        keep_prob: f64,
        c: Vec<usize>,
        #[serde(default = "default_seeds")]
        seeds: Vec<u64>,
    },
    DiagonalGrid {
        k: Vec<u32>,
        #[serde(default)]
        d: u32,
        variant: DiagonalKind,
        radius: usize,
    },
}

#[derive(Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagonalKind {
    Oct,
    Sfvs,
}

#[derive(Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub family: String,
    pub params: String,
    pub n: usize,
    pub m: usize,
    pub c: usize,
    pub seed: u64,
    pub local_size: usize,
    pub oracle_size: Option<usize>,
    pub ratio: Option<f64>,
    pub iterations: usize,
    pub wall_ms: u64,
    pub feasible: bool,
    pub certified_local_opt: bool,
}

const CSV_HEADER: [&str; 14] = [
    "instance",
    "family",
    "params",
    "n",
    "m",
    "c",
    "seed",
    "local_size",
    "oracle_size",
    "ratio",
    "iterations",
    "wall_ms",
    "feasible",
    "certified_local_opt",
];

fn ratio_of(local: usize, oracle: usize) -> f64 {
    if oracle == 0 {
        if local == 0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        local as f64 / oracle as f64
    }
}

/// One search run on a plain feedback vertex set instance.
fn search_row(
    g: &Graph,
    instance: String,
    family: &str,
    params: String,
    c: usize,
    seed: u64,
    oracle_cap: usize,
) -> Result<BenchRow> {
    let search = SearchParams { c, max_iterations: None, seed: Some(seed) };
    let (solution, report) = local_search(g, &search)?;
    let oracle_size = if g.vertex_count() <= oracle_cap {
        Some(exact_min_size(g, &ProblemKind::Fvs, g.vertex_count())?)
    } else {
        None
    };
    let ratio = oracle_size.map(|opt| ratio_of(solution.size(), opt));
    Ok(BenchRow {
        instance,
        family: family.to_string(),
        params,
        n: report.n,
        m: report.m,
        c,
        seed,
        local_size: solution.size(),
        oracle_size,
        ratio,
        iterations: report.iterations,
        wall_ms: report.wall_ms,
        feasible: solution.feasible,
        certified_local_opt: report.certified_local_opt,
    })
}

/// One row per planted counterexample: the planted solution is scored as-is
/// and certified (or not) at the requested radius instead of re-solving.
fn diagonal_row(k: u32, d: u32, kind: DiagonalKind, radius: usize, cap: usize) -> Result<BenchRow> {
    let cells = default_gadget_cells(k, d.max(1));
    let variant = match kind {
        DiagonalKind::Oct => GadgetVariant::OddCycles,
        DiagonalKind::Sfvs => GadgetVariant::ApexCycles,
    };
    let inst = gen_diagonal_grid(k, &cells, variant)?;
    let start = std::time::Instant::now();
    let certified = verify_local_optimality(&inst, &inst.planted_local, radius)?;
    let feasible = kind_feasible(&inst.graph, &inst.kind, &inst.planted_local)?;
    let oracle_size = if inst.graph.vertex_count() <= cap {
        Some(exact_min_size(&inst.graph, &inst.kind, inst.graph.vertex_count())?)
    } else {
        None
    };
    let local_size = inst.planted_local.len();
    let (family, label) = match kind {
        DiagonalKind::Oct => ("diagonal_oct", "oct"),
        DiagonalKind::Sfvs => ("diagonal_sfvs", "sfvs"),
    };
    Ok(BenchRow {
        instance: format!("{label}-{k}x{k}-d{}", cells.len()),
        family: family.to_string(),
        params: format!("k={k};d={}", cells.len()),
        n: inst.graph.vertex_count(),
        m: inst.graph.edge_count(),
        c: radius,
        seed: 0,
        local_size,
        oracle_size,
        ratio: oracle_size.map(|opt| ratio_of(local_size, opt)),
        iterations: 0,
        wall_ms: start.elapsed().as_millis() as u64,
        feasible,
        certified_local_opt: certified,
    })
}

pub fn run_sweeps(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    let cap = config.oracle_size_cap;
    let mut rows = Vec::new();
    for sweep in &config.sweeps {
        match sweep {
            Sweep::Grid { sizes, c, seeds } => {
                for &k in sizes {
                    let g = gen_grid(k, k)?;
                    for &c in c {
                        for &seed in seeds {
                            rows.push(search_row(
                                &g,
                                format!("grid-{k}x{k}"),
                                "grid",
                                format!("k={k}"),
                                c,
                                seed,
                                cap,
                            )?);
                        }
                    }
                }
            }
            Sweep::K3n { n, c, seeds } => {
                for &side in n {
                    let g = gen_k3n(side)?;
                    for &c in c {
                        for &seed in seeds {
                            rows.push(search_row(
                                &g,
                                format!("k3n-{side}"),
                                "k3n",
                                format!("n={side}"),
                                c,
                                seed,
                                cap,
                            )?);
                        }
                    }
                }
            }
            Sweep::PartialKtree { n, k, keep_prob, c, seeds } => {
                for &count in n {
                    for &seed in seeds {
                        let g = gen_partial_ktree(count, *k, *keep_prob, seed)?;
                        for &c in c {
                            rows.push(search_row(
                                &g,
                                format!("ktree-n{count}-k{k}-s{seed}"),
                                "partial_ktree",
                                format!("n={count};k={k};p={keep_prob:.2}"),
                                c,
                                seed,
                                cap,
                            )?);
                        }
                    }
                }
            }
            Sweep::DiagonalGrid { k, d, variant, radius } => {
                for &side in k {
                    rows.push(diagonal_row(side, *d, *variant, *radius, cap)?);
                }
            }
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record([
            row.instance.clone(),
            row.family.clone(),
            row.params.clone(),
            row.n.to_string(),
            row.m.to_string(),
            row.c.to_string(),
            row.seed.to_string(),
            row.local_size.to_string(),
            row.oracle_size.map(|v| v.to_string()).unwrap_or_default(),
            row.ratio.map(|v| format!("{v:.6}")).unwrap_or_default(),
            row.iterations.to_string(),
            row.wall_ms.to_string(),
            row.feasible.to_string(),
            row.certified_local_opt.to_string(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
