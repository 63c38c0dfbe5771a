//! Command-line front end: instance generation, local search, exact
//! oracles, exchange-graph verification, r-divisions, the swap-inequality
//! audit, and a benchmark sweep runner.
//!
//! Exit codes: 0 on success, 1 for usage and input errors, 2 when a
//! verification check fails on otherwise well-formed input.

mod bench;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fvs_core::division::{audit_local_vs_global, r_division, verify_r_division};
use fvs_core::exchange::{
    build_exchange_graph, contract_steiner_forest, verify_exchange_properties,
};
use fvs_core::instances::{
    default_gadget_cells, gen_diagonal_grid, gen_grid, gen_k3n, gen_partial_ktree,
    GadgetVariant,
};
use fvs_core::io::{parse_instance, parse_solution_file, write_instance, write_solution};
use fvs_core::oracle::{exact_min, ProblemKind};
use fvs_core::solver::{improve_once, is_feasible, local_search, SearchParams, Solution};
use fvs_core::{Graph, VertexId};

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_VERIFY: i32 = 2;

#[derive(Parser)]
#[command(name = "fvs", version, about = "Feedback vertex set local search and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Run the local search on an instance.
    Solve(SolveArgs),
    /// Compute an exact minimum solution.
    Oracle(OracleArgs),
    /// Build and verify the exchange graph of two solutions.
    Exchange(ExchangeArgs),
    /// Compute and verify an r-division.
    Divide(DivideArgs),
    /// Audit the per-region swap inequalities of a locally optimal solution.
    Audit(AuditArgs),
    /// Run a benchmark sweep from a JSON config.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Grid,
    K3n,
    Ktree,
    DiagonalOct,
    DiagonalSfvs,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Grid => "grid",
            Family::K3n => "k3n",
            Family::Ktree => "ktree",
            Family::DiagonalOct => "diagonal-oct",
            Family::DiagonalSfvs => "diagonal-sfvs",
        }
    }
}

#[derive(Args)]
struct GenArgs {
    /// Instance family.
    #[arg(value_enum)]
    family: Family,
    /// Grid side, or clique size for ktree.
    #[arg(long)]
    k: Option<u32>,
    /// Number of diagonal gadgets.
    #[arg(long, default_value_t = 1)]
    d: u32,
    /// Vertex count (k3n: size of the large side; ktree: total vertices).
    #[arg(long)]
    n: Option<u32>,
    /// Edge keep probability for ktree.
    #[arg(long, default_value_t = 1.0)]
    keep_prob: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Explicit diagonal cells, overriding --d.
    #[arg(long, value_delimiter = ',')]
    cells: Option<Vec<u32>>,
    /// Output instance file.
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    /// Neighborhood size: how many solution vertices one move may remove.
    #[arg(long)]
    c: usize,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Seed for tie-breaking in the initial solution.
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the solution to this file as an "s" line.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    /// Feedback vertex set.
    Fvs,
    /// Odd cycle transversal.
    Oct,
    /// Feedback vertex set for cycles through the instance's "u" set.
    Sfvs,
}

#[derive(Args)]
struct OracleArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = KindArg::Fvs)]
    kind: KindArg,
    /// Give up beyond this solution size (default: the vertex count).
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Args)]
struct ExchangeArgs {
    file: PathBuf,
    /// Solution file with the reference solution.
    #[arg(long)]
    opt: PathBuf,
    /// Solution file with the locally optimal candidate.
    #[arg(long)]
    local: PathBuf,
    /// Abort cycle verification beyond this many cycles.
    #[arg(long, default_value_t = 2_000_000)]
    cycle_budget: usize,
}

#[derive(Args)]
struct DivideArgs {
    file: PathBuf,
    /// Region size limit.
    #[arg(long)]
    r: usize,
}

#[derive(Args)]
struct AuditArgs {
    file: PathBuf,
    #[arg(long)]
    opt: PathBuf,
    #[arg(long)]
    local: PathBuf,
    /// Certified neighborhood radius; also the region size of the division.
    #[arg(long)]
    c: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// JSON sweep configuration.
    config: PathBuf,
    /// Output directory for bench.csv and bench.json.
    #[arg(short, long)]
    out: PathBuf,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(EXIT_USAGE);
        }
    }
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Exchange(args) => cmd_exchange(args),
        Command::Divide(args) => cmd_divide(args),
        Command::Audit(args) => cmd_audit(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn read_instance(path: &Path) -> Result<fvs_core::io::ParsedInstance> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read instance file {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn read_solution(path: &Path, g: &Graph) -> Result<BTreeSet<VertexId>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read solution file {}", path.display()))?;
    parse_solution_file(&text, g.vertex_count() as u32)
        .with_context(|| format!("cannot parse {}", path.display()))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    use std::io::Write;
    let text = serde_json::to_string_pretty(value)?;
    if let Err(err) = writeln!(std::io::stdout(), "{text}") {
        if err.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(EXIT_OK);
        }
        return Err(err.into());
    }
    Ok(())
}

#[derive(Serialize)]
struct GenOutput {
    family: String,
    n: usize,
    m: usize,
    file: String,
    solution_files: Vec<String>,
}

fn cmd_gen(args: GenArgs) -> Result<i32> {
    let need = |name: &str, v: Option<u32>| {
        v.ok_or_else(|| anyhow::anyhow!("--{name} is required for this family"))
    };
    let mut solution_files = Vec::new();
    let (graph, text) = match args.family {
        Family::Grid => {
            let k = need("k", args.k)?;
            let g = gen_grid(k, k)?;
            let text = write_instance(&g, &[], None)?;
            (g, text)
        }
        Family::K3n => {
            let n = need("n", args.n)?;
            let g = gen_k3n(n)?;
            let text = write_instance(&g, &[], None)?;
            (g, text)
        }
        Family::Ktree => {
            let n = need("n", args.n)?;
            let k = need("k", args.k)?;
            let g = gen_partial_ktree(n, k, args.keep_prob, args.seed)?;
            let text = write_instance(&g, &[], None)?;
            (g, text)
        }
        Family::DiagonalOct | Family::DiagonalSfvs => {
            let k = need("k", args.k)?;
            let cells = args
                .cells
                .clone()
                .unwrap_or_else(|| default_gadget_cells(k, args.d));
            let variant = if args.family == Family::DiagonalOct {
                GadgetVariant::OddCycles
            } else {
                GadgetVariant::ApexCycles
            };
            let inst = gen_diagonal_grid(k, &cells, variant)?;
            let subset = (!inst.u.is_empty()).then_some(&inst.u);
            let text = write_instance(&inst.graph, &[], subset)?;
            for (suffix, set) in [("opt", &inst.planted_optimal), ("local", &inst.planted_local)] {
                let mut path = args.out.clone().into_os_string();
                path.push(format!(".{suffix}"));
                let path = PathBuf::from(path);
                fs::write(&path, write_solution(set))
                    .with_context(|| format!("cannot write {}", path.display()))?;
                solution_files.push(path.display().to_string());
            }
            (inst.graph, text)
        }
    };
    fs::write(&args.out, text)
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    print_json(&GenOutput {
        family: args.family.name().to_string(),
        n: graph.vertex_count(),
        m: graph.edge_count(),
        file: args.out.display().to_string(),
        solution_files,
    })?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SolveOutput {
    instance: String,
    n: usize,
    m: usize,
    c: usize,
    initial_size: usize,
    final_size: usize,
    iterations: usize,
    certified_local_opt: bool,
    wall_ms: u64,
    members: Vec<VertexId>,
}

fn cmd_solve(args: SolveArgs) -> Result<i32> {
    let parsed = read_instance(&args.file)?;
    let params = SearchParams {
        c: args.c,
        max_iterations: args.max_iter,
        seed: args.seed,
    };
    let (solution, report) = local_search(&parsed.graph, &params)?;
    if let Some(path) = &args.out {
        fs::write(path, write_solution(&solution.members))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    print_json(&SolveOutput {
        instance: args.file.display().to_string(),
        n: report.n,
        m: report.m,
        c: report.c,
        initial_size: report.initial_size,
        final_size: report.final_size,
        iterations: report.iterations,
        certified_local_opt: report.certified_local_opt,
        wall_ms: report.wall_ms,
        members: solution.members.iter().copied().collect(),
    })?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct OracleOutput {
    kind: String,
    minimum: usize,
    members: Vec<VertexId>,
}

fn cmd_oracle(args: OracleArgs) -> Result<i32> {
    let parsed = read_instance(&args.file)?;
    let kind = match args.kind {
        KindArg::Fvs => ProblemKind::Fvs,
        KindArg::Oct => ProblemKind::Oct,
        KindArg::Sfvs => {
            let u = parsed
                .subset
                .clone()
                .ok_or_else(|| anyhow::anyhow!("instance file has no \"u\" line"))?;
            ProblemKind::SubsetFvs(u)
        }
    };
    let limit = args.limit.unwrap_or(parsed.graph.vertex_count());
    let members = exact_min(&parsed.graph, &kind, limit)?;
    print_json(&OracleOutput {
        kind: kind.name().to_string(),
        minimum: members.len(),
        members: members.iter().copied().collect(),
    })?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ExchangeOutput {
    n_k: usize,
    m_k: usize,
    labels: std::collections::BTreeMap<&'static str, usize>,
    c_ex_measured: f64,
    cycles_checked: usize,
    covered_by_shared_vertex: usize,
    covered_by_direct_edge: usize,
    covered_by_sub_cycle: usize,
    violations: usize,
    steiner_tree_count: usize,
    steiner_vertex_count: usize,
    contracted_edge_count: usize,
    component_sizes: Vec<usize>,
}

fn cmd_exchange(args: ExchangeArgs) -> Result<i32> {
    let parsed = read_instance(&args.file)?;
    let optimal = read_solution(&args.opt, &parsed.graph)?;
    let local = read_solution(&args.local, &parsed.graph)?;
    for (name, set) in [("reference", &optimal), ("candidate", &local)] {
        if !is_feasible(&parsed.graph, set)? {
            eprintln!("verification failure: the {name} solution is not a feedback vertex set");
            return Ok(EXIT_VERIFY);
        }
    }
    let ex = build_exchange_graph(&parsed.graph, &optimal, &local)?;
    let report = verify_exchange_properties(&parsed.graph, &ex, args.cycle_budget)?;
    let stats = match contract_steiner_forest(&ex) {
        Ok(stats) => stats,
        Err(err) => {
            eprintln!("verification failure: {err}");
            return Ok(EXIT_VERIFY);
        }
    };
    let out = ExchangeOutput {
        n_k: ex.k.vertex_count(),
        m_k: ex.k.edge_count(),
        labels: ex.label_histogram(),
        c_ex_measured: report.c_ex_measured,
        cycles_checked: report.cycles_checked,
        covered_by_shared_vertex: report.covered_by_shared_vertex,
        covered_by_direct_edge: report.covered_by_direct_edge,
        covered_by_sub_cycle: report.covered_by_matching_subcycle,
        violations: report.violations.len(),
        steiner_tree_count: stats.trees.len(),
        steiner_vertex_count: stats.steiner_count,
        contracted_edge_count: stats.kprime.edge_count(),
        component_sizes: stats.component_sizes.clone(),
    };
    print_json(&out)?;
    if !report.all_covered() {
        eprintln!(
            "verification failure: {} cycles lack a covering witness",
            report.violations.len()
        );
        return Ok(EXIT_VERIFY);
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct DivideRegionOutput {
    vertices: Vec<VertexId>,
    edge_count: usize,
    boundary: Vec<VertexId>,
}

#[derive(Serialize)]
struct DivideOutput {
    r: usize,
    region_count: usize,
    max_region_vertices: usize,
    boundary_total: usize,
    c_div_measured: f64,
    ok: bool,
    violations: Vec<String>,
    regions: Vec<DivideRegionOutput>,
}

fn cmd_divide(args: DivideArgs) -> Result<i32> {
    let parsed = read_instance(&args.file)?;
    let div = r_division(&parsed.graph, args.r)?;
    let check = verify_r_division(&parsed.graph, &div);
    let regions = div
        .regions
        .iter()
        .zip(&div.boundaries)
        .map(|(region, boundary)| DivideRegionOutput {
            vertices: region.vertices.iter().copied().collect(),
            edge_count: region.edges.len(),
            boundary: boundary.iter().copied().collect(),
        })
        .collect();
    let out = DivideOutput {
        r: args.r,
        region_count: check.region_count,
        max_region_vertices: check.max_region_vertices,
        boundary_total: check.boundary_total,
        c_div_measured: check.c_div_measured,
        ok: check.ok(),
        violations: check.violations.clone(),
        regions,
    };
    print_json(&out)?;
    if !check.ok() {
        eprintln!("verification failure: the division breaks its own invariants");
        return Ok(EXIT_VERIFY);
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct AuditRegionOutput {
    hybrid_feasible: bool,
    swap_inequality_holds: bool,
    local_in_region: usize,
    reference_in_interior: usize,
    boundary_size: usize,
}

#[derive(Serialize)]
struct AuditOutput {
    c: usize,
    local_size: usize,
    reference_size: usize,
    boundary_total: usize,
    total_inequality_holds: bool,
    c_div_measured: f64,
    c_ex_measured: f64,
    implied_epsilon: Option<f64>,
    all_pass: bool,
    regions: Vec<AuditRegionOutput>,
}

fn cmd_audit(args: AuditArgs) -> Result<i32> {
    let parsed = read_instance(&args.file)?;
    let reference = read_solution(&args.opt, &parsed.graph)?;
    let local = read_solution(&args.local, &parsed.graph)?;
    for (name, set) in [("reference", &reference), ("candidate", &local)] {
        if !is_feasible(&parsed.graph, set)? {
            eprintln!("verification failure: the {name} solution is not a feedback vertex set");
            return Ok(EXIT_VERIFY);
        }
    }
    let solution = Solution::new(&parsed.graph, local.clone())?;
    if improve_once(&parsed.graph, &solution, args.c)?.is_some() {
        eprintln!(
            "verification failure: the candidate admits an improving move at radius {}",
            args.c
        );
        return Ok(EXIT_VERIFY);
    }
    let report = audit_local_vs_global(&parsed.graph, &reference, &local, args.c)?;
    let out = AuditOutput {
        c: args.c,
        local_size: report.local_size,
        reference_size: report.reference_size,
        boundary_total: report.boundary_total,
        total_inequality_holds: report.total_inequality_holds,
        c_div_measured: report.c_div_measured,
        c_ex_measured: report.c_ex_measured,
        implied_epsilon: report.implied_epsilon,
        all_pass: report.all_pass(),
        regions: report
            .regions
            .iter()
            .map(|r| AuditRegionOutput {
                hybrid_feasible: r.hybrid_feasible,
                swap_inequality_holds: r.swap_inequality_holds,
                local_in_region: r.local_in_region,
                reference_in_interior: r.reference_in_interior,
                boundary_size: r.boundary_size,
            })
            .collect(),
    };
    let all_pass = out.all_pass;
    print_json(&out)?;
    if !all_pass {
        eprintln!("verification failure: an audited inequality does not hold");
        return Ok(EXIT_VERIFY);
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct BenchOutput {
    rows: usize,
    csv: String,
    json: String,
}

fn cmd_bench(args: BenchArgs) -> Result<i32> {
    let text = fs::read_to_string(&args.config)
        .with_context(|| format!("cannot read config {}", args.config.display()))?;
    let config: bench::BenchConfig =
        serde_json::from_str(&text).context("malformed bench config")?;
    let rows = bench::run_sweeps(&config)?;
    fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;
    let csv_path = args.out.join("bench.csv");
    let json_path = args.out.join("bench.json");
    fs::write(&csv_path, bench::to_csv(&rows)?)?;
    fs::write(&json_path, serde_json::to_string_pretty(&rows)?)?;
    print_json(&BenchOutput {
        rows: rows.len(),
        csv: csv_path.display().to_string(),
        json: json_path.display().to_string(),
    })?;
    Ok(EXIT_OK)
}
