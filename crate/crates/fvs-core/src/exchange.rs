//! Exchange graphs: compact certificates that relate two feedback vertex
//! sets of the same graph. Given a reference solution O and a candidate
//! solution L, the exchange graph K keeps every vertex of O ∪ L, compresses
//! everything else down to junction (Steiner) vertices of degree at least 3,
//! and promises that every cycle of the original graph is witnessed inside
//! K in one of three ways (a shared solution vertex, a direct O–L edge, or
//! a sub-cycle with the same solution-vertex trace). These witnesses are
//! what make region-wise solution swaps sound, so this module also ships
//! the verifier that checks all three promises by exhaustive cycle
//! enumeration, plus the forest-contraction bound on the number of Steiner
//! vertices and the independent-set counting lemma it rests on.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Cycle, Edge, Graph, VertexId};
use crate::solver::is_feasible;

/// Role of a vertex that survives into the exchange graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionLabel {
    /// In the candidate (local) solution only.
    LocalOnly,
    /// In the reference (optimal) solution only.
    OptimalOnly,
    /// In both solutions; such vertices are kept but isolated.
    Shared,
    /// In neither solution; a junction vertex of degree at least 3.
    Steiner,
}

impl SolutionLabel {
    pub fn name(self) -> &'static str {
        match self {
            SolutionLabel::LocalOnly => "local_only",
            SolutionLabel::OptimalOnly => "optimal_only",
            SolutionLabel::Shared => "shared",
            SolutionLabel::Steiner => "steiner",
        }
    }
}

/// The exchange graph K for a pair of feedback vertex sets, together with
/// the vertex roles and the two originating solutions.
#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    pub k: Graph,
    pub labels: BTreeMap<VertexId, SolutionLabel>,
    pub origin_optimal: BTreeSet<VertexId>,
    pub origin_local: BTreeSet<VertexId>,
}

impl ExchangeGraph {
    /// |V(K)| relative to the combined solution size; the construction
    /// guarantees this stays bounded by a constant per graph family.
    pub fn c_ex_measured(&self) -> f64 {
        let denom = self.origin_optimal.len() + self.origin_local.len();
        if denom == 0 {
            0.0
        } else {
            self.k.vertex_count() as f64 / denom as f64
        }
    }

    pub fn label_histogram(&self) -> BTreeMap<&'static str, usize> {
        let mut hist = BTreeMap::new();
        for label in self.labels.values() {
            *hist.entry(label.name()).or_insert(0) += 1;
        }
        hist
    }

    pub fn steiner_vertices(&self) -> BTreeSet<VertexId> {
        self.labels
            .iter()
            .filter(|(_, l)| **l == SolutionLabel::Steiner)
            .map(|(&v, _)| v)
            .collect()
    }
}

/// Builds the exchange graph for two feasible feedback vertex sets.
///
/// The construction: first delete every edge incident to a shared solution
/// vertex and drop components with no solution vertex at all (they are
/// acyclic); then repeatedly delete non-solution vertices of degree at most
/// 1 and bypass non-solution vertices of degree exactly 2, until every
/// remaining non-solution vertex has degree at least 3; finally drop
/// parallel edges. Solution vertices are never removed. A bypass can never
/// create a self-loop when both inputs are feasible; if one arises the
/// construction aborts rather than returning a malformed certificate.
pub fn build_exchange_graph(
    g: &Graph,
    optimal: &BTreeSet<VertexId>,
    local: &BTreeSet<VertexId>,
) -> Result<ExchangeGraph> {
    for &v in optimal.iter().chain(local.iter()) {
        if !g.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
    }
    if !is_feasible(g, optimal)? {
        return Err(Error::Infeasible("reference solution is not a feedback vertex set".into()));
    }
    if !is_feasible(g, local)? {
        return Err(Error::Infeasible("candidate solution is not a feedback vertex set".into()));
    }
    let shared: BTreeSet<VertexId> = optimal.intersection(local).copied().collect();
    let solution: BTreeSet<VertexId> = optimal.union(local).copied().collect();

    // Disconnect shared vertices, then drop solution-free components.
    let at_shared: BTreeSet<usize> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| shared.contains(&e.u) || shared.contains(&e.v))
        .map(|(i, _)| i)
        .collect();
    let cut = g.delete_edges(&at_shared)?;
    let keep: BTreeSet<VertexId> = cut
        .connected_components()
        .into_iter()
        .filter(|comp| comp.iter().any(|v| solution.contains(v)))
        .flatten()
        .collect();
    let trimmed = cut.induced(&keep)?;

    let core = reduce_to_core(trimmed, &solution, false)?;
    debug_assert!(!core.edges().iter().any(Edge::is_loop));
    let k = core.simplify();

    let mut labels = BTreeMap::new();
    for v in k.vertices() {
        let label = match (optimal.contains(&v), local.contains(&v)) {
            (true, true) => SolutionLabel::Shared,
            (true, false) => SolutionLabel::OptimalOnly,
            (false, true) => SolutionLabel::LocalOnly,
            (false, false) => SolutionLabel::Steiner,
        };
        labels.insert(v, label);
    }

    for &v in &solution {
        if !k.contains_vertex(v) {
            return Err(Error::Construction(format!("solution vertex {v} was lost")));
        }
    }
    for (&v, &label) in &labels {
        match label {
            SolutionLabel::Shared if k.degree(v) != 0 => {
                return Err(Error::Construction(format!("shared vertex {v} kept an edge")));
            }
            SolutionLabel::Steiner if k.degree(v) < 3 => {
                return Err(Error::Construction(format!(
                    "junction vertex {v} has degree {} after simplification",
                    k.degree(v)
                )));
            }
            _ => {}
        }
    }

    Ok(ExchangeGraph {
        k,
        labels,
        origin_optimal: optimal.clone(),
        origin_local: local.clone(),
    })
}

/// Runs the degree-1 / degree-2 reductions on non-solution vertices to a
/// fixed point. The pick order is a parameter only so tests can confirm the
/// fixed point does not depend on it.
fn reduce_to_core(mut g: Graph, solution: &BTreeSet<VertexId>, largest_first: bool) -> Result<Graph> {
    loop {
        let pick = {
            let mut reducible =
                g.vertices().filter(|v| !solution.contains(v) && g.degree(*v) <= 2);
            if largest_first {
                reducible.last()
            } else {
                reducible.next()
            }
        };
        let Some(v) = pick else {
            return Ok(g);
        };
        if g.degree(v) <= 1 {
            g = g.delete_vertex(v)?;
            continue;
        }
        let (i, j) = (g.incident(v)[0], g.incident(v)[1]);
        let (a, b) = (g.edges()[i].other(v), g.edges()[j].other(v));
        if a == b {
            // Covers a loop at v (a == b == v) and a parallel pair, either
            // of which would close a cycle avoiding one of the solutions.
            return Err(Error::Construction(format!(
                "bypassing vertex {v} would create a self-loop at {a}"
            )));
        }
        let without = g.delete_vertex(v)?;
        let mut edges = without.edges().to_vec();
        edges.push(Edge::new(a, b));
        g = Graph::from_parts(without.vertex_set().clone(), edges)?;
    }
}

#[cfg(test)]
pub(crate) fn build_core_with_order(
    g: &Graph,
    optimal: &BTreeSet<VertexId>,
    local: &BTreeSet<VertexId>,
    largest_first: bool,
) -> Result<Graph> {
    let shared: BTreeSet<VertexId> = optimal.intersection(local).copied().collect();
    let solution: BTreeSet<VertexId> = optimal.union(local).copied().collect();
    let at_shared: BTreeSet<usize> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| shared.contains(&e.u) || shared.contains(&e.v))
        .map(|(i, _)| i)
        .collect();
    let cut = g.delete_edges(&at_shared)?;
    let keep: BTreeSet<VertexId> = cut
        .connected_components()
        .into_iter()
        .filter(|comp| comp.iter().any(|v| solution.contains(v)))
        .flatten()
        .collect();
    reduce_to_core(cut.induced(&keep)?, &solution, largest_first)
}

/// Per-cycle verification outcome over every simple cycle of the host
/// graph. Each cycle is attributed to the first witness that covers it:
/// a shared solution vertex on the cycle, a direct K-edge joining a
/// candidate-solution vertex and a reference-solution vertex of the cycle,
/// or a K-cycle confined to the cycle's vertices with the same
/// solution-vertex trace.
#[derive(Clone, Debug)]
pub struct ExchangeReport {
    pub cycles_checked: usize,
    pub covered_by_shared_vertex: usize,
    pub covered_by_direct_edge: usize,
    pub covered_by_matching_subcycle: usize,
    pub violations: Vec<Cycle>,
    pub c_ex_measured: f64,
}

impl ExchangeReport {
    pub fn all_covered(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_exchange_properties(
    g: &Graph,
    ex: &ExchangeGraph,
    cycle_budget: usize,
) -> Result<ExchangeReport> {
    let shared: BTreeSet<VertexId> =
        ex.origin_optimal.intersection(&ex.origin_local).copied().collect();
    let cycles = g.enumerate_cycles(cycle_budget)?;
    let mut report = ExchangeReport {
        cycles_checked: cycles.len(),
        covered_by_shared_vertex: 0,
        covered_by_direct_edge: 0,
        covered_by_matching_subcycle: 0,
        violations: Vec::new(),
        c_ex_measured: ex.c_ex_measured(),
    };
    for cycle in cycles {
        let on_cycle = cycle.vertex_set();
        if on_cycle.iter().any(|v| shared.contains(v)) {
            report.covered_by_shared_vertex += 1;
            continue;
        }
        let direct = ex.k.edges().iter().any(|e| {
            on_cycle.contains(&e.u)
                && on_cycle.contains(&e.v)
                && ((ex.origin_local.contains(&e.u) && ex.origin_optimal.contains(&e.v))
                    || (ex.origin_optimal.contains(&e.u) && ex.origin_local.contains(&e.v)))
        });
        if direct {
            report.covered_by_direct_edge += 1;
            continue;
        }
        if has_matching_subcycle(ex, &on_cycle, cycle_budget)? {
            report.covered_by_matching_subcycle += 1;
        } else {
            report.violations.push(cycle);
        }
    }
    Ok(report)
}

/// Does K restricted to `within` contain a cycle whose solution vertices
/// are exactly the solution vertices of `within`?
fn has_matching_subcycle(
    ex: &ExchangeGraph,
    within: &BTreeSet<VertexId>,
    cycle_budget: usize,
) -> Result<bool> {
    let present: BTreeSet<VertexId> =
        within.iter().copied().filter(|v| ex.k.contains_vertex(*v)).collect();
    let restricted = ex.k.induced(&present)?;
    let want: BTreeSet<VertexId> = within
        .iter()
        .copied()
        .filter(|v| ex.origin_optimal.contains(v) || ex.origin_local.contains(v))
        .collect();
    for sub in restricted.enumerate_cycles(cycle_budget)? {
        let trace: BTreeSet<VertexId> = sub
            .vertices
            .iter()
            .copied()
            .filter(|v| ex.origin_optimal.contains(v) || ex.origin_local.contains(v))
            .collect();
        if trace == want {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Result of contracting the non-solution forest of K: the trees, their
/// attachment degrees, the contracted graph K', and its component sizes.
#[derive(Clone, Debug)]
pub struct SteinerForestStats {
    /// Each tree of the non-solution forest with its attachment degree:
    /// the number of K-edges joining the tree to solution vertices.
    pub trees: Vec<(BTreeSet<VertexId>, usize)>,
    /// K with each tree contracted into its smallest vertex id.
    pub kprime: Graph,
    pub component_sizes: Vec<usize>,
    pub steiner_count: usize,
}

/// Contracts each tree of the non-solution forest to a single vertex and
/// checks the resulting counting chain: every tree is no larger than its
/// attachment degree, the contracted graph is simple, every component Z
/// satisfies |V(Z)| <= 2(|Z ∩ O| + |Z ∩ L∖O|), and the number of
/// non-solution vertices in K is at most |E(K')|.
pub fn contract_steiner_forest(ex: &ExchangeGraph) -> Result<SteinerForestStats> {
    let solution: BTreeSet<VertexId> =
        ex.origin_optimal.union(&ex.origin_local).copied().collect();
    let steiner = ex.steiner_vertices();
    let forest = ex.k.induced(&steiner)?;
    if !forest.is_acyclic() {
        return Err(Error::Construction(
            "non-solution residue of K contains a cycle".into(),
        ));
    }

    let mut representative: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut trees = Vec::new();
    for tree in forest.connected_components() {
        let rep = *tree.first().expect("components are nonempty");
        for &v in &tree {
            representative.insert(v, rep);
        }
        let attach = ex
            .k
            .edges()
            .iter()
            .filter(|e| {
                (tree.contains(&e.u) && solution.contains(&e.v))
                    || (tree.contains(&e.v) && solution.contains(&e.u))
            })
            .count();
        if tree.len() > attach {
            return Err(Error::BoundViolated(format!(
                "tree of {} junction vertices has only {attach} attachment edges",
                tree.len()
            )));
        }
        trees.push((tree, attach));
    }

    let map = |v: VertexId| representative.get(&v).copied().unwrap_or(v);
    let vertices: BTreeSet<VertexId> = ex.k.vertices().map(map).collect();
    let mut edges = Vec::new();
    let mut seen: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for e in ex.k.edges() {
        let (mu, mv) = (map(e.u), map(e.v));
        if mu == mv {
            continue;
        }
        let contracted = Edge::new(mu, mv);
        if !seen.insert(contracted.key()) {
            return Err(Error::Construction(format!(
                "contracting the junction forest produced parallel edges at {mu}-{mv}"
            )));
        }
        edges.push(contracted);
    }
    let kprime = Graph::from_parts(vertices, edges)?;

    let mut component_sizes = Vec::new();
    for z in kprime.connected_components() {
        let in_optimal = z.iter().filter(|v| ex.origin_optimal.contains(v)).count();
        let in_local_only = z
            .iter()
            .filter(|v| ex.origin_local.contains(v) && !ex.origin_optimal.contains(v))
            .count();
        if z.len() > 2 * (in_optimal + in_local_only) {
            return Err(Error::BoundViolated(format!(
                "component of size {} exceeds twice its {} + {} solution vertices",
                z.len(),
                in_optimal,
                in_local_only
            )));
        }
        component_sizes.push(z.len());
    }

    let steiner_count = steiner.len();
    if steiner_count > kprime.edge_count() {
        return Err(Error::BoundViolated(format!(
            "{steiner_count} junction vertices but only {} contracted edges",
            kprime.edge_count()
        )));
    }

    Ok(SteinerForestStats { trees, kprime, component_sizes, steiner_count })
}

/// Outcome of checking the independent-set counting lemma on one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LemmaOutcome {
    /// Premises held and |V(G)| <= 2(|A| + |B|).
    Holds { n: usize, bound: usize },
    /// A premise failed, so the bound is not claimed.
    PremiseViolated(&'static str),
}

/// Checks the counting lemma behind the component bound: with A, B disjoint
/// and nonempty and D = V ∖ (A ∪ B), if D is independent, every D-vertex
/// has degree at least 3, and every cycle meets both A and B, then
/// |V(G)| <= 2(|A| + |B|). Premise failures are reported; a bound failure
/// under valid premises is an error, since it would contradict the lemma.
pub fn verify_structure_lemma(
    g: &Graph,
    a: &BTreeSet<VertexId>,
    b: &BTreeSet<VertexId>,
    cycle_budget: usize,
) -> Result<LemmaOutcome> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParams("both sides must be nonempty".into()));
    }
    if a.intersection(b).next().is_some() {
        return Err(Error::InvalidParams("the two sides must be disjoint".into()));
    }
    for &v in a.iter().chain(b.iter()) {
        if !g.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
    }
    let d: BTreeSet<VertexId> =
        g.vertices().filter(|v| !a.contains(v) && !b.contains(v)).collect();

    let independent = g
        .edges()
        .iter()
        .all(|e| !(d.contains(&e.u) && d.contains(&e.v)));
    if !independent {
        return Ok(LemmaOutcome::PremiseViolated("middle set is not independent"));
    }
    if d.iter().any(|&v| g.degree(v) < 3) {
        return Ok(LemmaOutcome::PremiseViolated("middle vertex of degree below 3"));
    }
    for cycle in g.enumerate_cycles(cycle_budget)? {
        let hits_a = cycle.vertices.iter().any(|v| a.contains(v));
        let hits_b = cycle.vertices.iter().any(|v| b.contains(v));
        if !hits_a || !hits_b {
            return Ok(LemmaOutcome::PremiseViolated("cycle avoiding one side"));
        }
    }

    let n = g.vertex_count();
    let bound = 2 * (a.len() + b.len());
    if n > bound {
        return Err(Error::BoundViolated(format!(
            "premises hold but {n} vertices exceed the bound {bound}"
        )));
    }
    Ok(LemmaOutcome::Holds { n, bound })
}

/// Samples a random instance that satisfies all three lemma premises:
/// every middle vertex is attached to at least two vertices of one side
/// plus a third distinct neighbor, and samples whose cycles dodge a side
/// are rejected and redrawn.
pub fn gen_lemma_instance(
    seed: u64,
    cycle_budget: usize,
) -> Result<(Graph, BTreeSet<VertexId>, BTreeSet<VertexId>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let a_size = rng.gen_range(1..=6u32);
        let b_size = rng.gen_range(1..=6u32);
        let d_size = rng.gen_range(0..=8u32);
        let a: BTreeSet<VertexId> = (0..a_size).collect();
        let b: BTreeSet<VertexId> = (a_size..a_size + b_size).collect();
        let sides: Vec<VertexId> = a.iter().chain(b.iter()).copied().collect();
        let n = a_size + b_size + d_size;

        let mut edges: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
        let mut ok = true;
        for v in a_size + b_size..n {
            let side: Vec<VertexId> = if (rng.gen::<bool>() && a_size >= 2) || b_size < 2 {
                a.iter().copied().collect()
            } else {
                b.iter().copied().collect()
            };
            if side.len() < 2 {
                ok = false;
                break;
            }
            let first = side[rng.gen_range(0..side.len())];
            let second = loop {
                let pick = side[rng.gen_range(0..side.len())];
                if pick != first {
                    break pick;
                }
            };
            let third = loop {
                let pick = sides[rng.gen_range(0..sides.len())];
                if pick != first && pick != second {
                    break pick;
                }
            };
            for w in [first, second, third] {
                edges.insert((w.min(v), w.max(v)));
            }
        }
        if !ok {
            continue;
        }
        for &x in &a {
            for &y in &b {
                if rng.gen::<f64>() < 0.15 {
                    edges.insert((x.min(y), x.max(y)));
                }
            }
        }
        let edge_list: Vec<(VertexId, VertexId)> = edges.into_iter().collect();
        let g = Graph::build(n, &edge_list)?;
        match verify_structure_lemma(&g, &a, &b, cycle_budget) {
            Ok(LemmaOutcome::Holds { .. }) => return Ok((g, a, b)),
            Ok(LemmaOutcome::PremiseViolated(_)) => continue,
            Err(Error::CycleBudget(_)) => continue,
            Err(other) => return Err(other),
        }
    }
    Err(Error::Degenerate("rejection sampling failed to produce an instance".into()))
}
