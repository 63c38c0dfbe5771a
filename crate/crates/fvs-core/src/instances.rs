//! Instance generators: grid graphs, complete bipartite K_{3,n}, random
//! partial k-trees, diagonal-grid gadget instances where local search
//! stalls far from the optimum, and straight-line drawings with a
//! crossing-subdivision reduction that preserves the feedback vertex set
//! optimum exactly.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{
    collinear_overlap, proper_crossing, rational, strictly_between, Coord, Point,
};
use crate::graph::{Edge, Graph, VertexId};
use crate::oracle::{bounded_oct, bounded_subset_fvs, kind_feasible, ProblemKind};
use crate::solver::bounded_fvs;

/// The rows×cols grid graph, vertices numbered row-major.
pub fn gen_grid(rows: u32, cols: u32) -> Result<Graph> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParams("grid dimensions must be positive".into()));
    }
    let id = |r: u32, c: u32| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::build(rows * cols, &edges)
}

/// The complete bipartite graph K_{3,n}: vertices 0..3 on one side,
/// 3..3+n on the other.
pub fn gen_k3n(n: u32) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParams("the larger side must be nonempty".into()));
    }
    let mut edges = Vec::new();
    for left in 0..3 {
        for right in 3..3 + n {
            edges.push((left, right));
        }
    }
    Graph::build(3 + n, &edges)
}

/// A random partial k-tree on n vertices: grow a k-tree by attaching each
/// new vertex to a uniformly chosen k-clique, then keep each edge
/// independently with probability `keep_prob`. Deterministic under `seed`.
pub fn gen_partial_ktree(n: u32, k: u32, keep_prob: f64, seed: u64) -> Result<Graph> {
    if k == 0 || n <= k {
        return Err(Error::InvalidParams("need n > k >= 1".into()));
    }
    if !(keep_prob > 0.0 && keep_prob <= 1.0) {
        return Err(Error::InvalidParams("keep probability must be in (0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(u32, u32)> = (0..=k).tuple_combinations().collect();
    let mut cliques: Vec<Vec<u32>> = (0..=k).combinations(k as usize).collect();
    for v in k + 1..n {
        let pick = rng.gen_range(0..cliques.len());
        let clique = cliques[pick].clone();
        for &w in &clique {
            edges.push((w, v));
        }
        for &drop in &clique {
            let mut next: Vec<u32> =
                clique.iter().copied().filter(|&x| x != drop).collect();
            next.push(v);
            cliques.push(next);
        }
    }
    let kept: Vec<(u32, u32)> =
        edges.into_iter().filter(|_| rng.gen::<f64>() < keep_prob).collect();
    let vertices: BTreeSet<VertexId> = (0..n).collect();
    Graph::from_parts(vertices, kept.iter().map(|&(u, v)| Edge::new(u, v)).collect())
}

/// Which gadget is planted in the diagonal cells of the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetVariant {
    /// One extra edge across the cell, creating odd cycles.
    OddCycles,
    /// One degree-2 apex joined across the cell; only cycles through the
    /// apexes count.
    ApexCycles,
}

/// A generated instance where the planted candidate solution (the grid's
/// main diagonal) is locally optimal but much larger than the planted
/// reference solution (one vertex per gadget).
#[derive(Clone, Debug)]
pub struct CounterexampleInstance {
    pub graph: Graph,
    pub kind: ProblemKind,
    pub planted_local: BTreeSet<VertexId>,
    pub planted_optimal: BTreeSet<VertexId>,
    /// Apex vertices whose cycles must be hit; empty for the odd-cycle
    /// variant.
    pub u: BTreeSet<VertexId>,
}

/// Evenly spread cell indices for d gadgets on a k×k grid's diagonal:
/// cell i of d sits at i·(k−2)/(d−1), so two gadgets land in the first
/// and last cells.
pub fn default_gadget_cells(k: u32, d: u32) -> Vec<u32> {
    if d <= 1 {
        return vec![0];
    }
    (0..d).map(|i| i * (k - 2) / (d - 1)).collect()
}

/// Builds the k×k diagonal-grid instance with one gadget per chosen cell.
/// Cells are indexed 0..k−1 along the main diagonal; cell i spans grid
/// vertices (i,i), (i,i+1), (i+1,i), (i+1,i+1).
///
/// The odd-cycle variant adds the edge (i,i+1)—(i+1,i); deleting the main
/// diagonal separates the grid into two halves recolorable to absorb
/// those edges, so the diagonal is a valid planted solution, while one
/// added-edge endpoint per cell is a much smaller one. The apex variant
/// instead joins a new degree-2 vertex to (i,i+1) and (i+1,i); it only
/// admits the diagonal as a planted solution with a single gadget, since
/// two apexes form a cycle through both that avoids the diagonal
/// entirely, so d must be 1 there.
pub fn gen_diagonal_grid(
    k: u32,
    cells: &[u32],
    variant: GadgetVariant,
) -> Result<CounterexampleInstance> {
    if k < 2 {
        return Err(Error::InvalidParams("grid side must be at least 2".into()));
    }
    if cells.is_empty() {
        return Err(Error::InvalidParams("at least one gadget cell is required".into()));
    }
    let distinct: BTreeSet<u32> = cells.iter().copied().collect();
    if distinct.len() != cells.len() {
        return Err(Error::InvalidParams("gadget cells must be distinct".into()));
    }
    if let Some(&bad) = cells.iter().find(|&&c| c + 1 >= k) {
        return Err(Error::InvalidParams(format!(
            "cell {bad} is outside the diagonal of a {k}x{k} grid"
        )));
    }
    if variant == GadgetVariant::ApexCycles && cells.len() > 1 {
        return Err(Error::InvalidParams(
            "the apex variant takes a single gadget cell: with two or more apexes \
             there is a cycle through two of them that avoids the diagonal, so the \
             planted diagonal solution stops being valid"
                .into(),
        ));
    }

    let id = |r: u32, c: u32| r * k + c;
    let base = gen_grid(k, k)?;
    let mut vertices = base.vertex_set().clone();
    let mut edges = base.edges().to_vec();
    let mut u = BTreeSet::new();
    let mut planted_optimal = BTreeSet::new();
    let mut next_apex = k * k;
    for &cell in &distinct {
        let upper = id(cell, cell + 1);
        let lower = id(cell + 1, cell);
        planted_optimal.insert(upper);
        match variant {
            GadgetVariant::OddCycles => edges.push(Edge::new(upper, lower)),
            GadgetVariant::ApexCycles => {
                let apex = next_apex;
                next_apex += 1;
                vertices.insert(apex);
                u.insert(apex);
                edges.push(Edge::new(apex, upper));
                edges.push(Edge::new(apex, lower));
            }
        }
    }
    let graph = Graph::from_parts(vertices, edges)?;
    let planted_local: BTreeSet<VertexId> = (0..k).map(|j| id(j, j)).collect();
    let kind = match variant {
        GadgetVariant::OddCycles => ProblemKind::Oct,
        GadgetVariant::ApexCycles => ProblemKind::SubsetFvs(u.clone()),
    };
    for (name, set) in [("candidate", &planted_local), ("reference", &planted_optimal)] {
        if !kind_feasible(&graph, &kind, set)? {
            return Err(Error::Construction(format!(
                "planted {name} solution fails the feasibility oracle"
            )));
        }
    }
    if planted_local.len() < planted_optimal.len() {
        return Err(Error::Construction(
            "planted candidate solution is smaller than the planted reference".into(),
        ));
    }
    Ok(CounterexampleInstance { graph, kind, planted_local, planted_optimal, u })
}

/// Exhaustively checks that no move of radius c improves the tested
/// solution: for every removal subset R of size at most c, no completion
/// with fewer than |R| added vertices restores feasibility. Complete
/// bounded searches over all remaining vertices decide each completion,
/// so a true answer is a proof for this instance and radius.
pub fn verify_local_optimality(
    inst: &CounterexampleInstance,
    tested: &BTreeSet<VertexId>,
    c: usize,
) -> Result<bool> {
    for &v in tested {
        if !inst.graph.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
    }
    if !kind_feasible(&inst.graph, &inst.kind, tested)? {
        return Err(Error::Infeasible("tested solution fails the feasibility oracle".into()));
    }
    let members: Vec<VertexId> = tested.iter().copied().collect();
    for removal_size in 1..=c.min(members.len()) {
        for removal in members.iter().copied().combinations(removal_size) {
            let removal: BTreeSet<VertexId> = removal.into_iter().collect();
            let base: BTreeSet<VertexId> = tested.difference(&removal).copied().collect();
            let reduced = inst.graph.delete_vertices(&base)?;
            let candidates = reduced.vertex_set().clone();
            let allowed = removal_size - 1;
            let completion = match &inst.kind {
                ProblemKind::Fvs => bounded_fvs(&reduced, allowed, &candidates),
                ProblemKind::Oct => bounded_oct(&reduced, allowed, &candidates),
                ProblemKind::SubsetFvs(u) => {
                    bounded_subset_fvs(&reduced, u, allowed, &candidates)
                }
            };
            if completion.is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A straight-line drawing of a simple graph, validated to be in general
/// position: distinct vertex locations, no vertex interior to an edge
/// segment, no collinear overlapping edges, and no three edges through a
/// common interior point.
#[derive(Clone, Debug)]
pub struct DrawnGraph {
    pub graph: Graph,
    pub coords: BTreeMap<VertexId, Point>,
}

/// One transversal intersection between two drawn edges, with the
/// parameter of the intersection along each of them.
#[derive(Clone, Debug)]
pub struct EdgeCrossing {
    pub first_edge: usize,
    pub second_edge: usize,
    pub point: Point,
    pub t_first: Coord,
    pub t_second: Coord,
}

impl DrawnGraph {
    pub fn new(graph: Graph, coords: BTreeMap<VertexId, Point>) -> Result<Self> {
        validate_drawing(&graph, &coords)?;
        Ok(DrawnGraph { graph, coords })
    }

    pub fn from_int_coords(graph: Graph, coords: &[(VertexId, i64, i64)]) -> Result<Self> {
        let map = coords
            .iter()
            .map(|&(v, x, y)| (v, Point::from_ints(x, y)))
            .collect();
        DrawnGraph::new(graph, map)
    }

    fn segment(&self, edge: usize) -> (&Point, &Point) {
        let e = self.graph.edges()[edge];
        (&self.coords[&e.u], &self.coords[&e.v])
    }

    /// All pairwise edge crossings, ordered by edge index pair.
    pub fn crossings(&self) -> Vec<EdgeCrossing> {
        let m = self.graph.edge_count();
        let mut out = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                let (a, b) = self.segment(i);
                let (c, d) = self.segment(j);
                if let Some(x) = proper_crossing(a, b, c, d) {
                    out.push(EdgeCrossing {
                        first_edge: i,
                        second_edge: j,
                        point: x.point,
                        t_first: x.t_first,
                        t_second: x.t_second,
                    });
                }
            }
        }
        out
    }

    /// How many times each edge is crossed; every edge index is present.
    pub fn crossing_counts(&self) -> BTreeMap<usize, usize> {
        let mut counts: BTreeMap<usize, usize> =
            (0..self.graph.edge_count()).map(|i| (i, 0)).collect();
        for x in self.crossings() {
            *counts.get_mut(&x.first_edge).unwrap() += 1;
            *counts.get_mut(&x.second_edge).unwrap() += 1;
        }
        counts
    }
}

fn validate_drawing(graph: &Graph, coords: &BTreeMap<VertexId, Point>) -> Result<()> {
    for v in graph.vertices() {
        if !coords.contains_key(&v) {
            return Err(Error::InvalidParams(format!("vertex {v} has no coordinates")));
        }
    }
    for &v in coords.keys() {
        if !graph.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
    }
    let mut at: BTreeMap<&Point, VertexId> = BTreeMap::new();
    for (&v, p) in coords {
        if let Some(&w) = at.get(p) {
            return Err(Error::Degenerate(format!(
                "vertices {w} and {v} share the same coordinates"
            )));
        }
        at.insert(p, v);
    }
    let mut keys = BTreeSet::new();
    for e in graph.edges() {
        if e.is_loop() {
            return Err(Error::Degenerate(format!(
                "self-loop at {} cannot be drawn as a segment",
                e.u
            )));
        }
        if !keys.insert(e.key()) {
            return Err(Error::Degenerate(format!(
                "parallel edges {}-{} overlap in a straight-line drawing",
                e.u.min(e.v),
                e.u.max(e.v)
            )));
        }
    }
    for e in graph.edges() {
        let (a, b) = (&coords[&e.u], &coords[&e.v]);
        for (&w, p) in coords {
            if w != e.u && w != e.v && strictly_between(p, a, b) {
                return Err(Error::Degenerate(format!(
                    "vertex {w} lies on the edge {}-{}",
                    e.u, e.v
                )));
            }
        }
    }
    let m = graph.edge_count();
    let seg = |i: usize| {
        let e = graph.edges()[i];
        (&coords[&e.u], &coords[&e.v])
    };
    let mut points: Vec<Point> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = seg(i);
            let (c, d) = seg(j);
            if collinear_overlap(a, b, c, d) {
                return Err(Error::Degenerate(format!(
                    "edges {i} and {j} overlap along a common line"
                )));
            }
            if let Some(x) = proper_crossing(a, b, c, d) {
                points.push(x.point);
            }
        }
    }
    points.sort();
    if points.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Degenerate(
            "three or more edges pass through a common interior point".into(),
        ));
    }
    Ok(())
}

/// How the subdivided graph maps back onto the original one.
#[derive(Clone, Debug, Default)]
pub struct SubdivisionMap {
    /// Original edge index → the vertex path replacing it (both endpoints
    /// included; length 2 when the edge was kept as is).
    pub edge_paths: BTreeMap<usize, Vec<VertexId>>,
    /// Subdivision vertex → the endpoints of the edge it was placed on.
    pub origin: BTreeMap<VertexId, (VertexId, VertexId)>,
}

/// A drawing whose every edge is crossed at most once, with the map back
/// to the graph it was made from.
#[derive(Clone, Debug)]
pub struct Planarized {
    pub drawing: DrawnGraph,
    pub map: SubdivisionMap,
}

/// Subdivides every edge crossed two or more times, placing one new
/// vertex midway (in parameter) between consecutive crossing points, so
/// that each resulting edge carries at most one crossing. Edges crossed
/// at most once are kept untouched; a crossing-free drawing round-trips
/// unchanged. The feedback vertex set optimum of the result equals that
/// of the input, since every new vertex has degree 2.
pub fn planarize_1planar(dg: &DrawnGraph) -> Result<Planarized> {
    let mut per_edge: BTreeMap<usize, Vec<Coord>> = BTreeMap::new();
    for x in dg.crossings() {
        per_edge.entry(x.first_edge).or_default().push(x.t_first);
        per_edge.entry(x.second_edge).or_default().push(x.t_second);
    }
    let mut next_id = dg.graph.vertex_set().iter().next_back().map_or(0, |&v| v + 1);
    let mut coords = dg.coords.clone();
    let mut new_edges: Vec<Edge> = Vec::new();
    let mut edge_paths = BTreeMap::new();
    let mut origin = BTreeMap::new();
    for (i, e) in dg.graph.edges().iter().enumerate() {
        let mut path = vec![e.u];
        if let Some(ts) = per_edge.get_mut(&i) {
            if ts.len() >= 2 {
                ts.sort();
                let (a, b) = (&dg.coords[&e.u], &dg.coords[&e.v]);
                for w in ts.windows(2) {
                    let mid = (&w[0] + &w[1]) * rational(1, 2);
                    coords.insert(next_id, Point::at_parameter(a, b, &mid));
                    origin.insert(next_id, (e.u, e.v));
                    path.push(next_id);
                    next_id += 1;
                }
            }
        }
        path.push(e.v);
        for pair in path.windows(2) {
            new_edges.push(Edge::new(pair[0], pair[1]));
        }
        edge_paths.insert(i, path);
    }
    let vertices: BTreeSet<VertexId> = dg
        .graph
        .vertex_set()
        .iter()
        .copied()
        .chain(origin.keys().copied())
        .collect();
    let h = Graph::from_parts(vertices, new_edges)?;
    let drawing = DrawnGraph::new(h, coords)?;
    Ok(Planarized { drawing, map: SubdivisionMap { edge_paths, origin } })
}

/// Maps a solution of the subdivided graph back to the original: each
/// subdivision vertex is replaced by the smaller endpoint of the edge it
/// sits on. The result is never larger and stays a valid feedback vertex
/// set, because any cycle through a subdivision path also runs through
/// both endpoints of the original edge.
pub fn lift_solution(
    h_solution: &BTreeSet<VertexId>,
    map: &SubdivisionMap,
) -> BTreeSet<VertexId> {
    h_solution
        .iter()
        .map(|&v| match map.origin.get(&v) {
            Some(&(a, b)) => a.min(b),
            None => v,
        })
        .collect()
}

/// A random straight-line drawing: n points with integer coordinates in
/// [−span, span]² and m distinct edges, resampled until the drawing is in
/// general position. Deterministic under `seed`.
pub fn gen_drawn_random(n: u32, m: usize, span: i64, seed: u64) -> Result<DrawnGraph> {
    if n < 2 || span < 1 {
        return Err(Error::InvalidParams("need at least two vertices and a positive span".into()));
    }
    let max_edges = (n as usize) * (n as usize - 1) / 2;
    if m > max_edges {
        return Err(Error::InvalidParams(format!(
            "{m} edges requested but only {max_edges} distinct pairs exist"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let points: Vec<Point> = (0..n)
            .map(|_| {
                Point::from_ints(rng.gen_range(-span..=span), rng.gen_range(-span..=span))
            })
            .collect();
        let mut pairs: Vec<(u32, u32)> = (0..n).tuple_combinations().collect();
        pairs.shuffle(&mut rng);
        let mut chosen: Vec<(u32, u32)> = pairs.into_iter().take(m).collect();
        chosen.sort();
        let graph = Graph::build(n, &chosen)?;
        let coords: BTreeMap<VertexId, Point> =
            (0..n).map(|v| (v, points[v as usize].clone())).collect();
        match DrawnGraph::new(graph, coords) {
            Ok(dg) => return Ok(dg),
            Err(Error::Degenerate(_)) => continue,
            Err(other) => return Err(other),
        }
    }
    Err(Error::Degenerate(
        "no drawing in general position found after 200 attempts".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{exact_fvs, exact_fvs_size, exact_min_size, oct_feasible};
    use crate::solver::is_feasible;

    #[test]
    fn grid_shapes() {
        let path = gen_grid(1, 5).unwrap();
        assert_eq!(path.vertex_count(), 5);
        assert!(path.is_acyclic());
        let c4 = gen_grid(2, 2).unwrap();
        assert_eq!(c4.edge_count(), 4);
        assert!(!c4.is_acyclic());
        let g = gen_grid(3, 3).unwrap();
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.edge_count(), 12);
        assert!(gen_grid(0, 3).is_err());
    }

    #[test]
    fn k3n_optimum_growth() {
        assert!(gen_k3n(1).unwrap().is_acyclic());
        assert_eq!(exact_fvs_size(&gen_k3n(2).unwrap(), 5).unwrap(), 1);
        assert_eq!(exact_fvs_size(&gen_k3n(3).unwrap(), 6).unwrap(), 2);
    }

    #[test]
    fn ktree_edge_counts_at_full_density() {
        let tree = gen_partial_ktree(8, 1, 1.0, 3).unwrap();
        assert_eq!(tree.edge_count(), 7);
        assert!(tree.is_acyclic());
        let two_tree = gen_partial_ktree(4, 2, 1.0, 3).unwrap();
        assert_eq!(two_tree.edge_count(), 5);
        let bigger = gen_partial_ktree(20, 2, 1.0, 9).unwrap();
        assert_eq!(bigger.edge_count(), 37);
    }

    #[test]
    fn ktree_determinism_and_sparsification() {
        let a = gen_partial_ktree(15, 3, 0.7, 42).unwrap();
        let b = gen_partial_ktree(15, 3, 0.7, 42).unwrap();
        assert_eq!(a.vertex_set(), b.vertex_set());
        assert_eq!(a.edges(), b.edges());
        // Same seed, lower keep probability: the kept edges are a subset,
        // because the construction draws are identical and each filter
        // draw passes at 1.0 whenever it passes at 0.7.
        let full = gen_partial_ktree(15, 3, 1.0, 42).unwrap();
        let full_keys: BTreeSet<_> = full.edges().iter().map(Edge::key).collect();
        assert!(a.edges().iter().all(|e| full_keys.contains(&e.key())));
        assert!(a.edge_count() < full.edge_count());
    }

    #[test]
    fn ktree_parameter_validation() {
        assert!(gen_partial_ktree(3, 3, 1.0, 0).is_err());
        assert!(gen_partial_ktree(5, 0, 1.0, 0).is_err());
        assert!(gen_partial_ktree(5, 2, 0.0, 0).is_err());
        assert!(gen_partial_ktree(5, 2, 1.5, 0).is_err());
    }

    #[test]
    fn diagonal_grid_odd_cycle_single_gadget() {
        let inst = gen_diagonal_grid(4, &[0], GadgetVariant::OddCycles).unwrap();
        assert_eq!(inst.kind.name(), "oct");
        assert_eq!(inst.planted_optimal, BTreeSet::from([1]));
        assert_eq!(inst.planted_local, BTreeSet::from([0, 5, 10, 15]));
        assert!(inst.u.is_empty());
        assert_eq!(inst.graph.edge_count(), 24 + 1);
        // The grid part alone has no odd cycle.
        assert!(oct_feasible(&gen_grid(4, 4).unwrap(), &BTreeSet::new()).unwrap());
        assert!(!oct_feasible(&inst.graph, &BTreeSet::new()).unwrap());
    }

    #[test]
    fn diagonal_grid_gadgets_force_the_optimum() {
        let inst = gen_diagonal_grid(4, &[0, 2], GadgetVariant::OddCycles).unwrap();
        assert_eq!(inst.planted_optimal.len(), 2);
        assert_eq!(exact_min_size(&inst.graph, &inst.kind, 4).unwrap(), 2);
        // Planted candidate is twice the optimum already at k = 4.
        assert!(inst.planted_local.len() >= 2 * inst.planted_optimal.len());
    }

    #[test]
    fn diagonal_grid_apex_variant() {
        let inst = gen_diagonal_grid(4, &[0], GadgetVariant::ApexCycles).unwrap();
        assert_eq!(inst.u, BTreeSet::from([16]));
        assert_eq!(inst.graph.degree(16), 2);
        assert_eq!(inst.kind.name(), "sfvs");
        assert_eq!(exact_min_size(&inst.graph, &inst.kind, 4).unwrap(), 1);
        // Two apexes admit a cycle through both that dodges the diagonal,
        // so the construction refuses.
        assert!(matches!(
            gen_diagonal_grid(4, &[0, 2], GadgetVariant::ApexCycles),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn diagonal_grid_cell_validation() {
        assert!(gen_diagonal_grid(4, &[], GadgetVariant::OddCycles).is_err());
        assert!(gen_diagonal_grid(4, &[3], GadgetVariant::OddCycles).is_err());
        assert!(gen_diagonal_grid(4, &[0, 0], GadgetVariant::OddCycles).is_err());
        assert!(gen_diagonal_grid(1, &[0], GadgetVariant::OddCycles).is_err());
    }

    #[test]
    fn default_cells_spread_over_the_diagonal() {
        assert_eq!(default_gadget_cells(5, 1), vec![0]);
        assert_eq!(default_gadget_cells(5, 2), vec![0, 3]);
        assert_eq!(default_gadget_cells(8, 3), vec![0, 3, 6]);
    }

    #[test]
    fn zero_radius_moves_never_improve() {
        let inst = gen_diagonal_grid(4, &[0], GadgetVariant::OddCycles).unwrap();
        assert!(verify_local_optimality(&inst, &inst.planted_local, 0).unwrap());
    }

    #[test]
    fn globally_optimal_solution_is_locally_optimal() {
        let inst = gen_diagonal_grid(4, &[0, 2], GadgetVariant::OddCycles).unwrap();
        assert!(verify_local_optimality(&inst, &inst.planted_optimal, 1).unwrap());
    }

    #[test]
    fn two_spread_gadgets_pin_the_diagonal_at_radius_two() {
        let inst = gen_diagonal_grid(5, &[0, 3], GadgetVariant::OddCycles).unwrap();
        assert!(verify_local_optimality(&inst, &inst.planted_local, 1).unwrap());
        assert!(verify_local_optimality(&inst, &inst.planted_local, 2).unwrap());
    }

    #[test]
    fn one_gadget_is_improvable_at_radius_two() {
        // With a single added edge, every odd cycle uses it, so removing
        // two diagonal vertices and adding one of its endpoints wins.
        let inst = gen_diagonal_grid(4, &[0], GadgetVariant::OddCycles).unwrap();
        assert!(verify_local_optimality(&inst, &inst.planted_local, 1).unwrap());
        assert!(!verify_local_optimality(&inst, &inst.planted_local, 2).unwrap());
    }

    #[test]
    fn apex_instance_is_improvable_at_radius_two() {
        // Adding the apex itself covers all its cycles at once.
        let inst = gen_diagonal_grid(4, &[0], GadgetVariant::ApexCycles).unwrap();
        assert!(verify_local_optimality(&inst, &inst.planted_local, 1).unwrap());
        assert!(!verify_local_optimality(&inst, &inst.planted_local, 2).unwrap());
    }

    #[test]
    fn local_optimality_rejects_infeasible_input() {
        let inst = gen_diagonal_grid(4, &[0], GadgetVariant::OddCycles).unwrap();
        let err = verify_local_optimality(&inst, &BTreeSet::new(), 1);
        assert!(matches!(err, Err(Error::Infeasible(_))));
    }

    fn square_drawing() -> DrawnGraph {
        let g = Graph::build(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        DrawnGraph::from_int_coords(g, &[(0, 0, 0), (1, 4, 0), (2, 4, 4), (3, 0, 4)]).unwrap()
    }

    #[test]
    fn crossing_free_drawing_round_trips() {
        let dg = square_drawing();
        assert!(dg.crossings().is_empty());
        let out = planarize_1planar(&dg).unwrap();
        assert_eq!(out.drawing.graph.vertex_set(), dg.graph.vertex_set());
        assert_eq!(out.drawing.graph.edges(), dg.graph.edges());
        assert!(out.map.origin.is_empty());
        assert!(out.map.edge_paths.values().all(|p| p.len() == 2));
    }

    #[test]
    fn single_crossing_needs_no_subdivision() {
        let g = Graph::build(4, &[(0, 2), (1, 3)]).unwrap();
        let dg = DrawnGraph::from_int_coords(
            g,
            &[(0, 0, 0), (1, 0, 2), (2, 2, 2), (3, 2, 0)],
        )
        .unwrap();
        assert_eq!(dg.crossings().len(), 1);
        let out = planarize_1planar(&dg).unwrap();
        assert_eq!(out.drawing.graph.edge_count(), 2);
        assert!(out.map.origin.is_empty());
    }

    fn complete_drawing(coords: &[(i64, i64)]) -> DrawnGraph {
        let n = coords.len() as u32;
        let pairs: Vec<(u32, u32)> = (0..n).tuple_combinations().collect();
        let g = Graph::build(n, &pairs).unwrap();
        let placed: Vec<(VertexId, i64, i64)> = coords
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| (i as u32, x, y))
            .collect();
        DrawnGraph::from_int_coords(g, &placed).unwrap()
    }

    #[test]
    fn five_clique_drawing_with_one_crossing_is_kept() {
        let dg = complete_drawing(&[(0, 0), (10, 0), (5, 9), (5, 3), (6, 16)]);
        let crossings = dg.crossings();
        assert_eq!(crossings.len(), 1);
        assert_eq!(
            crossings[0].point,
            Point::new(rational(200, 37), rational(306, 37))
        );
        let out = planarize_1planar(&dg).unwrap();
        assert!(out.map.origin.is_empty());
        assert_eq!(out.drawing.graph.edge_count(), 10);
        assert_eq!(
            exact_fvs_size(&out.drawing.graph, 5).unwrap(),
            exact_fvs_size(&dg.graph, 5).unwrap()
        );
    }

    #[test]
    fn convex_five_clique_subdivides_every_diagonal() {
        let dg = complete_drawing(&[(0, 0), (12, 0), (18, 10), (9, 18), (-2, 10)]);
        assert_eq!(dg.crossings().len(), 5);
        let out = planarize_1planar(&dg).unwrap();
        // Five diagonals, two crossings each: one new vertex per diagonal.
        assert_eq!(out.map.origin.len(), 5);
        assert_eq!(out.drawing.graph.vertex_count(), 10);
        assert_eq!(out.drawing.graph.edge_count(), 15);
        assert!(out.drawing.crossing_counts().values().all(|&c| c <= 1));

        let g_opt = exact_fvs_size(&dg.graph, 5).unwrap();
        let h_opt = exact_fvs_size(&out.drawing.graph, 10).unwrap();
        assert_eq!(g_opt, 3);
        assert_eq!(h_opt, 3);

        let h_solution = exact_fvs(&out.drawing.graph, 10).unwrap();
        let lifted = lift_solution(&h_solution, &out.map);
        assert!(lifted.len() <= h_solution.len());
        assert!(is_feasible(&dg.graph, &lifted).unwrap());
        assert_eq!(lifted.len(), g_opt);
    }

    #[test]
    fn degenerate_drawings_are_rejected() {
        let g = Graph::build(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        // Vertex 2 on the segment 0-1.
        let err = DrawnGraph::from_int_coords(
            g.clone(),
            &[(0, 0, 0), (1, 4, 0), (2, 2, 0)],
        );
        assert!(matches!(err, Err(Error::Degenerate(_))));
        // Duplicate coordinates.
        let err = DrawnGraph::from_int_coords(
            g.clone(),
            &[(0, 0, 0), (1, 4, 0), (2, 0, 0)],
        );
        assert!(matches!(err, Err(Error::Degenerate(_))));
        // Missing coordinates.
        let err = DrawnGraph::from_int_coords(g, &[(0, 0, 0), (1, 4, 0)]);
        assert!(matches!(err, Err(Error::InvalidParams(_))));
        // Collinear overlap of two disjoint edges.
        let g = Graph::build(4, &[(0, 1), (2, 3)]).unwrap();
        let err = DrawnGraph::from_int_coords(
            g,
            &[(0, 0, 0), (1, 4, 0), (2, 2, 0), (3, 6, 0)],
        );
        assert!(matches!(err, Err(Error::Degenerate(_))));
        // Three segments through the origin.
        let g = Graph::build(6, &[(0, 3), (1, 4), (2, 5)]).unwrap();
        let err = DrawnGraph::from_int_coords(
            g,
            &[(0, -1, 0), (1, 0, -1), (2, -1, -1), (3, 1, 0), (4, 0, 1), (5, 1, 1)],
        );
        assert!(matches!(err, Err(Error::Degenerate(_))));
    }

    #[test]
    fn lift_is_identity_without_subdivision_vertices() {
        let dg = square_drawing();
        let out = planarize_1planar(&dg).unwrap();
        let s = BTreeSet::from([0, 2]);
        assert_eq!(lift_solution(&s, &out.map), s);
    }

    #[test]
    fn lift_replaces_a_subdivision_vertex_with_an_endpoint() {
        let mut map = SubdivisionMap::default();
        map.origin.insert(9, (4, 7));
        assert_eq!(lift_solution(&BTreeSet::from([9]), &map), BTreeSet::from([4]));
    }

    #[test]
    fn random_drawings_are_deterministic_and_valid() {
        let a = gen_drawn_random(7, 10, 30, 11).unwrap();
        let b = gen_drawn_random(7, 10, 30, 11).unwrap();
        assert_eq!(a.graph.edges(), b.graph.edges());
        assert_eq!(a.coords, b.coords);
        assert_eq!(a.graph.edge_count(), 10);
        assert!(gen_drawn_random(4, 7, 30, 0).is_err());
    }
}
