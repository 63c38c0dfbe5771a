//! Exact solvers at desk scale for the three cycle-hitting problems:
//! feedback vertex set, odd cycle transversal, and subset feedback vertex
//! set. These are completeness-first branching searches meant to certify
//! small instances, not to scale. Optima are returned as the
//! lexicographically smallest minimum set, so every caller sees one
//! canonical answer.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{walk_up, Cycle, Graph, VertexId};
use crate::solver::bounded_fvs;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    Fvs,
    Oct,
    SubsetFvs(BTreeSet<VertexId>),
}

impl ProblemKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemKind::Fvs => "fvs",
            ProblemKind::Oct => "oct",
            ProblemKind::SubsetFvs(_) => "sfvs",
        }
    }
}

/// Feasibility of `s` for the given problem on `g`.
pub fn kind_feasible(g: &Graph, kind: &ProblemKind, s: &BTreeSet<VertexId>) -> Result<bool> {
    match kind {
        ProblemKind::Fvs => crate::solver::is_feasible(g, s),
        ProblemKind::Oct => oct_feasible(g, s),
        ProblemKind::SubsetFvs(u) => subset_fvs_feasible(g, u, s),
    }
}

/// True iff g − s is bipartite. A self-loop is an odd cycle; a parallel
/// pair is an even one.
pub fn oct_feasible(g: &Graph, s: &BTreeSet<VertexId>) -> Result<bool> {
    Ok(find_odd_cycle(&g.delete_vertices(s)?).is_none())
}

/// Some odd cycle of g (deterministic, short), or None iff g is bipartite.
pub fn find_odd_cycle(g: &Graph) -> Option<Cycle> {
    for v in g.vertices() {
        if g.has_self_loop(v) {
            let idx = g.incident(v).iter().copied().find(|&i| g.edges()[i].is_loop()).unwrap();
            return Some(Cycle { vertices: vec![v], edges: vec![idx] });
        }
    }
    let mut best: Option<Cycle> = None;
    for root in g.vertices() {
        let (dist, parent_edge) = g.bfs_tree(root);
        for (eidx, e) in g.edges().iter().enumerate() {
            if e.is_loop() {
                continue;
            }
            let (Some(&du), Some(&dv)) = (dist.get(&e.u), dist.get(&e.v)) else {
                continue;
            };
            // Same BFS parity also rules out tree edges (their endpoints
            // differ by one level).
            if (du + dv) % 2 != 0 {
                continue;
            }
            // Same BFS parity: the two tree paths plus this edge close an
            // odd cycle. The paths agree up to the meeting point and are
            // disjoint after it, so cutting the shared prefix leaves a
            // simple cycle, still odd (the prefix is counted twice).
            let path_u = walk_up(&parent_edge, g.edges(), e.u, root);
            let path_v = walk_up(&parent_edge, g.edges(), e.v, root);
            let mut split = 0;
            while split + 1 < path_u.len()
                && split + 1 < path_v.len()
                && path_u[split + 1].0 == path_v[split + 1].0
            {
                split += 1;
            }
            let mut vs: Vec<VertexId> = path_u[split..].iter().map(|&(v, _)| v).collect();
            let mut es: Vec<usize> =
                path_u[split + 1..].iter().map(|&(_, pe)| pe.unwrap()).collect();
            es.push(eidx);
            for &(v, pe) in path_v[split + 1..].iter().rev() {
                vs.push(v);
                es.push(pe.unwrap());
            }
            // Orient so edge i joins vertices i and i+1: the walk above
            // goes meet -> u, closes to v, then descends v -> meet; the
            // descending edges are each "into" the earlier vertex, which
            // is exactly the cyclic successor, so the alignment holds.
            let cand = Cycle::canonicalize(vs, es);
            let better = match &best {
                None => true,
                Some(b) => (cand.len(), &cand.vertices) < (b.len(), &b.vertices),
            };
            if better {
                best = Some(cand);
            }
        }
    }
    best
}

/// True iff no cycle of g − s passes through a vertex of `u`. Routed
/// through biconnected components: a vertex lies on a cycle exactly when
/// it carries a self-loop or belongs to a block with at least two edges.
pub fn subset_fvs_feasible(
    g: &Graph,
    u: &BTreeSet<VertexId>,
    s: &BTreeSet<VertexId>,
) -> Result<bool> {
    for &x in u {
        if !g.contains_vertex(x) {
            return Err(Error::UnknownVertex(x));
        }
    }
    let h = g.delete_vertices(s)?;
    let on_cycle = vertices_on_cycles(&h);
    Ok(u.iter().filter(|x| h.contains_vertex(**x)).all(|x| !on_cycle.contains(x)))
}

/// The set of vertices lying on at least one cycle, via block
/// decomposition (Hopcroft–Tarjan with parent edge indices, so parallel
/// edges form genuine 2-cycles).
pub fn vertices_on_cycles(g: &Graph) -> BTreeSet<VertexId> {
    use std::collections::BTreeMap;

    let mut on_cycle: BTreeSet<VertexId> = BTreeSet::new();
    for v in g.vertices() {
        if g.has_self_loop(v) {
            on_cycle.insert(v);
        }
    }

    let mut disc: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut low: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut timer = 0usize;
    let mut edge_stack: Vec<usize> = Vec::new();

    // Iterative DFS; each frame remembers the incident-list cursor and the
    // edge used to enter the vertex.
    for root in g.vertices() {
        if disc.contains_key(&root) {
            continue;
        }
        let mut stack: Vec<(VertexId, Option<usize>, usize)> = vec![(root, None, 0)];
        disc.insert(root, timer);
        low.insert(root, timer);
        timer += 1;
        while let Some(&mut (v, via, ref mut cursor)) = stack.last_mut() {
            let incident = g.incident(v);
            if *cursor >= incident.len() {
                stack.pop();
                if let Some(&mut (p, _, _)) = stack.last_mut() {
                    let lv = low[&v];
                    if lv < low[&p] {
                        low.insert(p, lv);
                    }
                    if lv >= disc[&p] {
                        // v's subtree plus p closes a block; pop its edges.
                        let entry = via.expect("non-root has an entry edge");
                        let pos = edge_stack
                            .iter()
                            .rposition(|&i| i == entry)
                            .expect("entry edge was stacked");
                        let block: Vec<usize> = edge_stack.split_off(pos);
                        if block.len() >= 2 {
                            for i in block {
                                let e = g.edges()[i];
                                on_cycle.insert(e.u);
                                on_cycle.insert(e.v);
                            }
                        }
                    }
                }
                continue;
            }
            let eidx = incident[*cursor];
            *cursor += 1;
            let e = g.edges()[eidx];
            if e.is_loop() || Some(eidx) == via {
                continue;
            }
            let w = e.other(v);
            match disc.get(&w) {
                None => {
                    edge_stack.push(eidx);
                    disc.insert(w, timer);
                    low.insert(w, timer);
                    timer += 1;
                    stack.push((w, Some(eidx), 0));
                }
                Some(&dw) => {
                    if dw < disc[&v] {
                        edge_stack.push(eidx);
                        if dw < low[&v] {
                            low.insert(v, dw);
                        }
                    }
                }
            }
        }
        edge_stack.clear();
    }
    on_cycle
}

/// Some cycle of g through a vertex of `u` (deterministic), or None iff
/// none exists. Drives the branching in the subset-FVS search.
pub fn find_u_cycle(g: &Graph, u: &BTreeSet<VertexId>) -> Option<Cycle> {
    for &x in u {
        if !g.contains_vertex(x) {
            continue;
        }
        if g.has_self_loop(x) {
            let idx = g.incident(x).iter().copied().find(|&i| g.edges()[i].is_loop()).unwrap();
            return Some(Cycle { vertices: vec![x], edges: vec![idx] });
        }
        let incident: Vec<usize> = g.incident(x).to_vec();
        for (pi, &i) in incident.iter().enumerate() {
            for &j in incident.iter().skip(pi + 1) {
                if i == j {
                    continue;
                }
                let (a, b) = (g.edges()[i].other(x), g.edges()[j].other(x));
                if a == b {
                    // Parallel pair through x's neighbor: a 2-cycle.
                    return Some(Cycle { vertices: vec![x, a], edges: vec![i.min(j), i.max(j)] });
                }
                let without = g.delete_vertex(x).expect("x is a vertex of g");
                let (dist, parent_edge) = without.bfs_tree(a);
                if !dist.contains_key(&b) {
                    continue;
                }
                let path = walk_up(&parent_edge, without.edges(), b, a);
                // Translate edge indices back: deletion renumbered them.
                let translate: Vec<usize> = g
                    .edges()
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| e.u != x && e.v != x)
                    .map(|(orig, _)| orig)
                    .collect();
                // Cycle walk: x, then the tree path a..b, closed by edge j.
                let mut vertices = vec![x];
                vertices.extend(path.iter().map(|&(v, _)| v));
                let mut edges = vec![i];
                edges.extend(path[1..].iter().map(|&(_, pe)| translate[pe.unwrap()]));
                edges.push(j);
                debug_assert_eq!(vertices.len(), edges.len());
                return Some(Cycle::canonicalize(vertices, edges));
            }
        }
    }
    None
}

/// Complete bounded search for odd cycle transversal: F ⊆ candidates,
/// |F| <= k, g − F bipartite; None proves nonexistence.
pub fn bounded_oct(
    g: &Graph,
    k: usize,
    candidates: &BTreeSet<VertexId>,
) -> Option<BTreeSet<VertexId>> {
    let mut chosen = BTreeSet::new();
    if bounded_cycle_hitter(g.clone(), k, candidates, &mut chosen, &find_odd_cycle) {
        Some(chosen)
    } else {
        None
    }
}

/// Complete bounded search for subset FVS: F ⊆ candidates, |F| <= k, and
/// g − F has no cycle through `u`; None proves nonexistence.
pub fn bounded_subset_fvs(
    g: &Graph,
    u: &BTreeSet<VertexId>,
    k: usize,
    candidates: &BTreeSet<VertexId>,
) -> Option<BTreeSet<VertexId>> {
    let mut chosen = BTreeSet::new();
    let u = u.clone();
    let finder = move |g: &Graph| find_u_cycle(g, &u);
    if bounded_cycle_hitter(g.clone(), k, candidates, &mut chosen, &finder) {
        Some(chosen)
    } else {
        None
    }
}

/// Branch-on-a-violating-cycle skeleton shared by the OCT and subset-FVS
/// searches: any valid hitting set must contain a candidate vertex of
/// every cycle the finder reports.
fn bounded_cycle_hitter(
    g: Graph,
    k: usize,
    candidates: &BTreeSet<VertexId>,
    chosen: &mut BTreeSet<VertexId>,
    find_violation: &dyn Fn(&Graph) -> Option<Cycle>,
) -> bool {
    let Some(cycle) = find_violation(&g) else {
        return true;
    };
    if k == 0 {
        return false;
    }
    for v in cycle.vertices.iter().copied().filter(|v| candidates.contains(v)) {
        chosen.insert(v);
        if bounded_cycle_hitter(g.delete_vertex(v).unwrap(), k - 1, candidates, chosen, find_violation)
        {
            return true;
        }
        chosen.remove(&v);
    }
    false
}

/// The minimum size of a hitting set for `kind`, by iterative deepening
/// over the complete bounded searches.
pub fn exact_min_size(g: &Graph, kind: &ProblemKind, size_limit: usize) -> Result<usize> {
    if let ProblemKind::SubsetFvs(u) = kind {
        for &x in u {
            if !g.contains_vertex(x) {
                return Err(Error::UnknownVertex(x));
            }
        }
    }
    let all: BTreeSet<VertexId> = g.vertex_set().clone();
    for k in 0..=size_limit.min(g.vertex_count()) {
        let hit = match kind {
            ProblemKind::Fvs => bounded_fvs(g, k, &all).is_some(),
            ProblemKind::Oct => bounded_oct(g, k, &all).is_some(),
            ProblemKind::SubsetFvs(u) => bounded_subset_fvs(g, u, k, &all).is_some(),
        };
        if hit {
            return Ok(k);
        }
    }
    Err(Error::SizeLimit(size_limit))
}

/// The minimum hitting set for `kind`, canonicalized to the
/// lexicographically smallest optimum: each vertex in ascending order is
/// kept exactly when some optimum extends the prefix using only larger
/// vertices.
pub fn exact_min(g: &Graph, kind: &ProblemKind, size_limit: usize) -> Result<BTreeSet<VertexId>> {
    let opt = exact_min_size(g, kind, size_limit)?;
    let mut prefix: BTreeSet<VertexId> = BTreeSet::new();
    let vertices: Vec<VertexId> = g.vertices().collect();
    let mut scan_from = 0usize;
    while prefix.len() < opt {
        let mut fixed = None;
        for (pos, &v) in vertices.iter().enumerate().skip(scan_from) {
            let mut attempt = prefix.clone();
            attempt.insert(v);
            let rest: BTreeSet<VertexId> =
                vertices.iter().copied().filter(|&w| w > v && !attempt.contains(&w)).collect();
            let shrunk = g.delete_vertices(&attempt)?;
            let budget = opt - attempt.len();
            let extends = match kind {
                ProblemKind::Fvs => bounded_fvs(&shrunk, budget, &rest).is_some(),
                ProblemKind::Oct => bounded_oct(&shrunk, budget, &rest).is_some(),
                ProblemKind::SubsetFvs(u) => {
                    bounded_subset_fvs(&shrunk, u, budget, &rest).is_some()
                }
            };
            if extends {
                fixed = Some(pos);
                break;
            }
        }
        let pos = fixed.expect("an optimum of the certified size exists");
        prefix.insert(vertices[pos]);
        scan_from = pos + 1;
    }
    debug_assert!(kind_feasible(g, kind, &prefix)?);
    Ok(prefix)
}

/// Minimum feedback vertex set, lexicographically smallest among optima.
pub fn exact_fvs(g: &Graph, size_limit: usize) -> Result<BTreeSet<VertexId>> {
    exact_min(g, &ProblemKind::Fvs, size_limit)
}

pub fn exact_fvs_size(g: &Graph, size_limit: usize) -> Result<usize> {
    exact_min_size(g, &ProblemKind::Fvs, size_limit)
}
