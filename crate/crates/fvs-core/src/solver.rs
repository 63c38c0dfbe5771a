//! Local search for feedback vertex set.
//!
//! The neighborhood move is: pick a removal subset R of the current
//! solution with |R| <= c, then search for a completion F of size < |R|
//! drawn from the rest of the graph so that (S \ R) ∪ F is again feasible.
//! [`bounded_fvs`] is the complete bounded-depth search used both for that
//! completion step and (via iterative deepening) as the exact oracle.

use std::collections::BTreeSet;
use std::time::Instant;

use itertools::Itertools;
use num::{BigRational, FromPrimitive, Signed, ToPrimitive};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub members: BTreeSet<VertexId>,
    pub feasible: bool,
}

impl Solution {
    pub fn new(g: &Graph, members: BTreeSet<VertexId>) -> Result<Solution> {
        let feasible = is_feasible(g, &members)?;
        Ok(Solution { members, feasible })
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Clone, Debug)]
pub struct SearchParams {
    /// Neighborhood size: how many solution vertices one move may remove.
    pub c: usize,
    /// Cap on accepted moves; defaults to |V(g)| when None.
    pub max_iterations: Option<usize>,
    /// Seed for randomized tie-breaking in the initial solution; None means
    /// smallest-id ties everywhere.
    pub seed: Option<u64>,
}

impl SearchParams {
    pub fn new(c: usize) -> SearchParams {
        SearchParams { c, max_iterations: None, seed: None }
    }
}

/// Per-run record emitted by [`local_search`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RunReport {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub c: usize,
    pub initial_size: usize,
    pub final_size: usize,
    pub iterations: usize,
    pub certified_local_opt: bool,
    pub wall_ms: u64,
    /// Solution size after each accepted move (trace; not serialized).
    #[serde(skip)]
    pub sizes: Vec<usize>,
}

pub fn is_feasible(g: &Graph, members: &BTreeSet<VertexId>) -> Result<bool> {
    Ok(g.delete_vertices(members)?.is_acyclic())
}

/// Feasible starting solution: exhaust the safe reductions (delete degree
/// <= 1 vertices, bypass degree-2 vertices), then put the highest-degree
/// vertex of what remains into the solution; repeat until acyclic. With a
/// seed, ties among maximum-degree vertices are broken randomly instead of
/// by smallest id.
pub fn greedy_initial(g: &Graph, seed: Option<u64>) -> Solution {
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut work = g.clone();
    let mut members = BTreeSet::new();
    loop {
        work = reduce_for_greedy(&work);
        if work.is_acyclic() {
            break;
        }
        // A self-loop forces its vertex; otherwise take maximum degree.
        let forced = work.vertices().find(|&v| work.has_self_loop(v));
        let pick = forced.unwrap_or_else(|| {
            let max_deg = work.vertices().map(|v| work.degree(v)).max().unwrap();
            let tied: Vec<VertexId> =
                work.vertices().filter(|&v| work.degree(v) == max_deg).collect();
            match &mut rng {
                Some(rng) => *tied.choose(rng).unwrap(),
                None => tied[0],
            }
        });
        members.insert(pick);
        work = work.delete_vertex(pick).expect("pick is a vertex of work");
    }
    Solution { members, feasible: true }
}

/// Deletes degree <= 1 vertices and bypasses degree-2 vertices (with two
/// distinct neighbors and no self-loop) until neither applies. Neither
/// reduction changes which vertices are useful solution members.
fn reduce_for_greedy(g: &Graph) -> Graph {
    let mut work = g.clone();
    loop {
        let low = work.vertices().find(|&v| work.degree(v) <= 1);
        if let Some(v) = low {
            work = work.delete_vertex(v).unwrap();
            continue;
        }
        let bypass = work.vertices().find(|&v| {
            work.degree(v) == 2 && !work.has_self_loop(v) && {
                let mut ns = work.neighbors(v).map(|(_, w)| w);
                let (a, b) = (ns.next().unwrap(), ns.next().unwrap());
                a != b
            }
        });
        match bypass {
            Some(v) => {
                let (eidx, survivor) = work.neighbors(v).next().unwrap();
                work = work.contract_edge_into(eidx, survivor).unwrap();
            }
            None => return work,
        }
    }
}

/// Complete bounded search: a set F ⊆ candidates with |F| <= k and
/// g − F acyclic, or None if no such set exists. None is a proof of
/// nonexistence, not a timeout.
pub fn bounded_fvs(g: &Graph, k: usize, candidates: &BTreeSet<VertexId>) -> Option<BTreeSet<VertexId>> {
    let mut chosen = BTreeSet::new();
    if bounded_fvs_rec(g.clone(), k, candidates, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

fn bounded_fvs_rec(
    mut g: Graph,
    mut k: usize,
    candidates: &BTreeSet<VertexId>,
    chosen: &mut BTreeSet<VertexId>,
) -> bool {
    loop {
        if g.is_acyclic() {
            return true;
        }
        if k == 0 {
            return false;
        }
        // Forced: a self-loop vertex is on a cycle by itself, so it must be
        // taken; if it is not a candidate, no candidate set can work.
        let looped = g.vertices().find(|&v| g.has_self_loop(v));
        if let Some(v) = looped {
            if !candidates.contains(&v) {
                return false;
            }
            chosen.insert(v);
            g = g.delete_vertex(v).unwrap();
            k -= 1;
            continue;
        }
        // Safe shrink: degree <= 1 vertices are on no cycle.
        let low = g.vertices().find(|&v| g.degree(v) <= 1);
        if let Some(v) = low {
            g = g.delete_vertex(v).unwrap();
            continue;
        }
        // Bypass degree-2 NON-candidates: they can never enter F, and every
        // cycle through them survives the bypass, so correctness in both
        // directions is preserved. Candidate degree-2 vertices must stay
        // (they may be the only allowed hit on some cycle).
        let bypass = g
            .vertices()
            .find(|&v| g.degree(v) == 2 && !candidates.contains(&v) && !g.has_self_loop(v));
        if let Some(v) = bypass {
            let (eidx, survivor) = g.neighbors(v).next().unwrap();
            g = g.contract_edge_into(eidx, survivor).unwrap();
            continue;
        }
        break;
    }
    // Branch on a shortest cycle: any valid F contains one of its
    // candidate vertices.
    let cycle = g.find_shortest_cycle().expect("not acyclic");
    for v in cycle.vertices.iter().copied().filter(|v| candidates.contains(v)) {
        chosen.insert(v);
        if bounded_fvs_rec(g.delete_vertex(v).unwrap(), k - 1, candidates, chosen) {
            return true;
        }
        chosen.remove(&v);
    }
    false
}

/// One local-search step: the first improving neighbor in deterministic
/// order (removal subsets R of S ordered by size then lexicographically),
/// or None when S is c-locally optimal.
pub fn improve_once(g: &Graph, s: &Solution, c: usize) -> Result<Option<Solution>> {
    if !is_feasible(g, &s.members)? {
        return Err(Error::Infeasible("improve_once requires a feasible solution".into()));
    }
    let members: Vec<VertexId> = s.members.iter().copied().collect();
    for r_size in 1..=c.min(members.len()) {
        for r in members.iter().copied().combinations(r_size) {
            let removal: BTreeSet<VertexId> = r.into_iter().collect();
            let kept: BTreeSet<VertexId> =
                s.members.difference(&removal).copied().collect();
            let shrunk = g.delete_vertices(&kept)?;
            let candidates: BTreeSet<VertexId> = shrunk.vertex_set().clone();
            if let Some(f) = bounded_fvs(&shrunk, r_size - 1, &candidates) {
                let members: BTreeSet<VertexId> = kept.union(&f).copied().collect();
                debug_assert!(members.len() < s.members.len());
                return Ok(Some(Solution { members, feasible: true }));
            }
        }
    }
    Ok(None)
}

/// Run the local search from a greedy start until no c-move improves (or
/// the iteration budget runs out, in which case the report says so).
pub fn local_search(g: &Graph, params: &SearchParams) -> Result<(Solution, RunReport)> {
    let start = greedy_initial(g, params.seed);
    local_search_from(g, start, params)
}

pub fn local_search_from(
    g: &Graph,
    start: Solution,
    params: &SearchParams,
) -> Result<(Solution, RunReport)> {
    if params.c == 0 {
        return Err(Error::InvalidParams("neighborhood size c must be >= 1".into()));
    }
    if !is_feasible(g, &start.members)? {
        return Err(Error::Infeasible("starting solution is not feasible".into()));
    }
    let clock = Instant::now();
    let budget = params.max_iterations.unwrap_or(g.vertex_count());
    let mut current = start;
    let mut sizes = vec![current.size()];
    let initial_size = current.size();
    let mut iterations = 0;
    let mut certified = false;
    loop {
        if iterations >= budget {
            break;
        }
        match improve_once(g, &current, params.c)? {
            Some(next) => {
                debug_assert!(next.size() < current.size());
                current = next;
                sizes.push(current.size());
                iterations += 1;
            }
            None => {
                certified = true;
                break;
            }
        }
    }
    let report = RunReport {
        instance: String::new(),
        n: g.vertex_count(),
        m: g.edge_count(),
        c: params.c,
        initial_size,
        final_size: current.size(),
        iterations,
        certified_local_opt: certified,
        wall_ms: clock.elapsed().as_millis() as u64,
        sizes,
    };
    Ok((current, report))
}

/// The constants an ε-guarantee run would use, all derived from the two
/// measured structural constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConstants {
    pub epsilon: f64,
    pub c_div: f64,
    pub c_ex: f64,
    pub delta: f64,
    pub c: u64,
    pub sigma_h: Option<f64>,
}

/// delta = epsilon / (2 · c_div · c_ex · (2 + epsilon)) and c = ceil(1/δ²),
/// with the ceiling taken in exact rational arithmetic so that, e.g.,
/// 1/δ² = 36 does not round up to 37 through a floating-point 36.000...01.
pub fn derive_constants(
    epsilon: f64,
    c_div: f64,
    c_ex: f64,
    h_size: Option<u64>,
) -> Result<AnalysisConstants> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidParams("epsilon must be positive and finite".into()));
    }
    if !c_div.is_finite() || c_div < 1.0 || !c_ex.is_finite() || c_ex < 1.0 {
        return Err(Error::InvalidParams("c_div and c_ex must be >= 1".into()));
    }
    let [eps_q, cd_q, ce_q] = [epsilon, c_div, c_ex]
        .map(|x| BigRational::from_float(x).expect("finite by the checks above"));
    let two = BigRational::from_u8(2).unwrap();
    let delta_q = &eps_q / (&two * &cd_q * &ce_q * (&two + &eps_q));
    let inv_sq = (delta_q.recip()).pow(2);
    let c = inv_sq.ceil().to_integer();
    let c = c
        .to_u64()
        .ok_or_else(|| Error::InvalidParams("derived c does not fit in u64".into()))?;
    debug_assert!(delta_q.is_positive());
    Ok(AnalysisConstants {
        epsilon,
        c_div,
        c_ex,
        delta: delta_q.to_f64().expect("small ratio"),
        c,
        sigma_h: h_size.map(|h| {
            let h = h as f64;
            h * h.ln().max(0.0).sqrt()
        }),
    })
}
