//! Balanced separators, r-divisions, and the audit that ties a locally
//! optimal solution to a reference solution through an r-division of the
//! exchange graph.
//!
//! An r-division covers the host graph with edge-disjoint regions of at
//! most r vertices each. A region's boundary is the set of its vertices
//! that also carry edges outside the region; the interior is everything
//! else. The audit rebuilds, region by region, the hybrid solutions
//! M_i = (local ∖ R_i) ∪ (reference ∩ R_i) ∪ boundary(R_i) and checks that
//! each one is feasible, that each region obeys the swap inequality
//! |local ∩ R_i| <= |reference ∩ interior(R_i)| + |boundary(R_i)|, and that
//! summing over regions yields |local| <= |reference| + 2·|boundary total|.

use std::collections::{BTreeSet, VecDeque};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exchange::build_exchange_graph;
use crate::graph::{Edge, Graph, VertexId};
use crate::solver::{improve_once, is_feasible, Solution};

/// One region of a division: a vertex set plus the indices of the host
/// graph's edges assigned to it. Every assigned edge has both endpoints in
/// the vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<usize>,
}

/// An r-division with precomputed boundaries and the measured quality
/// constant (the larger of the region-count and boundary-sum ratios).
#[derive(Clone, Debug)]
pub struct RDivision {
    pub regions: Vec<Region>,
    pub boundaries: Vec<BTreeSet<VertexId>>,
    pub r: usize,
    pub c_div_measured: f64,
}

impl RDivision {
    pub fn boundary_total(&self) -> usize {
        self.boundaries.iter().map(BTreeSet::len).sum()
    }

    /// Region vertices that carry no edge outside the region.
    pub fn interior(&self, i: usize) -> BTreeSet<VertexId> {
        self.regions[i].vertices.difference(&self.boundaries[i]).copied().collect()
    }
}

fn region_boundary(g: &Graph, region: &Region) -> BTreeSet<VertexId> {
    region
        .vertices
        .iter()
        .copied()
        .filter(|&v| g.incident(v).iter().any(|e| !region.edges.contains(e)))
        .collect()
}

fn measure_c_div(n: usize, r: usize, region_count: usize, boundary_total: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let count_ratio = region_count as f64 / (n as f64 / r as f64);
    let boundary_ratio = boundary_total as f64 / (n as f64 / (r as f64).sqrt());
    count_ratio.max(boundary_ratio)
}

/// Splits component sizes into two groups minimizing the larger group, by
/// subset-sum over the component sizes. Deterministic: components arrive
/// sorted by smallest member, and the smaller achievable target is
/// preferred on ties.
fn pack_components(
    components: &[BTreeSet<VertexId>],
) -> (BTreeSet<VertexId>, BTreeSet<VertexId>) {
    let sizes: Vec<usize> = components.iter().map(BTreeSet::len).collect();
    let total: usize = sizes.iter().sum();
    // reach[i][t]: some subset of the first i components sums to t.
    let mut reach = vec![vec![false; total + 1]];
    reach[0][0] = true;
    for (i, &s) in sizes.iter().enumerate() {
        let prev = &reach[i];
        let mut next = prev.clone();
        for t in s..=total {
            if prev[t - s] {
                next[t] = true;
            }
        }
        reach.push(next);
    }
    let target = (0..=total)
        .filter(|&t| reach[sizes.len()][t])
        .min_by_key(|&t| (t.max(total - t), t))
        .unwrap_or(0);

    let mut first = BTreeSet::new();
    let mut second = BTreeSet::new();
    let mut remaining = target;
    for i in (0..sizes.len()).rev() {
        if sizes[i] <= remaining && reach[i][remaining - sizes[i]] {
            first.extend(components[i].iter().copied());
            remaining -= sizes[i];
        } else {
            second.extend(components[i].iter().copied());
        }
    }
    (first, second)
}

/// All balanced separators found for `g`, as (separator, part, part)
/// triples satisfying: the parts partition V ∖ S, no edge joins them, and
/// the larger part holds at most two thirds of V. Exhaustive over vertex
/// subsets of the smallest workable size when the graph is small; all BFS
/// levels over all roots otherwise.
fn separator_candidates(
    g: &Graph,
) -> Result<Vec<(BTreeSet<VertexId>, BTreeSet<VertexId>, BTreeSet<VertexId>)>> {
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let n = g.vertex_count();
    let vertices: Vec<VertexId> = g.vertices().collect();
    let mut candidates = Vec::new();

    let consider = |s: BTreeSet<VertexId>, candidates: &mut Vec<_>| -> Result<()> {
        let rest = g.delete_vertices(&s)?;
        let components = rest.connected_components();
        let (p1, p2) = pack_components(&components);
        if 3 * p1.len().max(p2.len()) <= 2 * n {
            candidates.push((s, p1, p2));
        }
        Ok(())
    };

    if n <= 14 {
        for size in 1..n {
            for combo in vertices.iter().copied().combinations(size) {
                consider(combo.into_iter().collect(), &mut candidates)?;
            }
            if !candidates.is_empty() {
                break;
            }
        }
    } else {
        let mut seen: BTreeSet<BTreeSet<VertexId>> = BTreeSet::new();
        for &root in &vertices {
            let (dist, _) = bfs_levels(g, root);
            let deepest = dist.iter().map(|(_, &d)| d).max().unwrap_or(0);
            for level in 0..=deepest {
                let s: BTreeSet<VertexId> =
                    dist.iter().filter(|(_, &d)| d == level).map(|(&v, _)| v).collect();
                if s.len() == n || !seen.insert(s.clone()) {
                    continue;
                }
                consider(s, &mut candidates)?;
            }
        }
    }
    if candidates.is_empty() {
        return Err(Error::NoSeparator);
    }
    Ok(candidates)
}

fn bfs_levels(g: &Graph, root: VertexId) -> (std::collections::BTreeMap<VertexId, usize>, ()) {
    let mut dist = std::collections::BTreeMap::new();
    let mut queue = VecDeque::from([root]);
    dist.insert(root, 0usize);
    while let Some(v) = queue.pop_front() {
        let dv = dist[&v];
        for (_, w) in g.neighbors(v) {
            if !dist.contains_key(&w) {
                dist.insert(w, dv + 1);
                queue.push_back(w);
            }
        }
    }
    (dist, ())
}

/// A smallest balanced separator the search can find: V(g) = S ⊎ P1 ⊎ P2
/// with no edge between the parts and the larger part at most 2n/3.
/// Among the candidates, the smallest separator wins, then the most
/// balanced split, then the lexicographically least separator.
pub fn balanced_separator(
    g: &Graph,
) -> Result<(BTreeSet<VertexId>, BTreeSet<VertexId>, BTreeSet<VertexId>)> {
    let candidates = separator_candidates(g)?;
    Ok(candidates
        .into_iter()
        .min_by(|(s1, a1, b1), (s2, a2, b2)| {
            (s1.len(), a1.len().max(b1.len()), s1).cmp(&(s2.len(), a2.len().max(b2.len()), s2))
        })
        .expect("candidates is nonempty"))
}

/// Computes an r-division: edge-disjoint regions covering every edge and
/// vertex, each region with at most r vertices. Oversized regions are split
/// along balanced separators with the separator replicated into both
/// children; disconnected regions split along components; regions the
/// separator cannot shrink fall back to halving the edge list. The output
/// always passes [`verify_r_division`]; the measured quality constant is
/// computed, never assumed.
pub fn r_division(g: &Graph, r: usize) -> Result<RDivision> {
    if r < 2 {
        return Err(Error::InvalidParams("region size must be at least 2".into()));
    }
    let mut final_regions: Vec<Region> = Vec::new();
    let mut queue: VecDeque<Region> = VecDeque::new();
    if g.vertex_count() > 0 {
        queue.push_back(Region {
            vertices: g.vertex_set().clone(),
            edges: (0..g.edge_count()).collect(),
        });
    }

    while let Some(region) = queue.pop_front() {
        if region.vertices.len() <= r {
            final_regions.push(region);
            continue;
        }
        let sub_edges: Vec<usize> = region.edges.iter().copied().collect();
        let edge_list: Vec<Edge> = sub_edges.iter().map(|&i| g.edges()[i]).collect();
        let sub = Graph::from_parts(region.vertices.clone(), edge_list)?;

        if !sub.is_connected() {
            let components = sub.connected_components();
            let (v1, v2) = pack_components(&components);
            let (c1, c2) = split_by_vertex_halves(&region, &v1, &v2, g);
            queue.push_back(c1);
            queue.push_back(c2);
            continue;
        }

        let children = match separator_candidates(&sub) {
            Ok(candidates) => best_separator_split(g, &region, candidates, r),
            Err(Error::NoSeparator) => None,
            Err(other) => return Err(other),
        };
        match children {
            Some((c1, c2)) => {
                queue.push_back(c1);
                queue.push_back(c2);
            }
            None => {
                let (c1, c2) = halve_edges(g, &region);
                queue.push_back(c1);
                queue.push_back(c2);
            }
        }
    }

    final_regions.sort_by(|a, b| (&a.vertices, &a.edges).cmp(&(&b.vertices, &b.edges)));
    let boundaries: Vec<BTreeSet<VertexId>> =
        final_regions.iter().map(|reg| region_boundary(g, reg)).collect();
    let boundary_total = boundaries.iter().map(BTreeSet::len).sum();
    let c_div_measured =
        measure_c_div(g.vertex_count(), r, final_regions.len(), boundary_total);
    Ok(RDivision { regions: final_regions, boundaries, r, c_div_measured })
}

/// Splits a disconnected region along a bipartition of its components.
/// Each edge follows its endpoints, so no vertex is replicated.
fn split_by_vertex_halves(
    region: &Region,
    v1: &BTreeSet<VertexId>,
    v2: &BTreeSet<VertexId>,
    g: &Graph,
) -> (Region, Region) {
    let pick = |vs: &BTreeSet<VertexId>| Region {
        vertices: vs.clone(),
        edges: region
            .edges
            .iter()
            .copied()
            .filter(|&i| vs.contains(&g.edges()[i].u))
            .collect(),
    };
    (pick(v1), pick(v2))
}

/// Builds both children for every separator candidate, keeps those that
/// shrink the region, and picks the best by: most children already within
/// r, then smallest larger child, then smallest separator, then
/// lexicographically least separator. None if no candidate makes progress.
fn best_separator_split(
    g: &Graph,
    region: &Region,
    candidates: Vec<(BTreeSet<VertexId>, BTreeSet<VertexId>, BTreeSet<VertexId>)>,
    r: usize,
) -> Option<(Region, Region)> {
    let current = region.vertices.len();
    candidates
        .into_iter()
        .filter_map(|(s, p1, p2)| {
            let (c1, c2) = separator_split(g, region, &s, &p1, &p2);
            if c1.vertices.len().max(c2.vertices.len()) < current {
                Some((s, c1, c2))
            } else {
                None
            }
        })
        .min_by_key(|(s, c1, c2)| {
            let finished = usize::from(c1.vertices.len() <= r)
                + usize::from(c2.vertices.len() <= r);
            let largest = c1.vertices.len().max(c2.vertices.len());
            (2 - finished, largest, s.len(), s.clone())
        })
        .map(|(_, c1, c2)| (c1, c2))
}

/// Splits a region along a separator: one child takes the edges touching
/// the first part plus the separator-internal edges, the other takes the
/// rest; separator vertices are replicated wherever their edges land.
fn separator_split(
    g: &Graph,
    region: &Region,
    s: &BTreeSet<VertexId>,
    p1: &BTreeSet<VertexId>,
    p2: &BTreeSet<VertexId>,
) -> (Region, Region) {
    let mut e1 = BTreeSet::new();
    let mut e2 = BTreeSet::new();
    for &i in &region.edges {
        let e = g.edges()[i];
        let touches_p1 = p1.contains(&e.u) || p1.contains(&e.v);
        let internal = s.contains(&e.u) && s.contains(&e.v);
        if touches_p1 || internal {
            e1.insert(i);
        } else {
            e2.insert(i);
        }
    }
    let endpoints = |es: &BTreeSet<usize>| -> BTreeSet<VertexId> {
        es.iter().flat_map(|&i| [g.edges()[i].u, g.edges()[i].v]).collect()
    };
    let mut v1: BTreeSet<VertexId> = p1.union(&endpoints(&e1)).copied().collect();
    let mut v2: BTreeSet<VertexId> = p2.union(&endpoints(&e2)).copied().collect();
    for &v in &region.vertices {
        if !v1.contains(&v) && !v2.contains(&v) {
            if v1.len() <= v2.len() {
                v1.insert(v);
            } else {
                v2.insert(v);
            }
        }
    }
    (Region { vertices: v1, edges: e1 }, Region { vertices: v2, edges: e2 })
}

/// Last-resort split when no separator shrinks the region: halve the edge
/// list (or the vertex list, for edgeless regions).
fn halve_edges(g: &Graph, region: &Region) -> (Region, Region) {
    if region.edges.is_empty() {
        let vs: Vec<VertexId> = region.vertices.iter().copied().collect();
        let (a, b) = vs.split_at(vs.len() / 2);
        return (
            Region { vertices: a.iter().copied().collect(), edges: BTreeSet::new() },
            Region { vertices: b.iter().copied().collect(), edges: BTreeSet::new() },
        );
    }
    let es: Vec<usize> = region.edges.iter().copied().collect();
    let (a, b) = es.split_at(es.len() / 2);
    let endpoints = |es: &[usize]| -> BTreeSet<VertexId> {
        es.iter().flat_map(|&i| [g.edges()[i].u, g.edges()[i].v]).collect()
    };
    let mut v1 = endpoints(a);
    let mut v2 = endpoints(b);
    let stranded: Vec<VertexId> = region
        .vertices
        .iter()
        .copied()
        .filter(|v| !v1.contains(v) && !v2.contains(v))
        .collect();
    let (s1, s2) = stranded.split_at(stranded.len() / 2);
    v1.extend(s1.iter().copied());
    v2.extend(s2.iter().copied());
    (
        Region { vertices: v1, edges: a.iter().copied().collect() },
        Region { vertices: v2, edges: b.iter().copied().collect() },
    )
}

/// Post-hoc verification of every division invariant. Violations are
/// collected as messages rather than errors so callers can report them.
#[derive(Clone, Debug)]
pub struct DivisionReport {
    pub violations: Vec<String>,
    pub region_count: usize,
    pub boundary_total: usize,
    pub max_region_vertices: usize,
    pub c_div_measured: f64,
}

impl DivisionReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_r_division(g: &Graph, div: &RDivision) -> DivisionReport {
    let mut violations = Vec::new();
    let mut edge_owner = vec![0usize; g.edge_count()];
    for region in &div.regions {
        for &i in &region.edges {
            if i >= g.edge_count() {
                violations.push(format!("edge index {i} out of range"));
                continue;
            }
            edge_owner[i] += 1;
            let e = g.edges()[i];
            if !region.vertices.contains(&e.u) || !region.vertices.contains(&e.v) {
                violations.push(format!("edge {i} has an endpoint outside its region"));
            }
        }
        if region.vertices.len() > div.r {
            violations.push(format!(
                "region with {} vertices exceeds the limit {}",
                region.vertices.len(),
                div.r
            ));
        }
        for &v in &region.vertices {
            if !g.contains_vertex(v) {
                violations.push(format!("region vertex {v} is not in the graph"));
            }
        }
    }
    for (i, &count) in edge_owner.iter().enumerate() {
        if count == 0 {
            violations.push(format!("edge {i} is in no region"));
        } else if count > 1 {
            violations.push(format!("edge {i} is in {count} regions"));
        }
    }
    let covered: BTreeSet<VertexId> =
        div.regions.iter().flat_map(|r| r.vertices.iter().copied()).collect();
    for v in g.vertices() {
        if !covered.contains(&v) {
            violations.push(format!("vertex {v} is in no region"));
        }
    }
    if div.boundaries.len() != div.regions.len() {
        violations.push("boundary list length differs from region count".into());
    } else {
        for (i, region) in div.regions.iter().enumerate() {
            if div.boundaries[i] != region_boundary(g, region) {
                violations.push(format!("stored boundary of region {i} is stale"));
            }
        }
    }
    let boundary_total = div.boundary_total();
    let c_div_measured =
        measure_c_div(g.vertex_count(), div.r, div.regions.len(), boundary_total);
    DivisionReport {
        violations,
        region_count: div.regions.len(),
        boundary_total,
        max_region_vertices: div.regions.iter().map(|r| r.vertices.len()).max().unwrap_or(0),
        c_div_measured,
    }
}

/// Per-region outcome of the audit.
#[derive(Clone, Debug)]
pub struct RegionAudit {
    /// The hybrid solution (local ∖ R) ∪ (reference ∩ R) ∪ boundary(R) is
    /// a feasible feedback vertex set of the host graph.
    pub hybrid_feasible: bool,
    /// |local ∩ R| <= |reference ∩ interior(R)| + |boundary(R)|.
    pub swap_inequality_holds: bool,
    pub local_in_region: usize,
    pub reference_in_interior: usize,
    pub boundary_size: usize,
}

/// Full audit report connecting a locally optimal solution to a reference
/// solution through the exchange graph's r-division.
#[derive(Clone, Debug)]
pub struct AuditReport {
    pub regions: Vec<RegionAudit>,
    /// |local| <= |reference| + 2 · (total boundary size).
    pub total_inequality_holds: bool,
    pub local_size: usize,
    pub reference_size: usize,
    pub boundary_total: usize,
    pub c_div_measured: f64,
    pub c_ex_measured: f64,
    /// The approximation guarantee these measured constants support, from
    /// inverting the neighborhood-size calculus; None when the measured
    /// constants are too large for radius c to certify anything.
    pub implied_epsilon: Option<f64>,
}

impl AuditReport {
    pub fn all_pass(&self) -> bool {
        self.total_inequality_holds
            && self
                .regions
                .iter()
                .all(|r| r.hybrid_feasible && r.swap_inequality_holds)
    }
}

/// Audits the swap argument on a concrete instance: builds the exchange
/// graph for (reference, local), divides it with r = c, and checks the
/// hybrid-solution feasibility, the per-region swap inequality, and the
/// summed inequality. Requires the local solution to admit no improving
/// move of radius c, since the inequalities lean on that.
pub fn audit_local_vs_global(
    g: &Graph,
    reference: &BTreeSet<VertexId>,
    local: &BTreeSet<VertexId>,
    c: usize,
) -> Result<AuditReport> {
    if c < 2 {
        return Err(Error::InvalidParams("audit radius must be at least 2".into()));
    }
    let solution = Solution::new(g, local.clone())?;
    if improve_once(g, &solution, c)?.is_some() {
        return Err(Error::InvalidParams(
            "candidate solution admits an improving move at this radius".into(),
        ));
    }
    let ex = build_exchange_graph(g, reference, local)?;
    let div = r_division(&ex.k, c)?;
    let check = verify_r_division(&ex.k, &div);
    if !check.ok() {
        return Err(Error::Construction(format!(
            "division verification failed: {}",
            check.violations.join("; ")
        )));
    }

    let mut regions = Vec::new();
    for (i, region) in div.regions.iter().enumerate() {
        let boundary = &div.boundaries[i];
        let interior = div.interior(i);
        let hybrid: BTreeSet<VertexId> = local
            .difference(&region.vertices)
            .copied()
            .chain(reference.intersection(&region.vertices).copied())
            .chain(boundary.iter().copied())
            .collect();
        let local_in_region = local.intersection(&region.vertices).count();
        let reference_in_interior = reference.intersection(&interior).count();
        regions.push(RegionAudit {
            hybrid_feasible: is_feasible(g, &hybrid)?,
            swap_inequality_holds: local_in_region <= reference_in_interior + boundary.len(),
            local_in_region,
            reference_in_interior,
            boundary_size: boundary.len(),
        });
    }
    let boundary_total = div.boundary_total();
    let c_ex_measured = ex.c_ex_measured();
    Ok(AuditReport {
        regions,
        total_inequality_holds: local.len() <= reference.len() + 2 * boundary_total,
        local_size: local.len(),
        reference_size: reference.len(),
        boundary_total,
        c_div_measured: div.c_div_measured,
        c_ex_measured,
        implied_epsilon: implied_epsilon(c, div.c_div_measured, c_ex_measured),
    })
}

/// Inverts the constant calculus: with neighborhood radius c = 1/δ² and
/// measured division and exchange constants, the certified approximation
/// factor is 1 + ε where δ = ε / (2 c_div c_ex (2 + ε)). Solving for ε
/// gives ε = 4δq / (1 − 2δq) with q = c_div · c_ex, defined only when the
/// denominator is positive.
pub fn implied_epsilon(c: usize, c_div: f64, c_ex: f64) -> Option<f64> {
    if c == 0 || c_div <= 0.0 || c_ex <= 0.0 {
        return None;
    }
    let delta = 1.0 / (c as f64).sqrt();
    let q = c_div * c_ex;
    let denominator = 1.0 - 2.0 * delta * q;
    if denominator > 0.0 {
        Some(4.0 * delta * q / denominator)
    } else {
        None
    }
}
