//! Immutable undirected multigraph with stable vertex ids.
//!
//! Self-loops and parallel edges are first-class: a self-loop contributes 2
//! to its endpoint's degree, and contraction keeps whatever loops/parallel
//! edges it creates. Edge indices are positions in the owning graph's edge
//! list; any operation that returns a new graph renumbers them.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};

pub type VertexId = u32;

/// Unordered endpoint pair. Stored as given (not normalized) so that a
/// parsed edge list round-trips byte for byte.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        Edge { u, v }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// Normalized endpoint pair, for multiset comparisons.
    pub fn key(&self) -> (VertexId, VertexId) {
        (self.u.min(self.v), self.u.max(self.v))
    }

    /// The endpoint that is not `x` (either one for a loop).
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// A simple cycle of a specific graph: `edges[i]` joins `vertices[i]` and
/// `vertices[(i+1) % len]`. Length-1 cycles are self-loops, length-2 cycles
/// are parallel pairs. Cycles are identified by their vertex sequence; when
/// parallel edges offer a choice, the smallest edge index is recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<usize>,
}

impl Cycle {
    /// Canonical orientation: smallest vertex first, then the direction
    /// whose second vertex is smaller. Length <= 2 is already canonical.
    pub(crate) fn canonicalize(mut vertices: Vec<VertexId>, mut edges: Vec<usize>) -> Cycle {
        let n = vertices.len();
        if n >= 3 {
            let start = (0..n).min_by_key(|&i| vertices[i]).unwrap();
            let forward = vertices[(start + 1) % n] <= vertices[(start + n - 1) % n];
            if forward {
                vertices.rotate_left(start);
                edges.rotate_left(start);
            } else {
                // Reversed walk: vertices[start], vertices[start-1], ...
                // edge j of the new walk joins old vertices start-j, start-j-1,
                // which is old edge (start - j - 1) mod n.
                let vs: Vec<_> = (0..n).map(|j| vertices[(start + n - j) % n]).collect();
                let es: Vec<_> = (0..n).map(|j| edges[(start + 2 * n - j - 1) % n]).collect();
                vertices = vs;
                edges = es;
            }
        }
        Cycle { vertices, edges }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.vertices.iter().copied().collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    vertices: BTreeSet<VertexId>,
    edges: Vec<Edge>,
    /// Incident edge indices per vertex; a self-loop index appears twice so
    /// that `degree(v) == adj[v].len()`.
    adj: BTreeMap<VertexId, Vec<usize>>,
}

impl Graph {
    /// Graph on vertices `0..n` with the given edge list.
    pub fn build(n: u32, edges: &[(VertexId, VertexId)]) -> Result<Graph> {
        let vertices: BTreeSet<VertexId> = (0..n).collect();
        let edges: Vec<Edge> = edges.iter().map(|&(u, v)| Edge::new(u, v)).collect();
        Graph::from_parts(vertices, edges)
    }

    /// Graph from an explicit vertex set; every endpoint must be a member.
    pub fn from_parts(vertices: BTreeSet<VertexId>, edges: Vec<Edge>) -> Result<Graph> {
        for e in &edges {
            for x in [e.u, e.v] {
                if !vertices.contains(&x) {
                    return Err(Error::UnknownVertex(x));
                }
            }
        }
        let mut adj: BTreeMap<VertexId, Vec<usize>> =
            vertices.iter().map(|&v| (v, Vec::new())).collect();
        for (i, e) in edges.iter().enumerate() {
            adj.get_mut(&e.u).unwrap().push(i);
            adj.get_mut(&e.v).unwrap().push(i);
        }
        Ok(Graph { vertices, edges, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> Result<Edge> {
        self.edges.get(idx).copied().ok_or(Error::BadEdgeIndex(idx))
    }

    /// Degree with self-loops counting twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, |l| l.len())
    }

    /// Incident edge indices (self-loop indices listed twice).
    pub fn incident(&self, v: VertexId) -> &[usize] {
        self.adj.get(&v).map_or(&[], |l| l.as_slice())
    }

    /// `(edge index, other endpoint)` pairs; a self-loop yields `v` itself
    /// twice. Deterministic order (insertion order of the edge list).
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (usize, VertexId)> + '_ {
        self.incident(v).iter().map(move |&i| (i, self.edges[i].other(v)))
    }

    pub fn has_self_loop(&self, v: VertexId) -> bool {
        self.incident(v).iter().any(|&i| self.edges[i].is_loop())
    }

    /// New graph without `drop` and without their incident edges.
    pub fn delete_vertices(&self, drop: &BTreeSet<VertexId>) -> Result<Graph> {
        for &v in drop {
            if !self.vertices.contains(&v) {
                return Err(Error::UnknownVertex(v));
            }
        }
        let vertices: BTreeSet<VertexId> =
            self.vertices.iter().copied().filter(|v| !drop.contains(v)).collect();
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .copied()
            .filter(|e| !drop.contains(&e.u) && !drop.contains(&e.v))
            .collect();
        Graph::from_parts(vertices, edges)
    }

    pub fn delete_vertex(&self, v: VertexId) -> Result<Graph> {
        self.delete_vertices(&BTreeSet::from([v]))
    }

    /// New graph without the edges at the given indices (vertices stay).
    pub fn delete_edges(&self, drop: &BTreeSet<usize>) -> Result<Graph> {
        if let Some(&bad) = drop.iter().find(|&&i| i >= self.edges.len()) {
            return Err(Error::BadEdgeIndex(bad));
        }
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, e)| *e)
            .collect();
        Graph::from_parts(self.vertices.clone(), edges)
    }

    /// Contract edge `idx`, keeping the smaller endpoint id.
    pub fn contract_edge(&self, idx: usize) -> Result<Graph> {
        let e = self.edge(idx)?;
        self.contract_edge_into(idx, e.u.min(e.v))
    }

    /// Contract edge `idx` into `survivor` (one of its endpoints). All other
    /// edges are re-attached; parallel edges and self-loops this creates are
    /// kept. Contracting a self-loop is an error.
    pub fn contract_edge_into(&self, idx: usize, survivor: VertexId) -> Result<Graph> {
        let e = self.edge(idx)?;
        if e.is_loop() {
            return Err(Error::ContractLoop);
        }
        if survivor != e.u && survivor != e.v {
            return Err(Error::UnknownVertex(survivor));
        }
        let gone = e.other(survivor);
        let vertices: BTreeSet<VertexId> =
            self.vertices.iter().copied().filter(|&v| v != gone).collect();
        let remap = |x: VertexId| if x == gone { survivor } else { x };
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, e)| Edge::new(remap(e.u), remap(e.v)))
            .collect();
        Graph::from_parts(vertices, edges)
    }

    /// Drop self-loops and deduplicate parallel edges (keeping the first
    /// occurrence of each endpoint pair). Vertex set unchanged.
    pub fn simplify(&self) -> Graph {
        let mut seen: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .copied()
            .filter(|e| !e.is_loop() && seen.insert(e.key()))
            .collect();
        Graph::from_parts(self.vertices.clone(), edges).expect("vertex set unchanged")
    }

    /// Subgraph induced by `keep`: those vertices plus every edge with both
    /// endpoints in `keep`.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> Result<Graph> {
        for &v in keep {
            if !self.vertices.contains(&v) {
                return Err(Error::UnknownVertex(v));
            }
        }
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .copied()
            .filter(|e| keep.contains(&e.u) && keep.contains(&e.v))
            .collect();
        Graph::from_parts(keep.clone(), edges)
    }

    /// Acyclicity for multigraphs: a self-loop or a parallel pair counts as
    /// a cycle. Union-find over the edge list.
    pub fn is_acyclic(&self) -> bool {
        let index: BTreeMap<VertexId, usize> =
            self.vertices.iter().copied().enumerate().map(|(i, v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            if e.is_loop() {
                return false;
            }
            let (ru, rv) = (find(&mut parent, index[&e.u]), find(&mut parent, index[&e.v]));
            if ru == rv {
                return false;
            }
            parent[ru] = rv;
        }
        true
    }

    /// Connected components as vertex sets, ordered by smallest member.
    /// Isolated vertices form singleton components; the empty graph has none.
    pub fn connected_components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut out = Vec::new();
        for &start in &self.vertices {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(v) = queue.pop_front() {
                comp.insert(v);
                for (_, w) in self.neighbors(v) {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Shortest cycle, or None if acyclic. Deterministic: self-loops beat
    /// parallel pairs beat longer cycles; among the scan's equal-length
    /// candidates the lexicographically least canonical sequence wins.
    pub fn find_shortest_cycle(&self) -> Option<Cycle> {
        // Length 1: self-loops, smallest vertex first.
        for &v in &self.vertices {
            let mut loops: Vec<usize> =
                self.incident(v).iter().copied().filter(|&i| self.edges[i].is_loop()).collect();
            if !loops.is_empty() {
                loops.sort_unstable();
                loops.dedup();
                return Some(Cycle { vertices: vec![v], edges: vec![loops[0]] });
            }
        }
        // Length 2: parallel pairs, smallest (u, v) first.
        let mut by_pair: BTreeMap<(VertexId, VertexId), Vec<usize>> = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            by_pair.entry(e.key()).or_default().push(i);
        }
        for (&(u, v), idxs) in &by_pair {
            if idxs.len() >= 2 {
                return Some(Cycle { vertices: vec![u, v], edges: vec![idxs[0], idxs[1]] });
            }
        }
        // Length >= 3: BFS from every root; a non-tree edge whose two root
        // paths share only the root closes a simple cycle, and scanning all
        // roots guarantees the minimum length is realized by one of them.
        let mut best: Option<Cycle> = None;
        for &root in &self.vertices {
            let (dist, parent_edge) = self.bfs_tree(root);
            for (i, e) in self.edges.iter().enumerate() {
                if e.is_loop() || parent_edge.get(&e.u) == Some(&Some(i))
                    || parent_edge.get(&e.v) == Some(&Some(i))
                {
                    continue;
                }
                let (Some(&du), Some(&dv)) = (dist.get(&e.u), dist.get(&e.v)) else {
                    continue;
                };
                let len = du + dv + 1;
                if let Some(b) = &best {
                    if len > b.len() {
                        continue;
                    }
                }
                let path_u = walk_up(&parent_edge, &self.edges, e.u, root);
                let path_v = walk_up(&parent_edge, &self.edges, e.v, root);
                if !internally_disjoint(&path_u, &path_v) {
                    continue;
                }
                // root .. e.u, then the closing edge, then e.v .. back.
                let mut vs: Vec<VertexId> = path_u.iter().map(|&(v, _)| v).collect();
                let mut es: Vec<usize> = path_u.iter().skip(1).map(|&(_, e)| e.unwrap()).collect();
                es.push(i);
                for &(v, pe) in path_v.iter().rev() {
                    if v == root {
                        break;
                    }
                    vs.push(v);
                    es.push(pe.unwrap());
                }
                debug_assert_eq!(vs.len(), es.len());
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

    /// BFS distances and parent edges from `root`, visiting sorted
    /// adjacency for determinism. Loops and already-seen vertices skipped.
    pub(crate) fn bfs_tree(
        &self,
        root: VertexId,
    ) -> (BTreeMap<VertexId, usize>, BTreeMap<VertexId, Option<usize>>) {
        let mut dist = BTreeMap::from([(root, 0usize)]);
        let mut parent_edge: BTreeMap<VertexId, Option<usize>> = BTreeMap::from([(root, None)]);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            let mut next: Vec<(VertexId, usize)> = self
                .neighbors(v)
                .filter(|&(_, w)| w != v)
                .map(|(i, w)| (w, i))
                .collect();
            next.sort_unstable();
            for (w, i) in next {
                if !dist.contains_key(&w) {
                    dist.insert(w, d + 1);
                    parent_edge.insert(w, Some(i));
                    queue.push_back(w);
                }
            }
        }
        (dist, parent_edge)
    }

    /// All simple cycles, canonically oriented, sorted by (length, vertex
    /// sequence). Cycles are identified by vertex sequence: one 1-cycle per
    /// looped vertex, one 2-cycle per parallel pair, and for longer cycles
    /// the smallest edge index joins each consecutive pair. Errors when the
    /// count exceeds `max_count`.
    pub fn enumerate_cycles(&self, max_count: usize) -> Result<Vec<Cycle>> {
        let mut out: Vec<Cycle> = Vec::new();
        let push = |c: Cycle, out: &mut Vec<Cycle>| -> Result<()> {
            out.push(c);
            if out.len() > max_count {
                return Err(Error::CycleBudget(max_count));
            }
            Ok(())
        };
        for &v in &self.vertices {
            if let Some(&i) =
                self.incident(v).iter().find(|&&i| self.edges[i].is_loop())
            {
                push(Cycle { vertices: vec![v], edges: vec![i] }, &mut out)?;
            }
        }
        let mut by_pair: BTreeMap<(VertexId, VertexId), Vec<usize>> = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            if !e.is_loop() {
                by_pair.entry(e.key()).or_default().push(i);
            }
        }
        for (&(u, v), idxs) in &by_pair {
            if idxs.len() >= 2 {
                push(Cycle { vertices: vec![u, v], edges: vec![idxs[0], idxs[1]] }, &mut out)?;
            }
        }
        // Cycles of length >= 3: DFS from each start vertex using only
        // larger vertices, reporting each cycle in one direction only.
        let simple_adj: BTreeMap<VertexId, Vec<(VertexId, usize)>> = self
            .vertices
            .iter()
            .map(|&v| {
                let mut ns: Vec<(VertexId, usize)> = by_pair
                    .iter()
                    .filter(|((a, b), _)| *a == v || *b == v)
                    .map(|(&(a, b), idxs)| (if a == v { b } else { a }, idxs[0]))
                    .collect();
                ns.sort_unstable();
                (v, ns)
            })
            .collect();
        for &start in &self.vertices {
            let mut path: Vec<(VertexId, usize)> = vec![(start, usize::MAX)];
            let mut on_path: BTreeSet<VertexId> = BTreeSet::from([start]);
            self.cycle_dfs(start, start, &simple_adj, &mut path, &mut on_path, &mut out, max_count)?;
        }
        out.sort_by(|a, b| (a.len(), &a.vertices).cmp(&(b.len(), &b.vertices)));
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn cycle_dfs(
        &self,
        start: VertexId,
        v: VertexId,
        adj: &BTreeMap<VertexId, Vec<(VertexId, usize)>>,
        path: &mut Vec<(VertexId, usize)>,
        on_path: &mut BTreeSet<VertexId>,
        out: &mut Vec<Cycle>,
        max_count: usize,
    ) -> Result<()> {
        for &(w, eidx) in &adj[&v] {
            if w == start {
                if path.len() >= 3 && path[1].0 < path[path.len() - 1].0 {
                    let vertices: Vec<VertexId> = path.iter().map(|&(x, _)| x).collect();
                    let mut edges: Vec<usize> = path.iter().skip(1).map(|&(_, e)| e).collect();
                    edges.insert(0, eidx); // placeholder ordering fixed below
                    // Align: edge i joins vertices[i], vertices[i+1]; the
                    // closing edge (v back to start) goes last.
                    edges.rotate_left(1);
                    out.push(Cycle::canonicalize(vertices, edges));
                    if out.len() > max_count {
                        return Err(Error::CycleBudget(max_count));
                    }
                }
            } else if w > start && !on_path.contains(&w) {
                path.push((w, eidx));
                on_path.insert(w);
                self.cycle_dfs(start, w, adj, path, on_path, out, max_count)?;
                path.pop();
                on_path.remove(&w);
            }
        }
        Ok(())
    }
}

/// Path `root -> x` as (vertex, edge-into-vertex) pairs, root first.
pub(crate) fn walk_up(
    parent_edge: &BTreeMap<VertexId, Option<usize>>,
    edges: &[Edge],
    mut x: VertexId,
    root: VertexId,
) -> Vec<(VertexId, Option<usize>)> {
    let mut path = vec![];
    loop {
        let pe = parent_edge[&x];
        path.push((x, pe));
        if x == root {
            break;
        }
        x = edges[pe.expect("non-root has a parent edge")].other(x);
    }
    path.reverse();
    path
}

/// True when the two root paths share only their first vertex (the root).
fn internally_disjoint(
    a: &[(VertexId, Option<usize>)],
    b: &[(VertexId, Option<usize>)],
) -> bool {
    let sa: BTreeSet<VertexId> = a.iter().skip(1).map(|&(v, _)| v).collect();
    b.iter().skip(1).all(|&(v, _)| !sa.contains(&v))
}
