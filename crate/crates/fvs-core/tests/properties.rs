//! Randomized structural properties across the library: graph surgery,
//! serialization, oracle agreement, local-search certification, exchange
//! construction, division verification, and drawing subdivision.

use std::collections::BTreeSet;

use itertools::Itertools;
use proptest::prelude::*;

use fvs_core::division::{audit_local_vs_global, r_division, verify_r_division};
use fvs_core::exchange::{
    build_exchange_graph, contract_steiner_forest, gen_lemma_instance,
    verify_exchange_properties, verify_structure_lemma, LemmaOutcome,
};
use fvs_core::instances::{gen_drawn_random, lift_solution, planarize_1planar};
use fvs_core::io::{parse_instance, write_instance};
use fvs_core::oracle::{exact_fvs, exact_fvs_size};
use fvs_core::solver::{
    greedy_initial, improve_once, is_feasible, local_search_from, SearchParams, Solution,
};
use fvs_core::{Error, Graph, VertexId};

fn arb_multigraph() -> impl Strategy<Value = Graph> {
    (1u32..=8).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..=12)
            .prop_map(move |pairs| Graph::build(n, &pairs).unwrap())
    })
}

fn arb_simple_graph() -> impl Strategy<Value = Graph> {
    (3u32..=9).prop_flat_map(|n| {
        let pairs: Vec<(u32, u32)> = (0..n).tuple_combinations().collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |mask| {
            let chosen: Vec<(u32, u32)> = pairs
                .iter()
                .zip(&mask)
                .filter(|(_, &keep)| keep)
                .map(|(&p, _)| p)
                .collect();
            Graph::build(n, &chosen).unwrap()
        })
    })
}

fn graph_and_vertex_subset() -> impl Strategy<Value = (Graph, BTreeSet<VertexId>)> {
    arb_multigraph().prop_flat_map(|g| {
        let vs: Vec<VertexId> = g.vertices().collect();
        let len = vs.len();
        proptest::sample::subsequence(vs, 0..=len)
            .prop_map(move |sub| (g.clone(), sub.into_iter().collect()))
    })
}

/// A forest (each vertex optionally hangs off an earlier one) plus a
/// vertex subset to delete. Building acyclic graphs directly avoids
/// rejection-sampling them out of arbitrary multigraphs.
fn arb_forest_and_subset() -> impl Strategy<Value = (Graph, BTreeSet<VertexId>)> {
    (1u32..=10).prop_flat_map(|n| {
        let attachments = proptest::collection::vec((any::<u32>(), any::<bool>()), (n - 1) as usize);
        let subset = proptest::sample::subsequence((0..n).collect::<Vec<u32>>(), 0..=(n as usize));
        (attachments, subset).prop_map(move |(attachments, del)| {
            let edges: Vec<(u32, u32)> = attachments
                .iter()
                .enumerate()
                .filter(|(_, (_, attach))| *attach)
                .map(|(i, (pick, _))| {
                    let child = i as u32 + 1;
                    (pick % child, child)
                })
                .collect();
            (Graph::build(n, &edges).unwrap(), del.into_iter().collect())
        })
    })
}

fn brute_force_min_fvs(g: &Graph) -> BTreeSet<VertexId> {
    let vs: Vec<VertexId> = g.vertices().collect();
    for size in 0..=vs.len() {
        for combo in vs.iter().copied().combinations(size) {
            let s: BTreeSet<VertexId> = combo.into_iter().collect();
            if is_feasible(g, &s).unwrap() {
                return s;
            }
        }
    }
    unreachable!("removing every vertex leaves an acyclic graph");
}

proptest! {
    #[test]
    fn simplify_is_idempotent(g in arb_multigraph()) {
        let once = g.simplify();
        prop_assert_eq!(&once.simplify(), &once);
    }

    #[test]
    fn deleting_vertices_never_creates_cycles((g, del) in arb_forest_and_subset()) {
        prop_assert!(g.is_acyclic());
        prop_assert!(g.delete_vertices(&del).unwrap().is_acyclic());
    }

    #[test]
    fn contraction_preserves_acyclicity_status(g in arb_multigraph()) {
        for (i, e) in g.edges().iter().enumerate() {
            if e.is_loop() {
                continue;
            }
            let contracted = g.contract_edge(i).unwrap();
            prop_assert_eq!(contracted.is_acyclic(), g.is_acyclic());
        }
    }

    #[test]
    fn instance_serialization_round_trips(
        (g, sol) in graph_and_vertex_subset(),
        with_subset in any::<bool>(),
    ) {
        let subset = with_subset.then(|| sol.iter().copied().take(2).collect::<BTreeSet<_>>());
        let text = write_instance(&g, &[sol.clone()], subset.as_ref()).unwrap();
        let parsed = parse_instance(&text).unwrap();
        prop_assert_eq!(parsed.graph, g);
        prop_assert_eq!(parsed.solutions, vec![sol]);
        prop_assert_eq!(parsed.subset, subset);
    }

    #[test]
    fn division_output_always_verifies(g in arb_multigraph(), r in 2usize..=5) {
        let div = r_division(&g, r).unwrap();
        let report = verify_r_division(&g, &div);
        prop_assert!(report.ok(), "violations: {:?}", report.violations);
        prop_assert!(report.max_region_vertices <= r);
    }

    #[test]
    fn lemma_instances_satisfy_the_two_sided_bound(seed in any::<u64>()) {
        let (g, a, b) = gen_lemma_instance(seed, 4000).unwrap();
        match verify_structure_lemma(&g, &a, &b, 4000).unwrap() {
            LemmaOutcome::Holds { n, bound } => prop_assert!(n <= bound),
            LemmaOutcome::PremiseViolated(which) => {
                prop_assert!(false, "generator emitted a premise violation: {which}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_search_agrees_with_brute_force(g in arb_multigraph()) {
        prop_assume!(g.vertex_count() <= 7);
        let brute = brute_force_min_fvs(&g);
        let exact = exact_fvs(&g, g.vertex_count()).unwrap();
        prop_assert_eq!(exact, brute);
    }

    #[test]
    fn improvement_is_monotone_in_radius(g in arb_multigraph(), seed in any::<u64>()) {
        let start = greedy_initial(&g, Some(seed));
        for c in 1usize..=2 {
            let narrow = improve_once(&g, &start, c).unwrap();
            let wide = improve_once(&g, &start, c + 1).unwrap();
            if narrow.is_some() {
                prop_assert!(wide.is_some());
            }
        }
    }

    #[test]
    fn search_result_admits_no_further_move(
        g in arb_multigraph(),
        c in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let start = greedy_initial(&g, Some(seed));
        let (found, _) = local_search_from(&g, start, &SearchParams::new(c)).unwrap();
        prop_assert!(found.feasible);
        prop_assert!(improve_once(&g, &found, c).unwrap().is_none());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exchange_construction_covers_every_cycle(g in arb_simple_graph(), seed in any::<u64>()) {
        let optimal = exact_fvs(&g, g.vertex_count()).unwrap();
        let start = greedy_initial(&g, Some(seed));
        let (local, _) = local_search_from(&g, start, &SearchParams::new(1)).unwrap();
        let ex = build_exchange_graph(&g, &optimal, &local.members).unwrap();
        let report = match verify_exchange_properties(&g, &ex, 20_000) {
            Err(Error::CycleBudget(_)) => return Ok(()),
            other => other.unwrap(),
        };
        prop_assert!(report.all_covered(), "violations: {:?}", report.violations);
        prop_assert_eq!(
            report.covered_by_shared_vertex
                + report.covered_by_direct_edge
                + report.covered_by_matching_subcycle,
            report.cycles_checked
        );
        contract_steiner_forest(&ex).unwrap();
    }

    #[test]
    fn audited_inequalities_hold_for_certified_solutions(
        g in arb_simple_graph(),
        c in 2usize..=3,
        seed in any::<u64>(),
    ) {
        let reference = exact_fvs(&g, g.vertex_count()).unwrap();
        let start = greedy_initial(&g, Some(seed));
        let (local, _) = local_search_from(&g, start, &SearchParams::new(c)).unwrap();
        let report = audit_local_vs_global(&g, &reference, &local.members, c).unwrap();
        prop_assert!(report.all_pass());
        prop_assert!(report.local_size <= report.reference_size + 2 * report.boundary_total);
    }

    #[test]
    fn feasibility_is_stable_under_solution_reconstruction(
        (g, members) in graph_and_vertex_subset(),
    ) {
        let direct = is_feasible(&g, &members).unwrap();
        let solution = Solution::new(&g, members).unwrap();
        prop_assert_eq!(solution.feasible, direct);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn planarization_preserves_the_optimum(
        n in 4u32..=6,
        m in 3usize..=8,
        seed in any::<u64>(),
    ) {
        let edges = m.min((n as usize) * (n as usize - 1) / 2);
        let dg = match gen_drawn_random(n, edges, 40, seed) {
            Ok(dg) => dg,
            Err(Error::Degenerate(_)) => return Ok(()),
            Err(other) => panic!("unexpected generator failure: {other}"),
        };
        let out = planarize_1planar(&dg).unwrap();
        prop_assert!(out.drawing.crossing_counts().values().all(|&c| c <= 1));
        let g_opt = exact_fvs_size(&dg.graph, dg.graph.vertex_count()).unwrap();
        let h = &out.drawing.graph;
        let h_solution = exact_fvs(h, h.vertex_count()).unwrap();
        prop_assert_eq!(h_solution.len(), g_opt);
        let lifted = lift_solution(&h_solution, &out.map);
        prop_assert!(lifted.len() <= h_solution.len());
        prop_assert!(is_feasible(&dg.graph, &lifted).unwrap());
    }
}
