//! Acceptance gate: eight end-to-end checks over the whole library, one
//! test per criterion. Each test prints a single `criterion N: PASS` line
//! with its measurements; a failure panics with the offending instance.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use itertools::Itertools;

use fvs_core::division::{audit_local_vs_global, r_division, verify_r_division};
use fvs_core::exchange::{
    build_exchange_graph, contract_steiner_forest, gen_lemma_instance, verify_exchange_properties,
    verify_structure_lemma, LemmaOutcome,
};
use fvs_core::instances::{
    default_gadget_cells, gen_diagonal_grid, gen_drawn_random, gen_grid, gen_k3n,
    gen_partial_ktree, lift_solution, planarize_1planar, verify_local_optimality, DrawnGraph,
    GadgetVariant,
};
use fvs_core::oracle::{exact_fvs, exact_fvs_size, exact_min_size};
use fvs_core::solver::{improve_once, is_feasible, local_search, SearchParams};
use fvs_core::{Graph, VertexId};

const CYCLE_BUDGET: usize = 5_000_000;

/// Independent reference oracle: try every vertex subset in ascending size
/// (lexicographic within a size) and return the first feedback vertex set.
fn brute_force_min_fvs(g: &Graph) -> BTreeSet<VertexId> {
    let vertices: Vec<VertexId> = g.vertices().collect();
    for size in 0..=vertices.len() {
        for combo in vertices.iter().copied().combinations(size) {
            let set: BTreeSet<VertexId> = combo.into_iter().collect();
            if g.delete_vertices(&set).unwrap().is_acyclic() {
                return set;
            }
        }
    }
    unreachable!("deleting every vertex leaves an acyclic graph");
}

fn search(g: &Graph, c: usize, seed: u64) -> (BTreeSet<VertexId>, bool) {
    let params = SearchParams { c, max_iterations: None, seed: Some(seed) };
    let (solution, report) = local_search(g, &params).unwrap();
    assert!(solution.feasible);
    (solution.members, report.certified_local_opt)
}

#[test]
fn criterion_1_exact_oracle_matches_subset_enumeration() {
    let start = Instant::now();
    let mut instances: Vec<(String, Graph)> = Vec::new();
    for (r, c) in [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 3), (3, 4)] {
        instances.push((format!("grid-{r}x{c}"), gen_grid(r, c).unwrap()));
    }
    for n in 1..=9 {
        instances.push((format!("k3n-{n}"), gen_k3n(n).unwrap()));
    }
    let mut seed = 0u64;
    'fill: loop {
        for k in [1u32, 2, 3] {
            for n in [6u32, 8, 10, 12] {
                for keep in [0.5, 0.8, 1.0] {
                    if instances.len() == 200 {
                        break 'fill;
                    }
                    let g = gen_partial_ktree(n, k, keep, seed).unwrap();
                    instances.push((format!("ktree-k{k}-n{n}-p{keep}-s{seed}"), g));
                }
            }
        }
        seed += 1;
    }
    assert_eq!(instances.len(), 200);

    for (name, g) in &instances {
        assert!(g.vertex_count() <= 12, "{name} is too large");
        let expected = brute_force_min_fvs(g);
        let got = exact_fvs(g, g.vertex_count()).unwrap();
        assert_eq!(&got, &expected, "oracle disagrees with enumeration on {name}");
    }

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    println!(
        "criterion 1: PASS - exact oracle equals subset enumeration on {} instances in {:.1?}",
        instances.len(),
        elapsed
    );
}

#[test]
fn criterion_2_search_is_sound_and_near_optimal_at_radius_three() {
    let start = Instant::now();
    let mut instances: Vec<(String, Graph)> = Vec::new();
    for r in 1..=5u32 {
        for c in r..=5u32 {
            instances.push((format!("grid-{r}x{c}"), gen_grid(r, c).unwrap()));
        }
    }
    for n in [6u32, 8, 10, 12, 14, 16, 18, 20, 22] {
        let g = gen_partial_ktree(n, 2, 1.0, 7).unwrap();
        instances.push((format!("2tree-n{n}"), g));
    }
    for n in [10u32, 16, 22] {
        for seed in [1u64, 2] {
            let g = gen_partial_ktree(n, 2, 0.75, seed).unwrap();
            instances.push((format!("2tree-n{n}-p0.75-s{seed}"), g));
        }
    }

    println!("instance                 |L| |O| ratio");
    let mut worst = 0.0f64;
    for (name, g) in &instances {
        let params = SearchParams { c: 3, max_iterations: None, seed: Some(0) };
        let (solution, report) = local_search(g, &params).unwrap();
        assert!(solution.feasible, "{name}: infeasible output");
        assert!(report.certified_local_opt, "{name}: not certified");
        assert!(
            improve_once(g, &solution, 3).unwrap().is_none(),
            "{name}: an improving move survived the search"
        );

        let opt = exact_fvs_size(g, g.vertex_count()).unwrap();
        let local = solution.members.len();
        if opt == 0 {
            assert_eq!(local, 0, "{name}: nonempty output on an acyclic instance");
            println!("{name:<24} {local:>3} {opt:>3}  -");
            continue;
        }
        assert!(2 * local <= 3 * opt, "{name}: ratio {local}/{opt} above 1.5");
        let ratio = local as f64 / opt as f64;
        worst = worst.max(ratio);
        println!("{name:<24} {local:>3} {opt:>3}  {ratio:.3}");
    }

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    println!(
        "criterion 2: PASS - {} searches feasible, certified, worst ratio {:.3} <= 1.5 in {:.1?}",
        instances.len(),
        worst,
        elapsed
    );
}

#[test]
fn criterion_3_exchange_graph_checks_hold_on_every_run() {
    let start = Instant::now();
    let mut graphs: Vec<(String, Graph)> = Vec::new();
    for (r, c) in
        [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (2, 7), (2, 8), (3, 3), (3, 4), (3, 5), (4, 4)]
    {
        graphs.push((format!("grid-{r}x{c}"), gen_grid(r, c).unwrap()));
    }
    for n in 2..=13u32 {
        graphs.push((format!("k3n-{n}"), gen_k3n(n).unwrap()));
    }
    for k in [1u32, 2] {
        for n in [8u32, 10, 12, 14, 16] {
            for keep in [0.6, 0.9] {
                let seed = 40 + u64::from(n) + 10 * u64::from(k);
                let g = gen_partial_ktree(n, k, keep, seed).unwrap();
                graphs.push((format!("ktree-k{k}-n{n}-p{keep}"), g));
            }
        }
    }
    for n in [8u32, 10, 12, 14, 16] {
        let g = gen_partial_ktree(n, 3, 0.6, 77 + u64::from(n)).unwrap();
        graphs.push((format!("ktree-k3-n{n}-p0.6"), g));
    }

    let mut runs = 0usize;
    let mut with_steiner = 0usize;
    'runs: for (c, seed) in [(1usize, 0u64), (2, 1), (3, 2)] {
        for (name, g) in &graphs {
            if runs == 100 {
                break 'runs;
            }
            assert!(g.vertex_count() <= 16, "{name} is too large");
            let optimal = exact_fvs(g, g.vertex_count()).unwrap();
            let (local, certified) = search(g, c, seed);
            assert!(certified, "{name}: search not certified");

            let ex = build_exchange_graph(g, &optimal, &local).unwrap();
            for v in ex.steiner_vertices() {
                assert!(
                    ex.k.degree(v) >= 3,
                    "{name}: junction vertex {v} has degree {}",
                    ex.k.degree(v)
                );
            }
            let report = verify_exchange_properties(g, &ex, CYCLE_BUDGET).unwrap();
            assert!(
                report.all_covered(),
                "{name}: {} uncovered cycles",
                report.violations.len()
            );
            let stats = contract_steiner_forest(&ex).unwrap();
            for (tree, attach) in &stats.trees {
                assert!(tree.len() <= *attach, "{name}: tree larger than its attachment degree");
            }
            if stats.steiner_count > 0 {
                with_steiner += 1;
            }
            runs += 1;
        }
    }
    assert_eq!(runs, 100);

    let elapsed = start.elapsed();
    println!(
        "criterion 3: PASS - 100 exchange graphs verified ({with_steiner} with junction trees) in {:.1?}",
        elapsed
    );
}

#[test]
fn criterion_4_counting_bound_holds_on_sampled_instances() {
    let start = Instant::now();
    for seed in 0..500u64 {
        let (g, a, b) = gen_lemma_instance(seed, 20_000).unwrap();
        assert!(g.vertex_count() <= 20, "seed {seed}: instance too large");
        match verify_structure_lemma(&g, &a, &b, 20_000).unwrap() {
            LemmaOutcome::Holds { n, bound } => {
                assert!(n <= bound, "seed {seed}: bound check out of sync")
            }
            LemmaOutcome::PremiseViolated(why) => {
                panic!("seed {seed}: sampled instance lost premise: {why}")
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!("criterion 4: PASS - two-sided bound held on 500 sampled instances in {:.1?}", elapsed);
}

#[test]
fn criterion_5_region_swap_inequalities_hold_for_certified_solutions() {
    let start = Instant::now();
    let mut runs: Vec<(String, Graph, usize)> = Vec::new();
    let grid_shapes = [(3, 3), (3, 4), (3, 5), (4, 4), (4, 5), (4, 6), (5, 5), (2, 9)];
    for (i, (r, c)) in grid_shapes.iter().enumerate() {
        let radius = 2 + (i % 3);
        runs.push((format!("grid-{r}x{c}"), gen_grid(*r, *c).unwrap(), radius));
    }
    for (i, n) in [10u32, 14, 18, 22, 26, 30].iter().enumerate() {
        let g = gen_partial_ktree(*n, 2, 1.0, u64::from(*n)).unwrap();
        runs.push((format!("2tree-n{n}"), g, 2 + ((i + 1) % 3)));
    }
    for (i, n) in [12u32, 16, 20, 24, 28, 30].iter().enumerate() {
        let g = gen_partial_ktree(*n, 2, 0.8, u64::from(*n) + 5).unwrap();
        runs.push((format!("2tree-n{n}-p0.8"), g, 2 + ((i + 2) % 3)));
    }
    assert_eq!(runs.len(), 20);

    for (name, g, c) in &runs {
        assert!(g.vertex_count() <= 30, "{name} is too large");
        let optimal = exact_fvs(g, g.vertex_count()).unwrap();
        let (local, certified) = search(g, *c, 0);
        assert!(certified, "{name}: search not certified at radius {c}");

        let audit = audit_local_vs_global(g, &optimal, &local, *c).unwrap();
        for (i, region) in audit.regions.iter().enumerate() {
            assert!(region.hybrid_feasible, "{name}: hybrid solution of region {i} infeasible");
            assert!(region.swap_inequality_holds, "{name}: swap inequality fails in region {i}");
        }
        assert!(audit.total_inequality_holds, "{name}: total inequality fails");
        assert!(audit.all_pass(), "{name}: audit failed");
    }

    let elapsed = start.elapsed();
    println!("criterion 5: PASS - 20 audits at radii 2..4 with no exceptions in {:.1?}", elapsed);
}

#[test]
fn criterion_6_divisions_verify_and_measurements_are_reproducible() {
    let start = Instant::now();
    let families: Vec<(&str, Vec<(String, Graph)>)> = vec![
        (
            "grid",
            [(3u32, 3u32), (4, 4), (5, 5), (4, 6)]
                .iter()
                .map(|(r, c)| (format!("grid-{r}x{c}"), gen_grid(*r, *c).unwrap()))
                .collect(),
        ),
        (
            "k3n",
            [5u32, 9, 13]
                .iter()
                .map(|n| (format!("k3n-{n}"), gen_k3n(*n).unwrap()))
                .collect(),
        ),
        (
            "partial-2-tree",
            (0..5u64)
                .map(|s| {
                    (format!("2tree-s{s}"), gen_partial_ktree(15, 2, 0.9, s).unwrap())
                })
                .collect(),
        ),
        (
            "partial-3-tree",
            (0..3u64)
                .map(|s| {
                    (format!("3tree-s{s}"), gen_partial_ktree(12, 3, 0.8, s).unwrap())
                })
                .collect(),
        ),
    ];

    for (family, graphs) in &families {
        let mut measured: Vec<f64> = Vec::new();
        for (name, g) in graphs {
            for r in [3usize, 5, 8] {
                let div = r_division(g, r).unwrap();
                let check = verify_r_division(g, &div);
                assert!(check.ok(), "{name} r={r}: {:?}", check.violations);

                let again = r_division(g, r).unwrap();
                assert_eq!(div.regions, again.regions, "{name} r={r}: regions changed on rerun");
                assert_eq!(
                    div.c_div_measured.to_bits(),
                    again.c_div_measured.to_bits(),
                    "{name} r={r}: measured constant changed on rerun"
                );
                measured.push(div.c_div_measured);
            }
        }
        let max = measured.iter().cloned().fold(0.0f64, f64::max);
        let mean = measured.iter().sum::<f64>() / measured.len() as f64;
        println!("  {family}: c_div mean {mean:.3}, max {max:.3} over {} divisions", measured.len());
    }

    let elapsed = start.elapsed();
    println!("criterion 6: PASS - every division verified, measurements reproduced in {:.1?}", elapsed);
}

#[test]
fn criterion_7_planted_traps_are_locally_optimal_yet_far_from_optimal() {
    let start = Instant::now();

    let mut previous_ratio = 0.0f64;
    for k in [5u32, 6, 7, 8] {
        let cells = default_gadget_cells(k, 2);
        let inst = gen_diagonal_grid(k, &cells, GadgetVariant::OddCycles).unwrap();
        for c in 1..=2usize {
            assert!(
                verify_local_optimality(&inst, &inst.planted_local, c).unwrap(),
                "odd-cycle trap k={k} admits an improvement at radius {c}"
            );
        }
        let opt = exact_min_size(&inst.graph, &inst.kind, inst.graph.vertex_count()).unwrap();
        assert_eq!(opt, 2, "odd-cycle instance k={k} has the wrong optimum");
        let ratio = inst.planted_local.len() as f64 / opt as f64;
        assert!(ratio >= f64::from(k) / 2.0, "k={k}: ratio {ratio} below k/2");
        assert!(ratio > previous_ratio, "k={k}: ratio stopped growing");
        previous_ratio = ratio;
        println!("  odd-cycle trap k={k}: |planted|={}, opt={opt}, ratio {ratio:.1}", inst.planted_local.len());
    }

    let mut previous_ratio = 0.0f64;
    for k in [4u32, 5, 6] {
        let inst = gen_diagonal_grid(k, &[0], GadgetVariant::ApexCycles).unwrap();
        assert!(
            verify_local_optimality(&inst, &inst.planted_local, 1).unwrap(),
            "apex trap k={k} admits an improvement at radius 1"
        );
        let opt = exact_min_size(&inst.graph, &inst.kind, inst.graph.vertex_count()).unwrap();
        assert_eq!(opt, 1, "apex instance k={k} has the wrong optimum");
        let ratio = inst.planted_local.len() as f64 / opt as f64;
        assert!(ratio >= f64::from(k) / 2.0, "k={k}: ratio {ratio} below k/2");
        assert!(ratio > previous_ratio, "k={k}: ratio stopped growing");
        previous_ratio = ratio;
        println!("  apex trap k={k}: |planted|={}, opt={opt}, ratio {ratio:.1}", inst.planted_local.len());
    }

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    println!("criterion 7: PASS - planted traps certified, optima pinned, ratios grow in {:.1?}", elapsed);
}

fn complete_graph(n: u32) -> Graph {
    let edges: Vec<(VertexId, VertexId)> = (0..n).tuple_combinations().collect();
    Graph::build(n, &edges).unwrap()
}

fn check_reduction(name: &str, drawing: &DrawnGraph) -> (usize, usize) {
    let g = &drawing.graph;
    let planar = planarize_1planar(drawing).unwrap();
    let h = &planar.drawing.graph;
    assert!(h.vertex_count() <= 25, "{name}: reduced graph too large");
    for (_, count) in planar.drawing.crossing_counts() {
        assert!(count <= 1, "{name}: an edge still crosses twice");
    }

    let g_opt = exact_fvs(g, g.vertex_count()).unwrap();
    let h_opt = exact_fvs(h, h.vertex_count()).unwrap();
    assert_eq!(g_opt.len(), h_opt.len(), "{name}: reduction changed the optimum");

    let lifted = lift_solution(&h_opt, &planar.map);
    assert!(is_feasible(g, &lifted).unwrap(), "{name}: lifted solution infeasible");
    assert_eq!(lifted.len(), g_opt.len(), "{name}: lifted solution has the wrong size");

    (h.vertex_count() - g.vertex_count(), g_opt.len())
}

#[test]
fn criterion_8_planarizing_reduction_preserves_the_optimum() {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut subdivided = 0usize;

    let k5_tall = DrawnGraph::from_int_coords(
        complete_graph(5),
        &[(0, 0, 0), (1, 10, 0), (2, 5, 9), (3, 5, 3), (4, 6, 16)],
    )
    .unwrap();
    let (extra, opt) = check_reduction("k5-one-crossing", &k5_tall);
    assert_eq!((extra, opt), (0, 3));
    checked += 1;

    let k5_pentagon = DrawnGraph::from_int_coords(
        complete_graph(5),
        &[(0, 0, 0), (1, 12, 0), (2, 18, 10), (3, 9, 18), (4, -2, 10)],
    )
    .unwrap();
    let (extra, opt) = check_reduction("k5-pentagon", &k5_pentagon);
    assert_eq!((extra, opt), (5, 3));
    subdivided += 1;
    checked += 1;

    let mut attempt = 0u64;
    while checked < 10 {
        let n = 6 + (attempt % 3) as u32;
        let m = n as usize + 2 + (attempt % 4) as usize;
        let span = 25 + 5 * (attempt % 3) as i64;
        attempt += 1;
        let drawing = match gen_drawn_random(n, m, span, attempt) {
            Ok(d) => d,
            Err(_) => continue,
        };
        let planar = planarize_1planar(&drawing).unwrap();
        if planar.drawing.graph.vertex_count() > 25 {
            continue;
        }
        let (extra, _) = check_reduction(&format!("random-{attempt}"), &drawing);
        if extra > 0 {
            subdivided += 1;
        }
        checked += 1;
    }

    let elapsed = start.elapsed();
    println!(
        "criterion 8: PASS - optimum preserved on {checked} drawings ({subdivided} needed subdividing) in {:.1?}",
        elapsed
    );
}
