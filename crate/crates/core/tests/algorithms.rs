mod common;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use racelogic::algorithms::*;
use racelogic::tropical::{example_matrix, TimeValue, Wavefront};
use racelogic::{Error, MachineConfig};

use common::{random_dna, random_graph};

#[test]
fn dijkstra_invariants_on_random_graphs() {
    let mut rng = StdRng::seed_from_u64(1234);
    for _ in 0..60 {
        let n = rng.gen_range(1..=32);
        let g = random_graph(&mut rng, n, 0.3, 7);
        let s = rng.gen_range(0..n);
        let run = temporal_dijkstra(&g, g.name(s), &DijkstraOptions::default()).unwrap();
        let r = &run.result;
        let oracle = classical_dijkstra(&g, g.name(s)).unwrap();
        assert_eq!(r.distances, oracle.distances);
        validate_shortest_path_tree(&g, s, &r.parent_matrix, &r.distances).unwrap();

        assert!(run.frontier_minima.iter().all(|t| *t == TimeValue::ZERO || t.is_infinite()));
        let along: Vec<TimeValue> = r.visit_order.iter().map(|&i| r.distances[i]).collect();
        assert!(along.windows(2).all(|w| w[0] <= w[1]), "{along:?}");
        assert_eq!(r.visit_order.len(), r.distances.iter().filter(|d| d.is_finite()).count());
        assert_eq!(recover_distances(n, &r.visit_order, &r.norm_constants), r.distances);
        for j in 0..n {
            assert!(r.parent_matrix.row(j).count_finite() <= 1);
        }
    }
}

#[test]
fn literal_variant_keeps_distances_and_agrees_on_trees() {
    let mut rng = StdRng::seed_from_u64(77);
    let literal = DijkstraOptions { variant: MaskVariant::Literal, ..Default::default() };
    for _ in 0..30 {
        // distances never depend on the mask, only the recorded parents do
        let n = rng.gen_range(2..=20);
        let g = random_graph(&mut rng, n, 0.3, 7);
        let lit = temporal_dijkstra(&g, "n0", &literal).unwrap().result;
        let amended = temporal_dijkstra(&g, "n0", &DijkstraOptions::default()).unwrap().result;
        assert_eq!(lit.distances, amended.distances);

        // with in-degree at most one no edge can lead back into a visited node
        let mut t = Graph::new();
        t.add_node("v0");
        for i in 1..n {
            let parent = rng.gen_range(0..i);
            t.add_edge(&format!("v{parent}"), &format!("v{i}"), rng.gen_range(1..=7)).unwrap();
        }
        let lit = temporal_dijkstra(&t, "v0", &literal).unwrap().result;
        let amended = temporal_dijkstra(&t, "v0", &DijkstraOptions::default()).unwrap().result;
        assert_eq!(lit, amended);
    }
}

#[test]
fn alignment_matches_dynamic_program() {
    let mut rng = StdRng::seed_from_u64(555);
    let cfg = MachineConfig::default().with_bits(8);
    for _ in 0..150 {
        let n = rng.gen_range(1..=12);
        let p = AlignmentProblem::new(
            &random_dna(&mut rng, n),
            &random_dna(&mut rng, n),
            rng.gen_range(1..=3),
            rng.gen_range(1..=3),
        )
        .unwrap();
        assert_eq!(temporal_nw(&p, &cfg).unwrap().cost, TimeValue::Finite(classical_nw(&p)));
    }
}

#[test]
fn closure_is_monotone_and_reaches_fixpoint() {
    let mut rng = StdRng::seed_from_u64(808);
    let cfg = MachineConfig::default().with_bits(8);
    for _ in 0..40 {
        let n = rng.gen_range(1..=16);
        let a = random_graph(&mut rng, n, 0.3, 7).adjacency_matrix();
        let x = Wavefront::one_hot(n, rng.gen_range(0..n));
        let mut prev = closure(&a, &x, 0, &cfg).unwrap().value;
        assert_eq!(prev, x);
        for hops in 1..n {
            let next = closure(&a, &x, hops, &cfg).unwrap().value;
            assert!(next.iter().zip(prev.iter()).all(|(a, b)| a <= b));
            prev = next;
        }
        assert_eq!(prev, minplus_bellman_ford(&a, &x).unwrap());
    }
}

#[test]
fn closure_examples() {
    let cfg = MachineConfig::default();
    let a = example_matrix();
    let from_b = closure(&a, &Wavefront::one_hot(4, 1), 1, &cfg).unwrap().value;
    assert_eq!(from_b.to_string(), "[inf, 0, 2, 4]");
}

#[test]
fn dijkstra_under_saturation_loses_heavy_edges() {
    let g = Graph::from_edges([("a", "b", 9), ("a", "c", 2), ("c", "b", 3)]).unwrap();
    let mut config = MachineConfig::default().with_bits(3);
    config.overflow_policy = racelogic::OverflowPolicy::SaturateToInfinity;
    let run = temporal_dijkstra(&g, "a", &DijkstraOptions { config, ..Default::default() }).unwrap();
    let overflow: u64 = run.trace.iter().map(|t| t.overflow_events).sum();
    assert_eq!(overflow, 1);
    assert_eq!(run.result.distances[1], TimeValue::Finite(5));

    let strict = DijkstraOptions { config: MachineConfig::default().with_bits(3), ..Default::default() };
    assert!(matches!(temporal_dijkstra(&g, "a", &strict), Err(Error::RangeViolation { .. })));
}
