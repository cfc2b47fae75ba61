//! Burning-sequence semantics against closed forms and cross-route checks.

mod common;

use common::{floyd_warshall, valid_by_distances};
use gbp_core::burning::{
    brute_force_burning_number, fire_sources, greedy_heuristic, simulate, upper_bound, validate,
    BurningSequence,
};
use gbp_core::graph::Graph;
use rand::RngCore;
use rand::SeedableRng;
use rand_pcg::Pcg64;

/// validate, simulate and fire_sources are three routes to the same
/// question; they must agree on random sequences.
#[test]
fn three_validity_routes_agree() {
    let mut rng = Pcg64::seed_from_u64(7);
    let mut trials = 0;
    while trials < 1200 {
        let n = 2 + (rng.next_u64() % 11) as usize;
        let p = (1.0 + (rng.next_u64() % 30) as f64 / 10.0) / n as f64;
        let g = Graph::generate_erdos_renyi(n, p.min(1.0), rng.next_u64()).unwrap();
        let len = 1 + (rng.next_u64() % n as u64) as usize;
        let seq = BurningSequence::new(
            (0..len)
                .map(|_| (rng.next_u64() % n as u64) as u32)
                .collect(),
        );
        let dist = floyd_warshall(&g);

        let by_validate = validate(&g, &seq);
        let by_simulate = simulate(&g, &seq).final_round().len() == n;
        let by_sources = fire_sources(&g, &seq).min_count() >= 1;
        let by_oracle = valid_by_distances(&dist, n, seq.vertices());
        assert_eq!(by_validate, by_simulate);
        assert_eq!(by_validate, by_sources);
        assert_eq!(by_validate, by_oracle);
        trials += 1;
    }
}

#[test]
fn paths_and_cycles_follow_the_square_root_law() {
    for n in 1..=49usize {
        let expected = (n as f64).sqrt().ceil() as u32;
        let p = Graph::generate_path(n).unwrap();
        let (b, w) = brute_force_burning_number(&p, Some(49)).unwrap();
        assert_eq!(b, expected, "path n={n}");
        assert!(validate(&p, &w));
        if n >= 3 {
            let c = Graph::generate_cycle(n).unwrap();
            let (b, _) = brute_force_burning_number(&c, Some(49)).unwrap();
            assert_eq!(b, expected, "cycle n={n}");
        }
    }
}

#[test]
fn complete_graphs_and_stars_burn_in_two() {
    for n in 2..=16usize {
        let k = Graph::generate_complete(n).unwrap();
        assert_eq!(brute_force_burning_number(&k, None).unwrap().0, 2);
        let star = Graph::generate_star(n - 1).unwrap();
        assert_eq!(
            brute_force_burning_number(&star, Some(17)).unwrap().0,
            2,
            "star with {} leaves",
            n - 1
        );
    }
}

#[test]
fn greedy_is_a_valid_upper_bound() {
    let graphs = common::er_instances(60, 12, 31);
    for (idx, g) in graphs.iter().enumerate() {
        let greedy = greedy_heuristic(g);
        assert!(validate(g, &greedy), "greedy invalid on instance {idx}");
        let (b, _) = brute_force_burning_number(g, None).unwrap();
        assert!(greedy.len() as u32 >= b);
        assert!(upper_bound(g) >= b);
    }
}

#[test]
fn prepending_preserves_validity() {
    let graphs = common::er_instances(40, 10, 57);
    let mut rng = Pcg64::seed_from_u64(4);
    for g in &graphs {
        let (_, witness) = brute_force_burning_number(g, None).unwrap();
        for _ in 0..5 {
            let extra = (rng.next_u64() % g.vertex_count() as u64) as u32;
            let mut longer = vec![extra];
            longer.extend_from_slice(witness.vertices());
            assert!(validate(g, &BurningSequence::new(longer)));
        }
    }
}

#[test]
fn single_vertex_and_empty_sequence_edges() {
    let k1 = Graph::generate_path(1).unwrap();
    assert_eq!(brute_force_burning_number(&k1, None).unwrap().0, 1);
    assert!(!validate(&k1, &BurningSequence::new(vec![])));
    assert!(validate(&k1, &BurningSequence::new(vec![0])));
}

/// Sparse disconnected graphs once exploded the oracle through identical
/// saturated columns; the symmetry rule must keep them around a few
/// thousand nodes.
#[test]
fn oracle_handles_sparse_disconnected_instances() {
    for seed in 0..10u64 {
        let g = Graph::generate_erdos_renyi(15, 1.0 / 30.0, seed).unwrap();
        let (b, w) = brute_force_burning_number(&g, Some(15)).unwrap();
        assert!(validate(&g, &w));
        let (_, components) = g.connected_components();
        assert!(b as usize >= components, "each component needs a source");
    }
}

#[test]
fn isolated_vertices_each_need_a_source() {
    let g = Graph::from_edges(5, &[]).unwrap();
    let (b, w) = brute_force_burning_number(&g, None).unwrap();
    assert_eq!(b, 5);
    assert!(validate(&g, &w));
    assert_eq!(upper_bound(&g), 5);
}
