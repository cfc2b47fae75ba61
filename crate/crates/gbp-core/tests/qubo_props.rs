//! QUBO encodings: exhaustive zero-iff-feasible sweeps, penalty soundness,
//! the algebraic identities behind the blocks, and emission round-trips.

mod common;

use common::{parse_qubo_text, random_bits, squbo_objective_direct, uqubo_objective_direct};
use gbp_core::burning::{brute_force_burning_number, fire_sources, validate, BurningSequence};
use gbp_core::graph::Graph;
use gbp_core::qubo::{
    build_squbo, build_uqubo, decode_qubo, default_penalties, energy, exhaustive_minimum,
    squbo_assignment_for, write_qubo, QuboModel,
};
use gbp_core::scalar::Scalar;
use gbp_core::Rat;
use rand::SeedableRng;
use rand_pcg::Pcg64;

fn sweep_graphs() -> Vec<(Graph, &'static str)> {
    vec![
        (Graph::generate_path(4).unwrap(), "p4"),
        (Graph::generate_path(5).unwrap(), "p5"),
        (Graph::generate_cycle(5).unwrap(), "c5"),
        (Graph::generate_complete(4).unwrap(), "k4"),
        (Graph::generate_star(4).unwrap(), "star4"),
        (Graph::from_edges(5, &[(0, 1), (2, 3)]).unwrap(), "two-comp"),
        (Graph::generate_erdos_renyi(6, 0.4, 3).unwrap(), "er6"),
    ]
}

/// Exhaustive sweep over every slack model with dim <= 20: the minimum is
/// zero exactly when the guess reaches the burning number, and the
/// minimizing assignment then decodes to a valid sequence.
#[test]
fn squbo_minimum_is_zero_iff_feasible() {
    for (graph, name) in sweep_graphs() {
        let (b, _) = brute_force_burning_number(&graph, None).unwrap();
        for g in 1..=4u32 {
            let model = build_squbo::<Rat>(&graph, g).unwrap();
            if model.dim > 20 {
                continue;
            }
            let out = exhaustive_minimum(&model, 20).unwrap();
            if g >= b {
                assert_eq!(out.min_energy, Rat::from_int(0), "{name} g={g}");
                let d = decode_qubo(&graph, &model, &out.assignment).unwrap();
                assert_eq!(d.valid, Some(true), "{name} g={g}");
            } else {
                assert!(out.min_energy > Rat::from_int(0), "{name} g={g}");
            }
        }
    }
}

/// Every valid sequence of the model's length has a slack completion at
/// exactly zero energy.
#[test]
fn valid_sequences_reach_zero_with_slack_completion() {
    let graphs = common::er_instances(25, 9, 404);
    for graph in &graphs {
        let (b, witness) = brute_force_burning_number(graph, None).unwrap();
        let model = build_squbo::<Rat>(graph, b).unwrap();
        let bits = squbo_assignment_for(graph, &model, &witness).unwrap();
        assert_eq!(energy(&model, &bits).unwrap(), Rat::from_int(0));
    }
}

/// The one-selection identity behind the column blocks, checked
/// exhaustively for up to six variables: the expanded form is 0 at exactly
/// one set bit and at least 1 otherwise.
#[test]
fn one_selection_identity() {
    for m in 1..=6usize {
        for mask in 0u32..(1 << m) {
            let ones = mask.count_ones() as i64;
            let value = 1 - ones + 2 * ones * (ones - 1) / 2;
            assert_eq!(value, (ones - 1) * (ones - 1));
            if ones == 1 {
                assert_eq!(value, 0);
            } else {
                assert!(value >= 1);
            }
        }
    }
}

/// The uniform rule's root: f(1 - g) = lambda1 (1-g) + lambda2 (1-g)^2 is
/// exactly zero in rational arithmetic.
#[test]
fn uniform_rule_root_is_exact() {
    let graph = Graph::generate_path(6).unwrap();
    for g in 2..=8u32 {
        let pc = default_penalties::<Rat>(&graph, g, None).unwrap();
        let h = Rat::from_int(1 - g as i64);
        assert_eq!(pc.lambda1 * h + pc.lambda2[0] * h * h, Rat::from_int(0));
    }
}

/// Penalty soundness on models small enough to sweep: any assignment with a
/// violated column block costs more than zero; assignments encoding valid
/// burning sequences land at or below zero.
#[test]
fn unbalanced_penalties_are_sound() {
    for (graph, name) in sweep_graphs() {
        let n = graph.vertex_count();
        let (b, _) = brute_force_burning_number(&graph, None).unwrap();
        for g in 2..=3u32 {
            let model = match default_penalties::<Rat>(&graph, g, None) {
                Ok(pc) => build_uqubo(&graph, g, &pc).unwrap(),
                Err(_) => continue,
            };
            if model.dim > 18 {
                continue;
            }
            for mask in 0u64..(1 << model.dim) {
                let bits: Vec<bool> = (0..model.dim).map(|i| mask >> i & 1 == 1).collect();
                let e = energy(&model, &bits).unwrap();
                let column_ok = (1..=g).all(|j| {
                    (1..=n as u32).filter(|&i| bits[model.x_id(i, j)]).count() == 1
                });
                if !column_ok {
                    assert!(e > Rat::from_int(0), "{name} g={g} mask={mask}");
                } else if g >= b {
                    let d = decode_qubo(&graph, &model, &bits).unwrap();
                    if d.valid == Some(true) {
                        assert!(e <= Rat::from_int(0), "{name} g={g} mask={mask}");
                    }
                }
            }
        }
    }
}

/// The assembled Q agrees with the unexpanded textbook objectives on random
/// assignments, for both encodings.
#[test]
fn expanded_q_matches_direct_objectives() {
    let mut rng = Pcg64::seed_from_u64(909);
    let graphs = [
        Graph::generate_path(7).unwrap(),
        Graph::generate_cycle(6).unwrap(),
        Graph::generate_erdos_renyi(8, 0.3, 11).unwrap(),
    ];
    for graph in &graphs {
        for g in 1..=3u32 {
            let squbo = build_squbo::<Rat>(graph, g).unwrap();
            assert!(squbo.q.keys().all(|&(a, b)| a <= b));
            for _ in 0..400 {
                let bits = random_bits(&mut rng, squbo.dim);
                assert_eq!(
                    energy(&squbo, &bits).unwrap(),
                    squbo_objective_direct(graph, g, &bits)
                );
            }
            if g >= 2 {
                let pc = default_penalties::<Rat>(graph, g, None).unwrap();
                let uqubo = build_uqubo(graph, g, &pc).unwrap();
                assert!(uqubo.q.keys().all(|&(a, b)| a <= b));
                for _ in 0..400 {
                    let bits = random_bits(&mut rng, uqubo.dim);
                    assert_eq!(
                        energy(&uqubo, &bits).unwrap(),
                        uqubo_objective_direct(graph, g, pc.p, pc.lambda1, &pc.lambda2, &bits)
                    );
                }
            }
        }
    }
}

#[test]
fn guided_penalties_follow_the_source_counts() {
    let graph = Graph::generate_path(9).unwrap();
    let seq = BurningSequence::new(vec![2, 6, 8]);
    assert!(validate(&graph, &seq));
    let fs = fire_sources(&graph, &seq);
    let pc = default_penalties::<Rat>(&graph, 3, Some(&fs)).unwrap();
    for (i, &l) in fs.counts.iter().enumerate() {
        let expect = if l >= 2 {
            Rat::new(1, l as i64 - 1)
        } else {
            Rat::from_int(1)
        };
        assert_eq!(pc.lambda2[i], expect);
    }
    assert!(pc.is_sound(9));
}

#[test]
fn qubo_file_round_trips_exactly() {
    let graph = Graph::generate_path(5).unwrap();
    let models: Vec<QuboModel<Rat>> = vec![
        build_squbo(&graph, 2).unwrap(),
        build_uqubo(
            &graph,
            4,
            &default_penalties::<Rat>(&graph, 4, None).unwrap(),
        )
        .unwrap(), // lambda2 = 1/3: exercises the fraction tokens
    ];
    for model in &models {
        let mut buf = Vec::new();
        write_qubo(model, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let (dim, q, offset) = parse_qubo_text(&text);
        assert_eq!(dim, model.dim);
        assert_eq!(offset, model.offset);
        assert_eq!(q, model.q);
    }
}

#[test]
fn qubo_emission_matches_golden_fixture() {
    let graph = Graph::generate_path(4).unwrap();
    let model = build_squbo::<Rat>(&graph, 2).unwrap();
    let mut buf = Vec::new();
    write_qubo(&model, &mut buf).unwrap();
    assert_eq!(
        String::from_utf8(buf).unwrap(),
        include_str!("fixtures/squbo_p4_g2.qubo")
    );
}

/// Mixed-path consistency: where the sweep is possible, the structured
/// search can never report a lower energy, and at or above the burning
/// number both find the same (valid) optimum.
#[test]
fn structured_search_consistent_with_sweep() {
    let graphs = common::er_instances(15, 6, 777);
    for graph in &graphs {
        let (b, _) = brute_force_burning_number(graph, None).unwrap();
        for g in 2..=3u32 {
            let pc = default_penalties::<Rat>(graph, g, None).unwrap();
            let model = build_uqubo(graph, g, &pc).unwrap();
            if model.dim > 18 {
                continue;
            }
            let sweep = exhaustive_minimum(&model, 20).unwrap();
            let (bits, e) = gbp_core::solvers::minimize_uqubo_structured(
                graph,
                g,
                &pc,
                None,
                1 << 24,
            )
            .unwrap();
            assert!(sweep.min_energy <= e);
            assert_eq!(energy(&model, &bits).unwrap(), e);
            if g >= b {
                assert_eq!(sweep.min_energy, e, "violating states cost over P-1");
            }
        }
    }
}
