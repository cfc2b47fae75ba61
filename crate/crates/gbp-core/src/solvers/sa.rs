//! Simulated annealing for QUBO models.
//!
//! Single-bit-flip Metropolis chain with geometric cooling, run on the f64
//! view of the model for speed. Each restart draws its sub-seed from the
//! root seed via the documented splitting rule, starts from a uniform random
//! assignment and keeps its best-seen state; the best states of all restarts
//! are compared by exact rational energy, so the reported energy carries no
//! floating error. Deterministic for a fixed seed.

use super::SaParams;
use crate::derive_seed;
use crate::qubo::{energy, QuboModel};
use crate::{Rat, Result};
use rand::RngCore;
use rand::SeedableRng;
use rand_pcg::Pcg64;

/// Fraction of the initial temperature at which a restart stops cooling.
const TEMPERATURE_FLOOR: f64 = 1e-4;

fn unit_f64(rng: &mut Pcg64) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
}

/// Runs the annealer and returns the best assignment found with its exact
/// energy.
pub fn simulated_annealing(model: &QuboModel<Rat>, params: &SaParams) -> Result<(Vec<bool>, Rat)> {
    params.check()?;
    let dim = model.dim;
    if dim == 0 {
        return Ok((Vec::new(), model.offset));
    }
    let view = model.to_f64();

    // Dense-ish neighbor lists: field updates touch only coupled bits.
    let mut diag = vec![0.0f64; dim];
    let mut coupled: Vec<Vec<(u32, f64)>> = vec![Vec::new(); dim];
    for (&(a, b), &v) in &view.q {
        if a == b {
            diag[a as usize] = v;
        } else {
            coupled[a as usize].push((b, v));
            coupled[b as usize].push((a, v));
        }
    }

    let mut global_best: Option<(Rat, Vec<bool>)> = None;
    for restart in 0..params.restarts {
        let mut rng = Pcg64::seed_from_u64(derive_seed(params.seed, restart as u64));
        let mut bits: Vec<bool> = (0..dim).map(|_| rng.next_u64() >> 63 == 1).collect();

        // field[k] = diag[k] + sum over set coupled bits; flipping k changes
        // the energy by +field[k] (0 -> 1) or -field[k] (1 -> 0).
        let mut field = diag.clone();
        for k in 0..dim {
            for &(j, v) in &coupled[k] {
                if bits[j as usize] {
                    field[k] += v;
                }
            }
        }
        let mut current: f64 = view.offset
            + (0..dim)
                .filter(|&k| bits[k])
                .map(|k| {
                    diag[k]
                        + coupled[k]
                            .iter()
                            .filter(|&&(j, _)| j as usize > k && bits[j as usize])
                            .map(|&(_, v)| v)
                            .sum::<f64>()
                })
                .sum::<f64>();
        let mut best = current;
        let mut best_bits = bits.clone();

        let mut temperature = params.initial_temperature;
        let floor = params.initial_temperature * TEMPERATURE_FLOOR;
        while temperature > floor {
            for _ in 0..params.steps_per_temperature {
                let k = (rng.next_u64() % dim as u64) as usize;
                let delta = if bits[k] { -field[k] } else { field[k] };
                if delta <= 0.0 || unit_f64(&mut rng) < (-delta / temperature).exp() {
                    let sign = if bits[k] { -1.0 } else { 1.0 };
                    bits[k] = !bits[k];
                    current += delta;
                    for &(j, v) in &coupled[k] {
                        field[j as usize] += sign * v;
                    }
                    if current < best {
                        best = current;
                        best_bits.copy_from_slice(&bits);
                    }
                }
            }
            temperature *= params.cooling;
        }

        let exact = energy(model, &best_bits)?;
        let better = match &global_best {
            None => true,
            Some((e, _)) => exact < *e,
        };
        if better {
            global_best = Some((exact, best_bits));
        }
    }
    let (e, bits) = global_best.expect("at least one restart");
    Ok((bits, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::{build_squbo, QuboKind, QuboVar};
    use crate::scalar::Scalar;
    use std::collections::BTreeMap;

    #[test]
    fn unique_minimum_is_found() {
        // Q = diag(1, ..., 1): the all-zero state is the unique minimum.
        let dim = 12;
        let model = QuboModel::<Rat> {
            dim,
            q: (0..dim as u32)
                .map(|i| ((i, i), Rat::from_int(1)))
                .collect::<BTreeMap<_, _>>(),
            offset: Rat::from_int(0),
            vars: (1..=dim as u32).map(|i| QuboVar::X { i, j: 1 }).collect(),
            kind: QuboKind::Unbalanced { n: dim as u32, g: 1 },
        };
        let (bits, e) = simulated_annealing(&model, &SaParams::default()).unwrap();
        assert!(bits.iter().all(|&b| !b));
        assert_eq!(e, Rat::from_int(0));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let g = crate::graph::Graph::generate_path(7).unwrap();
        let model = build_squbo::<Rat>(&g, 3).unwrap();
        let p = SaParams {
            restarts: 2,
            ..SaParams::default()
        };
        let (a, ea) = simulated_annealing(&model, &p).unwrap();
        let (b, eb) = simulated_annealing(&model, &p).unwrap();
        assert_eq!(a, b);
        assert_eq!(ea, eb);
    }

    #[test]
    fn reaches_zero_on_easy_instance() {
        let g = crate::graph::Graph::generate_path(9).unwrap();
        let model = build_squbo::<Rat>(&g, 3).unwrap();
        let (_, e) = simulated_annealing(&model, &SaParams::default()).unwrap();
        assert_eq!(e, Rat::from_int(0));
    }

    #[test]
    fn bad_schedule_is_rejected() {
        let g = crate::graph::Graph::generate_path(4).unwrap();
        let model = build_squbo::<Rat>(&g, 2).unwrap();
        let p = SaParams {
            cooling: 1.5,
            ..SaParams::default()
        };
        assert!(simulated_annealing(&model, &p).is_err());
    }
}
