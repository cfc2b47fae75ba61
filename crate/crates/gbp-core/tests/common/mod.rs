//! Shared helpers and independent oracles for the integration suites.
//!
//! Everything here recomputes results along routes the library does not
//! take: distances via Floyd–Warshall instead of BFS, QUBO objectives from
//! the unexpanded definitions instead of the assembled Q matrix, and a file
//! parser for emitted QUBO text.

#![allow(dead_code)]

use gbp_core::graph::Graph;
use gbp_core::qubo::{QuboKind, QuboModel};
use gbp_core::scalar::Scalar;
use gbp_core::Rat;
use rand::RngCore;
use rand::SeedableRng;
use rand_pcg::Pcg64;
use std::collections::BTreeMap;

pub const INF: u32 = u32::MAX / 4;

/// All-pairs shortest paths by Floyd–Warshall; the BFS-independent oracle.
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.vertex_count();
    let mut d = vec![vec![INF; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for (u, v) in g.edges() {
        d[u as usize][v as usize] = 1;
        d[v as usize][u as usize] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k].saturating_add(d[k][j]);
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// A burning sequence is valid iff every vertex sits within `g - i` of some
/// source; checked directly from the distance matrix.
pub fn valid_by_distances(dist: &[Vec<u32>], n: usize, seq: &[u32]) -> bool {
    let g = seq.len() as u32;
    (0..n).all(|v| {
        seq.iter()
            .enumerate()
            .any(|(idx, &u)| dist[v][u as usize] <= g - (idx as u32 + 1))
    })
}

/// Deterministic stream of Erdős–Rényi instances spanning sparse to dense,
/// including disconnected ones: p cycles through {1/2n, 1/n, ..., 5/n}.
pub fn er_instances(count: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    let mut rng = Pcg64::seed_from_u64(seed);
    let fractions = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0];
    (0..count)
        .map(|k| {
            let n = 3 + (rng.next_u64() % (max_n as u64 - 2)) as usize;
            let p = fractions[k % fractions.len()] / n as f64;
            Graph::generate_erdos_renyi(n, p.min(1.0), rng.next_u64()).unwrap()
        })
        .collect()
}

/// Unexpanded slack-QUBO objective: the column blocks plus squared coverage
/// residuals, straight from the definition.
pub fn squbo_objective_direct(graph: &Graph, g: u32, bits: &[bool]) -> Rat {
    let n = graph.vertex_count();
    let slack_bits = gbp_core::qubo::slack_bit_count(g);
    let dist = floyd_warshall(graph);
    let x = |i: usize, j: u32| bits[((j - 1) as usize) * n + (i - 1)];
    let mut total = Rat::from_int(0);
    for j in 1..=g {
        let picked = (1..=n).filter(|&i| x(i, j)).count() as i64;
        total += Rat::from_int((picked - 1) * (picked - 1));
    }
    for i in 1..=n {
        let mut cov = 0i64;
        for j in 1..=g {
            for k in 1..=n {
                if x(k, j) && dist[i - 1][k - 1] < j {
                    cov += 1;
                }
            }
        }
        let mut slack = 0i64;
        for l in 1..=slack_bits {
            if bits[g as usize * n + (i - 1) * slack_bits as usize + (l as usize - 1)] {
                slack += 1 << (l - 1);
            }
        }
        let r = 1 - cov + slack;
        total += Rat::from_int(r * r);
    }
    total
}

/// Unexpanded unbalanced objective under a penalty triple.
pub fn uqubo_objective_direct(
    graph: &Graph,
    g: u32,
    p: Rat,
    lambda1: Rat,
    lambda2: &[Rat],
    bits: &[bool],
) -> Rat {
    let n = graph.vertex_count();
    let dist = floyd_warshall(graph);
    let x = |i: usize, j: u32| bits[((j - 1) as usize) * n + (i - 1)];
    let mut total = Rat::from_int(0);
    for j in 1..=g {
        let picked = (1..=n).filter(|&i| x(i, j)).count() as i64;
        total += p * Rat::from_int((picked - 1) * (picked - 1));
    }
    for i in 1..=n {
        let mut cov = 0i64;
        for j in 1..=g {
            for k in 1..=n {
                if x(k, j) && dist[i - 1][k - 1] < j {
                    cov += 1;
                }
            }
        }
        let h = Rat::from_int(1 - cov);
        total += lambda1 * h + lambda2[i - 1] * h * h;
    }
    total
}

/// Parses text emitted by the QUBO writer back into coefficients: the
/// round-trip oracle. Values are exact decimals or `num/den` tokens.
pub fn parse_qubo_text(text: &str) -> (usize, BTreeMap<(u32, u32), Rat>, Rat) {
    fn parse_value(tok: &str) -> Rat {
        if let Some((p, q)) = tok.split_once('/') {
            return Rat::new(p.parse().unwrap(), q.parse().unwrap());
        }
        if let Some((int, frac)) = tok.split_once('.') {
            let negative = int.starts_with('-');
            let int_abs: i64 = int.trim_start_matches('-').parse().unwrap();
            let frac_num: i64 = frac.parse().unwrap();
            let denom = 10i64.pow(frac.len() as u32);
            let v = Rat::from_int(int_abs) + Rat::new(frac_num, denom);
            return if negative { -v } else { v };
        }
        Rat::from_int(tok.parse().unwrap())
    }

    let mut dim = 0usize;
    let mut offset = Rat::from_int(0);
    let mut q = BTreeMap::new();
    let mut in_entries = false;
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("c offset ") {
            offset = parse_value(rest.trim());
            continue;
        }
        if line.starts_with("p qubo") {
            let parts: Vec<&str> = line.split_whitespace().collect();
            dim = parts[3].parse().unwrap();
            in_entries = true;
            continue;
        }
        if !in_entries || line.starts_with('c') || line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let a: u32 = parts[0].parse().unwrap();
        let b: u32 = parts[1].parse().unwrap();
        q.insert((a, b), parse_value(parts[2]));
    }
    (dim, q, offset)
}

/// Energy of a model evaluated naively (no expansion shortcuts).
pub fn energy_naive(model: &QuboModel<Rat>, bits: &[bool]) -> Rat {
    let mut e = model.offset;
    for (&(a, b), c) in &model.q {
        if bits[a as usize] && bits[b as usize] {
            e += *c;
        }
    }
    e
}

pub fn qubo_g(model: &QuboModel<Rat>) -> u32 {
    match model.kind {
        QuboKind::Slack { g, .. } | QuboKind::Unbalanced { g, .. } => g,
    }
}

pub fn random_bits(rng: &mut Pcg64, dim: usize) -> Vec<bool> {
    (0..dim).map(|_| rng.next_u64() >> 63 == 1).collect()
}
