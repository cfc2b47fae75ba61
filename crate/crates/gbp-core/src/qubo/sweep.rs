//! Exact exhaustive minimization of small QUBO models.
//!
//! Coefficients are scaled by the least common multiple of their
//! denominators into `i64`, so the whole sweep runs in integer arithmetic
//! and the reported minimum is exact. States are visited in Gray-code order
//! (one bit flip per step, delta evaluation against a dense symmetric
//! matrix); among tied minima the lexicographically smallest assignment
//! (bit 0 first) is kept.

use super::QuboModel;
use crate::error::Error;
use crate::Rat;
use crate::Result;
use num_integer::Integer;

/// Exhaustive-minimum result: exact energy and the minimizing assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepOutcome {
    pub min_energy: Rat,
    pub assignment: Vec<bool>,
}

/// Hard cap: beyond this the sweep would not finish in reasonable time.
pub const MAX_SWEEP_DIM: usize = 30;

/// Minimizes `model` by sweeping all `2^dim` assignments. `limit` guards the
/// dimension (hard-capped at [`MAX_SWEEP_DIM`]).
pub fn exhaustive_minimum(model: &QuboModel<Rat>, limit: usize) -> Result<SweepOutcome> {
    let dim = model.dim;
    if dim > limit.min(MAX_SWEEP_DIM) {
        return Err(Error::Capacity(format!(
            "exhaustive sweep limited to {} bits (model has {dim})",
            limit.min(MAX_SWEEP_DIM)
        )));
    }
    if dim == 0 {
        return Ok(SweepOutcome {
            min_energy: model.offset,
            assignment: Vec::new(),
        });
    }

    // Common denominator; all scaled coefficients are exact integers.
    let mut scale: i64 = *model.offset.denom();
    for v in model.q.values() {
        scale = scale.lcm(v.denom());
    }
    let scaled = |r: &Rat| -> i64 { r.numer() * (scale / r.denom()) };

    let mut diag = vec![0i64; dim];
    let mut sym = vec![0i64; dim * dim];
    for (&(a, b), v) in &model.q {
        let (a, b, s) = (a as usize, b as usize, scaled(v));
        if a == b {
            diag[a] = s;
        } else {
            sym[a * dim + b] = s;
            sym[b * dim + a] = s;
        }
    }
    let offset = scaled(&model.offset);

    let mut mask: u64 = 0;
    let mut energy = offset;
    let mut best_energy = energy;
    let mut best_mask = mask;
    let total: u64 = 1u64 << dim;
    for k in 1..total {
        let b = k.trailing_zeros() as usize;
        // Local field of bit b against the other set bits.
        let mut field = diag[b];
        let mut rest = mask & !(1u64 << b);
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            field += sym[b * dim + j];
            rest &= rest - 1;
        }
        if mask >> b & 1 == 1 {
            energy -= field;
            mask &= !(1u64 << b);
        } else {
            energy += field;
            mask |= 1u64 << b;
        }
        if energy < best_energy || (energy == best_energy && lex_smaller(mask, best_mask)) {
            best_energy = energy;
            best_mask = mask;
        }
    }

    Ok(SweepOutcome {
        min_energy: Rat::new(best_energy, scale),
        assignment: (0..dim).map(|i| best_mask >> i & 1 == 1).collect(),
    })
}

/// Lexicographic order on assignments read bit 0 first: the one with a zero
/// at the first differing position is smaller.
fn lex_smaller(a: u64, b: u64) -> bool {
    if a == b {
        return false;
    }
    let p = (a ^ b).trailing_zeros();
    a >> p & 1 == 0
}

#[cfg(test)]
mod tests {
    use super::super::{build_squbo, energy};
    use super::*;
    use crate::scalar::Scalar;
    use crate::graph::Graph;

    #[test]
    fn sweep_agrees_with_direct_energy() {
        let g = Graph::generate_path(4).unwrap();
        let m = build_squbo(&g, 2).unwrap();
        let out = exhaustive_minimum(&m, 20).unwrap();
        assert_eq!(energy(&m, &out.assignment).unwrap(), out.min_energy);
        // A 2-step burn of P4 exists, so the minimum is zero.
        assert_eq!(out.min_energy, Rat::from_int(0));
    }

    #[test]
    fn sweep_positive_when_infeasible() {
        let g = Graph::generate_path(5).unwrap();
        let m = build_squbo(&g, 2).unwrap();
        let out = exhaustive_minimum(&m, 20).unwrap();
        assert!(out.min_energy > Rat::from_int(0));
    }

    #[test]
    fn dimension_guard() {
        let g = Graph::generate_path(9).unwrap();
        let m = build_squbo(&g, 3).unwrap();
        assert!(matches!(
            exhaustive_minimum(&m, 20),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn lex_tie_breaking() {
        assert!(lex_smaller(0b10, 0b01));
        assert!(!lex_smaller(0b01, 0b10));
        assert!(!lex_smaller(0b11, 0b11));
    }
}
