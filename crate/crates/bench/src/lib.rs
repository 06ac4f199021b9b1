//! Fixtures shared by the criterion benches.

use polytriv::{Predicate, WeightSet};

/// Every non-degenerate symmetric predicate of width `m`.
pub fn symmetric_predicates(m: usize) -> Vec<Predicate> {
    (0..1u64 << (m + 1))
        .map(|mask| WeightSet::from_mask(m, mask).expect("mask fits"))
        .filter(WeightSet::is_non_degenerate)
        .map(|ws| ws.to_predicate())
        .collect()
}

pub fn even_parity(m: usize) -> Predicate {
    Predicate::symmetric(m, (0..=m).step_by(2)).expect("valid weights")
}
