//! Unanimity, supportiveness and impossibility domains, with the explicit
//! constructions of unanimous non-dictatorial polymorphisms.

use crate::classify::permutation_dictators;
use crate::enumerate::{EngineOptions, Enumeration};
use crate::error::{Error, Result};
use crate::function::{lcm, table_len, FunctionTable};
use crate::phi::{PhiFamily, MAX_PERMUTATION_ALPHABET};
use crate::polymorphism::{is_polymorphism, PolymorphismTuple};
use crate::predicate::Predicate;
use crate::triviality::{check_trivial_for_n, find_and_or_polymorphism, find_any_latin_square_polymorphism, Limits};
use serde::Serialize;
use std::ops::ControlFlow;

/// Witnesses whose matrix count `|P|^n` is at most this are re-checked exhaustively.
pub const EXHAUSTIVE_VERIFY_LIMIT: u128 = 1 << 26;

/// `f(σ, …, σ) = σ` for every symbol `σ`.
pub fn is_unanimous(f: &FunctionTable) -> bool {
    let k = f.alphabet_size();
    let repunit: usize = (0..f.arity()).map(|j| k.pow(j as u32)).sum();
    (0..k).all(|s| f.get(s * repunit) as usize == s)
}

/// `f(σ_1, …, σ_n) ∈ {σ_1, …, σ_n}` for every input.
pub fn is_supportive(f: &FunctionTable) -> bool {
    let mut x = vec![0u8; f.arity()];
    (0..f.table().len()).all(|idx| {
        crate::function::decode_into(idx, f.alphabet_size(), &mut x);
        x.contains(&f.get(idx))
    })
}

fn is_unanimous_tuple(fs: &PolymorphismTuple) -> bool {
    fs.tables().iter().all(is_unanimous)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verification {
    /// Every input matrix was checked.
    Exhaustive,
    /// Too many matrices to check; the base tuple was checked exhaustively
    /// and iteration preserves polymorphisms.
    Composition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "construction", rename_all = "snake_case")]
pub enum WitnessSource {
    /// Found by the unanimity-restricted enumeration.
    Enumeration {
        arity: usize,
    },
    /// Closure of `P` under setting `coordinate` to `value`.
    ClosedUnderSetting {
        coordinate: usize,
        value: u8,
    },
    AndOr,
    /// A Latin-square polymorphism iterated `exponent` times.
    LatinSquareIteration {
        base: PolymorphismTuple,
        exponent: u128,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnanimousWitness {
    pub polymorphism: PolymorphismTuple,
    pub source: WitnessSource,
    pub verification: Verification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnanimityVerdict {
    /// Every unanimous polymorphism, at every arity, is a common projection.
    pub is_impossibility_domain: bool,
    pub witness: Option<UnanimousWitness>,
    pub searched_arity: usize,
    /// Number of unanimous polymorphisms at the searched arity.
    pub unanimous_count: usize,
    /// The enumeration at the searched arity found only common projections.
    pub impossible_at_searched_arity: bool,
    /// Whether `P` is trivial at arity 1 for the family of all permutation
    /// tuples. When it is, a negative verdict is exact: absent all three
    /// constructions `P` is trivial and hence an impossibility domain. When
    /// it is not (or could not be decided), a negative verdict only reflects
    /// the searched arity and the constructions. `None` if not computed.
    pub permutation_trivial_at_1: Option<bool>,
}

fn verify(predicate: &Predicate, fs: &PolymorphismTuple, base_checked: bool) -> Result<Option<Verification>> {
    let matrices = (predicate.len() as u128).checked_pow(fs.arity() as u32).unwrap_or(u128::MAX);
    if matrices <= EXHAUSTIVE_VERIFY_LIMIT {
        Ok(is_polymorphism(predicate, fs)?.then_some(Verification::Exhaustive))
    } else if base_checked {
        Ok(Some(Verification::Composition))
    } else {
        Err(Error::Capability(format!("{matrices} input matrices are too many to verify")))
    }
}

/// Searches the unanimous `n`-ary polymorphisms for one that is not a common
/// projection. If there is none, falls back to the three explicit
/// constructions, which can produce witnesses of other arities.
pub fn check_impossibility_unanimity(
    predicate: &Predicate,
    n: usize,
    options: &EngineOptions,
    limits: &Limits,
) -> Result<UnanimityVerdict> {
    predicate.ensure_non_degenerate()?;
    let engine = Enumeration::new(predicate, n)?.unanimous();
    let mut count = 0usize;
    let mut found: Option<PolymorphismTuple> = None;
    engine.for_each(options.budget, |fs| {
        count += 1;
        if found.is_none() && !fs.is_common_projection() {
            found = Some(fs.clone());
        }
        ControlFlow::Continue(())
    })?;

    let permutation_trivial_at_1 = if predicate.signature().sizes().iter().all(|&k| k <= MAX_PERMUTATION_ALPHABET) {
        let phi = PhiFamily::all_permutations(predicate.signature())?;
        Some(check_trivial_for_n(predicate, &phi, 1, options)?.trivial)
    } else {
        None
    };

    let impossible_at_searched_arity = found.is_none();
    let witness = match found {
        Some(fs) => {
            let verification = verify(predicate, &fs, false)?
                .ok_or_else(|| Error::Precondition("enumerated witness failed re-verification".into()))?;
            Some(UnanimousWitness { polymorphism: fs, source: WitnessSource::Enumeration { arity: n }, verification })
        }
        None => construct_any_witness(predicate, limits)?,
    };
    Ok(UnanimityVerdict {
        is_impossibility_domain: witness.is_none(),
        witness,
        searched_arity: n,
        unanimous_count: count,
        impossible_at_searched_arity,
        permutation_trivial_at_1,
    })
}

/// Tries the closure, AND/OR and Latin-square constructions in that order.
pub fn construct_any_witness(predicate: &Predicate, limits: &Limits) -> Result<Option<UnanimousWitness>> {
    if let Some(&(coordinate, value)) = predicate.closing_assignments().first() {
        let fs = construct_closure_witness(predicate, coordinate, value)?;
        let verification = verify(predicate, &fs, false)?
            .ok_or_else(|| Error::Precondition("closure witness failed verification".into()))?;
        return Ok(Some(UnanimousWitness {
            polymorphism: fs,
            source: WitnessSource::ClosedUnderSetting { coordinate, value },
            verification,
        }));
    }
    if let Some(fs) = find_and_or_polymorphism(predicate, limits)? {
        return Ok(Some(UnanimousWitness {
            polymorphism: fs,
            source: WitnessSource::AndOr,
            verification: Verification::Exhaustive,
        }));
    }
    if let Some(base) = find_any_latin_square_polymorphism(predicate, limits)? {
        let w = construct_iterated_witness(predicate, &base, limits)?;
        if w.unanimous && w.non_dictatorial {
            return Ok(Some(UnanimousWitness {
                polymorphism: w.polymorphism,
                source: WitnessSource::LatinSquareIteration { base, exponent: w.exponent },
                verification: w.verification,
            }));
        }
    }
    Ok(None)
}

/// `f_i = x₀` for `i ≠ i₀`; `f_{i₀}(x) = σ₀` if `x₁ = σ₀`, else `x₀`.
pub fn construct_closure_witness(predicate: &Predicate, i0: usize, sigma0: u8) -> Result<PolymorphismTuple> {
    if !predicate.closed_under_setting(i0, sigma0)? {
        return Err(Error::Precondition(format!("P is not closed under setting coordinate {i0} to {sigma0}")));
    }
    let tables = predicate
        .signature()
        .sizes()
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            if i == i0 {
                FunctionTable::from_fn(k, 2, |x| if x[1] == sigma0 { sigma0 } else { x[0] })
            } else {
                FunctionTable::projection(k, 2, 0)
            }
        })
        .collect::<Result<_>>()?;
    PolymorphismTuple::new(tables)
}

/// `f^{∘1} = f` and `f^{∘r+1}(x) = f(x₀, f^{∘r}(x₁, …, x_r))`, of arity `r + 1`.
pub fn iterate_polymorphism(fs: &PolymorphismTuple, r: usize) -> Result<PolymorphismTuple> {
    if fs.arity() != 2 {
        return Err(Error::invalid(format!("iteration needs binary functions, got arity {}", fs.arity())));
    }
    if r == 0 {
        return Err(Error::invalid("iteration count must be at least 1"));
    }
    let tables = fs.tables().iter().map(|f| iterate_table(f, r)).collect::<Result<_>>()?;
    PolymorphismTuple::new(tables)
}

fn iterate_table(f: &FunctionTable, r: usize) -> Result<FunctionTable> {
    let k = f.alphabet_size();
    table_len(k, r + 1)?;
    let mut current = f.table().to_vec();
    for _ in 1..r {
        // new index = x₀ + k · (index of the remaining arguments)
        let mut next = Vec::with_capacity(current.len() * k);
        for &inner in &current {
            next.extend((0..k).map(|x0| f.get(x0 + k * inner as usize)));
        }
        current = next;
    }
    FunctionTable::new(k, r + 1, current)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IteratedWitness {
    pub exponent: u128,
    pub polymorphism: PolymorphismTuple,
    pub unanimous: bool,
    pub non_dictatorial: bool,
    pub verification: Verification,
}

/// `∏ k_i!`, or with `tight` the lcm of the orders of every row permutation
/// `π_{i,σ} = f_i(σ, ·)`. Either way every `π_{i,σ}^r` is the identity.
pub fn unanimity_exponent(fs: &PolymorphismTuple, tight: bool) -> Result<u128> {
    if tight {
        let mut r = 1u128;
        for f in fs.tables() {
            for s in 0..f.alphabet_size() {
                r = lcm(r, f.row(s as u8)?.permutation_order()?);
            }
        }
        Ok(r)
    } else {
        fs.tables().iter().try_fold(1u128, |acc, f| {
            (1..=f.alphabet_size() as u128)
                .try_fold(acc, |a, j| a.checked_mul(j))
                .ok_or_else(|| Error::Capability("∏ k_i! overflows".into()))
        })
    }
}

/// Iterates a Latin-square polymorphism until every diagonal is fixed.
pub fn construct_iterated_witness(
    predicate: &Predicate,
    fs: &PolymorphismTuple,
    limits: &Limits,
) -> Result<IteratedWitness> {
    fs.check_signature(predicate.signature())?;
    if fs.arity() != 2 || !fs.tables().iter().all(FunctionTable::is_latin_square) {
        return Err(Error::Precondition("the base tuple must consist of Latin squares".into()));
    }
    if !is_polymorphism(predicate, fs)? {
        return Err(Error::Precondition("the base tuple is not a polymorphism".into()));
    }
    let exponent = unanimity_exponent(fs, limits.tight_exponent)?;
    if exponent + 1 > limits.witness_arity_cap as u128 {
        return Err(Error::Capability(format!(
            "witness arity {} exceeds the cap of {}",
            exponent + 1,
            limits.witness_arity_cap
        )));
    }
    let polymorphism = iterate_polymorphism(fs, exponent as usize)?;
    let verification = verify(predicate, &polymorphism, true)?
        .ok_or_else(|| Error::Precondition("iterated witness failed verification".into()))?;
    Ok(IteratedWitness {
        exponent,
        unanimous: is_unanimous_tuple(&polymorphism),
        non_dictatorial: permutation_dictators(&polymorphism).is_empty(),
        polymorphism,
        verification,
    })
}
