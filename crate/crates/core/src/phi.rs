//! Collections Φ of unary-function tuples that define the allowed dictators.

use crate::error::{Error, Result};
use crate::function::FunctionTable;
use crate::predicate::Signature;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Members {
    /// An explicit list of `m`-tuples of unary tables.
    Explicit(BTreeSet<Vec<Vec<u8>>>),
    /// Every tuple whose `i`-th entry comes from `choices[i]`.
    Product(Vec<BTreeSet<Vec<u8>>>),
}

/// A family Φ of tuples `(φ_0, …, φ_{m-1})` with `φ_i: Σ_i → Σ_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiFamily {
    name: String,
    sizes: Vec<usize>,
    members: Members,
}

/// On-disk shape of a custom family: `{"members": [[table, …], …]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhiFile {
    pub members: Vec<Vec<FunctionTable>>,
}

/// Largest alphabet for which [`PhiFamily::all_permutations`] is built.
pub const MAX_PERMUTATION_ALPHABET: usize = 8;

fn identity_table(k: usize) -> Vec<u8> {
    (0..k as u8).collect()
}

impl PhiFamily {
    /// `{(id, …, id)}`.
    pub fn identity(signature: &Signature) -> Self {
        let member = signature.sizes().iter().map(|&k| identity_table(k)).collect();
        PhiFamily {
            name: "id".into(),
            sizes: signature.sizes().to_vec(),
            members: Members::Explicit(BTreeSet::from([member])),
        }
    }

    /// `{id, ¬}^m` over `{0,1}^m`.
    pub fn negations(m: usize) -> Self {
        PhiFamily {
            name: "neg".into(),
            sizes: vec![2; m],
            members: Members::Product(vec![BTreeSet::from([vec![0, 1], vec![1, 0]]); m]),
        }
    }

    /// `{(id, …, id), (¬, …, ¬)}` over `{0,1}^m`.
    pub fn identity_or_negation(m: usize) -> Self {
        PhiFamily {
            name: "idneg-uniform".into(),
            sizes: vec![2; m],
            members: Members::Explicit(BTreeSet::from([vec![vec![0, 1]; m], vec![vec![1, 0]; m]])),
        }
    }

    /// `{0, 1, id, ¬}^m` over `{0,1}^m`.
    pub fn constants_identity_negation(m: usize) -> Self {
        let all = BTreeSet::from([vec![0, 0], vec![1, 1], vec![0, 1], vec![1, 0]]);
        PhiFamily { name: "const-id-neg".into(), sizes: vec![2; m], members: Members::Product(vec![all; m]) }
    }

    /// Every tuple of permutations. Alphabets above [`MAX_PERMUTATION_ALPHABET`]
    /// are refused since the family is stored explicitly per coordinate.
    pub fn all_permutations(signature: &Signature) -> Result<Self> {
        if let Some(&k) = signature.sizes().iter().find(|&&k| k > MAX_PERMUTATION_ALPHABET) {
            return Err(Error::Capability(format!(
                "all-permutation family over an alphabet of size {k} (limit {MAX_PERMUTATION_ALPHABET})"
            )));
        }
        let choices = signature
            .sizes()
            .iter()
            .map(|&k| {
                let mut perms = BTreeSet::new();
                permutations(&mut identity_table(k), 0, &mut perms);
                perms
            })
            .collect();
        Ok(PhiFamily {
            name: "all-permutations".into(),
            sizes: signature.sizes().to_vec(),
            members: Members::Product(choices),
        })
    }

    pub fn from_members(signature: &Signature, members: Vec<Vec<FunctionTable>>) -> Result<Self> {
        let sizes = signature.sizes().to_vec();
        let mut set = BTreeSet::new();
        for member in members {
            if member.len() != sizes.len() {
                return Err(Error::SignatureMismatch(format!(
                    "Φ member has {} entries, predicate has {} coordinates",
                    member.len(),
                    sizes.len()
                )));
            }
            let mut tables = Vec::with_capacity(member.len());
            for (phi, &k) in member.into_iter().zip(&sizes) {
                if phi.arity() != 1 || phi.alphabet_size() != k {
                    return Err(Error::SignatureMismatch(format!(
                        "Φ entries must be unary over the coordinate alphabet (k = {k}), got k = {}, n = {}",
                        phi.alphabet_size(),
                        phi.arity()
                    )));
                }
                tables.push(phi.into_table());
            }
            set.insert(tables);
        }
        Ok(PhiFamily { name: "custom".into(), sizes, members: Members::Explicit(set) })
    }

    pub fn from_file(signature: &Signature, file: PhiFile) -> Result<Self> {
        PhiFamily::from_members(signature, file.members)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn check_signature(&self, signature: &Signature) -> Result<()> {
        if self.sizes != signature.sizes() {
            return Err(Error::SignatureMismatch(format!(
                "Φ over alphabets {:?} used with signature {:?}",
                self.sizes,
                signature.sizes()
            )));
        }
        Ok(())
    }

    /// Membership of `(φ_0, …, φ_{m-1})` given as unary tables.
    pub fn contains(&self, phis: &[&[u8]]) -> bool {
        if phis.len() != self.sizes.len() {
            return false;
        }
        match &self.members {
            Members::Explicit(set) => set.iter().any(|m| m.iter().zip(phis).all(|(a, b)| a.as_slice() == *b)),
            Members::Product(choices) => choices.iter().zip(phis).all(|(c, phi)| c.contains(*phi)),
        }
    }

    pub fn contains_tables(&self, phis: &[FunctionTable]) -> bool {
        let raw: Vec<&[u8]> = phis.iter().map(FunctionTable::table).collect();
        phis.iter().all(|f| f.arity() == 1) && self.contains(&raw)
    }

    /// Number of member tuples.
    pub fn len(&self) -> u128 {
        match &self.members {
            Members::Explicit(set) => set.len() as u128,
            Members::Product(choices) => choices.iter().map(|c| c.len() as u128).product(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Member tuples in canonical order. Product families are expanded.
    pub fn members(&self) -> Vec<Vec<FunctionTable>> {
        let raw: Vec<Vec<Vec<u8>>> = match &self.members {
            Members::Explicit(set) => set.iter().cloned().collect(),
            Members::Product(choices) => choices.iter().fold(vec![Vec::new()], |acc, choice| {
                acc.into_iter()
                    .flat_map(|prefix| {
                        choice.iter().map(move |phi| {
                            let mut p = prefix.clone();
                            p.push(phi.clone());
                            p
                        })
                    })
                    .collect()
            }),
        };
        raw.into_iter()
            .map(|m| {
                m.into_iter().zip(&self.sizes).map(|(t, &k)| FunctionTable::new(k, 1, t).expect("valid")).collect()
            })
            .collect()
    }

    /// True iff every member consists of permutations (derived from the members).
    pub fn all_permutations_only(&self) -> bool {
        let is_perm = |t: &Vec<u8>| {
            let mut seen = vec![false; t.len()];
            t.iter().all(|&v| !std::mem::replace(&mut seen[v as usize], true))
        };
        match &self.members {
            Members::Explicit(set) => set.iter().all(|m| m.iter().all(is_perm)),
            Members::Product(choices) => choices.iter().all(|c| c.iter().all(is_perm)),
        }
    }
}

fn permutations(items: &mut Vec<u8>, start: usize, out: &mut BTreeSet<Vec<u8>>) {
    if start == items.len() {
        out.insert(items.clone());
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permutations(items, start + 1, out);
        items.swap(start, i);
    }
}
