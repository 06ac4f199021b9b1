//! Classification of a single polymorphism as dictatorial type, certificate
//! type, both, or neither.

use crate::error::Result;
use crate::function::FunctionTable;
use crate::phi::PhiFamily;
use crate::polymorphism::PolymorphismTuple;
use crate::predicate::{Certificate, Predicate};
use serde::Serialize;

/// One reason a tuple counts as trivial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TypeWitness {
    /// `f_i(x) = φ_i(x_j)` for every `i`, with `(φ_i)` a member of Φ.
    Dictatorial { coordinate: usize, phi: Vec<FunctionTable> },
    /// Every `f_i` with `i ∈ dom ρ` is the constant `ρ_i`, and `ρ` is a certificate.
    CertificateType { certificate: Certificate },
}

/// Every witness that applies, dictatorial ones first. Empty means neither.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TypeVerdict {
    pub witnesses: Vec<TypeWitness>,
}

impl TypeVerdict {
    pub fn is_neither(&self) -> bool {
        self.witnesses.is_empty()
    }

    pub fn is_dictatorial(&self) -> bool {
        self.witnesses.iter().any(|w| matches!(w, TypeWitness::Dictatorial { .. }))
    }

    pub fn is_certificate_type(&self) -> bool {
        self.witnesses.iter().any(|w| matches!(w, TypeWitness::CertificateType { .. }))
    }

    pub fn dictators(&self) -> impl Iterator<Item = (usize, &[FunctionTable])> {
        self.witnesses.iter().filter_map(|w| match w {
            TypeWitness::Dictatorial { coordinate, phi } => Some((*coordinate, phi.as_slice())),
            _ => None,
        })
    }

    pub fn certificates(&self) -> impl Iterator<Item = &Certificate> {
        self.witnesses.iter().filter_map(|w| match w {
            TypeWitness::CertificateType { certificate } => Some(certificate),
            _ => None,
        })
    }

    /// Short tag: `dictatorial`, `certificate`, `both` or `neither`.
    pub fn kind(&self) -> &'static str {
        match (self.is_dictatorial(), self.is_certificate_type()) {
            (true, true) => "both",
            (true, false) => "dictatorial",
            (false, true) => "certificate",
            (false, false) => "neither",
        }
    }
}

fn check_inputs(predicate: &Predicate, phi: &PhiFamily, fs: &PolymorphismTuple) -> Result<()> {
    fs.check_signature(predicate.signature())?;
    phi.check_signature(predicate.signature())
}

/// The largest assignment `fs` conforms to: every coordinate whose function is constant.
fn constant_part(fs: &PolymorphismTuple) -> Certificate {
    Certificate::from_pairs(fs.tables().iter().enumerate().filter_map(|(i, f)| f.constant_value().map(|c| (i, c))))
}

fn dictator_witnesses(phi: &PhiFamily, fs: &PolymorphismTuple) -> Vec<TypeWitness> {
    let mut out = Vec::new();
    for j in 0..fs.arity() {
        let Some(phis) = fs.tables().iter().map(|f| f.dictator_phi(j)).collect::<Option<Vec<_>>>() else {
            continue;
        };
        let raw: Vec<&[u8]> = phis.iter().map(Vec::as_slice).collect();
        if phi.contains(&raw) {
            let phi = phis
                .into_iter()
                .zip(fs.tables())
                .map(|(t, f)| FunctionTable::unary(f.alphabet_size(), t).expect("dictator table is valid"))
                .collect();
            out.push(TypeWitness::Dictatorial { coordinate: j, phi });
        }
    }
    out
}

/// Every `j` with `f_i(x) = π_i(x_j)` for permutations `π_i`, i.e. the
/// dictatorial witnesses against the family of all permutation tuples.
pub fn permutation_dictators(fs: &PolymorphismTuple) -> Vec<usize> {
    (0..fs.arity())
        .filter(|&j| {
            fs.tables().iter().all(|f| {
                f.dictator_phi(j).is_some_and(|phi| {
                    let mut seen = vec![false; phi.len()];
                    phi.iter().all(|&v| !std::mem::replace(&mut seen[v as usize], true))
                })
            })
        })
        .collect()
}

/// Inclusion-minimal certificates among the sub-assignments of `rho_max`.
fn minimal_certificates(predicate: &Predicate, rho_max: &Certificate) -> Vec<Certificate> {
    if !predicate.is_certificate_unchecked(rho_max) {
        return Vec::new();
    }
    let pairs: Vec<(usize, u8)> = rho_max.entries().collect();
    let mut found: Vec<Certificate> = Vec::new();
    for size in 0..=pairs.len() {
        for picks in crate::predicate::subsets_of_size(pairs.len(), size) {
            let rho = Certificate::from_pairs(picks.iter().map(|&p| pairs[p]));
            if found.iter().any(|c| rho.extends(c)) {
                continue;
            }
            if predicate.is_certificate_unchecked(&rho) {
                found.push(rho);
            }
        }
    }
    found
}

/// All dictatorial witnesses `(j, φ ∈ Φ)` and all inclusion-minimal
/// certificates `fs` conforms to. Polymorphism-hood of `fs` is not re-checked.
pub fn classify_polymorphism(predicate: &Predicate, phi: &PhiFamily, fs: &PolymorphismTuple) -> Result<TypeVerdict> {
    check_inputs(predicate, phi, fs)?;
    let mut witnesses = dictator_witnesses(phi, fs);
    witnesses.extend(
        minimal_certificates(predicate, &constant_part(fs))
            .into_iter()
            .map(|certificate| TypeWitness::CertificateType { certificate }),
    );
    Ok(TypeVerdict { witnesses })
}

/// Fast yes/no classification for bulk census work. A tuple conforms to some
/// certificate iff its full constant part is one, so only that one is checked.
#[derive(Debug)]
pub struct TypeChecker<'a> {
    predicate: &'a Predicate,
    phi: &'a PhiFamily,
    /// Certificate status per partial assignment, indexed in base `k_i + 1`
    /// with digit `k_i` meaning "unassigned". Empty when too large to tabulate.
    certificate_table: Vec<bool>,
}

const MAX_CERTIFICATE_TABLE: usize = 1 << 22;

impl<'a> TypeChecker<'a> {
    pub fn new(predicate: &'a Predicate, phi: &'a PhiFamily) -> Result<Self> {
        phi.check_signature(predicate.signature())?;
        let sizes = predicate.signature().sizes();
        let total = sizes.iter().try_fold(1usize, |acc, &k| acc.checked_mul(k + 1)).unwrap_or(usize::MAX);
        let certificate_table = if total <= MAX_CERTIFICATE_TABLE {
            (0..total)
                .map(|mut idx| {
                    let mut rho = Certificate::new();
                    for (i, &k) in sizes.iter().enumerate() {
                        let d = idx % (k + 1);
                        idx /= k + 1;
                        if d < k {
                            rho.insert(i, d as u8);
                        }
                    }
                    predicate.is_certificate_unchecked(&rho)
                })
                .collect()
        } else {
            Vec::new()
        };
        Ok(TypeChecker { predicate, phi, certificate_table })
    }

    pub fn has_dictatorial(&self, fs: &PolymorphismTuple) -> bool {
        !dictator_witnesses(self.phi, fs).is_empty()
    }

    pub fn has_certificate(&self, fs: &PolymorphismTuple) -> bool {
        if self.certificate_table.is_empty() {
            return self.predicate.is_certificate_unchecked(&constant_part(fs));
        }
        let mut idx = 0;
        let mut scale = 1;
        for (f, k) in fs.tables().iter().zip(self.predicate.signature().sizes()) {
            idx += scale * f.constant_value().map_or(*k, usize::from);
            scale *= k + 1;
        }
        self.certificate_table[idx]
    }

    pub fn is_trivial(&self, fs: &PolymorphismTuple) -> Result<bool> {
        fs.check_signature(self.predicate.signature())?;
        Ok(self.has_dictatorial(fs) || self.has_certificate(fs))
    }

    /// Full classification, same as [`classify_polymorphism`].
    pub fn classify(&self, fs: &PolymorphismTuple) -> Result<TypeVerdict> {
        classify_polymorphism(self.predicate, self.phi, fs)
    }
}
