//! JSON formats for predicates, polymorphism tuples and Φ families.
//!
//! A predicate file is either explicit,
//! `{"m": 3, "sizes": [2, 2, 2], "tuples": [[0, 0, 1], …]}`,
//! or symmetric, `{"symmetric": {"m": 3, "weights": [1, 2]}}`.
//! Canonical output always uses the explicit form with sorted tuples.

use crate::error::{Error, Result};
use crate::phi::{PhiFamily, PhiFile};
use crate::polymorphism::PolymorphismTuple;
use crate::predicate::{Predicate, Signature};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExplicitPredicate {
    pub m: usize,
    pub sizes: Vec<usize>,
    pub tuples: Vec<Vec<u8>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetricSpec {
    pub m: usize,
    pub weights: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum PredicateFile {
    Symmetric { symmetric: SymmetricSpec },
    Explicit(ExplicitPredicate),
}

fn json_error(what: &str, e: serde_json::Error) -> Error {
    Error::InvalidArgument(format!("malformed {what}: {e}"))
}

pub fn parse_predicate(text: &str) -> Result<Predicate> {
    match serde_json::from_str::<PredicateFile>(text).map_err(|e| json_error("predicate file", e))? {
        PredicateFile::Symmetric { symmetric } => Predicate::symmetric(symmetric.m, symmetric.weights),
        PredicateFile::Explicit(p) => {
            if p.m != p.sizes.len() {
                return Err(Error::invalid(format!("m = {} but {} sizes given", p.m, p.sizes.len())));
            }
            Predicate::new(Signature::new(p.sizes)?, p.tuples)
        }
    }
}

pub fn predicate_document(predicate: &Predicate) -> ExplicitPredicate {
    ExplicitPredicate {
        m: predicate.signature().len(),
        sizes: predicate.signature().sizes().to_vec(),
        tuples: predicate.tuples().to_vec(),
    }
}

pub fn predicate_to_json(predicate: &Predicate) -> String {
    serde_json::to_string(&predicate_document(predicate)).expect("plain data serializes")
}

/// A tuple file: `{"n": 2, "tables": [{"k": 2, "n": 2, "table": […]}, …]}`.
pub fn parse_tuple(text: &str) -> Result<PolymorphismTuple> {
    serde_json::from_str(text).map_err(|e| json_error("tuple file", e))
}

pub fn tuple_to_json(fs: &PolymorphismTuple) -> String {
    serde_json::to_string(fs).expect("plain data serializes")
}

/// One serialized tuple per line.
pub fn tuples_to_jsonl(tuples: &[PolymorphismTuple]) -> String {
    tuples.iter().map(|fs| tuple_to_json(fs) + "\n").collect()
}

/// A Φ file: `{"members": [[unary table, …], …]}`.
pub fn parse_phi(signature: &Signature, text: &str) -> Result<PhiFamily> {
    let file: PhiFile = serde_json::from_str(text).map_err(|e| json_error("Φ file", e))?;
    PhiFamily::from_file(signature, file)
}
