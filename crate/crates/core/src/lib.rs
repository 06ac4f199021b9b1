//! Multi-sorted polymorphisms of finite predicates.
//!
//! A predicate `P ⊆ Σ₀ × ⋯ × Σ_{m-1}` is stored explicitly over canonical
//! alphabets `0..k_i`. A polymorphism is a tuple of functions `f_i: Σ_iⁿ → Σ_i`
//! that maps every `m × n` matrix whose columns lie in `P` to a tuple in `P`.
//!
//! The crate decides Φ-triviality (every polymorphism is a dictator twisted by
//! a member of Φ, or is pinned to a certificate), detects the exceptional
//! AND/OR, Latin-square and coordinate-closure structures that separate
//! arity 1 from arity 2, classifies all polymorphisms of symmetric Boolean
//! predicates, and decides impossibility domains with respect to unanimity.
//!
//! Conventions used throughout:
//!
//! * coordinates of a predicate and arguments of a function are 0-based;
//! * a function table lists `f(x_0, …, x_{n-1})` at index `Σ x_j · kʲ`, so the
//!   first argument is the least significant digit;
//! * every search is deterministic and budgeted in table-entry assignments.

pub mod classify;
pub mod enumerate;
mod error;
pub mod function;
pub mod impossibility;
pub mod io;
pub mod phi;
pub mod polymorphism;
pub mod predicate;
pub mod symmetric;
pub mod triviality;

pub use classify::{classify_polymorphism, TypeChecker, TypeVerdict, TypeWitness};
pub use enumerate::{enumerate_polymorphisms, scan_unpruned, EngineOptions, Enumeration};
pub use error::{Error, PartialEnumeration, Result};
pub use function::{enumerate_latin_squares, AffineForm, FunctionAnalysis, FunctionKind, FunctionTable};
pub use impossibility::{check_impossibility_unanimity, UnanimityVerdict};
pub use phi::PhiFamily;
pub use polymorphism::{find_violation, is_polymorphism, InputMatrix, PolymorphismTuple};
pub use predicate::{Certificate, NonDegeneracyReport, Predicate, Signature};
pub use symmetric::{classify_symmetric, polymorphism_family, SymmetricFamily, WeightSet};
pub use triviality::{check_trivial_for_n, decide_trivial, reduction_report, Limits, TrivialityReport};
