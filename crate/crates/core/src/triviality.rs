//! Φ-triviality decisions, the arity-1 to arity-2 reduction report and the
//! detectors for its exceptional structures.

use crate::classify::{permutation_dictators, TypeChecker, TypeVerdict};
use crate::enumerate::{EngineOptions, Enumeration};
use crate::error::{Error, Result};
use crate::function::{enumerate_latin_squares, FunctionTable, DEFAULT_LATIN_K_MAX};
use crate::phi::PhiFamily;
use crate::polymorphism::{is_polymorphism, PolymorphismTuple};
use crate::predicate::Predicate;
use serde::Serialize;
use std::ops::ControlFlow;

/// How many non-trivial polymorphisms a report keeps.
pub const MAX_REPORTED_WITNESSES: usize = 5;

/// Size limits for the detectors and witness constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Largest alphabet for which Latin squares are enumerated.
    pub latin_k_max: usize,
    /// Largest number of binary coordinates for the AND/OR search.
    pub and_or_max_binary: usize,
    /// Largest arity of an iterated Latin-square witness.
    pub witness_arity_cap: usize,
    /// Product of Latin-square counts over coordinates searched at most.
    pub latin_product_max: u128,
    /// Iterate Latin-square witnesses to the lcm of the row-permutation
    /// orders instead of `∏ k_i!`.
    pub tight_exponent: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            latin_k_max: DEFAULT_LATIN_K_MAX,
            and_or_max_binary: 20,
            witness_arity_cap: 17,
            latin_product_max: 50_000_000,
            tight_exponent: false,
        }
    }
}

/// Verdict counts over every enumerated polymorphism.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Census {
    pub dictatorial_only: usize,
    pub certificate_only: usize,
    pub both: usize,
    pub neither: usize,
}

impl Census {
    pub fn total(&self) -> usize {
        self.dictatorial_only + self.certificate_only + self.both + self.neither
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub polymorphism: PolymorphismTuple,
    pub verdict: TypeVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrivialityReport {
    pub trivial: bool,
    pub checked_arity: usize,
    pub polymorphism_count: usize,
    pub census: Census,
    /// Polymorphisms of neither type. A tuple whose coordinates all share one
    /// function comes first when there is one; the rest follow in
    /// enumeration order.
    pub witnesses: Vec<Witness>,
}

fn prepare(predicate: &Predicate, phi: &PhiFamily) -> Result<()> {
    predicate.ensure_non_degenerate()?;
    phi.check_signature(predicate.signature())
}

fn is_uniform(fs: &PolymorphismTuple) -> bool {
    fs.tables().windows(2).all(|w| w[0] == w[1])
}

/// Enumerates every `n`-ary polymorphism and classifies each against Φ.
pub fn check_trivial_for_n(
    predicate: &Predicate,
    phi: &PhiFamily,
    n: usize,
    options: &EngineOptions,
) -> Result<TrivialityReport> {
    prepare(predicate, phi)?;
    let checker = TypeChecker::new(predicate, phi)?;
    let mut census = Census::default();
    let mut neither: Vec<PolymorphismTuple> = Vec::new();
    let mut uniform: Option<PolymorphismTuple> = None;
    let mut tally = |fs: &PolymorphismTuple| match (checker.has_dictatorial(fs), checker.has_certificate(fs)) {
        (true, true) => census.both += 1,
        (true, false) => census.dictatorial_only += 1,
        (false, true) => census.certificate_only += 1,
        (false, false) => {
            census.neither += 1;
            if uniform.is_none() && is_uniform(fs) {
                uniform = Some(fs.clone());
            }
            if neither.len() < MAX_REPORTED_WITNESSES {
                neither.push(fs.clone());
            }
        }
    };

    let engine = Enumeration::new(predicate, n)?;
    if options.workers > 1 {
        for fs in engine.collect(options)? {
            tally(&fs);
        }
    } else {
        engine.for_each(options.budget, |fs| {
            tally(fs);
            ControlFlow::Continue(())
        })?;
    }

    if let Some(u) = uniform {
        neither.retain(|fs| *fs != u);
        neither.insert(0, u);
        neither.truncate(MAX_REPORTED_WITNESSES);
    }
    let mut witnesses = Vec::with_capacity(neither.len());
    for fs in neither {
        if !is_polymorphism(predicate, &fs)? {
            return Err(Error::Precondition("enumerated tuple failed re-verification".into()));
        }
        let verdict = checker.classify(&fs)?;
        witnesses.push(Witness { polymorphism: fs, verdict });
    }
    Ok(TrivialityReport {
        trivial: census.neither == 0,
        checked_arity: n,
        polymorphism_count: census.total(),
        census,
        witnesses,
    })
}

/// Decides Φ-triviality for every arity by checking arity 2 alone.
pub fn decide_trivial(predicate: &Predicate, phi: &PhiFamily, options: &EngineOptions) -> Result<TrivialityReport> {
    check_trivial_for_n(predicate, phi, 2, options)
}

/// The first non-dictatorial AND/OR polymorphism: binary coordinates take
/// `x₀ ∧ x₁` or `x₀ ∨ x₁`, larger alphabets take `x₀`. Assignments are tried
/// with AND before OR and the first binary coordinate most significant.
pub fn find_and_or_polymorphism(predicate: &Predicate, limits: &Limits) -> Result<Option<PolymorphismTuple>> {
    predicate.ensure_non_degenerate()?;
    let sizes = predicate.signature().sizes();
    let binary: Vec<usize> = (0..sizes.len()).filter(|&i| sizes[i] == 2).collect();
    if binary.len() > limits.and_or_max_binary {
        return Err(Error::Capability(format!(
            "{} binary coordinates exceed the AND/OR search limit of {}",
            binary.len(),
            limits.and_or_max_binary
        )));
    }
    for choice in 0u64..(1u64 << binary.len()) {
        let tables = sizes
            .iter()
            .enumerate()
            .map(|(i, &k)| match binary.iter().position(|&b| b == i) {
                Some(pos) if choice >> (binary.len() - 1 - pos) & 1 == 1 => FunctionTable::or(),
                Some(_) => FunctionTable::and(),
                None => FunctionTable::projection(k, 2, 0).expect("small table"),
            })
            .collect();
        let fs = PolymorphismTuple::new(tables)?;
        if permutation_dictators(&fs).is_empty() && is_polymorphism(predicate, &fs)? {
            return Ok(Some(fs));
        }
    }
    Ok(None)
}

/// True iff for every `y ∈ P` both sections `(f_i(y_i, ·))_i` and
/// `(f_i(·, y_i))_i` are members of Φ.
pub fn conforms_to(predicate: &Predicate, phi: &PhiFamily, fs: &PolymorphismTuple) -> Result<bool> {
    fs.check_signature(predicate.signature())?;
    if fs.arity() != 2 {
        return Err(Error::invalid("conformance is defined for binary functions"));
    }
    for y in predicate.tuples() {
        let rows: Vec<FunctionTable> = fs.tables().iter().zip(y).map(|(f, &a)| f.row(a)).collect::<Result<_>>()?;
        let columns: Vec<FunctionTable> =
            fs.tables().iter().zip(y).map(|(f, &b)| f.column(b)).collect::<Result<_>>()?;
        if !phi.contains_tables(&rows) || !phi.contains_tables(&columns) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn latin_square_search(
    predicate: &Predicate,
    phi: Option<&PhiFamily>,
    limits: &Limits,
) -> Result<Option<PolymorphismTuple>> {
    let per_coordinate = predicate
        .signature()
        .sizes()
        .iter()
        .map(|&k| enumerate_latin_squares(k, limits.latin_k_max))
        .collect::<Result<Vec<_>>>()?;
    let space: u128 = per_coordinate.iter().map(|s| s.len() as u128).product();
    if space > limits.latin_product_max {
        return Err(Error::Capability(format!(
            "{space} Latin-square tuples exceed the search limit of {}",
            limits.latin_product_max
        )));
    }
    let m = per_coordinate.len();
    let mut choice = vec![0usize; m];
    loop {
        let tables = choice.iter().zip(&per_coordinate).map(|(&c, s)| s[c].clone()).collect();
        let fs = PolymorphismTuple::new(tables)?;
        let conforming = match phi {
            Some(phi) => conforms_to(predicate, phi, &fs)?,
            None => true,
        };
        if conforming && is_polymorphism(predicate, &fs)? {
            return Ok(Some(fs));
        }
        // odometer with the last coordinate fastest
        let mut i = m;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < per_coordinate[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// The first Latin-square polymorphism conforming to Φ, over the product of
/// per-coordinate Latin squares in lexicographic order.
pub fn find_latin_square_polymorphism(
    predicate: &Predicate,
    phi: &PhiFamily,
    limits: &Limits,
) -> Result<Option<PolymorphismTuple>> {
    prepare(predicate, phi)?;
    latin_square_search(predicate, Some(phi), limits)
}

/// The first Latin-square polymorphism, with no conformance requirement.
pub fn find_any_latin_square_polymorphism(predicate: &Predicate, limits: &Limits) -> Result<Option<PolymorphismTuple>> {
    predicate.ensure_non_degenerate()?;
    latin_square_search(predicate, None, limits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessShape {
    /// Every `f_i ∈ {0, 1, x}`.
    ConstantsOrIdentity,
    /// Every `f_i ∈ {x, x̄}`.
    IdentityOrNegation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapedWitness {
    pub shape: WitnessShape,
    pub polymorphism: PolymorphismTuple,
    pub verdict: TypeVerdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClosingAssignment {
    pub coordinate: usize,
    pub value: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionCases {
    pub closed_under_setting: Vec<ClosingAssignment>,
    pub and_or: Option<PolymorphismTuple>,
    pub latin_square: Option<PolymorphismTuple>,
}

impl ReductionCases {
    pub fn any(&self) -> bool {
        !self.closed_under_setting.is_empty() || self.and_or.is_some() || self.latin_square.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub trivial_at_1: bool,
    pub arity_one: TrivialityReport,
    /// Present for all-binary predicates that are not trivial at arity 1.
    pub furthermore_witness: Option<ShapedWitness>,
    /// Present when trivial at arity 1. The flags describe structure only;
    /// the arity-2 verdict is never inferred from them.
    pub cases: Option<ReductionCases>,
}

fn shape_of(fs: &PolymorphismTuple) -> Option<WitnessShape> {
    let tables: Vec<&[u8]> = fs.tables().iter().map(FunctionTable::table).collect();
    if tables.iter().all(|t| matches!(t, [0, 0] | [1, 1] | [0, 1])) {
        Some(WitnessShape::ConstantsOrIdentity)
    } else if tables.iter().all(|t| matches!(t, [0, 1] | [1, 0])) {
        Some(WitnessShape::IdentityOrNegation)
    } else {
        None
    }
}

/// Reshapes an arity-1 witness `f` of neither type: `g_i = f_i ∘ f_i` lies in
/// `{0, 1, x}`; if `g` is dictatorial then `f` itself has every `f_i ∈ {x, x̄}`.
fn furthermore_witness(predicate: &Predicate, phi: &PhiFamily, f: &PolymorphismTuple) -> Result<ShapedWitness> {
    let checker = TypeChecker::new(predicate, phi)?;
    let g = PolymorphismTuple::new(f.tables().iter().map(|t| t.compose(t)).collect::<Result<_>>()?)?;
    let g_verdict = checker.classify(&g)?;
    let chosen = if g_verdict.is_dictatorial() { f.clone() } else { g };
    let verdict = checker.classify(&chosen)?;
    let shape = shape_of(&chosen)
        .ok_or_else(|| Error::Precondition("reshaped witness is outside both stated shapes".into()))?;
    if !verdict.is_neither() || !is_polymorphism(predicate, &chosen)? {
        return Err(Error::Precondition("reshaped witness failed verification".into()));
    }
    Ok(ShapedWitness { shape, polymorphism: chosen, verdict })
}

/// Runs the arity-1 check and, depending on its outcome, either produces the
/// shaped arity-1 witness or evaluates the three exceptional-case detectors.
/// Φ must consist of permutations only.
pub fn reduction_report(
    predicate: &Predicate,
    phi: &PhiFamily,
    options: &EngineOptions,
    limits: &Limits,
) -> Result<ReductionReport> {
    prepare(predicate, phi)?;
    if !phi.all_permutations_only() {
        return Err(Error::Precondition(
            "the reduction needs a Φ made of permutations; use decide_trivial for other families".into(),
        ));
    }
    let arity_one = check_trivial_for_n(predicate, phi, 1, options)?;
    if !arity_one.trivial {
        let furthermore_witness = if predicate.signature().is_binary() {
            Some(furthermore_witness(predicate, phi, &arity_one.witnesses[0].polymorphism)?)
        } else {
            None
        };
        return Ok(ReductionReport { trivial_at_1: false, arity_one, furthermore_witness, cases: None });
    }
    let closed_under_setting = predicate
        .closing_assignments()
        .into_iter()
        .map(|(coordinate, value)| ClosingAssignment { coordinate, value })
        .collect();
    let cases = ReductionCases {
        closed_under_setting,
        and_or: find_and_or_polymorphism(predicate, limits)?,
        latin_square: find_latin_square_polymorphism(predicate, phi, limits)?,
    };
    Ok(ReductionReport { trivial_at_1: true, arity_one, furthermore_witness: None, cases: Some(cases) })
}
