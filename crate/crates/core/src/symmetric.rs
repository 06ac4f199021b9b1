//! Symmetric Boolean predicates: which ones are trivial, and the exact
//! structure of their polymorphisms.

use crate::enumerate::{enumerate_polymorphisms, scan_unpruned, EngineOptions};
use crate::error::{Error, Result};
use crate::phi::PhiFamily;
use crate::polymorphism::PolymorphismTuple;
use crate::predicate::{Certificate, Predicate};
use crate::triviality::check_trivial_for_n;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// Largest `m` a weight set may have (the mask is a `u64`).
pub const MAX_SYMMETRIC_M: usize = 24;

/// A set `W ⊆ {0, …, m}` of allowed Hamming weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WeightSet {
    m: usize,
    /// Bit `w` set iff `w ∈ W`.
    mask: u64,
}

impl WeightSet {
    pub fn new(m: usize, weights: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = 0u64;
        for w in weights {
            if w > m {
                return Err(Error::invalid(format!("weight {w} exceeds m = {m}")));
            }
            mask |= 1 << w;
        }
        WeightSet::from_mask(m, mask)
    }

    pub fn from_mask(m: usize, mask: u64) -> Result<Self> {
        if m == 0 || m > MAX_SYMMETRIC_M {
            return Err(Error::invalid(format!("m = {m} outside 1..={MAX_SYMMETRIC_M}")));
        }
        if mask >> (m + 1) != 0 {
            return Err(Error::invalid(format!("weight mask {mask:#b} has weights above m = {m}")));
        }
        Ok(WeightSet { m, mask })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn contains(&self, w: usize) -> bool {
        w <= self.m && self.mask >> w & 1 == 1
    }

    pub fn weights(&self) -> Vec<usize> {
        (0..=self.m).filter(|&w| self.contains(w)).collect()
    }

    pub fn to_predicate(&self) -> Predicate {
        Predicate::symmetric(self.m, self.weights()).expect("m is within limits")
    }

    /// `w ∈ W ⇔ m − w ∈ W`.
    pub fn complement_closed(&self) -> bool {
        (0..=self.m).all(|w| self.contains(w) == self.contains(self.m - w))
    }

    /// Closed form of non-degeneracy: some weight in `1..=m` and some in
    /// `0..m` (full projections), and some adjacent pair with exactly one
    /// member in `W` (every coordinate matters).
    pub fn is_non_degenerate(&self) -> bool {
        let projections = (1..=self.m).any(|w| self.contains(w)) && (0..self.m).any(|w| self.contains(w));
        let relevant = (0..self.m).any(|w| self.contains(w) != self.contains(w + 1));
        projections && relevant
    }

    fn is_interval(&self, lo: usize, hi: usize) -> bool {
        self.mask == interval(lo, hi)
    }

    fn ensure_non_degenerate(&self) -> Result<()> {
        if self.is_non_degenerate() {
            Ok(())
        } else {
            Err(Error::Degenerate(format!("symmetric predicate m = {}, W = {self}", self.m)))
        }
    }
}

fn interval(lo: usize, hi: usize) -> u64 {
    if lo > hi {
        0
    } else {
        (u64::MAX >> (63 - hi)) & !((1u64 << lo) - 1)
    }
}

impl fmt::Display for WeightSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.weights().iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", ws.join(","))
    }
}

/// Named shapes of symmetric predicates. The first six are the shapes that
/// fail triviality with negations allowed; parameters follow the ranges
/// `AtLeast 1..m-1`, `AtLeastPlusZero 2..m`, `AtMost 1..m-1`, `AtMostPlusOne 0..m-2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "family", content = "w", rename_all = "snake_case")]
pub enum SymmetricFamily {
    EvenParity,
    OddParity,
    AtLeast(usize),
    AtLeastPlusZero(usize),
    AtMost(usize),
    AtMostPlusOne(usize),
    /// `{(0,1), (1,0)}`.
    OddPair,
    /// `{0ᵐ, 1ᵐ}`.
    Equality,
    TrivialComplementClosed,
    TrivialGeneric,
}

impl SymmetricFamily {
    /// True for the shapes that make a predicate non-trivial.
    pub fn is_obstruction(&self) -> bool {
        !matches!(
            self,
            SymmetricFamily::OddPair
                | SymmetricFamily::Equality
                | SymmetricFamily::TrivialComplementClosed
                | SymmetricFamily::TrivialGeneric
        )
    }
}

impl fmt::Display for SymmetricFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymmetricFamily::EvenParity => write!(f, "even-parity"),
            SymmetricFamily::OddParity => write!(f, "odd-parity"),
            SymmetricFamily::AtLeast(w) => write!(f, "at-least({w})"),
            SymmetricFamily::AtLeastPlusZero(w) => write!(f, "at-least({w})+zero"),
            SymmetricFamily::AtMost(w) => write!(f, "at-most({w})"),
            SymmetricFamily::AtMostPlusOne(w) => write!(f, "at-most({w})+ones"),
            SymmetricFamily::OddPair => write!(f, "odd-pair"),
            SymmetricFamily::Equality => write!(f, "equality"),
            SymmetricFamily::TrivialComplementClosed => write!(f, "trivial(complement-closed)"),
            SymmetricFamily::TrivialGeneric => write!(f, "trivial"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetricClassification {
    pub weights: WeightSet,
    /// Every matching family; overlapping shapes are all listed.
    pub families: Vec<SymmetricFamily>,
    pub phi_neg_trivial: bool,
    pub phi_id_trivial: bool,
    pub complement_closed: bool,
}

/// Which named shapes `W` has, and the two triviality verdicts they imply.
pub fn classify_symmetric(weights: &WeightSet) -> Result<SymmetricClassification> {
    weights.ensure_non_degenerate()?;
    let m = weights.m;
    let mut families = Vec::new();
    let evens = (0..=m).step_by(2).fold(0u64, |acc, w| acc | 1 << w);
    if weights.mask == evens {
        families.push(SymmetricFamily::EvenParity);
    }
    if weights.mask == interval(0, m) & !evens {
        families.push(SymmetricFamily::OddParity);
    }
    for w in 1..m {
        if weights.is_interval(w, m) {
            families.push(SymmetricFamily::AtLeast(w));
        }
    }
    for w in 2..=m {
        if weights.mask == interval(w, m) | 1 {
            families.push(SymmetricFamily::AtLeastPlusZero(w));
        }
    }
    for w in 1..m {
        if weights.is_interval(0, w) {
            families.push(SymmetricFamily::AtMost(w));
        }
    }
    for w in 0..m.saturating_sub(1) {
        if weights.mask == interval(0, w) | 1 << m {
            families.push(SymmetricFamily::AtMostPlusOne(w));
        }
    }
    let phi_neg_trivial = families.is_empty();
    let complement_closed = weights.complement_closed();
    if m == 2 && weights.mask == 0b010 {
        families.push(SymmetricFamily::OddPair);
    }
    if weights.mask == 1 | 1 << m {
        families.push(SymmetricFamily::Equality);
    }
    if phi_neg_trivial {
        families.push(if complement_closed {
            SymmetricFamily::TrivialComplementClosed
        } else {
            SymmetricFamily::TrivialGeneric
        });
    }
    Ok(SymmetricClassification {
        weights: *weights,
        families,
        phi_neg_trivial,
        phi_id_trivial: phi_neg_trivial && !complement_closed,
        complement_closed,
    })
}

/// The applicable item of the polymorphism classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "item", rename_all = "snake_case")]
pub enum StructureItem {
    /// `P = {(0,1),(1,0)}`: `f₂(x) = ¬f₁(¬x)`.
    OddPair,
    /// `P = {0ᵐ, 1ᵐ}`: all functions equal.
    AllEqual,
    /// All vectors of parity `parity`, `m ≥ 3`: affine with a common support.
    Affine { parity: u8 },
    /// Weight at most `w`: the one-sets are `(w+1)`-wise intersecting.
    IntersectingAtMost { w: usize },
    /// Weight at least `m − w`: the same with zeros and ones switched.
    IntersectingAtLeast { w: usize },
    /// Weight at most `w` plus `1ᵐ`: a common AND, or `≥ m − w` constant zeros.
    AndOrZeros { w: usize },
    /// Weight at least `m − w` plus `0ᵐ`: a common OR, or `≥ m − w` constant ones.
    OrOrOnes { w: usize },
    /// Everything else: a common dictator (negated ones allowed when
    /// complement-closed) or certificate type.
    DictatorOrCertificate { complement_closed: bool },
}

impl StructureItem {
    /// Position in the classification list, 1 to 6.
    pub fn number(&self) -> u8 {
        match self {
            StructureItem::OddPair => 1,
            StructureItem::AllEqual => 2,
            StructureItem::Affine { .. } => 3,
            StructureItem::IntersectingAtMost { .. } | StructureItem::IntersectingAtLeast { .. } => 4,
            StructureItem::AndOrZeros { .. } | StructureItem::OrOrOnes { .. } => 5,
            StructureItem::DictatorOrCertificate { .. } => 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureDescriptor {
    pub weights: WeightSet,
    pub item: StructureItem,
    #[serde(skip)]
    predicate: Predicate,
}

/// Picks the classification item for `W`, trying items 1 through 6 in order.
///
/// The weight-interval item is also applied at `m = 2`, where the general
/// fallback would be wrong (AND is a polymorphism of `{00, 01, 10}`).
pub fn polymorphism_family(weights: &WeightSet) -> Result<StructureDescriptor> {
    weights.ensure_non_degenerate()?;
    let m = weights.m;
    let mask = weights.mask;
    let evens = (0..=m).step_by(2).fold(0u64, |acc, w| acc | 1 << w);
    let item = if m == 2 && mask == 0b010 {
        StructureItem::OddPair
    } else if mask == 1 | 1 << m {
        StructureItem::AllEqual
    } else if m >= 3 && mask == evens {
        StructureItem::Affine { parity: 0 }
    } else if m >= 3 && mask == interval(0, m) & !evens {
        StructureItem::Affine { parity: 1 }
    } else if let Some(w) = (1..m).find(|&w| weights.is_interval(0, w)) {
        StructureItem::IntersectingAtMost { w }
    } else if let Some(w) = (1..m).find(|&w| weights.is_interval(m - w, m)) {
        StructureItem::IntersectingAtLeast { w }
    } else if let Some(w) = (1..m.saturating_sub(1)).find(|&w| mask == interval(0, w) | 1 << m) {
        StructureItem::AndOrZeros { w }
    } else if let Some(w) = (1..m.saturating_sub(1)).find(|&w| mask == interval(m - w, m) | 1) {
        StructureItem::OrOrOnes { w }
    } else {
        StructureItem::DictatorOrCertificate { complement_closed: weights.complement_closed() }
    };
    Ok(StructureDescriptor { weights: *weights, item, predicate: weights.to_predicate() })
}

impl StructureDescriptor {
    pub fn predicate(&self) -> &Predicate {
        &self.predicate
    }

    /// The item-specific membership test; true iff `fs` has the described structure.
    pub fn check(&self, fs: &PolymorphismTuple) -> Result<bool> {
        check_structure(self, fs)
    }
}

/// `(|J| + 1)·b` over GF(2).
fn parity_target(support: usize, b: u8) -> u8 {
    if b == 0 || support % 2 == 1 {
        0
    } else {
        b
    }
}

/// Tests `fs` against the structural condition of `descriptor.item`.
pub fn check_structure(descriptor: &StructureDescriptor, fs: &PolymorphismTuple) -> Result<bool> {
    fs.check_signature(descriptor.predicate.signature())?;
    let tables = fs.tables();
    let m = tables.len();
    let all_equal = || tables.windows(2).all(|w| w[0] == w[1]);
    Ok(match descriptor.item {
        StructureItem::OddPair => tables[1] == tables[0].dual()?,
        StructureItem::AllEqual => all_equal(),
        StructureItem::Affine { parity } => {
            let mut forms = Vec::with_capacity(m);
            for f in tables {
                match f.detect_affine()? {
                    Some(form) => forms.push(form),
                    None => return Ok(false),
                }
            }
            let support = &forms[0].coordinates;
            forms.iter().all(|a| &a.coordinates == support)
                && forms.iter().fold(0, |acc, a| acc ^ a.constant) == parity_target(support.len(), parity)
        }
        StructureItem::IntersectingAtMost { w } => check_kwise_intersecting(&families_from_functions(fs)?, w + 1)?,
        StructureItem::IntersectingAtLeast { w } => {
            check_kwise_intersecting(&families_from_functions(&fs.dual()?)?, w + 1)?
        }
        StructureItem::AndOrZeros { w } => {
            (all_equal() && tables[0].detect_and_of_subset()?.is_some())
                || tables.iter().filter(|f| f.constant_value() == Some(0)).count() >= m - w
        }
        StructureItem::OrOrOnes { w } => {
            (all_equal() && tables[0].detect_or_of_subset()?.is_some())
                || tables.iter().filter(|f| f.constant_value() == Some(1)).count() >= m - w
        }
        StructureItem::DictatorOrCertificate { complement_closed } => {
            let common_dictator = all_equal()
                && (0..fs.arity()).any(|j| match tables[0].dictator_phi(j).as_deref() {
                    Some([0, 1]) => true,
                    Some([1, 0]) => complement_closed,
                    _ => false,
                });
            let rho = Certificate::from_pairs(
                tables.iter().enumerate().filter_map(|(i, f)| f.constant_value().map(|c| (i, c))),
            );
            common_dictator || descriptor.predicate.is_certificate_unchecked(&rho)
        }
    })
}

/// A family of subsets of `{0, …, n-1}`, each stored as a bitmask.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetFamily {
    pub n: usize,
    pub sets: Vec<u32>,
}

impl SetFamily {
    pub fn new(n: usize, sets: impl IntoIterator<Item = u32>) -> Result<Self> {
        if n > 31 {
            return Err(Error::Capability(format!("set families over {n} points")));
        }
        let sets: BTreeSet<u32> = sets.into_iter().collect();
        if sets.iter().any(|&s| s >> n != 0) {
            return Err(Error::invalid(format!("set outside the ground set of size {n}")));
        }
        Ok(SetFamily { n, sets: sets.into_iter().collect() })
    }

    /// Members with no proper subset in the family.
    fn minimal(&self) -> Vec<u32> {
        self.sets.iter().copied().filter(|&s| !self.sets.iter().any(|&t| t != s && t & s == t)).collect()
    }
}

/// `F_i = {S : f_i(1_S) = 1}`. With the fixed encoding, the table index of
/// the indicator of `S` is the bitmask of `S` itself.
pub fn families_from_functions(fs: &PolymorphismTuple) -> Result<Vec<SetFamily>> {
    if fs.tables().iter().any(|f| f.alphabet_size() != 2) {
        return Err(Error::invalid("set families need binary functions"));
    }
    fs.tables()
        .iter()
        .map(|f| SetFamily::new(fs.arity(), (0..f.table().len() as u32).filter(|&s| f.get(s as usize) == 1)))
        .collect()
}

/// True iff every choice of `k` distinct families and one set from each has
/// a non-empty common intersection. Vacuous when fewer than `k` families exist.
pub fn check_kwise_intersecting(families: &[SetFamily], k: usize) -> Result<bool> {
    if k == 0 {
        return Err(Error::invalid("intersection order must be at least 1"));
    }
    // supersets never create an empty intersection, so minimal sets suffice
    let minimal: Vec<Vec<u32>> = families.iter().map(SetFamily::minimal).collect();
    let n = families.iter().map(|f| f.n).max().unwrap_or(0);
    let full = if n == 0 { 0 } else { u32::MAX >> (32 - n) };

    fn choose(minimal: &[Vec<u32>], start: usize, left: usize, acc: u32) -> bool {
        if left == 0 {
            return acc != 0;
        }
        (start..=minimal.len() - left).all(|i| minimal[i].iter().all(|&s| choose(minimal, i + 1, left - 1, acc & s)))
    }

    if k > minimal.len() {
        return Ok(true);
    }
    // an empty family offers no selection, so `all` over it is vacuously true
    Ok(choose(&minimal, 0, k, full))
}

/// One line of the symmetric atlas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtlasRow {
    pub m: usize,
    pub mask: u64,
    pub weights: Vec<usize>,
    pub families: Vec<SymmetricFamily>,
    pub item: StructureItem,
    pub phi_neg_trivial: bool,
    pub phi_id_trivial: bool,
    /// Verdicts of the arity-2 enumeration.
    pub brute_phi_neg_trivial: bool,
    pub brute_phi_id_trivial: bool,
    /// Polymorphism counts at arity 0, 1 and 2.
    pub counts: Vec<usize>,
    /// The pruned enumeration was also compared against the full scan.
    pub scanned: bool,
    /// Triviality bits match, every enumerated polymorphism has the predicted
    /// structure, and (when scanned) the pruned, scanned and structural sets coincide.
    pub oracle_agreement: bool,
}

/// Full candidate spaces up to this size are scanned by the atlas.
pub const ATLAS_SCAN_LIMIT: u64 = 1 << 17;

pub fn atlas_row(weights: &WeightSet, options: &EngineOptions) -> Result<AtlasRow> {
    let classification = classify_symmetric(weights)?;
    let descriptor = polymorphism_family(weights)?;
    let p = descriptor.predicate.clone();
    let m = weights.m;
    let brute_neg = check_trivial_for_n(&p, &PhiFamily::negations(m), 2, options)?;
    let brute_id = check_trivial_for_n(&p, &PhiFamily::identity(p.signature()), 2, options)?;

    let mut counts = Vec::new();
    let mut structural = true;
    let mut scanned = true;
    for n in 0..=2 {
        let found = enumerate_polymorphisms(&p, n, options)?;
        counts.push(found.len());
        for fs in &found {
            structural &= check_structure(&descriptor, fs)?;
        }
        let space = 1u64.checked_shl((m << n) as u32).unwrap_or(u64::MAX);
        if space <= ATLAS_SCAN_LIMIT {
            let scan = scan_unpruned(&p, n, space)?;
            let by_structure =
                StructureScan::new(m, n).filter(|fs| check_structure(&descriptor, fs).unwrap_or(false)).count();
            structural &= scan == found && by_structure == found.len();
        } else {
            scanned = false;
        }
    }
    let agreement = structural
        && brute_neg.trivial == classification.phi_neg_trivial
        && brute_id.trivial == classification.phi_id_trivial;
    Ok(AtlasRow {
        m,
        mask: weights.mask,
        weights: weights.weights(),
        families: classification.families,
        item: descriptor.item,
        phi_neg_trivial: classification.phi_neg_trivial,
        phi_id_trivial: classification.phi_id_trivial,
        brute_phi_neg_trivial: brute_neg.trivial,
        brute_phi_id_trivial: brute_id.trivial,
        counts,
        scanned,
        oracle_agreement: agreement,
    })
}

/// Rows for every non-degenerate `W` with `m ≤ m_max`, ordered by `(m, mask)`.
pub fn atlas(m_max: usize, options: &EngineOptions) -> Result<Vec<AtlasRow>> {
    let mut rows = Vec::new();
    for m in 1..=m_max {
        for mask in 0..(1u64 << (m + 1)) {
            let ws = WeightSet::from_mask(m, mask)?;
            if ws.is_non_degenerate() {
                rows.push(atlas_row(&ws, options)?);
            }
        }
    }
    Ok(rows)
}

/// Every binary `m`-tuple of `n`-ary functions, in no particular order.
struct StructureScan {
    m: usize,
    n: usize,
    next: u64,
    end: u64,
}

impl StructureScan {
    fn new(m: usize, n: usize) -> Self {
        StructureScan { m, n, next: 0, end: 1u64 << (m << n) }
    }
}

impl Iterator for StructureScan {
    type Item = PolymorphismTuple;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next == self.end {
            return None;
        }
        let len = 1usize << self.n;
        let code = self.next;
        self.next += 1;
        let tables = (0..self.m).map(|i| (0..len).map(|e| (code >> (i * len + e) & 1) as u8).collect()).collect();
        Some(PolymorphismTuple::from_raw_tables(&vec![2; self.m], self.n, tables))
    }
}
