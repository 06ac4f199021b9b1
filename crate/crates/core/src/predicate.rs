//! Predicates over finite alphabets, non-degeneracy, certificates and
//! coordinate-closure queries.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Largest cube `∏ k_i` a predicate may live in.
pub const MAX_CUBE_LEN: usize = 1 << 24;

/// Alphabet sizes `k_0, …, k_{m-1}`; coordinate `i` ranges over `0..k_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Signature {
    sizes: Vec<usize>,
}

impl Signature {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::invalid("a signature needs at least one coordinate"));
        }
        if let Some(i) = sizes.iter().position(|&k| !(2..=255).contains(&k)) {
            return Err(Error::invalid(format!("alphabet size {} at coordinate {i} is outside 2..=255", sizes[i])));
        }
        let mut cube = 1usize;
        for &k in &sizes {
            cube = cube
                .checked_mul(k)
                .filter(|&c| c <= MAX_CUBE_LEN)
                .ok_or_else(|| Error::Capability(format!("cube of signature {sizes:?} is too large")))?;
        }
        Ok(Signature { sizes })
    }

    /// `{0,1}^m`.
    pub fn binary(m: usize) -> Result<Self> {
        Signature::new(vec![2; m])
    }

    /// Number of coordinates `m`.
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, i: usize) -> usize {
        self.sizes[i]
    }

    pub fn is_binary(&self) -> bool {
        self.sizes.iter().all(|&k| k == 2)
    }

    pub fn cube_len(&self) -> usize {
        self.sizes.iter().product()
    }

    /// Mixed-radix position of `y`, coordinate 0 least significant.
    pub fn index_of(&self, y: &[u8]) -> usize {
        let mut idx = 0;
        for (&v, &k) in y.iter().zip(&self.sizes).rev() {
            idx = idx * k + v as usize;
        }
        idx
    }

    pub fn tuple_at(&self, mut idx: usize) -> Vec<u8> {
        self.sizes
            .iter()
            .map(|&k| {
                let v = idx % k;
                idx /= k;
                v as u8
            })
            .collect()
    }

    pub fn contains_tuple(&self, y: &[u8]) -> bool {
        y.len() == self.len() && y.iter().zip(&self.sizes).all(|(&v, &k)| (v as usize) < k)
    }

    pub(crate) fn check_tuple(&self, y: &[u8]) -> Result<()> {
        if self.contains_tuple(y) {
            Ok(())
        } else {
            Err(Error::invalid(format!("tuple {y:?} does not fit signature {:?}", self.sizes)))
        }
    }

    pub(crate) fn check_coordinate(&self, i: usize, sigma: u8) -> Result<()> {
        if i >= self.len() {
            return Err(Error::invalid(format!("coordinate {i} out of range for m = {}", self.len())));
        }
        if sigma as usize >= self.sizes[i] {
            return Err(Error::invalid(format!(
                "value {sigma} out of range for coordinate {i} (size {})",
                self.sizes[i]
            )));
        }
        Ok(())
    }

    /// Every tuple of the cube in lexicographic order.
    pub fn cube(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        let mut next = Some(vec![0u8; self.len()]);
        std::iter::from_fn(move || {
            let current = next.take()?;
            let mut succ = current.clone();
            for i in (0..succ.len()).rev() {
                if (succ[i] as usize) + 1 < self.sizes[i] {
                    succ[i] += 1;
                    next = Some(succ);
                    break;
                }
                succ[i] = 0;
            }
            Some(current)
        })
    }
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            sizes: Vec<usize>,
        }
        let raw = Raw::deserialize(d)?;
        Signature::new(raw.sizes).map_err(serde::de::Error::custom)
    }
}

/// `y` with position `i` replaced by `sigma`.
pub fn set_coordinate(signature: &Signature, y: &[u8], i: usize, sigma: u8) -> Result<Vec<u8>> {
    signature.check_tuple(y)?;
    signature.check_coordinate(i, sigma)?;
    let mut z = y.to_vec();
    z[i] = sigma;
    Ok(z)
}

/// A partial assignment `ρ` from coordinates to values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Certificate {
    entries: BTreeMap<usize, u8>,
}

impl Certificate {
    pub fn new() -> Self {
        Certificate::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u8)>) -> Self {
        Certificate { entries: pairs.into_iter().collect() }
    }

    pub fn insert(&mut self, i: usize, v: u8) {
        self.entries.insert(i, v);
    }

    pub fn get(&self, i: usize) -> Option<u8> {
        self.entries.get(&i).copied()
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, u8)> + '_ {
        self.entries.iter().map(|(&i, &v)| (i, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when `self` agrees with every entry of `other`.
    pub fn extends(&self, other: &Certificate) -> bool {
        other.entries().all(|(i, v)| self.get(i) == Some(v))
    }

    pub(crate) fn check(&self, signature: &Signature) -> Result<()> {
        for (i, v) in self.entries() {
            signature.check_coordinate(i, v)?;
        }
        Ok(())
    }

    /// Sort key: domain size, then domain, then values.
    fn canonical_key(&self) -> (usize, Vec<usize>, Vec<u8>) {
        (self.len(), self.entries.keys().copied().collect(), self.entries.values().copied().collect())
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, (i, v)) in self.entries().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}↦{v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateEntry {
    pub certificate: Certificate,
    /// No proper sub-assignment is a certificate.
    pub minimal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum DegeneracyViolation {
    /// The projection onto `coordinate` misses `value`.
    MissingValue { coordinate: usize, value: u8 },
    /// No member and non-member of the predicate differ exactly at `coordinate`.
    IrrelevantCoordinate { coordinate: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct NonDegeneracyReport {
    pub violations: Vec<DegeneracyViolation>,
}

impl NonDegeneracyReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for NonDegeneracyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "non-degenerate");
        }
        for (n, v) in self.violations.iter().enumerate() {
            if n > 0 {
                write!(f, "; ")?;
            }
            match v {
                DegeneracyViolation::MissingValue { coordinate, value } => {
                    write!(f, "value {value} never occurs at coordinate {coordinate}")?
                }
                DegeneracyViolation::IrrelevantCoordinate { coordinate } => {
                    write!(f, "coordinate {coordinate} does not matter")?
                }
            }
        }
        Ok(())
    }
}

/// A finite relation `P ⊆ Σ_0 × ⋯ × Σ_{m-1}` stored as a sorted tuple list
/// plus a membership bitmap over the cube.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Predicate {
    signature: Signature,
    tuples: Vec<Vec<u8>>,
    members: Vec<bool>,
}

impl Predicate {
    /// Builds a predicate, dropping duplicate tuples.
    pub fn new(signature: Signature, tuples: impl IntoIterator<Item = Vec<u8>>) -> Result<Self> {
        let mut members = vec![false; signature.cube_len()];
        for y in tuples {
            signature.check_tuple(&y)?;
            members[signature.index_of(&y)] = true;
        }
        Ok(Predicate::from_members(signature, members))
    }

    pub fn from_fn(signature: Signature, mut pred: impl FnMut(&[u8]) -> bool) -> Self {
        let members = (0..signature.cube_len()).map(|idx| pred(&signature.tuple_at(idx))).collect();
        Predicate::from_members(signature, members)
    }

    fn from_members(signature: Signature, members: Vec<bool>) -> Self {
        let tuples = signature.cube().filter(|y| members[signature.index_of(y)]).collect();
        Predicate { signature, tuples, members }
    }

    /// All binary `m`-tuples whose Hamming weight lies in `weights`.
    pub fn symmetric(m: usize, weights: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut allowed = vec![false; m + 1];
        for w in weights {
            if w > m {
                return Err(Error::invalid(format!("weight {w} exceeds m = {m}")));
            }
            allowed[w] = true;
        }
        let signature = Signature::binary(m)?;
        Ok(Predicate::from_fn(signature, |y| allowed[y.iter().filter(|&&b| b == 1).count()]))
    }

    /// The not-all-equal predicate on three bits.
    pub fn nae() -> Self {
        Predicate::symmetric(3, [1, 2]).expect("static signature")
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn tuples(&self) -> &[Vec<u8>] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.tuples.len() == self.members.len()
    }

    /// Membership; tuples outside the signature are never members.
    pub fn contains(&self, y: &[u8]) -> bool {
        self.signature.contains_tuple(y) && self.members[self.signature.index_of(y)]
    }

    /// Membership by mixed-radix index (see [`Signature::index_of`]).
    #[inline]
    pub fn contains_index(&self, idx: usize) -> bool {
        self.members[idx]
    }

    pub fn validate_non_degenerate(&self) -> NonDegeneracyReport {
        let sig = &self.signature;
        let mut violations = Vec::new();
        for i in 0..sig.len() {
            let mut seen = vec![false; sig.size(i)];
            for y in &self.tuples {
                seen[y[i] as usize] = true;
            }
            for (value, _) in seen.iter().enumerate().filter(|(_, &s)| !s) {
                violations.push(DegeneracyViolation::MissingValue { coordinate: i, value: value as u8 });
            }
        }
        for i in 0..sig.len() {
            let matters = self.tuples.iter().any(|y| {
                (0..sig.size(i)).any(|s| {
                    let mut z = y.clone();
                    z[i] = s as u8;
                    !self.members[sig.index_of(&z)]
                })
            });
            if !matters {
                violations.push(DegeneracyViolation::IrrelevantCoordinate { coordinate: i });
            }
        }
        NonDegeneracyReport { violations }
    }

    /// Fails with [`Error::Degenerate`] unless the predicate is non-degenerate.
    pub fn ensure_non_degenerate(&self) -> Result<()> {
        let report = self.validate_non_degenerate();
        if report.is_ok() {
            Ok(())
        } else {
            Err(Error::Degenerate(report.to_string()))
        }
    }

    /// True iff every tuple of the cube that agrees with `rho` lies in `P`.
    pub fn is_certificate(&self, rho: &Certificate) -> Result<bool> {
        rho.check(&self.signature)?;
        Ok(self.is_certificate_unchecked(rho))
    }

    pub(crate) fn is_certificate_unchecked(&self, rho: &Certificate) -> bool {
        let sig = &self.signature;
        let free: Vec<usize> = (0..sig.len()).filter(|&i| rho.get(i).is_none()).collect();
        let mut y = vec![0u8; sig.len()];
        for (i, v) in rho.entries() {
            y[i] = v;
        }
        loop {
            if !self.members[sig.index_of(&y)] {
                return false;
            }
            // advance the free coordinates as an odometer
            let mut carried = true;
            for &i in &free {
                if (y[i] as usize) + 1 < sig.size(i) {
                    y[i] += 1;
                    carried = false;
                    break;
                }
                y[i] = 0;
            }
            if carried {
                return true;
            }
        }
    }

    /// True iff `y|_{i←σ} ∈ P` for every `y ∈ P`.
    pub fn closed_under_setting(&self, i: usize, sigma: u8) -> Result<bool> {
        self.signature.check_coordinate(i, sigma)?;
        Ok(self.tuples.iter().all(|y| {
            let mut z = y.clone();
            z[i] = sigma;
            self.members[self.signature.index_of(&z)]
        }))
    }

    /// Every `(i, σ)` the predicate is closed under setting, in canonical order.
    pub fn closing_assignments(&self) -> Vec<(usize, u8)> {
        let sig = &self.signature;
        (0..sig.len())
            .flat_map(|i| (0..sig.size(i)).map(move |s| (i, s as u8)))
            .filter(|&(i, s)| self.closed_under_setting(i, s).unwrap_or(false))
            .collect()
    }

    /// All certificates with at most `max_domain_size` entries, ordered by
    /// domain size, then domain, then values.
    pub fn enumerate_certificates(&self, max_domain_size: usize) -> Result<Vec<CertificateEntry>> {
        let m = self.signature.len();
        if max_domain_size > m {
            return Err(Error::invalid(format!("max_domain_size {max_domain_size} exceeds m = {m}")));
        }
        let mut found: Vec<Certificate> = Vec::new();
        for size in 0..=max_domain_size {
            for domain in subsets_of_size(m, size) {
                for values in value_product(&domain, &self.signature) {
                    let rho = Certificate::from_pairs(domain.iter().copied().zip(values));
                    if self.is_certificate_unchecked(&rho) {
                        found.push(rho);
                    }
                }
            }
        }
        found.sort_by_key(Certificate::canonical_key);
        // a sub-assignment of a certificate is strictly smaller, so it was found earlier
        let mut entries: Vec<CertificateEntry> = Vec::with_capacity(found.len());
        for rho in found {
            let minimal = !entries.iter().any(|e| e.certificate.len() < rho.len() && rho.extends(&e.certificate));
            entries.push(CertificateEntry { certificate: rho, minimal });
        }
        Ok(entries)
    }

    /// True iff flipping every bit maps `P` onto itself. Binary signatures only.
    pub fn complement_closed(&self) -> Result<bool> {
        Ok(self.negated()? == *self)
    }

    /// The global bit-flip `{ȳ : y ∈ P}`. Binary signatures only.
    pub fn negated(&self) -> Result<Predicate> {
        if !self.signature.is_binary() {
            return Err(Error::invalid("complementation needs a binary signature"));
        }
        let tuples = self.tuples.iter().map(|y| y.iter().map(|b| 1 - b).collect());
        Predicate::new(self.signature.clone(), tuples)
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P ⊆ ")?;
        for (i, k) in self.signature.sizes().iter().enumerate() {
            if i > 0 {
                write!(f, "×")?;
            }
            write!(f, "[{k}]")?;
        }
        write!(f, " with {} tuple(s)", self.len())
    }
}

/// All `size`-subsets of `0..m` in lexicographic order.
pub(crate) fn subsets_of_size(m: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < size - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, m, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if size <= m {
        go(0, m, size, &mut Vec::new(), &mut out);
    }
    out
}

fn value_product(domain: &[usize], sig: &Signature) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for &i in domain {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..sig.size(i)).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v as u8);
                    p
                })
            })
            .collect();
    }
    out
}
