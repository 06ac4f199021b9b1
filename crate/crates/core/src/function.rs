//! Dense function tables `f: Σⁿ → Σ` and their structural analysis.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest table a [`FunctionTable`] may hold.
pub const MAX_TABLE_LEN: usize = 1 << 22;

/// Default cap on the alphabet size accepted by [`enumerate_latin_squares`].
pub const DEFAULT_LATIN_K_MAX: usize = 4;

/// A function `Σⁿ → Σ` over `Σ = 0..k`.
///
/// Input `(x_0, …, x_{n-1})` lives at index `Σ x_j · kʲ`: the first argument
/// is the least significant digit. Serialized as `{"k", "n", "table"}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct FunctionTable {
    k: usize,
    n: usize,
    table: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    k: usize,
    n: usize,
    table: Vec<u8>,
}

impl TryFrom<RawTable> for FunctionTable {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        FunctionTable::new(raw.k, raw.n, raw.table)
    }
}

impl From<FunctionTable> for RawTable {
    fn from(f: FunctionTable) -> Self {
        RawTable { k: f.k, n: f.n, table: f.table }
    }
}

pub(crate) fn table_len(k: usize, n: usize) -> Result<usize> {
    u32::try_from(n)
        .ok()
        .and_then(|n| k.checked_pow(n))
        .filter(|&len| len <= MAX_TABLE_LEN)
        .ok_or_else(|| Error::Capability(format!("a table over k = {k} with arity {n} is too large")))
}

/// Shape of a function beyond its dictator witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum FunctionKind {
    Constant(u8),
    /// Unary bijection; the table is the permutation.
    Permutation,
    Other,
}

/// `f(x) = φ(x_coordinate)` for every input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DictatorWitness {
    pub coordinate: usize,
    pub phi: FunctionTable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctionAnalysis {
    pub kind: FunctionKind,
    pub dictators: Vec<DictatorWitness>,
}

/// `f(x) = constant ⊕ ⨁_{j ∈ coordinates} x_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AffineForm {
    pub coordinates: Vec<usize>,
    pub constant: u8,
}

impl FunctionTable {
    pub fn new(k: usize, n: usize, table: Vec<u8>) -> Result<Self> {
        if !(2..=255).contains(&k) {
            return Err(Error::invalid(format!("alphabet size {k} is outside 2..=255")));
        }
        let len = table_len(k, n)?;
        if table.len() != len {
            return Err(Error::invalid(format!(
                "table over k = {k}, n = {n} needs {len} entries, got {}",
                table.len()
            )));
        }
        if let Some(v) = table.iter().find(|&&v| v as usize >= k) {
            return Err(Error::invalid(format!("table entry {v} is outside 0..{k}")));
        }
        Ok(FunctionTable { k, n, table })
    }

    pub fn from_fn(k: usize, n: usize, mut f: impl FnMut(&[u8]) -> u8) -> Result<Self> {
        let len = table_len(k, n)?;
        let mut x = vec![0u8; n];
        let mut table = Vec::with_capacity(len);
        for idx in 0..len {
            decode_into(idx, k, &mut x);
            table.push(f(&x));
        }
        FunctionTable::new(k, n, table)
    }

    pub fn constant(k: usize, n: usize, c: u8) -> Result<Self> {
        FunctionTable::new(k, n, vec![c; table_len(k, n)?])
    }

    /// `x ↦ x_j`.
    pub fn projection(k: usize, n: usize, j: usize) -> Result<Self> {
        if j >= n {
            return Err(Error::invalid(format!("projection onto argument {j} of an {n}-ary function")));
        }
        FunctionTable::from_fn(k, n, |x| x[j])
    }

    pub fn unary(k: usize, table: Vec<u8>) -> Result<Self> {
        FunctionTable::new(k, 1, table)
    }

    pub fn identity(k: usize) -> Self {
        FunctionTable { k, n: 1, table: (0..k as u8).collect() }
    }

    /// Boolean `x ↦ x̄`.
    pub fn negation() -> Self {
        FunctionTable { k: 2, n: 1, table: vec![1, 0] }
    }

    pub fn and() -> Self {
        FunctionTable { k: 2, n: 2, table: vec![0, 0, 0, 1] }
    }

    pub fn or() -> Self {
        FunctionTable { k: 2, n: 2, table: vec![0, 1, 1, 1] }
    }

    pub fn xor() -> Self {
        FunctionTable { k: 2, n: 2, table: vec![0, 1, 1, 0] }
    }

    pub fn xnor() -> Self {
        FunctionTable { k: 2, n: 2, table: vec![1, 0, 0, 1] }
    }

    /// `x_0 ⊕ ⋯ ⊕ x_{n-1}`.
    pub fn parity(n: usize) -> Result<Self> {
        FunctionTable::from_fn(2, n, |x| x.iter().fold(0, |a, b| a ^ b))
    }

    pub fn alphabet_size(&self) -> usize {
        self.k
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub(crate) fn into_table(self) -> Vec<u8> {
        self.table
    }

    #[inline]
    pub fn get(&self, idx: usize) -> u8 {
        self.table[idx]
    }

    pub fn index_of(&self, x: &[u8]) -> Result<usize> {
        if x.len() != self.n {
            return Err(Error::invalid(format!("expected {} argument(s), got {}", self.n, x.len())));
        }
        if let Some(v) = x.iter().find(|&&v| v as usize >= self.k) {
            return Err(Error::invalid(format!("argument {v} is outside 0..{}", self.k)));
        }
        Ok(x.iter().rev().fold(0, |acc, &v| acc * self.k + v as usize))
    }

    pub fn input_at(&self, idx: usize) -> Vec<u8> {
        let mut x = vec![0; self.n];
        decode_into(idx, self.k, &mut x);
        x
    }

    pub fn eval(&self, x: &[u8]) -> Result<u8> {
        Ok(self.table[self.index_of(x)?])
    }

    /// `x ↦ f(x, σ)`: the last argument is the most significant digit, so this
    /// is one contiguous block of the table.
    pub fn fix_last_argument(&self, sigma: u8) -> Result<FunctionTable> {
        if self.n == 0 {
            return Err(Error::invalid("cannot fix an argument of a 0-ary function"));
        }
        if sigma as usize >= self.k {
            return Err(Error::invalid(format!("value {sigma} is outside 0..{}", self.k)));
        }
        let block = self.table.len() / self.k;
        let start = sigma as usize * block;
        Ok(FunctionTable { k: self.k, n: self.n - 1, table: self.table[start..start + block].to_vec() })
    }

    /// `σ ↦ f(a, σ)` for a binary function.
    pub fn row(&self, a: u8) -> Result<FunctionTable> {
        self.require_arity(2)?;
        Ok(FunctionTable { k: self.k, n: 1, table: (0..self.k).map(|b| self.table[a as usize + self.k * b]).collect() })
    }

    /// `σ ↦ f(σ, b)` for a binary function.
    pub fn column(&self, b: u8) -> Result<FunctionTable> {
        self.require_arity(2)?;
        self.fix_last_argument(b)
    }

    fn require_arity(&self, n: usize) -> Result<()> {
        if self.n == n {
            Ok(())
        } else {
            Err(Error::invalid(format!("expected an {n}-ary function, got arity {}", self.n)))
        }
    }

    fn require_binary(&self) -> Result<()> {
        if self.k == 2 {
            Ok(())
        } else {
            Err(Error::invalid(format!("expected a Boolean function, got alphabet size {}", self.k)))
        }
    }

    pub fn constant_value(&self) -> Option<u8> {
        let first = *self.table.first()?;
        self.table.iter().all(|&v| v == first).then_some(first)
    }

    pub fn is_permutation(&self) -> bool {
        if self.n != 1 {
            return false;
        }
        let mut seen = vec![false; self.k];
        self.table.iter().all(|&v| !std::mem::replace(&mut seen[v as usize], true))
    }

    /// The unary table `φ` with `f(x) = φ(x_j)` everywhere, if one exists.
    pub fn dictator_phi(&self, j: usize) -> Option<Vec<u8>> {
        if j >= self.n {
            return None;
        }
        let stride = self.k.pow(j as u32);
        let phi: Vec<u8> = (0..self.k).map(|a| self.table[a * stride]).collect();
        self.table.iter().enumerate().all(|(idx, &v)| v == phi[(idx / stride) % self.k]).then_some(phi)
    }

    pub fn analyze(&self) -> FunctionAnalysis {
        let dictators = (0..self.n)
            .filter_map(|j| {
                self.dictator_phi(j)
                    .map(|phi| DictatorWitness { coordinate: j, phi: FunctionTable { k: self.k, n: 1, table: phi } })
            })
            .collect();
        let kind = match self.constant_value() {
            Some(c) => FunctionKind::Constant(c),
            None if self.is_permutation() => FunctionKind::Permutation,
            None => FunctionKind::Other,
        };
        FunctionAnalysis { kind, dictators }
    }

    /// Boolean only: `(J, b)` with `f(x) = b ⊕ ⨁_{j∈J} x_j`, which is unique when it exists.
    pub fn detect_affine(&self) -> Result<Option<AffineForm>> {
        self.require_binary()?;
        let constant = self.table[0];
        let coordinates: Vec<usize> = (0..self.n).filter(|&j| self.table[1 << j] != constant).collect();
        let mask: usize = coordinates.iter().map(|&j| 1 << j).sum();
        let fits = self.table.iter().enumerate().all(|(idx, &v)| v == constant ^ ((idx & mask).count_ones() & 1) as u8);
        Ok(fits.then_some(AffineForm { coordinates, constant }))
    }

    /// Boolean only: `J` with `f(x) = ⋀_{j∈J} x_j`; `J = ∅` is the constant 1.
    pub fn detect_and_of_subset(&self) -> Result<Option<Vec<usize>>> {
        self.require_binary()?;
        let full = self.table.len() - 1;
        let coordinates: Vec<usize> = (0..self.n).filter(|&j| self.table[full & !(1 << j)] == 0).collect();
        let mask: usize = coordinates.iter().map(|&j| 1 << j).sum();
        let fits = self.table.iter().enumerate().all(|(idx, &v)| v == u8::from(idx & mask == mask));
        Ok(fits.then_some(coordinates))
    }

    /// Boolean only: `J` with `f(x) = ⋁_{j∈J} x_j`; `J = ∅` is the constant 0.
    pub fn detect_or_of_subset(&self) -> Result<Option<Vec<usize>>> {
        self.require_binary()?;
        let coordinates: Vec<usize> = (0..self.n).filter(|&j| self.table[1 << j] == 1).collect();
        let mask: usize = coordinates.iter().map(|&j| 1 << j).sum();
        let fits = self.table.iter().enumerate().all(|(idx, &v)| v == u8::from(idx & mask != 0));
        Ok(fits.then_some(coordinates))
    }

    /// Boolean only: `x ↦ ¬f(¬x)`.
    pub fn dual(&self) -> Result<FunctionTable> {
        self.require_binary()?;
        let full = self.table.len() - 1;
        let table = (0..self.table.len()).map(|idx| 1 - self.table[full ^ idx]).collect();
        Ok(FunctionTable { k: 2, n: self.n, table })
    }

    /// `self ∘ inner` for unary functions over the same alphabet.
    pub fn compose(&self, inner: &FunctionTable) -> Result<FunctionTable> {
        self.require_arity(1)?;
        inner.require_arity(1)?;
        if self.k != inner.k {
            return Err(Error::invalid("composition across different alphabets"));
        }
        Ok(FunctionTable { k: self.k, n: 1, table: inner.table.iter().map(|&v| self.table[v as usize]).collect() })
    }

    /// The `r`-fold composite `φ^r` of a unary permutation; `φ^0` is the identity.
    pub fn permutation_power(&self, r: u128) -> Result<FunctionTable> {
        if !self.is_permutation() {
            return Err(Error::invalid("permutation_power needs a unary permutation"));
        }
        let mut table = vec![0u8; self.k];
        for start in 0..self.k {
            let mut cycle = vec![start as u8];
            let mut cur = self.table[start];
            while cur as usize != start {
                cycle.push(cur);
                cur = self.table[cur as usize];
            }
            table[start] = cycle[(r % cycle.len() as u128) as usize];
        }
        Ok(FunctionTable { k: self.k, n: 1, table })
    }

    /// Order of a unary permutation in the symmetric group.
    pub fn permutation_order(&self) -> Result<u128> {
        if !self.is_permutation() {
            return Err(Error::invalid("permutation_order needs a unary permutation"));
        }
        let mut order = 1u128;
        for start in 0..self.k {
            let mut len = 1u128;
            let mut cur = self.table[start];
            while cur as usize != start {
                len += 1;
                cur = self.table[cur as usize];
            }
            order = lcm(order, len);
        }
        Ok(order)
    }

    /// Binary function whose every row and column is a permutation.
    pub fn is_latin_square(&self) -> bool {
        if self.n != 2 {
            return false;
        }
        let k = self.k;
        let mut row_seen = vec![false; k * k];
        let mut col_seen = vec![false; k * k];
        for a in 0..k {
            for b in 0..k {
                let v = self.table[a + k * b] as usize;
                if std::mem::replace(&mut row_seen[a * k + v], true)
                    || std::mem::replace(&mut col_seen[b * k + v], true)
                {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for FunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.constant_value() {
            return write!(f, "const{c}");
        }
        let named = match (self.k, self.n, self.table.as_slice()) {
            (2, 1, [1, 0]) => Some("not(x)"),
            (2, 2, [0, 0, 0, 1]) => Some("and(x0,x1)"),
            (2, 2, [0, 1, 1, 1]) => Some("or(x0,x1)"),
            (2, 2, [0, 1, 1, 0]) => Some("xor(x0,x1)"),
            (2, 2, [1, 0, 0, 1]) => Some("xnor(x0,x1)"),
            _ => None,
        };
        if let Some(name) = named {
            return write!(f, "{name}");
        }
        for j in 0..self.n {
            if let Some(phi) = self.dictator_phi(j) {
                if phi.iter().enumerate().all(|(a, &v)| a == v as usize) {
                    return write!(f, "x{j}");
                }
                if self.k == 2 {
                    return write!(f, "not(x{j})");
                }
            }
        }
        write!(f, "k={} n={} {:?}", self.k, self.n, self.table)
    }
}

pub(crate) fn decode_into(mut idx: usize, k: usize, x: &mut [u8]) {
    for slot in x.iter_mut() {
        *slot = (idx % k) as u8;
        idx /= k;
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u128, b: u128) -> u128 {
    a / gcd(a, b) * b
}

/// Every `k × k` Latin square as a binary table, in lexicographic table order.
/// Fails with [`Error::Capability`] when `k > limit`.
pub fn enumerate_latin_squares(k: usize, limit: usize) -> Result<Vec<FunctionTable>> {
    if k > limit {
        return Err(Error::Capability(format!("Latin-square enumeration is capped at k = {limit}, asked for {k}")));
    }
    if !(2..=255).contains(&k) {
        return Err(Error::invalid(format!("alphabet size {k} is outside 2..=255")));
    }
    fn fill(
        cell: usize,
        k: usize,
        table: &mut Vec<u8>,
        row_used: &mut [bool],
        col_used: &mut [bool],
        out: &mut Vec<FunctionTable>,
    ) {
        if cell == k * k {
            out.push(FunctionTable { k, n: 2, table: table.clone() });
            return;
        }
        let (a, b) = (cell % k, cell / k);
        for v in 0..k {
            if row_used[a * k + v] || col_used[b * k + v] {
                continue;
            }
            row_used[a * k + v] = true;
            col_used[b * k + v] = true;
            table.push(v as u8);
            fill(cell + 1, k, table, row_used, col_used, out);
            table.pop();
            row_used[a * k + v] = false;
            col_used[b * k + v] = false;
        }
    }
    let mut out = Vec::new();
    fill(0, k, &mut Vec::with_capacity(k * k), &mut vec![false; k * k], &mut vec![false; k * k], &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn all_tables(k: usize, n: usize) -> impl Iterator<Item = FunctionTable> {
        let len = table_len(k, n).unwrap();
        let count = k.pow(len as u32);
        (0..count).map(move |c| {
            let mut t = vec![0u8; len];
            decode_into(c, k, &mut t);
            FunctionTable::new(k, n, t).unwrap()
        })
    }

    #[test]
    fn eval_examples() {
        assert_eq!(FunctionTable::xor().eval(&[1, 1]).unwrap(), 0);
        let one = FunctionTable::constant(2, 2, 1).unwrap();
        for x in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            assert_eq!(one.eval(&x).unwrap(), 1);
        }
        let second = FunctionTable::projection(3, 2, 1).unwrap();
        assert_eq!(second.eval(&[2, 1]).unwrap(), 1);
        assert!(second.eval(&[3, 0]).is_err());
        assert!(second.eval(&[0]).is_err());
    }

    #[test]
    fn fix_last_examples() {
        assert_eq!(FunctionTable::xor().fix_last_argument(1).unwrap(), FunctionTable::negation());
        assert_eq!(FunctionTable::and().fix_last_argument(0).unwrap(), FunctionTable::constant(2, 1, 0).unwrap());
        let first = FunctionTable::projection(2, 2, 0).unwrap();
        for s in 0..2 {
            assert_eq!(first.fix_last_argument(s).unwrap(), FunctionTable::identity(2));
        }
        assert!(FunctionTable::constant(2, 0, 1).unwrap().fix_last_argument(0).is_err());
    }

    #[test]
    fn fix_last_agrees_with_eval() {
        for k in 2..=3 {
            for n in 1..=3 {
                let f =
                    FunctionTable::from_fn(k, n, |x| (x.iter().map(|&v| v as usize * 7 + 1).sum::<usize>() % k) as u8)
                        .unwrap();
                for s in 0..k as u8 {
                    let g = f.fix_last_argument(s).unwrap();
                    for idx in 0..g.table().len() {
                        let mut x = g.input_at(idx);
                        let lhs = g.eval(&x).unwrap();
                        x.push(s);
                        assert_eq!(lhs, f.eval(&x).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn analyze_examples() {
        assert_eq!(FunctionTable::xor().analyze(), FunctionAnalysis { kind: FunctionKind::Other, dictators: vec![] });
        let not_second = FunctionTable::from_fn(2, 2, |x| 1 - x[1]).unwrap();
        let a = not_second.analyze();
        assert_eq!(a.dictators, vec![DictatorWitness { coordinate: 1, phi: FunctionTable::negation() }]);
        let zero = FunctionTable::constant(2, 2, 0).unwrap().analyze();
        assert_eq!(zero.kind, FunctionKind::Constant(0));
        let c0 = FunctionTable::constant(2, 1, 0).unwrap();
        assert_eq!(
            zero.dictators,
            vec![DictatorWitness { coordinate: 0, phi: c0.clone() }, DictatorWitness { coordinate: 1, phi: c0 }]
        );
        assert_eq!(FunctionTable::negation().analyze().kind, FunctionKind::Permutation);
        assert_eq!(FunctionTable::unary(3, vec![0, 0, 1]).unwrap().analyze().kind, FunctionKind::Other);
    }

    #[test]
    fn affine_examples() {
        let xor = FunctionTable::xor().detect_affine().unwrap().unwrap();
        assert_eq!(xor, AffineForm { coordinates: vec![0, 1], constant: 0 });
        let xnor = FunctionTable::xnor().detect_affine().unwrap().unwrap();
        assert_eq!(xnor, AffineForm { coordinates: vec![0, 1], constant: 1 });
        assert_eq!(FunctionTable::and().detect_affine().unwrap(), None);
        assert!(FunctionTable::identity(3).detect_affine().is_err());
    }

    /// Exhaustive over every Boolean table with n ≤ 3 (n = 4 has 65536 tables;
    /// covered too, it is cheap).
    #[test]
    fn affine_detection_is_exact() {
        for n in 0..=4 {
            let len = 1usize << n;
            let mut candidates = std::collections::HashMap::new();
            for mask in 0..(1usize << n) {
                for b in 0..2u8 {
                    let t: Vec<u8> = (0..len).map(|idx| b ^ ((idx & mask).count_ones() & 1) as u8).collect();
                    candidates.insert(t, (mask, b));
                }
            }
            for f in all_tables(2, n) {
                match f.detect_affine().unwrap() {
                    Some(form) => {
                        let mask: usize = form.coordinates.iter().map(|&j| 1 << j).sum();
                        assert_eq!(candidates.get(f.table()), Some(&(mask, form.constant)));
                    }
                    None => assert!(!candidates.contains_key(f.table())),
                }
            }
        }
    }

    #[test]
    fn and_or_examples() {
        assert_eq!(FunctionTable::and().detect_and_of_subset().unwrap(), Some(vec![0, 1]));
        assert_eq!(FunctionTable::constant(2, 2, 1).unwrap().detect_and_of_subset().unwrap(), Some(vec![]));
        assert_eq!(FunctionTable::xor().detect_and_of_subset().unwrap(), None);
        assert_eq!(FunctionTable::constant(2, 2, 0).unwrap().detect_and_of_subset().unwrap(), None);
        assert_eq!(FunctionTable::or().detect_or_of_subset().unwrap(), Some(vec![0, 1]));
        assert_eq!(FunctionTable::constant(2, 2, 0).unwrap().detect_or_of_subset().unwrap(), Some(vec![]));
        assert_eq!(FunctionTable::projection(2, 3, 2).unwrap().detect_or_of_subset().unwrap(), Some(vec![2]));
        assert_eq!(FunctionTable::and().detect_or_of_subset().unwrap(), None);
    }

    #[test]
    fn and_detection_is_exact() {
        for n in 0..=3 {
            for f in all_tables(2, n) {
                let brute = (0..(1usize << n))
                    .find(|&mask| f.table().iter().enumerate().all(|(idx, &v)| v == u8::from(idx & mask == mask)));
                let got = f.detect_and_of_subset().unwrap().map(|j| j.iter().map(|&j| 1usize << j).sum::<usize>());
                assert_eq!(got, brute);
            }
        }
    }

    #[test]
    fn permutation_powers() {
        let not = FunctionTable::negation();
        assert_eq!(not.permutation_power(2).unwrap(), FunctionTable::identity(2));
        let cycle = FunctionTable::unary(3, vec![1, 2, 0]).unwrap();
        let inverse = FunctionTable::unary(3, vec![2, 0, 1]).unwrap();
        assert_eq!(cycle.permutation_power(2).unwrap(), inverse);
        assert_eq!(cycle.permutation_power(0).unwrap(), FunctionTable::identity(3));
        // 2!·2!·2! − 1 = 7 compositions of a negation: its own inverse.
        let mut composed = FunctionTable::identity(2);
        for _ in 0..7 {
            composed = not.compose(&composed).unwrap();
        }
        assert_eq!(not.permutation_power(7).unwrap(), composed);
        assert_eq!(composed, not);
        assert!(FunctionTable::unary(3, vec![0, 0, 1]).unwrap().permutation_power(1).is_err());
    }

    #[test]
    fn factorial_power_is_identity() {
        for k in 2..=4usize {
            let fact: u128 = (1..=k as u128).product();
            for f in all_tables(k, 1).filter(FunctionTable::is_permutation) {
                assert_eq!(f.permutation_power(fact).unwrap(), FunctionTable::identity(k));
                let order = f.permutation_order().unwrap();
                assert_eq!(fact % order, 0);
                assert_eq!(f.permutation_power(order).unwrap(), FunctionTable::identity(k));
            }
        }
    }

    #[test]
    fn latin_squares() {
        assert!(FunctionTable::xor().is_latin_square());
        assert!(FunctionTable::xnor().is_latin_square());
        assert!(!FunctionTable::and().is_latin_square());
        assert_eq!(enumerate_latin_squares(2, 4).unwrap(), vec![FunctionTable::xor(), FunctionTable::xnor()]);
        assert!(matches!(enumerate_latin_squares(5, 4), Err(Error::Capability(_))));
    }

    /// Brute force over all 3⁹ tables filtered by the row/column test.
    #[test]
    fn latin_squares_k3_by_brute_force() {
        let brute: Vec<FunctionTable> = all_tables(3, 2)
            .filter(|f| (0..3u8).all(|s| f.row(s).unwrap().is_permutation() && f.column(s).unwrap().is_permutation()))
            .collect();
        assert_eq!(brute.len(), 12);
        let mut sorted = brute.clone();
        sorted.sort();
        assert_eq!(enumerate_latin_squares(3, 4).unwrap(), sorted);
        assert_eq!(enumerate_latin_squares(4, 4).unwrap().len(), 576);
    }

    #[test]
    fn latin_check_matches_sections() {
        for f in all_tables(2, 2).chain(all_tables(3, 2).step_by(7)) {
            let k = f.alphabet_size() as u8;
            let sections = (0..k).all(|s| {
                f.row(s).unwrap().analyze().kind == FunctionKind::Permutation
                    && f.column(s).unwrap().analyze().kind == FunctionKind::Permutation
            });
            assert_eq!(f.is_latin_square(), sections);
        }
    }

    #[test]
    fn serde_shape() {
        let json = serde_json::to_string(&FunctionTable::xor()).unwrap();
        assert_eq!(json, r#"{"k":2,"n":2,"table":[0,1,1,0]}"#);
        assert!(serde_json::from_str::<FunctionTable>(r#"{"k":2,"n":2,"table":[0,1,2,0]}"#).is_err());
        assert!(serde_json::from_str::<FunctionTable>(r#"{"k":2,"n":2,"table":[0,1]}"#).is_err());
    }

    proptest! {
        #[test]
        fn index_round_trip(k in 2usize..=4, n in 0usize..=4, seed in any::<u64>()) {
            let len = table_len(k, n).unwrap();
            let idx = (seed as usize) % len;
            let f = FunctionTable::constant(k, n, 0).unwrap();
            let x = f.input_at(idx);
            prop_assert_eq!(f.index_of(&x).unwrap(), idx);
            let weighted: usize = x.iter().enumerate().map(|(j, &v)| v as usize * k.pow(j as u32)).sum();
            prop_assert_eq!(weighted, idx);
        }

        #[test]
        fn dual_is_involution(bits in prop::collection::vec(0u8..2, 8)) {
            let f = FunctionTable::new(2, 3, bits).unwrap();
            prop_assert_eq!(f.dual().unwrap().dual().unwrap(), f);
        }
    }
}
