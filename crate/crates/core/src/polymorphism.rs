//! Polymorphism tuples and the direct (non-pruning) polymorphism check.

use crate::error::{Error, Result};
use crate::function::FunctionTable;
use crate::predicate::{Predicate, Signature};
use serde::{Deserialize, Serialize};
use std::fmt;

/// `m` function tables of a common arity; table `i` acts on coordinate `i`.
///
/// Serialized as `{"n": arity, "tables": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawTuple", into = "RawTuple")]
pub struct PolymorphismTuple {
    arity: usize,
    tables: Vec<FunctionTable>,
}

#[derive(Serialize, Deserialize)]
struct RawTuple {
    n: usize,
    tables: Vec<FunctionTable>,
}

impl TryFrom<RawTuple> for PolymorphismTuple {
    type Error = Error;

    fn try_from(raw: RawTuple) -> Result<Self> {
        let tuple = PolymorphismTuple::new(raw.tables)?;
        if tuple.arity != raw.n {
            return Err(Error::invalid(format!("declared arity {} but tables have arity {}", raw.n, tuple.arity)));
        }
        Ok(tuple)
    }
}

impl From<PolymorphismTuple> for RawTuple {
    fn from(t: PolymorphismTuple) -> Self {
        RawTuple { n: t.arity, tables: t.tables }
    }
}

impl PolymorphismTuple {
    pub fn new(tables: Vec<FunctionTable>) -> Result<Self> {
        let arity = tables.first().ok_or_else(|| Error::invalid("a polymorphism tuple needs a table"))?.arity();
        if let Some(t) = tables.iter().find(|t| t.arity() != arity) {
            return Err(Error::invalid(format!("mixed arities {arity} and {}", t.arity())));
        }
        Ok(PolymorphismTuple { arity, tables })
    }

    /// The same function on each of `m` coordinates.
    pub fn uniform(m: usize, f: FunctionTable) -> Result<Self> {
        PolymorphismTuple::new(vec![f; m])
    }

    /// `f_i(x) = x_j` on every coordinate of `signature`.
    pub fn projection(signature: &Signature, n: usize, j: usize) -> Result<Self> {
        let tables = signature.sizes().iter().map(|&k| FunctionTable::projection(k, n, j)).collect::<Result<_>>()?;
        PolymorphismTuple::new(tables)
    }

    pub(crate) fn from_raw_tables(sizes: &[usize], arity: usize, tables: Vec<Vec<u8>>) -> Self {
        let tables = sizes
            .iter()
            .zip(tables)
            .map(|(&k, t)| FunctionTable::new(k, arity, t).expect("engine tables are well-formed"))
            .collect();
        PolymorphismTuple { arity, tables }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tables(&self) -> &[FunctionTable] {
        &self.tables
    }

    pub fn table(&self, i: usize) -> &FunctionTable {
        &self.tables[i]
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.tables.iter().map(FunctionTable::alphabet_size).collect()
    }

    pub fn check_signature(&self, signature: &Signature) -> Result<()> {
        if self.sizes() != signature.sizes() {
            return Err(Error::SignatureMismatch(format!(
                "tuple alphabets {:?} do not match predicate signature {:?}",
                self.sizes(),
                signature.sizes()
            )));
        }
        Ok(())
    }

    /// `(f_0(row_0), …, f_{m-1}(row_{m-1}))`.
    pub fn apply(&self, matrix: &InputMatrix) -> Result<Vec<u8>> {
        let rows = matrix.rows();
        if rows.len() != self.tables.len() {
            return Err(Error::invalid("matrix height differs from tuple length"));
        }
        self.tables.iter().zip(&rows).map(|(f, row)| f.eval(row)).collect()
    }

    /// True iff every table is the projection onto the same argument `j`.
    pub fn is_common_projection(&self) -> bool {
        (0..self.arity).any(|j| {
            self.tables
                .iter()
                .all(|f| f.dictator_phi(j).is_some_and(|phi| phi.iter().enumerate().all(|(a, &v)| a == v as usize)))
        })
    }

    /// Boolean only: `x ↦ ¬f_i(¬x)` on every coordinate.
    pub fn dual(&self) -> Result<PolymorphismTuple> {
        let tables = self.tables.iter().map(FunctionTable::dual).collect::<Result<_>>()?;
        Ok(PolymorphismTuple { arity: self.arity, tables })
    }
}

impl fmt::Display for PolymorphismTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

/// An `m × n` matrix given by its `n` columns, each an `m`-tuple.
/// Row `i` is the input fed to `f_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputMatrix {
    pub columns: Vec<Vec<u8>>,
}

impl InputMatrix {
    pub fn rows(&self) -> Vec<Vec<u8>> {
        let m = self.columns.first().map_or(0, Vec::len);
        (0..m).map(|i| self.columns.iter().map(|c| c[i]).collect()).collect()
    }
}

/// Walks every matrix whose columns lie in `P`, columns ordered
/// lexicographically with the first column most significant, and yields the
/// table index of each row.
pub(crate) struct MatrixWalk<'a> {
    predicate: &'a Predicate,
    choice: Vec<usize>,
    strides: Vec<Vec<usize>>,
    done: bool,
}

impl<'a> MatrixWalk<'a> {
    pub(crate) fn new(predicate: &'a Predicate, n: usize) -> Self {
        let strides =
            predicate.signature().sizes().iter().map(|&k| (0..n).map(|j| k.pow(j as u32)).collect()).collect();
        MatrixWalk { predicate, choice: vec![0; n], strides, done: predicate.is_empty() && n > 0 }
    }

    pub(crate) fn columns(&self) -> Vec<Vec<u8>> {
        self.choice.iter().map(|&c| self.predicate.tuples()[c].clone()).collect()
    }

    /// Fills `rows` with the current matrix's row indices and advances.
    pub(crate) fn next_into(&mut self, rows: &mut [usize]) -> bool {
        if self.done {
            return false;
        }
        let tuples = self.predicate.tuples();
        for (i, slot) in rows.iter_mut().enumerate() {
            *slot = self.choice.iter().zip(&self.strides[i]).map(|(&c, &s)| tuples[c][i] as usize * s).sum();
        }
        self.done = true;
        for c in self.choice.iter_mut().rev() {
            if *c + 1 < tuples.len() {
                *c += 1;
                self.done = false;
                break;
            }
            *c = 0;
        }
        true
    }
}

fn output_index(fs: &PolymorphismTuple, rows: &[usize], sizes: &[usize]) -> usize {
    let mut idx = 0;
    for i in (0..rows.len()).rev() {
        idx = idx * sizes[i] + fs.tables[i].get(rows[i]) as usize;
    }
    idx
}

/// True iff `fs` maps every matrix with columns in `P` into `P`.
/// Costs `|P|ⁿ` matrix evaluations.
pub fn is_polymorphism(predicate: &Predicate, fs: &PolymorphismTuple) -> Result<bool> {
    Ok(find_violation(predicate, fs)?.is_none())
}

/// The first matrix (columns lexicographic, first column most significant)
/// with all columns in `P` whose image lies outside `P`.
pub fn find_violation(predicate: &Predicate, fs: &PolymorphismTuple) -> Result<Option<InputMatrix>> {
    fs.check_signature(predicate.signature())?;
    let sizes = predicate.signature().sizes();
    let mut walk = MatrixWalk::new(predicate, fs.arity);
    let mut rows = vec![0usize; sizes.len()];
    loop {
        let columns = (!walk.done).then(|| walk.columns());
        if !walk.next_into(&mut rows) {
            return Ok(None);
        }
        if !predicate.contains_index(output_index(fs, &rows, sizes)) {
            return Ok(Some(InputMatrix { columns: columns.expect("walk was not done") }));
        }
    }
}

/// Reusable checker for many tuples against one `(P, n)`: the matrix rows are
/// computed once.
pub struct PolymorphismChecker<'a> {
    predicate: &'a Predicate,
    arity: usize,
    rows: Vec<usize>,
}

impl<'a> PolymorphismChecker<'a> {
    pub fn new(predicate: &'a Predicate, arity: usize) -> Result<Self> {
        let m = predicate.signature().len();
        let count = (predicate.len() as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
        if count.saturating_mul(m as u128) > 1 << 28 {
            return Err(Error::Capability(format!("{count} input matrices are too many to tabulate")));
        }
        let mut walk = MatrixWalk::new(predicate, arity);
        let mut buf = vec![0usize; m];
        let mut rows = Vec::with_capacity(count as usize * m);
        while walk.next_into(&mut buf) {
            rows.extend_from_slice(&buf);
        }
        Ok(PolymorphismChecker { predicate, arity, rows })
    }

    pub fn check(&self, fs: &PolymorphismTuple) -> Result<bool> {
        fs.check_signature(self.predicate.signature())?;
        if fs.arity != self.arity {
            return Err(Error::invalid(format!("checker built for arity {}, got {}", self.arity, fs.arity)));
        }
        let sizes = self.predicate.signature().sizes();
        Ok(self.rows.chunks_exact(sizes.len()).all(|rows| self.predicate.contains_index(output_index(fs, rows, sizes))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(tables: Vec<FunctionTable>) -> PolymorphismTuple {
        PolymorphismTuple::new(tables).unwrap()
    }

    #[test]
    fn nae_certificate_tuple() {
        let p = Predicate::nae();
        let fs = t(vec![
            FunctionTable::constant(2, 2, 0).unwrap(),
            FunctionTable::constant(2, 2, 1).unwrap(),
            FunctionTable::projection(2, 2, 0).unwrap(),
        ]);
        assert!(is_polymorphism(&p, &fs).unwrap());
    }

    #[test]
    fn nae_rejects_and() {
        let p = Predicate::nae();
        let fs = PolymorphismTuple::uniform(3, FunctionTable::and()).unwrap();
        let matrix = find_violation(&p, &fs).unwrap().expect("AND is not a polymorphism of NAE");
        assert!(matrix.columns.iter().all(|c| p.contains(c)));
        let out = fs.apply(&matrix).unwrap();
        assert!(!p.contains(&out));
        // first violation in the column order: (0,0,1) then (0,1,0)
        assert_eq!(matrix.columns, vec![vec![0, 0, 1], vec![0, 1, 0]]);
        assert_eq!(out, vec![0, 0, 0]);
        // the pair quoted alongside the AND counterexample is also a violation
        let other = InputMatrix { columns: vec![vec![0, 1, 1], vec![1, 0, 0]] };
        assert_eq!(other.rows(), vec![vec![0, 1], vec![1, 0], vec![1, 0]]);
        assert_eq!(fs.apply(&other).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn parity_accepts_xor() {
        let p = Predicate::symmetric(3, [0, 2]).unwrap();
        let fs = PolymorphismTuple::uniform(3, FunctionTable::xor()).unwrap();
        assert!(is_polymorphism(&p, &fs).unwrap());
        assert_eq!(find_violation(&p, &fs).unwrap(), None);
    }

    #[test]
    fn equality_with_split_projections() {
        let p = Predicate::symmetric(2, [0, 2]).unwrap();
        let fs = t(vec![FunctionTable::projection(2, 2, 0).unwrap(), FunctionTable::projection(2, 2, 1).unwrap()]);
        let matrix = find_violation(&p, &fs).unwrap().unwrap();
        assert_eq!(matrix.columns, vec![vec![0, 0], vec![1, 1]]);
        assert_eq!(fs.apply(&matrix).unwrap(), vec![0, 1]);
    }

    #[test]
    fn signature_mismatch() {
        let p = Predicate::nae();
        let fs = PolymorphismTuple::uniform(2, FunctionTable::xor()).unwrap();
        assert!(matches!(is_polymorphism(&p, &fs), Err(Error::SignatureMismatch(_))));
        let ternary = PolymorphismTuple::uniform(3, FunctionTable::identity(3)).unwrap();
        assert!(matches!(is_polymorphism(&p, &ternary), Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn mixed_arity_rejected() {
        assert!(PolymorphismTuple::new(vec![FunctionTable::xor(), FunctionTable::negation()]).is_err());
        assert!(PolymorphismTuple::new(vec![]).is_err());
    }

    #[test]
    fn zero_ary_tuples() {
        let p = Predicate::nae();
        let c = |v| FunctionTable::constant(2, 0, v).unwrap();
        assert!(is_polymorphism(&p, &t(vec![c(0), c(1), c(1)])).unwrap());
        assert!(!is_polymorphism(&p, &t(vec![c(1), c(1), c(1)])).unwrap());
    }

    #[test]
    fn checker_agrees_with_direct_check() {
        let p = Predicate::symmetric(3, [0, 1]).unwrap();
        let checker = PolymorphismChecker::new(&p, 2).unwrap();
        for f in [FunctionTable::and(), FunctionTable::or(), FunctionTable::xor(), FunctionTable::xnor()] {
            for g in [FunctionTable::and(), FunctionTable::projection(2, 2, 1).unwrap()] {
                let fs = t(vec![f.clone(), g.clone(), f.clone()]);
                assert_eq!(checker.check(&fs).unwrap(), is_polymorphism(&p, &fs).unwrap());
            }
        }
    }

    #[test]
    fn serde_round_trip() {
        let fs = PolymorphismTuple::uniform(2, FunctionTable::xor()).unwrap();
        let json = serde_json::to_string(&fs).unwrap();
        assert_eq!(serde_json::from_str::<PolymorphismTuple>(&json).unwrap(), fs);
        assert!(
            serde_json::from_str::<PolymorphismTuple>(r#"{"n":1,"tables":[{"k":2,"n":2,"table":[0,1,1,0]}]}"#).is_err()
        );
    }
}
