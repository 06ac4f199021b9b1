//! Backtracking enumeration of all `n`-ary polymorphisms of a predicate.
//!
//! Table entries are assigned in input-index-major order: first entry 0 of
//! every coordinate table, then entry 1 of every table, and so on; values are
//! tried in ascending order. Each input matrix is attached to the last
//! variable it reads, and a value is rejected as soon as a fully-determined
//! matrix maps outside `P`. Results therefore stream out in lexicographic
//! order of `(f_0[0], f_1[0], …, f_{m-1}[0], f_0[1], …)`.
//!
//! [`scan_unpruned`] walks the full candidate space in the same order and
//! tests each candidate with [`is_polymorphism`]; it is the reference the
//! pruned engine is checked against.

use crate::error::{Error, Result};
use crate::function::table_len;
use crate::polymorphism::{is_polymorphism, MatrixWalk, PolymorphismTuple};
use crate::predicate::Predicate;
use rayon::prelude::*;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

/// Default budget: `10⁹` table-entry assignments.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Cap on the number of (matrix × coordinate) row indices held in memory.
const MAX_MATRIX_ROWS: u128 = 1 << 27;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    /// Table-entry assignments allowed before the search gives up.
    pub budget: u64,
    /// Worker threads for [`Enumeration::collect`]; 1 runs inline.
    pub workers: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { budget: DEFAULT_BUDGET, workers: 1 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    pub assignments: u64,
    pub solutions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Var {
    coordinate: usize,
    entry: usize,
}

/// A prepared search for the `n`-ary polymorphisms of one predicate.
pub struct Enumeration<'a> {
    predicate: &'a Predicate,
    arity: usize,
    sizes: Vec<usize>,
    vars: Vec<Var>,
    fixed: Vec<Option<u8>>,
    /// Flattened `m`-row chunks of the matrices completed at each variable.
    checks: Vec<Vec<u32>>,
}

struct Budget<'s> {
    limit: u64,
    local: u64,
    shared: Option<(&'s AtomicU64, &'s AtomicBool)>,
}

const FLUSH: u64 = 4096;

impl Budget<'_> {
    #[inline]
    fn spend(&mut self) -> bool {
        self.local += 1;
        match self.shared {
            None => self.local <= self.limit,
            Some((total, stop)) => {
                if self.local.is_multiple_of(FLUSH) {
                    let spent = total.fetch_add(FLUSH, Ordering::Relaxed) + FLUSH;
                    if spent > self.limit {
                        stop.store(true, Ordering::Relaxed);
                    }
                }
                !stop.load(Ordering::Relaxed)
            }
        }
    }
}

struct Search<'e, 's, V> {
    engine: &'e Enumeration<'e>,
    tables: Vec<Vec<u8>>,
    budget: Budget<'s>,
    visit: V,
    solutions: usize,
}

enum Halt {
    Visitor,
    Budget,
}

impl<'a> Enumeration<'a> {
    pub fn new(predicate: &'a Predicate, arity: usize) -> Result<Self> {
        let sizes = predicate.signature().sizes().to_vec();
        let m = sizes.len();
        let lens = sizes.iter().map(|&k| table_len(k, arity)).collect::<Result<Vec<_>>>()?;
        let max_len = *lens.iter().max().expect("signature is non-empty");

        let mut pos = vec![vec![0usize; max_len]; m];
        let mut vars = Vec::new();
        for entry in 0..max_len {
            for (coordinate, &len) in lens.iter().enumerate() {
                if entry < len {
                    pos[coordinate][entry] = vars.len();
                    vars.push(Var { coordinate, entry });
                }
            }
        }

        let matrices = (predicate.len() as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
        if matrices.saturating_mul(m as u128) > MAX_MATRIX_ROWS {
            return Err(Error::Capability(format!(
                "{matrices} input matrices at arity {arity} exceed the engine's memory cap"
            )));
        }
        let mut checks = vec![Vec::new(); vars.len().max(1)];
        let mut walk = MatrixWalk::new(predicate, arity);
        let mut rows = vec![0usize; m];
        while walk.next_into(&mut rows) {
            let last = (0..m).map(|i| pos[i][rows[i]]).max().expect("m ≥ 1");
            checks[last].extend(rows.iter().map(|&r| r as u32));
        }
        let fixed = vec![None; vars.len()];
        Ok(Enumeration { predicate, arity, sizes, vars, fixed, checks })
    }

    /// Restricts the search to unanimous tuples: `f_i(σ, …, σ) = σ` is fixed
    /// up front for every coordinate and symbol.
    pub fn unanimous(mut self) -> Self {
        for (v, var) in self.vars.iter().enumerate() {
            let k = self.sizes[var.coordinate];
            let repunit: usize = (0..self.arity).map(|j| k.pow(j as u32)).sum();
            if repunit > 0 && var.entry % repunit == 0 {
                self.fixed[v] = Some((var.entry / repunit) as u8);
            } else if self.arity == 0 {
                // a 0-ary function is unanimous only if every symbol is its value
                self.fixed[v] = Some(u8::MAX);
            }
        }
        self
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn predicate(&self) -> &Predicate {
        self.predicate
    }

    /// Streams every polymorphism to `visit` in canonical order. The visitor
    /// may stop the search early with `ControlFlow::Break`.
    pub fn for_each<F>(&self, budget: u64, visit: F) -> Result<EnumerationStats>
    where
        F: FnMut(&PolymorphismTuple) -> ControlFlow<()>,
    {
        let mut search = self.search(Budget { limit: budget, local: 0, shared: None }, visit);
        match search.descend(0) {
            Err(Halt::Budget) => Err(Error::budget(budget, Vec::new(), search.solutions)),
            Ok(()) | Err(Halt::Visitor) => {
                Ok(EnumerationStats { assignments: search.budget.local, solutions: search.solutions })
            }
        }
    }

    /// All polymorphisms in canonical order. With more than one worker the
    /// space is split on a prefix of the variable order and the parts are
    /// concatenated in prefix order, which reproduces the sequential order.
    pub fn collect(&self, options: &EngineOptions) -> Result<Vec<PolymorphismTuple>> {
        if options.workers <= 1 || self.vars.len() < 4 {
            let mut out = Vec::new();
            return match self.for_each(options.budget, |fs| {
                out.push(fs.clone());
                ControlFlow::Continue(())
            }) {
                Ok(_) => Ok(out),
                Err(Error::BudgetExhausted(_)) => Err(Error::budget(options.budget, out, 0)),
                Err(e) => Err(e),
            };
        }

        let prefixes = self.prefixes(options.workers * 8);
        let spent = AtomicU64::new(0);
        let stop = AtomicBool::new(false);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.workers)
            .build()
            .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
        let parts: Vec<(Vec<PolymorphismTuple>, bool)> = pool.install(|| {
            prefixes
                .par_iter()
                .map(|(depth, tables)| {
                    let mut out = Vec::new();
                    let budget = Budget { limit: options.budget, local: 0, shared: Some((&spent, &stop)) };
                    let mut search = self.search(budget, |fs: &PolymorphismTuple| {
                        out.push(fs.clone());
                        ControlFlow::Continue(())
                    });
                    search.tables = tables.clone();
                    let halted = matches!(search.descend(*depth), Err(Halt::Budget));
                    (out, halted)
                })
                .collect()
        });
        let exhausted = parts.iter().any(|(_, halted)| *halted);
        let all: Vec<PolymorphismTuple> = parts.into_iter().flat_map(|(out, _)| out).collect();
        if exhausted {
            Err(Error::budget(options.budget, all, 0))
        } else {
            Ok(all)
        }
    }

    fn search<'s, V>(&'s self, budget: Budget<'s>, visit: V) -> Search<'s, 's, V>
    where
        V: FnMut(&PolymorphismTuple) -> ControlFlow<()>,
    {
        let tables =
            self.sizes.iter().map(|&k| vec![0u8; table_len(k, self.arity).expect("validated in new")]).collect();
        Search { engine: self, tables, budget, visit, solutions: 0 }
    }

    /// Consistent partial assignments of the first few variables, in order.
    fn prefixes(&self, want: usize) -> Vec<(usize, Vec<Vec<u8>>)> {
        let mut depth = 0;
        let mut frontier: Vec<Vec<Vec<u8>>> =
            vec![self.sizes.iter().map(|&k| vec![0u8; table_len(k, self.arity).expect("validated")]).collect()];
        while frontier.len() < want && depth + 1 < self.vars.len() {
            let mut next = Vec::new();
            for tables in frontier {
                for value in self.domain(depth) {
                    let mut t = tables.clone();
                    let var = self.vars[depth];
                    t[var.coordinate][var.entry] = value;
                    if self.consistent(depth, &t) {
                        next.push(t);
                    }
                }
            }
            frontier = next;
            depth += 1;
        }
        frontier.into_iter().map(|t| (depth, t)).collect()
    }

    fn domain(&self, v: usize) -> std::ops::Range<u8> {
        match self.fixed[v] {
            Some(u8::MAX) => 0..0,
            Some(value) => value..value + 1,
            None => 0..self.sizes[self.vars[v].coordinate] as u8,
        }
    }

    #[inline]
    fn consistent(&self, v: usize, tables: &[Vec<u8>]) -> bool {
        let m = self.sizes.len();
        self.checks[v].chunks_exact(m).all(|rows| {
            let mut idx = 0usize;
            for i in (0..m).rev() {
                idx = idx * self.sizes[i] + tables[i][rows[i] as usize] as usize;
            }
            self.predicate.contains_index(idx)
        })
    }
}

impl<V> Search<'_, '_, V>
where
    V: FnMut(&PolymorphismTuple) -> ControlFlow<()>,
{
    fn descend(&mut self, depth: usize) -> std::result::Result<(), Halt> {
        let engine = self.engine;
        if depth == engine.vars.len() {
            let fs = PolymorphismTuple::from_raw_tables(&engine.sizes, engine.arity, self.tables.clone());
            self.solutions += 1;
            return match (self.visit)(&fs) {
                ControlFlow::Continue(()) => Ok(()),
                ControlFlow::Break(()) => Err(Halt::Visitor),
            };
        }
        let var = engine.vars[depth];
        for value in engine.domain(depth) {
            if !self.budget.spend() {
                return Err(Halt::Budget);
            }
            self.tables[var.coordinate][var.entry] = value;
            if engine.consistent(depth, &self.tables) {
                self.descend(depth + 1)?;
            }
        }
        Ok(())
    }
}

/// All `n`-ary polymorphisms of `P` via the pruned search.
pub fn enumerate_polymorphisms(
    predicate: &Predicate,
    n: usize,
    options: &EngineOptions,
) -> Result<Vec<PolymorphismTuple>> {
    Enumeration::new(predicate, n)?.collect(options)
}

/// Full scan of `∏_i k_i^(k_iⁿ)` candidates, each tested with
/// [`is_polymorphism`]. Every candidate counts as one unit of budget.
pub fn scan_unpruned(predicate: &Predicate, n: usize, budget: u64) -> Result<Vec<PolymorphismTuple>> {
    let sizes = predicate.signature().sizes().to_vec();
    let lens = sizes.iter().map(|&k| table_len(k, n)).collect::<Result<Vec<_>>>()?;
    let max_len = lens.iter().copied().max().unwrap_or(0);
    // variable order identical to the pruned engine
    let mut vars: Vec<(usize, usize)> = Vec::new();
    for e in 0..max_len {
        vars.extend((0..sizes.len()).filter(|&i| e < lens[i]).map(|i| (i, e)));
    }
    let mut tables: Vec<Vec<u8>> = lens.iter().map(|&len| vec![0u8; len]).collect();
    let mut out = Vec::new();
    let mut spent = 0u64;
    loop {
        spent += 1;
        if spent > budget {
            return Err(Error::budget(budget, out, 0));
        }
        let fs = PolymorphismTuple::from_raw_tables(&sizes, n, tables.clone());
        if is_polymorphism(predicate, &fs)? {
            out.push(fs);
        }
        let mut advanced = false;
        for &(i, e) in vars.iter().rev() {
            if (tables[i][e] as usize) + 1 < sizes[i] {
                tables[i][e] += 1;
                advanced = true;
                break;
            }
            tables[i][e] = 0;
        }
        if !advanced {
            return Ok(out);
        }
    }
}
