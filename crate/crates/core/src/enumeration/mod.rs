//! Enumeration of the Mal'cev clones on three elements.
//!
//! A clone is identified with the set `X` of universe relations it preserves; such sets are
//! exactly those with `X = Inv(Pol X)` restricted to the universe. Exploration adds one relation
//! at a time to known closed sets and closes again.

mod closure;
mod ingest;
mod universe;

pub use closure::{ClosureBudget, ClosureEngine, ClosureStats, Unresolved};
pub use ingest::{ingest_generator_db, read_mapping, reconstruct_clones, ColumnMapping, GeneratorRecord};
pub use universe::{RelSet, Universe};

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Operation;
use crate::catalog::{builtin_operation, RELABELINGS};
use crate::classifier::{classify, ClassLabel};
use crate::error::{Error, Result};

impl From<Unresolved> for Error {
    fn from(u: Unresolved) -> Error {
        Error::Capability(format!(
            "pp-definability of {} from {{{}}} undecided within budgets",
            u.target,
            u.premises.join(", ")
        ))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Generated,
    Ingested,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CloneRecord {
    /// Canonical basis, in catalog order.
    pub basis: Vec<String>,
    /// Every universe relation preserved by the clone.
    #[serde(skip)]
    pub closed: RelSet,
    pub label: ClassLabel,
    pub minimal: bool,
    pub idempotent: bool,
    pub provenance: Provenance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationConfig {
    pub budget: ClosureBudget,
    /// Largest aux budget tried before giving up on an undecided pair.
    pub max_aux_budget: usize,
    pub jobs: usize,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig { budget: ClosureBudget::default(), max_aux_budget: 4, jobs: 1 }
    }
}

/// Operations whose preservation masks seed the closure engine; all are Mal'cev.
pub const SEED_OPERATIONS: [&str; 5] = ["d0", "d1", "d2", "g", "affine3"];

fn seeded_engine(budget: ClosureBudget) -> Result<ClosureEngine> {
    let engine = ClosureEngine::new(Universe::standard()?, budget);
    let ops = SEED_OPERATIONS
        .iter()
        .map(|k| Ok((builtin_operation(k, None)?, true)))
        .collect::<Result<Vec<(Operation, bool)>>>()?;
    engine.seed(&ops)?;
    Ok(engine)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Capability(format!("thread pool: {e}")))
}

/// Every closed Mal'cev subset of the universe.
pub fn explore(engine: &ClosureEngine) -> Result<BTreeSet<RelSet>> {
    let u = &engine.universe;
    let root = engine.closure(0)?;
    let mut seen: BTreeSet<RelSet> = BTreeSet::new();
    seen.insert(root);
    let mut frontier = vec![root];
    while !frontier.is_empty() {
        let found = frontier
            .par_iter()
            .map(|&x| {
                let mut reps = Vec::new();
                for r in 0..u.len() {
                    let y = x | 1 << r;
                    if y == x || !engine.is_malcev(y)? {
                        continue;
                    }
                    reps.push(u.orbit_min(engine.closure(y)?));
                }
                Ok(reps)
            })
            .collect::<Result<Vec<Vec<RelSet>>>>()?;
        let mut reps: Vec<RelSet> = found.into_iter().flatten().collect();
        reps.sort_unstable();
        reps.dedup();
        frontier = Vec::new();
        for z in reps {
            if seen.contains(&z) {
                continue;
            }
            for p in 0..RELABELINGS.len() {
                seen.insert(u.conjugate_set(z, p));
            }
            frontier.push(z);
        }
    }
    Ok(seen)
}

/// Greedy basis in catalog order, with redundant members removed.
pub fn canonical_basis(engine: &ClosureEngine, closed: RelSet) -> Result<RelSet> {
    let mut basis: RelSet = 0;
    let mut reached = engine.closure(0)?;
    for i in engine.universe.members(closed) {
        if reached >> i & 1 == 0 {
            basis |= 1 << i;
            reached = engine.closure(basis)?;
        }
    }
    for i in engine.universe.members(basis) {
        let smaller = basis & !(1 << i);
        if engine.closure(smaller)? == closed {
            basis = smaller;
        }
    }
    Ok(basis)
}

/// Result of a full enumeration run.
pub struct Enumeration {
    pub engine: ClosureEngine,
    pub records: Vec<CloneRecord>,
    /// The aux budget under which no pp verdict remained undecided.
    pub aux_budget: usize,
}

/// Counts reported for reconciliation with external tallies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationSummary {
    pub literal: usize,
    pub up_to_relabeling: usize,
    /// Orbit size to number of orbits.
    pub orbit_sizes: BTreeMap<usize, usize>,
    pub idempotent: usize,
    pub minimal: usize,
    pub histogram: BTreeMap<ClassLabel, usize>,
    pub aux_budget: usize,
    pub unknown_verdicts: usize,
}

impl Enumeration {
    pub fn universe(&self) -> &Universe {
        &self.engine.universe
    }

    pub fn summary(&self) -> EnumerationSummary {
        let u = self.universe();
        let mut orbits: BTreeMap<RelSet, usize> = BTreeMap::new();
        for r in &self.records {
            *orbits.entry(u.orbit_min(r.closed)).or_default() += 1;
        }
        let mut orbit_sizes = BTreeMap::new();
        for &n in orbits.values() {
            *orbit_sizes.entry(n).or_default() += 1;
        }
        EnumerationSummary {
            literal: self.records.len(),
            up_to_relabeling: orbits.len(),
            orbit_sizes,
            idempotent: self.records.iter().filter(|r| r.idempotent).count(),
            minimal: self.records.iter().filter(|r| r.minimal).count(),
            histogram: classify_all(&self.records),
            aux_budget: self.aux_budget,
            unknown_verdicts: 0,
        }
    }

    /// Records whose clone contains `f`, i.e. whose closed set is preserved by it.
    pub fn containing(&self, f: &Operation) -> Vec<&CloneRecord> {
        let m = self.universe().preserved_by(f);
        self.records.iter().filter(|r| r.closed & m == r.closed).collect()
    }

    /// The record with the given closed set.
    pub fn record_of(&self, closed: RelSet) -> Option<&CloneRecord> {
        self.records.iter().find(|r| r.closed == closed)
    }
}

/// Enumerates, deduplicates, classifies and marks minimal records.
pub fn enumerate_malcev(config: &EnumerationConfig) -> Result<Enumeration> {
    let pool = pool(config.jobs)?;
    let mut budget = config.budget;
    loop {
        let engine = seeded_engine(budget)?;
        match pool.install(|| explore(&engine)) {
            Ok(sets) => {
                let records = pool.install(|| build_records(&engine, &sets))?;
                return Ok(Enumeration { engine, records, aux_budget: budget.aux_budget });
            }
            Err(Error::Capability(_)) if budget.aux_budget < config.max_aux_budget => budget.aux_budget += 1,
            Err(e) => return Err(e),
        }
    }
}

fn build_records(engine: &ClosureEngine, sets: &BTreeSet<RelSet>) -> Result<Vec<CloneRecord>> {
    let u = &engine.universe;
    let consts = u.set_of(&["U0", "U1", "U2"])?;
    let sets: Vec<RelSet> = sets.iter().copied().collect();
    let maximal: BTreeSet<RelSet> = find_minimal_sets(&sets).into_iter().collect();
    sets.par_iter()
        .map(|&closed| {
            let basis = canonical_basis(engine, closed)?;
            let (label, _) = classify(&u.structure_of(basis))?;
            Ok(CloneRecord {
                basis: u.names_of(basis),
                closed,
                label,
                minimal: maximal.contains(&closed),
                idempotent: closed & consts == consts,
                provenance: Provenance::Generated,
            })
        })
        .collect()
}

/// Closed sets that are maximal under inclusion, i.e. clones minimal under inclusion.
fn find_minimal_sets(sets: &[RelSet]) -> Vec<RelSet> {
    sets.iter()
        .copied()
        .filter(|&x| !sets.iter().any(|&y| y != x && y & x == x))
        .collect()
}

/// Records minimal under clone inclusion.
pub fn find_minimal(records: &[CloneRecord]) -> Vec<CloneRecord> {
    let sets: Vec<RelSet> = records.iter().map(|r| r.closed).collect();
    let minimal: BTreeSet<RelSet> = find_minimal_sets(&sets).into_iter().collect();
    records.iter().filter(|r| minimal.contains(&r.closed)).cloned().collect()
}

/// Number of records per class label.
pub fn classify_all(records: &[CloneRecord]) -> BTreeMap<ClassLabel, usize> {
    let mut h = BTreeMap::new();
    for r in records {
        *h.entry(r.label).or_default() += 1;
    }
    h
}

/// A clone preserving more than one nontrivial equivalence relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonolithViolation {
    pub basis: Vec<String>,
    pub congruences: Vec<String>,
}

/// Clones with two distinct minimal nontrivial congruences; the nontrivial proper
/// equivalences on three elements are pairwise incomparable.
pub fn monolith_sweep(enumeration: &Enumeration) -> Result<Vec<MonolithViolation>> {
    let u = enumeration.universe();
    let mus = u.set_of(&["mu0", "mu1", "mu2"])?;
    Ok(enumeration
        .records
        .iter()
        .filter(|r| (r.closed & mus).count_ones() > 1)
        .map(|r| MonolithViolation { basis: r.basis.clone(), congruences: u.names_of(r.closed & mus) })
        .collect())
}

/// How many closed sets are generated by one relabeled case set plus unary relations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Representation {
    pub simple_case: usize,
    pub monolith_case: usize,
    pub unrepresented: usize,
}

/// Relations of the standard basis for clones without a nontrivial congruence.
pub const SIMPLE_CASE: [&str; 15] = [
    "phi", "psi2", "psi0'", "psi1'", "psi2'", "phi0'", "phi1'", "phi2'", "phi3'", "phi4'", "phi5'", "T", "T0'",
    "T1'", "T2'",
];

/// Relations of the standard basis for clones with monolith `mu2`.
pub const MONOLITH_CASE: [&str; 10] = ["mu2", "rho2", "tau0", "tau1", "psi2", "psi2'", "T2", "T2'", "Tmu2", "S01"];

/// Checks that each closed set is generated by its intersection with a relabeled standard
/// basis plus unary relations.
pub fn representation(enumeration: &Enumeration) -> Result<Representation> {
    let e = &enumeration.engine;
    let u = &e.universe;
    let c1 = u.set_of(&SIMPLE_CASE)?;
    let c2 = u.set_of(&MONOLITH_CASE)?;
    let unary = u.set_of(&["U0", "U1", "U2", "U01", "U02", "U12"])?;
    let mut out = Representation::default();
    for r in &enumeration.records {
        let mut which = None;
        'search: for p in 0..RELABELINGS.len() {
            for (case, c) in [(1, c1), (2, c2)] {
                if e.closure(r.closed & (u.conjugate_set(c, p) | unary))? == r.closed {
                    which = Some(case);
                    break 'search;
                }
            }
        }
        match which {
            Some(1) => out.simple_case += 1,
            Some(_) => out.monolith_case += 1,
            None => out.unrepresented += 1,
        }
    }
    Ok(out)
}
