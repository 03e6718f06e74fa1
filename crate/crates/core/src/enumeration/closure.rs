//! Exact closure of universe subsets under pp-definability.
//!
//! Upper bounds come from a library of known polymorphisms, lower bounds from cached
//! derivations. Every gap between the two is settled by a fresh certificate.

use std::collections::HashSet;
use std::sync::RwLock;

use crate::algebra::{Domain, Operation};
use crate::catalog::RELABELINGS;
use crate::error::{Error, Result};
use crate::poly::{search_relations, MinorCondition, SearchConfig};
use crate::relclosure::{derive, refute};

use super::universe::{RelSet, Universe};

/// Budgets for settling closure gaps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureBudget {
    pub aux_budget: usize,
    pub refutation_arity: usize,
    pub derivation_work: usize,
    pub refutation_choices: usize,
}

impl Default for ClosureBudget {
    fn default() -> Self {
        ClosureBudget { aux_budget: 2, refutation_arity: 4, derivation_work: 800_000, refutation_choices: 200_000 }
    }
}

#[derive(Default)]
struct Library {
    /// Preservation masks of known operations, with a Mal'cev flag.
    masks: Vec<(RelSet, bool)>,
    /// One operation realising each mask.
    ops: Vec<Operation>,
    seen: HashSet<(RelSet, bool)>,
    /// Premise set and conclusion of each derivation found.
    implications: Vec<(RelSet, usize)>,
    implication_seen: HashSet<(RelSet, usize)>,
    non_malcev: Vec<RelSet>,
}

/// Counters reported after a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClosureStats {
    pub operations: usize,
    pub implications: usize,
    pub derivations: usize,
    pub refutations: usize,
    pub malcev_searches: usize,
}

pub struct ClosureEngine {
    pub universe: Universe,
    pub budget: ClosureBudget,
    lib: RwLock<Library>,
    stats: RwLock<ClosureStats>,
}

/// A pair the certificate searches could not settle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unresolved {
    pub premises: Vec<String>,
    pub target: String,
}

fn d3() -> Domain {
    Domain::new(3).expect("three elements")
}

impl ClosureEngine {
    pub fn new(universe: Universe, budget: ClosureBudget) -> Self {
        ClosureEngine { universe, budget, lib: RwLock::new(Library::default()), stats: RwLock::new(ClosureStats::default()) }
    }

    pub fn stats(&self) -> ClosureStats {
        let lib = self.lib.read().expect("lock");
        ClosureStats { operations: lib.masks.len(), implications: lib.implications.len(), ..*self.stats.read().expect("lock") }
    }

    /// Adds an operation's preservation mask (and its relabelings) to the library.
    pub fn add_operation(&self, f: &Operation, malcev: bool) {
        let conjugates: Vec<(RelSet, Operation)> = RELABELINGS
            .iter()
            .map(|p| {
                let g = f.relabel(p).expect("relabeling of the domain");
                (self.universe.preserved_by(&g), g)
            })
            .collect();
        let mut lib = self.lib.write().expect("lock");
        for (c, g) in conjugates {
            if lib.seen.insert((c, malcev)) {
                lib.masks.push((c, malcev));
                lib.ops.push(g);
            }
        }
    }

    /// A library operation preserving `set` but not relation `r`.
    pub fn separating_operation(&self, set: RelSet, r: usize) -> Option<Operation> {
        let lib = self.lib.read().expect("lock");
        lib.masks.iter().position(|(m, _)| m & set == set && m >> r & 1 == 0).map(|i| lib.ops[i].clone())
    }

    fn add_implication(&self, premises: RelSet, target: usize) {
        let mut lib = self.lib.write().expect("lock");
        for p in 0..RELABELINGS.len() {
            let c = (self.universe.conjugate_set(premises, p), self.universe.conjugate[p][target]);
            if lib.implication_seen.insert(c) {
                lib.implications.push(c);
            }
        }
    }

    /// Seeds the library with every binary operation and the given operations.
    pub fn seed(&self, ops: &[(Operation, bool)]) -> Result<()> {
        let d = d3();
        let mut masks: std::collections::BTreeMap<RelSet, Operation> = std::collections::BTreeMap::new();
        let mut table = vec![0u8; 9];
        loop {
            let f = Operation::new(d, 2, table.clone())?;
            masks.entry(self.universe.preserved_by(&f)).or_insert(f);
            if !crate::algebra::advance(&mut table, 3) {
                break;
            }
        }
        for f in masks.values() {
            self.add_operation(f, false);
        }
        for (f, malcev) in ops {
            self.add_operation(f, *malcev);
        }
        Ok(())
    }

    /// Relations preserved by every library operation that preserves `set`.
    pub fn upper(&self, set: RelSet) -> RelSet {
        let lib = self.lib.read().expect("lock");
        lib.masks.iter().filter(|(m, _)| m & set == set).fold(self.universe.all(), |acc, (m, _)| acc & m)
    }

    /// Forward chaining over cached derivations.
    pub fn lower(&self, set: RelSet) -> RelSet {
        let lib = self.lib.read().expect("lock");
        let mut cur = set;
        loop {
            let mut changed = false;
            for &(p, t) in &lib.implications {
                if p & cur == p && cur >> t & 1 == 0 {
                    cur |= 1 << t;
                    changed = true;
                }
            }
            if !changed {
                return cur;
            }
        }
    }

    /// Whether `Pol(set)` contains a Mal'cev operation.
    pub fn is_malcev(&self, set: RelSet) -> Result<bool> {
        {
            let lib = self.lib.read().expect("lock");
            if lib.masks.iter().any(|(m, mal)| *mal && m & set == set) {
                return Ok(true);
            }
            if lib.non_malcev.iter().any(|n| n & set == *n) {
                return Ok(false);
            }
        }
        self.stats.write().expect("lock").malcev_searches += 1;
        let cond = MinorCondition::builtin("malcev")?;
        let out = search_relations(&self.universe.relations_of(set), d3(), &cond, &[], &[], &SearchConfig::default())?;
        match out.operation("m") {
            Some(m) => {
                self.add_operation(m, true);
                Ok(true)
            }
            None => {
                let mut lib = self.lib.write().expect("lock");
                for p in 0..RELABELINGS.len() {
                    let c = self.universe.conjugate_set(set, p);
                    lib.non_malcev.push(c);
                }
                Ok(false)
            }
        }
    }

    /// All universe relations pp-definable from `set`.
    pub fn closure(&self, set: RelSet) -> std::result::Result<RelSet, Unresolved> {
        let mut lower = self.lower(set);
        loop {
            let upper = self.upper(set);
            debug_assert_eq!(upper & lower, lower);
            let gap = upper & !lower;
            if gap == 0 {
                return Ok(lower);
            }
            let target = gap.trailing_zeros() as usize;
            let res = self.settle(lower, target);
            match res {
                Ok(true) => lower = self.lower(lower | 1 << target),
                Ok(false) => {}
                Err(_) => {
                    return Err(Unresolved {
                        premises: self.universe.names_of(lower),
                        target: self.universe.names[target].clone(),
                    })
                }
            }
        }
    }

    /// Decides whether `lower` defines `target`, recording the certificate found.
    fn settle(&self, lower: RelSet, target: usize) -> Result<bool> {
        let u = &self.universe;
        let goal = &u.relations[target];
        let rels = u.relations_of(lower);
        let b = self.budget;
        let refuted = |n: usize| -> Result<bool> {
            if let Some(r) = refute(&rels, goal, n, b.refutation_choices)? {
                self.stats.write().expect("lock").refutations += 1;
                self.add_operation(&r.operation, false);
                return Ok(true);
            }
            Ok(false)
        };
        // Every binary operation is in the library, so refutations start at arity 3.
        // Small premise sets go first: their derivations apply to more supersets.
        let members = u.members(lower);
        let mut subsets: Vec<RelSet> = Vec::new();
        for (x, &i) in members.iter().enumerate() {
            subsets.push(1 << i);
            for &j in &members[x + 1..] {
                subsets.push(1 << i | 1 << j);
            }
        }
        subsets.retain(|&p| self.upper(p) >> target & 1 == 1);
        subsets.push(lower);
        let rounds = [b.derivation_work / 16, b.derivation_work / 4, b.derivation_work];
        for (round, &work) in rounds.iter().enumerate() {
            for &p in &subsets {
                if self.derived(p, target, work)? {
                    return Ok(true);
                }
            }
            let n = round + 3;
            if n <= b.refutation_arity && refuted(n)? {
                return Ok(false);
            }
        }
        Err(Error::Capability("pp-definability undecided within budgets".into()))
    }

    fn derived(&self, premises: RelSet, target: usize, work: usize) -> Result<bool> {
        let u = &self.universe;
        let rels = u.relations_of(premises);
        let Some(d) = derive(&rels, &u.relations[target], self.budget.aux_budget, work)? else {
            return Ok(false);
        };
        if d.replay(&rels, d3())? != u.relations[target] {
            return Err(Error::Validation("derivation replay mismatch".into()));
        }
        let mut used = 0u64;
        let idx = u.members(premises);
        for s in &d.steps {
            if let crate::relclosure::Step::Premise(k) = s {
                used |= 1 << idx[*k];
            }
        }
        self.stats.write().expect("lock").derivations += 1;
        self.add_implication(used, target);
        Ok(true)
    }
}
