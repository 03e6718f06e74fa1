//! Relational basis of the idempotent affine algebra on a prime-size set.

use std::collections::BTreeSet;

use crate::algebra::{all_tuples, Domain, Operation, Relation};
use crate::catalog::affine_graph;
use crate::error::{Error, Result};

use super::algebra::Algebra;
use super::ppdef::{pp_definable, PpConfig, Verdict};

/// Outcome of checking one invariant relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZpEntry {
    pub relation: Relation,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZpReport {
    pub p: usize,
    pub arity_bound: usize,
    /// Invariant relations per arity, starting at arity 1.
    pub counts: Vec<usize>,
    /// Relations above arity 2, each checked against the basis.
    pub checked: Vec<ZpEntry>,
}

impl ZpReport {
    pub fn failures(&self) -> Vec<&ZpEntry> {
        self.checked.iter().filter(|e| e.verdict != Verdict::Definable).collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

fn affine_op(p: usize) -> Result<Operation> {
    let d = Domain::new(p)?;
    Operation::from_fn(d, 3, |t| ((t[0] as usize + p - t[1] as usize + t[2] as usize) % p) as u8)
}

/// Every relation of the given arity preserved by `x - y + z mod p`, including the empty one.
pub fn affine_subspaces(p: usize, arity: usize) -> Result<Vec<Relation>> {
    let d = Domain::new(p)?;
    let alg = Algebra::new(d, vec![affine_op(p)?])?;
    let mut found: BTreeSet<Relation> = BTreeSet::new();
    let mut frontier = vec![Relation::empty(d, arity)?];
    found.insert(frontier[0].clone());
    while let Some(r) = frontier.pop() {
        let base = r.tuples();
        for t in all_tuples(d, arity) {
            if r.contains(&t) {
                continue;
            }
            let mut gens = base.clone();
            gens.push(t);
            let s = alg.generate(arity, &gens)?;
            if found.insert(s.clone()) {
                frontier.push(s);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Checks that `T` of `Z_p` together with the at most binary invariant relations pp-defines every
/// invariant relation of arity at most `arity_bound`.
pub fn verify_zp_basis(p: usize, arity_bound: usize, config: &PpConfig) -> Result<ZpReport> {
    if p != 2 && p != 3 {
        return Err(Error::Argument("p must be 2 or 3".into()));
    }
    if arity_bound == 0 || arity_bound > 4 {
        return Err(Error::Argument("arity bound must lie in 1..=4".into()));
    }
    let d = Domain::new(p)?;
    let f = affine_op(p)?;
    let mut basis = vec![affine_graph(d)];
    let mut counts = Vec::new();
    let mut checked = Vec::new();
    for n in 1..=arity_bound {
        let rels = affine_subspaces(p, n)?;
        for r in &rels {
            if !f.preserves(r)? {
                return Err(Error::Validation(format!("generated subspace {r:?} is not invariant")));
            }
        }
        counts.push(rels.len());
        if n <= 2 {
            basis.extend(rels.into_iter().filter(|r| !r.is_empty() && !r.is_full()));
            continue;
        }
        for r in rels {
            let verdict = pp_definable(&basis, &r, config)?.verdict;
            checked.push(ZpEntry { relation: r, verdict });
        }
    }
    Ok(ZpReport { p, arity_bound, counts, checked })
}
