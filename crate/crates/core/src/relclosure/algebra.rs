//! Congruences, commutator relations, coordinate kernels and critical relations.

use std::collections::HashSet;

use crate::algebra::{all_tuples, Domain, Operation, Partition, Relation};
use crate::error::{Error, Result};

/// Largest domain on which congruence lattices are computed by listing partitions.
pub const MAX_CONGRUENCE_DOMAIN: usize = 5;

/// A domain together with generating operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    domain: Domain,
    ops: Vec<Operation>,
}

impl Algebra {
    pub fn new(domain: Domain, ops: Vec<Operation>) -> Result<Self> {
        if let Some(f) = ops.iter().find(|f| f.domain() != domain) {
            return Err(Error::Argument(format!(
                "operation over {} elements in an algebra over {}",
                f.domain().size(),
                domain.size()
            )));
        }
        Ok(Algebra { domain, ops })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn preserves(&self, rel: &Relation) -> Result<bool> {
        for f in &self.ops {
            if !f.preserves(rel)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The subuniverse of `A^n` generated by `tuples`.
    pub fn generate(&self, arity: usize, tuples: &[Vec<u8>]) -> Result<Relation> {
        let mut rel = Relation::from_tuples(self.domain, arity, tuples)?;
        let mut members: Vec<Vec<u8>> = rel.tuples();
        let mut fresh = 0usize;
        // Semi-naive fixpoint: every new combination uses at least one tuple from the last round.
        while fresh < members.len() {
            let start = fresh;
            let end = members.len();
            fresh = end;
            let mut added: Vec<Vec<u8>> = Vec::new();
            for f in &self.ops {
                let n = f.arity();
                let mut pick = vec![0usize; n];
                let mut args = vec![0u8; n];
                loop {
                    if pick.iter().any(|&p| p >= start) {
                        let image: Vec<u8> = (0..arity)
                            .map(|c| {
                                for (k, &p) in pick.iter().enumerate() {
                                    args[k] = members[p][c];
                                }
                                f.eval(&args)
                            })
                            .collect();
                        if !rel.contains(&image) {
                            rel.insert_index(self.domain.encode(&image));
                            added.push(image);
                        }
                    }
                    if !advance_bounded(&mut pick, end) {
                        break;
                    }
                }
            }
            members.extend(added);
        }
        Ok(rel)
    }
}

fn advance_bounded(pick: &mut [usize], bound: usize) -> bool {
    for p in pick.iter_mut().rev() {
        *p += 1;
        if *p < bound {
            return true;
        }
        *p = 0;
    }
    false
}

/// Congruences ordered by refinement (finest first), with the monolith when there is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceLattice {
    pub congruences: Vec<Partition>,
    /// Index of the unique minimal congruence above the equality partition.
    pub monolith: Option<usize>,
}

impl CongruenceLattice {
    /// Indices of the minimal congruences other than the equality partition.
    pub fn minimal_nontrivial(&self) -> Vec<usize> {
        let nontrivial: Vec<usize> =
            (0..self.congruences.len()).filter(|&i| !self.congruences[i].is_discrete()).collect();
        nontrivial
            .iter()
            .copied()
            .filter(|&i| {
                !nontrivial
                    .iter()
                    .any(|&j| j != i && self.congruences[j].refines(&self.congruences[i]))
            })
            .collect()
    }

    /// Congruences other than the two trivial ones.
    pub fn proper(&self) -> impl Iterator<Item = &Partition> {
        self.congruences.iter().filter(|p| !p.is_discrete() && !p.is_total())
    }
}

pub fn congruence_lattice(a: &Algebra) -> Result<CongruenceLattice> {
    if a.domain.size() > MAX_CONGRUENCE_DOMAIN {
        return Err(Error::Capability(format!(
            "congruence lattices are listed only for domains up to {MAX_CONGRUENCE_DOMAIN} elements"
        )));
    }
    let mut congruences = Vec::new();
    for p in Partition::all(a.domain) {
        if p.is_congruence(&a.ops)? {
            congruences.push(p);
        }
    }
    congruences.sort_by(|p, q| q.num_blocks().cmp(&p.num_blocks()).then_with(|| p.cmp(q)));
    let mut lattice = CongruenceLattice { congruences, monolith: None };
    if let [m] = lattice.minimal_nontrivial()[..] {
        lattice.monolith = Some(m);
    }
    Ok(lattice)
}

fn check_malcev(d: &Operation) -> Result<()> {
    let ok = d.arity() == 3
        && d.domain().elements().all(|x| {
            d.domain().elements().all(|y| d.eval(&[x, x, y]) == y && d.eval(&[y, x, x]) == y)
        });
    if ok {
        Ok(())
    } else {
        Err(Error::Argument("designated operation is not a Mal'cev operation".into()))
    }
}

fn check_congruence(a: &Algebra, p: &Partition, name: &str) -> Result<()> {
    if p.domain() != a.domain {
        return Err(Error::Argument(format!("{name} lives on a different domain")));
    }
    if !p.is_congruence(&a.ops)? {
        return Err(Error::Argument(format!("{name} is not a congruence of the algebra")));
    }
    Ok(())
}

/// `T(α,β) = {(x,y,z,d(x,y,z)) : x α y β z}`.
pub fn central_relation(a: &Algebra, d: &Operation, alpha: &Partition, beta: &Partition) -> Result<Relation> {
    check_malcev(d)?;
    check_congruence(a, alpha, "alpha")?;
    check_congruence(a, beta, "beta")?;
    Relation::from_predicate(a.domain, 4, |t| {
        alpha.related(t[0], t[1]) && beta.related(t[1], t[2]) && d.eval(&t[..3]) == t[3]
    })
}

/// Whether every generator (and `d`) preserves `T(α,β)`.
pub fn centralizes(a: &Algebra, d: &Operation, alpha: &Partition, beta: &Partition) -> Result<bool> {
    let t = central_relation(a, d, alpha, beta)?;
    Ok(a.preserves(&t)? && d.preserves(&t)?)
}

/// The largest congruence `δ` such that `α` centralizes `δ`.
pub fn centralizer(a: &Algebra, d: &Operation, alpha: &Partition) -> Result<Partition> {
    let lattice = congruence_lattice(a)?;
    let mut good = Vec::new();
    for delta in &lattice.congruences {
        if centralizes(a, d, alpha, delta)? {
            good.push(delta);
        }
    }
    good.iter()
        .find(|top| good.iter().all(|p| p.refines(top)))
        .map(|p| (*p).clone())
        .ok_or_else(|| Error::Validation("centralizing congruences have no largest element".into()))
}

/// Whether `α` (the total partition when `None`) centralizes itself.
pub fn is_abelian(a: &Algebra, d: &Operation, alpha: Option<&Partition>) -> Result<bool> {
    let total = Partition::total(a.domain);
    let alpha = alpha.unwrap_or(&total);
    centralizes(a, d, alpha, alpha)
}

/// Coordinate kernels of a relation and its image under the quotient map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernels {
    /// Projection of the relation onto each coordinate.
    pub supports: Vec<Vec<u8>>,
    /// `θ_i` on the support of coordinate `i`; elements outside the support are singletons.
    pub kernels: Vec<Partition>,
    /// Tuples of block numbers; blocks of `θ_i` restricted to the support are numbered by least element.
    pub reduced: Relation,
}

impl Kernels {
    /// Block number of `x` in coordinate `i`.
    pub fn block(&self, i: usize, x: u8) -> Option<u8> {
        if !self.supports[i].contains(&x) {
            return None;
        }
        let mut reps: Vec<u8> = Vec::new();
        for &y in &self.supports[i] {
            if !reps.iter().any(|&r| self.kernels[i].related(r, y)) {
                reps.push(y);
            }
        }
        reps.iter().position(|&r| self.kernels[i].related(r, x)).map(|p| p as u8)
    }
}

pub fn coordinate_kernels(rel: &Relation, a: &Algebra) -> Result<Kernels> {
    if rel.domain() != a.domain {
        return Err(Error::Argument("relation and algebra live on different domains".into()));
    }
    if !rel.has_parallelogram()? {
        return Err(Error::Precondition("relation lacks the parallelogram property".into()));
    }
    let n = rel.arity();
    let d = a.domain;
    let tuples = rel.tuples();
    let mut supports = Vec::with_capacity(n);
    let mut kernels = Vec::with_capacity(n);
    for i in 0..n {
        let mut support: Vec<u8> = tuples.iter().map(|t| t[i]).collect();
        support.sort_unstable();
        support.dedup();
        // x θ_i y iff some context outside coordinate i admits both.
        let contexts = |x: u8| -> HashSet<Vec<u8>> {
            tuples
                .iter()
                .filter(|t| t[i] == x)
                .map(|t| t.iter().enumerate().filter(|&(c, _)| c != i).map(|(_, &v)| v).collect())
                .collect()
        };
        let ctx: Vec<HashSet<Vec<u8>>> = d.elements().map(contexts).collect();
        let mut labels: Vec<usize> = (0..d.size()).collect();
        for &x in &support {
            for &y in &support {
                if y < x && labels[y as usize] == y as usize && !ctx[x as usize].is_disjoint(&ctx[y as usize]) {
                    labels[x as usize] = labels[y as usize];
                    break;
                }
            }
        }
        kernels.push(Partition::from_labels(d, &labels)?);
        supports.push(support);
    }
    let mut k = Kernels { supports, kernels, reduced: Relation::empty(d, n)? };
    let blocks = k.supports.iter().zip(&k.kernels).map(|(s, p)| {
        let mut reps: Vec<u8> = Vec::new();
        for &y in s {
            if !reps.iter().any(|&r| p.related(r, y)) {
                reps.push(y);
            }
        }
        reps.len()
    });
    let width = blocks.max().unwrap_or(1).max(1);
    let reduced_domain = Domain::new(width)?;
    let image: Vec<Vec<u8>> = tuples
        .iter()
        .map(|t| (0..n).map(|i| k.block(i, t[i]).expect("in support")).collect())
        .collect();
    k.reduced = Relation::from_tuples(reduced_domain, n, &image)?;
    // R is the full preimage of its reduced representation.
    for t in all_tuples(d, n) {
        let inside = (0..n)
            .map(|i| k.block(i, t[i]))
            .collect::<Option<Vec<u8>>>()
            .is_some_and(|b| k.reduced.contains(&b));
        if inside != rel.contains(&t) {
            return Err(Error::Validation(format!("tuple {t:?} breaks the preimage property")));
        }
    }
    Ok(k)
}

/// Whether `rel` has no dummy coordinate and a unique upper cover among subuniverses of `A^n`.
pub fn is_critical(rel: &Relation, a: &Algebra) -> Result<bool> {
    Ok(upper_covers(rel, a)?.len() == 1 && (0..rel.arity()).all(|i| !rel.is_dummy(i)))
}

/// Minimal subuniverses of `A^n` strictly containing `rel`.
pub fn upper_covers(rel: &Relation, a: &Algebra) -> Result<Vec<Relation>> {
    if rel.domain() != a.domain {
        return Err(Error::Argument("relation and algebra live on different domains".into()));
    }
    if !a.preserves(rel)? {
        return Err(Error::Precondition("relation is not a subuniverse of the power".into()));
    }
    let n = rel.arity();
    let base = rel.tuples();
    let mut candidates: Vec<Relation> = Vec::new();
    for t in all_tuples(a.domain, n) {
        if rel.contains(&t) {
            continue;
        }
        let mut gens = base.clone();
        gens.push(t);
        let s = a.generate(n, &gens)?;
        if !candidates.contains(&s) {
            candidates.push(s);
        }
    }
    let minimal = candidates
        .iter()
        .filter(|s| !candidates.iter().any(|q| q != *s && q.is_subset(s)))
        .cloned()
        .collect();
    Ok(minimal)
}
