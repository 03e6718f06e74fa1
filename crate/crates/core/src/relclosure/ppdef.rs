use crate::algebra::{Domain, Operation, Relation};
use crate::error::{Error, Result};
use crate::poly::csp::Solve;
use crate::poly::{build_csp, MinorCondition, SearchConfig};

use super::derive::{Derivation, Saturation, SaturationLimits};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Definable,
    NotDefinable,
    Unknown,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Definable => "definable",
            Verdict::NotDefinable => "not-definable",
            Verdict::Unknown => "unknown",
        }
    }
}

/// A polymorphism of the premises that maps the listed target tuples outside the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub operation: Operation,
    pub tuples: Vec<Vec<u8>>,
}

impl Refutation {
    /// The tuple obtained by applying the operation coordinatewise to `tuples`.
    pub fn image(&self) -> Vec<u8> {
        let k = self.tuples.first().map_or(0, Vec::len);
        (0..k)
            .map(|c| {
                let col: Vec<u8> = self.tuples.iter().map(|t| t[c]).collect();
                self.operation.eval(&col)
            })
            .collect()
    }

    /// Re-checks that the operation preserves every premise and violates the target.
    pub fn verify(&self, premises: &[Relation], target: &Relation) -> Result<bool> {
        if self.tuples.len() != self.operation.arity() || !self.tuples.iter().all(|t| target.contains(t)) {
            return Ok(false);
        }
        for p in premises {
            if !self.operation.preserves(p)? {
                return Ok(false);
            }
        }
        Ok(!target.contains(&self.image()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpAnswer {
    pub verdict: Verdict,
    pub proof: Option<Derivation>,
    pub refutation: Option<Refutation>,
}

/// Budgets for the two certificate searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PpConfig {
    /// Extra arity allowed for intermediate relations of a derivation.
    pub aux_budget: usize,
    /// Largest arity of a refuting polymorphism.
    pub refutation_arity: usize,
    /// Candidate relations generated by the derivation search.
    pub derivation_work: usize,
    /// Tuple selections tried per refutation arity.
    pub refutation_choices: usize,
}

impl Default for PpConfig {
    fn default() -> Self {
        PpConfig { aux_budget: 4, refutation_arity: 4, derivation_work: 400_000, refutation_choices: 20_000 }
    }
}

fn check_inputs(gamma: &[Relation], target: &Relation) -> Result<Domain> {
    let domain = target.domain();
    if let Some(r) = gamma.iter().find(|r| r.domain() != domain) {
        return Err(Error::Argument(format!(
            "premise over {} elements but target over {}",
            r.domain().size(),
            domain.size()
        )));
    }
    if target.arity() > 4 {
        return Err(Error::Capability("pp-definability is decided for targets of arity at most 4".into()));
    }
    Ok(domain)
}

/// Searches for a derivation of `target` from `gamma` within the budgets.
pub fn derive(gamma: &[Relation], target: &Relation, aux: usize, work: usize) -> Result<Option<Derivation>> {
    let domain = check_inputs(gamma, target)?;
    let limits = SaturationLimits { max_arity: target.arity().max(2), aux, work };
    let mut sat = Saturation::new(domain, gamma, limits);
    Ok(sat.run(Some(target)).map(|id| {
        let d = sat.derivation(id, target);
        debug_assert_eq!(d.replay(gamma, domain).ok().as_ref(), Some(target));
        d
    }))
}

/// Searches for an `n`-ary polymorphism of `gamma` sending some `n` tuples of `target` outside it.
pub fn refute(gamma: &[Relation], target: &Relation, n: usize, max_choices: usize) -> Result<Option<Refutation>> {
    let domain = check_inputs(gamma, target)?;
    let tuples = target.tuples();
    if tuples.len() < n || target.is_full() {
        return Ok(None);
    }
    let cond = MinorCondition::new("refute", vec![("f".into(), n)], vec![])?;
    let config = SearchConfig { max_arity: n, node_limit: None };
    let (lay, mut csp) = build_csp(gamma, domain, &cond, &[], &[], &config)?;
    let outside = csp.table(&target.complement());
    let k = target.arity();
    let mut pick: Vec<usize> = (0..n).collect();
    let mut tried = 0usize;
    let mut col = vec![0u8; n];
    loop {
        tried += 1;
        if tried > max_choices {
            return Ok(None);
        }
        let vars: Vec<u32> = (0..k)
            .map(|c| {
                for (i, &p) in pick.iter().enumerate() {
                    col[i] = tuples[p][c];
                }
                lay.class_of[lay.cell(0, &col)]
            })
            .collect();
        let cp = csp.checkpoint();
        csp.constrain(outside, &vars);
        let sol = csp.first_solution();
        csp.rollback(cp);
        if let Solve::Found(v) = sol {
            let table = (0..domain.tuple_count(n)?).map(|i| v[lay.class_of[i] as usize]).collect();
            let r = Refutation {
                operation: Operation::new(domain, n, table)?,
                tuples: pick.iter().map(|&p| tuples[p].clone()).collect(),
            };
            if !r.verify(gamma, target)? {
                return Err(Error::Validation("refuting operation failed re-verification".into()));
            }
            return Ok(Some(r));
        }
        if !next_combination(&mut pick, tuples.len()) {
            return Ok(None);
        }
    }
}

fn next_combination(pick: &mut [usize], m: usize) -> bool {
    let n = pick.len();
    for i in (0..n).rev() {
        if pick[i] < m - n + i {
            pick[i] += 1;
            for j in i + 1..n {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Decides whether `gamma` pp-defines `target`, returning a certificate either way when one is found.
pub fn pp_definable(gamma: &[Relation], target: &Relation, config: &PpConfig) -> Result<PpAnswer> {
    check_inputs(gamma, target)?;
    let found = |r: Refutation| PpAnswer { verdict: Verdict::NotDefinable, proof: None, refutation: Some(r) };
    enum Stage {
        Refute(usize),
        Derive(usize),
    }
    let w = config.derivation_work;
    let mut stages = vec![Stage::Refute(1), Stage::Refute(2), Stage::Derive(w / 16), Stage::Refute(3)];
    stages.extend([Stage::Derive(w / 4), Stage::Refute(4), Stage::Derive(w)]);
    stages.extend((5..=config.refutation_arity).map(Stage::Refute));
    for stage in stages {
        match stage {
            Stage::Refute(n) if n <= config.refutation_arity => {
                if let Some(r) = refute(gamma, target, n, config.refutation_choices)? {
                    return Ok(found(r));
                }
            }
            Stage::Refute(_) => {}
            Stage::Derive(work) => {
                if let Some(d) = derive(gamma, target, config.aux_budget, work)? {
                    return Ok(PpAnswer { verdict: Verdict::Definable, proof: Some(d), refutation: None });
                }
            }
        }
    }
    Ok(PpAnswer { verdict: Verdict::Unknown, proof: None, refutation: None })
}

/// Relations derivable from a premise set, up to coordinate order.
#[derive(Clone, Debug)]
pub struct PpClosure {
    pub relations: Vec<Relation>,
    pub budget_limited: bool,
}

impl PpClosure {
    /// Whether some derived relation equals `r` after permuting coordinates.
    pub fn contains(&self, r: &Relation) -> bool {
        let perms = super::derive::permutations(r.arity());
        self.relations
            .iter()
            .filter(|q| q.arity() == r.arity() && q.len() == r.len())
            .any(|q| perms.iter().any(|p| q.permute(p).ok().as_ref() == Some(r)))
    }
}

/// Saturates `gamma` under pp-operations; one representative per relation up to coordinate order.
pub fn pp_closure(gamma: &[Relation], max_arity: usize, aux_budget: usize) -> Result<PpClosure> {
    pp_closure_with_work(gamma, max_arity, aux_budget, SaturationLimits::default().work)
}

pub fn pp_closure_with_work(gamma: &[Relation], max_arity: usize, aux_budget: usize, work: usize) -> Result<PpClosure> {
    let Some(first) = gamma.first() else {
        return Err(Error::Argument("pp-closure needs at least one premise to fix the domain".into()));
    };
    let domain = first.domain();
    if gamma.iter().any(|r| r.domain() != domain) {
        return Err(Error::Argument("premises live on different domains".into()));
    }
    if max_arity == 0 {
        return Err(Error::Argument("maximum arity must be positive".into()));
    }
    let mut sat = Saturation::new(domain, gamma, SaturationLimits { max_arity, aux: aux_budget, work });
    sat.run(None);
    let relations = sat.relations().filter(|r| r.arity() <= max_arity).cloned().collect();
    Ok(PpClosure { relations, budget_limited: sat.budget_limited })
}
