use serde::Serialize;

use crate::algebra::{Domain, Relation, Structure};
use crate::catalog::standard_relation;
use crate::error::{Error, Result};
use crate::poly::{core_of, satisfies_condition, satisfies_identities, Certificate, MinorCondition, SearchConfig};
use crate::relclosure::{pp_definable, Derivation, PpConfig, Refutation, Verdict};

use super::label::ClassLabel;

/// A single yes/no question asked by the decision procedure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Test {
    /// Whether the polymorphisms of the input structure include a quasi Mal'cev operation.
    QuasiMalcev,
    /// Whether the idempotent extension satisfies a builtin minor condition.
    Condition(String),
    /// Whether the idempotent extension preserves a catalog relation, relabeled by the permutation.
    Preserves { relation: String, relabeling: Vec<u8> },
}

impl Test {
    fn condition(name: &str) -> Test {
        Test::Condition(name.to_string())
    }

    fn preserves(relation: &str, relabeling: &[u8]) -> Test {
        Test::Preserves { relation: relation.to_string(), relabeling: relabeling.to_vec() }
    }

    pub fn describe(&self) -> String {
        match self {
            Test::QuasiMalcev => "quasi-malcev polymorphism".to_string(),
            Test::Condition(c) => format!("condition {c}"),
            Test::Preserves { relation, relabeling } if is_identity(relabeling) => format!("preserves {relation}"),
            Test::Preserves { relation, relabeling } => format!("preserves {relation} relabeled by {relabeling:?}"),
        }
    }
}

fn is_identity(p: &[u8]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x as usize)
}

/// Evidence backing a test outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    Search(Certificate),
    Derivation(Derivation),
    Refutation(Refutation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestRecord {
    pub test: Test,
    pub holds: bool,
    pub evidence: Evidence,
}

/// Case of the main proof reached by the decision procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// Core with at most two elements.
    Small,
    /// Three-element core preserving the graph of a 3-cycle.
    SelfDual,
    /// Three-element core, no 3-cycle graph, with a majority operation.
    Majority,
    /// Three-element core, no 3-cycle graph, without a majority operation.
    NoMajority,
}

impl Branch {
    pub fn case(self) -> &'static str {
        match self {
            Branch::Small => "case 1",
            Branch::SelfDual => "case 2a",
            Branch::Majority => "case 2b",
            Branch::NoMajority => "case 2c",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationCertificate {
    /// Elements of the input domain forming the core.
    pub core: Vec<u8>,
    /// Permutation of the core applied before the monolith tests.
    pub relabeling: Vec<u8>,
    pub branch: Branch,
    /// Set when the C2/I2 split was decided by the 2-cyclic test.
    pub cyclic_tiebreak: bool,
    pub tests: Vec<TestRecord>,
}

struct Outcome {
    label: ClassLabel,
    branch: Branch,
    relabeling: Vec<u8>,
    cyclic_tiebreak: bool,
}

fn decide(core_size: usize, ask: &mut dyn FnMut(Test) -> Result<bool>) -> Result<Outcome> {
    let id: Vec<u8> = (0..core_size as u8).collect();
    let done = |label, branch, relabeling: &[u8], cyclic_tiebreak| Outcome {
        label,
        branch,
        relabeling: relabeling.to_vec(),
        cyclic_tiebreak,
    };
    if !ask(Test::QuasiMalcev)? {
        return Err(Error::OutOfScope(
            "the polymorphism clone has no quasi Mal'cev operation".into(),
        ));
    }
    match core_size {
        1 => return Ok(done(ClassLabel::T, Branch::Small, &id, false)),
        2 => {
            let label = if !ask(Test::condition("quasi-majority"))? {
                ClassLabel::Z2
            } else if ask(Test::preserves("neq", &id))? {
                ClassLabel::C2
            } else {
                ClassLabel::I2
            };
            return Ok(done(label, Branch::Small, &id, false));
        }
        _ => {}
    }
    if ask(Test::preserves("phi", &id))? || ask(Test::preserves("phiinv", &id))? {
        let minority = ask(Test::condition("quasi-minority"))?;
        let cyc2 = ask(Test::condition("cyc2"))?;
        let label = if !minority {
            if !cyc2 {
                return Err(Error::Validation(
                    "self-dual clone without quasi minority and without a 2-cyclic operation".into(),
                ));
            }
            ClassLabel::Z3
        } else {
            match (ask(Test::condition("quasi-majority"))?, cyc2) {
                (false, false) => ClassLabel::L2,
                (true, false) => ClassLabel::D,
                (true, true) => ClassLabel::C3,
                (false, true) => {
                    return Err(Error::Validation(
                        "self-dual clone with quasi minority and 2-cyclic but no quasi majority".into(),
                    ))
                }
            }
        };
        return Ok(done(label, Branch::SelfDual, &id, false));
    }
    if !ask(Test::condition("majority"))? {
        return Ok(done(ClassLabel::Z2, Branch::NoMajority, &id, false));
    }
    let mut monoliths = Vec::new();
    for i in 0..3u8 {
        if ask(Test::preserves(&format!("mu{i}"), &id))? {
            monoliths.push(i);
        }
    }
    let cyclic = |ask: &mut dyn FnMut(Test) -> Result<bool>, relabeling: &[u8]| -> Result<Outcome> {
        let label = if ask(Test::condition("cyc2"))? { ClassLabel::I2 } else { ClassLabel::C2 };
        Ok(done(label, Branch::Majority, relabeling, true))
    };
    let i = match monoliths[..] {
        [] => return cyclic(ask, &id),
        [i] => i,
        _ => return Err(Error::Validation(format!("several nontrivial congruences {monoliths:?}"))),
    };
    // Swap the singleton block of the monolith to 2, so that its two-element block is {0,1}.
    let mut pi = id.clone();
    pi.swap(i as usize, 2);
    if !ask(Test::preserves("psi2", &pi))? {
        return cyclic(ask, &pi);
    }
    let label = if ask(Test::preserves("rho2", &pi))? { ClassLabel::M0 } else { ClassLabel::M1 };
    Ok(done(label, Branch::Majority, &pi, false))
}

fn test_relation(relation: &str, relabeling: &[u8]) -> Result<Relation> {
    if relation == "neq" {
        return Relation::from_predicate(Domain::new(2)?, 2, |t| t[0] != t[1]);
    }
    standard_relation(relation)?.relabel(relabeling)
}

/// Budgets for the searches behind each test.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassifyConfig {
    pub search: SearchConfig,
    pub pp: PpConfig,
}

fn run_test(s: &Structure, e: &Structure, test: &Test, config: &ClassifyConfig) -> Result<TestRecord> {
    let search = |target: &Structure, name: &str| -> Result<TestRecord> {
        let cond = MinorCondition::builtin(name)?;
        let (holds, cert) = satisfies_condition(target, &cond, &config.search)?;
        Ok(TestRecord { test: test.clone(), holds, evidence: Evidence::Search(cert) })
    };
    match test {
        Test::QuasiMalcev => search(s, "quasi-malcev"),
        Test::Condition(name) => search(e, name),
        Test::Preserves { relation, relabeling } => {
            let r = test_relation(relation, relabeling)?;
            let answer = pp_definable(&e.relation_list(), &r, &config.pp)?;
            match answer.verdict {
                Verdict::Definable => Ok(TestRecord {
                    test: test.clone(),
                    holds: true,
                    evidence: Evidence::Derivation(answer.proof.expect("definable answers carry a proof")),
                }),
                Verdict::NotDefinable => Ok(TestRecord {
                    test: test.clone(),
                    holds: false,
                    evidence: Evidence::Refutation(answer.refutation.expect("refuted answers carry a witness")),
                }),
                Verdict::Unknown => Err(Error::Capability(format!(
                    "preservation of {relation} undecided within the pp budgets"
                ))),
            }
        }
    }
}

fn extension(s: &Structure) -> Result<(Vec<u8>, Structure)> {
    if s.domain().size() > 3 {
        return Err(Error::Capability("the classifier handles domains of at most three elements".into()));
    }
    let core = core_of(s)?;
    Ok((core.elements, core.structure.with_constants()))
}

/// The class of `Pol(s)` together with the tests that decided it.
pub fn classify(s: &Structure) -> Result<(ClassLabel, ClassificationCertificate)> {
    classify_with(s, &ClassifyConfig::default())
}

pub fn classify_with(s: &Structure, config: &ClassifyConfig) -> Result<(ClassLabel, ClassificationCertificate)> {
    let (core, e) = extension(s)?;
    let mut tests = Vec::new();
    let outcome = decide(core.len(), &mut |t| {
        let rec = run_test(s, &e, &t, config)?;
        let holds = rec.holds;
        tests.push(rec);
        Ok(holds)
    })?;
    let cert = ClassificationCertificate {
        core,
        relabeling: outcome.relabeling,
        branch: outcome.branch,
        cyclic_tiebreak: outcome.cyclic_tiebreak,
        tests,
    };
    Ok((outcome.label, cert))
}

fn check_evidence(s: &Structure, e: &Structure, rec: &TestRecord, config: &ClassifyConfig) -> Result<bool> {
    let target = if rec.test == Test::QuasiMalcev { s } else { e };
    match (&rec.test, &rec.evidence) {
        (Test::QuasiMalcev | Test::Condition(_), Evidence::Search(cert)) => {
            let name = match &rec.test {
                Test::Condition(c) => c.as_str(),
                _ => "quasi-malcev",
            };
            let cond = MinorCondition::builtin(name)?;
            match cert {
                Certificate::Witness(ops) => {
                    let preserved = ops
                        .iter()
                        .map(|(_, f)| target.is_polymorphism(f))
                        .collect::<Result<Vec<bool>>>()?;
                    Ok(rec.holds && preserved.iter().all(|&p| p) && satisfies_identities(&cond, ops))
                }
                Certificate::Exhaustion { .. } => {
                    Ok(!rec.holds && !satisfies_condition(target, &cond, &config.search)?.0)
                }
            }
        }
        (Test::Preserves { relation, relabeling }, ev) => {
            let r = test_relation(relation, relabeling)?;
            let premises = e.relation_list();
            match ev {
                Evidence::Derivation(d) => Ok(rec.holds && d.replay(&premises, e.domain())? == r),
                Evidence::Refutation(w) => Ok(!rec.holds && w.verify(&premises, &r)?),
                Evidence::Search(_) => Ok(false),
            }
        }
        _ => Ok(false),
    }
}

impl ClassificationCertificate {
    /// Re-verifies every recorded test against `s` and recomputes the label from the outcomes.
    pub fn replay(&self, s: &Structure) -> Result<ClassLabel> {
        let config = ClassifyConfig::default();
        let (core, e) = extension(s)?;
        if core != self.core {
            return Err(Error::Validation(format!("recorded core {:?}, recomputed {core:?}", self.core)));
        }
        for rec in &self.tests {
            if !check_evidence(s, &e, rec, &config)? {
                return Err(Error::Validation(format!("evidence for `{}` does not check", rec.test.describe())));
            }
        }
        let mut asked = 0usize;
        let outcome = decide(core.len(), &mut |t| {
            let rec = self
                .tests
                .get(asked)
                .filter(|r| r.test == t)
                .ok_or_else(|| Error::Validation(format!("no recorded outcome for `{}`", t.describe())))?;
            asked += 1;
            Ok(rec.holds)
        })?;
        if asked != self.tests.len() || outcome.relabeling != self.relabeling || outcome.branch != self.branch {
            return Err(Error::Validation("recorded tests do not match the decision procedure".into()));
        }
        Ok(outcome.label)
    }
}
