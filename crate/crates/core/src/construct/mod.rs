//! pp-powers, homomorphic equivalence, and verification of printed pp-constructions.

mod fixture;
mod formula;

pub use fixture::{paper_fixtures, BackwardRule, ConstructionFixture, Definition, Preamble};
pub use formula::{build_pp_power, power_domain, power_element, power_tuples, Atom, CoordRef, PpFormula};

use serde::Serialize;

use crate::algebra::Structure;
use crate::catalog::standard_structure;
use crate::error::Result;
use crate::poly::{find_homomorphism, first_violation, is_homomorphism};
use crate::relclosure::{pp_definable, PpConfig, Verdict};

/// Maps `S → T` and `T → S` when both exist.
pub type MapPair = (Vec<u8>, Vec<u8>);

/// Decides whether `s` and `t` are homomorphically equivalent.
///
/// When false, the failing direction was searched exhaustively.
pub fn check_hom_equivalence(s: &Structure, t: &Structure) -> Result<(bool, Option<MapPair>)> {
    let Some(there) = find_homomorphism(s, t)?.map else {
        return Ok((false, None));
    };
    let Some(back) = find_homomorphism(t, s)?.map else {
        return Ok((false, None));
    };
    Ok((true, Some((there, back))))
}

/// One conjunct of a fixture check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conjunct {
    pub name: String,
    pub passed: bool,
    /// The violating tuple or failed item when the conjunct fails.
    pub detail: Option<String>,
}

impl Conjunct {
    fn new(name: impl Into<String>, failure: Option<String>) -> Conjunct {
        Conjunct { name: name.into(), passed: failure.is_none(), detail: failure }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureReport {
    pub name: String,
    pub claim: String,
    pub conjuncts: Vec<Conjunct>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.conjuncts.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionReport {
    pub fixtures: Vec<FixtureReport>,
}

impl ConstructionReport {
    pub fn passed(&self) -> bool {
        self.fixtures.iter().all(FixtureReport::passed)
    }
}

fn violation(s: &Structure, t: &Structure, map: &[u8]) -> Result<Option<String>> {
    Ok(first_violation(s, t, map)?.map(|(name, tuple)| {
        let image: Vec<u8> = tuple.iter().map(|&a| map[a as usize]).collect();
        format!("{name}{tuple:?} maps to {image:?}, outside {name}")
    }))
}

fn has_all_constants(s: &Structure) -> bool {
    s.with_constants().relations().len() == s.relations().len()
}

/// Checks every conjunct of one fixture.
pub fn verify_fixture(fx: &ConstructionFixture, config: &PpConfig) -> Result<FixtureReport> {
    let power = fx.power()?;
    let target = &fx.target;
    let mut conjuncts = vec![
        Conjunct::new("forward map is a homomorphism into the pp-power", violation(target, &power, &fx.forward)?),
        Conjunct::new("backward map is a homomorphism onto the target", violation(&power, target, &fx.backward)?),
    ];
    let rediscovered = match check_hom_equivalence(target, &power)? {
        (true, Some((f, b))) if is_homomorphism(target, &power, &f)? && is_homomorphism(&power, target, &b)? => None,
        (true, _) => Some("search returned maps that fail re-verification".to_string()),
        (false, _) => Some("no homomorphism found in one direction".to_string()),
    };
    conjuncts.push(Conjunct::new("homomorphic equivalence rediscovered by search", rediscovered));
    let composite: Vec<u8> = fx.forward.iter().map(|&p| fx.backward[p as usize]).collect();
    if has_all_constants(target) {
        let bad = composite.iter().enumerate().find(|&(a, &b)| a as u8 != b);
        conjuncts.push(Conjunct::new(
            "backward after forward is the identity",
            bad.map(|(a, b)| format!("{a} maps to {b}")),
        ));
    } else {
        conjuncts.push(Conjunct::new(
            "backward after forward is an endomorphism",
            violation(target, target, &composite)?,
        ));
    }
    if let Some(pre) = &fx.preamble {
        let premises = standard_structure(&pre.premises)?.relation_list();
        let mut failures = Vec::new();
        for (name, rel) in standard_structure(&pre.targets)?.relations() {
            let answer = pp_definable(&premises, rel, config)?;
            if answer.verdict != Verdict::Definable {
                failures.push(format!("{name}: {}", answer.verdict.as_str()));
            }
        }
        conjuncts.push(Conjunct::new(
            format!("{} pp-defines every relation of {}", pre.premises, pre.targets),
            (!failures.is_empty()).then(|| failures.join("; ")),
        ));
    }
    for d in &fx.definitions {
        let got = d.evaluate()?;
        let want = d.expected()?;
        let failure = (got != want).then(|| format!("formula defines {:?}, expected {:?}", got.tuples(), want.tuples()));
        conjuncts.push(Conjunct::new(format!("{} defines {} by {}", d.premises, d.target, d.formula), failure));
    }
    Ok(FixtureReport { name: fx.name.clone(), claim: fx.claim.clone(), conjuncts })
}

/// Verifies all four printed constructions.
pub fn verify_paper_constructions(config: &PpConfig) -> Result<ConstructionReport> {
    let fixtures = paper_fixtures()?;
    let fixtures = fixtures.iter().map(|fx| verify_fixture(fx, config)).collect::<Result<Vec<_>>>()?;
    Ok(ConstructionReport { fixtures })
}
