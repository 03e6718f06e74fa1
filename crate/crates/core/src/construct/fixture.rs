//! Construction fixtures shipped as JSON data files.

use serde::Deserialize;

use crate::algebra::{Structure, Relation};
use crate::catalog::{standard_relation, standard_structure};
use crate::error::{Error, Result};

use super::formula::{build_pp_power, power_element, PpFormula};

const SOURCES: [(&str, &str); 4] = [
    ("c2collapse.json", include_str!("../../fixtures/constructions/c2collapse.json")),
    ("hppconstruction.json", include_str!("../../fixtures/constructions/hppconstruction.json")),
    ("extensionm1.json", include_str!("../../fixtures/constructions/extensionm1.json")),
    ("forthelastcollapse.json", include_str!("../../fixtures/constructions/forthelastcollapse.json")),
];

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Value(u8),
    Wildcard(String),
}

#[derive(Deserialize)]
struct RawRule {
    #[serde(rename = "match")]
    pattern: Vec<RawEntry>,
    value: u8,
}

#[derive(Deserialize)]
struct RawRelation {
    name: String,
    arity: usize,
    formula: String,
}

#[derive(Deserialize)]
struct RawPreamble {
    premises: String,
    targets: String,
}

#[derive(Deserialize)]
struct RawDefinition {
    premises: String,
    target: String,
    arity: usize,
    formula: String,
}

#[derive(Deserialize)]
struct RawFixture {
    name: String,
    claim: String,
    source: String,
    target: String,
    dimension: usize,
    relations: Vec<RawRelation>,
    forward: Vec<Vec<u8>>,
    backward: Vec<RawRule>,
    preamble: Option<RawPreamble>,
    #[serde(default)]
    formulas: Vec<RawDefinition>,
}

/// One rule of a backward map; `None` entries match any coordinate value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackwardRule {
    pub pattern: Vec<Option<u8>>,
    pub value: u8,
}

/// A catalog structure whose relations should all be pp-definable from another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preamble {
    pub premises: String,
    pub targets: String,
}

/// An explicit single-variable-power formula defining a catalog relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub premises: String,
    pub target: String,
    pub formula: PpFormula,
}

impl Definition {
    /// Evaluates the formula over the premise structure.
    pub fn evaluate(&self) -> Result<Relation> {
        self.formula.evaluate(&standard_structure(&self.premises)?, 1)
    }

    pub fn expected(&self) -> Result<Relation> {
        standard_relation(&self.target)
    }
}

/// A printed pp-construction: source, pp-power formulas, and both maps.
#[derive(Clone, Debug)]
pub struct ConstructionFixture {
    pub name: String,
    pub claim: String,
    pub source_key: String,
    pub target_key: String,
    pub source: Structure,
    pub target: Structure,
    pub dimension: usize,
    pub formulas: Vec<(String, PpFormula)>,
    /// Target element to power element.
    pub forward: Vec<u8>,
    /// Power element to target element, by first matching rule.
    pub backward: Vec<u8>,
    pub rules: Vec<BackwardRule>,
    pub preamble: Option<Preamble>,
    pub definitions: Vec<Definition>,
}

impl ConstructionFixture {
    pub fn parse(text: &str) -> Result<ConstructionFixture> {
        let raw: RawFixture =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("construction fixture: {e}")))?;
        let source = standard_structure(&raw.source)?;
        let target = standard_structure(&raw.target)?;
        let base = source.domain();
        let n = raw.dimension;
        let formulas = raw
            .relations
            .iter()
            .map(|r| Ok((r.name.clone(), PpFormula::parse(r.arity, &r.formula)?)))
            .collect::<Result<Vec<_>>>()?;
        if raw.forward.len() != target.domain().size() {
            return Err(Error::Input(format!("{}: forward map needs one tuple per target element", raw.name)));
        }
        let forward = raw
            .forward
            .iter()
            .map(|t| {
                if t.len() != n {
                    return Err(Error::Input(format!("{}: forward tuple {t:?} has wrong length", raw.name)));
                }
                power_element(base, t)
            })
            .collect::<Result<Vec<u8>>>()?;
        let rules = raw
            .backward
            .into_iter()
            .map(|r| {
                let pattern = r
                    .pattern
                    .into_iter()
                    .map(|e| match e {
                        RawEntry::Value(v) => Ok(Some(v)),
                        RawEntry::Wildcard(s) if s == "*" => Ok(None),
                        RawEntry::Wildcard(s) => Err(Error::Input(format!("bad pattern entry `{s}`"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                if pattern.len() != n {
                    return Err(Error::Input(format!("{}: backward pattern has wrong length", raw.name)));
                }
                if !target.domain().contains(r.value) {
                    return Err(Error::Input(format!("{}: backward value {} out of range", raw.name, r.value)));
                }
                Ok(BackwardRule { pattern, value: r.value })
            })
            .collect::<Result<Vec<_>>>()?;
        let backward = crate::algebra::all_tuples(base, n)
            .map(|t| {
                rules
                    .iter()
                    .find(|r| r.pattern.iter().zip(&t).all(|(p, &x)| p.is_none_or(|p| p == x)))
                    .map(|r| r.value)
                    .ok_or_else(|| Error::Input(format!("{}: no backward rule matches {t:?}", raw.name)))
            })
            .collect::<Result<Vec<u8>>>()?;
        let definitions = raw
            .formulas
            .into_iter()
            .map(|d| {
                Ok(Definition { premises: d.premises, target: d.target, formula: PpFormula::parse(d.arity, &d.formula)? })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ConstructionFixture {
            name: raw.name,
            claim: raw.claim,
            source_key: raw.source,
            target_key: raw.target,
            source,
            target,
            dimension: n,
            formulas,
            forward,
            backward,
            rules,
            preamble: raw.preamble.map(|p| Preamble { premises: p.premises, targets: p.targets }),
            definitions,
        })
    }

    /// The pp-power defined by the fixture's formulas.
    pub fn power(&self) -> Result<Structure> {
        build_pp_power(&self.source, self.dimension, &self.formulas)
    }
}

/// The four printed constructions, in a fixed order.
pub fn paper_fixtures() -> Result<Vec<ConstructionFixture>> {
    SOURCES
        .iter()
        .map(|(file, text)| {
            ConstructionFixture::parse(text).map_err(|e| Error::Input(format!("{file}: {e}")))
        })
        .collect()
}
