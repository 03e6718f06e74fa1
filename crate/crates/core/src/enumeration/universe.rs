use crate::algebra::{Domain, Relation, Structure};
use crate::catalog::{standard_relation, RELABELINGS, RELATION_KEYS};
use crate::error::{Error, Result};

/// A set of universe relations, one bit per relation in catalog order.
pub type RelSet = u64;

/// The standard relations on three elements together with the proper nonempty subuniverses.
#[derive(Clone, Debug)]
pub struct Universe {
    pub names: Vec<String>,
    pub relations: Vec<Relation>,
    flats: Vec<Vec<u8>>,
    /// `conjugate[p][i]` is the index of relation `i` relabeled by `RELABELINGS[p]`.
    pub conjugate: Vec<Vec<usize>>,
}

impl Universe {
    pub fn standard() -> Result<Universe> {
        let names: Vec<String> = RELATION_KEYS.iter().filter(|k| **k != "eq").map(|k| k.to_string()).collect();
        let relations = names.iter().map(|k| standard_relation(k)).collect::<Result<Vec<_>>>()?;
        if relations.len() > 64 {
            return Err(Error::Capability("universe larger than 64 relations".into()));
        }
        for (i, r) in relations.iter().enumerate() {
            if relations[..i].contains(r) {
                return Err(Error::Validation(format!("relation `{}` listed twice", names[i])));
            }
        }
        let mut conjugate = Vec::new();
        for perm in RELABELINGS {
            let row = relations
                .iter()
                .map(|r| {
                    let q = r.relabel(&perm)?;
                    relations.iter().position(|x| *x == q).ok_or_else(|| {
                        Error::Validation("standard relations are not closed under relabeling".into())
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            conjugate.push(row);
        }
        let flats = relations.iter().map(Relation::flat_tuples).collect();
        Ok(Universe { names, relations, flats, conjugate })
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn all(&self) -> RelSet {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn set_of(&self, names: &[&str]) -> Result<RelSet> {
        names.iter().try_fold(0u64, |m, n| {
            self.index(n).map(|i| m | 1 << i).ok_or_else(|| Error::Lookup(n.to_string()))
        })
    }

    pub fn members(&self, set: RelSet) -> Vec<usize> {
        (0..self.len()).filter(|&i| set >> i & 1 == 1).collect()
    }

    pub fn relations_of(&self, set: RelSet) -> Vec<Relation> {
        self.members(set).into_iter().map(|i| self.relations[i].clone()).collect()
    }

    pub fn names_of(&self, set: RelSet) -> Vec<String> {
        self.members(set).into_iter().map(|i| self.names[i].clone()).collect()
    }

    /// Image of `set` under relabeling number `p`.
    pub fn conjugate_set(&self, set: RelSet, p: usize) -> RelSet {
        self.members(set).into_iter().fold(0, |m, i| m | 1 << self.conjugate[p][i])
    }

    /// Least conjugate of `set`, used as the orbit representative.
    pub fn orbit_min(&self, set: RelSet) -> RelSet {
        (0..RELABELINGS.len()).map(|p| self.conjugate_set(set, p)).min().expect("six relabelings")
    }

    /// The structure on {0,1,2} carrying the relations of `set` under their catalog names.
    pub fn structure_of(&self, set: RelSet) -> Structure {
        let rels = self.members(set).into_iter().map(|i| (self.names[i].clone(), self.relations[i].clone())).collect();
        Structure::new(Domain::new(3).expect("three elements"), rels).expect("relations on {0,1,2}")
    }

    /// Bitmask of universe relations preserved by `f`.
    pub fn preserved_by(&self, f: &crate::algebra::Operation) -> RelSet {
        let mut m = 0;
        for (i, r) in self.relations.iter().enumerate() {
            if crate::algebra::preserves_flat(f, &self.flats[i], r) {
                m |= 1 << i;
            }
        }
        m
    }
}
