use super::domain::Domain;
use super::operation::Operation;
use super::relation::Relation;
use crate::error::{arg, Result};

/// A finite domain with an ordered list of named relations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Structure {
    domain: Domain,
    relations: Vec<(String, Relation)>,
}

impl Structure {
    pub fn new(domain: Domain, relations: Vec<(String, Relation)>) -> Result<Self> {
        let mut s = Structure { domain, relations: Vec::new() };
        for (name, rel) in relations {
            s.push(name, rel)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, name: impl Into<String>, rel: Relation) -> Result<()> {
        let name = name.into();
        if rel.domain() != self.domain {
            return arg(format!("relation `{name}` lives on a different domain"));
        }
        if self.relation(&name).is_some() {
            return arg(format!("duplicate relation name `{name}`"));
        }
        self.relations.push((name, rel));
        Ok(())
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn relations(&self) -> &[(String, Relation)] {
        &self.relations
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.iter().find(|(n, _)| n == name).map(|(_, r)| r)
    }

    pub fn relation_list(&self) -> Vec<Relation> {
        self.relations.iter().map(|(_, r)| r.clone()).collect()
    }

    /// Appends `{a}` named `c<a>` for every element not already pinned by a singleton.
    pub fn with_constants(&self) -> Structure {
        let mut s = self.clone();
        for a in self.domain.elements() {
            let single = Relation::unary(self.domain, &[a]).expect("element in range");
            if s.relations.iter().any(|(_, r)| *r == single) {
                continue;
            }
            let mut name = format!("c{a}");
            while s.relation(&name).is_some() {
                name.push('\'');
            }
            s.relations.push((name, single));
        }
        s
    }

    pub fn is_polymorphism(&self, f: &Operation) -> Result<bool> {
        for (_, r) in &self.relations {
            if !f.preserves(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Relation-wise image under a domain permutation.
    pub fn relabel(&self, perm: &[u8]) -> Result<Structure> {
        let rels = self
            .relations
            .iter()
            .map(|(n, r)| Ok((n.clone(), r.relabel(perm)?)))
            .collect::<Result<Vec<_>>>()?;
        Structure::new(self.domain, rels)
    }

    /// Induced substructure on `subset`, whose element `subset[k]` becomes `k`.
    pub fn induced(&self, subset: &[u8]) -> Result<Structure> {
        let dom = Domain::new(subset.len())?;
        let mut pos = vec![None; self.domain.size()];
        for (k, &a) in subset.iter().enumerate() {
            self.domain.check_tuple(&[a])?;
            if pos[a as usize].is_some() {
                return arg("subset lists an element twice");
            }
            pos[a as usize] = Some(k as u8);
        }
        let rels = self
            .relations
            .iter()
            .map(|(n, r)| {
                let tuples = r.tuples().into_iter().filter_map(|t| {
                    t.iter().map(|&a| pos[a as usize]).collect::<Option<Vec<u8>>>()
                });
                Ok((n.clone(), Relation::from_tuples(dom, r.arity(), tuples)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Structure::new(dom, rels)
    }

    /// Same relations under new names, in order.
    pub fn renamed(&self, names: &[&str]) -> Result<Structure> {
        if names.len() != self.relations.len() {
            return arg("one new name per relation is required");
        }
        let rels = names
            .iter()
            .zip(&self.relations)
            .map(|(n, (_, r))| (n.to_string(), r.clone()))
            .collect();
        Structure::new(self.domain, rels)
    }
}
