use super::csp::{Csp, Solve};
use crate::algebra::{Operation, Relation, Structure};
use crate::error::{Error, Result};

fn hom_csp(s: &Structure, t: &Structure) -> Result<Csp> {
    if t.domain().size() > 32 {
        return Err(Error::Capability("homomorphism targets are limited to 32 elements".into()));
    }
    let mut csp = Csp::new(s.domain().size(), t.domain().size());
    for (name, r) in s.relations() {
        let target = t
            .relation(name)
            .ok_or_else(|| Error::Argument(format!("target lacks a relation named `{name}`")))?;
        if target.arity() != r.arity() {
            return Err(Error::Argument(format!("relation `{name}` has different arities")));
        }
        let table = csp.table(target);
        for tuple in r.tuples() {
            let vars: Vec<u32> = tuple.iter().map(|&a| a as u32).collect();
            csp.constrain(table, &vars);
        }
    }
    Ok(csp)
}

/// Result of a homomorphism search with its node count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSearch {
    pub map: Option<Vec<u8>>,
    pub nodes: u64,
}

/// Finds a map `S → T` sending every named relation of `S` into the same-named relation of `T`.
pub fn find_homomorphism(s: &Structure, t: &Structure) -> Result<HomSearch> {
    let mut csp = hom_csp(s, t)?;
    let map = match csp.first_solution() {
        Solve::Found(m) => Some(m),
        _ => None,
    };
    if let Some(m) = &map {
        if !is_homomorphism(s, t, m)? {
            return Err(Error::Validation("homomorphism failed re-verification".into()));
        }
    }
    Ok(HomSearch { map, nodes: csp.nodes })
}

pub fn is_homomorphism(s: &Structure, t: &Structure, map: &[u8]) -> Result<bool> {
    Ok(first_violation(s, t, map)?.is_none())
}

/// The first `(relation name, tuple)` of `S` whose image leaves `T`.
pub fn first_violation(s: &Structure, t: &Structure, map: &[u8]) -> Result<Option<(String, Vec<u8>)>> {
    if map.len() != s.domain().size() || map.iter().any(|&b| !t.domain().contains(b)) {
        return Err(Error::Argument("map does not send the source domain into the target".into()));
    }
    for (name, r) in s.relations() {
        let target = t
            .relation(name)
            .ok_or_else(|| Error::Argument(format!("target lacks a relation named `{name}`")))?;
        for tuple in r.tuples() {
            let image: Vec<u8> = tuple.iter().map(|&a| map[a as usize]).collect();
            if !target.contains(&image) {
                return Ok(Some((name.clone(), tuple)));
            }
        }
    }
    Ok(None)
}

/// All unary maps preserving every relation, in lexicographic table order.
pub fn endomorphisms(s: &Structure) -> Result<Vec<Operation>> {
    let mut csp = hom_csp(s, s)?;
    let mut out = Vec::new();
    csp.search(|m| {
        out.push(m.to_vec());
        true
    });
    out.sort();
    out.into_iter().map(|t| Operation::new(s.domain(), 1, t)).collect()
}

/// A bijective homomorphism whose inverse is also a homomorphism.
pub fn find_isomorphism(s: &Structure, t: &Structure) -> Result<Option<Vec<u8>>> {
    if s.domain() != t.domain() || s.relations().len() != t.relations().len() {
        return Ok(None);
    }
    for (name, r) in s.relations() {
        match t.relation(name) {
            Some(q) if q.arity() == r.arity() && q.len() == r.len() => {}
            _ => return Ok(None),
        }
    }
    let mut csp = hom_csp(s, t)?;
    csp.set_injective();
    Ok(match csp.first_solution() {
        // Injective and relation sizes agree, so the map is onto each relation.
        Solve::Found(m) => Some(m),
        _ => None,
    })
}

/// The core of `s` together with a retraction onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Core {
    pub structure: Structure,
    /// Elements of the original structure forming the core, in increasing order.
    pub elements: Vec<u8>,
    /// Endomorphism of the original structure with image `elements`.
    pub retraction: Vec<u8>,
}

/// Shrinks `s` by homomorphisms into proper induced substructures until none exists.
pub fn core_of(s: &Structure) -> Result<Core> {
    let n = s.domain().size();
    let mut retraction: Vec<u8> = (0..n as u8).collect();
    let mut elements: Vec<u8> = (0..n as u8).collect();
    'shrink: loop {
        let current = s.induced(&elements)?;
        for drop in 0..elements.len() {
            if elements.len() == 1 {
                break;
            }
            let keep: Vec<u8> = (0..elements.len() as u8).filter(|&k| k as usize != drop).collect();
            let smaller = current.induced(&keep)?;
            if let Some(h) = find_homomorphism(&current, &smaller)?.map {
                // h maps positions in `current` to positions in `keep`.
                let pos_map: Vec<u8> = h.iter().map(|&k| keep[k as usize]).collect();
                retraction = retraction
                    .iter()
                    .map(|&a| {
                        let p = elements.iter().position(|&e| e == a).expect("image element");
                        elements[pos_map[p] as usize]
                    })
                    .collect();
                let mut image: Vec<u8> = retraction.clone();
                image.sort();
                image.dedup();
                elements = image;
                continue 'shrink;
            }
        }
        break;
    }
    // Make the retraction fix the core pointwise by composing with the inverse automorphism.
    let core = s.induced(&elements)?;
    let restricted: Vec<u8> = elements
        .iter()
        .map(|&a| elements.iter().position(|&e| e == retraction[a as usize]).expect("in core") as u8)
        .collect();
    let mut inverse = vec![0u8; restricted.len()];
    for (k, &v) in restricted.iter().enumerate() {
        inverse[v as usize] = k as u8;
    }
    let retraction = retraction
        .iter()
        .map(|&b| {
            let p = elements.iter().position(|&e| e == b).expect("in core");
            elements[inverse[p] as usize]
        })
        .collect();
    Ok(Core { structure: core, elements, retraction })
}

/// The core of `s` with every singleton relation appended.
pub fn idempotent_extension(s: &Structure) -> Result<Structure> {
    Ok(core_of(s)?.structure.with_constants())
}

/// Relations of `s` plus all singletons, as a list (convenience for searches).
pub fn with_singletons(rels: &[Relation]) -> Vec<Relation> {
    let mut out = rels.to_vec();
    if let Some(d) = rels.first().map(|r| r.domain()) {
        for a in d.elements() {
            let single = Relation::unary(d, &[a]).expect("in range");
            if !out.contains(&single) {
                out.push(single);
            }
        }
    }
    out
}
