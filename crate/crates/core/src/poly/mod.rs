//! Search for operations: polymorphisms satisfying identities, endomorphisms, cores and
//! homomorphisms between structures.

mod condition;
pub(crate) mod csp;
mod hom;
mod search;

pub use condition::{MinorCondition, Term, BUILTIN_CONDITIONS};
pub use hom::{
    core_of, endomorphisms, find_homomorphism, find_isomorphism, first_violation, idempotent_extension,
    is_homomorphism, with_singletons, Core, HomSearch,
};
pub(crate) use search::{build_csp, search_relations};
pub use search::{
    satisfies_identities, search_operation, SearchConfig, SearchOutcome, SearchStatus, ValueConstraint,
};

use crate::algebra::Structure;
use crate::error::Result;

/// Evidence for or against a condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Witness(Vec<(String, crate::algebra::Operation)>),
    Exhaustion { nodes: u64, free_cells: usize },
}

/// Whether `Pol(s)` satisfies `cond`, with a witness or an exhaustion record.
pub fn satisfies_condition(s: &Structure, cond: &MinorCondition, config: &SearchConfig) -> Result<(bool, Certificate)> {
    let out = search_operation(s, cond, &[], config)?;
    Ok(match out.witness {
        Some(w) => (true, Certificate::Witness(w)),
        None => (false, Certificate::Exhaustion { nodes: out.nodes, free_cells: out.free_cells }),
    })
}
