//! Operations, relations, partitions and structures on small finite domains.

mod domain;
pub mod format;
mod operation;
mod partition;
mod relation;
mod structure;

pub use domain::{advance, all_tuples, Domain, DEFAULT_MAX_DOMAIN, MAX_TABLE_CELLS};
pub use operation::Operation;
pub(crate) use operation::preserves_flat;
pub use partition::Partition;
pub use relation::Relation;
pub use structure::Structure;
