//! Relational side: pp-definability with certificates, congruences, commutators and critical relations.

mod algebra;
mod derive;
mod ppdef;
mod zp;

pub use algebra::{
    central_relation, centralizer, centralizes, congruence_lattice, coordinate_kernels, is_abelian, is_critical,
    upper_covers, Algebra, CongruenceLattice, Kernels, MAX_CONGRUENCE_DOMAIN,
};
pub use derive::{Derivation, SaturationLimits, Step};
pub use ppdef::{derive, pp_closure, pp_closure_with_work, pp_definable, refute, PpAnswer, PpClosure, PpConfig, Refutation, Verdict};
pub use zp::{affine_subspaces, verify_zp_basis, ZpEntry, ZpReport};
