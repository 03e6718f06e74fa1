//! The named relations, structures and operations shipped with the library.

use malcev_lab::catalog::{builtin_operation, standard_relation, standard_structure, STRUCTURE_KEYS};

fn main() -> malcev_lab::Result<()> {
    for key in ["psi2", "tau0", "S01"] {
        let r = standard_relation(key)?;
        println!("{key}: arity {}, {} tuples", r.arity(), r.len());
    }
    for key in STRUCTURE_KEYS {
        let s = standard_structure(key)?;
        println!("{key:>5}: domain {} with {} relations", s.domain().size(), s.relations().len());
    }
    let f3 = builtin_operation("fk", Some(3))?;
    println!("fk:3 has arity {}", f3.arity());
    Ok(())
}
