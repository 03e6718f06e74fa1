//! Congruences, centralizers and abelianness for algebras with a Mal'cev term.

use malcev_lab::algebra::{Domain, Partition};
use malcev_lab::catalog::builtin_operation;
use malcev_lab::relclosure::{centralizer, congruence_lattice, is_abelian, Algebra};

fn main() -> malcev_lab::Result<()> {
    let d = Domain::new(3)?;
    for key in ["d0", "d2", "affine3"] {
        let m = builtin_operation(key, None)?;
        let alg = Algebra::new(d, vec![m.clone()])?;
        let lattice = congruence_lattice(&alg)?;
        let monolith = lattice.monolith.map_or("none".to_string(), |i| lattice.congruences[i].to_string());
        println!("{key}: {} congruences, monolith {monolith}", lattice.congruences.len());
        println!("  abelian: {}", is_abelian(&alg, &m, None)?);
        let mu = Partition::from_blocks(d, &[vec![0, 1], vec![2]])?;
        if lattice.congruences.contains(&mu) {
            println!("  centralizer of 01|2: {}", centralizer(&alg, &m, &mu)?);
        }
    }
    Ok(())
}
