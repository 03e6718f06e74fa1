//! Minors, composition and preservation for operations on {0,1,2}.

use malcev_lab::algebra::{Domain, Operation};
use malcev_lab::catalog::{builtin_operation, standard_relation};

fn main() -> malcev_lab::Result<()> {
    let d = Domain::new(3)?;
    let d2 = builtin_operation("d2", None)?;
    // m(x, x, y) as a binary minor.
    let minor = d2.take_minor(&[0, 0, 1], 2)?;
    println!("d2(x,x,y) = {:?}", minor.table());
    println!("equals the second projection: {}", minor == Operation::projection(d, 2, 1)?);

    // d2(d2(x,y,z), y, z) composed from projections.
    let p: Vec<Operation> = (0..3).map(|i| Operation::projection(d, 3, i)).collect::<Result<_, _>>()?;
    let inner = d2.compose(&p)?;
    let outer = d2.compose(&[inner, p[1].clone(), p[2].clone()])?;
    println!("d2(d2(x,y,z),y,z) table: {:?}", outer.table());

    for key in ["mu2", "psi2", "tau0"] {
        println!("d2 preserves {key}: {}", d2.preserves(&standard_relation(key)?)?);
    }
    Ok(())
}
