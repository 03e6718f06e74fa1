//! Verifying every cell of both separation tables.

use malcev_lab::classifier::separation_table;

fn main() -> malcev_lab::Result<()> {
    let cells = separation_table()?;
    for c in &cells {
        println!("{:<9} {:>3} |= {:<14} {:>3} |/= : {}", c.figure, c.satisfies.as_str(), c.condition, c.refutes.as_str(), c.verified());
    }
    println!("{} of {} cells verified", cells.iter().filter(|c| c.verified()).count(), cells.len());
    Ok(())
}
