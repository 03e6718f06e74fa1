//! Checking the printed pp-constructions between representative structures.

use malcev_lab::construct::verify_paper_constructions;
use malcev_lab::relclosure::PpConfig;

fn main() -> malcev_lab::Result<()> {
    let report = verify_paper_constructions(&PpConfig::default())?;
    for f in &report.fixtures {
        println!("{}: {}", f.name, if f.passed() { "ok" } else { "FAILED" });
        for c in &f.conjuncts {
            println!("  {:<40} {}", c.name, c.passed);
        }
    }
    Ok(())
}
