//! Classifying structures on {0,1,2} and replaying the certificate.

use malcev_lab::catalog::{standard_relation, standard_structure};
use malcev_lab::classifier::classify;

fn main() -> malcev_lab::Result<()> {
    for key in ["M0", "Z2_3", "C3", "D"] {
        let s = standard_structure(key)?;
        let (label, cert) = classify(&s)?;
        println!("{key}: {label} ({}, core {:?})", cert.branch.case(), cert.core);
        for t in &cert.tests {
            println!("  {:<36} {}", t.test.describe(), t.holds);
        }
        assert_eq!(cert.replay(&s)?, label);
    }
    let mut s = standard_structure("M1")?;
    s.push("tau0", standard_relation("tau0")?)?;
    println!("M1 + tau0: {}", classify(&s)?.0);
    Ok(())
}
