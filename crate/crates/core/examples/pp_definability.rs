//! Primitive positive definability with replayable certificates.

use malcev_lab::catalog::standard_relation;
use malcev_lab::relclosure::{pp_definable, PpConfig, Verdict};

fn main() -> malcev_lab::Result<()> {
    let gamma = [standard_relation("tau0")?, standard_relation("psi2'")?];
    let cfg = PpConfig::default();
    for key in ["tau1", "U01", "mu2"] {
        let target = standard_relation(key)?;
        let ans = pp_definable(&gamma, &target, &cfg)?;
        match ans.verdict {
            Verdict::Definable => {
                let proof = ans.proof.expect("derivation");
                assert_eq!(proof.replay(&gamma, target.domain())?, target);
                println!("{key}: definable, derivation replayed");
            }
            Verdict::NotDefinable => {
                let refutation = ans.refutation.expect("refutation");
                println!("{key}: not definable, refutation checks: {}", refutation.verify(&gamma, &target)?);
            }
            Verdict::Unknown => println!("{key}: undecided within budget"),
        }
    }
    Ok(())
}
