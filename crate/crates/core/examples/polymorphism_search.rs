//! Deciding minor conditions by polymorphism search.

use malcev_lab::catalog::standard_structure;
use malcev_lab::poly::{satisfies_condition, Certificate, MinorCondition, SearchConfig};

fn main() -> malcev_lab::Result<()> {
    let cfg = SearchConfig::default();
    let cond = MinorCondition::parse("m", "m(x,x,y) = y\nm(y,x,x) = y")?;
    for key in ["C2", "Z2", "B2", "M0"] {
        let s = standard_structure(key)?;
        let (holds, cert) = satisfies_condition(&s, &cond, &cfg)?;
        match cert {
            Certificate::Witness(ops) => println!("{key}: Mal'cev witness {:?}", ops[0].1.table()),
            _ => println!("{key}: {}", if holds { "satisfied" } else { "refuted by exhaustion" }),
        }
    }
    let sigma2 = MinorCondition::builtin("sigma2")?;
    for key in ["C2", "Z2"] {
        println!("{key} satisfies sigma2: {}", satisfies_condition(&standard_structure(key)?, &sigma2, &cfg)?.0);
    }
    Ok(())
}
