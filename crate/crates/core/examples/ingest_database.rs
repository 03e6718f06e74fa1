//! Reading a generator table and checking its preservation flags.

use malcev_lab::catalog::{builtin_operation, standard_relation};
use malcev_lab::enumeration::{ingest_generator_db, reconstruct_clones, ColumnMapping, Universe};

fn main() -> malcev_lab::Result<()> {
    let dir = std::env::temp_dir().join("malcev-ingest-example");
    std::fs::create_dir_all(&dir).map_err(|e| malcev_lab::Error::Input(e.to_string()))?;
    let mut csv = String::from("name,table,mu2,psi2\n");
    for key in ["d0", "d1", "d2", "g"] {
        let f = builtin_operation(key, None)?;
        let table: String = f.table().iter().map(|v| char::from(b'0' + v)).collect();
        let flag = |r: &str| -> malcev_lab::Result<u8> { Ok(u8::from(f.preserves(&standard_relation(r)?)?)) };
        csv.push_str(&format!("{key},{table},{},{}\n", flag("mu2")?, flag("psi2")?));
    }
    let path = dir.join("generators.csv");
    std::fs::write(&path, csv).map_err(|e| malcev_lab::Error::Input(e.to_string()))?;

    let gens = ingest_generator_db(&[path], &ColumnMapping::default())?;
    println!("{} generators, all flags confirmed", gens.len());
    let u = Universe::standard()?;
    let closed: Vec<_> = gens.iter().map(|g| u.preserved_by(&g.operation)).collect();
    println!("mismatched clones: {}", reconstruct_clones(&gens, &u, &closed).len());
    Ok(())
}
