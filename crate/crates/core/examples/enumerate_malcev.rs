//! Full enumeration of Mal'cev clones on {0,1,2}. Takes several minutes.

use malcev_lab::enumeration::{enumerate_malcev, EnumerationConfig};

fn main() -> malcev_lab::Result<()> {
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let e = enumerate_malcev(&EnumerationConfig { jobs, ..Default::default() })?;
    let s = e.summary();
    println!("clones: {} ({} up to relabeling)", s.literal, s.up_to_relabeling);
    println!("idempotent: {}, minimal: {}", s.idempotent, s.minimal);
    for (label, n) in &s.histogram {
        println!("  {label:>3}: {n}");
    }
    for r in e.records.iter().filter(|r| r.minimal) {
        println!("minimal: {}", r.basis.join(", "));
    }
    Ok(())
}
