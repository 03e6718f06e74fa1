use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use malcev_lab::algebra::Operation;
use malcev_lab::catalog::{builtin_operation, standard_relation, RELABELINGS};
use malcev_lab::enumeration::{ingest_generator_db, read_mapping, reconstruct_clones, ColumnMapping, Universe};
use malcev_lab::Error;
use proptest::prelude::*;

fn digits(f: &Operation) -> String {
    f.table().iter().map(|v| char::from(b'0' + v)).collect()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn flag(f: &Operation, key: &str) -> u8 {
    u8::from(f.preserves(&standard_relation(key).unwrap()).unwrap())
}

#[test]
fn empty_path_list_gives_no_records() {
    assert!(ingest_generator_db(&[], &ColumnMapping::default()).unwrap().is_empty());
}

#[test]
fn missing_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = ingest_generator_db(&[dir.path().join("absent.csv")], &ColumnMapping::default()).unwrap_err();
    assert!(matches!(err, Error::Input(_)));
}

#[test]
fn flags_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let d2 = builtin_operation("d2", None).unwrap();
    let g = builtin_operation("g", None).unwrap();
    let text = format!(
        "name,table,mu2,psi2\nd2,{},{},{}\ng,{},{},{}\n",
        digits(&d2),
        flag(&d2, "mu2"),
        flag(&d2, "psi2"),
        digits(&g),
        flag(&g, "mu2"),
        flag(&g, "psi2")
    );
    let p = write(dir.path(), "gens.csv", &text);
    let recs = ingest_generator_db(&[p], &ColumnMapping::default()).unwrap();
    assert_eq!(recs.len(), 2);
    assert_eq!(recs[0].name, "d2");
    assert_eq!(recs[0].operation, d2);
    assert_eq!(recs[0].flags["mu2"], flag(&d2, "mu2") == 1);

    let wrong = format!("name,table,mu2\nd2,{},{}\n", digits(&d2), 1 - flag(&d2, "mu2"));
    let p = write(dir.path(), "wrong.csv", &wrong);
    assert!(matches!(ingest_generator_db(&[p], &ColumnMapping::default()), Err(Error::Validation(_))));
}

#[test]
fn malformed_rows_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    for (i, text) in ["name,table\nf,0123\n", "name,table\nf,0120\n", "name,table,mu2\nf,012012012,yes\n", "table\n012\n"]
        .iter()
        .enumerate()
    {
        let p = write(dir.path(), &format!("bad{i}.csv"), text);
        assert!(matches!(ingest_generator_db(&[p], &ColumnMapping::default()), Err(Error::Input(_))), "{text}");
    }
}

#[test]
fn flags_and_tables_may_live_in_separate_files() {
    let dir = tempfile::tempdir().unwrap();
    let g = builtin_operation("g", None).unwrap();
    let tables = write(dir.path(), "tables.csv", &format!("name,table\ng,{}\n", digits(&g)));
    let flags = write(dir.path(), "flags.csv", &format!("name,T\ng,{}\n", flag(&g, "T")));
    let recs = ingest_generator_db(&[tables, flags], &ColumnMapping::default()).unwrap();
    assert_eq!(recs[0].flags.len(), 1);
    let orphan = write(dir.path(), "orphan.csv", "name,T\nh,1\n");
    assert!(matches!(ingest_generator_db(&[orphan], &ColumnMapping::default()), Err(Error::Input(_))));
}

#[test]
fn ternary_slices_merge_into_a_four_ary_table() {
    let dir = tempfile::tempdir().unwrap();
    let d = builtin_operation("d2", None).unwrap().domain();
    let f = Operation::new(d, 4, (0..81).map(|i| ((i * 7 + i / 5) % 3) as u8).collect()).unwrap();
    let mut text = String::from("name,table\n");
    for (i, chunk) in f.table().chunks(27).enumerate() {
        let s: String = chunk.iter().map(|v| char::from(b'0' + v)).collect();
        text.push_str(&format!("f_{i},{s}\n"));
    }
    let p = write(dir.path(), "slices.csv", &text);
    let recs = ingest_generator_db(&[p], &ColumnMapping::default()).unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!((recs[0].name.as_str(), recs[0].arity), ("f", 4));
    assert_eq!(recs[0].operation, f);
}

#[test]
fn column_mapping_file() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "map.json", r#"{"name": "fn", "table": "values", "relations": {"psi_2": "psi2"}}"#);
    let mapping = read_mapping(&m).unwrap();
    assert_eq!(mapping.relations, BTreeMap::from([("psi_2".to_string(), "psi2".to_string())]));
    let d2 = builtin_operation("d2", None).unwrap();
    let p = write(dir.path(), "g.csv", &format!("fn,values,psi_2\nd2,{},{}\n", digits(&d2), flag(&d2, "psi2")));
    let recs = ingest_generator_db(&[p], &mapping).unwrap();
    assert_eq!(recs[0].flags.keys().collect::<Vec<_>>(), ["psi2"]);
    let bad = write(dir.path(), "bad.json", "{");
    assert!(matches!(read_mapping(&bad), Err(Error::Input(_))));
}

#[test]
fn reconstruction_reports_mismatches() {
    let u = Universe::standard().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let d2 = builtin_operation("d2", None).unwrap();
    let p = write(dir.path(), "g.csv", &format!("name,table\nd2,{}\n", digits(&d2)));
    let gens = ingest_generator_db(&[p], &ColumnMapping::default()).unwrap();
    let inv = u.preserved_by(&d2);
    assert!(reconstruct_clones(&gens, &u, &[inv]).is_empty());
    // No generator preserves everything, so the full universe is the invariants of the empty set.
    assert!(reconstruct_clones(&gens, &u, &[u.all()]).is_empty());
    let mu2 = u.set_of(&["mu2"]).unwrap();
    // d2 preserves mu2, so it is selected and its invariants overshoot.
    let bad = reconstruct_clones(&gens, &u, &[mu2]);
    assert_eq!(bad, vec![(mu2, inv)]);
}

#[test]
fn universe_basics() {
    let u = Universe::standard().unwrap();
    assert_eq!(u.len(), 51);
    assert_eq!(u.all().count_ones(), 51);
    let s = u.set_of(&["T", "U0"]).unwrap();
    assert_eq!(u.names_of(s), ["U0", "T"]);
    assert!(matches!(u.set_of(&["nope"]), Err(Error::Lookup(_))));
    let proj = Operation::projection(builtin_operation("d2", None).unwrap().domain(), 3, 0).unwrap();
    assert_eq!(u.preserved_by(&proj), u.all());
    for p in 0..RELABELINGS.len() {
        assert_eq!(u.conjugate_set(u.all(), p), u.all());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn orbit_representative_is_least_conjugate(bits in any::<u64>()) {
        let u = Universe::standard().unwrap();
        let set = bits & u.all();
        let min = u.orbit_min(set);
        prop_assert!(min <= set);
        for p in 0..RELABELINGS.len() {
            prop_assert_eq!(u.orbit_min(u.conjugate_set(set, p)), min);
        }
    }

    #[test]
    fn preservation_masks_match_direct_checks(table in proptest::collection::vec(0u8..3, 9)) {
        let u = Universe::standard().unwrap();
        let f = Operation::new(builtin_operation("d2", None).unwrap().domain(), 2, table).unwrap();
        let mask = u.preserved_by(&f);
        for (i, r) in u.relations.iter().enumerate() {
            prop_assert_eq!(mask >> i & 1 == 1, f.preserves(r).unwrap());
        }
    }
}
