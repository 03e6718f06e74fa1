//! Catalog entries against tables transcribed by hand from the definitions.

use malcev_lab::algebra::{all_tuples, Domain, Relation};
use malcev_lab::catalog::{
    builtin_operation, standard_relation, standard_structure, OPERATION_KEYS, RELABELINGS, RELATION_KEYS,
    STRUCTURE_KEYS,
};
use malcev_lab::Error;

fn d3() -> Domain {
    Domain::new(3).unwrap()
}

fn graph(top: &[u8], bottom: &[u8]) -> Relation {
    Relation::from_tuples(d3(), 2, top.iter().zip(bottom).map(|(&a, &b)| [a, b])).unwrap()
}

fn minority(x: u8, y: u8, z: u8) -> u8 {
    if x == y {
        z
    } else if y == z {
        x
    } else {
        y
    }
}

#[test]
fn two_row_matrices() {
    let cases: &[(&str, &[u8], &[u8])] = &[
        ("psi2", &[0, 1, 2], &[1, 0, 2]),
        ("psi2'", &[0, 1], &[1, 0]),
        ("psi0", &[0, 1, 2], &[0, 2, 1]),
        ("psi1'", &[0, 2], &[2, 0]),
        ("phi", &[0, 1, 2], &[1, 2, 0]),
        ("phi0'", &[1, 2], &[2, 0]),
        ("phi1'", &[0, 2], &[1, 0]),
        ("phi2'", &[0, 1], &[1, 2]),
        ("phi3'", &[1, 0], &[2, 0]),
        ("phi4'", &[0, 1], &[2, 1]),
        ("phi5'", &[0, 2], &[1, 2]),
        ("tau0", &[0, 1, 2], &[0, 0, 1]),
        ("tau1", &[0, 1, 2], &[1, 1, 0]),
    ];
    for (key, top, bottom) in cases {
        assert_eq!(standard_relation(key).unwrap(), graph(top, bottom), "{key}");
    }
    assert_eq!(standard_relation("phi2'inv").unwrap(), graph(&[1, 2], &[0, 1]));
}

#[test]
fn equivalences_and_complements() {
    for i in 0..3u8 {
        let mu = standard_relation(&format!("mu{i}")).unwrap();
        let rho = standard_relation(&format!("rho{i}")).unwrap();
        for t in all_tuples(d3(), 2) {
            let same = (t[0] == i) == (t[1] == i);
            assert_eq!(mu.contains(&t), same);
            assert_eq!(rho.contains(&t), !same);
        }
    }
}

#[test]
fn four_ary_relations() {
    let t = standard_relation("T").unwrap();
    assert_eq!(t.len(), 27);
    for i in 0..3u8 {
        let tp = standard_relation(&format!("T{i}'")).unwrap();
        let ti = standard_relation(&format!("T{i}")).unwrap();
        let mut expected = Vec::new();
        for x in (0..3).filter(|&a| a != i) {
            for y in (0..3).filter(|&a| a != i) {
                for z in (0..3).filter(|&a| a != i) {
                    expected.push([x, y, z, minority(x, y, z)]);
                }
            }
        }
        assert_eq!(tp, Relation::from_tuples(d3(), 4, &expected).unwrap());
        expected.push([i, i, i, i]);
        assert_eq!(ti, Relation::from_tuples(d3(), 4, &expected).unwrap());
        let tmu = standard_relation(&format!("Tmu{i}")).unwrap();
        let cls = |a: u8| u8::from(a == i);
        for q in all_tuples(d3(), 4) {
            assert_eq!(tmu.contains(&q), cls(q[3]) == minority(cls(q[0]), cls(q[1]), cls(q[2])));
        }
    }
}

#[test]
fn s01_columns() {
    let s = standard_relation("S01").unwrap();
    let cols = [[0u8, 0, 0], [0, 0, 1], [1, 1, 0], [1, 1, 1], [0, 1, 2], [1, 0, 2]];
    assert_eq!(s, Relation::from_tuples(d3(), 3, cols).unwrap());
    assert_eq!(standard_relation("S10").unwrap(), s);
}

#[test]
fn every_key_resolves() {
    for k in RELATION_KEYS {
        let r = standard_relation(k).unwrap();
        assert_eq!(r.domain().size(), 3, "{k}");
    }
    for k in STRUCTURE_KEYS {
        standard_structure(k).unwrap();
    }
    for k in OPERATION_KEYS {
        let p = (*k == "fk").then_some(2);
        builtin_operation(k, p).unwrap();
    }
    assert!(matches!(standard_relation("psi3"), Err(Error::Lookup(_))));
    assert!(matches!(standard_structure("Z4"), Err(Error::Lookup(_))));
    assert!(matches!(builtin_operation("fk", None), Err(Error::Argument(_))));
    assert!(matches!(builtin_operation("fk", Some(0)), Err(Error::Argument(_))));
}

#[test]
fn named_operations() {
    let d2 = builtin_operation("d2", None).unwrap();
    assert_eq!(d2.eval(&[0, 1, 2]), 2);
    assert_eq!(d2.eval(&[2, 1, 0]), 2);
    assert_eq!(d2.eval(&[0, 0, 1]), 1);
    assert_eq!(d2.eval(&[1, 0, 1]), 0);
    let g = builtin_operation("g", None).unwrap();
    assert_eq!(g.eval(&[1, 2, 0]), 1);
    assert_eq!(g.eval(&[2, 2, 0]), 0);
    for key in ["d0", "d1", "d2", "g", "affine3"] {
        let f = builtin_operation(key, None).unwrap();
        for t in all_tuples(d3(), 2) {
            assert_eq!(f.eval(&[t[0], t[0], t[1]]), t[1], "{key}");
            assert_eq!(f.eval(&[t[1], t[0], t[0]]), t[1], "{key}");
        }
    }
}

#[test]
fn relabelings_are_the_symmetric_group() {
    let mut perms = RELABELINGS.to_vec();
    perms.sort_unstable();
    perms.dedup();
    assert_eq!(perms.len(), 6);
    assert_eq!(RELABELINGS[0], [0, 1, 2]);
}

#[test]
fn representatives_contain_expected_relations() {
    let m0 = standard_structure("M0").unwrap();
    let names: Vec<&str> = m0.relations().iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["psi2", "rho2", "U01", "U0", "U1", "U2"]);
    assert_eq!(standard_structure("T").unwrap().domain().size(), 1);
    assert_eq!(standard_structure("Z2").unwrap().domain().size(), 2);
}

#[test]
fn fk_closed_form() {
    assert_eq!(builtin_operation("fk", Some(1)).unwrap(), builtin_operation("d2", None).unwrap());
    for k in 1..=4 {
        let f = builtin_operation("fk", Some(k)).unwrap();
        for t in all_tuples(Domain::new(2).unwrap(), 2 * k + 1) {
            assert_eq!(f.eval(&t), t.iter().sum::<u8>() % 2);
        }
    }
    // Folding in two more arguments with d2 is not the closed form: the 2s cancel but
    // the parity of the entries that came before them is lost.
    let f2 = builtin_operation("fk", Some(2)).unwrap();
    let d2 = builtin_operation("d2", None).unwrap();
    let x = [0, 1, 2, 0, 2];
    assert_eq!(f2.eval(&x), 1);
    assert_eq!(d2.eval(&[d2.eval(&x[..3]), x[3], x[4]]), 0);
}
