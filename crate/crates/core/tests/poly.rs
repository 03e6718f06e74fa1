use malcev_lab::algebra::{all_tuples, Domain, Operation, Relation, Structure};
use malcev_lab::catalog::standard_structure;
use malcev_lab::poly::{
    core_of, find_homomorphism, is_homomorphism, satisfies_condition, satisfies_identities, search_operation,
    Certificate, MinorCondition, SearchConfig, ValueConstraint, BUILTIN_CONDITIONS,
};
use malcev_lab::Error;
use proptest::prelude::*;

fn d(n: usize) -> Domain {
    Domain::new(n).unwrap()
}

fn every_operation(size: usize, arity: usize) -> impl Iterator<Item = Operation> {
    let cells = size.pow(arity as u32);
    all_tuples(d(size), cells).map(move |t| Operation::new(d(size), arity, t).unwrap())
}

/// Brute-force oracle: some polymorphism of the given arity satisfies the identities.
fn brute(s: &Structure, cond: &MinorCondition, arity: usize) -> bool {
    let sym = cond.symbols[0].0.clone();
    every_operation(s.domain().size(), arity)
        .any(|f| s.is_polymorphism(&f).unwrap() && satisfies_identities(cond, &[(sym.clone(), f)]))
}

fn structure_from_bits(size: usize, arity: usize, bits: &[bool]) -> Structure {
    let r = Relation::from_indices(d(size), arity, bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)).unwrap();
    Structure::new(d(size), vec![("R".into(), r)]).unwrap()
}

#[test]
fn boolean_templates_against_exhaustive_ternary_search() {
    let cfg = SearchConfig::default();
    for key in ["I2", "C2", "Z2", "B2"] {
        let s = standard_structure(key).unwrap();
        for name in ["malcev", "majority", "minority", "quasi-malcev", "quasi-majority", "quasi-minority", "sigma1"] {
            let cond = MinorCondition::builtin(name).unwrap();
            let (holds, cert) = satisfies_condition(&s, &cond, &cfg).unwrap();
            assert_eq!(holds, brute(&s, &cond, 3), "{key} {name}");
            if let Certificate::Witness(ops) = cert {
                assert!(s.is_polymorphism(&ops[0].1).unwrap());
                assert!(satisfies_identities(&cond, &ops));
            }
        }
    }
}

#[test]
fn sigma2_separates_z2_from_c2() {
    let cfg = SearchConfig::default();
    let sigma2 = MinorCondition::builtin("sigma2").unwrap();
    assert!(satisfies_condition(&standard_structure("C2").unwrap(), &sigma2, &cfg).unwrap().0);
    assert!(!satisfies_condition(&standard_structure("Z2").unwrap(), &sigma2, &cfg).unwrap().0);
}

#[test]
fn condition_parsing() {
    let c = MinorCondition::parse("m", "m(x,x,y) = m(y,x,x) = y # Mal'cev\n").unwrap();
    assert_eq!(c.symbols, vec![("m".to_string(), 3)]);
    assert_eq!(c.identities.len(), 2);
    assert!(!c.is_height_one());
    // Printing renames variables per identity; a second round trip is stable.
    let once = MinorCondition::parse("m", &c.to_string()).unwrap();
    let twice = MinorCondition::parse("m", &once.to_string()).unwrap();
    assert_eq!(once, twice);
    let d2 = malcev_lab::catalog::builtin_operation("d2", None).unwrap();
    let ops = [("m".to_string(), d2)];
    assert_eq!(satisfies_identities(&c, &ops), satisfies_identities(&once, &ops));
    assert!(matches!(MinorCondition::parse("bad", "f(x) = f(x,y)"), Err(Error::Input(_))));
    assert!(matches!(MinorCondition::parse("bad", "f(x,y"), Err(Error::Input(_))));
    assert!(matches!(MinorCondition::builtin("nope"), Err(Error::Lookup(_))));
    for name in BUILTIN_CONDITIONS {
        MinorCondition::builtin(name).unwrap();
    }
    assert!(MinorCondition::builtin("cyc1").is_err());
}

#[test]
fn value_constraints_are_respected() {
    let s = standard_structure("T_3").unwrap();
    let cond = MinorCondition::builtin("cyc2").unwrap();
    let pin = ValueConstraint { symbol: 0, args: vec![0, 1], allowed: vec![2] };
    let out = search_operation(&s, &cond, &[pin], &SearchConfig::default()).unwrap();
    assert_eq!(out.operation("c").unwrap().eval(&[1, 0]), 2);
}

#[test]
fn cores_of_representatives() {
    let c2_3 = standard_structure("C2_3").unwrap();
    assert_eq!(core_of(&c2_3).unwrap().elements.len(), 3);
    // Without constants, psi2' and T2' retract onto {0,1}.
    let z2_3 = standard_structure("Z2_3").unwrap();
    let core = core_of(&z2_3).unwrap();
    assert_eq!(core.elements, vec![0, 1]);
    assert!(is_homomorphism(&z2_3, &z2_3, &core.retraction).unwrap());
    assert_eq!(core_of(&standard_structure("T_3").unwrap()).unwrap().elements.len(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cyc2_matches_exhaustive_binary_search(bits in proptest::collection::vec(any::<bool>(), 9)) {
        let s = structure_from_bits(3, 2, &bits);
        let cond = MinorCondition::builtin("cyc2").unwrap();
        let (holds, _) = satisfies_condition(&s, &cond, &SearchConfig::default()).unwrap();
        prop_assert_eq!(holds, brute(&s, &cond, 2));
    }

    #[test]
    fn boolean_ternary_conditions_match_exhaustive_search(bits in proptest::collection::vec(any::<bool>(), 8)) {
        let s = structure_from_bits(2, 3, &bits);
        for name in ["quasi-malcev", "quasi-majority", "quasi-minority", "cyc3"] {
            let cond = MinorCondition::builtin(name).unwrap();
            let (holds, _) = satisfies_condition(&s, &cond, &SearchConfig::default()).unwrap();
            prop_assert_eq!(holds, brute(&s, &cond, 3), "{}", name);
        }
    }

    #[test]
    fn homomorphism_search_matches_brute_force(a in proptest::collection::vec(any::<bool>(), 9), b in proptest::collection::vec(any::<bool>(), 9)) {
        let s = structure_from_bits(3, 2, &a);
        let t = structure_from_bits(3, 2, &b);
        let exists = all_tuples(d(3), 3).any(|m| is_homomorphism(&s, &t, &m).unwrap());
        let found = find_homomorphism(&s, &t).unwrap();
        prop_assert_eq!(found.map.is_some(), exists);
    }

    #[test]
    fn core_is_a_retract_without_smaller_retract(bits in proptest::collection::vec(any::<bool>(), 9)) {
        let s = structure_from_bits(3, 2, &bits);
        let core = core_of(&s).unwrap();
        prop_assert!(is_homomorphism(&s, &s, &core.retraction).unwrap());
        let mut image = core.retraction.clone();
        image.sort_unstable();
        image.dedup();
        prop_assert_eq!(&image, &core.elements);
        // No endomorphism has a smaller image.
        let smallest = all_tuples(d(3), 3)
            .filter(|m| is_homomorphism(&s, &s, m).unwrap())
            .map(|mut m| { m.sort_unstable(); m.dedup(); m.len() })
            .min()
            .unwrap();
        prop_assert_eq!(smallest, core.elements.len());
    }
}
