use malcev_lab::algebra::{all_tuples, Domain, Relation, Structure};
use malcev_lab::catalog::{standard_relation, standard_structure};
use malcev_lab::construct::{
    build_pp_power, check_hom_equivalence, paper_fixtures, power_element, verify_fixture, verify_paper_constructions,
    PpFormula,
};
use malcev_lab::relclosure::PpConfig;
use malcev_lab::Error;
use proptest::prelude::*;

fn eval1(premises: &str, arity: usize, text: &str) -> Relation {
    PpFormula::parse(arity, text).unwrap().evaluate(&standard_structure(premises).unwrap(), 1).unwrap()
}

#[test]
fn all_printed_constructions_verify() {
    let report = verify_paper_constructions(&PpConfig::default()).unwrap();
    assert_eq!(report.fixtures.len(), 4);
    for f in &report.fixtures {
        for c in &f.conjuncts {
            assert!(c.passed, "{}: {} {:?}", f.name, c.name, c.detail);
        }
    }
}

#[test]
fn tau1_needs_the_second_variable() {
    let tau1 = standard_relation("tau1").unwrap();
    let literal = eval1("H'", 2, "rel(tau0; x1.1, e1.1) & rel(psi2'; e1.1, x1.1)");
    assert_ne!(literal, tau1);
    let corrected = eval1("H'", 2, "rel(tau0; x1.1, e1.1) & rel(psi2'; e1.1, x2.1)");
    assert_eq!(corrected, tau1);
}

#[test]
fn psi2_prime_needs_the_transposition() {
    let target = standard_relation("psi2'").unwrap();
    let literal = eval1("M1'", 2, "rel(mu2; x1.1, x2.1) & rel(U01; x1.1)");
    assert_eq!(literal.len(), 4);
    assert_ne!(literal, target);
    assert_eq!(eval1("M1'", 2, "rel(psi2; x1.1, x2.1) & rel(U01; x1.1)"), target);
}

#[test]
fn rho2_and_u01_definitions() {
    assert_eq!(eval1("H", 2, "rel(tau0; x1.1, e1.1) & rel(tau1; x2.1, e1.1)"), standard_relation("rho2").unwrap());
    assert_eq!(eval1("M1", 1, "rel(mu2; x1.1, e1.1) & rel(U0; e1.1)"), standard_relation("U01").unwrap());
}

#[test]
fn pp_power_relation_by_hand() {
    // tau0 of the H construction over C2 squared: second coordinate of y is 1, first differs from x's second.
    let c2 = standard_structure("C2").unwrap();
    let phi = PpFormula::parse(2, "rel(U1; x2.2) & rel(neq; x2.1, x1.2)").unwrap();
    let got = phi.evaluate(&c2, 2).unwrap();
    let d2 = Domain::new(2).unwrap();
    let mut expected = Vec::new();
    for a in all_tuples(d2, 2) {
        for b in all_tuples(d2, 2) {
            if b[1] == 1 && b[0] != a[1] {
                expected.push([power_element(d2, &a).unwrap(), power_element(d2, &b).unwrap()]);
            }
        }
    }
    assert_eq!(got, Relation::from_tuples(Domain::new(4).unwrap(), 2, expected).unwrap());
}

#[test]
fn fixtures_match_the_catalog() {
    for fx in paper_fixtures().unwrap() {
        let names: Vec<&str> = fx.formulas.iter().map(|(n, _)| n.as_str()).collect();
        let target: Vec<&str> = fx.target.relations().iter().map(|(n, _)| n.as_str()).collect();
        for n in &names {
            assert!(target.contains(n), "{}: {n} missing from {}", fx.name, fx.target_key);
        }
        assert_eq!(fx.source, standard_structure(&fx.source_key).unwrap());
        assert_eq!(fx.forward.len(), fx.target.domain().size());
        assert_eq!(fx.backward.len(), fx.source.domain().size().pow(fx.dimension as u32));
        for def in &fx.definitions {
            assert_eq!(def.evaluate().unwrap(), def.expected().unwrap(), "{}: {}", fx.name, def.target);
        }
    }
}

#[test]
fn corrupted_forward_map_is_caught() {
    let mut fx = paper_fixtures().unwrap().into_iter().find(|f| f.name == "Hppconstruction").unwrap();
    fx.forward.swap(0, 1);
    let report = verify_fixture(&fx, &PpConfig::default()).unwrap();
    assert!(!report.passed());
    assert!(!report.conjuncts[0].passed);
}

#[test]
fn hom_equivalence_examples() {
    let z2_3 = standard_structure("Z2_3").unwrap();
    let d2 = Domain::new(2).unwrap();
    let affine = malcev_lab::catalog::affine_graph(d2);
    let neq = Relation::from_predicate(d2, 2, |t| t[0] != t[1]).unwrap();
    let core = Structure::new(d2, vec![("psi2'".into(), neq), ("T2'".into(), affine.clone())]).unwrap();
    let (eq, maps) = check_hom_equivalence(&z2_3, &core).unwrap();
    assert!(eq);
    let (there, back) = maps.unwrap();
    assert_eq!((there.len(), back.len()), (3, 2));
    // Equality has loops that psi2' lacks, so only one direction exists.
    let loops = Structure::new(d2, vec![("psi2'".into(), Relation::equality(d2)), ("T2'".into(), affine)]).unwrap();
    assert_eq!(check_hom_equivalence(&z2_3, &loops).unwrap(), (false, None));
}

#[test]
fn formula_syntax_errors() {
    for bad in ["", "rel(a; x1.1", "rel(; x1.1)", "rel(a x1.1)", "rel(a; y1.1)", "rel(a; x0.1)", "rel(a; x3.1)"] {
        assert!(matches!(PpFormula::parse(2, bad), Err(Error::Formula(_))), "{bad}");
    }
    let phi = PpFormula::parse(1, "rel(nope; x1.1)").unwrap();
    assert!(matches!(phi.evaluate(&standard_structure("C2").unwrap(), 1), Err(Error::Formula(_))));
    let wide = PpFormula::parse(1, "rel(U1; x1.3)").unwrap();
    assert!(matches!(wide.evaluate(&standard_structure("C2").unwrap(), 2), Err(Error::Formula(_))));
    let text = "rel(U1; x2.2) ∧ rel(neq; x2.1, x1.2)";
    let phi = PpFormula::parse(2, text).unwrap();
    assert_eq!(PpFormula::parse(2, &phi.to_string()).unwrap(), phi);
}

fn structure_strategy() -> impl Strategy<Value = Structure> {
    (proptest::collection::vec(any::<bool>(), 4), proptest::collection::vec(any::<bool>(), 2)).prop_map(|(b, u)| {
        let d = Domain::new(2).unwrap();
        let bits = |v: &[bool]| v.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i).collect::<Vec<_>>();
        Structure::new(
            d,
            vec![
                ("E".into(), Relation::from_indices(d, 2, bits(&b)).unwrap()),
                ("P".into(), Relation::from_indices(d, 1, bits(&u)).unwrap()),
            ],
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pp_power_commutes_with_renaming(s in structure_strategy(), a in 0usize..2, b in 0usize..2, c in 0usize..2) {
        let text = format!("rel(E; x1.{}, e1.{}) & rel(P; e1.{}) & rel(E; e1.{}, x2.2)", a + 1, b + 1, c + 1, a + 1);
        let phi = PpFormula::parse(2, &text).unwrap();
        let renamed = s.renamed(&["F", "Q"]).unwrap();
        let psi = PpFormula::parse(2, &text.replace("E;", "F;").replace("P;", "Q;")).unwrap();
        let p1 = build_pp_power(&s, 2, &[("R".into(), phi)]).unwrap();
        let p2 = build_pp_power(&renamed, 2, &[("R".into(), psi)]).unwrap();
        prop_assert_eq!(p1, p2);
    }

    #[test]
    fn first_power_matches_direct_evaluation(s in structure_strategy()) {
        // exists z. E(x,z) & E(z,y) is relational composition.
        let phi = PpFormula::parse(2, "rel(E; x1.1, e1.1) & rel(E; e1.1, x2.1)").unwrap();
        let got = phi.evaluate(&s, 1).unwrap();
        let e = s.relation("E").unwrap();
        let expected = Relation::from_predicate(s.domain(), 2, |t| {
            (0..2u8).any(|z| e.contains(&[t[0], z]) && e.contains(&[z, t[1]]))
        }).unwrap();
        prop_assert_eq!(got, expected);
    }
}
