use std::collections::BTreeMap;

use malcev_lab::algebra::{Relation, Structure};
use malcev_lab::catalog::{standard_relation, standard_structure, RELABELINGS};
use malcev_lab::classifier::{
    class_order, classify, separation_table, verify_figure, ClassLabel, OrderRelation, HASSE_EDGES, MAIN_SEPARATIONS,
    SELFDUAL_SEPARATIONS,
};
use malcev_lab::poly::{satisfies_condition, MinorCondition, SearchConfig, BUILTIN_CONDITIONS};
use malcev_lab::Error;

const CONDITIONS: &[&str] = &["quasi-malcev", "quasi-majority", "quasi-minority", "cyc2", "cyc3", "sigma1", "sigma2", "const"];

/// Which conditions each representative satisfies.
fn profiles() -> BTreeMap<ClassLabel, Vec<bool>> {
    let cfg = SearchConfig::default();
    ClassLabel::ALL
        .into_iter()
        .map(|l| {
            let s = l.representative();
            let row = CONDITIONS
                .iter()
                .map(|c| satisfies_condition(&s, &MinorCondition::builtin(c).unwrap(), &cfg).unwrap().0)
                .collect();
            (l, row)
        })
        .collect()
}

#[test]
fn representatives_classify_to_their_labels_and_replay() {
    for label in ClassLabel::ALL {
        let s = label.representative();
        let (got, cert) = classify(&s).unwrap();
        assert_eq!(got, label);
        assert_eq!(cert.replay(&s).unwrap(), label);
    }
}

#[test]
fn classification_is_invariant_under_relabeling() {
    for label in ClassLabel::ALL {
        let s = label.representative();
        if s.domain().size() != 3 {
            continue;
        }
        for perm in RELABELINGS {
            let (got, cert) = classify(&s.relabel(&perm).unwrap()).unwrap();
            assert_eq!(got, label, "{label} under {perm:?}");
            assert_eq!(cert.replay(&s.relabel(&perm).unwrap()).unwrap(), label);
        }
    }
}

#[test]
fn classification_ignores_redundant_relations() {
    // Adding relations that are already pp-definable keeps the clone.
    let mut s = standard_structure("M1").unwrap();
    let mu2 = standard_relation("mu2").unwrap();
    let rho2 = standard_relation("rho2").unwrap();
    s.push("extra", mu2.intersection(&Relation::full(mu2.domain(), 2).unwrap()).unwrap()).unwrap();
    assert_eq!(classify(&s).unwrap().0, ClassLabel::M1);
    let mut m0 = standard_structure("M0").unwrap();
    m0.push("rho2again", rho2).unwrap();
    assert_eq!(classify(&m0).unwrap().0, ClassLabel::M0);
}

#[test]
fn tampered_certificate_is_rejected() {
    let s = standard_structure("M0").unwrap();
    let (_, mut cert) = classify(&s).unwrap();
    let last = cert.tests.len() - 1;
    cert.tests[last].holds = !cert.tests[last].holds;
    assert!(cert.replay(&s).is_err());
}

#[test]
fn printed_l2_basis_is_out_of_scope() {
    let literal = Structure::new(
        standard_relation("phi").unwrap().domain(),
        vec![
            ("phi".into(), standard_relation("phi").unwrap()),
            ("psi2".into(), standard_relation("psi2").unwrap()),
            ("T2".into(), standard_relation("T2").unwrap()),
        ],
    )
    .unwrap();
    assert!(matches!(classify(&literal), Err(Error::OutOfScope(_))));
    assert_eq!(classify(&standard_structure("L2").unwrap()).unwrap().0, ClassLabel::L2);
}

#[test]
fn non_malcev_structure_is_out_of_scope() {
    let b2 = standard_structure("B2").unwrap();
    assert!(matches!(classify(&b2), Err(Error::OutOfScope(_))));
}

#[test]
fn three_element_representatives_agree_with_boolean_ones() {
    for (three, label) in [("I2_3", ClassLabel::I2), ("C2_3", ClassLabel::C2), ("Z2_3", ClassLabel::Z2), ("T_3", ClassLabel::T)] {
        assert_eq!(classify(&standard_structure(three).unwrap()).unwrap().0, label, "{three}");
    }
}

#[test]
fn order_is_a_partial_order_with_top_t() {
    for a in ClassLabel::ALL {
        assert_eq!(class_order(a, ClassLabel::T), if a == ClassLabel::T { OrderRelation::Equal } else { OrderRelation::Leq });
        for b in ClassLabel::ALL {
            let ab = class_order(a, b);
            let ba = class_order(b, a);
            let flipped = match ab {
                OrderRelation::Leq => OrderRelation::Geq,
                OrderRelation::Geq => OrderRelation::Leq,
                x => x,
            };
            assert_eq!(ba, flipped);
        }
    }
    assert_eq!(class_order(ClassLabel::Z2, ClassLabel::C3), OrderRelation::Incomparable);
    assert_eq!(class_order(ClassLabel::L2, ClassLabel::C2), OrderRelation::Leq);
}

#[test]
fn condition_profiles_respect_the_order_and_separate_the_rest() {
    let p = profiles();
    // Minor conditions are inherited upwards.
    for (lo, hi) in HASSE_EDGES {
        for (k, c) in CONDITIONS.iter().enumerate() {
            assert!(!p[&lo][k] || p[&hi][k], "{c} holds in {lo} but not in {hi}");
        }
    }
    // Every pair outside the order is separated by some condition.
    for a in ClassLabel::ALL {
        for b in ClassLabel::ALL {
            if matches!(class_order(a, b), OrderRelation::Leq | OrderRelation::Equal) {
                continue;
            }
            let separated = (0..CONDITIONS.len()).any(|k| p[&a][k] && !p[&b][k]);
            assert!(separated, "{a} and {b} have no separating condition");
        }
    }
    assert!(p.values().all(|row| row[0]), "every class has a quasi Mal'cev operation");
    for c in CONDITIONS {
        assert!(BUILTIN_CONDITIONS.contains(c));
    }
}

#[test]
fn separation_cells_verify_and_agree_with_the_order() {
    let cells = separation_table().unwrap();
    assert_eq!(cells.len(), MAIN_SEPARATIONS.entries().len() + SELFDUAL_SEPARATIONS.entries().len());
    for c in &cells {
        assert!(c.verified(), "{} {} / {} {}", c.figure, c.satisfies, c.refutes, c.condition);
        assert!(!matches!(class_order(c.satisfies, c.refutes), OrderRelation::Leq | OrderRelation::Equal));
    }
    let again = verify_figure(&SELFDUAL_SEPARATIONS, &SearchConfig::default()).unwrap();
    assert!(again.iter().all(|c| c.verified()));
}

#[test]
fn labels_parse_and_print() {
    for l in ClassLabel::ALL {
        assert_eq!(l.as_str().parse::<ClassLabel>().unwrap(), l);
    }
    assert!(matches!("Z4".parse::<ClassLabel>(), Err(Error::Lookup(_))));
}
