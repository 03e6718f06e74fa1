use malcev_lab::algebra::format::{operation_text, parse_operation, parse_structure, structure_text};
use malcev_lab::algebra::{all_tuples, Domain, Operation, Partition, Relation, Structure};
use malcev_lab::Error;
use proptest::prelude::*;

fn d(n: usize) -> Domain {
    Domain::new(n).unwrap()
}

fn relation_strategy(size: usize, arity: usize) -> impl Strategy<Value = Relation> {
    let cells = size.pow(arity as u32);
    proptest::collection::vec(any::<bool>(), cells).prop_map(move |bits| {
        Relation::from_indices(d(size), arity, bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)).unwrap()
    })
}

fn operation_strategy(size: usize, arity: usize) -> impl Strategy<Value = Operation> {
    proptest::collection::vec(0..size as u8, size.pow(arity as u32))
        .prop_map(move |table| Operation::new(d(size), arity, table).unwrap())
}

#[test]
fn encoding_is_leftmost_major() {
    let dom = d(3);
    assert_eq!(dom.encode(&[0, 0, 1]), 1);
    assert_eq!(dom.encode(&[1, 0, 0]), 9);
    assert_eq!(dom.decode(14, 3), vec![1, 1, 2]);
    let order: Vec<Vec<u8>> = all_tuples(d(2), 2).collect();
    assert_eq!(order, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
}

#[test]
fn operation_table_order_matches_encoding() {
    let f = Operation::from_fn(d(3), 2, |t| t[0]).unwrap();
    assert_eq!(f.table(), &[0, 0, 0, 1, 1, 1, 2, 2, 2]);
}

#[test]
fn relations_reject_out_of_range_tuples() {
    assert!(Relation::from_tuples(d(2), 2, [[0u8, 2]]).is_err());
    assert!(Relation::from_tuples(d(2), 2, [[0u8, 1, 1]]).is_err());
}

#[test]
fn projection_and_dummy_coordinates() {
    let r = Relation::from_tuples(d(3), 3, [[0u8, 1, 0], [0, 1, 1], [0, 1, 2], [2, 2, 0], [2, 2, 1], [2, 2, 2]]).unwrap();
    assert!(r.is_dummy(2));
    assert!(!r.is_dummy(0));
    let p = r.project(&[0, 1]).unwrap();
    assert_eq!(p.tuples(), vec![vec![0, 1], vec![2, 2]]);
}

#[test]
fn parallelogram_property_of_graphs_and_orders() {
    let graph = Relation::from_tuples(d(3), 2, [[0u8, 1], [1, 2], [2, 0]]).unwrap();
    assert!(graph.has_parallelogram().unwrap());
    let leq = Relation::from_predicate(d(3), 2, |t| t[0] <= t[1]).unwrap();
    assert!(!leq.has_parallelogram().unwrap());
}

#[test]
fn majority_preserves_order_but_not_affine() {
    let maj = Operation::from_fn(d(2), 3, |t| u8::from(t.iter().sum::<u8>() >= 2)).unwrap();
    let leq = Relation::from_predicate(d(2), 2, |t| t[0] <= t[1]).unwrap();
    let neq = Relation::from_predicate(d(2), 2, |t| t[0] != t[1]).unwrap();
    let affine = Relation::from_predicate(d(2), 3, |t| t[0] ^ t[1] ^ t[2] == 0).unwrap();
    assert!(maj.preserves(&leq).unwrap());
    assert!(maj.preserves(&neq).unwrap());
    assert!(!maj.preserves(&affine).unwrap());
}

#[test]
fn partitions_count_and_order() {
    assert_eq!(Partition::all(d(3)).len(), 5);
    assert_eq!(Partition::all(d(4)).len(), 15);
    let p = Partition::from_blocks(d(3), &[vec![0, 1], vec![2]]).unwrap();
    assert!(Partition::discrete(d(3)).refines(&p));
    assert!(p.refines(&Partition::total(d(3))));
    assert!(!p.refines(&Partition::discrete(d(3))));
    assert!(Partition::from_blocks(d(3), &[vec![0, 1]]).is_err());
}

#[test]
fn minors_identify_and_permute() {
    let f = Operation::from_fn(d(3), 3, |t| (t[0] + 2 * t[1] + t[2]) % 3).unwrap();
    let g = f.take_minor(&[0, 0, 1], 2).unwrap();
    for x in 0..3 {
        for y in 0..3 {
            assert_eq!(g.eval(&[x, y]), f.eval(&[x, x, y]));
        }
    }
    assert!(f.take_minor(&[0, 2, 1], 2).is_err());
    assert!(f.take_minor(&[0, 1], 2).is_err());
}

#[test]
fn restriction_requires_closed_subset() {
    let succ = Operation::from_fn(d(3), 1, |t| (t[0] + 1) % 3).unwrap();
    assert!(succ.restrict(&[0, 1]).is_err());
    let min = Operation::from_fn(d(3), 2, |t| t[0].min(t[1])).unwrap();
    assert_eq!(min.restrict(&[1, 2]).unwrap().table(), &[0, 0, 0, 1]);
}

#[test]
fn text_format_round_trip_and_errors() {
    let text = r#"{"domain": 3, "relations": {"b": {"arity": 1, "tuples": [[2]]}, "a": {"arity": 2, "tuples": [[0,1],[1,0]]}}}"#;
    let s = parse_structure(text).unwrap();
    assert_eq!(s.relations()[0].0, "b");
    assert_eq!(parse_structure(&structure_text(&s)).unwrap(), s);
    assert!(matches!(parse_structure("{\"domain\": 2}"), Err(Error::Input(_))));
    assert!(matches!(
        parse_structure(r#"{"domain": 2, "relations": {"r": {"arity": 1, "tuples": [[2]]}}}"#),
        Err(Error::Input(_))
    ));
    assert!(matches!(parse_operation(r#"{"domain": 2, "arity": 1, "table": [0]}"#), Err(Error::Input(_))));
}

#[test]
fn constants_expansion_adds_singletons() {
    let s = Structure::new(d(2), vec![]).unwrap();
    let c = s.with_constants();
    assert_eq!(c.relations().len(), 2);
    assert!(c.relations().iter().all(|(_, r)| r.arity() == 1 && r.len() == 1));
}

proptest! {
    #[test]
    fn encode_decode_round_trip(t in proptest::collection::vec(0u8..3, 1..6)) {
        let dom = d(3);
        prop_assert_eq!(dom.decode(dom.encode(&t), t.len()), t);
    }

    #[test]
    fn relabel_inverse_is_identity(r in relation_strategy(3, 2), p in 0usize..6) {
        let perms: [[u8; 3]; 6] = [[0,1,2],[0,2,1],[1,0,2],[1,2,0],[2,0,1],[2,1,0]];
        let perm = perms[p];
        let mut inv = [0u8; 3];
        for (a, &b) in perm.iter().enumerate() { inv[b as usize] = a as u8; }
        prop_assert_eq!(r.relabel(&perm).unwrap().relabel(&inv).unwrap(), r);
    }

    #[test]
    fn permute_matches_tuple_shuffle(r in relation_strategy(3, 3)) {
        let q = r.permute(&[2, 0, 1]).unwrap();
        prop_assert_eq!(q.len(), r.len());
        // The inverse shuffle brings every tuple of q back into r.
        for t in q.tuples() {
            let back = r.tuples().iter().any(|s| {
                let shuffled: Vec<u8> = [2usize, 0, 1].iter().map(|&i| s[i]).collect();
                shuffled == t
            });
            prop_assert!(back);
        }
    }

    #[test]
    fn preservation_matches_brute_force(r in relation_strategy(2, 2), f in operation_strategy(2, 2)) {
        let tuples = r.tuples();
        let mut brute = true;
        for a in &tuples {
            for b in &tuples {
                let image = vec![f.eval(&[a[0], b[0]]), f.eval(&[a[1], b[1]])];
                brute &= r.contains(&image);
            }
        }
        prop_assert_eq!(f.preserves(&r).unwrap(), brute);
    }

    #[test]
    fn composition_with_projections_is_identity(f in operation_strategy(3, 2)) {
        let p: Vec<Operation> = (0..2).map(|i| Operation::projection(d(3), 2, i).unwrap()).collect();
        prop_assert_eq!(f.compose(&p).unwrap(), f);
    }

    #[test]
    fn operations_preserve_trivial_relations(f in operation_strategy(2, 2)) {
        prop_assert!(f.preserves(&Relation::full(d(2), 3).unwrap()).unwrap());
        prop_assert!(f.preserves(&Relation::empty(d(2), 3).unwrap()).unwrap());
    }

    #[test]
    fn intersection_and_union_are_pointwise(a in relation_strategy(3, 2), b in relation_strategy(3, 2)) {
        let i = a.intersection(&b).unwrap();
        let u = a.union(&b).unwrap();
        for t in all_tuples(d(3), 2) {
            prop_assert_eq!(i.contains(&t), a.contains(&t) && b.contains(&t));
            prop_assert_eq!(u.contains(&t), a.contains(&t) || b.contains(&t));
        }
        prop_assert!(i.is_subset(&a) && a.is_subset(&u));
    }

    #[test]
    fn operation_text_round_trip(f in operation_strategy(3, 2)) {
        prop_assert_eq!(parse_operation(&operation_text(&f)).unwrap(), f);
    }
}
