use malcev_lab::algebra::{all_tuples, Domain, Operation, Partition, Relation};
use malcev_lab::catalog::{builtin_operation, standard_relation};
use malcev_lab::relclosure::{
    affine_subspaces, central_relation, centralizer, centralizes, congruence_lattice, coordinate_kernels, is_abelian,
    is_critical, pp_closure, pp_definable, upper_covers, verify_zp_basis, Algebra, PpConfig, Verdict,
};
use malcev_lab::Error;
use proptest::prelude::*;

fn d(n: usize) -> Domain {
    Domain::new(n).unwrap()
}

fn rel_from_bits(size: usize, arity: usize, bits: &[bool]) -> Relation {
    Relation::from_indices(d(size), arity, bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)).unwrap()
}

/// Galois oracle on {0,1}: `target` with k tuples is pp-definable iff every k-ary polymorphism preserves it.
fn boolean_definable(gamma: &[Relation], target: &Relation) -> bool {
    let k = target.len().max(1);
    all_tuples(d(2), 1 << k).all(|table| {
        let f = Operation::new(d(2), k, table).unwrap();
        !gamma.iter().all(|r| f.preserves(r).unwrap()) || f.preserves(target).unwrap()
    })
}

fn check_answer(gamma: &[Relation], target: &Relation) -> Verdict {
    let ans = pp_definable(gamma, target, &PpConfig::default()).unwrap();
    match ans.verdict {
        Verdict::Definable => {
            let proof = ans.proof.expect("derivation");
            assert_eq!(&proof.replay(gamma, target.domain()).unwrap(), target);
        }
        Verdict::NotDefinable => assert!(ans.refutation.expect("refutation").verify(gamma, target).unwrap()),
        Verdict::Unknown => {}
    }
    ans.verdict
}

/// Number of affine subspaces (including the empty set) of `F_p^n`.
fn affine_subspace_count(p: usize, n: usize) -> usize {
    let gaussian = |k: usize| -> usize {
        let mut num = 1usize;
        let mut den = 1usize;
        for i in 0..k {
            num *= p.pow((n - i) as u32) - 1;
            den *= p.pow((i + 1) as u32) - 1;
        }
        num / den
    };
    1 + (0..=n).map(|k| p.pow((n - k) as u32) * gaussian(k)).sum::<usize>()
}

#[test]
fn standard_derivations() {
    let gamma = [standard_relation("tau0").unwrap(), standard_relation("psi2'").unwrap()];
    // tau1(x,y) <- exists z. tau0(x,z) & psi2'(z,y)
    assert_eq!(check_answer(&gamma, &standard_relation("tau1").unwrap()), Verdict::Definable);
    assert_eq!(check_answer(&gamma, &standard_relation("U01").unwrap()), Verdict::Definable);
    let gamma = [standard_relation("mu2").unwrap()];
    assert_eq!(check_answer(&gamma, &standard_relation("psi2").unwrap()), Verdict::NotDefinable);
}

#[test]
fn affine_graph_defines_affine_relations() {
    let t = standard_relation("T").unwrap();
    let line = Relation::from_predicate(d(3), 2, |u| (u[0] + u[1]) % 3 == 0).unwrap();
    assert_eq!(check_answer(&[t.clone(), standard_relation("U0").unwrap()], &line), Verdict::Definable);
    let leq = Relation::from_predicate(d(3), 2, |u| u[0] <= u[1]).unwrap();
    assert_eq!(check_answer(&[t], &leq), Verdict::NotDefinable);
}

#[test]
fn argument_errors() {
    let r2 = Relation::full(d(2), 1).unwrap();
    let r3 = Relation::full(d(3), 1).unwrap();
    assert!(matches!(pp_definable(&[r2], &r3, &PpConfig::default()), Err(Error::Argument(_))));
    let big = Relation::full(d(2), 5).unwrap();
    assert!(matches!(pp_definable(&[], &big, &PpConfig::default()), Err(Error::Capability(_))));
    assert!(matches!(verify_zp_basis(5, 2, &PpConfig::default()), Err(Error::Argument(_))));
}

#[test]
fn congruences_of_named_algebras() {
    let alg = |k: &str| Algebra::new(d(3), vec![builtin_operation(k, None).unwrap()]).unwrap();
    let affine = congruence_lattice(&alg("affine3")).unwrap();
    assert_eq!(affine.congruences.len(), 2);
    assert_eq!(affine.monolith, Some(1));
    let d2 = congruence_lattice(&alg("d2")).unwrap();
    assert_eq!(d2.congruences.len(), 3);
    assert_eq!(d2.congruences[d2.monolith.unwrap()], Partition::from_blocks(d(3), &[vec![0, 1], vec![2]]).unwrap());
    // The projection algebra has every partition as a congruence and no monolith.
    let p = Algebra::new(d(3), vec![Operation::projection(d(3), 3, 0).unwrap()]).unwrap();
    let all = congruence_lattice(&p).unwrap();
    assert_eq!(all.congruences.len(), 5);
    assert_eq!(all.monolith, None);
    assert_eq!(all.minimal_nontrivial().len(), 3);
}

#[test]
fn commutator_facts() {
    let m = builtin_operation("affine3", None).unwrap();
    let a = Algebra::new(d(3), vec![m.clone()]).unwrap();
    assert!(is_abelian(&a, &m, None).unwrap());
    assert_eq!(centralizer(&a, &m, &Partition::total(d(3))).unwrap(), Partition::total(d(3)));
    // d2: the quotient by 01|2 is abelian while the whole algebra is not.
    let d2 = builtin_operation("d2", None).unwrap();
    let b = Algebra::new(d(3), vec![d2.clone()]).unwrap();
    let mu = Partition::from_blocks(d(3), &[vec![0, 1], vec![2]]).unwrap();
    assert!(is_abelian(&b, &d2, Some(&mu)).unwrap());
    assert!(!is_abelian(&b, &d2, None).unwrap());
    assert!(centralizes(&b, &d2, &mu, &mu).unwrap());
    let t = central_relation(&b, &d2, &mu, &mu).unwrap();
    assert_eq!(t.arity(), 4);
    let not_malcev = builtin_operation("twosum3", None).unwrap();
    assert!(matches!(central_relation(&b, &not_malcev, &mu, &mu), Err(Error::Argument(_))));
    let bad = Partition::from_blocks(d(3), &[vec![0, 2], vec![1]]).unwrap();
    assert!(matches!(centralizes(&b, &d2, &bad, &mu), Err(Error::Argument(_))));
}

#[test]
fn kernels_and_criticality() {
    let d2 = builtin_operation("d2", None).unwrap();
    let a = Algebra::new(d(3), vec![d2]).unwrap();
    let mu2 = standard_relation("mu2").unwrap();
    let k = coordinate_kernels(&mu2, &a).unwrap();
    let mu = Partition::from_blocks(d(3), &[vec![0, 1], vec![2]]).unwrap();
    assert_eq!(k.kernels, vec![mu.clone(), mu]);
    assert_eq!(k.reduced.tuples(), vec![vec![0, 0], vec![1, 1]]);
    assert!(is_critical(&mu2, &a).unwrap());
    let full = Relation::full(d(3), 2).unwrap();
    assert!(upper_covers(&full, &a).unwrap().is_empty());
    assert!(!is_critical(&full, &a).unwrap());
    let leq = Relation::from_predicate(d(3), 2, |t| t[0] <= t[1]).unwrap();
    assert!(matches!(coordinate_kernels(&leq, &a), Err(Error::Precondition(_))));
}

#[test]
fn affine_subspace_counts() {
    for (p, n) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        assert_eq!(affine_subspaces(p, n).unwrap().len(), affine_subspace_count(p, n), "p={p} n={n}");
    }
}

#[test]
fn zp_basis_small() {
    let r = verify_zp_basis(2, 3, &PpConfig::default()).unwrap();
    assert!(r.passed());
    assert_eq!(r.counts, vec![4, 12, 52]);
}

fn congruence_oracle(ops: &[Operation], p: &Partition) -> bool {
    ops.iter().all(|f| {
        let n = f.arity();
        all_tuples(f.domain(), n).all(|x| {
            all_tuples(f.domain(), n).all(|y| {
                let related = x.iter().zip(&y).all(|(&a, &b)| p.related(a, b));
                !related || p.related(f.eval(&x), f.eval(&y))
            })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn boolean_pp_definability_matches_galois_oracle(
        g in proptest::collection::vec(any::<bool>(), 4),
        t in proptest::collection::vec(any::<bool>(), 4),
    ) {
        let gamma = [rel_from_bits(2, 2, &g)];
        let target = rel_from_bits(2, 2, &t);
        prop_assume!(!target.is_empty());
        let verdict = check_answer(&gamma, &target);
        prop_assert_ne!(verdict, Verdict::Unknown);
        prop_assert_eq!(verdict == Verdict::Definable, boolean_definable(&gamma, &target));
    }

    #[test]
    fn congruences_match_direct_check(table in proptest::collection::vec(0u8..4, 16)) {
        let f = Operation::new(d(4), 2, table).unwrap();
        let a = Algebra::new(d(4), vec![f.clone()]).unwrap();
        let lattice = congruence_lattice(&a).unwrap();
        let expected: Vec<Partition> = Partition::all(d(4)).into_iter().filter(|p| congruence_oracle(&[f.clone()], p)).collect();
        prop_assert_eq!(lattice.congruences.len(), expected.len());
        for p in &expected {
            prop_assert!(lattice.congruences.contains(p));
        }
    }

    #[test]
    fn closure_is_preserved_by_polymorphisms(g in proptest::collection::vec(any::<bool>(), 9), table in proptest::collection::vec(0u8..3, 9)) {
        let r = rel_from_bits(3, 2, &g);
        let f = Operation::new(d(3), 2, table).unwrap();
        let closure = pp_closure(&[r.clone()], 2, 1).unwrap();
        prop_assert!(closure.contains(&r));
        if f.preserves(&r).unwrap() {
            for q in &closure.relations {
                prop_assert!(f.preserves(q).unwrap());
            }
        }
    }

    #[test]
    fn generated_subuniverses_are_closed(t in proptest::collection::vec(proptest::collection::vec(0u8..3, 2), 1..4)) {
        let m = builtin_operation("d1", None).unwrap();
        let a = Algebra::new(d(3), vec![m.clone()]).unwrap();
        let s = a.generate(2, &t).unwrap();
        prop_assert!(m.preserves(&s).unwrap());
        for x in &t {
            prop_assert!(s.contains(x));
        }
    }
}
