mod common;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{alphabet, first_dependent, weighted_terms, StrPoly};
use magma_forge::independence::{check_reduced, is_reduced, relation_search, same_degree_fast_path};
use magma_forge::io::print_poly;
use magma_forge::oracle::{random_homogeneous, random_independent_family, random_reduced_set};
use magma_forge::{Alphabet, Budget, IndependenceVerdict, Polynomial, SubstitutionMap};

/// Largest monomial of a witness, printed with the oracle's own bracket text.
fn leading_text(w: &Polynomial) -> String {
    let names = w.alphabet().symbols().to_vec();
    let (code, _) = w.max_monomial().unwrap();
    common::term_text(&magma_forge::magma::unembed(code).unwrap(), &names)
}

/// Oracle verdict: for homogeneous inputs, the first weight with a dependent
/// monomial and that monomial; otherwise the first dependent monomial overall.
fn brute_force(ps: &[Polynomial], dmax: usize) -> Option<String> {
    let images: Vec<StrPoly> = ps.iter().map(StrPoly::from_poly).collect();
    let weights: Vec<usize> = ps.iter().map(|p| p.degree().unwrap() as usize).collect();
    let by_weight = weighted_terms(&weights, dmax);
    let xs = Alphabet::indeterminates(ps.len());
    let order = |terms: &mut Vec<String>| {
        terms.sort_by_key(|t| magma_forge::magma::embed(&magma_forge::io::parse_term(t, &xs).unwrap()));
    };
    if ps.iter().all(Polynomial::is_homogeneous) {
        for terms in by_weight.into_iter().skip(1) {
            let mut terms = terms;
            order(&mut terms);
            if let Some(t) = first_dependent(&terms, &images) {
                return Some(t);
            }
        }
        None
    } else {
        let mut terms: Vec<String> = by_weight.into_iter().flatten().collect();
        order(&mut terms);
        first_dependent(&terms, &images)
    }
}

fn check_against_oracle(ps: &[Polynomial], dmax: u32) {
    let verdict = relation_search(ps, dmax, &Budget::default()).unwrap();
    let expected = brute_force(ps, dmax as usize);
    match (&verdict, expected) {
        (IndependenceVerdict::IndependentUpTo(b), None) => assert_eq!(*b, dmax),
        (IndependenceVerdict::Dependent { witness }, Some(lead)) => {
            let images: Vec<StrPoly> = ps.iter().map(StrPoly::from_poly).collect();
            assert!(common::substitute(&StrPoly::from_poly(witness), &images).is_zero());
            assert_eq!(leading_text(witness), lead, "witness {}", print_poly(witness));
            assert!(witness.max_monomial().unwrap().1 == &common::q(1));
        }
        (v, e) => panic!("inputs {:?}: got {v:?}, oracle says {e:?}", ps.iter().map(print_poly).collect::<Vec<_>>()),
    }
}

#[test]
fn homogeneous_families_agree_with_brute_force() {
    let z = alphabet(2);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..60 {
        let n = rng.gen_range(1..=3);
        let ps: Vec<Polynomial> = (0..n)
            .map(|_| {
                let d = rng.gen_range(1..=2);
                random_homogeneous(&mut rng, &z, d, 2)
            })
            .collect();
        if (0..n).any(|i| ps[..i].contains(&ps[i])) {
            continue;
        }
        check_against_oracle(&ps, 4);
    }
}

#[test]
fn inhomogeneous_families_agree_with_brute_force() {
    let z = alphabet(2);
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut dependent = 0;
    for _ in 0..60 {
        let n = rng.gen_range(1..=3);
        let mut ps: Vec<Polynomial> = Vec::new();
        for _ in 0..n {
            let d = rng.gen_range(1..=2);
            let mut p = random_homogeneous(&mut rng, &z, d, 2);
            if d == 2 && rng.gen_bool(0.7) {
                p = &p + &random_homogeneous(&mut rng, &z, 1, 1);
            }
            ps.push(p);
        }
        if rng.gen_bool(0.3) && !ps.is_empty() {
            let sq = &ps[0] * &ps[0];
            if sq.degree() <= Some(4) {
                ps.push(sq);
            }
        }
        if (0..ps.len()).any(|i| ps[..i].contains(&ps[i])) {
            continue;
        }
        let dmax = 4;
        if ps.iter().any(|p| p.degree() > Some(dmax)) {
            continue;
        }
        dependent += relation_search(&ps, dmax, &Budget::default()).unwrap().witness().is_some() as usize;
        check_against_oracle(&ps, dmax);
    }
    assert!(dependent > 0);
}

#[test]
fn linearly_independent_same_degree_families_stay_independent() {
    let z = alphabet(2);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..30 {
        let k = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=3);
        let Some(family) = random_independent_family(&mut rng, &z, k, n) else { continue };
        assert_eq!(same_degree_fast_path(&family).unwrap(), IndependenceVerdict::ReducedCertified);
        assert_eq!(relation_search(&family, 7, &Budget::default()).unwrap(), IndependenceVerdict::IndependentUpTo(7));
    }
}

#[test]
fn reduced_sets_pass_the_relation_search() {
    let z = alphabet(2);
    let b = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..30 {
        let set = random_reduced_set(&mut rng, &z, 3, 3, &b).unwrap();
        assert!(check_reduced(&set, 5, &b).unwrap());
        assert_eq!(is_reduced(&set, 5, &b).unwrap(), IndependenceVerdict::ReducedCertified);
        assert!(relation_search(&set, 5, &b).unwrap().is_independent());
    }
}

#[test]
fn verdicts_are_monotone_in_the_bound() {
    let z = alphabet(2);
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let b = Budget::default();
    for _ in 0..30 {
        let set = random_reduced_set(&mut rng, &z, 2, 3, &b).unwrap();
        let top = set.iter().filter_map(Polynomial::degree).max().unwrap();
        if relation_search(&set, 5, &b).unwrap().is_independent() {
            for d in top..5 {
                assert_eq!(relation_search(&set, d, &b).unwrap(), IndependenceVerdict::IndependentUpTo(d));
            }
        }
    }
}

#[test]
fn witnesses_vanish_exactly() {
    let z = alphabet(2);
    let xs = Arc::new(Alphabet::indeterminates(3));
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for _ in 0..20 {
        let a = random_homogeneous(&mut rng, &z, 1, 2);
        let c = random_homogeneous(&mut rng, &z, 2, 2);
        let ps = vec![a.clone(), c.clone(), &(&a * &c) + &(&c * &a)];
        if (0..3).any(|i| ps[..i].contains(&ps[i])) {
            continue;
        }
        let v = relation_search(&ps, 3, &Budget::default()).unwrap();
        let w = v.witness().expect("a relation exists at weight 3");
        assert_eq!(w.alphabet(), &xs);
        assert!(w.substitute(&SubstitutionMap::new(ps).unwrap()).unwrap().is_zero());
    }
}

#[test]
fn budget_failures_report_the_size() {
    let z = alphabet(2);
    let ps = vec![
        magma_forge::io::parse_poly("z1 + (z2,z2)", &z).unwrap(),
        magma_forge::io::parse_poly("z2", &z).unwrap(),
    ];
    match relation_search(&ps, 12, &Budget::new(1000)) {
        Err(magma_forge::Error::BudgetExceeded { size, cap, .. }) => {
            assert!(size > 1000);
            assert_eq!(cap, 1000);
        }
        other => panic!("expected a budget failure, got {other:?}"),
    }
}
