mod common;

use std::sync::Arc;

use proptest::prelude::*;

use common::{alphabet, build, build_str, poly_strategy, q, substitute, term_strategy, StrPoly};
use magma_forge::io::{parse_poly, print_poly};
use magma_forge::kurosh::graded_slices;
use magma_forge::{Alphabet, Budget, Polynomial, SubstitutionMap};

fn x_alphabet(n: usize) -> Arc<Alphabet> {
    Arc::new(Alphabet::indeterminates(n))
}

#[test]
fn illustration_products_are_distinct_and_independent() {
    let z = alphabet(3);
    let p1 = parse_poly("(z1,z2)", &z).unwrap();
    let p2 = parse_poly("((z3,z3),z2)", &z).unwrap();
    let products = [(&p1, &p1), (&p1, &p2), (&p2, &p1), (&p2, &p2)];
    let strs: Vec<StrPoly> = products.iter().map(|(a, b)| StrPoly::from_poly(&a.mul(b).unwrap())).collect();
    assert_eq!(common::dense_rank(&strs), 4);
    assert_eq!(print_poly(&p1.mul(&p2).unwrap()), "((z1,z2),((z3,z3),z2))");
}

#[test]
fn example_polynomials_parse() {
    let z = alphabet(4);
    let p2 = parse_poly("4*(z3,(z1,z1)) + z2 + 3*z3", &z).unwrap();
    assert_eq!(p2.len(), 3);
    let p1 = parse_poly("((z2,z1),(z4,z4)) + 2*(z1,z1)", &z).unwrap();
    assert_eq!(p1.pi_n(2), parse_poly("2*(z1,z1)", &z).unwrap());
    assert_eq!(p1.degree(), Some(4));
    let p3 = parse_poly("((z2,z2),z1) - 4*((z1,z2),z1)", &z).unwrap();
    let split = p3.product_type_split(3);
    assert_eq!(split.len(), 1);
    assert_eq!(split.keys().next().unwrap().to_term_string(), "((X,X),X)");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_operations_match_string_oracle(a in poly_strategy(2, 4, 5), b in poly_strategy(2, 4, 5)) {
        let z = alphabet(2);
        let (pa, pb) = (build(&z, &a), build(&z, &b));
        let (sa, sb) = (build_str(&z, &a), build_str(&z, &b));
        prop_assert_eq!(StrPoly::from_poly(&pa), sa.clone());
        prop_assert_eq!(StrPoly::from_poly(&(&pa + &pb)), sa.add(&sb));
        prop_assert_eq!(StrPoly::from_poly(&(&pa - &pb)), sa.add(&sb.scale(&q(-1))));
        prop_assert_eq!(StrPoly::from_poly(&(&pa * &pb)), sa.mul(&sb));
    }

    #[test]
    fn multiplication_is_bilinear(a in poly_strategy(2, 3, 4), b in poly_strategy(2, 3, 4), c in poly_strategy(2, 3, 4), k in common::coeff_strategy()) {
        let z = alphabet(2);
        let (a, b, c) = (build(&z, &a), build(&z, &b), build(&z, &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&c * &(&a + &b), &(&c * &a) + &(&c * &b));
        prop_assert_eq!(&a.scale(&k) * &b, (&a * &b).scale(&k));
    }

    #[test]
    fn product_degree_is_additive(a in poly_strategy(2, 4, 4), b in poly_strategy(2, 4, 4)) {
        let z = alphabet(2);
        let (a, b) = (build(&z, &a), build(&z, &b));
        let p = &a * &b;
        match (a.degree(), b.degree()) {
            (Some(x), Some(y)) => {
                prop_assert_eq!(p.degree(), Some(x + y));
                prop_assert_eq!(p.leading_form().unwrap(), &a.leading_form().unwrap() * &b.leading_form().unwrap());
            }
            _ => prop_assert!(p.is_zero()),
        }
    }

    #[test]
    fn print_parse_round_trip(a in poly_strategy(2, 6, 6)) {
        let z = alphabet(2);
        let p = build(&z, &a);
        prop_assert_eq!(parse_poly(&print_poly(&p), &z).unwrap(), p.clone());
        prop_assert_eq!(magma_forge::io::poly_from_json(&magma_forge::io::poly_to_json(&p)).unwrap(), p);
    }

    #[test]
    fn components_reassemble(a in poly_strategy(2, 5, 6)) {
        let z = alphabet(2);
        let p = build(&z, &a);
        let mut sum = Polynomial::zero(&z);
        for (d, part) in p.homogeneous_components() {
            prop_assert!(part.is_homogeneous());
            prop_assert_eq!(&part, &p.pi_n(d));
            let mut split_sum = Polynomial::zero(&z);
            for part in p.product_type_split(d).values() {
                split_sum = &split_sum + part;
            }
            prop_assert_eq!(&split_sum, &part);
            sum = &sum + &part;
        }
        prop_assert_eq!(sum, p);
    }

    #[test]
    fn substitution_matches_oracle_and_is_multiplicative(
        m in poly_strategy(2, 3, 3),
        n in poly_strategy(2, 3, 3),
        i1 in poly_strategy(2, 2, 3),
        i2 in poly_strategy(2, 2, 3),
    ) {
        let xs = x_alphabet(2);
        let z = alphabet(2);
        let (pm, pn) = (build(&xs, &m), build(&xs, &n));
        let images = vec![build(&z, &i1), build(&z, &i2)];
        let strs: Vec<StrPoly> = images.iter().map(StrPoly::from_poly).collect();
        let map = SubstitutionMap::new(images).unwrap();
        let value = pm.substitute(&map).unwrap();
        prop_assert_eq!(StrPoly::from_poly(&value), substitute(&build_str(&xs, &m), &strs));
        let lhs = (&pm * &pn).substitute(&map).unwrap();
        prop_assert_eq!(lhs, &value * &pn.substitute(&map).unwrap());
        prop_assert_eq!((&pm + &pn).substitute(&map).unwrap(), &value + &pn.substitute(&map).unwrap());
    }

    #[test]
    fn homogeneous_images_give_homogeneous_values(
        m in term_strategy(3, 5),
        k in 1u32..=3,
        seeds in prop::collection::vec(poly_strategy(2, 3, 3), 3),
    ) {
        let z = alphabet(2);
        let images: Vec<Polynomial> = seeds.iter().enumerate().map(|(i, s)| {
            let p = build(&z, s).pi_n(k);
            if p.is_zero() { Polynomial::from_term(&z, &magma_forge::MagmaTerm::left_comb((i % 2) as u16, k)) } else { p }
        }).collect();
        let xs = x_alphabet(3);
        let value = Polynomial::from_term(&xs, &m).substitute(&SubstitutionMap::new(images).unwrap()).unwrap();
        prop_assert!(value.is_homogeneous());
        prop_assert_eq!(value.degree(), Some(k * m.degree()));
    }

    #[test]
    fn subalgebra_slices_contain_random_expressions(
        gens in prop::collection::vec((1u32..=2, poly_strategy(2, 2, 2)), 1..=2),
        exprs in prop::collection::vec(poly_strategy(2, 3, 3), 1..=3),
    ) {
        let z = alphabet(2);
        let gens: Vec<Polynomial> = gens.iter().filter_map(|(d, s)| {
            let p = build(&z, s).pi_n(*d);
            (!p.is_zero()).then_some(p)
        }).collect();
        prop_assume!(!gens.is_empty());
        let xs = x_alphabet(gens.len());
        let map = SubstitutionMap::new(gens.clone()).unwrap();
        let sub = graded_slices(&gens, 6, &Budget::default()).unwrap();
        for e in &exprs {
            let names: Vec<String> = xs.symbols().to_vec();
            let pairs: Vec<_> = e.iter().filter(|(t, _)| t.max_symbol() < gens.len() as u16).cloned().collect();
            let p = build(&xs, &pairs);
            let value = p.substitute(&map).unwrap();
            for (d, part) in value.homogeneous_components() {
                if d <= 6 {
                    prop_assert!(sub.slice(d).unwrap().contains(&part), "{} not in slice {d} ({names:?})", part);
                }
            }
        }
    }
}
