use std::sync::Arc;

use polarcrit_core::bounds::{
    bidegree_product, conormal_bidegree, projection_degree, s_variety_bidegree, theorem1_bound, DeltaVector,
};
use polarcrit_core::geores::{solve_with_search, FiniteAlgebra};
use polarcrit_core::groebner::GroebnerBasis;
use polarcrit_core::linalg::FieldMatrix;
use polarcrit_core::matrix::{subsets, PolyMatrix};
use polarcrit_core::parse::parse_poly;
use polarcrit_core::univariate::UniPoly;
use polarcrit_core::{Field, Monomial, MonomialOrder, MultiPoly, PrimeField, Rationals, Ring};
use proptest::prelude::*;

const P: u64 = 32003;

fn ring3() -> Arc<Ring<PrimeField>> {
    Ring::new(PrimeField::new(P).unwrap(), &["x", "y", "z"]).unwrap()
}

type RawPoly = Vec<([u16; 3], i64)>;

fn raw_poly(max_deg: u16, max_terms: usize) -> impl Strategy<Value = RawPoly> {
    prop::collection::vec(([0..=max_deg, 0..=max_deg, 0..=max_deg], -20i64..=20), 0..=max_terms)
}

fn build<F: Field>(ring: &Arc<Ring<F>>, raw: &RawPoly) -> MultiPoly<F> {
    let f = ring.field();
    let terms = raw
        .iter()
        .map(|(e, c)| (Monomial::new(e[..ring.nvars()].to_vec()), f.from_i64(*c)))
        .collect();
    MultiPoly::from_terms(ring, terms)
}

fn uni(raw: &[i64]) -> UniPoly<PrimeField> {
    UniPoly::from_i64s(&PrimeField::new(P).unwrap(), raw)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in raw_poly(3, 6), b in raw_poly(3, 6), c in raw_poly(3, 6)) {
        let r = ring3();
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn product_rule(a in raw_poly(3, 6), b in raw_poly(3, 6), var in 0usize..3) {
        let r = ring3();
        let (a, b) = (build(&r, &a), build(&r, &b));
        let lhs = a.mul(&b).partial_derivative(var);
        let rhs = a.partial_derivative(var).mul(&b).add(&a.mul(&b.partial_derivative(var)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn univariate_product_rule(a in prop::collection::vec(-50i64..50, 0..8), b in prop::collection::vec(-50i64..50, 0..8)) {
        let (a, b) = (uni(&a), uni(&b));
        prop_assert_eq!(a.mul(&b).derivative(), a.derivative().mul(&b).add(&a.mul(&b.derivative())));
    }

    #[test]
    fn display_parses_back(a in raw_poly(4, 8)) {
        let rq = Ring::new(Rationals, &["x", "y", "z"]).unwrap();
        let p = build(&rq, &a);
        prop_assert_eq!(parse_poly(&p.to_string(), &rq).unwrap(), p.clone());
        let rp = ring3();
        let p = build(&rp, &a);
        prop_assert_eq!(parse_poly(&p.to_string(), &rp).unwrap(), p);
    }

    #[test]
    fn squarefree_parts(a in prop::collection::vec(-30i64..30, 2..7), b in prop::collection::vec(-30i64..30, 2..5)) {
        let (a, b) = (uni(&a), uni(&b));
        prop_assume!(a.degree().unwrap_or(0) > 0 && b.degree().unwrap_or(0) > 0);
        let p = a.mul(&a).mul(&b);
        let s = p.squarefree_part();
        prop_assert!(s.is_squarefree());
        prop_assert!(p.rem(&s).is_zero());
        // the roots of a are roots of s
        prop_assert!(a.squarefree_part().monic() == a.squarefree_part().gcd(&s).monic());
        prop_assert_eq!(p.squarefree_part().monic(), p.mul(&p).squarefree_part().monic());
    }

    #[test]
    fn minors_commute_with_evaluation(
        entries in prop::collection::vec(raw_poly(2, 3), 12),
        point in prop::collection::vec(-40i64..40, 3),
        order in 1usize..=3,
    ) {
        let r = ring3();
        let f = r.field().clone();
        let polys: Vec<_> = entries.iter().map(|e| build(&r, e)).collect();
        let m = PolyMatrix::new(&r, 3, 4, polys).unwrap();
        let pt: Vec<_> = point.iter().map(|&v| f.from_i64(v)).collect();
        let minors = m.minors(order).unwrap();
        let evaluated = m.evaluate(&pt).to_rows();
        let mut expected = Vec::new();
        for rows in subsets(3, order) {
            for cols in subsets(4, order) {
                let sub: Vec<Vec<_>> = rows.iter().map(|&i| cols.iter().map(|&j| evaluated[i][j].clone()).collect()).collect();
                expected.push(FieldMatrix::from_rows(&f, sub).det());
            }
        }
        let got: Vec<_> = minors.iter().map(|p| p.evaluate(&pt)).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn bidegree_identity(
        delta in prop::collection::vec(1u128..100, 1..7),
        extra in 1usize..4,
        big_d in 1u32..7,
        i_frac in 0.0f64..1.0,
    ) {
        let d = delta.len() - 1;
        let n = d + extra;
        let i = ((d + 1) as f64 * i_frac) as usize;
        let dv = DeltaVector::new(delta).unwrap();
        let product = bidegree_product(
            &conormal_bidegree(&dv, n).unwrap(),
            &s_variety_bidegree(n, i + 1, big_d).unwrap(),
        ).unwrap();
        prop_assert_eq!(projection_degree(&product, n, i), theorem1_bound(&dv, big_d, i).unwrap());
        if big_d == 1 {
            prop_assert_eq!(theorem1_bound(&dv, 1, i).unwrap(), dv.get(i + 1));
        }
    }

    #[test]
    fn bound_grows_with_the_degree(delta in prop::collection::vec(0u128..100, 1..7), big_d in 1u32..8, i_frac in 0.0f64..1.0) {
        let dv = DeltaVector::new(delta).unwrap();
        let i = ((dv.dim() + 1) as f64 * i_frac) as usize;
        prop_assert!(theorem1_bound(&dv, big_d, i).unwrap() <= theorem1_bound(&dv, big_d + 1, i).unwrap());
    }
}

fn dense_system(ring: &Arc<Ring<PrimeField>>, coeffs: &[i64], degrees: &[u16]) -> Vec<MultiPoly<PrimeField>> {
    let f = ring.field();
    let n = ring.nvars();
    let mut it = coeffs.iter().cycle();
    degrees
        .iter()
        .map(|&deg| {
            let mut terms = Vec::new();
            for a in 0..=deg {
                for b in 0..=deg - a {
                    let tops = if n == 3 { deg - a - b } else { 0 };
                    for c in 0..=tops {
                        let e = if n == 3 { vec![a, b, c] } else { vec![a, b] };
                        terms.push((Monomial::new(e), f.from_i64(*it.next().unwrap())));
                    }
                }
            }
            MultiPoly::from_terms(ring, terms)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn basis_contains_its_ideal(
        coeffs in prop::collection::vec(-9i64..=9, 30),
        mult in prop::collection::vec(raw_poly(2, 3), 2),
    ) {
        let r = Ring::new(PrimeField::new(P).unwrap(), &["x", "y"]).unwrap();
        let gens = dense_system(&r, &coeffs, &[2, 3]);
        let gb = GroebnerBasis::compute(&r, &gens, &MonomialOrder::GREVLEX).unwrap();
        for g in &gens {
            prop_assert!(gb.contains(g));
        }
        let combo = gens[0].mul(&build(&r, &mult[0])).add(&gens[1].mul(&build(&r, &mult[1])));
        prop_assert!(gb.normal_form(&combo).is_zero());
        prop_assert!(gb.generators().iter().all(|g| g.leading_term().is_some_and(|(_, c)| r.field().is_one(c))));
    }

    #[test]
    fn orders_agree_on_dimension(coeffs in prop::collection::vec(-9i64..=9, 30)) {
        let r = Ring::new(PrimeField::new(P).unwrap(), &["x", "y"]).unwrap();
        let gens = dense_system(&r, &coeffs, &[2, 2]);
        let a = GroebnerBasis::compute(&r, &gens, &MonomialOrder::GREVLEX).unwrap();
        let b = GroebnerBasis::compute(&r, &gens, &MonomialOrder::LEX).unwrap();
        prop_assert_eq!(a.quotient_dimension(), b.quotient_dimension());
        for g in &b.generators() {
            prop_assert!(a.contains(g));
        }
    }

    #[test]
    fn multiplication_matrices_commute(coeffs in prop::collection::vec(-9i64..=9, 40)) {
        let r = Ring::new(PrimeField::new(P).unwrap(), &["x", "y", "z"]).unwrap();
        let gens = dense_system(&r, &coeffs, &[1, 2, 2]);
        let gb = GroebnerBasis::compute(&r, &gens, &MonomialOrder::GREVLEX).unwrap();
        prop_assume!(gb.quotient_dimension().finite().is_some_and(|k| k > 0));
        let (_, mats) = gb.variable_matrices().unwrap();
        for i in 0..mats.len() {
            for j in 0..i {
                prop_assert_eq!(mats[i].mul(&mats[j]), mats[j].mul(&mats[i]));
            }
        }
    }

    #[test]
    fn parametrizations_satisfy_their_system(coeffs in prop::collection::vec(-9i64..=9, 30), seed in 0u64..1000) {
        let r = Ring::new(PrimeField::new(P).unwrap(), &["x", "y"]).unwrap();
        let gens = dense_system(&r, &coeffs, &[2, 3]);
        let gb = GroebnerBasis::compute(&r, &gens, &MonomialOrder::GREVLEX).unwrap();
        prop_assume!(gb.quotient_dimension().finite().is_some_and(|k| k > 0));
        let alg = FiniteAlgebra::from_basis(&gb).unwrap();
        if let Ok(p) = solve_with_search(&alg, &r, seed) {
            let report = p.check(&gens);
            prop_assert!(report.passed(), "{:?}", report);
            prop_assert_eq!(Some(p.degree()), gb.quotient_dimension().finite());
            prop_assert_eq!(p.q().degree(), Some(p.degree()));
        }
    }
}
