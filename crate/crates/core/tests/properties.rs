mod common;

use common::*;
use gwdeg_core::classify::{get_invariants, get_witt_decomposition, is_isomorphic_gw};
use gwdeg_core::degree::{bezoutian_matrix, check_poincare_hopf, global_unstable_degree, make_pointed};
use gwdeg_core::etale::{AlgebraElement, EtaleAlgebra};
use gwdeg_core::unstable::{
    add_gwu, add_gwu_divisorial, get_sum_decomposition_gwu, is_isomorphic_gwu, make_diagonal_unstable_form,
    Compatibility,
};
use gwdeg_core::{
    hilbert_symbol, poly_gcd, reduce_square_class, resultant, root_multiplicity, FieldSpec, GrothendieckWittClass,
    Matrix, Place, Polynomial, RingElem, Scalar,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn nonzero(bound: i64) -> impl Strategy<Value = i64> {
    (-bound..=bound).prop_filter("nonzero", |v| *v != 0)
}

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![Just(FieldSpec::Rationals), Just(gf(3)), Just(gf(5)), Just(gf(7)), Just(gf(11))]
}

fn poly(field: FieldSpec, coeffs: &[i64]) -> Polynomial {
    Polynomial::from_ints(field, coeffs)
}

fn places_for(values: &[i64]) -> Vec<Place> {
    let mut places = vec![Place::Infinity, Place::prime(2)];
    for &v in values {
        for p in gwdeg_core::number_theory::prime_divisors(BigInt::from(v).magnitude()) {
            let place = Place::Prime(p);
            if !places.contains(&place) {
                places.push(place);
            }
        }
    }
    places
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn square_class_ignores_squares(field in field_strategy(), a in nonzero(500), b in nonzero(500)) {
        let sa = Scalar::from_int(field, a);
        let sb = Scalar::from_int(field, b);
        prop_assume!(!sa.is_zero() && !sb.is_zero());
        let scaled = &sa * &(&sb * &sb);
        prop_assert_eq!(reduce_square_class(&scaled).unwrap(), reduce_square_class(&sa).unwrap());
    }

    #[test]
    fn hilbert_symmetry_and_bimultiplicativity(a in nonzero(300), b in nonzero(300), c in nonzero(300)) {
        for v in places_for(&[a, b, c]) {
            let h = |x: i64, y: i64| hilbert_symbol(&rational(x), &rational(y), &v).unwrap();
            prop_assert_eq!(h(a, b), h(b, a));
            prop_assert_eq!(h(a, b * c), h(a, b) * h(a, c));
            prop_assert_eq!(h(a, -a), 1);
            prop_assert_eq!(h(a, b * b), 1);
        }
    }

    #[test]
    fn gcd_divides_both(
        field in field_strategy(),
        f in prop::collection::vec(-9i64..=9, 1..6),
        g in prop::collection::vec(-9i64..=9, 1..6),
        h in prop::collection::vec(-9i64..=9, 1..4),
    ) {
        let (f, g, h) = (poly(field, &f), poly(field, &g), poly(field, &h));
        prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
        let (fh, gh) = (&f * &h, &g * &h);
        let d = poly_gcd(&fh, &gh).unwrap();
        prop_assert!(d.is_monic());
        prop_assert!(fh.rem(&d).unwrap().is_zero());
        prop_assert!(gh.rem(&d).unwrap().is_zero());
        prop_assert!(d.rem(&h.monic().unwrap()).unwrap().is_zero());
    }

    #[test]
    fn resultant_is_multiplicative(
        field in field_strategy(),
        f in prop::collection::vec(-9i64..=9, 2..6),
        g in prop::collection::vec(-9i64..=9, 1..5),
        h in prop::collection::vec(-9i64..=9, 1..5),
    ) {
        let (f, g, h) = (poly(field, &f), poly(field, &g), poly(field, &h));
        prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
        let lhs = resultant(&f, &(&g * &h)).unwrap();
        let rhs = &resultant(&f, &g).unwrap() * &resultant(&f, &h).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(resultant(&f, &g).unwrap(), sylvester_resultant(&f, &g));
    }

    #[test]
    fn root_multiplicity_adds(field in field_strategy(), r in -5i64..=5, m1 in 0usize..4, m2 in 0usize..4, c in -5i64..=5) {
        let root = Scalar::from_int(field, r);
        let other = Scalar::from_int(field, c);
        prop_assume!(root != other);
        let f = &Polynomial::linear(&root).pow(m1 as u32) * &Polynomial::linear(&other);
        let g = Polynomial::linear(&root).pow(m2 as u32);
        prop_assert_eq!(root_multiplicity(&f, &root).unwrap(), m1);
        prop_assert_eq!(root_multiplicity(&(&f * &g), &root).unwrap(), m1 + m2);
    }

    #[test]
    fn algebra_trace_and_multiplication(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let qq = FieldSpec::Rationals;
        let algebras = [
            EtaleAlgebra::new(qq, vec![poly(qq, &[-2, 0, 1]), poly(qq, &[-1, -1, 0, 1])]).unwrap(),
            EtaleAlgebra::new(gf(5), vec![poly(gf(5), &[-2, 0, 1])]).unwrap(),
            example_algebra(),
        ];
        for alg in &algebras {
            let u = random_algebra_element(&mut rng, alg, 6);
            let v = random_algebra_element(&mut rng, alg, 6);
            let c = random_scalar(&mut rng, alg.base(), 6);
            prop_assert_eq!(u.plus(&v.scale(&c)).trace(), &u.trace() + &(&c * &v.trace()));
            prop_assert_eq!(
                u.times(&v).multiplication_matrix(),
                u.multiplication_matrix().mul(&v.multiplication_matrix())
            );
            prop_assert_eq!(u.multiplication_matrix().trace(), u.trace());
            match u.inverse() {
                Some(inv) => {
                    prop_assert!(u.is_unit());
                    prop_assert_eq!(u.times(&inv), AlgebraElement::one(alg));
                }
                None => prop_assert!(!u.is_unit()),
            }
        }
    }

    #[test]
    fn a_plus_minus_a_is_hyperbolic(a in nonzero(10_000), d in 1i64..50) {
        let qq = FieldSpec::Rationals;
        let a = qf(a, d);
        let lhs = diag_class(qq, &[a.clone(), -a]);
        let rhs = diag_class(qq, &[q(1), q(-1)]);
        prop_assert!(is_isomorphic_gw(&lhs, &rhs).unwrap());
    }

    #[test]
    fn witt_decomposition_reassembles(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fields = [FieldSpec::Rationals, gf(3), gf(7), FieldSpec::FormalReal, FieldSpec::FormalComplex];
        for field in fields {
            let n = rng.gen_range(1..=5);
            let beta = GrothendieckWittClass::over_field(field, &random_form(&mut rng, field, n, 9)).unwrap();
            let w = get_witt_decomposition(&beta).unwrap();
            prop_assert_eq!(2 * w.hyperbolic + w.anisotropic.len(), n);
            prop_assert!(is_isomorphic_gw(&w.to_class(), &beta).unwrap());
            // the anisotropic part has no hyperbolic plane left
            if !w.anisotropic.is_empty() {
                let rest = diag_class(field, &w.anisotropic);
                prop_assert_eq!(get_witt_decomposition(&rest).unwrap().hyperbolic, 0);
            }
        }
    }

    #[test]
    fn hasse_reciprocity_on_forms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let qq = FieldSpec::Rationals;
        let n = rng.gen_range(1..=5);
        let beta = GrothendieckWittClass::over_field(qq, &random_form(&mut rng, qq, n, 9)).unwrap();
        let inv = get_invariants(&beta).unwrap();
        let hasse = inv.hasse.unwrap();
        prop_assert_eq!(hasse.values().product::<i8>(), 1);
        let (pos, neg) = inv.signature.unwrap();
        prop_assert_eq!(pos + neg, n);
    }

    #[test]
    fn unstable_addition_laws(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = [FieldSpec::Rationals, gf(5), gf(7)][rng.gen_range(0..3)];
        let mut draw = || {
            let n = rng.gen_range(1..=3);
            let entries: Vec<Scalar> = (0..n).map(|_| random_nonzero(&mut rng, field, 9)).collect();
            make_diagonal_unstable_form(field, &entries).unwrap()
        };
        let (a, b, c) = (draw(), draw(), draw());
        let ab = add_gwu(&a, &b).unwrap();
        prop_assert!(is_isomorphic_gwu(&ab, &add_gwu(&b, &a).unwrap()).unwrap());
        let left = add_gwu(&ab, &c).unwrap();
        let right = add_gwu(&a, &add_gwu(&b, &c).unwrap()).unwrap();
        prop_assert!(is_isomorphic_gwu(&left, &right).unwrap());
        prop_assert_eq!(left.compatibility(), Compatibility::Verified);
        prop_assert!(is_isomorphic_gwu(&a, &a).unwrap());
        let d = get_sum_decomposition_gwu(&left).unwrap();
        prop_assert!(is_isomorphic_gwu(&d, &left).unwrap());
        prop_assert!(is_isomorphic_gwu(&left, &d).unwrap());
    }

    #[test]
    fn divisorial_sum_is_permutation_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = [FieldSpec::Rationals, gf(7), gf(11)][rng.gen_range(0..3)];
        let k = rng.gen_range(1..=4);
        let points = distinct_points(&mut rng, field, k, 6);
        let classes: Vec<_> = (0..k)
            .map(|_| {
                let n = rng.gen_range(1..=2);
                let entries: Vec<Scalar> = (0..n).map(|_| random_nonzero(&mut rng, field, 9)).collect();
                make_diagonal_unstable_form(field, &entries).unwrap()
            })
            .collect();
        let sum = add_gwu_divisorial(&classes, &points).unwrap();
        let mut order: Vec<usize> = (0..k).collect();
        order.reverse();
        order.rotate_left(rng.gen_range(0..k));
        let classes2: Vec<_> = order.iter().map(|&i| classes[i].clone()).collect();
        let points2: Vec<_> = order.iter().map(|&i| points[i].clone()).collect();
        let sum2 = add_gwu_divisorial(&classes2, &points2).unwrap();
        prop_assert!(is_isomorphic_gwu(&sum, &sum2).unwrap());
    }

    #[test]
    fn bezoutian_symmetric_and_compatible(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = [FieldSpec::Rationals, gf(3), gf(7)][rng.gen_range(0..3)];
        let n = rng.gen_range(1..=6);
        let f = random_polynomial(&mut rng, field, n, 9).monic().unwrap();
        let dg = rng.gen_range(0..n);
        let g = random_polynomial(&mut rng, field, dg, 9);
        if let Ok(pq) = make_pointed(f, g) {
            let b = bezoutian_matrix(&pq);
            prop_assert_eq!(b.transpose(), b.clone());
            let u = global_unstable_degree(&pq).unwrap();
            prop_assert_eq!(u.base_scalar(), Some(b.det().unwrap()));
            prop_assert_eq!(u.compatibility(), Compatibility::Verified);
        }
    }

    #[test]
    fn split_functions_satisfy_poincare_hopf(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = [FieldSpec::Rationals, gf(5), gf(11)][rng.gen_range(0..3)];
        let (f, g, roots, mults) = random_split_pair(&mut rng, field, 5);
        prop_assert_eq!(mults.iter().sum::<usize>(), f.degree().unwrap());
        let pq = make_pointed(f, g).unwrap();
        prop_assert!(check_poincare_hopf(&pq, &roots).unwrap());
    }
}

#[test]
fn hyperbolic_planes_over_finite_fields() {
    // -1 is a square mod 5 and 13, not mod 3, 7 or 11
    for (p, split) in [(3, false), (5, true), (7, false), (11, false), (13, true)] {
        let field = gf(p);
        let beta = diag_class(field, &[Scalar::one(field), Scalar::one(field)]);
        assert_eq!(get_witt_decomposition(&beta).unwrap().hyperbolic == 1, split, "p = {p}");
    }
}

#[test]
fn isomorphism_is_transitive_on_congruent_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for field in [FieldSpec::Rationals, gf(3), gf(5), gf(7), gf(11)] {
        for _ in 0..20 {
            let n = rng.gen_range(1..=4);
            let m = random_form(&mut rng, field, n, 9);
            let p1 = random_invertible(&mut rng, field, n, 5);
            let p2 = random_invertible(&mut rng, field, n, 5);
            let m1 = p1.transpose().mul(&m).mul(&p1);
            let m2 = p2.transpose().mul(&m1).mul(&p2);
            let c = |x: &Matrix<Scalar>| GrothendieckWittClass::over_field(field, x).unwrap();
            assert!(is_isomorphic_gw(&c(&m), &c(&m1)).unwrap());
            assert!(is_isomorphic_gw(&c(&m1), &c(&m2)).unwrap());
            assert!(is_isomorphic_gw(&c(&m2), &c(&m)).unwrap());
        }
    }
}
