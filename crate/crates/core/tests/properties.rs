//! Algebraic invariants checked on random inputs.

use proptest::prelude::*;
use qloop_core::multipoly::{alternant_quotient, vandermonde};
use qloop_core::pairing::{constant_term_truncated, GeomFactor};
use qloop_core::shuffle::{omega, shuffle_mul_geom, wheel_general_all, wheel_member, wheel_member_geom};
use qloop_core::*;

fn matrix(d: i64) -> CartanMatrix {
    if d == -1 {
        CartanMatrix::a2()
    } else {
        CartanMatrix::rank_two(d)
    }
}

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0usize..2, -1i32..=1), 1..=max_len).prop_map(Word::new)
}

fn qrat() -> impl Strategy<Value = QRat> {
    (-3i64..=3, -2i32..=2, prop::sample::select(vec![1i64, 2, 3])).prop_map(|(a, e, d)| {
        let x = &QRat::from_int(a) + &QRat::q_pow(e);
        &x * &QRat::from_int(d).recip().unwrap()
    })
}

fn free_elem() -> impl Strategy<Value = FreeElem> {
    prop::collection::vec((word(3), qrat()), 1..=3).prop_map(FreeElem::from_terms)
}

fn shuf(c: &CartanMatrix, w: &Word) -> ShufElem {
    upsilon(c, &FreeElem::word(w.clone()), Sign::Plus).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn scalar_field_laws(a in qrat(), b in qrat(), c in qrat()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!((&a * &b).checked_div(&b).unwrap(), a.clone());
        }
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn shuffle_product_is_associative(d in -2i64..=0, a in word(2), b in word(1), c in word(2)) {
        let m = matrix(d);
        let (x, y, z) = (shuf(&m, &a), shuf(&m, &b), shuf(&m, &c));
        let left = shuffle_mul(&m, &shuffle_mul(&m, &x, &y).unwrap(), &z).unwrap();
        let right = shuffle_mul(&m, &x, &shuffle_mul(&m, &y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn products_of_generators_are_wheel(d in -2i64..=0, w in word(4)) {
        let m = matrix(d);
        let r = shuf(&m, &w);
        prop_assert!(r.is_symmetric());
        prop_assert!(wheel_member(&m, &r).is_ok());
        prop_assert!(wheel_general_all(&m, &r).is_ok());
    }

    #[test]
    fn inversion_is_an_anti_graded_isomorphism(d in -2i64..=0, a in word(2), b in word(2)) {
        let m = matrix(d);
        let (x, y) = (shuf(&m, &a), shuf(&m, &b));
        let xy = shuffle_mul(&m, &x, &y).unwrap();
        let inv = shuffle_mul(&m, &x.invert_variables(), &y.invert_variables()).unwrap();
        prop_assert_eq!(xy.invert_variables(), inv);
        prop_assert_eq!(xy.invert_variables().invert_variables(), xy);
    }

    #[test]
    fn omega_is_multiplicative_and_wheel(d in -2i64..=0, a in word(2), b in word(2)) {
        let m = CartanMatrix::rank_two(d);
        let (x, y) = (shuf(&m, &a), shuf(&m, &b));
        let (ox, oy) = (omega(&m, &x).unwrap(), omega(&m, &y).unwrap());
        let oxy = omega(&m, &shuffle_mul(&m, &x, &y).unwrap()).unwrap();
        prop_assert!(wheel_member_geom(&m, &oxy).is_ok());
        prop_assert_eq!(shuffle_mul_geom(&m, &ox, &oy), oxy);
    }

    #[test]
    fn straightening_is_a_normal_form(d in -2i64..=0, x in free_elem()) {
        let m = matrix(d);
        let s = straighten(&m, &x).unwrap();
        prop_assert!(s.terms().all(|(w, _)| non_increasing(w)));
        prop_assert_eq!(straighten(&m, &s).unwrap(), s.clone());
        for (dims, part) in x.split_by_dims(2) {
            let straight = s.split_by_dims(2).remove(&dims).unwrap_or_else(FreeElem::zero);
            prop_assert_eq!(upsilon(&m, &part, Sign::Plus).unwrap(), upsilon(&m, &straight, Sign::Plus).unwrap());
        }
    }

    #[test]
    fn straightening_is_linear(x in free_elem(), y in free_elem(), k in qrat()) {
        let m = CartanMatrix::a2();
        let mut combo = x.scale(&k);
        combo.add_scaled(&y, &QRat::one());
        let mut expected = straighten(&m, &x).unwrap().scale(&k);
        expected.add_scaled(&straighten(&m, &y).unwrap(), &QRat::one());
        prop_assert_eq!(straighten(&m, &combo).unwrap(), expected);
    }

    #[test]
    fn pairing_respects_grading(a in word(2), b in word(2)) {
        let m = CartanMatrix::a2();
        let (x, y) = (FreeElem::word(a.clone()), FreeElem::word(b.clone()));
        let value = pair_uu(&m, &x, &y).unwrap();
        let (da, ea) = a.degree(2);
        let (db, eb) = b.degree(2);
        if da != db || ea + eb != 0 {
            prop_assert!(value.is_zero());
        }
    }

    #[test]
    fn associated_polynomials_recover_their_words(w in word(3)) {
        let m = CartanMatrix::a2();
        let s = straighten(&m, &FreeElem::word(w)).unwrap();
        for (lead, _) in s.terms() {
            let r = associated_polynomial(2, lead).unwrap();
            prop_assert_eq!(&leading_word(&r).unwrap(), lead);
            prop_assert!(!pair_uv(&m, &FreeElem::word(lead.clone()), &r).unwrap().is_zero());
        }
    }

    #[test]
    fn alternant_quotient_matches_explicit_antisymmetrization(
        exps in prop::collection::vec(prop::collection::vec(-2i32..=2, 4), 1..=3),
    ) {
        let vars = [VarId::new(0, 1), VarId::new(0, 2), VarId::new(0, 3), VarId::new(1, 1)];
        let p = MLaurent::from_terms(
            exps.iter().map(|e| (Mono::from_pairs(vars.iter().copied().zip(e.iter().copied())), QRat::one())),
        );
        let perms: [([u32; 3], i64); 6] =
            [([1, 2, 3], 1), ([2, 1, 3], -1), ([1, 3, 2], -1), ([3, 2, 1], -1), ([2, 3, 1], 1), ([3, 1, 2], 1)];
        let mut alt = MLaurent::zero();
        for (perm, sign) in perms {
            let moved = p.rename(|v| if v.color == 0 { VarId::new(0, perm[v.slot as usize - 1]) } else { v });
            alt = &alt + &moved.scale(&QRat::from_int(sign));
        }
        let dims = [3, 1];
        prop_assert_eq!(&alternant_quotient(&p, &dims) * &vandermonde(&dims), alt);
    }

    #[test]
    fn truncated_constant_term_is_stable(
        exps in prop::collection::vec(prop::collection::vec(-2i32..=2, 3), 1..=4),
        ratios in prop::collection::vec(-2i32..=2, 3),
    ) {
        let vars = [VarId::new(0, 1), VarId::new(0, 2), VarId::new(1, 1)];
        let num = MLaurent::from_terms(
            exps.iter().map(|e| (Mono::from_pairs(vars.iter().copied().zip(e.iter().copied())), QRat::one())),
        );
        let factors = [(0, 1), (0, 2), (1, 2)]
            .into_iter()
            .zip(&ratios)
            .map(|((big, small), &r)| GeomFactor { big, small, ratio: QRat::q_pow(r) })
            .collect();
        let p = CTProblem::new(vars.to_vec(), num, factors).unwrap();
        let bound = p.truncation_bound();
        let exact = constant_term(&p);
        prop_assert_eq!(constant_term_truncated(&p, bound), exact.clone());
        prop_assert_eq!(constant_term_truncated(&p, bound + 1), exact);
    }
}
