use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn valuation_examples() {
    let o3 = Dvr::new(3).unwrap();
    assert_eq!(valuation(&o3.from_rational(&q(9, 2)).unwrap()), Some(2));
    assert_eq!(valuation(&o3.zero()), None);
    let o5 = Dvr::new(5).unwrap();
    assert_eq!(valuation(&o5.from_int(7)), Some(0));
    assert!(o3.from_rational(&q(1, 3)).is_none());
    assert!(Dvr::new(4).is_err());
}

#[test]
fn scalar_parts() {
    let o = Dvr::new(3).unwrap();
    let s = o.from_rational(&q(-18, 5)).unwrap();
    assert_eq!(s.exponent(), Some(2));
    assert_eq!(s.unit().unwrap(), &q(-2, 5));
    assert_eq!(o.from_parts(2, q(-2, 5)), s);
    assert_eq!(o.to_rational(&s), q(-18, 5));
}

#[test]
fn smith_examples() {
    let o = Dvr::new(2).unwrap();
    let id = OMatrix::identity(&o, 2);
    assert_eq!(smith_normal_form(&o, &id, SnfOptions::NONE).exponents, vec![0, 0]);
    let d = OMatrix::from_i64_rows(&o, 2, &[&[2, 0], &[0, 4]]);
    assert_eq!(smith_normal_form(&o, &d, SnfOptions::NONE).exponents, vec![1, 2]);
    let m = OMatrix::from_i64_rows(&o, 2, &[&[2, 2], &[2, 6]]);
    assert_eq!(smith_normal_form(&o, &m, SnfOptions::NONE).exponents, vec![1, 2]);
    assert_eq!(det_valuation(&o, &m), Some(3));
}

#[test]
fn smith_transforms_diagonalize() {
    let o = Dvr::new(3).unwrap();
    let m = OMatrix::from_i64_rows(&o, 3, &[&[3, 6, 9], &[1, 2, 4], &[0, 27, 3]]);
    let snf = smith_normal_form(&o, &m, SnfOptions::BOTH);
    let d = snf.left.as_ref().unwrap().mul(&o, &m).mul(&o, snf.right.as_ref().unwrap());
    for i in 0..3 {
        for j in 0..3 {
            let expect = if i == j && i < snf.rank() { o.uniformizer_pow(snf.exponents[i]) } else { o.zero() };
            assert_eq!(d[(i, j)], expect, "entry {i},{j}");
        }
    }
    // det = 3*(2*3 - 4*27) - 6*(1*3) + 9*27 = -306 - 18 + 243 = -81
    assert_eq!(det_valuation(&o, &m), Some(4));
}

#[test]
fn presentation_examples() {
    let o = Dvr::new(5).unwrap();
    let empty = Matrix::zeros(&o, 0, 2);
    assert_eq!(module_from_presentation(&o, &empty), FgOModule::free(2));
    let single = OMatrix::from_i64_rows(&o, 1, &[&[125]]);
    assert_eq!(module_from_presentation(&o, &single), FgOModule::new(0, vec![3]));
    let diag = OMatrix::from_i64_rows(&o, 2, &[&[625, 0], &[0, 5]]);
    let m = module_from_presentation(&o, &diag);
    assert_eq!(m.torsion_exponents, vec![1, 4]);
    assert_eq!(m.length(), 5);
}

#[test]
fn map_cokernel_examples() {
    let o = Dvr::new(3).unwrap();
    let mult = OModuleMap::free(&o, OMatrix::from_i64_rows(&o, 1, &[&[27]]));
    assert_eq!(map_cokernel(&o, &mult).unwrap(), FgOModule::new(0, vec![3]));
    let id = OModuleMap::free(&o, OMatrix::identity(&o, 3));
    assert!(map_cokernel(&o, &id).unwrap().is_zero());
    // -p^max on O, as in a fiber-product congruence map with exponents (1, 4, 2)
    let fp = OModuleMap::free(&o, OMatrix::from_i64_rows(&o, 1, &[&[-81]]));
    assert_eq!(map_cokernel(&o, &fp).unwrap(), FgOModule::new(0, vec![4]));
    // O/9 -> O/3 by 1 is well defined, O/3 -> O/9 by 1 is not
    let ok = OModuleMap {
        source_relations: OMatrix::from_i64_rows(&o, 1, &[&[9]]),
        target_relations: OMatrix::from_i64_rows(&o, 1, &[&[3]]),
        matrix: OMatrix::identity(&o, 1),
    };
    assert!(map_cokernel(&o, &ok).unwrap().is_zero());
    let bad = OModuleMap {
        source_relations: OMatrix::from_i64_rows(&o, 1, &[&[3]]),
        target_relations: OMatrix::from_i64_rows(&o, 1, &[&[9]]),
        matrix: OMatrix::identity(&o, 1),
    };
    assert!(matches!(map_cokernel(&o, &bad), Err(crate::CmodError::IllFormedMap(_))));
}

#[test]
fn det_valuation_examples() {
    let o = Dvr::new(2).unwrap();
    assert_eq!(det_valuation(&o, &OMatrix::identity(&o, 4)), Some(0));
    assert_eq!(det_valuation(&o, &OMatrix::from_i64_rows(&o, 1, &[&[32]])), Some(5));
    assert_eq!(det_valuation(&o, &OMatrix::from_i64_rows(&o, 2, &[&[2, 1], &[0, 4]])), Some(3));
    assert_eq!(det_valuation(&o, &OMatrix::from_i64_rows(&o, 2, &[&[2, 4], &[1, 2]])), None);
}

#[test]
fn truncated_ring_kernel() {
    let r = ZpN::new(3, 4).unwrap();
    // 9 v = 0 mod 81 has solutions 9 O
    let m = Matrix::from_rows(1, vec![vec![9u128]]);
    let gens = kernel_generators_mod(&r, &m, 4);
    assert_eq!(gens, vec![vec![9u128]]);
    assert_eq!(r.div_exact(&18, &6), 3);
    let inv = r.div_exact(&1, &2);
    assert_eq!(r.mul(&inv, &2), 1);
}

#[test]
fn truncated_ring_wide_modulus() {
    let r = ZpN::new(5, 40).unwrap();
    let a = r.from_i64(-7);
    let inv = r.div_exact(&1, &a);
    assert_eq!(r.mul(&inv, &a), 1);
    assert_eq!(r.valuation(&r.uniformizer_pow(39)), Some(39));
}

fn small_matrix(n: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-20i64..20, n * n)
}

proptest! {
    #[test]
    fn snf_invariant_under_unimodular_ops(entries in small_matrix(3), a in -5i64..5, b in -5i64..5, i in 0usize..3, j in 0usize..3) {
        let o = Dvr::new(3).unwrap();
        let m = Matrix::from_fn(3, 3, |r, c| o.from_int(entries[r * 3 + c]));
        // elementary operations with determinant 1
        let mut e1 = OMatrix::identity(&o, 3);
        if i != j { e1[(i, j)] = o.from_int(a); }
        let mut e2 = OMatrix::identity(&o, 3);
        if i != (j + 1) % 3 { e2[(j, (j + 1) % 3)] = o.from_int(b); }
        let moved = e1.mul(&o, &m).mul(&o, &e2);
        let s1 = smith_normal_form(&o, &m, SnfOptions::NONE).exponents;
        let s2 = smith_normal_form(&o, &moved, SnfOptions::NONE).exponents;
        prop_assert_eq!(&s1, &s2);
        prop_assert_eq!(module_from_presentation(&o, &m), module_from_presentation(&o, &moved));
    }

    #[test]
    fn det_valuation_is_sum_of_pivots(entries in small_matrix(3)) {
        let o = Dvr::new(2).unwrap();
        let m = Matrix::from_fn(3, 3, |r, c| o.from_int(entries[r * 3 + c]));
        let det = entries[0] * (entries[4] * entries[8] - entries[5] * entries[7])
            - entries[1] * (entries[3] * entries[8] - entries[5] * entries[6])
            + entries[2] * (entries[3] * entries[7] - entries[4] * entries[6]);
        let expect = if det == 0 { None } else { Some(det.trailing_zeros()) };
        prop_assert_eq!(det_valuation(&o, &m), expect);
        let snf = smith_normal_form(&o, &m, SnfOptions::NONE);
        if snf.rank() == 3 {
            prop_assert_eq!(Some(snf.exponents.iter().sum::<u32>()), expect);
            prop_assert!(snf.exponents.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn valuation_is_multiplicative(a in -1000i64..1000, b in -1000i64..1000, d in 1i64..50) {
        let o = Dvr::new(5).unwrap();
        prop_assume!(d % 5 != 0);
        let x = o.from_rational(&q(a, d)).unwrap();
        let y = o.from_int(b);
        let xy = o.mul(&x, &y);
        let expect = match (x.valuation(), y.valuation()) {
            (Some(u), Some(v)) => Some(u + v),
            _ => None,
        };
        prop_assert_eq!(xy.valuation(), expect);
        prop_assert_eq!(o.to_rational(&xy), q(a, d) * q(b, 1));
    }

    #[test]
    fn truncated_division_inverts_multiplication(a in 0u128..6561, b in 1u128..6561) {
        let r = ZpN::new(3, 8).unwrap();
        let prod = r.mul(&a, &b);
        if let (Some(vp), Some(vb)) = (r.valuation(&prod), r.valuation(&b)) {
            prop_assume!(vp >= vb);
            let quo = r.div_exact(&prod, &b);
            prop_assert_eq!(r.mul(&quo, &b), prod);
        }
    }
}
