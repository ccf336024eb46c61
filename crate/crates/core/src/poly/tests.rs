use proptest::prelude::*;

use super::*;
use crate::dvr::{Dvr, FgOModule, OMatrix};
use crate::error::CmodError;

const DOUBLE_FP: &str = "p=5; fiber x,y; rel x^2-5x; rel y^2-5y; rel x*y
[lambda-structure]
basis 1, x, y
mult x*x = [0, 5, 0]
mult y*y = [0, 0, 5]
";

fn bmx(m: u32) -> String {
    format!(
        "p=3; lambda t; fiber x; rel x^2 - 3^{m}*x
[lambda-structure]
basis 1, x
mult x*x = [0, 3^{m}]
"
    )
}

#[test]
fn parse_examples() {
    let a = parse_presentation("p=3; lambda t; fiber x; rel x^2 - 3^2*x").unwrap();
    assert_eq!((a.codimension(), a.fiber_count(), a.relations().len()), (1, 1, 1));
    assert!(matches!(parse_presentation("p=2; fiber x; rel x^2 - x"), Err(CmodError::BadAugmentationForm(_))));
    assert!(matches!(parse_presentation("p=2; fiber x; rel x^2 + 1"), Err(CmodError::BadAugmentationForm(_))));
    assert!(matches!(parse_presentation("p=4; fiber x"), Err(CmodError::Parse { .. })));
    assert!(matches!(parse_presentation("p=3; fiber x; rel x^2 - z"), Err(CmodError::Parse { .. })));
    assert!(matches!(parse_presentation("p=3; fiber x; rel x^2 - x/3"), Err(CmodError::Parse { .. })));
}

#[test]
fn triple_fiber_product_relations_hold_in_o_cubed() {
    // x = (0,5,0), y = (0,0,5) inside O^3, checked componentwise.
    let a = parse_presentation("p=5; fiber x,y; rel x^2-5x; rel y^2-5y; rel x*y").unwrap();
    let points = [(0i64, 0i64), (5, 0), (0, 5)];
    for f in a.relations() {
        for &(x, y) in &points {
            let v = f.compose(&[Poly::from_int(0, x), Poly::from_int(0, y)], 0);
            assert!(v.is_zero());
        }
    }
}

#[test]
fn implicit_multiplication_and_precedence() {
    let names = vec!["x".to_string(), "y".to_string()];
    let a = parse_poly("5x^2y - (x+y)^2 + 3/2", &names).unwrap();
    let b = parse_poly("5*x^2*y - x^2 - 2*x*y - y^2 + 3/2", &names).unwrap();
    assert_eq!(a, b);
    assert_eq!(parse_poly("-x^2", &names).unwrap(), parse_poly("0 - x*x", &names).unwrap());
    assert_eq!(parse_poly("2^3", &names).unwrap(), Poly::from_int(2, 8));
}

#[test]
fn linear_part_examples() {
    let ring = Dvr::new(3).unwrap();
    let a = parse_presentation("p=3; lambda t").unwrap();
    let u = a.linear_part_matrix();
    assert_eq!((u.rows(), u.cols()), (0, 1));
    let a = parse_presentation("p=3; lambda t; fiber x; rel x^2 - 9*x").unwrap();
    assert_eq!(a.linear_part_matrix(), OMatrix::from_i64_rows(&ring, 2, &[&[0, -9]]));
    let ring = Dvr::new(5).unwrap();
    let a = parse_presentation("p=5; fiber x,y; rel x^2-5x; rel y^2-5y; rel x*y").unwrap();
    assert_eq!(a.linear_part_matrix(), OMatrix::from_i64_rows(&ring, 2, &[&[-5, 0], &[0, -5], &[0, 0]]));
}

#[test]
fn fiber_algebra_examples() {
    let a = parse_presentation("p=3; lambda t").unwrap();
    let l = LambdaStructure::for_regular(&a, 8).unwrap();
    assert_eq!(l.fiber_algebra().unwrap().rank(), 1);

    let inp = parse_input(&bmx(2)).unwrap();
    let fa = inp.structure.unwrap().fiber_algebra().unwrap();
    let ring = Dvr::new(3).unwrap();
    assert_eq!(fa.product(1, 1), &[ring.from_int(0), ring.from_int(9)]);

    // O[[s]] over O[[t]] via t -> 9s + s^2: at t = 0, s^2 = -9s.
    let a = parse_presentation("p=3; lambda t -> 9*s + s^2; fiber s").unwrap();
    let l = LambdaStructure::for_regular(&a, 8).unwrap();
    let fa = l.fiber_algebra().unwrap();
    assert_eq!(fa.product(1, 1), &[ring.from_int(0), ring.from_int(-9)]);
    assert!(consistency_check(&a, &l, &TruncationContext::default()).passed);
}

#[test]
fn broken_tables_are_rejected() {
    let bad = "p=3; fiber x,y; rel x^2; rel y^2; rel x*y
[lambda-structure]
basis 1, x, y
mult x*y = [0, 1, 0]
mult y*x = [0, 0, 1]
";
    assert!(matches!(parse_input(bad), Err(CmodError::InconsistentStructure(_))));
    let nonassoc = "p=3; fiber x; rel x^3
[lambda-structure]
basis 1, x, y
mult x*x = [0, 0, 1]
mult x*y = [1, 0, 0]
mult y*y = [0, 0, 0]
";
    assert!(matches!(parse_input(nonassoc), Err(CmodError::InconsistentStructure(_))));
}

#[test]
fn consistency_examples() {
    let ctx = TruncationContext::default();
    let inp = parse_input(&bmx(2)).unwrap();
    let l = inp.structure.unwrap();
    assert!(consistency_check(&inp.algebra, &l, &ctx).passed);

    let corrupted = bmx(2).replace("mult x*x = [0, 3^2]", "mult x*x = [0, 3^3]");
    let inp2 = parse_input(&corrupted).unwrap();
    let r = consistency_check(&inp2.algebra, inp2.structure.as_ref().unwrap(), &ctx);
    assert!(!r.passed);
    assert_eq!(r.witness.as_deref(), Some("-9*x + x^2"));

    let extra = parse_presentation("p=3; lambda t; fiber x; rel x^2 - 9*x; rel t*x").unwrap();
    assert!(!consistency_check(&extra, &l, &ctx).passed);
}

#[test]
fn membership_examples() {
    let inp = parse_input(&bmx(2)).unwrap();
    assert_eq!(membership_check(&inp.algebra, inp.structure.as_ref().unwrap()).unwrap(), 1);

    let nil = parse_input("p=3; fiber x; rel x^2\n[lambda-structure]\nbasis 1, x\n").unwrap();
    assert!(matches!(membership_check(&nil.algebra, nil.structure.as_ref().unwrap()), Err(CmodError::NotInCategory(_))));

    for c in 0..=3 {
        let names: Vec<String> = (1..=c).map(|i| format!("t{i}")).collect();
        let a = parse_presentation(&format!("p=2; lambda {}", names.join(" "))).unwrap();
        let l = LambdaStructure::for_regular(&a, 6).unwrap();
        assert_eq!(membership_check(&a, &l).unwrap(), c);
    }
}

#[test]
fn fiber_of_member_is_member_at_codimension_zero() {
    // A = O[[t]][x]/(x^2 - 9x) has fiber O[x]/(x^2 - 9x).
    let inp = parse_input(&bmx(2)).unwrap();
    let fiber = parse_input("p=3; fiber x; rel x^2 - 9*x\n[lambda-structure]\nbasis 1, x\nmult x*x = [0, 9]\n").unwrap();
    membership_check(&inp.algebra, inp.structure.as_ref().unwrap()).unwrap();
    assert_eq!(membership_check(&fiber.algebra, fiber.structure.as_ref().unwrap()).unwrap(), 0);
}

#[test]
fn modules_in_blocks() {
    let text = format!(
        "{DOUBLE_FP}[module A]\nregular\n[module P]\nideal\n[module O2]\ncharacter = [0, 5]\n[module S]\nsum A, O2\n[module X]\nrank 1\nact x = [[5]]\nact y = [[0]]\n"
    );
    let inp = parse_input(&text).unwrap();
    let ranks: Vec<usize> = inp.modules.iter().map(|m| m.module.rank()).collect();
    assert_eq!(ranks, vec![3, 2, 1, 4, 1]);
    let bad = format!("{DOUBLE_FP}[module X]\nrank 1\nact x = [[5]]\nact y = [[5]]\n");
    assert!(matches!(parse_input(&bad), Err(CmodError::InconsistentStructure(_))));
}

#[test]
fn ideal_module_for_codimension_one() {
    let inp = parse_input(&format!("{}[module P]\nideal\n", bmx(1))).unwrap();
    let p = &inp.modules[0].module;
    assert_eq!(p.rank(), 2);
    p.validate_for(&inp.algebra).unwrap();
}

#[test]
fn display_roundtrip() {
    let names = vec!["t".to_string(), "x".to_string()];
    let f = parse_poly("x^2 - 3^4*x + 2*t*x - t", &names).unwrap();
    let shown = f.display(&names).to_string();
    assert_eq!(parse_poly(&shown, &names).unwrap(), f);
}

fn arb_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u32..3, 0u32..3), -20i64..20), 0..6).prop_map(|ts| {
        let mut p = Poly::zero(2);
        for ((a, b), c) in ts {
            p.add_term(vec![a, b], num_rational::BigRational::from_integer(c.into()));
        }
        p
    })
}

proptest! {
    #[test]
    fn no_zero_coefficients_are_stored(a in arb_poly(), b in arb_poly()) {
        for p in [a.add(&b), a.sub(&b), a.mul(&b), a.sub(&a)] {
            prop_assert!(p.terms().all(|(_, c)| !num_traits::Zero::is_zero(c)));
        }
    }

    #[test]
    fn printing_then_parsing_is_identity(a in arb_poly()) {
        let names = vec!["t".to_string(), "x".to_string()];
        prop_assert_eq!(parse_poly(&a.display(&names).to_string(), &names).unwrap(), a);
    }

    #[test]
    fn truncated_product_agrees_below_cutoff(a in arb_poly(), b in arb_poly(), d in 0u32..5) {
        prop_assert_eq!(a.mul_trunc(&b, Some(d)), a.mul(&b).truncate(d));
    }

    #[test]
    fn linear_part_entries_are_never_units(m in 1u32..5, k in 1u32..5) {
        let a = parse_presentation(&format!("p=2; lambda t; fiber x,y; rel x^2 - 2^{m}*x; rel y^2 - 2^{k}*y - 2*t; rel x*y")).unwrap();
        prop_assert!(a.linear_part_matrix().entries().iter().all(|e| e.valuation() != Some(0)));
    }
}

#[test]
fn fiber_dimension_of_regular_module() {
    let ring = Dvr::new(5).unwrap();
    let inp = parse_input(DOUBLE_FP).unwrap();
    let m = LambdaModule::regular(inp.structure.as_ref().unwrap()).fiber(&ring);
    assert_eq!(lambda_component_dim(&ring, &m), 1);
    let _ = FgOModule::zero();
}
