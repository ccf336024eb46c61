use super::*;
use crate::poly::{parse_input, InputFile, LambdaModule, LambdaStructure, Poly, TruncationContext};

fn load(text: &str) -> (InputFile, LambdaStructure) {
    let inp = parse_input(text).unwrap();
    let l = match &inp.structure {
        Some(l) => l.clone(),
        None => LambdaStructure::for_regular(&inp.algebra, 16).unwrap(),
    };
    (inp, l)
}

fn regular_report(text: &str) -> InvariantReport {
    let (inp, l) = load(text);
    congruence_module(&inp.algebra, &l, &LambdaModule::regular(&l)).unwrap()
}

fn bmx(p: u64, m: u32, c: usize) -> String {
    let lam = if c == 1 { "lambda t; " } else { "" };
    format!("p={p}; {lam}fiber x; rel x^2 - {p}^{m}*x\n[lambda-structure]\nbasis 1, x\nmult x*x = [0, {p}^{m}]\ntruncation 16\n")
}

const TRIPLE: &str = "p=5; fiber x,y; rel x^2-5x; rel y^2-5y; rel x*y
[lambda-structure]
basis 1, x, y
mult x*x = [0, 5, 0]
mult y*y = [0, 0, 5]
";

#[test]
fn c0_examples() {
    let r = regular_report("p=3");
    assert_eq!((r.psi_length, r.rank_lambda, r.defect), (0, 1, 0));
    for m in 1..4 {
        let r = regular_report(&bmx(3, m, 0));
        assert_eq!((r.phi_length, r.psi_length, r.defect, r.eta_valuation), (m, m, 0, Some(m)));
    }
    let r = regular_report(TRIPLE);
    assert_eq!((r.phi_length, r.psi_length, r.eta_valuation, r.rank_lambda, r.defect), (2, 1, Some(1), 1, 1));
}

#[test]
fn triple_fiber_product_kernel_is_x_plus_y_minus_p() {
    let (inp, l) = load(TRIPLE);
    let ring = inp.algebra.ring().clone();
    let d = c0_invariants(&ring, &LambdaModule::regular(&l).fiber(&ring)).unwrap();
    assert_eq!(d.kernel.cols(), 1);
    // Up to a unit the kernel generator is (-5, 1, 1) on the basis {1, x, y}.
    let k: Vec<_> = d.kernel.col(0);
    let u = ring.to_rational(&k[1]);
    let scaled: Vec<_> = k.iter().map(|x| ring.to_rational(x) / u.clone()).collect();
    let q = |n: i64| num_rational::BigRational::from_integer(n.into());
    assert_eq!(scaled, vec![q(-5), q(1), q(1)]);
    assert!(injective(&ring, &d));
}

#[test]
fn descent_examples() {
    let r = regular_report("p=2; lambda t1, t2");
    assert_eq!((r.psi_length, r.phi_length, r.eta_valuation), (0, 0, Some(0)));
    for m in 1..4 {
        let r = regular_report(&bmx(3, m, 1));
        assert_eq!(r.path, ComputationPath::LambdaDescent);
        assert_eq!((r.phi_length, r.psi_length, r.defect, r.iota_coker), (m, m, 0, Some(0)));
        assert_eq!(r.fiber.as_ref().unwrap().psi_length, m);
    }
    for k in 1..4 {
        let r = regular_report(&format!("p=3; lambda t -> 3^{k}*s + s^2; fiber s"));
        assert_eq!(r.fiber.as_ref().unwrap().psi_length, k);
        assert_eq!((r.iota_coker, r.psi_length, r.phi_length), (Some(k), 0, 0));
        let (phi0, phi) =
            phi_lengths(&crate::poly::parse_presentation(&format!("p=3; lambda t -> 3^{k}*s + s^2; fiber s")).unwrap()).unwrap();
        assert_eq!(phi0 - phi, k);
    }
}

#[test]
fn ext1_examples() {
    let ctx = TruncationContext::default();
    let (inp, l) = load("p=3; lambda t");
    let o = ext1_truncated(&inp.algebra, &l, &LambdaModule::regular(&l), &ctx).unwrap();
    assert!(o.stabilized);
    assert_eq!(o.psi_length, 0);
    for m in 1..4 {
        let (inp, l) = load(&bmx(2, m, 1));
        let o = ext1_truncated(&inp.algebra, &l, &LambdaModule::regular(&l), &ctx).unwrap();
        assert_eq!((o.psi_length, o.eta_valuation, o.stabilized), (m, Some(m), true));
    }
    let (inp, l) = load("p=5; lambda t -> 25*s + s^2; fiber s");
    let o = ext1_truncated(&inp.algebra, &l, &LambdaModule::regular(&l), &ctx).unwrap();
    assert_eq!((o.psi_length, o.stabilized), (0, true));
}

#[test]
fn koszul_path_examples() {
    for text in ["p=3; lambda t", "p=2; lambda t1, t2", "p=3; lambda t -> 9*s + s^2; fiber s"] {
        let inp = parse_input(text).unwrap();
        let r = koszul_report(&inp.algebra, 1).unwrap();
        assert_eq!((r.psi_length, r.phi_length, r.defect), (0, 0, 0));
    }
}

#[test]
fn pairing_bounds_on_examples() {
    for text in [TRIPLE.to_string(), bmx(5, 2, 1), bmx(2, 3, 0), "p=3; lambda t".into()] {
        assert!(regular_report(&text).pairing_bounds_hold());
    }
}

#[test]
fn report_roundtrips_through_json() {
    let r = regular_report(&bmx(3, 2, 1));
    let s = serde_json::to_string(&r).unwrap();
    let back: InvariantReport = serde_json::from_str(&s).unwrap();
    assert_eq!(back, r);
}

fn deform_text(text: &str, elems: &[&str]) -> crate::error::Result<DeformationStep> {
    let (inp, l) = load(text);
    let fs: Vec<_> = elems.iter().map(|e| crate::poly::parse_poly(e, &inp.algebra.names()).unwrap()).collect();
    deform(&inp.algebra, &l, &LambdaModule::regular(&l), &fs, &TruncationContext::default())
}

#[test]
fn deformation_examples() {
    let text = bmx(3, 2, 1);
    let s = deform_text(&text, &["t"]).unwrap();
    assert_eq!((s.orders.clone(), s.after.psi_length, s.after.phi_length), (vec![0], 2, 2));
    assert!(s.holds());

    for k in 1..4 {
        let s = deform_text(&text, &[&format!("3^{k}*t")]).unwrap();
        assert_eq!(s.orders, vec![k]);
        assert_eq!((s.after.phi_length, s.after.psi_length, s.after.defect), (2 + k, 2 + k, 0), "k={k}");
        assert!(s.holds());
    }
    let s = deform_text(&text, &["t - 9*x"]).unwrap();
    assert_eq!((s.orders.clone(), s.after.psi_length, s.after.phi_length), (vec![0], 2, 2));
    assert!(s.holds());

    assert!(matches!(deform_text(&text, &["x"]), Err(crate::error::CmodError::TorsionResidue(_))));
    assert!(matches!(deform_text("p=3; lambda t1, t2", &["t1", "3*t1"]), Err(crate::error::CmodError::DependentResidues(_))));
}

#[test]
fn two_variable_deformations() {
    let s = deform_text("p=2; lambda t1, t2", &["t1"]).unwrap();
    assert!(s.holds());
    assert_eq!(s.after.codimension, 1);
    let s = deform_text("p=2; lambda t1, t2", &["4*t1", "t2"]).unwrap();
    assert!(s.holds());
    assert_eq!(s.after.psi_length, 2);
}

#[test]
fn non_regular_sequence_is_rejected() {
    // (p t1, p t2) share the factor p, so they are not a regular sequence.
    let r = deform_text("p=2; lambda t1, t2", &["2*t1", "2*t2"]);
    assert!(matches!(r, Err(crate::error::CmodError::NotRegularElement(_))), "{r:?}");
}

#[test]
fn deformation_by_p_cubed_t() {
    let s = deform_text(&bmx(2, 2, 1), &["8*t"]).unwrap();
    assert_eq!((s.before.phi_length, s.before.psi_length), (2, 2));
    assert_eq!((s.after.phi_length, s.after.psi_length, s.after.defect), (5, 5, 0));
    assert!(!s.levels.is_empty());
}

#[test]
fn deformation_of_twisted_regular_algebra() {
    let s = deform_text("p=3; lambda t -> 3s + s^2; fiber s", &["s"]);
    let s = s.unwrap();
    assert_eq!(s.orders, vec![0]);
    assert!(s.holds(), "{:?} {:?}", s.before, s.after);
}

fn module_report(text: &str, name: &str) -> InvariantReport {
    let (inp, l) = load(text);
    let m = &inp.modules.iter().find(|b| b.name == name).unwrap().module;
    congruence_module(&inp.algebra, &l, m).unwrap()
}

#[test]
fn defect_decomposition_examples() {
    let text = format!("{}[module A]\nregular\n[module AA]\nsum A, A\n[module O2]\ncharacter = [3]\n[module S]\nsum A, O2\n", bmx(3, 1, 0));
    let ra = module_report(&text, "A");
    let d = defect_decomposition(&ra, &ra).unwrap();
    assert_eq!((d.ker_a_length, d.delta_m), (0, ra.defect));

    let raa = module_report(&text, "AA");
    let d = defect_decomposition(&ra, &raa).unwrap();
    assert_eq!((d.ker_a_length, d.delta_m), (0, 2 * ra.defect));

    let rs = module_report(&text, "S");
    assert_eq!((rs.psi_length, rs.rank_lambda), (1, 1));
    assert_eq!(defect_decomposition(&ra, &rs).unwrap().ker_a_length, 0);
    let f = freeness_check(true, &ra, &rs);
    assert!(f.certified);
    assert_eq!(f.mu, 1);
    assert!(freeness_check(true, &ra, &ra).certified);
}

#[test]
fn freeness_of_the_prime_ideal() {
    let text = format!("{}[module A]\nregular\n[module P]\nideal\n", bmx(3, 2, 0));
    let ra = module_report(&text, "A");
    let rp = module_report(&text, "P");
    // 𝔭 = O·x with x acting by 9, so 𝔭[𝔭] = 0 and Ψ(𝔭) = 0.
    assert_eq!((rp.psi_length, rp.rank_lambda), (0, 0));
    assert_eq!(defect_decomposition(&ra, &rp).unwrap().ker_a_length, 0);
    // 𝔭 is λ-torsion: μ = 0 and W = 𝔭.
    let f = freeness_check(true, &ra, &rp);
    assert_eq!((f.certified, f.mu), (true, 0));
}

#[test]
fn negative_kernel_is_an_error() {
    let text = format!("{}[module A]\nregular\n", bmx(3, 1, 0));
    let ra = module_report(&text, "A");
    let mut bigger = ra.clone();
    bigger.psi_length += 1;
    assert!(matches!(defect_decomposition(&ra, &bigger), Err(crate::error::CmodError::NegativeKernel(_))));
}

#[test]
fn iso_criteria_gating() {
    let ra = regular_report(&bmx(3, 2, 1));
    let tag = Some(IsoHypothesis::GorensteinCm { a_gorenstein: true, b_cm: true });
    assert_eq!(iso_criteria_check(&ra, &ra, tag).unwrap(), IsoVerdict::Certified);
    assert!(matches!(iso_criteria_check(&ra, &ra, None), Err(crate::error::CmodError::HypothesisUntagged(_))));

    // x^2 - 9x, 3 t x: the extra relation has zero linear part, so Φ agrees,
    // but the source is not a complete intersection.
    let rb = regular_report(&bmx(3, 1, 1));
    let ci = Some(IsoHypothesis::CompleteIntersection { b_ci: false });
    assert_eq!(iso_criteria_check(&ra, &ra, ci).unwrap(), IsoVerdict::HypothesisNotMet);
    assert_eq!(iso_criteria_check(&ra, &rb, tag).unwrap(), IsoVerdict::NotCertified);
    let r0 = regular_report(&bmx(3, 2, 0));
    assert!(iso_criteria_check(&ra, &r0, tag).is_err());
}

#[test]
fn invariance_of_domain_examples() {
    let text = format!("{}[module A]\nregular\n[module P]\nideal\n", bmx(5, 1, 0));
    let (inp_b, l_b) = load(&text);
    let (inp_a, l_a) = load(TRIPLE);
    let images = vec![crate::poly::parse_poly("x", &inp_b.algebra.names()).unwrap(), Poly::zero(1)];
    for block in &inp_b.modules {
        let v = invariance_check(&inp_a.algebra, &l_a, &inp_b.algebra, &l_b, &images, &block.module).unwrap();
        assert!(v.equal, "{}: {:?} vs {:?}", block.name, v.over_a, v.over_b);
        let (identity, monotone) = surjection_monotonicity(&v.over_a, &v.over_b);
        assert!(identity);
        assert!(monotone);
    }
    let v = invariance_check(&inp_a.algebra, &l_a, &inp_b.algebra, &l_b, &images, &inp_b.modules[0].module).unwrap();
    assert_eq!(v.over_b.psi_length, 1);

    let identity = vec![Poly::var(1, 0)];
    let v = invariance_check(&inp_b.algebra, &l_b, &inp_b.algebra, &l_b, &identity, &inp_b.modules[0].module).unwrap();
    assert!(v.equal && v.over_a == v.over_b);

    let not_onto = vec![crate::poly::parse_poly("5x", &inp_b.algebra.names()).unwrap(), Poly::zero(1)];
    let r = invariance_check(&inp_a.algebra, &l_a, &inp_b.algebra, &l_b, &not_onto, &inp_b.modules[0].module);
    assert!(matches!(r, Err(crate::error::CmodError::IllFormedMap(_))));
}
