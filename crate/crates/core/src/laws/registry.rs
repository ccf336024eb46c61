use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CmodError;
use crate::invariants::{
    c0_invariants, congruence_module, cotangent_module, defect_decomposition, deform, ext1_truncated, freeness_check, injective,
    invariance_check, iso_criteria_check, phi_lengths, same_phi, surjection_monotonicity, wiles_defect, InvariantReport, IsoHypothesis,
    IsoVerdict,
};
use crate::poly::{membership_check, parse_poly, LambdaModule, Poly, TruncationContext};

use super::gen::{projection_modules, random_regular, CiSpec, FiberProductSpec, Generated};

pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_SEED: u64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LawId {
    L1,
    L2,
    L3,
    L4,
    L5,
    L6,
    L7,
    L8,
    L9,
    L10,
    L11,
    L12,
}

impl LawId {
    pub const ALL: [LawId; 12] = [
        LawId::L1,
        LawId::L2,
        LawId::L3,
        LawId::L4,
        LawId::L5,
        LawId::L6,
        LawId::L7,
        LawId::L8,
        LawId::L9,
        LawId::L10,
        LawId::L11,
        LawId::L12,
    ];

    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn from_number(n: usize) -> Option<LawId> {
        (1..=12).contains(&n).then(|| LawId::ALL[n - 1])
    }

    pub fn description(self) -> &'static str {
        match self {
            LawId::L1 => "membership, finite cotangent torsion and torsion Psi agree",
            LawId::L2 => "Phi = 0, Psi(A) = 0 and regularity agree",
            LawId::L3 => "the congruence map at the fiber is injective",
            LawId::L4 => "eta <= Psi <= rank*eta, with equality at rank one",
            LawId::L5 => "Psi is unchanged by restriction along a surjection",
            LawId::L6 => "Psi(A)^rank surjects onto Psi(M)",
            LawId::L7 => "the freeness length test holds on split modules",
            LawId::L8 => "the isomorphism criterion respects its hypotheses",
            LawId::L9 => "deformation changes lengths by the orders and keeps delta",
            LawId::L10 => "the defect formula delta(M) = rank*delta(A) + ker",
            LawId::L11 => "delta >= 0, zero on complete intersections, positive on fiber products",
            LawId::L12 => "lambda-descent identities for eta and Phi",
        }
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}", self.number())
    }
}

impl std::str::FromStr for LawId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.trim()
            .strip_prefix(['L', 'l'])
            .and_then(|n| n.parse().ok())
            .and_then(LawId::from_number)
            .ok_or_else(|| format!("unknown law `{}`", s.trim()))
    }
}

/// Parses `L1-L12`, `L3,L9`, `all`, or combinations separated by commas.
pub fn parse_law_list(spec: &str) -> Result<Vec<LawId>, String> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if part.eq_ignore_ascii_case("all") {
            out.extend(LawId::ALL);
        } else if let Some((a, b)) = part.split_once('-') {
            let (a, b): (LawId, LawId) = (a.parse()?, b.parse()?);
            if a > b {
                return Err(format!("empty law range `{part}`"));
            }
            out.extend(LawId::ALL.iter().copied().filter(|l| *l >= a && *l <= b));
        } else {
            out.push(part.parse()?);
        }
    }
    if out.is_empty() {
        return Err("no laws given".into());
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub sample: usize,
    pub input: String,
    pub reason: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LawStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawResult {
    pub law: LawId,
    pub samples: usize,
    pub failures: Vec<Failure>,
    pub status: LawStatus,
    pub seed: u64,
}

impl LawResult {
    pub fn passed(&self) -> bool {
        self.status == LawStatus::Pass
    }
}

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: CmodError) -> String {
    e.to_string()
}

fn report(g: &Generated, m: &LambdaModule) -> Result<InvariantReport, String> {
    congruence_module(g.algebra(), &g.structure, m).map_err(err)
}

fn generated(text: String) -> Result<Generated, String> {
    Generated::from_text(text).map_err(err)
}

/// A corpus member, either regular, a complete intersection or a fiber
/// product.
enum Member {
    Regular(String),
    Ci(CiSpec),
    FiberProduct(FiberProductSpec),
}

impl Member {
    fn random(rng: &mut ChaCha8Rng) -> Member {
        match rng.gen_range(0..3) {
            0 => Member::Regular(random_regular(rng)),
            1 => {
                let c = rng.gen_range(0..=2);
                let size = rng.gen_range(0..=2);
                Member::Ci(CiSpec::random(rng, c, size))
            }
            _ => Member::FiberProduct(FiberProductSpec::random(rng, 4, 6)),
        }
    }

    fn text(&self) -> String {
        match self {
            Member::Regular(t) => t.clone(),
            Member::Ci(s) => s.text(),
            Member::FiberProduct(s) => s.text(),
        }
    }

    /// Values by which the projection characters act, when c = 0.
    fn projection_values(&self) -> Option<Vec<String>> {
        match self {
            Member::Ci(s) if s.c == 0 && !s.factors.is_empty() => Some(s.factors.iter().map(|f| format!("{}^{}", s.p, f.a)).collect()),
            Member::FiberProduct(s) => Some(s.exponents.iter().map(|m| format!("{}^{m}", s.p)).collect()),
            _ => None,
        }
    }
}

/// A, A ⊕ A, the prime ideal when c ≤ 1, and projection characters.
fn modules(member: &Member, g: &Generated) -> Result<Vec<(String, LambdaModule)>, String> {
    let a = g.regular_module();
    let mut out = vec![("A".to_string(), a.clone()), ("A+A".to_string(), a.direct_sum(&a).map_err(err)?)];
    if g.structure.codimension() <= 1 && g.structure.rank() > 1 {
        out.push(("p".into(), LambdaModule::prime_ideal(&g.structure).map_err(err)?));
    }
    if let Some(values) = member.projection_values() {
        for (name, w) in projection_modules(g, &values).map_err(err)? {
            out.push((format!("A+{name}"), a.direct_sum(&w).map_err(err)?));
            out.push((name, w));
        }
    }
    Ok(out)
}

fn for_each_module(member: &Member, g: &Generated, mut f: impl FnMut(&str, &InvariantReport, &InvariantReport) -> Check) -> Check {
    let ra = report(g, &g.regular_module())?;
    for (name, m) in modules(member, g)? {
        let rm = report(g, &m)?;
        f(&name, &ra, &rm).map_err(|e| format!("module {name}: {e}"))?;
    }
    Ok(())
}

fn l1(rng: &mut ChaCha8Rng) -> (String, Check) {
    if rng.gen_bool(0.2) {
        // O[y]/(y²) is O-flat but its cotangent space has a free summand.
        let p = super::gen::PRIMES[rng.gen_range(0..3)];
        let text = format!("p={p}; fiber y; rel y^2\n[lambda-structure]\nbasis 1, y\nmult y*y = [0, 0]\n");
        let check = generated(text.clone()).and_then(|g| {
            let member = membership_check(g.algebra(), &g.structure);
            let psi = report(&g, &g.regular_module());
            ensure(matches!(member, Err(CmodError::NotInCategory(_))), || format!("membership accepted: {member:?}"))?;
            ensure(psi.is_err(), || "Psi computed outside the category".into())
        });
        return (text, check);
    }
    let member = Member::random(rng);
    let text = member.text();
    let check = generated(text.clone()).and_then(|g| {
        let c = membership_check(g.algebra(), &g.structure).map_err(err)?;
        let cot = cotangent_module(g.algebra());
        ensure(cot.free_rank == c, || format!("cotangent free rank {} for c = {c}", cot.free_rank))?;
        for_each_module(&member, &g, |_, ra, rm| {
            ensure(ra.rank_lambda == 1, || format!("rank of A at lambda is {}", ra.rank_lambda))?;
            ensure(rm.psi.as_ref().is_none_or(|p| p.free_rank == 0), || "Psi has a free part".into())
        })
    });
    (text, check)
}

fn l2(rng: &mut ChaCha8Rng) -> (String, Check) {
    let member = Member::random(rng);
    let text = member.text();
    let check = generated(text.clone()).and_then(|g| {
        let r = report(&g, &g.regular_module())?;
        let regular = g.algebra().is_regular();
        ensure((r.phi_length == 0) == regular && (r.psi_length == 0) == regular, || {
            format!("regular = {regular}, Phi = {}, Psi = {}", r.phi_length, r.psi_length)
        })
    });
    (text, check)
}

fn l3(rng: &mut ChaCha8Rng) -> (String, Check) {
    let member = Member::random(rng);
    let text = member.text();
    let check = generated(text.clone()).and_then(|g| {
        let ring = g.algebra().ring();
        for (name, m) in modules(&member, &g)? {
            let data = c0_invariants(ring, &m.fiber(ring)).map_err(err)?;
            ensure(injective(ring, &data), || format!("module {name}: congruence map not injective"))?;
        }
        Ok(())
    });
    (text, check)
}

fn l4(rng: &mut ChaCha8Rng) -> (String, Check) {
    let member = Member::random(rng);
    let text = member.text();
    let check = generated(text.clone()).and_then(|g| {
        for_each_module(&member, &g, |_, _, rm| {
            ensure(rm.pairing_bounds_hold(), || format!("eta {:?}, Psi {}, rank {}", rm.eta_valuation, rm.psi_length, rm.rank_lambda))
        })
    });
    (text, check)
}

/// A ↠ B by killing the last fiber variable.
fn surjection_pair(rng: &mut ChaCha8Rng) -> (String, String, usize) {
    loop {
        if rng.gen_bool(0.5) {
            let s = FiberProductSpec::random(rng, 4, 6);
            if let Some(b) = s.drop_last() {
                return (s.text(), b.text(), s.exponents.len());
            }
        } else {
            let c = rng.gen_range(0..=1);
            let s = {
                let size = rng.gen_range(1..=2);
                CiSpec::random(rng, c, size)
            };
            let b = s.drop_last().expect("nonempty");
            return (s.text(), b.text(), s.factors.len());
        }
    }
}

fn kill_last(a: &Generated, b: &Generated, n: usize) -> Result<Vec<Poly>, String> {
    let names = b.algebra().names();
    let fiber = a.algebra().fiber_names();
    (0..n).map(|j| if j + 1 == n { Ok(Poly::zero(names.len())) } else { parse_poly(&fiber[j], &names) }).collect()
}

fn l5(rng: &mut ChaCha8Rng) -> (String, Check) {
    let (ta, tb, n) = surjection_pair(rng);
    let input = format!("{ta}----\n{tb}");
    let check = (|| {
        let (ga, gb) = (generated(ta)?, generated(tb)?);
        let images = kill_last(&ga, &gb, n)?;
        let mut targets = vec![("A'", gb.regular_module())];
        if gb.structure.codimension() <= 1 && gb.structure.rank() > 1 {
            targets.push(("p'", LambdaModule::prime_ideal(&gb.structure).map_err(err)?));
        }
        for (name, m) in targets {
            let v = invariance_check(ga.algebra(), &ga.structure, gb.algebra(), &gb.structure, &images, &m).map_err(err)?;
            ensure(v.equal, || format!("{name}: Psi {} over A, {} over B", v.over_a.psi_length, v.over_b.psi_length))?;
            let (identity, monotone) = surjection_monotonicity(&v.over_a, &v.over_b);
            ensure(identity && monotone, || format!("{name}: defects {} over A, {} over B", v.over_a.defect, v.over_b.defect))?;
            let equal_defects = v.over_a.defect == v.over_b.defect;
            ensure(v.over_a.rank_lambda == 0 || equal_defects == same_phi(&v.over_a.phi, &v.over_b.phi), || {
                format!("{name}: equal defects {equal_defects} but Phi {:?} vs {:?}", v.over_a.phi, v.over_b.phi)
            })?;
        }
        Ok(())
    })();
    (input, check)
}

fn l6(rng: &mut ChaCha8Rng) -> (String, Check) {
    let member = Member::random(rng);
    let text = member.text();
    let check = generated(text.clone())
        .and_then(|g| for_each_module(&member, &g, |_, ra, rm| defect_decomposition(ra, rm).map(|_| ()).map_err(err)));
    (text, check)
}

fn l7(rng: &mut ChaCha8Rng) -> (String, Check) {
    let member = if rng.gen_bool(0.5) {
        Member::FiberProduct(FiberProductSpec::random(rng, 4, 6))
    } else {
        Member::Ci({
            let size = rng.gen_range(1..=2);
            CiSpec::random(rng, 0, size)
        })
    };
    let text = member.text();
    let mu = rng.gen_range(0..=2usize);
    let pick: u32 = rng.gen();
    let check = generated(text.clone()).and_then(|g| {
        let values = member.projection_values().expect("c = 0 member");
        let chars = projection_modules(&g, &values).map_err(err)?;
        let a = g.regular_module();
        let mut m: Option<LambdaModule> = None;
        for _ in 0..mu {
            m = Some(match m {
                None => a.clone(),
                Some(x) => x.direct_sum(&a).map_err(err)?,
            });
        }
        for (i, (_, w)) in chars.iter().enumerate() {
            if pick >> i & 1 == 1 || (m.is_none() && i + 1 == chars.len()) {
                m = Some(match m {
                    None => w.clone(),
                    Some(x) => x.direct_sum(w).map_err(err)?,
                });
            }
        }
        let m = m.expect("nonempty");
        let ra = report(&g, &a)?;
        let rm = report(&g, &m)?;
        let v = freeness_check(true, &ra, &rm);
        ensure(v.certified && v.mu == mu, || format!("A^{mu} + W: certified {}, mu {}", v.certified, v.mu))
    });
    (format!("{text}# A^{mu} plus characters {pick:b}\n"), check)
}

fn l8(rng: &mut ChaCha8Rng) -> (String, Check) {
    let (ta, tb, _) = surjection_pair(rng);
    let input = format!("{ta}----\n{tb}");
    let check = (|| {
        let (ga, gb) = (generated(ta)?, generated(tb)?);
        let ra = report(&ga, &ga.regular_module())?;
        let rb = report(&gb, &gb.regular_module())?;
        let iso = |x, y, h| iso_criteria_check(x, y, h).map_err(err);
        let ci = |b_ci| Some(IsoHypothesis::CompleteIntersection { b_ci });
        let gor = |a_gorenstein, b_cm| Some(IsoHypothesis::GorensteinCm { a_gorenstein, b_cm });
        ensure(iso(&ra, &ra, gor(true, true))? == IsoVerdict::Certified, || "identity not certified".into())?;
        ensure(matches!(iso_criteria_check(&ra, &rb, None), Err(CmodError::HypothesisUntagged(_))), || "untagged accepted".into())?;
        ensure(iso(&ra, &rb, gor(false, true))? == IsoVerdict::HypothesisNotMet, || "Gorenstein gate ignored".into())?;
        ensure(iso(&ra, &rb, ci(false))? == IsoVerdict::HypothesisNotMet, || "complete intersection gate ignored".into())?;
        // A ↠ B kills a nonzero element, so it is never an isomorphism.
        ensure(iso(&ra, &rb, ci(true))? == IsoVerdict::NotCertified, || "proper quotient certified by Phi".into())
    })();
    (input, check)
}

fn l9(rng: &mut ChaCha8Rng) -> (String, Check) {
    let c = rng.gen_range(1..=2);
    let spec = {
        let size = rng.gen_range(1..=2);
        CiSpec::random(rng, c, size)
    };
    let tnames = spec.lambda_names();
    let xnames = spec.fiber_names();
    // Two multiples p^k t_1, p^l t_2 with k, l > 0 share the factor p and
    // are not a regular sequence, so only the first element may carry one.
    let element = |rng: &mut ChaCha8Rng, i: usize| -> (String, u32) {
        let k = if i == 0 { rng.gen_range(0..=3) } else { 0 };
        if rng.gen_bool(0.5) {
            (format!("{}^{k}*{}", spec.p, tnames[i]), k)
        } else {
            let j = rng.gen_range(0..xnames.len());
            (format!("{} - {}^{}*{}", tnames[i], spec.p, k.max(1), xnames[j]), 0)
        }
    };
    let elems: Vec<(String, u32)> = if c == 2 && rng.gen_bool(0.3) {
        vec![(tnames[rng.gen_range(0..2)].clone(), 0)]
    } else {
        (0..c).map(|i| element(rng, i)).collect()
    };
    let double = c == 1 && rng.gen_bool(0.3);
    let text = spec.text();
    let input = format!("{text}# deform by {:?}{}\n", elems.iter().map(|e| &e.0).collect::<Vec<_>>(), if double { " on A+A" } else { "" });
    let check = generated(text).and_then(|g| {
        let names = g.algebra().names();
        let fs = elems.iter().map(|(e, _)| parse_poly(e, &names)).collect::<Result<Vec<_>, _>>()?;
        let mut m = g.regular_module();
        if double {
            m = m.direct_sum(&m).map_err(err)?;
        }
        let step = deform(g.algebra(), &g.structure, &m, &fs, &TruncationContext::default()).map_err(err)?;
        let expected: Vec<u32> = elems.iter().map(|e| e.1).collect();
        ensure(step.orders == expected, || format!("orders {:?}, expected {expected:?}", step.orders))?;
        ensure(step.holds(), || {
            format!(
                "Phi {}->{}, Psi {}->{}, delta {}->{}",
                step.before.phi_length,
                step.after.phi_length,
                step.before.psi_length,
                step.after.psi_length,
                step.before.defect,
                step.after.defect
            )
        })
    });
    (input, check)
}

fn l10(rng: &mut ChaCha8Rng) -> (String, Check) {
    let member = Member::random(rng);
    let text = member.text();
    let check = generated(text.clone()).and_then(|g| {
        for_each_module(&member, &g, |_, ra, rm| {
            let d = defect_decomposition(ra, rm).map_err(err)?;
            ensure(d.delta_m == rm.defect && rm.defect == wiles_defect(rm), || format!("delta {} vs formula {}", rm.defect, d.delta_m))
        })
    });
    (text, check)
}

fn l11(rng: &mut ChaCha8Rng) -> (String, Check) {
    let member = Member::random(rng);
    let text = member.text();
    let check = generated(text.clone()).and_then(|g| {
        let ra = report(&g, &g.regular_module())?;
        ensure(ra.defect >= 0, || format!("negative defect {}", ra.defect))?;
        match &member {
            Member::Regular(_) | Member::Ci(_) => {
                ensure(ra.defect == 0, || format!("complete intersection with defect {}", ra.defect))?;
                for_each_module(&member, &g, |name, _, rm| {
                    let split = name.split('+').all(|s| s == "A" || s.starts_with('O'));
                    ensure(!split || rm.defect == 0, || format!("defect {}", rm.defect))
                })
            }
            Member::FiberProduct(s) => {
                ensure((ra.defect > 0) == (s.exponents.len() >= 2), || format!("defect {} for r = {}", ra.defect, s.exponents.len()))
            }
        }
    });
    (text, check)
}

fn l12(rng: &mut ChaCha8Rng) -> (String, Check) {
    let (text, is_regular) = if rng.gen_bool(0.4) {
        let p = super::gen::PRIMES[rng.gen_range(0..3)];
        let t = if rng.gen_bool(0.5) {
            super::gen::lambda_text(p, rng.gen_range(1..=2))
        } else {
            super::gen::twisted_text(p, rng.gen_range(1..=4))
        };
        (t, true)
    } else {
        let c = rng.gen_range(1..=2);
        (
            {
                let size = rng.gen_range(0..=2);
                CiSpec::random(rng, c, size)
            }
            .text(),
            false,
        )
    };
    let with_ext1 = rng.gen_bool(0.25);
    let check = generated(text.clone()).and_then(|g| {
        let a = g.algebra();
        let m = g.regular_module();
        let r = report(&g, &m)?;
        let coker = r.iota_coker.ok_or("no iota cokernel on a descent report")?;
        let fiber = r.fiber.as_ref().ok_or("no fiber report")?;
        let (phi0, phi) = phi_lengths(a).map_err(err)?;
        ensure(phi0 == phi + coker, || format!("Phi_0 {phi0}, Phi {phi}, coker {coker}"))?;
        ensure(cotangent_module(a).free_rank == a.codimension(), || "cotangent rank differs from c".into())?;
        ensure(fiber.eta_valuation == r.eta_valuation.map(|e| e + coker), || {
            format!("eta_0 {:?}, eta {:?}", fiber.eta_valuation, r.eta_valuation)
        })?;
        if is_regular {
            ensure(r.eta_valuation == Some(0) && fiber.eta_valuation == Some(coker), || "eta of a regular algebra is not a unit".into())?;
        }
        if with_ext1 && a.codimension() == 1 {
            let e = ext1_truncated(a, &g.structure, &m, &TruncationContext::default()).map_err(err)?;
            ensure(e.psi_length == r.psi_length && e.eta_valuation == r.eta_valuation, || {
                format!("Ext1 gives Psi {} eta {:?}, descent Psi {} eta {:?}", e.psi_length, e.eta_valuation, r.psi_length, r.eta_valuation)
            })?;
        }
        Ok(())
    });
    (text, check)
}

fn sampler(law: LawId) -> fn(&mut ChaCha8Rng) -> (String, Check) {
    match law {
        LawId::L1 => l1,
        LawId::L2 => l2,
        LawId::L3 => l3,
        LawId::L4 => l4,
        LawId::L5 => l5,
        LawId::L6 => l6,
        LawId::L7 => l7,
        LawId::L8 => l8,
        LawId::L9 => l9,
        LawId::L10 => l10,
        LawId::L11 => l11,
        LawId::L12 => l12,
    }
}

/// Runs one law on `samples` seeded members, in parallel; failures are
/// listed in sample order.
pub fn run_law(law: LawId, seed: u64, samples: usize) -> LawResult {
    let f = sampler(law);
    let failures: Vec<Failure> = (0..samples)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((law.number() as u64) << 32) | i as u64);
            let (input, check) = f(&mut rng);
            check.err().map(|reason| Failure { sample: i, input, reason })
        })
        .collect();
    let status = if failures.is_empty() { LawStatus::Pass } else { LawStatus::Fail };
    LawResult { law, samples, failures, status, seed }
}

pub fn run_laws(laws: &[LawId], seed: u64, samples: usize) -> Vec<LawResult> {
    laws.iter().map(|&l| run_law(l, seed, samples)).collect()
}
