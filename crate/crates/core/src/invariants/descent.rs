use crate::dvr::Dvr;
use crate::error::{CmodError, Result};
use crate::poly::{koszul_congruence, membership_check, AugmentedAlgebra, LambdaModule, LambdaStructure, Poly};

use super::c0::c0_invariants;
use super::cotangent::{cotangent_module, wedge_iota_star};
use super::report::{ComputationPath, InvariantReport};

pub(crate) const FLATNESS: &str = "flatness of the lambda-structure is taken from the supplied basis";

/// A_0 = A/(t)A as a presentation over the fiber variables.
pub fn fiber_presentation(a: &AugmentedAlgebra) -> Result<AugmentedAlgebra> {
    let c = a.codimension();
    let k = a.fiber_count();
    let images: Vec<Poly> = (0..a.nvars()).map(|v| if v < c { Poly::zero(k) } else { Poly::var(k, v - c) }).collect();
    let mut rels: Vec<Poly> = a.relations().iter().map(|f| f.compose(&images, k)).collect();
    for l in a.lambda_vars() {
        if let Some(g) = &l.image {
            rels.push(g.compose(&images, k));
        }
    }
    AugmentedAlgebra::new_unchecked(a.ring().clone(), Vec::new(), a.fiber_names().to_vec(), rels)
}

/// Φ, Ψ, η, rank_λ and δ of a module over an algebra in C_O(0).
pub fn c0_report(ring: &Dvr, a0: &AugmentedAlgebra, m: &LambdaModule) -> Result<InvariantReport> {
    let data = c0_invariants(ring, &m.fiber(ring))?;
    let phi = cotangent_module(a0).torsion_part();
    let mut r = InvariantReport::new(phi, data.psi.length(), data.eta_valuation, data.rank_lambda, ComputationPath::C0Direct, 0);
    r.psi = Some(data.psi);
    Ok(r)
}

/// Ψ_λ(M) and η_λ(M) via the fiber at t = 0 and the determinant of ι*.
pub fn congruence_module(a: &AugmentedAlgebra, l: &LambdaStructure, m: &LambdaModule) -> Result<InvariantReport> {
    membership_check(a, l)?;
    m.validate_for(a)?;
    let ring = a.ring();
    let c = a.codimension();
    if c == 0 {
        let mut r = c0_report(ring, a, m)?;
        r.assumptions.push(FLATNESS.into());
        return Ok(r);
    }
    let a0 = fiber_presentation(a)?;
    let fiber = c0_report(ring, &a0, m)?;
    let (_, coker) = wedge_iota_star(a)?;
    let mu = fiber.rank_lambda as i64;
    let psi = fiber.psi_length as i64 - mu * coker as i64;
    if psi < 0 {
        return Err(CmodError::NegativeLength(format!("Psi_0 = {} minus {mu}*{coker} is negative", fiber.psi_length)));
    }
    let eta = match fiber.eta_valuation {
        Some(e) if (e as i64) < coker as i64 => {
            return Err(CmodError::NegativeLength(format!("eta_0 = {e} is below the iota cokernel length {coker}")));
        }
        Some(e) => Some(e - coker),
        None => None,
    };
    let phi = cotangent_module(a).torsion_part();
    let mut r = InvariantReport::new(phi, psi as u32, eta, fiber.rank_lambda, ComputationPath::LambdaDescent, c);
    r.iota_coker = Some(coker);
    r.fiber = Some(Box::new(fiber));
    r.assumptions.push(FLATNESS.into());
    Ok(r)
}

/// δ_λ(M) = rank_λ(M)·length Φ − length Ψ.
pub fn wiles_defect(r: &InvariantReport) -> i64 {
    r.rank_lambda as i64 * r.phi_length as i64 - r.psi_length as i64
}

/// The report for M = A^μ over a regular A, from Koszul cochains.
pub fn koszul_report(a: &AugmentedAlgebra, mu: usize) -> Result<InvariantReport> {
    let psi = koszul_congruence(a, mu)?;
    let phi = cotangent_module(a).torsion_part();
    let eta = if mu == 0 { None } else { Some(0) };
    let mut r = InvariantReport::new(phi, psi.length(), eta, mu, ComputationPath::KoszulRegular, a.codimension());
    r.psi = Some(psi);
    Ok(r)
}

/// Lengths of Φ(A_0) and Φ(A), for the cotangent comparison.
pub fn phi_lengths(a: &AugmentedAlgebra) -> Result<(u32, u32)> {
    let a0 = fiber_presentation(a)?;
    Ok((cotangent_module(&a0).torsion_part().length(), cotangent_module(a).torsion_part().length()))
}
