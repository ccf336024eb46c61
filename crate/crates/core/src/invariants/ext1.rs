use serde::{Deserialize, Serialize};

use crate::dvr::{kernel_generators_mod, LocalRing, Matrix, ZpN};
use crate::error::{CmodError, Result};
use crate::poly::{AugmentedAlgebra, LambdaModule, LambdaStructure, PolyMatrix, TruncationContext};

use super::c0::c0_invariants;
use super::cotangent::cotangent_functionals;
use super::trunc::{mod_cokernel, scalar_mod, ModMatrix, TruncSpace};

/// One precision level of the truncated Ext¹ computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionLevel {
    pub n: u32,
    pub d: u32,
    pub psi_length: u32,
    pub eta_valuation: Option<u32>,
    /// The image did not have finite index at this precision.
    pub saturated: bool,
}

/// Result of [`ext1_truncated`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ext1Outcome {
    pub psi_length: u32,
    pub eta_valuation: Option<u32>,
    pub stabilized: bool,
    pub levels: Vec<PrecisionLevel>,
}

pub const MAX_ESCALATIONS: usize = 3;

/// Ψ via Ext¹_A(O, M) = coker(M → Hom_A(𝔭, M)), solved in A/(p^N, t^D).
///
/// Hom_A(𝔭, M) is the set of Λ-linear φ on the Λ-basis of 𝔭 commuting
/// with every fiber variable. Its image in Hom(𝔭/𝔭², tf(M/𝔭M)) is read off
/// by evaluating at a presentation variable τ with α(τ) a unit.
pub fn ext1_level(a: &AugmentedAlgebra, l: &LambdaStructure, m: &LambdaModule, ctx: &TruncationContext) -> Result<PrecisionLevel> {
    if a.codimension() != 1 {
        return Err(CmodError::Unsupported("the truncated Ext^1 path needs c = 1".into()));
    }
    let ring = a.ring();
    let zp = ZpN::new(a.prime(), ctx.n)?;
    let d = ctx.d.min(l.degree());
    let sp = TruncSpace::new(1, d);
    let dl = sp.len();
    let s = m.rank();
    let basis = l.prime_basis()?;
    let r = basis.len();
    let width = r * s * dl;

    let mut rows: Vec<ModMatrix> = Vec::new();
    for (j, e) in l.embed().iter().enumerate() {
        let x = &m.actions()[j];
        for (i, g) in basis.iter().enumerate() {
            // X_j φ(g_i) − Σ_l c_l φ(g_l) = 0, where x_j g_i = Σ_l c_l g_l.
            let coords = l.prime_coordinates(&l.mul(e, g))?;
            let mut block = Matrix::zeros(&zp, s * dl, width);
            sp.place(&zp, ring, x, &mut block, 0, i * s, false);
            for (li, cl) in coords.iter().enumerate() {
                if !cl.is_zero() {
                    sp.place(&zp, ring, &PolyMatrix::scalar(s, cl), &mut block, 0, li * s, true);
                }
            }
            rows.push(block);
        }
    }
    let mut eqs = Matrix::zeros(&zp, 0, width);
    for b in rows {
        eqs = eqs.vstack(&b);
    }
    let sols = if eqs.rows() == 0 {
        (0..width).map(|k| (0..width).map(|i| if i == k { 1 } else { 0 }).collect()).collect()
    } else {
        kernel_generators_mod(&zp, &eqs, ctx.n)
    };

    let alpha = &cotangent_functionals(a)[0];
    let pres = a.presentation_vars();
    let tau = alpha
        .iter()
        .position(|x| ring.is_unit(x))
        .ok_or_else(|| CmodError::NotInCategory("no presentation variable has unit residue".into()))?;
    let tau_elem = &l.variable_elements(a)?[pres[tau]];
    let tau_coords = l.prime_coordinates(tau_elem)?;
    let tau0: Vec<u128> = tau_coords.iter().map(|p| scalar_mod(ring, &zp, &p.at_zero(ring).expect("integral"))).collect();

    let fib = c0_invariants(ring, &m.fiber(ring))?;
    let k = fib.functionals.rows();
    let func: Vec<Vec<u128>> = (0..k).map(|i| fib.functionals.row(i).iter().map(|x| scalar_mod(ring, &zp, x)).collect()).collect();
    let origin = sp.origin();
    let images: Vec<Vec<u128>> = sols
        .iter()
        .map(|v| {
            // φ(τ) at t = 0, then the functionals.
            let phi_tau: Vec<u128> = (0..s)
                .map(|comp| (0..r).fold(0u128, |acc, li| zp.add(&acc, &zp.mul(&tau0[li], &v[(li * s + comp) * dl + origin]))))
                .collect();
            func.iter().map(|f| f.iter().zip(&phi_tau).fold(0u128, |acc, (x, y)| zp.add(&acc, &zp.mul(x, y)))).collect()
        })
        .collect();
    let ck = mod_cokernel(ring, &zp, k, &images);
    Ok(PrecisionLevel { n: ctx.n, d, psi_length: ck.module.length(), eta_valuation: ck.min_valuation, saturated: ck.saturated })
}

/// Runs [`ext1_level`] at `ctx` and escalated precisions until two
/// successive levels agree.
pub fn ext1_truncated(a: &AugmentedAlgebra, l: &LambdaStructure, m: &LambdaModule, ctx: &TruncationContext) -> Result<Ext1Outcome> {
    let mut levels = vec![ext1_level(a, l, m, ctx)?];
    let mut cur = *ctx;
    for _ in 0..MAX_ESCALATIONS {
        cur = cur.escalate();
        let next = ext1_level(a, l, m, &cur)?;
        let prev = levels.last().unwrap();
        let agree = !prev.saturated && !next.saturated && prev.psi_length == next.psi_length && prev.eta_valuation == next.eta_valuation;
        levels.push(next);
        if agree {
            let last = levels.last().unwrap();
            return Ok(Ext1Outcome { psi_length: last.psi_length, eta_valuation: last.eta_valuation, stabilized: true, levels });
        }
    }
    Err(CmodError::PrecisionExhausted(format!(
        "truncated Ext^1 did not stabilize after {MAX_ESCALATIONS} escalations: {}",
        levels
            .iter()
            .map(|l| format!("(N={}, D={}) -> {}{}", l.n, l.d, l.psi_length, if l.saturated { "+" } else { "" }))
            .collect::<Vec<_>>()
            .join(", ")
    )))
}
