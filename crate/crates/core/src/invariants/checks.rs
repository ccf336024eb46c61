use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dvr::{smith_normal_form, FgOModule, Matrix, SnfOptions};
use crate::error::{CmodError, Result};
use crate::poly::{eval_at_matrices, to_scalar, AugmentedAlgebra, LambdaModule, LambdaStructure, Poly, PolyMatrix};

use super::descent::congruence_module;
use super::report::InvariantReport;

/// δ(M) split as rank·δ(A) plus the length of the kernel of
/// Ψ(A)^rank → Ψ(M).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectDecomposition {
    pub delta_a: i64,
    pub ker_a_length: i64,
    pub delta_m: i64,
}

pub fn defect_decomposition(report_a: &InvariantReport, report_m: &InvariantReport) -> Result<DefectDecomposition> {
    let r = report_m.rank_lambda as i64;
    let ker = r * report_a.psi_length as i64 - report_m.psi_length as i64;
    if ker < 0 {
        return Err(CmodError::NegativeKernel(format!(
            "rank {r} times length Psi(A) = {} is below length Psi(M) = {}",
            report_a.psi_length, report_m.psi_length
        )));
    }
    Ok(DefectDecomposition { delta_a: report_a.defect, ker_a_length: ker, delta_m: r * report_a.defect + ker })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessVerdict {
    pub certified: bool,
    pub mu: usize,
    /// The Gorenstein / maximal Cohen–Macaulay flag as asserted by the caller.
    pub hypotheses_asserted: bool,
}

/// Length test for a free summand A^μ with μ = rank_λ(M).
pub fn freeness_check(gorenstein: bool, report_a: &InvariantReport, report_m: &InvariantReport) -> FreenessVerdict {
    let mu = report_m.rank_lambda;
    FreenessVerdict {
        certified: gorenstein && report_m.psi_length as u64 == mu as u64 * report_a.psi_length as u64,
        mu,
        hypotheses_asserted: gorenstein,
    }
}

/// Which hypothesis of the isomorphism criterion the caller claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsoHypothesis {
    /// A Gorenstein, B Cohen–Macaulay: compare Ψ.
    GorensteinCm { a_gorenstein: bool, b_cm: bool },
    /// B complete intersection: compare Φ.
    CompleteIntersection { b_ci: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsoVerdict {
    Certified,
    NotCertified,
    HypothesisNotMet,
}

/// Decides whether a surjection A ↠ B compatible with λ is an isomorphism,
/// from the reports of A and B (each as a module over itself).
pub fn iso_criteria_check(report_a: &InvariantReport, report_b: &InvariantReport, hypothesis: Option<IsoHypothesis>) -> Result<IsoVerdict> {
    let h =
        hypothesis.ok_or_else(|| CmodError::HypothesisUntagged("tag the Gorenstein/CM or the complete intersection hypothesis".into()))?;
    if report_a.codimension != report_b.codimension {
        return Err(CmodError::InconsistentStructure("the two algebras have different codimension".into()));
    }
    let verdict = match h {
        IsoHypothesis::GorensteinCm { a_gorenstein, b_cm } => {
            if !(a_gorenstein && b_cm) {
                IsoVerdict::HypothesisNotMet
            } else if report_a.psi_length == report_b.psi_length {
                IsoVerdict::Certified
            } else {
                IsoVerdict::NotCertified
            }
        }
        IsoHypothesis::CompleteIntersection { b_ci } => {
            if !b_ci {
                IsoVerdict::HypothesisNotMet
            } else if report_a.phi_length == report_b.phi_length {
                IsoVerdict::Certified
            } else {
                IsoVerdict::NotCertified
            }
        }
    };
    Ok(verdict)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceVerdict {
    pub over_a: InvariantReport,
    pub over_b: InvariantReport,
    pub equal: bool,
}

fn same_psi(x: &InvariantReport, y: &InvariantReport) -> bool {
    match (&x.psi, &y.psi) {
        (Some(a), Some(b)) => a == b,
        _ => x.psi_length == y.psi_length,
    }
}

/// Checks that φ: A → B, given by the images of A's fiber variables as
/// polynomials in B's variables, is a surjection fixing the lambda
/// variables.
fn check_surjection(a: &AugmentedAlgebra, b: &AugmentedAlgebra, images: &[Poly]) -> Result<()> {
    let ring = a.ring();
    let names_ok = a.codimension() == b.codimension()
        && a.lambda_vars().iter().zip(b.lambda_vars()).all(|(x, y)| x.name == y.name && x.image == y.image);
    if !names_ok || images.len() != a.fiber_count() {
        return Err(CmodError::IllFormedMap("the map must fix the lambda variables and give one image per fiber variable".into()));
    }
    let nb = b.nvars();
    let mut rows = Matrix::zeros(ring, 0, nb);
    for l in 0..a.codimension() {
        rows.push_row((0..nb).map(|j| if j == l { crate::dvr::LocalRing::one(ring) } else { crate::dvr::LocalRing::zero(ring) }).collect());
    }
    for f in images {
        if f.nvars() != nb {
            return Err(CmodError::IllFormedMap("image polynomial is not in the target's variables".into()));
        }
        if !f.constant_term().is_zero() {
            return Err(CmodError::IllFormedMap(format!("image {} has a constant term", f.display(&b.names()))));
        }
        let row: std::result::Result<Vec<_>, String> = (0..nb).map(|j| to_scalar(ring, &f.linear_coeff(j))).collect();
        rows.push_row(row.map_err(CmodError::IllFormedMap)?);
    }
    // Surjective on tangent spaces mod p iff every Smith exponent of the
    // linear part is 0.
    let snf = smith_normal_form(ring, &rows, SnfOptions::NONE);
    if snf.exponents.len() < nb || snf.exponents.iter().take(nb).any(|&e| e > 0) {
        return Err(CmodError::IllFormedMap("the map is not surjective on cotangent spaces".into()));
    }
    Ok(())
}

/// Computes Ψ of M' over B and over A through φ, and compares them.
pub fn invariance_check(
    a: &AugmentedAlgebra,
    l_a: &LambdaStructure,
    b: &AugmentedAlgebra,
    l_b: &LambdaStructure,
    images: &[Poly],
    m_prime: &LambdaModule,
) -> Result<InvarianceVerdict> {
    check_surjection(a, b, images)?;
    let over_b = congruence_module(b, l_b, m_prime)?;
    let vars = m_prime.variable_actions(b);
    let deg = m_prime.degree();
    // Images have no constant term, so over B = O every action is zero.
    let actions = images
        .iter()
        .map(|f| if vars.is_empty() { PolyMatrix::zeros(m_prime.rank(), m_prime.rank(), 0) } else { eval_at_matrices(f, &vars, Some(deg)) })
        .collect();
    let m_a = LambdaModule::new(a.codimension(), m_prime.rank(), actions, deg)?;
    m_a.validate_for(a).map_err(|e| CmodError::IllFormedMap(format!("the map does not respect the relations: {e}")))?;
    let over_a = congruence_module(a, l_a, &m_a)?;
    let equal = same_psi(&over_a, &over_b);
    Ok(InvarianceVerdict { over_a, over_b, equal })
}

/// For a surjection A ↠ B and one module M over B, the defects differ by
/// rank·(length Φ(A) − length Φ(B)). Returns that identity and whether
/// δ over A is at least δ over B.
pub fn surjection_monotonicity(over_a: &InvariantReport, over_b: &InvariantReport) -> (bool, bool) {
    let r = over_a.rank_lambda as i64;
    let identity = over_a.defect - over_b.defect == r * (over_a.phi_length as i64 - over_b.phi_length as i64);
    (identity, over_a.defect >= over_b.defect)
}

/// True when the Φ normal forms agree.
pub fn same_phi(x: &FgOModule, y: &FgOModule) -> bool {
    x == y
}
