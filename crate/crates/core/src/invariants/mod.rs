//! The invariants Φ, Ψ, η, ord, rank_λ and δ, and the formulas relating them.

mod c0;
mod checks;
mod cotangent;
mod deform;
mod descent;
mod ext1;
mod report;
mod trunc;

pub use c0::{c0_invariants, injective, C0Data};
pub use checks::{
    defect_decomposition, freeness_check, invariance_check, iso_criteria_check, same_phi, surjection_monotonicity, DefectDecomposition,
    FreenessVerdict, InvarianceVerdict, IsoHypothesis, IsoVerdict,
};
pub use cotangent::{cotangent_functionals, cotangent_module, iota_vectors, order_of, residue_values, wedge_iota_star};
pub use deform::{certify_regular, deform, quotient_level, residue_orders, DeformationStep};
pub use descent::{c0_report, congruence_module, fiber_presentation, koszul_report, phi_lengths, wiles_defect};
pub use ext1::{ext1_level, ext1_truncated, Ext1Outcome, PrecisionLevel, MAX_ESCALATIONS};
pub use report::{ComputationPath, InvariantReport};

#[cfg(test)]
mod tests;
