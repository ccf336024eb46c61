//! Exact arithmetic over O = Z_(p) and the normal-form linear algebra that
//! classifies finitely generated O-modules.

mod matrix;
mod modular;
mod module;
mod ring;
mod scalar;
mod snf;

pub use matrix::{Matrix, OMatrix};
pub use modular::ZpN;
pub use module::{det_valuation, map_cokernel, module_from_presentation, FgOModule, OModuleMap};
pub use ring::LocalRing;
pub use scalar::{Dvr, DvrScalar};
pub use snf::{in_row_span, kernel_basis, kernel_generators_mod, rank, smith_normal_form, SmithForm, SnfOptions};

/// `ord(s)`; `None` is infinity.
pub fn valuation(s: &DvrScalar) -> Option<u32> {
    s.valuation()
}

#[cfg(test)]
mod tests;
