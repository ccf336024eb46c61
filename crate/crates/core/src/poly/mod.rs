//! Presented augmented algebras, Λ-structures and their fibers at t = 0.

mod algebra;
mod category;
mod koszul;
mod lambda;
mod parse;
#[allow(clippy::module_inception)]
mod poly;

pub use algebra::{AugmentedAlgebra, LambdaVar};
pub use category::{lambda_component_dim, membership_check};
pub use koszul::{koszul_congruence, koszul_ext, KoszulModule};
pub use lambda::{
    consistency_check, ConsistencyReport, FiberAlgebra, FiberModule, LambdaElem, LambdaModule, LambdaStructure, TruncationContext,
};
pub use parse::{parse_input, parse_poly, parse_presentation, InputFile, ModuleBlock};
pub use poly::{eval_at_matrices, Monomial, Poly, PolyDisplay, PolyMatrix};

pub(crate) use poly::to_scalar;

#[cfg(test)]
mod tests;
