//! Exact computation of congruence modules, cotangent torsion and the Wiles
//! defect for augmented complete local algebras over Z_(p).

pub mod dvr;
pub mod error;
pub mod invariants;
pub mod laws;
pub mod poly;

pub use error::{CmodError, Result};
