//! Example generators with closed-form oracles, and the registry of laws
//! L1..L12 run over seeded corpora.

mod gen;
mod registry;

pub use gen::{
    gen_ci, gen_fiber_product, lambda_text, projection_modules, random_regular, twisted_text, CiFactor, CiSpec, FiberProductOracle,
    FiberProductSpec, Generated, PRIMES, STRUCTURE_DEGREE,
};
pub use registry::{parse_law_list, run_law, run_laws, Failure, LawId, LawResult, LawStatus, DEFAULT_SAMPLES, DEFAULT_SEED};

#[cfg(test)]
mod tests;
