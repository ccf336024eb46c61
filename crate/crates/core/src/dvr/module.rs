use serde::{Deserialize, Serialize};

use super::matrix::{Matrix, OMatrix};
use super::ring::LocalRing;
use super::scalar::Dvr;
use super::snf::{in_row_span, smith_normal_form, SnfOptions};
use crate::error::{CmodError, Result};

/// A finitely generated O-module in normal form `O^free_rank ⊕ ⊕ O/p^e_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FgOModule {
    pub free_rank: usize,
    /// Ascending, each at least 1.
    pub torsion_exponents: Vec<u32>,
}

impl FgOModule {
    pub fn new(free_rank: usize, mut torsion_exponents: Vec<u32>) -> Self {
        torsion_exponents.retain(|&e| e > 0);
        torsion_exponents.sort_unstable();
        FgOModule { free_rank, torsion_exponents }
    }

    pub fn zero() -> Self {
        FgOModule::default()
    }

    pub fn free(rank: usize) -> Self {
        FgOModule::new(rank, vec![])
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion_exponents.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.free_rank
    }

    /// Length of the torsion part.
    pub fn length(&self) -> u32 {
        self.torsion_exponents.iter().sum()
    }

    pub fn is_torsion(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_cyclic(&self) -> bool {
        self.free_rank + self.torsion_exponents.len() <= 1
    }

    pub fn torsion_part(&self) -> FgOModule {
        FgOModule::new(0, self.torsion_exponents.clone())
    }

    pub fn torsion_free_quotient(&self) -> FgOModule {
        FgOModule::free(self.free_rank)
    }

    pub fn direct_sum(&self, other: &FgOModule) -> FgOModule {
        let mut t = self.torsion_exponents.clone();
        t.extend(&other.torsion_exponents);
        FgOModule::new(self.free_rank + other.free_rank, t)
    }
}

impl std::fmt::Display for FgOModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "O".to_string() } else { format!("O^{}", self.free_rank) });
        }
        for e in &self.torsion_exponents {
            parts.push(format!("O/p^{e}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Cokernel of `O^r -> O^g` where the rows of `rels` are the relations among
/// `g` generators.
pub fn module_from_presentation<R: LocalRing>(ring: &R, rels: &Matrix<R::Elem>) -> FgOModule {
    let snf = smith_normal_form(ring, rels, SnfOptions::NONE);
    FgOModule::new(rels.cols() - snf.rank(), snf.exponents)
}

/// Valuation of the determinant; `None` when singular.
pub fn det_valuation<R: LocalRing>(ring: &R, m: &Matrix<R::Elem>) -> Option<u32> {
    assert_eq!(m.rows(), m.cols(), "det_valuation needs a square matrix");
    let snf = smith_normal_form(ring, m, SnfOptions::NONE);
    (snf.rank() == m.cols()).then(|| snf.exponents.iter().sum())
}

/// A homomorphism between presented O-modules. Row `i` of `matrix` is the
/// image of source generator `i` in target generators.
#[derive(Clone, Debug)]
pub struct OModuleMap {
    pub source_relations: OMatrix,
    pub target_relations: OMatrix,
    pub matrix: OMatrix,
}

impl OModuleMap {
    /// Map between free modules.
    pub fn free(ring: &Dvr, matrix: OMatrix) -> Self {
        OModuleMap {
            source_relations: Matrix::zeros(ring, 0, matrix.rows()),
            target_relations: Matrix::zeros(ring, 0, matrix.cols()),
            matrix,
        }
    }

    pub fn check_well_defined(&self, ring: &Dvr) -> Result<()> {
        let (a, b) = (self.matrix.rows(), self.matrix.cols());
        if self.source_relations.cols() != a || self.target_relations.cols() != b {
            return Err(CmodError::IllFormedMap("dimension mismatch".into()));
        }
        let images = self.source_relations.mul(ring, &self.matrix);
        for i in 0..images.rows() {
            if !in_row_span(ring, &self.target_relations, images.row(i)) {
                return Err(CmodError::IllFormedMap(format!("source relation {i} is not sent into the target relations")));
            }
        }
        Ok(())
    }
}

pub fn map_cokernel(ring: &Dvr, f: &OModuleMap) -> Result<FgOModule> {
    f.check_well_defined(ring)?;
    Ok(module_from_presentation(ring, &f.target_relations.vstack(&f.matrix)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_length() {
        let m = FgOModule::new(1, vec![3, 1, 0]);
        assert_eq!(m.torsion_exponents, vec![1, 3]);
        assert_eq!(m.length(), 4);
        assert_eq!(m.to_string(), "O + O/p^1 + O/p^3");
        assert!(FgOModule::new(0, vec![]).is_zero());
    }
}
