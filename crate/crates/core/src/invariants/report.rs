use serde::{Deserialize, Serialize};

use crate::dvr::FgOModule;

/// How Ψ was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComputationPath {
    C0Direct,
    LambdaDescent,
    KoszulRegular,
    Ext1Truncated,
}

impl std::fmt::Display for ComputationPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ComputationPath::C0Direct => "C0Direct",
            ComputationPath::LambdaDescent => "LambdaDescent",
            ComputationPath::KoszulRegular => "KoszulRegular",
            ComputationPath::Ext1Truncated => "Ext1Truncated",
        };
        f.write_str(s)
    }
}

/// The invariants of one (A, λ, M).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub phi_length: u32,
    pub psi_length: u32,
    /// Valuation of a generator of η inside ∧^c(p/p²)^*; `None` when the
    /// pairing has zero image (rank_λ = 0).
    pub eta_valuation: Option<u32>,
    pub rank_lambda: usize,
    pub defect: i64,
    pub path: ComputationPath,
    pub codimension: usize,
    pub phi: FgOModule,
    /// Full normal form of Ψ when the path produces one.
    pub psi: Option<FgOModule>,
    /// Cokernel length of ∧^c ι*, on Λ-descent reports.
    pub iota_coker: Option<u32>,
    /// The report of M_0 over A_0 that the descent started from.
    pub fiber: Option<Box<InvariantReport>>,
    /// Assumptions the computation relied on but did not prove.
    pub assumptions: Vec<String>,
}

impl InvariantReport {
    pub(crate) fn new(
        phi: FgOModule,
        psi_length: u32,
        eta_valuation: Option<u32>,
        rank_lambda: usize,
        path: ComputationPath,
        codimension: usize,
    ) -> Self {
        let phi_length = phi.length();
        InvariantReport {
            phi_length,
            psi_length,
            eta_valuation,
            rank_lambda,
            defect: rank_lambda as i64 * phi_length as i64 - psi_length as i64,
            path,
            codimension,
            phi,
            psi: None,
            iota_coker: None,
            fiber: None,
            assumptions: Vec::new(),
        }
    }

    /// η ≤ Ψ ≤ rank·η, with equality of the first two when rank is 1.
    pub fn pairing_bounds_hold(&self) -> bool {
        match self.eta_valuation {
            None => self.rank_lambda == 0 && self.psi_length == 0,
            Some(eta) => {
                let r = self.rank_lambda as u64;
                let psi = self.psi_length as u64;
                let eta = eta as u64;
                eta <= psi && psi <= r * eta && (r != 1 || eta == psi)
            }
        }
    }
}
