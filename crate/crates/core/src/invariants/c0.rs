use crate::dvr::{kernel_basis, module_from_presentation, rank, Dvr, FgOModule, Matrix, OMatrix};
use crate::error::{CmodError, Result};
use crate::poly::{lambda_component_dim, FiberModule};

/// The congruence data of a module over an algebra in C_O(0).
#[derive(Clone, Debug)]
pub struct C0Data {
    /// M_0[𝔭] as columns.
    pub kernel: OMatrix,
    /// A basis of Hom_A(M_0, O) as rows.
    pub functionals: OMatrix,
    /// The map M_0[𝔭] → tf(M_0/𝔭M_0) = O^k'; its columns are the images.
    pub congruence_map: OMatrix,
    pub psi: FgOModule,
    pub eta_valuation: Option<u32>,
    pub rank_lambda: usize,
}

fn stacked(ring: &Dvr, s: usize, mats: impl Iterator<Item = OMatrix>) -> OMatrix {
    let mut out = Matrix::zeros(ring, 0, s);
    for m in mats {
        out = out.vstack(&m);
    }
    out
}

fn columns(ring: &Dvr, rows: usize, cols: Vec<Vec<crate::dvr::DvrScalar>>) -> OMatrix {
    let mut m = Matrix::zeros(ring, rows, cols.len());
    for (j, c) in cols.into_iter().enumerate() {
        for (i, x) in c.into_iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    m
}

/// Ψ, η and rank_λ for M_0 over A_0 in codimension zero. Every fiber
/// variable lies in 𝔭 and acts by zero on O.
pub fn c0_invariants(ring: &Dvr, m0: &FiberModule) -> Result<C0Data> {
    let s = m0.rank;
    let joint = stacked(ring, s, m0.actions.iter().cloned());
    let kernel = if m0.actions.is_empty() { Matrix::identity(ring, s) } else { columns(ring, s, kernel_basis(ring, &joint)) };
    let dual = stacked(ring, s, m0.actions.iter().map(|x| x.transpose()));
    let functionals =
        if m0.actions.is_empty() { Matrix::identity(ring, s) } else { columns(ring, s, kernel_basis(ring, &dual)).transpose() };
    let k = kernel.cols();
    let k_dual = functionals.rows();
    if k != k_dual {
        return Err(CmodError::NotInCategory(format!("M_0[p] has rank {k} but Hom(M_0, O) has rank {k_dual}")));
    }
    let congruence_map = functionals.mul(ring, &kernel);
    if rank(ring, &congruence_map) != k {
        return Err(CmodError::NotInCategory("the map from M_0[p] to M_0/pM_0 is not injective".into()));
    }
    let psi = module_from_presentation(ring, &congruence_map.transpose());
    let eta_valuation = congruence_map.min_valuation(ring);
    let rank_lambda = lambda_component_dim(ring, m0);
    Ok(C0Data { kernel, functionals, congruence_map, psi, eta_valuation, rank_lambda })
}

/// Whether the congruence map has full column rank over E.
pub fn injective(ring: &Dvr, d: &C0Data) -> bool {
    rank(ring, &d.congruence_map) == d.congruence_map.cols() && d.congruence_map.cols() == d.kernel.cols()
}
