use crate::dvr::{det_valuation, kernel_basis, module_from_presentation, DvrScalar, FgOModule, LocalRing, Matrix, OMatrix};
use crate::error::{CmodError, Result};
use crate::poly::{AugmentedAlgebra, Poly};

/// 𝔭/𝔭² as the cokernel of the linear-part matrix.
pub fn cotangent_module(a: &AugmentedAlgebra) -> FgOModule {
    module_from_presentation(a.ring(), &a.linear_part_matrix())
}

/// A basis of Hom_O(𝔭/𝔭², O), as vectors against the presentation
/// variables.
pub fn cotangent_functionals(a: &AugmentedAlgebra) -> Vec<Vec<DvrScalar>> {
    let u = a.linear_part_matrix();
    if u.rows() == 0 {
        let n = u.cols();
        return (0..n).map(|i| (0..n).map(|j| if i == j { a.ring().one() } else { a.ring().zero() }).collect()).collect();
    }
    kernel_basis(a.ring(), &u)
}

fn pair(a: &AugmentedAlgebra, alpha: &[DvrScalar], v: &[DvrScalar]) -> DvrScalar {
    let ring = a.ring();
    alpha.iter().zip(v).fold(ring.zero(), |acc, (x, y)| ring.add(&acc, &ring.mul(x, y)))
}

/// Valuations of α(f) for each basis functional α.
pub fn residue_values(a: &AugmentedAlgebra, f: &Poly) -> Result<Vec<DvrScalar>> {
    let row = a.linear_row(f)?;
    Ok(cotangent_functionals(a).iter().map(|al| pair(a, al, &row)).collect())
}

/// ord(f): the valuation of the ideal {α(f)}.
pub fn order_of(a: &AugmentedAlgebra, f: &Poly) -> Result<u32> {
    let vals = residue_values(a, f)?;
    vals.iter()
        .filter_map(|v| v.valuation())
        .min()
        .ok_or_else(|| CmodError::TorsionResidue(format!("{} has torsion residue in p/p^2", f.display(&a.names()))))
}

/// ι(t_j) in 𝔭/𝔭², against the presentation variables.
pub fn iota_vectors(a: &AugmentedAlgebra) -> Vec<Vec<DvrScalar>> {
    let nv = a.nvars();
    (0..a.codimension()).map(|l| a.linear_row(&Poly::var(nv, l)).expect("lambda variables lie in the augmentation ideal")).collect()
}

/// Matrix of ι*: (𝔭/𝔭²)* → (𝔪/𝔪²)* with entries α_k(ι(t_j)), and the
/// length of its cokernel.
pub fn wedge_iota_star(a: &AugmentedAlgebra) -> Result<(OMatrix, u32)> {
    let ring = a.ring();
    let c = a.codimension();
    let alphas = cotangent_functionals(a);
    if alphas.len() != c {
        return Err(CmodError::NotIndependent(format!("cotangent module has free rank {}, expected {c}", alphas.len())));
    }
    let iota = iota_vectors(a);
    let m = Matrix::from_fn(c, c, |k, j| pair(a, &alphas[k], &iota[j]));
    let v =
        det_valuation(ring, &m).ok_or_else(|| CmodError::NotIndependent("the lambda variables have dependent residues in p/p^2".into()))?;
    Ok((m, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, parse_presentation};

    #[test]
    fn cotangent_examples() {
        let a = parse_presentation("p=3; lambda t1, t2").unwrap();
        assert_eq!(cotangent_module(&a), FgOModule::free(2));
        let a = parse_presentation("p=2; lambda t; fiber x; rel x^2 - 2^3*x").unwrap();
        assert_eq!(cotangent_module(&a), FgOModule::new(1, vec![3]));
        let a = parse_presentation("p=5; fiber x,y; rel x^2-5x; rel y^2-5y; rel x*y").unwrap();
        assert_eq!(cotangent_module(&a), FgOModule::new(0, vec![1, 1]));
    }

    #[test]
    fn order_examples() {
        let a = parse_presentation("p=3; lambda t; fiber x; rel x^2 - 9*x").unwrap();
        let f = |s: &str| parse_poly(s, &a.names()).unwrap();
        assert_eq!(order_of(&a, &f("t")).unwrap(), 0);
        assert_eq!(order_of(&a, &f("27*t")).unwrap(), 3);
        assert_eq!(order_of(&a, &f("t - 27*x")).unwrap(), 0);
        assert!(matches!(order_of(&a, &f("x")), Err(CmodError::TorsionResidue(_))));
    }

    #[test]
    fn iota_examples() {
        let a = parse_presentation("p=2; lambda t1, t2").unwrap();
        assert_eq!(wedge_iota_star(&a).unwrap().1, 0);
        let a = parse_presentation("p=3; lambda t -> 27*s + s^2; fiber s").unwrap();
        let (m, v) = wedge_iota_star(&a).unwrap();
        assert_eq!(v, 3);
        assert_eq!(m[(0, 0)].valuation(), Some(3));
        let a = parse_presentation("p=3; lambda t; fiber x; rel x^2 - 9*x").unwrap();
        assert_eq!(wedge_iota_star(&a).unwrap().1, 0);
    }
}
