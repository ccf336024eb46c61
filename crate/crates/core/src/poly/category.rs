use crate::dvr::{rank, Dvr, LocalRing, Matrix};
use crate::error::{CmodError, Result};
use crate::invariants::{cotangent_module, wedge_iota_star};

use super::algebra::AugmentedAlgebra;
use super::lambda::{FiberModule, LambdaModule, LambdaStructure};

/// E-dimension of the part of M_0 ⊗ E where every fiber variable acts
/// nilpotently.
pub fn lambda_component_dim(ring: &Dvr, m: &FiberModule) -> usize {
    let s = m.rank;
    if s == 0 {
        return 0;
    }
    let mut stack = Matrix::zeros(ring, 0, s);
    for x in &m.actions {
        stack = stack.vstack(&x.pow(ring, s as u32));
    }
    s - rank(ring, &stack)
}

/// Checks that (A, λ) lies in C_O(c) and returns c.
pub fn membership_check(a: &AugmentedAlgebra, l: &LambdaStructure) -> Result<usize> {
    let ring = a.ring();
    let c = a.codimension();
    l.variable_elements(a).map_err(|e| CmodError::NotInCategory(e.to_string()))?;
    l.fiber_algebra()?;
    let fiber = LambdaModule::regular(l).fiber(ring);
    let d = lambda_component_dim(ring, &fiber);
    if d != 1 {
        return Err(CmodError::NotInCategory(format!("the lambda-component of A_0 has dimension {d}, not 1")));
    }
    let u = a.linear_part_matrix();
    for (j, &v) in a.presentation_vars().iter().enumerate() {
        if v < c && (0..u.rows()).any(|i| !ring.is_zero(&u[(i, j)])) {
            return Err(CmodError::NotInCategory(format!("{} appears in the linear part of a relation", a.names()[v])));
        }
    }
    let cot = cotangent_module(a);
    if cot.free_rank != c {
        return Err(CmodError::NotInCategory(format!("cotangent module has free rank {}, expected {c}", cot.free_rank)));
    }
    wedge_iota_star(a).map_err(|e| CmodError::NotInCategory(e.to_string()))?;
    Ok(c)
}
