use num_traits::Zero;

use crate::dvr::{Dvr, LocalRing, Matrix, OMatrix};
use crate::error::{CmodError, Result};

use super::poly::{to_scalar, Poly};

/// A variable of Λ_c. With an image it is not a presentation variable of A:
/// the structure map sends it to `image`, a series in the presentation
/// variables.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaVar {
    pub name: String,
    pub image: Option<Poly>,
}

/// O[[t, x]]/(f_1..f_m) with augmentation sending every variable to 0.
///
/// Variables are indexed lambda first, then fiber. Relations are stored with
/// image variables already substituted, so they only mention presentation
/// variables.
#[derive(Clone, Debug)]
pub struct AugmentedAlgebra {
    ring: Dvr,
    lambda: Vec<LambdaVar>,
    fiber: Vec<String>,
    relations: Vec<Poly>,
}

impl AugmentedAlgebra {
    pub fn new(ring: Dvr, lambda: Vec<LambdaVar>, fiber: Vec<String>, relations: Vec<Poly>) -> Result<Self> {
        let a = Self::build(ring, lambda, fiber, relations)?;
        a.validate()?;
        Ok(a)
    }

    /// Skips the augmentation-form checks. Used for intermediate quotients
    /// whose relations may have unit linear terms.
    pub(crate) fn new_unchecked(ring: Dvr, lambda: Vec<LambdaVar>, fiber: Vec<String>, relations: Vec<Poly>) -> Result<Self> {
        Self::build(ring, lambda, fiber, relations)
    }

    fn build(ring: Dvr, lambda: Vec<LambdaVar>, fiber: Vec<String>, relations: Vec<Poly>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for n in lambda.iter().map(|l| &l.name).chain(fiber.iter()) {
            if !seen.insert(n.clone()) {
                return Err(CmodError::parse(0, format!("variable {n} declared twice")));
            }
        }
        let nv = lambda.len() + fiber.len();
        let mut a = AugmentedAlgebra { ring, lambda, fiber, relations: Vec::new() };
        for (l, v) in a.lambda.iter().enumerate() {
            if let Some(img) = &v.image {
                if img.nvars() != nv {
                    return Err(CmodError::parse(0, "image polynomial over wrong variables"));
                }
                if (0..a.lambda.len()).any(|j| a.lambda[j].image.is_some() && img.mentions(j)) || img.mentions(l) {
                    return Err(CmodError::parse(0, format!("image of {} must only use presentation variables", v.name)));
                }
            }
        }
        let images = a.variable_images();
        for r in relations {
            if r.nvars() != nv {
                return Err(CmodError::parse(0, "relation over wrong variables"));
            }
            let s = r.compose(&images, nv);
            if !s.is_zero() {
                a.relations.push(s);
            }
        }
        Ok(a)
    }

    fn validate(&self) -> Result<()> {
        let names = self.names();
        for (l, v) in self.lambda.iter().enumerate() {
            if let Some(img) = &v.image {
                if !img.is_integral(&self.ring) {
                    return Err(CmodError::parse(0, format!("image of {} has non-integral coefficients", v.name)));
                }
                if !img.constant_term().is_zero() {
                    return Err(CmodError::BadAugmentationForm(format!("image of {} has nonzero constant term", names[l])));
                }
            }
        }
        for f in &self.relations {
            let shown = f.display(&names).to_string();
            if !f.is_integral(&self.ring) {
                return Err(CmodError::parse(0, format!("relation {shown} has non-integral coefficients")));
            }
            if !f.constant_term().is_zero() {
                return Err(CmodError::BadAugmentationForm(format!("relation {shown} has nonzero constant term")));
            }
            for &v in &self.presentation_vars() {
                let u = to_scalar(&self.ring, &f.linear_coeff(v)).map_err(|m| CmodError::parse(0, m))?;
                if self.ring.is_unit(&u) {
                    return Err(CmodError::BadAugmentationForm(format!("relation {shown} has a unit linear coefficient on {}", names[v])));
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Dvr {
        &self.ring
    }

    pub fn prime(&self) -> u64 {
        self.ring.prime()
    }

    /// Codimension c, the number of lambda variables.
    pub fn codimension(&self) -> usize {
        self.lambda.len()
    }

    pub fn fiber_count(&self) -> usize {
        self.fiber.len()
    }

    pub fn nvars(&self) -> usize {
        self.lambda.len() + self.fiber.len()
    }

    pub fn lambda_vars(&self) -> &[LambdaVar] {
        &self.lambda
    }

    pub fn fiber_names(&self) -> &[String] {
        &self.fiber
    }

    pub fn names(&self) -> Vec<String> {
        self.lambda.iter().map(|l| l.name.clone()).chain(self.fiber.iter().cloned()).collect()
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    /// Indices of the variables of the power-series ring presenting A.
    pub fn presentation_vars(&self) -> Vec<usize> {
        let c = self.lambda.len();
        (0..c).filter(|&l| self.lambda[l].image.is_none()).chain(c..self.nvars()).collect()
    }

    /// Index of variable `v` among the presentation variables.
    pub fn presentation_index(&self, v: usize) -> Option<usize> {
        self.presentation_vars().iter().position(|&w| w == v)
    }

    /// The image in A of every variable, as a series in presentation variables.
    pub fn variable_images(&self) -> Vec<Poly> {
        let nv = self.nvars();
        (0..nv)
            .map(|v| match self.lambda.get(v).and_then(|l| l.image.clone()) {
                Some(img) => img,
                None => Poly::var(nv, v),
            })
            .collect()
    }

    /// Rewrites a polynomial in all variables into presentation variables.
    pub fn normalize(&self, f: &Poly) -> Poly {
        f.compose(&self.variable_images(), self.nvars())
    }

    pub fn is_regular(&self) -> bool {
        self.relations.is_empty() && self.presentation_vars().len() == self.codimension()
    }

    /// Linear coefficients of the relations against the presentation
    /// variables: the relation matrix of 𝔭/𝔭².
    pub fn linear_part_matrix(&self) -> OMatrix {
        let vars = self.presentation_vars();
        let mut m = Matrix::zeros(&self.ring, self.relations.len(), vars.len());
        for (i, f) in self.relations.iter().enumerate() {
            for (j, &v) in vars.iter().enumerate() {
                m[(i, j)] = to_scalar(&self.ring, &f.linear_coeff(v)).expect("validated integral");
            }
        }
        m
    }

    /// Linear part of `f` as a row vector against the presentation variables.
    pub fn linear_row(&self, f: &Poly) -> Result<Vec<crate::dvr::DvrScalar>> {
        let g = self.normalize(f);
        if !g.constant_term().is_zero() {
            return Err(CmodError::NotInCategory("element is not in the augmentation ideal".into()));
        }
        self.presentation_vars().iter().map(|&v| to_scalar(&self.ring, &g.linear_coeff(v)).map_err(|m| CmodError::parse(0, m))).collect()
    }

    /// Adds relations (in all variables) without re-validating.
    pub fn with_relations(&self, extra: &[Poly]) -> Result<Self> {
        let mut rels = self.relations.clone();
        rels.extend(extra.iter().cloned());
        Self::new_unchecked(self.ring.clone(), self.lambda.clone(), self.fiber.clone(), rels)
    }

    /// Sets the variable `v` to `value` (a polynomial in the remaining
    /// variables) and drops it. Lambda variables that lose their presentation
    /// role are removed from Λ as well.
    pub fn eliminate(&self, v: usize, value: &Poly) -> Result<Self> {
        let nv = self.nvars();
        let keep: Vec<usize> = (0..nv).filter(|&w| w != v).collect();
        let mut map = vec![0; nv];
        for (k, &w) in keep.iter().enumerate() {
            map[w] = k;
        }
        let target = nv - 1;
        let images: Vec<Poly> = (0..nv).map(|w| if w == v { value.reindex(&map, target) } else { Poly::var(target, map[w]) }).collect();
        let c = self.lambda.len();
        let lambda: Vec<LambdaVar> = (0..c)
            .filter(|&l| l != v)
            .map(|l| LambdaVar {
                name: self.lambda[l].name.clone(),
                image: self.lambda[l].image.as_ref().map(|g| g.compose(&images, target)),
            })
            .collect();
        let fiber: Vec<String> = (c..nv).filter(|&w| w != v).map(|w| self.names()[w].clone()).collect();
        let rels: Vec<Poly> = self.relations.iter().map(|f| f.compose(&images, target)).collect();
        Self::new_unchecked(self.ring.clone(), lambda, fiber, rels)
    }
}
