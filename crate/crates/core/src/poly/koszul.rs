//! Koszul cochains on the variables of a regular algebra.

use std::collections::BTreeMap;

use crate::dvr::{map_cokernel, module_from_presentation, rank, Dvr, FgOModule, LocalRing, Matrix, OMatrix, OModuleMap};
use crate::error::{CmodError, Result};

use super::algebra::AugmentedAlgebra;

/// Module data accepted by the Koszul path.
#[derive(Clone, Debug)]
pub enum KoszulModule {
    /// A^μ.
    Free(usize),
    /// O^rank with the given actions of the presentation variables.
    Finite { rank: usize, actions: Vec<OMatrix> },
}

fn subsets(c: usize, i: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, c: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for j in start..c {
            cur.push(j);
            go(j + 1, c, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if i <= c {
        go(0, c, i, &mut Vec::new(), &mut out);
    }
    out
}

fn monomials(c: usize, deg: usize) -> Vec<Vec<u32>> {
    if c == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=deg).rev() {
        for mut rest in monomials(c - 1, deg - first) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

fn sign(s: &[usize], j: usize) -> i64 {
    if s.iter().filter(|&&x| x < j).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Differential C^i → C^{i+1} for a finite module with actions `acts`.
fn finite_differential(ring: &Dvr, acts: &[OMatrix], s: usize, i: usize) -> OMatrix {
    let c = acts.len();
    let src = subsets(c, i);
    let tgt = subsets(c, i + 1);
    let index: BTreeMap<Vec<usize>, usize> = tgt.iter().cloned().enumerate().map(|(k, v)| (v, k)).collect();
    let mut d = Matrix::zeros(ring, tgt.len() * s, src.len() * s);
    for (a, set) in src.iter().enumerate() {
        for j in (0..c).filter(|j| !set.contains(j)) {
            let mut bigger = set.clone();
            bigger.push(j);
            bigger.sort_unstable();
            let b = index[&bigger];
            let sg = ring.from_i64(sign(set, j));
            for r in 0..s {
                for col in 0..s {
                    let v = ring.mul(&sg, &acts[j][(r, col)]);
                    d[(b * s + r, a * s + col)] = ring.add(&d[(b * s + r, a * s + col)], &v);
                }
            }
        }
    }
    d
}

/// Differential C^i_w → C^{i+1}_w of the strand of weight w of the
/// Koszul cochains of the polynomial ring (weight = degree − |S|).
fn strand_differential(ring: &Dvr, c: usize, w: i64, i: usize) -> (usize, usize, OMatrix) {
    let basis = |k: usize| -> Vec<(Vec<usize>, Vec<u32>)> {
        let deg = w + k as i64;
        if deg < 0 || k > c {
            return Vec::new();
        }
        let mut out = Vec::new();
        for set in subsets(c, k) {
            for m in monomials(c, deg as usize) {
                out.push((set.clone(), m));
            }
        }
        out
    };
    let src = basis(i);
    let tgt = basis(i + 1);
    let index: BTreeMap<(Vec<usize>, Vec<u32>), usize> = tgt.iter().cloned().enumerate().map(|(k, v)| (v, k)).collect();
    let mut d = Matrix::zeros(ring, tgt.len(), src.len());
    for (a, (set, mono)) in src.iter().enumerate() {
        for j in (0..c).filter(|j| !set.contains(j)) {
            let mut bigger = set.clone();
            bigger.push(j);
            bigger.sort_unstable();
            let mut m = mono.clone();
            m[j] += 1;
            let b = index[&(bigger, m)];
            d[(b, a)] = ring.add(&d[(b, a)], &ring.from_i64(sign(set, j)));
        }
    }
    (src.len(), tgt.len(), d)
}

/// H^i of a cochain complex given d^{i-1}: C^{i-1} → C^i and d^i.
fn cohomology(ring: &Dvr, n_i: usize, prev: Option<&OMatrix>, next: Option<&OMatrix>) -> FgOModule {
    let rels = match prev {
        Some(d) => d.transpose(),
        None => Matrix::zeros(ring, 0, n_i),
    };
    let coker = module_from_presentation(ring, &rels);
    let r = next.map_or(0, |d| rank(ring, d));
    FgOModule::new(coker.free_rank - r, coker.torsion_exponents.clone())
}

fn require_regular(a: &AugmentedAlgebra) -> Result<()> {
    if !a.is_regular() {
        return Err(CmodError::NotRegularCase(format!(
            "the augmentation ideal is not generated by {} presentation variables",
            a.codimension()
        )));
    }
    Ok(())
}

fn strand_cohomology(ring: &Dvr, c: usize, w: i64, i: usize) -> FgOModule {
    let (n_i, _, next) = strand_differential(ring, c, w, i);
    let prev = if i == 0 { None } else { Some(strand_differential(ring, c, w, i - 1).2) };
    cohomology(ring, n_i, prev.as_ref(), Some(&next))
}

/// Weights examined for A^μ. Strands beyond them are exact because the
/// presentation variables form a regular sequence in a graded ring.
fn weights(c: usize) -> std::ops::RangeInclusive<i64> {
    -(c as i64)..=2
}

/// Ext^i_A(O, M) for A regular at λ, from the Koszul complex on the
/// presentation variables.
pub fn koszul_ext(a: &AugmentedAlgebra, m: &KoszulModule, i: usize) -> Result<FgOModule> {
    require_regular(a)?;
    let ring = a.ring();
    let c = a.codimension();
    if i > c {
        return Ok(FgOModule::zero());
    }
    match m {
        KoszulModule::Free(mu) => {
            let mut total = FgOModule::zero();
            for w in weights(c) {
                total = total.direct_sum(&strand_cohomology(ring, c, w, i));
            }
            let mut out = FgOModule::zero();
            for _ in 0..*mu {
                out = out.direct_sum(&total);
            }
            Ok(out)
        }
        KoszulModule::Finite { rank: s, actions: acts } => {
            let s = *s;
            if acts.len() != c {
                return Err(CmodError::NotRegularCase(format!("expected actions of {c} variables, got {}", acts.len())));
            }
            let n_i = subsets(c, i).len() * s;
            let prev = if i == 0 { None } else { Some(finite_differential(ring, acts, s, i - 1)) };
            let next = if i == c { None } else { Some(finite_differential(ring, acts, s, i)) };
            Ok(cohomology(ring, n_i, prev.as_ref(), next.as_ref()))
        }
    }
}

/// Cokernel of tf H^c(A^μ) → tf H^c((A/𝔭)^μ) computed on Koszul cochains.
pub fn koszul_congruence(a: &AugmentedAlgebra, mu: usize) -> Result<FgOModule> {
    require_regular(a)?;
    let ring = a.ring();
    let c = a.codimension();
    let mut gens = 0usize;
    for w in weights(c) {
        let h = strand_cohomology(ring, c, w, c);
        if w == -(c as i64) {
            gens = h.free_rank;
        } else if !h.is_zero() {
            return Err(CmodError::NotRegularCase(format!("top Koszul cohomology has weight {w} classes")));
        }
    }
    // Only the weight −c strand has constant coefficients, and evaluation at
    // the origin sends its generator to the top class of A/𝔭.
    let block = Matrix::identity(ring, gens);
    let mut map = Matrix::zeros(ring, gens * mu, gens * mu);
    for k in 0..mu {
        for i in 0..gens {
            for j in 0..gens {
                map[(k * gens + i, k * gens + j)] = block[(i, j)].clone();
            }
        }
    }
    map_cokernel(ring, &OModuleMap::free(ring, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_presentation;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn top_ext_of_power_series_ring_is_rank_one() {
        for c in 1..=3 {
            let names: Vec<String> = (1..=c).map(|i| format!("t{i}")).collect();
            let a = parse_presentation(&format!("p=3; lambda {}", names.join(","))).unwrap();
            for i in 0..=c {
                let e = koszul_ext(&a, &KoszulModule::Free(1), i).unwrap();
                assert_eq!(e, if i == c { FgOModule::free(1) } else { FgOModule::zero() }, "c={c} i={i}");
            }
        }
    }

    #[test]
    fn residue_field_module_has_binomial_ranks() {
        let ring = Dvr::new(5).unwrap();
        for c in 0..=3 {
            let names: Vec<String> = (1..=c).map(|i| format!("t{i}")).collect();
            let a = parse_presentation(&format!("p=5; lambda {}", names.join(","))).unwrap();
            let acts = vec![Matrix::zeros(&ring, 1, 1); c];
            for i in 0..=c {
                let e = koszul_ext(&a, &KoszulModule::Finite { rank: 1, actions: acts.clone() }, i).unwrap();
                assert_eq!(e, FgOModule::free(binom(c, i)));
            }
        }
    }

    #[test]
    fn twisted_power_series_residue_module() {
        let a = parse_presentation("p=3; lambda t -> 9*s + s^2; fiber s").unwrap();
        let ring = a.ring().clone();
        let e = koszul_ext(&a, &KoszulModule::Finite { rank: 1, actions: vec![Matrix::zeros(&ring, 1, 1)] }, 1).unwrap();
        assert_eq!(e, FgOModule::free(1));
        assert!(koszul_congruence(&a, 1).unwrap().is_zero());
    }

    #[test]
    fn non_regular_is_rejected() {
        let a = parse_presentation("p=3; lambda t; fiber x; rel x^2 - 9*x").unwrap();
        assert!(matches!(koszul_ext(&a, &KoszulModule::Free(1), 1), Err(CmodError::NotRegularCase(_))));
    }

    #[test]
    fn torsion_action_gives_torsion_cohomology() {
        // M = O on which the variable acts by 3: H^0 = 0, H^1 = O/3.
        let ring = Dvr::new(3).unwrap();
        let a = parse_presentation("p=3; lambda t").unwrap();
        let acts = vec![OMatrix::from_i64_rows(&ring, 1, &[&[3]])];
        assert!(koszul_ext(&a, &KoszulModule::Finite { rank: 1, actions: acts.clone() }, 0).unwrap().is_zero());
        assert_eq!(koszul_ext(&a, &KoszulModule::Finite { rank: 1, actions: acts }, 1).unwrap(), FgOModule::new(0, vec![1]));
    }
}
