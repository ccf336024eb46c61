//! Λ/𝔪^D ⊗ O/p^N as a finite free module over the Artinian ring O/p^N.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::dvr::{module_from_presentation, Dvr, DvrScalar, FgOModule, LocalRing, Matrix, ZpN};
use crate::poly::{Monomial, Poly, PolyMatrix};

pub(crate) type ModMatrix = Matrix<u128>;

/// Monomials of total degree below `d` in `c` variables.
pub(crate) struct TruncSpace {
    c: usize,
    monos: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

fn monomials_below(c: usize, d: u32) -> Vec<Monomial> {
    let mut out = vec![vec![0u32; c]];
    let mut frontier = out.clone();
    for _ in 1..d {
        let mut next = Vec::new();
        for m in &frontier {
            // Extend only at or after the last nonzero slot to avoid repeats.
            let last = m.iter().rposition(|&e| e > 0).unwrap_or(0);
            for i in last..c {
                let mut n = m.clone();
                n[i] += 1;
                next.push(n);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    if d == 0 {
        out.clear();
    }
    out
}

impl TruncSpace {
    pub(crate) fn new(c: usize, d: u32) -> Self {
        let monos = monomials_below(c, d);
        let index = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        TruncSpace { c, monos, index }
    }

    pub(crate) fn len(&self) -> usize {
        self.monos.len()
    }

    /// Position of the constant monomial.
    pub(crate) fn origin(&self) -> usize {
        self.index[&vec![0; self.c]]
    }

    fn mul_block(&self, zp: &ZpN, ring: &Dvr, p: &Poly, out: &mut ModMatrix, row0: usize, col0: usize, sign: bool) {
        for (m, coef) in p.terms() {
            let a = rational_mod(ring, zp, coef);
            let a = if sign { zp.neg(&a) } else { a };
            if a == 0 {
                continue;
            }
            for (j, src) in self.monos.iter().enumerate() {
                let tgt: Monomial = src.iter().zip(m).map(|(x, y)| x + y).collect();
                if let Some(&i) = self.index.get(&tgt) {
                    let cur = out[(row0 + i, col0 + j)];
                    out[(row0 + i, col0 + j)] = zp.add(&cur, &a);
                }
            }
        }
    }

    /// Action of a polynomial matrix on (Λ/𝔪^D)^cols, placed into `out` at the
    /// given block offsets; `negate` subtracts instead of adding.
    pub(crate) fn place(
        &self,
        zp: &ZpN,
        ring: &Dvr,
        m: &PolyMatrix,
        out: &mut ModMatrix,
        row_block: usize,
        col_block: usize,
        negate: bool,
    ) {
        let n = self.len();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                self.mul_block(zp, ring, m.get(i, j), out, (row_block + i) * n, (col_block + j) * n, negate);
            }
        }
    }

    /// Action of a polynomial matrix as a standalone matrix.
    pub(crate) fn matrix(&self, zp: &ZpN, ring: &Dvr, m: &PolyMatrix) -> ModMatrix {
        let n = self.len();
        let mut out = Matrix::zeros(zp, m.rows() * n, m.cols() * n);
        self.place(zp, ring, m, &mut out, 0, 0, false);
        out
    }
}

pub(crate) fn rational_mod(ring: &Dvr, zp: &ZpN, c: &BigRational) -> u128 {
    let s = ring.from_rational(c).expect("p-integral coefficient");
    scalar_mod(ring, zp, &s)
}

pub(crate) fn scalar_mod(ring: &Dvr, zp: &ZpN, s: &DvrScalar) -> u128 {
    ring.residue(s, zp.precision()).to_u128().expect("residue below modulus")
}

pub(crate) fn lift(ring: &Dvr, x: u128) -> DvrScalar {
    ring.from_int(BigInt::from(x))
}

/// Cokernel of the O-span of `vectors` inside (O/p^N)^k, read as an
/// O-module. `saturated` reports that some summand reached the working
/// precision, so the span may not have finite index.
pub(crate) struct ModCokernel {
    pub module: FgOModule,
    pub saturated: bool,
    pub min_valuation: Option<u32>,
}

pub(crate) fn mod_cokernel(ring: &Dvr, zp: &ZpN, k: usize, vectors: &[Vec<u128>]) -> ModCokernel {
    let n = zp.precision();
    let mut rels = Matrix::zeros(ring, 0, k);
    let mut min_val: Option<u32> = None;
    for v in vectors {
        let row: Vec<DvrScalar> = v.iter().map(|&x| lift(ring, x)).collect();
        for x in &row {
            if let Some(e) = x.valuation() {
                min_val = Some(min_val.map_or(e, |m| m.min(e)));
            }
        }
        rels.push_row(row);
    }
    for i in 0..k {
        let mut row = vec![ring.zero(); k];
        row[i] = ring.uniformizer_pow(n);
        rels.push_row(row);
    }
    let module = module_from_presentation(ring, &rels);
    let saturated = module.torsion_exponents.iter().any(|&e| e >= n);
    ModCokernel { module, saturated, min_valuation: min_val }
}
