//! Smith normal form over a local PID (or its Artinian quotients).
//!
//! The pivot is always an entry of minimal valuation in the remaining block,
//! ties broken by smallest row and then smallest column. With that choice the
//! pivot divides everything left, so one elimination sweep per pivot
//! suffices and the exponents come out ascending.

use super::matrix::Matrix;
use super::ring::LocalRing;

#[derive(Clone, Copy, Debug, Default)]
pub struct SnfOptions {
    pub left: bool,
    pub right: bool,
}

impl SnfOptions {
    pub const NONE: SnfOptions = SnfOptions { left: false, right: false };
    pub const BOTH: SnfOptions = SnfOptions { left: true, right: true };
    pub const RIGHT: SnfOptions = SnfOptions { left: false, right: true };
}

/// `left * m * right = diag(p^e_1, ..., p^e_rank, 0, ...)`.
#[derive(Clone, Debug)]
pub struct SmithForm<E> {
    pub exponents: Vec<u32>,
    pub left: Option<Matrix<E>>,
    pub right: Option<Matrix<E>>,
}

impl<E> SmithForm<E> {
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }
}

pub fn smith_normal_form<R: LocalRing>(ring: &R, m: &Matrix<R::Elem>, opts: SnfOptions) -> SmithForm<R::Elem> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = opts.left.then(|| Matrix::identity(ring, rows));
    let mut right = opts.right.then(|| Matrix::identity(ring, cols));
    let mut exponents = Vec::new();

    for k in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for i in k..rows {
            for j in k..cols {
                if let Some(v) = ring.valuation(&a[(i, j)]) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                        if v == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((e, pi, pj)) = best else { break };
        a.swap_rows(k, pi);
        a.swap_cols(k, pj);
        if let Some(l) = left.as_mut() {
            l.swap_rows(k, pi);
        }
        if let Some(r) = right.as_mut() {
            r.swap_cols(k, pj);
        }

        // Scale the pivot row so the pivot is exactly p^e.
        let target = ring.uniformizer_pow(e);
        let q = ring.div_exact(&target, &a[(k, k)]);
        if q != ring.one() {
            for j in k..cols {
                a[(k, j)] = ring.mul(&q, &a[(k, j)]);
            }
            if let Some(l) = left.as_mut() {
                for j in 0..rows {
                    l[(k, j)] = ring.mul(&q, &l[(k, j)]);
                }
            }
        }
        let pivot = a[(k, k)].clone();

        for i in k + 1..rows {
            if ring.is_zero(&a[(i, k)]) {
                continue;
            }
            let f = ring.div_exact(&a[(i, k)], &pivot);
            for j in k..cols {
                if !ring.is_zero(&a[(k, j)]) {
                    a[(i, j)] = ring.sub_mul(&a[(i, j)], &f, &a[(k, j)]);
                }
            }
            if let Some(l) = left.as_mut() {
                for j in 0..rows {
                    if !ring.is_zero(&l[(k, j)]) {
                        l[(i, j)] = ring.sub_mul(&l[(i, j)], &f, &l[(k, j)]);
                    }
                }
            }
        }
        // Column k is now clear below the pivot, so clearing row k only
        // touches row k itself.
        for j in k + 1..cols {
            if ring.is_zero(&a[(k, j)]) {
                continue;
            }
            let f = ring.div_exact(&a[(k, j)], &pivot);
            a[(k, j)] = ring.zero();
            if let Some(r) = right.as_mut() {
                for i in 0..cols {
                    if !ring.is_zero(&r[(i, k)]) {
                        r[(i, j)] = ring.sub_mul(&r[(i, j)], &f, &r[(i, k)]);
                    }
                }
            }
        }
        exponents.push(e);
    }
    SmithForm { exponents, left, right }
}

/// Rank over the fraction field (for an exact ring) or number of nonzero
/// pivots (for a truncated one).
pub fn rank<R: LocalRing>(ring: &R, m: &Matrix<R::Elem>) -> usize {
    smith_normal_form(ring, m, SnfOptions::NONE).rank()
}

/// O-basis of the saturated right kernel `{v : m v = 0}` over an exact ring.
pub fn kernel_basis<R: LocalRing>(ring: &R, m: &Matrix<R::Elem>) -> Vec<Vec<R::Elem>> {
    let snf = smith_normal_form(ring, m, SnfOptions::RIGHT);
    let v = snf.right.clone().expect("tracked");
    (snf.rank()..m.cols()).map(|j| v.col(j)).collect()
}

/// Generators of `{v : m v = 0}` in the truncated ring `O/p^N`, given its
/// precision `n`. Directions whose pivot has valuation `e < n` contribute
/// `p^(n - e)` times the corresponding transform column.
pub fn kernel_generators_mod<R: LocalRing>(ring: &R, m: &Matrix<R::Elem>, n: u32) -> Vec<Vec<R::Elem>> {
    let snf = smith_normal_form(ring, m, SnfOptions::RIGHT);
    let v = snf.right.clone().expect("tracked");
    let mut out = Vec::new();
    for (i, &e) in snf.exponents.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let s = ring.uniformizer_pow(n.saturating_sub(e));
        out.push(v.col(i).iter().map(|x| ring.mul(&s, x)).collect());
    }
    for j in snf.rank()..m.cols() {
        out.push(v.col(j));
    }
    out
}

/// Whether `v` lies in the O-span of the rows of `rels`.
pub fn in_row_span<R: LocalRing>(ring: &R, rels: &Matrix<R::Elem>, v: &[R::Elem]) -> bool {
    assert_eq!(rels.cols(), v.len());
    let snf = smith_normal_form(ring, rels, SnfOptions::RIGHT);
    let right = snf.right.clone().expect("tracked");
    // v = y rels  <=>  v * right = (y * left^-1) * D
    let w: Vec<R::Elem> = (0..v.len())
        .map(|j| {
            let mut acc = ring.zero();
            for (i, x) in v.iter().enumerate() {
                acc = ring.add(&acc, &ring.mul(x, &right[(i, j)]));
            }
            acc
        })
        .collect();
    w.iter().enumerate().all(|(i, x)| match snf.exponents.get(i) {
        Some(&e) => ring.valuation(x).is_none_or(|vx| vx >= e),
        None => ring.is_zero(x),
    })
}
