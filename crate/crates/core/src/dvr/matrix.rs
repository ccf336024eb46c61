use std::ops::{Index, IndexMut};

use super::ring::LocalRing;
use super::scalar::DvrScalar;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

/// A matrix over O.
pub type OMatrix = Matrix<DvrScalar>;

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, fill: E) -> Self {
        Matrix { rows, cols, data: vec![fill; rows * cols] }
    }

    pub fn zeros<R: LocalRing<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, ring.zero())
    }

    pub fn identity<R: LocalRing<Elem = E>>(ring: &R, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m[(i, i)] = ring.one();
        }
        m
    }

    /// Builds from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        Matrix { rows: nrows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<F: Clone>(&self, f: impl FnMut(&E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn push_row(&mut self, row: Vec<E>) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn mul<R: LocalRing<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if ring.is_zero(b) {
                        continue;
                    }
                    out[(i, j)] = ring.add(&out[(i, j)], &ring.mul(a, b));
                }
            }
        }
        out
    }

    pub fn add<R: LocalRing<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| ring.add(&self[(i, j)], &other[(i, j)]))
    }

    pub fn sub<R: LocalRing<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| ring.sub(&self[(i, j)], &other[(i, j)]))
    }

    pub fn scale<R: LocalRing<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        self.map(|x| ring.mul(c, x))
    }

    pub fn apply<R: LocalRing<Elem = E>>(&self, ring: &R, v: &[E]) -> Vec<E> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = ring.zero();
                for (j, x) in v.iter().enumerate() {
                    acc = ring.add(&acc, &ring.mul(&self[(i, j)], x));
                }
                acc
            })
            .collect()
    }

    pub fn is_zero<R: LocalRing<Elem = E>>(&self, ring: &R) -> bool {
        self.data.iter().all(|x| ring.is_zero(x))
    }

    /// Smallest valuation among the entries; `None` for the zero matrix.
    pub fn min_valuation<R: LocalRing<Elem = E>>(&self, ring: &R) -> Option<u32> {
        self.data.iter().filter_map(|x| ring.valuation(x)).min()
    }

    pub fn pow<R: LocalRing<Elem = E>>(&self, ring: &R, e: u32) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut acc = Self::identity(ring, self.rows);
        for _ in 0..e {
            acc = acc.mul(ring, self);
        }
        acc
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }
}

impl<E> Index<(usize, usize)> for Matrix<E> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<E> IndexMut<(usize, usize)> for Matrix<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl OMatrix {
    /// Convenience constructor from small integers.
    pub fn from_i64_rows(ring: &super::scalar::Dvr, cols: usize, rows: &[&[i64]]) -> Self {
        Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| ring.from_int(x)).collect()).collect())
    }
}
