use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dvr::{Dvr, DvrScalar, Matrix, OMatrix};

pub type Monomial = Vec<u32>;

/// Sparse multivariate polynomial with rational coefficients. No zero
/// coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Poly::constant(nvars, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn one(nvars: usize) -> Self {
        Poly::from_int(nvars, 1)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(m, BigRational::one());
        p
    }

    pub fn monomial(mono: Monomial, c: BigRational) -> Self {
        let mut p = Poly::zero(mono.len());
        p.add_term(mono, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mono: Monomial, c: BigRational) {
        debug_assert_eq!(mono.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, mono: &[u32]) -> BigRational {
        self.terms.get(mono).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&vec![0; self.nvars])
    }

    /// Coefficient of the variable `i` in degree one.
    pub fn linear_coeff(&self, i: usize) -> BigRational {
        let mut m = vec![0; self.nvars];
        m[i] = 1;
        self.coeff(&m)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Smallest total degree of a term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).min()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_trunc(other, None)
    }

    /// Product with every term of total degree above `deg` dropped.
    pub fn mul_trunc(&self, other: &Poly, deg: Option<u32>) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            let d1: u32 = m1.iter().sum();
            for (m2, c2) in &other.terms {
                if let Some(d) = deg {
                    if d1 + m2.iter().sum::<u32>() > d {
                        continue;
                    }
                }
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn truncate(&self, deg: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| m.iter().sum::<u32>() <= deg).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Substitutes `images[i]` for variable `i`; all images share one ring.
    pub fn compose(&self, images: &[Poly], target_nvars: usize) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let mut out = Poly::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target_nvars, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].pow(e));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Whether the variable `i` occurs.
    pub fn mentions(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m[i] > 0)
    }

    /// Value with every variable set to zero, as an element of O.
    pub fn at_zero(&self, ring: &Dvr) -> Option<DvrScalar> {
        ring.from_rational(&self.constant_term())
    }

    /// Whether every coefficient is p-integral.
    pub fn is_integral(&self, ring: &Dvr) -> bool {
        self.terms.values().all(|c| ring.from_rational(c).is_some())
    }

    /// Rewrites the polynomial over a different variable count by mapping
    /// variable `i` to `map[i]`.
    pub fn reindex(&self, map: &[usize], target_nvars: usize) -> Poly {
        let mut out = Poly::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut nm = vec![0; target_nvars];
            for (i, &e) in m.iter().enumerate() {
                nm[map[i]] += e;
            }
            out.add_term(nm, c.clone());
        }
        out
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("v{i}")).collect();
        write!(f, "{}", self.display(&names))
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        // Low degree first reads naturally for power series data.
        let mut terms: Vec<_> = self.poly.terms.iter().collect();
        terms.sort_by_key(|(m, _)| (m.iter().sum::<u32>(), std::cmp::Reverse((*m).clone())));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { self.names[i].clone() } else { format!("{}^{}", self.names[i], e) })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Matrix with polynomial entries, all over the same variables. Products
/// are truncated at a total degree.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMatrix { rows, cols, nvars, entries: vec![Poly::zero(nvars); rows * cols] }
    }

    pub fn scalar(n: usize, p: &Poly) -> Self {
        let mut m = PolyMatrix::zeros(n, n, p.nvars());
        for i in 0..n {
            m.set(i, i, p.clone());
        }
        m
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        PolyMatrix::scalar(n, &Poly::one(nvars))
    }

    pub fn from_rows(nvars: usize, cols: usize, rows: Vec<Vec<Poly>>) -> Self {
        let nrows = rows.len();
        let entries: Vec<Poly> = rows
            .into_iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix");
                r
            })
            .collect();
        PolyMatrix { rows: nrows, cols, nvars, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        self.add(&other.scale(&Poly::from_int(self.nvars, -1), None))
    }

    pub fn scale(&self, p: &Poly, deg: Option<u32>) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            entries: self.entries.iter().map(|e| e.mul_trunc(p, deg)).collect(),
        }
    }

    pub fn mul(&self, other: &PolyMatrix, deg: Option<u32>) -> PolyMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = PolyMatrix::zeros(self.rows, other.cols, self.nvars);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.entries[idx] = out.entries[idx].add(&a.mul_trunc(b, deg));
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Poly], deg: Option<u32>) -> Vec<Poly> {
        (0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero(self.nvars);
                for (j, x) in v.iter().enumerate() {
                    acc = acc.add(&self.get(i, j).mul_trunc(x, deg));
                }
                acc
            })
            .collect()
    }

    pub fn truncate(&self, deg: u32) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, nvars: self.nvars, entries: self.entries.iter().map(|e| e.truncate(deg)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    /// Entries at the origin, as a matrix over O.
    pub fn at_zero(&self, ring: &Dvr) -> Option<OMatrix> {
        let mut m = Matrix::zeros(ring, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self.get(i, j).at_zero(ring)?;
            }
        }
        Some(m)
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &PolyMatrix) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(self.rows + other.rows, self.cols + other.cols, self.nvars);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }
}

/// Evaluates `poly` at commuting matrices `mats` (one per variable).
pub fn eval_at_matrices(poly: &Poly, mats: &[PolyMatrix], deg: Option<u32>) -> PolyMatrix {
    assert_eq!(poly.nvars(), mats.len());
    let n = mats.first().map(|m| m.rows()).expect("at least one variable");
    let inner = mats[0].nvars();
    let mut out = PolyMatrix::zeros(n, n, inner);
    let mut powers: Vec<Vec<PolyMatrix>> = mats.iter().map(|m| vec![PolyMatrix::identity(n, inner), m.clone()]).collect();
    for (mono, c) in poly.terms() {
        let mut t = PolyMatrix::scalar(n, &Poly::constant(inner, c.clone()));
        for (i, &e) in mono.iter().enumerate() {
            while powers[i].len() <= e as usize {
                let next = powers[i].last().unwrap().mul(&mats[i], deg);
                powers[i].push(next);
            }
            if e > 0 {
                t = t.mul(&powers[i][e as usize], deg);
            }
        }
        out = out.add(&t);
    }
    out
}

/// Converts an O-valued rational, failing with a readable message.
pub(crate) fn to_scalar(ring: &Dvr, c: &BigRational) -> Result<DvrScalar, String> {
    ring.from_rational(c).ok_or_else(|| format!("coefficient {c} is not p-integral for p={}", ring.prime()))
}

pub(crate) fn scalar_poly(ring: &Dvr, nvars: usize, s: &DvrScalar) -> Poly {
    if s.is_zero() {
        Poly::zero(nvars)
    } else {
        Poly::constant(nvars, ring.to_rational(s))
    }
}
