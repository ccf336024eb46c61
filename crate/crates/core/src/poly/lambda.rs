use crate::dvr::{Dvr, DvrScalar, LocalRing, Matrix, OMatrix};
use crate::error::{CmodError, Result};

use super::algebra::AugmentedAlgebra;
use super::poly::{eval_at_matrices, scalar_poly, Poly, PolyMatrix};

/// Element of A in Λ-coordinates: one series in t per basis vector.
pub type LambdaElem = Vec<Poly>;

/// Working precision of the truncated Artinian model A/(p^N, deg ≥ D).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationContext {
    pub n: u32,
    pub d: u32,
}

impl TruncationContext {
    pub fn new(n: u32, d: u32) -> Result<Self> {
        if n < 4 || d < 2 {
            return Err(CmodError::Unsupported(format!("truncation needs N >= 4 and D >= 2, got N={n}, D={d}")));
        }
        Ok(TruncationContext { n, d })
    }

    pub fn escalate(&self) -> Self {
        TruncationContext { n: self.n + 4, d: self.d + 4 }
    }
}

impl Default for TruncationContext {
    fn default() -> Self {
        TruncationContext { n: 20, d: 8 }
    }
}

/// A as a free Λ_c-module with basis e_1 = 1, e_2, ..., e_r.
#[derive(Clone, Debug)]
pub struct LambdaStructure {
    ring: Dvr,
    c: usize,
    labels: Vec<String>,
    /// `table[i][j]` is e_i·e_j in the basis.
    table: Vec<Vec<LambdaElem>>,
    aug: Vec<DvrScalar>,
    embed: Vec<LambdaElem>,
    degree: u32,
}

impl LambdaStructure {
    pub fn new(
        ring: Dvr,
        c: usize,
        labels: Vec<String>,
        table: Vec<Vec<LambdaElem>>,
        aug: Vec<DvrScalar>,
        embed: Vec<LambdaElem>,
        degree: u32,
    ) -> Result<Self> {
        let r = labels.len();
        let bad = |m: String| CmodError::InconsistentStructure(m);
        if r == 0 || labels[0] != "1" {
            return Err(bad("the first basis vector must be 1".into()));
        }
        if table.len() != r || table.iter().any(|row| row.len() != r || row.iter().any(|v| v.len() != r)) {
            return Err(bad("multiplication table has the wrong shape".into()));
        }
        if aug.len() != r {
            return Err(bad(format!("aug has length {}, basis has {r}", aug.len())));
        }
        let all = table.iter().flatten().flatten().chain(embed.iter().flatten());
        for p in all {
            if p.nvars() != c {
                return Err(bad("structure constants must be series in the lambda variables only".into()));
            }
            if !p.is_integral(&ring) {
                return Err(bad("structure constants must be p-integral".into()));
            }
        }
        let table =
            table.into_iter().map(|row| row.into_iter().map(|v| v.into_iter().map(|p| p.truncate(degree)).collect()).collect()).collect();
        let embed = embed.into_iter().map(|v| v.into_iter().map(|p| p.truncate(degree)).collect()).collect();
        let l = LambdaStructure { ring, c, labels, table, aug, embed, degree };
        l.check_table()?;
        Ok(l)
    }

    fn check_table(&self) -> Result<()> {
        let r = self.rank();
        let bad = |m: String| CmodError::InconsistentStructure(m);
        for j in 0..r {
            if self.table[0][j] != self.basis_vector(j) {
                return Err(bad(format!("1*{} is not {}", self.labels[j], self.labels[j])));
            }
        }
        for i in 0..r {
            for j in 0..r {
                if self.table[i][j] != self.table[j][i] {
                    return Err(bad(format!("{}*{} != {}*{}", self.labels[i], self.labels[j], self.labels[j], self.labels[i])));
                }
            }
        }
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let left = self.mul(&self.table[i][j], &self.basis_vector(k));
                    let right = self.mul(&self.basis_vector(i), &self.table[j][k]);
                    if left != right {
                        return Err(bad(format!(
                            "({}*{})*{} != {}*({}*{})",
                            self.labels[i], self.labels[j], self.labels[k], self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        if self.aug[0] != self.ring.one() {
            return Err(bad("aug(1) must be 1".into()));
        }
        for i in 0..r {
            for j in 0..r {
                let lhs = self.augment(&self.table[i][j]);
                let rhs = self.ring.mul(&self.aug[i], &self.aug[j]);
                if lhs != rhs {
                    return Err(bad(format!("aug is not multiplicative on {}*{}", self.labels[i], self.labels[j])));
                }
            }
        }
        for (j, e) in self.embed.iter().enumerate() {
            if e.len() != r {
                return Err(bad(format!("embedding of fiber variable {j} has the wrong length")));
            }
            if !self.augment(e).is_zero() {
                return Err(bad(format!("fiber variable {j} does not lie in the augmentation ideal")));
            }
        }
        Ok(())
    }

    /// Structure for Λ_c itself: rank one, no fiber variables.
    pub fn trivial(ring: &Dvr, c: usize, degree: u32) -> Self {
        LambdaStructure {
            ring: ring.clone(),
            c,
            labels: vec!["1".into()],
            table: vec![vec![vec![Poly::one(c)]]],
            aug: vec![ring.one()],
            embed: Vec::new(),
            degree,
        }
    }

    /// Builds the structure of a regular algebra when it can be read off
    /// directly: Λ_c itself, or O[[s]] over O[[t]] via t ↦ g(s) with g a
    /// polynomial whose top coefficient is a unit and whose lower
    /// coefficients are divisible by p.
    pub fn for_regular(a: &AugmentedAlgebra, degree: u32) -> Result<Self> {
        let ring = a.ring();
        let c = a.codimension();
        let missing = || CmodError::MissingLambdaStructure("no [lambda-structure] block and none can be derived".into());
        if !a.relations().is_empty() {
            return Err(missing());
        }
        if a.fiber_count() == 0 && a.lambda_vars().iter().all(|l| l.image.is_none()) {
            return Ok(Self::trivial(ring, c, degree));
        }
        if c != 1 || a.fiber_count() != 1 {
            return Err(missing());
        }
        let g = a.lambda_vars()[0].image.clone().ok_or_else(missing)?;
        if g.mentions(0) {
            return Err(missing());
        }
        let d = g.total_degree().ok_or_else(missing)? as usize;
        let coeff = |i: usize| g.coeff(&[0, i as u32]);
        let top = ring.from_rational(&coeff(d)).ok_or_else(missing)?;
        if !ring.is_unit(&top) || d == 0 {
            return Err(missing());
        }
        for i in 0..d {
            let ci = ring.from_rational(&coeff(i)).ok_or_else(missing)?;
            if ring.is_unit(&ci) {
                return Err(missing());
            }
        }
        // s^d = (t - sum_{i<d} g_i s^i) / g_d in the basis 1, s, ..., s^{d-1}.
        let inv = num_rational::BigRational::from_integer(1.into()) / coeff(d);
        let mut reduce: LambdaElem = (0..d).map(|i| Poly::constant(1, -coeff(i) * &inv)).collect();
        reduce[0] = reduce[0].add(&Poly::var(1, 0).scale(&inv));
        let mut powers: Vec<LambdaElem> =
            (0..d).map(|i| (0..d).map(|k| if k == i { Poly::one(1) } else { Poly::zero(1) }).collect()).collect();
        // powers[k] for k < 2d - 1 by repeated shifting.
        for k in d..(2 * d - 1) {
            let prev = &powers[k - 1];
            let mut next: LambdaElem = vec![Poly::zero(1); d];
            for i in 0..d {
                let x = &prev[i];
                if x.is_zero() {
                    continue;
                }
                if i + 1 < d {
                    next[i + 1] = next[i + 1].add(x);
                } else {
                    for m in 0..d {
                        next[m] = next[m].add(&x.mul_trunc(&reduce[m], Some(degree)));
                    }
                }
            }
            powers.push(next);
        }
        let labels: Vec<String> = (0..d)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => a.fiber_names()[0].clone(),
                _ => format!("{}^{}", a.fiber_names()[0], i),
            })
            .collect();
        let table: Vec<Vec<LambdaElem>> = (0..d).map(|i| (0..d).map(|j| powers[i + j].clone()).collect()).collect();
        let mut aug = vec![ring.zero(); d];
        aug[0] = ring.one();
        let embed = vec![if d == 1 { reduce.clone() } else { powers[1].clone() }];
        LambdaStructure::new(ring.clone(), 1, labels, table, aug, embed, degree)
    }

    pub fn ring(&self) -> &Dvr {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn codimension(&self) -> usize {
        self.c
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn aug(&self) -> &[DvrScalar] {
        &self.aug
    }

    pub fn embed(&self) -> &[LambdaElem] {
        &self.embed
    }

    pub fn product(&self, i: usize, j: usize) -> &LambdaElem {
        &self.table[i][j]
    }

    pub fn basis_vector(&self, i: usize) -> LambdaElem {
        (0..self.rank()).map(|k| if k == i { Poly::one(self.c) } else { Poly::zero(self.c) }).collect()
    }

    pub fn zero_elem(&self) -> LambdaElem {
        vec![Poly::zero(self.c); self.rank()]
    }

    pub fn add(&self, a: &LambdaElem, b: &LambdaElem) -> LambdaElem {
        a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
    }

    pub fn mul(&self, a: &LambdaElem, b: &LambdaElem) -> LambdaElem {
        let r = self.rank();
        let mut out = self.zero_elem();
        for i in 0..r {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..r {
                if b[j].is_zero() {
                    continue;
                }
                let ab = a[i].mul_trunc(&b[j], Some(self.degree));
                if ab.is_zero() {
                    continue;
                }
                for k in 0..r {
                    let s = &self.table[i][j][k];
                    if !s.is_zero() {
                        out[k] = out[k].add(&ab.mul_trunc(s, Some(self.degree)));
                    }
                }
            }
        }
        out
    }

    /// λ applied to an element: constant terms paired with aug.
    pub fn augment(&self, a: &LambdaElem) -> DvrScalar {
        let mut acc = self.ring.zero();
        for (x, l) in a.iter().zip(&self.aug) {
            let x0 = x.at_zero(&self.ring).expect("integral");
            acc = self.ring.add(&acc, &self.ring.mul(&x0, l));
        }
        acc
    }

    /// Matrix of multiplication by `a`: column j is a·e_j.
    pub fn mult_matrix(&self, a: &LambdaElem) -> PolyMatrix {
        let r = self.rank();
        let mut m = PolyMatrix::zeros(r, r, self.c);
        for j in 0..r {
            let col = self.mul(a, &self.basis_vector(j));
            for (k, x) in col.into_iter().enumerate() {
                m.set(k, j, x);
            }
        }
        m
    }

    /// Image in A of each variable of the presentation ring (all variables,
    /// lambda first).
    pub fn variable_elements(&self, a: &AugmentedAlgebra) -> Result<Vec<LambdaElem>> {
        if a.codimension() != self.c || a.fiber_count() != self.embed.len() {
            return Err(CmodError::InconsistentStructure(format!(
                "lambda-structure has c={} and {} embeddings, algebra has c={} and {} fiber variables",
                self.c,
                self.embed.len(),
                a.codimension(),
                a.fiber_count()
            )));
        }
        let mut out = Vec::new();
        for l in 0..self.c {
            let mut e = self.zero_elem();
            e[0] = Poly::var(self.c, l);
            out.push(e);
        }
        out.extend(self.embed.iter().cloned());
        Ok(out)
    }

    /// Evaluates a polynomial in the algebra's variables inside A.
    pub fn eval(&self, f: &Poly, vars: &[LambdaElem]) -> LambdaElem {
        let mut out = self.zero_elem();
        let mut powers: Vec<Vec<LambdaElem>> = vars
            .iter()
            .map(|v| {
                let mut one = self.zero_elem();
                one[0] = Poly::one(self.c);
                vec![one, v.clone()]
            })
            .collect();
        for (mono, coef) in f.terms() {
            let mut t = self.zero_elem();
            t[0] = Poly::constant(self.c, coef.clone());
            for (i, &e) in mono.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = self.mul(powers[i].last().unwrap(), &vars[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    t = self.mul(&t, &powers[i][e as usize]);
                }
            }
            out = self.add(&out, &t);
        }
        out
    }

    /// Sets the lambda variable `v` to zero and drops it from Λ.
    pub fn specialize(&self, v: usize) -> Result<Self> {
        let images = drop_var_images(self.c, v);
        let sp = |e: &LambdaElem| -> LambdaElem { e.iter().map(|p| p.compose(&images, self.c - 1)).collect() };
        let table = self.table.iter().map(|row| row.iter().map(sp).collect()).collect();
        let embed = self.embed.iter().map(sp).collect();
        LambdaStructure::new(self.ring.clone(), self.c - 1, self.labels.clone(), table, self.aug.clone(), embed, self.degree)
    }

    /// Specialization at t = 0.
    pub fn fiber_algebra(&self) -> Result<FiberAlgebra> {
        let r = self.rank();
        let mut table = vec![vec![vec![self.ring.zero(); r]; r]; r];
        for (i, row) in table.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                for (k, x) in v.iter_mut().enumerate() {
                    *x = self.table[i][j][k].at_zero(&self.ring).expect("integral");
                }
            }
        }
        let fa = FiberAlgebra { ring: self.ring.clone(), table, aug: self.aug.clone() };
        fa.validate()?;
        Ok(fa)
    }

    /// Writes an element of 𝔭 = ker λ (c ≤ 1) in the Λ-basis
    /// g_1 = t·e_1 (c = 1 only), g_i = e_i − λ̄_i·e_1.
    pub fn prime_coordinates(&self, a: &LambdaElem) -> Result<LambdaElem> {
        if self.c > 1 {
            return Err(CmodError::Unsupported("the ideal module is only built for c <= 1".into()));
        }
        let mut b = a[0].clone();
        for i in 1..self.rank() {
            b = b.add(&a[i].mul(&scalar_poly(&self.ring, self.c, &self.aug[i])));
        }
        let mut out = Vec::new();
        if self.c == 1 {
            let mut q = Poly::zero(1);
            for (m, coef) in b.terms() {
                if m[0] == 0 {
                    return Err(CmodError::InconsistentStructure("element is not in the augmentation ideal".into()));
                }
                q.add_term(vec![m[0] - 1], coef.clone());
            }
            out.push(q);
        } else if !b.is_zero() {
            return Err(CmodError::InconsistentStructure("element is not in the augmentation ideal".into()));
        }
        out.extend(a[1..].iter().cloned());
        Ok(out)
    }

    /// The g-basis of 𝔭 as elements of A.
    pub fn prime_basis(&self) -> Result<Vec<LambdaElem>> {
        if self.c > 1 {
            return Err(CmodError::Unsupported("the ideal module is only built for c <= 1".into()));
        }
        let mut out = Vec::new();
        if self.c == 1 {
            let mut g = self.zero_elem();
            g[0] = Poly::var(1, 0);
            out.push(g);
        }
        for i in 1..self.rank() {
            let mut g = self.basis_vector(i);
            g[0] = scalar_poly(&self.ring, self.c, &self.aug[i]).neg();
            out.push(g);
        }
        Ok(out)
    }
}

/// A_0 = A/tA as a free O-module.
#[derive(Clone, Debug)]
pub struct FiberAlgebra {
    ring: Dvr,
    table: Vec<Vec<Vec<DvrScalar>>>,
    aug: Vec<DvrScalar>,
}

impl FiberAlgebra {
    pub fn rank(&self) -> usize {
        self.aug.len()
    }

    pub fn ring(&self) -> &Dvr {
        &self.ring
    }

    pub fn aug(&self) -> &[DvrScalar] {
        &self.aug
    }

    pub fn product(&self, i: usize, j: usize) -> &[DvrScalar] {
        &self.table[i][j]
    }

    fn validate(&self) -> Result<()> {
        let r = self.rank();
        let ring = &self.ring;
        let bad = |m: &str| Err(CmodError::InconsistentStructure(format!("fiber algebra: {m}")));
        for i in 0..r {
            for j in 0..r {
                if self.table[i][j] != self.table[j][i] {
                    return bad("not commutative");
                }
            }
        }
        for i in 0..r {
            let li = self.left_matrix(i);
            for j in 0..r {
                let lj = self.left_matrix(j);
                // L_i L_j = L_{e_i e_j}, which is associativity on the basis.
                let prod = li.mul(ring, &lj);
                let mut target = Matrix::zeros(ring, r, r);
                for (k, c) in self.table[i][j].iter().enumerate() {
                    target = target.add(ring, &self.left_matrix(k).scale(ring, c));
                }
                if prod != target {
                    return bad("not associative");
                }
            }
        }
        Ok(())
    }

    /// Matrix of multiplication by e_i.
    pub fn left_matrix(&self, i: usize) -> OMatrix {
        let r = self.rank();
        Matrix::from_fn(r, r, |k, j| self.table[i][j][k].clone())
    }

    /// Matrix of multiplication by an element given in the basis.
    pub fn mult_matrix(&self, a: &[DvrScalar]) -> OMatrix {
        let r = self.rank();
        let mut m = Matrix::zeros(&self.ring, r, r);
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.ring, &self.left_matrix(i).scale(&self.ring, c));
            }
        }
        m
    }
}

/// M_0 = M/tM, given by the actions of the fiber variables.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberModule {
    pub rank: usize,
    pub actions: Vec<OMatrix>,
}

/// A module over A that is free of finite rank over Λ_c, given by the
/// actions of the fiber variables. Lambda variables act as scalars.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaModule {
    c: usize,
    rank: usize,
    actions: Vec<PolyMatrix>,
    degree: u32,
}

impl LambdaModule {
    pub fn new(c: usize, rank: usize, actions: Vec<PolyMatrix>, degree: u32) -> Result<Self> {
        for a in &actions {
            if a.rows() != rank || a.cols() != rank || a.nvars() != c {
                return Err(CmodError::InconsistentStructure(format!("action matrix must be {rank}x{rank} over the lambda variables")));
            }
        }
        Ok(LambdaModule { c, rank, actions: actions.into_iter().map(|a| a.truncate(degree)).collect(), degree })
    }

    /// A itself.
    pub fn regular(l: &LambdaStructure) -> Self {
        let actions = l.embed.iter().map(|e| l.mult_matrix(e)).collect();
        LambdaModule { c: l.c, rank: l.rank(), actions, degree: l.degree }
    }

    /// The ideal 𝔭 = ker λ, for c ≤ 1. Dividing by t costs one degree of
    /// precision.
    pub fn prime_ideal(l: &LambdaStructure) -> Result<Self> {
        let basis = l.prime_basis()?;
        let n = basis.len();
        let degree = if l.c == 1 { l.degree.saturating_sub(1) } else { l.degree };
        let mut actions = Vec::new();
        for e in &l.embed {
            let mut m = PolyMatrix::zeros(n, n, l.c);
            for (j, g) in basis.iter().enumerate() {
                let col = l.prime_coordinates(&l.mul(e, g))?;
                for (k, x) in col.into_iter().enumerate() {
                    m.set(k, j, x.truncate(degree));
                }
            }
            actions.push(m);
        }
        Ok(LambdaModule { c: l.c, rank: n, actions, degree })
    }

    /// Rank-one module on which each fiber variable acts by a scalar. Only
    /// meaningful for c = 0.
    pub fn character(ring: &Dvr, values: &[DvrScalar]) -> Self {
        let actions = values.iter().map(|v| PolyMatrix::scalar(1, &scalar_poly(ring, 0, v))).collect();
        LambdaModule { c: 0, rank: 1, actions, degree: 0 }
    }

    pub fn direct_sum(&self, other: &LambdaModule) -> Result<Self> {
        if self.c != other.c || self.actions.len() != other.actions.len() {
            return Err(CmodError::InconsistentStructure("direct sum of modules over different algebras".into()));
        }
        let actions = self.actions.iter().zip(&other.actions).map(|(a, b)| a.direct_sum(b)).collect();
        Ok(LambdaModule { c: self.c, rank: self.rank + other.rank, actions, degree: self.degree.min(other.degree) })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn codimension(&self) -> usize {
        self.c
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn actions(&self) -> &[PolyMatrix] {
        &self.actions
    }

    /// Action matrices of every variable of `a` (lambda first).
    pub fn variable_actions(&self, a: &AugmentedAlgebra) -> Vec<PolyMatrix> {
        let mut out: Vec<PolyMatrix> = (0..self.c).map(|l| PolyMatrix::scalar(self.rank, &Poly::var(self.c, l))).collect();
        out.extend(self.actions.iter().cloned());
        debug_assert_eq!(out.len(), a.nvars());
        out
    }

    /// Checks that the actions commute, kill every relation and realize the
    /// structure map on image variables.
    pub fn validate_for(&self, a: &AugmentedAlgebra) -> Result<()> {
        if a.codimension() != self.c || a.fiber_count() != self.actions.len() {
            return Err(CmodError::InconsistentStructure("module does not match the algebra's variables".into()));
        }
        if self.rank == 0 {
            return Ok(());
        }
        let deg = Some(self.degree);
        let names = a.names();
        for i in 0..self.actions.len() {
            for j in (i + 1)..self.actions.len() {
                let ab = self.actions[i].mul(&self.actions[j], deg);
                let ba = self.actions[j].mul(&self.actions[i], deg);
                if ab != ba {
                    return Err(CmodError::InconsistentStructure(format!(
                        "actions of {} and {} do not commute",
                        a.fiber_names()[i],
                        a.fiber_names()[j]
                    )));
                }
            }
        }
        let vars = self.variable_actions(a);
        for f in a.relations() {
            if !eval_at_matrices(f, &vars, deg).is_zero() {
                return Err(CmodError::InconsistentStructure(format!("relation {} does not act as zero", f.display(&names))));
            }
        }
        for (l, v) in a.lambda_vars().iter().enumerate() {
            if let Some(img) = &v.image {
                let lhs = eval_at_matrices(img, &vars, deg);
                if lhs != vars[l] {
                    return Err(CmodError::InconsistentStructure(format!("{} does not act as its image", v.name)));
                }
            }
        }
        Ok(())
    }

    /// M/t_v M over Λ with t_v dropped.
    pub fn specialize(&self, v: usize) -> Self {
        let images = drop_var_images(self.c, v);
        let actions = self
            .actions
            .iter()
            .map(|a| {
                let rows = (0..a.rows()).map(|i| (0..a.cols()).map(|j| a.get(i, j).compose(&images, self.c - 1)).collect()).collect();
                PolyMatrix::from_rows(self.c - 1, a.cols(), rows)
            })
            .collect();
        LambdaModule { c: self.c - 1, rank: self.rank, actions, degree: self.degree }
    }

    pub fn fiber(&self, ring: &Dvr) -> FiberModule {
        FiberModule { rank: self.rank, actions: self.actions.iter().map(|a| a.at_zero(ring).expect("integral")).collect() }
    }
}

fn drop_var_images(c: usize, v: usize) -> Vec<Poly> {
    (0..c)
        .map(|w| match w.cmp(&v) {
            std::cmp::Ordering::Less => Poly::var(c - 1, w),
            std::cmp::Ordering::Equal => Poly::zero(c - 1),
            std::cmp::Ordering::Greater => Poly::var(c - 1, w - 1),
        })
        .collect()
}

/// Outcome of comparing a presentation with a Λ-structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub passed: bool,
    pub witness: Option<String>,
}

/// Checks that the relations of `a` vanish in `l` modulo (p^N, degree > D)
/// and that image variables go where the structure map says.
pub fn consistency_check(a: &AugmentedAlgebra, l: &LambdaStructure, ctx: &TruncationContext) -> ConsistencyReport {
    let fail = |w: String| ConsistencyReport { passed: false, witness: Some(w) };
    let vars = match l.variable_elements(a) {
        Ok(v) => v,
        Err(e) => return fail(e.to_string()),
    };
    let names = a.names();
    let cut = ctx.d.min(l.degree());
    let vanishes = |e: &LambdaElem| {
        e.iter().all(|x| {
            x.truncate(cut).terms().all(|(_, coef)| match l.ring().from_rational(coef) {
                Some(s) => s.valuation().map_or(true, |v| v >= ctx.n),
                None => false,
            })
        })
    };
    for f in a.relations() {
        if !vanishes(&l.eval(f, &vars)) {
            return fail(f.display(&names).to_string());
        }
    }
    for (i, v) in a.lambda_vars().iter().enumerate() {
        if let Some(img) = &v.image {
            let diff: LambdaElem = l.eval(img, &vars).iter().zip(&vars[i]).map(|(x, y)| x.sub(y)).collect();
            if !vanishes(&diff) {
                return fail(format!("{} -> {}", v.name, img.display(&names)));
            }
        }
    }
    ConsistencyReport { passed: true, witness: None }
}
