use crate::dvr::{kernel_generators_mod, module_from_presentation, rank, smith_normal_form, LocalRing, Matrix, SnfOptions, ZpN};
use crate::error::{CmodError, Result};
use crate::poly::{eval_at_matrices, AugmentedAlgebra, LambdaModule, LambdaStructure, Poly, TruncationContext};

use super::c0::c0_invariants;
use super::cotangent::{cotangent_module, order_of, residue_values};
use super::descent::congruence_module;
use super::ext1::{PrecisionLevel, MAX_ESCALATIONS};
use super::report::{ComputationPath, InvariantReport};
use super::trunc::{mod_cokernel, scalar_mod, ModMatrix, TruncSpace};

/// A deformation A → Ā = A/(f) with its checked identities.
#[derive(Clone, Debug)]
pub struct DeformationStep {
    pub elements: Vec<Poly>,
    pub orders: Vec<u32>,
    pub quotient: AugmentedAlgebra,
    pub before: InvariantReport,
    pub after: InvariantReport,
    /// How M-regularity of the sequence was certified.
    pub regularity: String,
    /// Precision levels of the truncated quotient solve, if one was used.
    pub levels: Vec<PrecisionLevel>,
}

impl DeformationStep {
    pub fn order_sum(&self) -> u32 {
        self.orders.iter().sum()
    }

    /// length Ψ(M̄) = length Ψ(M) + rank_λ(M)·Σ ord(f_i).
    pub fn psi_identity(&self) -> bool {
        self.after.psi_length as i64 == self.before.psi_length as i64 + self.before.rank_lambda as i64 * self.order_sum() as i64
    }

    /// length Φ(Ā) = length Φ(A) + Σ ord(f_i).
    pub fn phi_identity(&self) -> bool {
        self.after.phi_length == self.before.phi_length + self.order_sum()
    }

    pub fn defect_invariant(&self) -> bool {
        self.after.defect == self.before.defect
    }

    pub fn holds(&self) -> bool {
        self.psi_identity() && self.phi_identity() && self.defect_invariant()
    }
}

/// Orders of the f_i, after checking their residues are independent.
pub fn residue_orders(a: &AugmentedAlgebra, fs: &[Poly]) -> Result<Vec<u32>> {
    let ring = a.ring();
    let mut rows = Matrix::zeros(ring, 0, a.codimension());
    let mut orders = Vec::new();
    for f in fs {
        orders.push(order_of(a, f)?);
        rows.push_row(residue_values(a, f)?);
    }
    if fs.len() > a.codimension() || rank(ring, &rows) < fs.len() {
        return Err(CmodError::DependentResidues(format!("the {} residues span rank {} in (p/p^2)^*", fs.len(), rank(ring, &rows))));
    }
    Ok(orders)
}

/// The lambda variable `f` is, if it is exactly one.
fn as_lambda_var(a: &AugmentedAlgebra, f: &Poly) -> Option<usize> {
    let nv = a.nvars();
    (0..a.codimension()).find(|&l| a.lambda_vars()[l].image.is_none() && *f == Poly::var(nv, l))
}

fn working_ring(p: u64) -> Result<ZpN> {
    let bits = 64 - p.leading_zeros();
    ZpN::new(p, (100 / bits.max(1)).max(4))
}

/// Block matrix [F_1 | .. | F_n] of the f_i acting on (Λ/𝔪^D)^s.
fn element_blocks(sp: &TruncSpace, zp: &ZpN, a: &AugmentedAlgebra, m: &LambdaModule, fs: &[Poly], d: u32) -> ModMatrix {
    let ring = a.ring();
    let s = m.rank();
    let dim = s * sp.len();
    let vars = m.variable_actions(a);
    let mut out = Matrix::zeros(zp, dim, fs.len() * dim);
    for (i, f) in fs.iter().enumerate() {
        let fm = eval_at_matrices(f, &vars, Some(d.saturating_sub(1)));
        sp.place(zp, ring, &fm, &mut out, 0, i * s, false);
    }
    out
}

/// Certifies that a full-length sequence is M-regular: for some g the
/// module M/(f, g)M has finite length, detected when the length of
/// M/(f, g, 𝔪^D)M is the same for D and D + 1. Since M is Cohen–Macaulay
/// of dimension c + 1 this forces dim M/fM = 1.
pub fn certify_regular(a: &AugmentedAlgebra, m: &LambdaModule, fs: &[Poly]) -> Result<String> {
    let c = a.codimension();
    let nv = a.nvars();
    let zp = working_ring(a.prime())?;
    let p = Poly::from_int(nv, a.prime() as i64);
    let tsum = (0..c).fold(Poly::zero(nv), |acc, l| acc.add(&Poly::var(nv, l)));
    let tsq = (0..c).fold(Poly::zero(nv), |acc, l| acc.add(&Poly::var(nv, l).pow(2)));
    let candidates = [p.add(&tsum), p.sub(&tsum), p.add(&tsq)];
    let max_d = (m.degree() + 1).min(if c >= 2 { 10 } else { 24 });
    for g in &candidates {
        let mut seq: Vec<Poly> = fs.to_vec();
        seq.push(g.clone());
        let mut prev: Option<u32> = None;
        for d in 2..=max_d {
            let sp = TruncSpace::new(c, d);
            let gens = element_blocks(&sp, &zp, a, m, &seq, d);
            let module = module_from_presentation(&zp, &gens.transpose());
            let len = if module.free_rank == 0 { Some(module.length()) } else { None };
            if let (Some(x), Some(y)) = (prev, len) {
                if x == y {
                    return Ok(format!("M/(f, {})M has length {x}", g.display(&a.names())));
                }
            }
            prev = len;
        }
    }
    Err(CmodError::NotRegularElement("could not certify that the sequence is M-regular".into()))
}

/// Ψ and η of M/fM over A/(f) for a full-length sequence, in
/// A/(p^N, 𝔪^D): solve v·m ∈ fM for every presentation variable v and map
/// the solutions to tf(M/𝔭M) by the functionals of M_0.
pub fn quotient_level(a: &AugmentedAlgebra, m: &LambdaModule, fs: &[Poly], ctx: &TruncationContext) -> Result<PrecisionLevel> {
    let ring = a.ring();
    let c = a.codimension();
    let zp = ZpN::new(a.prime(), ctx.n)?;
    let d = ctx.d.min(m.degree() + 1);
    let sp = TruncSpace::new(c, d);
    let s = m.rank();
    let dim = s * sp.len();
    let g = element_blocks(&sp, &zp, a, m, fs, d);
    let snf = smith_normal_form(&zp, &g, SnfOptions { left: true, right: false });
    let u = snf.left.clone().expect("tracked");
    let vars = m.variable_actions(a);
    let mut eqs = Matrix::zeros(&zp, 0, dim);
    for &v in &a.presentation_vars() {
        let vm = sp.matrix(&zp, ring, &vars[v].truncate(d - 1));
        let uv = u.mul(&zp, &vm);
        for i in 0..dim {
            let scale = match snf.exponents.get(i) {
                Some(0) => continue,
                Some(&e) => zp.uniformizer_pow(ctx.n - e),
                None => zp.one(),
            };
            eqs.push_row(uv.row(i).iter().map(|x| zp.mul(&scale, x)).collect());
        }
    }
    let sols = kernel_generators_mod(&zp, &eqs, ctx.n);
    let fib = c0_invariants(ring, &m.fiber(ring))?;
    let k = fib.functionals.rows();
    let func: Vec<Vec<u128>> = (0..k).map(|i| fib.functionals.row(i).iter().map(|x| scalar_mod(ring, &zp, x)).collect()).collect();
    let origin = sp.origin();
    let dl = sp.len();
    let images: Vec<Vec<u128>> = sols
        .iter()
        .map(|v| {
            func.iter()
                .map(|f| f.iter().enumerate().fold(0u128, |acc, (comp, x)| zp.add(&acc, &zp.mul(x, &v[comp * dl + origin]))))
                .collect()
        })
        .collect();
    let ck = mod_cokernel(ring, &zp, k, &images);
    Ok(PrecisionLevel { n: ctx.n, d, psi_length: ck.module.length(), eta_valuation: ck.min_valuation, saturated: ck.saturated })
}

fn stabilized_quotient(a: &AugmentedAlgebra, m: &LambdaModule, fs: &[Poly], ctx: &TruncationContext) -> Result<Vec<PrecisionLevel>> {
    let mut levels = vec![quotient_level(a, m, fs, ctx)?];
    let mut cur = *ctx;
    for _ in 0..MAX_ESCALATIONS {
        cur = cur.escalate();
        let next = quotient_level(a, m, fs, &cur)?;
        let prev = levels.last().unwrap();
        let agree = !prev.saturated && !next.saturated && prev.psi_length == next.psi_length && prev.eta_valuation == next.eta_valuation;
        levels.push(next);
        if agree {
            return Ok(levels);
        }
    }
    Err(CmodError::PrecisionExhausted("the quotient congruence module did not stabilize".into()))
}

/// Deforms (A, M) by the sequence `fs` and recomputes the invariants.
///
/// Sequences made of lambda variables are handled exactly by specializing
/// the Λ-structure. Other sequences must have length c; their quotient is
/// handled by the truncated solve.
pub fn deform(
    a: &AugmentedAlgebra,
    l: &LambdaStructure,
    m: &LambdaModule,
    fs: &[Poly],
    ctx: &TruncationContext,
) -> Result<DeformationStep> {
    let before = congruence_module(a, l, m)?;
    let orders = residue_orders(a, fs)?;
    let normalized: Vec<Poly> = fs.iter().map(|f| a.normalize(f)).collect();
    let lambda_idx: Vec<Option<usize>> = normalized.iter().map(|f| as_lambda_var(a, f)).collect();
    if lambda_idx.iter().all(Option::is_some) {
        let mut idx: Vec<usize> = lambda_idx.into_iter().flatten().collect();
        idx.sort_unstable_by(|x, y| y.cmp(x));
        let (mut qa, mut ql, mut qm) = (a.clone(), l.clone(), m.clone());
        for v in idx {
            qa = qa.eliminate(v, &Poly::zero(qa.nvars() - 1))?;
            ql = ql.specialize(v)?;
            qm = qm.specialize(v);
        }
        let after = congruence_module(&qa, &ql, &qm)?;
        return Ok(DeformationStep {
            elements: fs.to_vec(),
            orders,
            quotient: qa,
            before,
            after,
            regularity: "lambda variables act freely on a lambda-free module".into(),
            levels: Vec::new(),
        });
    }
    if fs.len() != a.codimension() {
        return Err(CmodError::Unsupported(
            "partial sequences must consist of lambda variables; other sequences must have length c".into(),
        ));
    }
    let regularity = certify_regular(a, m, &normalized)?;
    let quotient = a.with_relations(fs)?;
    let levels = stabilized_quotient(a, m, &normalized, ctx)?;
    let last = levels.last().unwrap();
    let phi = cotangent_module(&quotient).torsion_part();
    let mut after = InvariantReport::new(phi, last.psi_length, last.eta_valuation, before.rank_lambda, ComputationPath::C0Direct, 0);
    after.assumptions.push(format!("Psi of the quotient from the truncated solve at N={}, D={}", last.n, last.d));
    Ok(DeformationStep { elements: fs.to_vec(), orders, quotient, before, after, regularity, levels })
}
