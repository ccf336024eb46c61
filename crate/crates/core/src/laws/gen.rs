//! Generated algebras, written in the input grammar and parsed back.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::poly::{parse_input, AugmentedAlgebra, InputFile, LambdaModule, LambdaStructure};

/// Degree at which generated Λ-structures are truncated.
pub const STRUCTURE_DEGREE: u32 = 12;

pub const PRIMES: [u64; 3] = [2, 3, 5];

/// A generated (A, λ) together with the text it was parsed from.
#[derive(Clone, Debug)]
pub struct Generated {
    pub text: String,
    pub input: InputFile,
    pub structure: LambdaStructure,
}

impl Generated {
    pub fn from_text(text: String) -> Result<Self> {
        let input = parse_input(&text)?;
        let structure = match &input.structure {
            Some(l) => l.clone(),
            None => LambdaStructure::for_regular(&input.algebra, STRUCTURE_DEGREE)?,
        };
        Ok(Generated { text, input, structure })
    }

    pub fn algebra(&self) -> &AugmentedAlgebra {
        &self.input.algebra
    }

    pub fn regular_module(&self) -> LambdaModule {
        LambdaModule::regular(&self.structure)
    }
}

fn label(names: &[String], subset: usize) -> String {
    if subset == 0 {
        return "1".into();
    }
    names.iter().enumerate().filter(|(j, _)| subset >> j & 1 == 1).map(|(_, n)| n.as_str()).collect::<Vec<_>>().join("_")
}

/// Λ-structure block for a tensor product of rank-two factors
/// Λ[x_j]/(x_j² − g_j x_j), with basis the square-free monomials.
fn tensor_structure(names: &[String], g: &[String], degree: Option<u32>) -> String {
    let n = names.len();
    let size = 1usize << n;
    let mut out = String::from("[lambda-structure]\nbasis ");
    out += &(0..size).map(|s| label(names, s)).collect::<Vec<_>>().join(", ");
    out += "\n";
    if let Some(d) = degree {
        out += &format!("truncation {d}\n");
    }
    for s in 1..size {
        for t in s..size {
            let shared: Vec<String> = (0..n).filter(|j| (s & t) >> j & 1 == 1).map(|j| format!("({})", g[j])).collect();
            let coeff = if shared.is_empty() { "1".to_string() } else { shared.join("*") };
            let mut entries = vec!["0".to_string(); size];
            entries[s | t] = coeff;
            out += &format!("mult {}*{} = [{}]\n", label(names, s), label(names, t), entries.join(", "));
        }
    }
    out
}

/// O[x_1..x_r]/(x_i² − p^{m_i} x_i, x_i x_j), the ring of r-tuples of
/// elements of O congruent mod p^{m_i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberProductSpec {
    pub p: u64,
    pub exponents: Vec<u32>,
}

/// Closed forms for a fiber product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiberProductOracle {
    pub phi: u32,
    pub psi: u32,
    pub defect: i64,
}

impl FiberProductSpec {
    pub fn new(p: u64, exponents: Vec<u32>) -> Self {
        assert!(!exponents.is_empty() && exponents.iter().all(|&m| m >= 1), "exponents must be positive");
        FiberProductSpec { p, exponents }
    }

    pub fn random(rng: &mut ChaCha8Rng, max_r: usize, max_m: u32) -> Self {
        let p = PRIMES[rng.gen_range(0..PRIMES.len())];
        let r = rng.gen_range(1..=max_r);
        FiberProductSpec::new(p, (0..r).map(|_| rng.gen_range(1..=max_m)).collect())
    }

    pub fn names(&self) -> Vec<String> {
        (1..=self.exponents.len()).map(|i| format!("x{i}")).collect()
    }

    pub fn text(&self) -> String {
        let names = self.names();
        let p = self.p;
        let mut out = format!("p={p}; fiber {}\n", names.join(", "));
        for (x, m) in names.iter().zip(&self.exponents) {
            out += &format!("rel {x}^2 - {p}^{m}*{x}\n");
        }
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                out += &format!("rel {}*{}\n", names[i], names[j]);
            }
        }
        out += "[lambda-structure]\nbasis 1, ";
        out += &names.join(", ");
        out += "\n";
        for (i, (x, m)) in names.iter().zip(&self.exponents).enumerate() {
            let mut entries = vec!["0".to_string(); names.len() + 1];
            entries[i + 1] = format!("{p}^{m}");
            out += &format!("mult {x}*{x} = [{}]\n", entries.join(", "));
        }
        out
    }

    pub fn oracle(&self) -> FiberProductOracle {
        let sum: u32 = self.exponents.iter().sum();
        let max = *self.exponents.iter().max().unwrap();
        FiberProductOracle { phi: sum, psi: max, defect: (sum - max) as i64 }
    }

    /// The fiber product on the first r − 1 factors.
    pub fn drop_last(&self) -> Option<Self> {
        (self.exponents.len() > 1).then(|| FiberProductSpec::new(self.p, self.exponents[..self.exponents.len() - 1].to_vec()))
    }
}

pub fn gen_fiber_product(spec: &FiberProductSpec) -> Result<(Generated, FiberProductOracle)> {
    Ok((Generated::from_text(spec.text())?, spec.oracle()))
}

/// One factor x² − (p^a + p^b t_l) x of a generated complete intersection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CiFactor {
    pub a: u32,
    pub twist: Option<(usize, u32)>,
}

/// Λ_c[x_1..x_n]/(x_j² − g_j x_j) with g_j ∈ p^{a_j} + p^{b_j} t_{l_j}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CiSpec {
    pub p: u64,
    pub c: usize,
    pub factors: Vec<CiFactor>,
}

impl CiSpec {
    pub fn random(rng: &mut ChaCha8Rng, c: usize, size: usize) -> Self {
        let p = PRIMES[rng.gen_range(0..PRIMES.len())];
        let factors = (0..size)
            .map(|_| {
                let a = rng.gen_range(1..=4);
                let twist = (c > 0 && rng.gen_bool(0.7)).then(|| (rng.gen_range(0..c), rng.gen_range(0..=3)));
                CiFactor { a, twist }
            })
            .collect();
        CiSpec { p, c, factors }
    }

    pub fn lambda_names(&self) -> Vec<String> {
        if self.c == 1 {
            vec!["t".into()]
        } else {
            (1..=self.c).map(|i| format!("t{i}")).collect()
        }
    }

    pub fn fiber_names(&self) -> Vec<String> {
        (1..=self.factors.len()).map(|i| format!("x{i}")).collect()
    }

    fn g(&self, f: &CiFactor) -> String {
        let p = self.p;
        match f.twist {
            None => format!("{p}^{}", f.a),
            Some((l, b)) => format!("{p}^{} + {p}^{b}*{}", f.a, self.lambda_names()[l]),
        }
    }

    pub fn text(&self) -> String {
        let mut out = format!("p={}", self.p);
        if self.c > 0 {
            out += &format!("; lambda {}", self.lambda_names().join(", "));
        }
        let names = self.fiber_names();
        if names.is_empty() {
            return out + "\n";
        }
        out += &format!("; fiber {}\n", names.join(", "));
        let g: Vec<String> = self.factors.iter().map(|f| self.g(f)).collect();
        for (x, gj) in names.iter().zip(&g) {
            out += &format!("rel {x}^2 - ({gj})*{x}\n");
        }
        out + &tensor_structure(&names, &g, (self.c > 0).then_some(STRUCTURE_DEGREE))
    }

    /// Σ a_j, which is both Φ and Ψ of A.
    pub fn oracle_length(&self) -> u32 {
        self.factors.iter().map(|f| f.a).sum()
    }

    pub fn drop_last(&self) -> Option<Self> {
        (!self.factors.is_empty()).then(|| CiSpec { factors: self.factors[..self.factors.len() - 1].to_vec(), ..self.clone() })
    }
}

/// A seeded complete intersection with c lambda variables and `size`
/// fiber variables.
pub fn gen_ci(seed: u64, c: usize, size: usize) -> Result<Generated> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Generated::from_text(CiSpec::random(&mut rng, c, size).text())
}

/// Λ_c itself.
pub fn lambda_text(p: u64, c: usize) -> String {
    CiSpec { p, c, factors: Vec::new() }.text()
}

/// O[[s]] over Λ_1 by t ↦ p^k s + s².
pub fn twisted_text(p: u64, k: u32) -> String {
    format!("p={p}; lambda t -> {p}^{k}*s + s^2; fiber s\n")
}

/// A regular member: Λ_c or a twisted power series ring.
pub fn random_regular(rng: &mut ChaCha8Rng) -> String {
    let p = PRIMES[rng.gen_range(0..PRIMES.len())];
    if rng.gen_bool(0.5) {
        lambda_text(p, rng.gen_range(0..=2))
    } else {
        twisted_text(p, rng.gen_range(1..=4))
    }
}

/// Second-projection characters O_(i): x_i acts by `values[i]`, the other
/// fiber variables by 0. Only for c = 0.
pub fn projection_modules(g: &Generated, values: &[String]) -> Result<Vec<(String, LambdaModule)>> {
    let mut text = g.text.clone();
    for i in 0..values.len() {
        let mut v = vec!["0".to_string(); values.len()];
        v[i] = values[i].clone();
        text += &format!("[module O{}]\ncharacter = [{}]\n", i + 1, v.join(", "));
    }
    Ok(parse_input(&text)?.modules.into_iter().map(|b| (b.name, b.module)).collect())
}
