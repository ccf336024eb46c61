use num_bigint::BigUint;

use super::ring::LocalRing;
use crate::error::{CmodError, Result};

/// The Artinian quotient O/p^N, with residues stored in `[0, p^N)`.
///
/// This is the working ring of the truncated solvers. Moduli below 2^64 take
/// a single `u128` product per multiplication; larger ones fall back to
/// big integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZpN {
    p: u128,
    n: u32,
    modulus: u128,
    small: bool,
}

impl ZpN {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(CmodError::Unsupported("precision N must be positive".into()));
        }
        let p = p as u128;
        let mut modulus: u128 = 1;
        for _ in 0..n {
            modulus = modulus
                .checked_mul(p)
                .filter(|m| *m < (1u128 << 126))
                .ok_or_else(|| CmodError::PrecisionExhausted(format!("p^{n} exceeds the 126-bit working modulus")))?;
        }
        Ok(ZpN { p, n, modulus, small: modulus < (1u128 << 64) })
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    fn mul_mod(&self, a: u128, b: u128, m: u128) -> u128 {
        if m < (1u128 << 64) {
            (a % m) * (b % m) % m
        } else {
            let r = (BigUint::from(a) * BigUint::from(b)) % BigUint::from(m);
            r.try_into().expect("reduced below modulus")
        }
    }

    /// Inverse of a unit modulo `m`.
    fn inv_mod(&self, a: u128, m: u128) -> u128 {
        if m == 1 {
            return 0;
        }
        // Newton iteration x <- x(2 - a x) doubles p-adic precision; start from
        // the inverse modulo p found by Fermat.
        let p = self.p;
        let a_p = (a % p) as u64;
        let mut x: u128 = {
            let mut base = a_p as u128;
            let mut e = p - 2;
            let mut acc: u128 = 1;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * base % p;
                }
                base = base * base % p;
                e >>= 1;
            }
            acc
        };
        let mut prec: u128 = p;
        while prec < m {
            prec = prec.saturating_mul(prec).min(m);
            let ax = self.mul_mod(a % m, x, m);
            let two_minus = (2 + m - ax % m) % m;
            x = self.mul_mod(x, two_minus, m);
        }
        x % m
    }
}

impl LocalRing for ZpN {
    type Elem = u128;

    fn zero(&self) -> u128 {
        0
    }
    fn one(&self) -> u128 {
        1 % self.modulus
    }
    fn from_i64(&self, n: i64) -> u128 {
        let m = self.modulus as i128;
        ((n as i128).rem_euclid(m)) as u128
    }
    fn add(&self, a: &u128, b: &u128) -> u128 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }
    fn sub(&self, a: &u128, b: &u128) -> u128 {
        if a >= b {
            a - b
        } else {
            self.modulus - (b - a)
        }
    }
    fn mul(&self, a: &u128, b: &u128) -> u128 {
        if self.small {
            a * b % self.modulus
        } else {
            self.mul_mod(*a, *b, self.modulus)
        }
    }
    fn neg(&self, a: &u128) -> u128 {
        if *a == 0 {
            0
        } else {
            self.modulus - a
        }
    }
    fn valuation(&self, a: &u128) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        let mut v = 0;
        let mut x = *a;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        Some(v)
    }
    fn div_exact(&self, a: &u128, b: &u128) -> u128 {
        let vb = self.valuation(b).expect("division by zero");
        if *a == 0 {
            return 0;
        }
        let pv = self.p.pow(vb);
        let a1 = a / pv;
        let b1 = b / pv;
        let m = self.modulus / pv;
        let q = self.mul_mod(a1 % m, self.inv_mod(b1 % m, m), m);
        q % self.modulus
    }
    fn uniformizer_pow(&self, e: u32) -> u128 {
        if e >= self.n {
            0
        } else {
            self.p.pow(e)
        }
    }
}
