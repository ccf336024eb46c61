use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ring::LocalRing;
use crate::error::{CmodError, Result};

/// An element of O = Z localized at p, stored as `p^exponent * unit`.
///
/// The unit is a reduced rational whose numerator and denominator are both
/// prime to p. Zero has no exponent.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DvrScalar {
    repr: Option<(u32, BigRational)>,
}

impl DvrScalar {
    pub fn zero() -> Self {
        DvrScalar { repr: None }
    }

    /// `None` stands for the valuation of zero (infinity).
    pub fn valuation(&self) -> Option<u32> {
        self.repr.as_ref().map(|(e, _)| *e)
    }

    pub fn exponent(&self) -> Option<u32> {
        self.valuation()
    }

    pub fn unit(&self) -> Option<&BigRational> {
        self.repr.as_ref().map(|(_, u)| u)
    }

    pub fn is_zero(&self) -> bool {
        self.repr.is_none()
    }
}

impl fmt::Debug for DvrScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            None => write!(f, "0"),
            Some((0, u)) => write!(f, "{u}"),
            Some((e, u)) => write!(f, "p^{e}*{u}"),
        }
    }
}

/// The ring O = Z_(p) with exact big-rational arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dvr {
    p: u64,
    p_big: BigInt,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Dvr {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(CmodError::parse(0, format!("p={p} is not a prime")));
        }
        Ok(Dvr { p, p_big: BigInt::from(p) })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    fn p_pow(&self, e: u32) -> BigInt {
        num_traits::pow(self.p_big.clone(), e as usize)
    }

    /// Splits off the p-part of a nonzero integer.
    fn split(&self, n: &BigInt) -> (u32, BigInt) {
        let mut e = 0;
        let mut n = n.clone();
        loop {
            let (q, r) = n.div_rem(&self.p_big);
            if !r.is_zero() {
                return (e, n);
            }
            n = q;
            e += 1;
        }
    }

    /// Returns `None` when the rational is not p-integral.
    pub fn from_rational(&self, r: &BigRational) -> Option<DvrScalar> {
        if r.is_zero() {
            return Some(DvrScalar::zero());
        }
        if r.denom().is_multiple_of(&self.p_big) {
            return None;
        }
        let (e, n) = self.split(r.numer());
        Some(DvrScalar { repr: Some((e, BigRational::new(n, r.denom().clone()))) })
    }

    pub fn from_int(&self, n: impl Into<BigInt>) -> DvrScalar {
        self.from_rational(&BigRational::from_integer(n.into())).expect("integers are p-integral")
    }

    pub fn to_rational(&self, s: &DvrScalar) -> BigRational {
        match &s.repr {
            None => BigRational::zero(),
            Some((e, u)) => u * BigRational::from_integer(self.p_pow(*e)),
        }
    }

    /// `p^e * unit`; panics if `unit` is not a p-unit.
    pub fn from_parts(&self, exponent: u32, unit: BigRational) -> DvrScalar {
        let s = self.from_rational(&(unit * BigRational::from_integer(self.p_pow(exponent)))).expect("unit");
        assert_eq!(s.valuation(), Some(exponent), "unit part divisible by p");
        s
    }

    /// Residue of `s` modulo `p^n`, as an integer in `[0, p^n)`.
    pub fn residue(&self, s: &DvrScalar, n: u32) -> BigInt {
        let m = self.p_pow(n);
        let r = self.to_rational(s);
        let inv = mod_inverse(r.denom(), &m);
        let v = (r.numer() * inv).mod_floor(&m);
        v
    }
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.abs().is_one());
    e.x.mod_floor(m)
}

impl LocalRing for Dvr {
    type Elem = DvrScalar;

    fn zero(&self) -> DvrScalar {
        DvrScalar::zero()
    }
    fn one(&self) -> DvrScalar {
        DvrScalar { repr: Some((0, BigRational::one())) }
    }
    fn from_i64(&self, n: i64) -> DvrScalar {
        self.from_int(n)
    }
    fn add(&self, a: &DvrScalar, b: &DvrScalar) -> DvrScalar {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        self.from_rational(&(self.to_rational(a) + self.to_rational(b))).unwrap()
    }
    fn sub(&self, a: &DvrScalar, b: &DvrScalar) -> DvrScalar {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &DvrScalar, b: &DvrScalar) -> DvrScalar {
        match (&a.repr, &b.repr) {
            (Some((e, u)), Some((f, v))) => DvrScalar { repr: Some((e + f, u * v)) },
            _ => DvrScalar::zero(),
        }
    }
    fn neg(&self, a: &DvrScalar) -> DvrScalar {
        DvrScalar { repr: a.repr.as_ref().map(|(e, u)| (*e, -u)) }
    }
    fn valuation(&self, a: &DvrScalar) -> Option<u32> {
        a.valuation()
    }
    fn div_exact(&self, a: &DvrScalar, b: &DvrScalar) -> DvrScalar {
        match (&a.repr, &b.repr) {
            (None, _) => DvrScalar::zero(),
            (Some((e, u)), Some((f, v))) => {
                assert!(e >= f, "div_exact: valuation of divisor too large");
                DvrScalar { repr: Some((e - f, u / v)) }
            }
            (Some(_), None) => panic!("division by zero"),
        }
    }
    fn uniformizer_pow(&self, e: u32) -> DvrScalar {
        DvrScalar { repr: Some((e, BigRational::one())) }
    }
}

impl DvrScalar {
    /// Small-integer view, used by tests and rendering.
    pub fn to_i64(&self, ring: &Dvr) -> Option<i64> {
        let r = ring.to_rational(self);
        if r.is_integer() {
            r.to_integer().to_i64()
        } else {
            None
        }
    }
}
