use std::fmt::Debug;

/// A discrete valuation ring (or one of its Artinian quotients) seen through
/// the operations the normal-form algorithms need.
///
/// `valuation` returns `None` for zero. `div_exact(a, b)` must return some `q`
/// with `q * b == a`; callers guarantee `valuation(a) >= valuation(b)`.
pub trait LocalRing: Clone + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn valuation(&self, a: &Self::Elem) -> Option<u32>;
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `ϖ^e`.
    fn uniformizer_pow(&self, e: u32) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.valuation(a).is_none()
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.valuation(a) == Some(0)
    }

    /// `a - b * c`, the elimination step.
    fn sub_mul(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(b, c))
    }
}
