//! Forward-mode dual numbers.
//!
//! `Dual<T, N>` carries a value and `N` partial derivatives. Nesting
//! (`Dual<Dual<f64, N>, N>`) yields second derivatives, and so on, which is
//! how the curvature code gets exact derivatives of closed-form metrics.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use twofloat::TwoFloat;

/// Real-like scalar usable by every generic evaluator in the crate.
pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn cst(v: f64) -> Self;
    /// Underlying real value, all derivative parts dropped.
    fn re(&self) -> f64;
    fn ln(self) -> Self;
    fn exp(self) -> Self;
    fn sqrt(self) -> Self;

    fn zero() -> Self {
        Self::cst(0.0)
    }
    fn one() -> Self {
        Self::cst(1.0)
    }
    fn recip(self) -> Self {
        Self::one() / self
    }
    fn powi(self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc *= self;
        }
        acc
    }
}

impl Scalar for f64 {
    fn cst(v: f64) -> Self {
        v
    }
    fn re(&self) -> f64 {
        *self
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
}

/// Double-double arithmetic (about 32 significant digits). Curvature of an
/// ill-conditioned metric loses roughly cond(g)^2 ulps in plain f64.
impl Scalar for TwoFloat {
    fn cst(v: f64) -> Self {
        TwoFloat::from(v)
    }
    fn re(&self) -> f64 {
        self.hi() + self.lo()
    }
    fn ln(self) -> Self {
        TwoFloat::ln(self)
    }
    fn exp(self) -> Self {
        TwoFloat::exp(self)
    }
    fn sqrt(self) -> Self {
        TwoFloat::sqrt(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T, const N: usize> {
    pub v: T,
    pub d: [T; N],
}

impl<T: Scalar, const N: usize> Dual<T, N> {
    pub fn constant(v: T) -> Self {
        Dual { v, d: [T::zero(); N] }
    }

    /// Independent variable number `i`.
    pub fn variable(v: T, i: usize) -> Self {
        let mut d = [T::zero(); N];
        d[i] = T::one();
        Dual { v, d }
    }

    /// Chain rule for a unary function with value `f` and derivative `df` at `self.v`.
    fn chain(self, f: T, df: T) -> Self {
        let mut d = self.d;
        for x in d.iter_mut() {
            *x *= df;
        }
        Dual { v: f, d }
    }
}

/// Seed a point so that evaluating `f` yields value, gradient and Hessian.
pub fn seed2<T: Scalar, const N: usize>(x: &[T; N]) -> [Dual<Dual<T, N>, N>; N] {
    std::array::from_fn(|i| Dual::variable(Dual::variable(x[i], i), i))
}

/// Seed a point for first derivatives.
pub fn seed1<T: Scalar, const N: usize>(x: &[T; N]) -> [Dual<T, N>; N] {
    std::array::from_fn(|i| Dual::variable(x[i], i))
}

impl<T: Scalar, const N: usize> Add for Dual<T, N> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual { v: self.v + o.v, d: std::array::from_fn(|i| self.d[i] + o.d[i]) }
    }
}

impl<T: Scalar, const N: usize> Sub for Dual<T, N> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual { v: self.v - o.v, d: std::array::from_fn(|i| self.d[i] - o.d[i]) }
    }
}

impl<T: Scalar, const N: usize> Mul for Dual<T, N> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Dual { v: self.v * o.v, d: std::array::from_fn(|i| self.d[i] * o.v + self.v * o.d[i]) }
    }
}

impl<T: Scalar, const N: usize> Div for Dual<T, N> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = o.v.recip();
        let q = self.v * inv;
        Dual { v: q, d: std::array::from_fn(|i| (self.d[i] - q * o.d[i]) * inv) }
    }
}

impl<T: Scalar, const N: usize> Neg for Dual<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual { v: -self.v, d: std::array::from_fn(|i| -self.d[i]) }
    }
}

impl<T: Scalar, const N: usize> Add<f64> for Dual<T, N> {
    type Output = Self;
    fn add(self, o: f64) -> Self {
        Dual { v: self.v + o, d: self.d }
    }
}

impl<T: Scalar, const N: usize> Sub<f64> for Dual<T, N> {
    type Output = Self;
    fn sub(self, o: f64) -> Self {
        Dual { v: self.v - o, d: self.d }
    }
}

impl<T: Scalar, const N: usize> Mul<f64> for Dual<T, N> {
    type Output = Self;
    fn mul(self, o: f64) -> Self {
        Dual { v: self.v * o, d: std::array::from_fn(|i| self.d[i] * o) }
    }
}

impl<T: Scalar, const N: usize> Div<f64> for Dual<T, N> {
    type Output = Self;
    fn div(self, o: f64) -> Self {
        self * (1.0 / o)
    }
}

impl<T: Scalar, const N: usize> AddAssign for Dual<T, N> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Scalar, const N: usize> SubAssign for Dual<T, N> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Scalar, const N: usize> MulAssign for Dual<T, N> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl<T: Scalar, const N: usize> Scalar for Dual<T, N> {
    fn cst(v: f64) -> Self {
        Dual::constant(T::cst(v))
    }
    fn re(&self) -> f64 {
        self.v.re()
    }
    fn ln(self) -> Self {
        self.chain(self.v.ln(), self.v.recip())
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e)
    }
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, (s * 2.0).recip())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        let x = Dual::<f64, 2>::variable(3.0, 0);
        let y = Dual::<f64, 2>::variable(2.0, 1);
        let f = x * x * y;
        assert_eq!(f.v, 18.0);
        assert_eq!(f.d, [12.0, 9.0]);
    }

    #[test]
    fn nested_second_derivatives() {
        // f = x^2 y / (1 + x), checked against hand derivatives
        let s = seed2(&[2.0_f64, 5.0]);
        let f = s[0] * s[0] * s[1] / (s[0] + 1.0);
        let (x, y) = (2.0_f64, 5.0_f64);
        let fx = y * (x * x + 2.0 * x) / (1.0 + x).powi(2);
        let fxx = y * 2.0 / (1.0 + x).powi(3);
        let fxy = (x * x + 2.0 * x) / (1.0 + x).powi(2);
        assert!((f.v.d[0] - fx).abs() < 1e-14);
        assert!((f.d[0].v - fx).abs() < 1e-14);
        assert!((f.d[0].d[0] - fxx).abs() < 1e-14);
        assert!((f.d[1].d[0] - fxy).abs() < 1e-14);
        assert!((f.d[0].d[1] - fxy).abs() < 1e-14);
        assert_eq!(f.d[1].d[1], 0.0);
    }

    #[test]
    fn transcendental() {
        let x = Dual::<f64, 1>::variable(0.7, 0);
        assert!((x.ln().d[0] - 1.0 / 0.7).abs() < 1e-15);
        assert!((x.exp().d[0] - 0.7_f64.exp()).abs() < 1e-15);
        assert!((x.sqrt().d[0] - 0.5 / 0.7_f64.sqrt()).abs() < 1e-15);
        assert!((x.powi(3).d[0] - 3.0 * 0.49).abs() < 1e-15);
    }
}
