//! Forward-mode automatic differentiation with dual numbers.
//!
//! The kinematics are written generically over [`Scalar`], so evaluating them
//! with [`Dual<f64>`] yields exact first derivatives and with
//! `Dual<Dual<f64>>` exact second derivatives. Derivatives obtained this way
//! are bit-identical to the analytic expressions; no finite differencing is
//! involved.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar arithmetic required by the closed-form kinematics.
///
/// Implemented for `f64` and for [`Dual<T>`] over any other `Scalar`, which
/// makes nesting (`Dual<Dual<f64>>`) possible.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(v: f64) -> Self;
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    /// Value part, with all derivative information stripped.
    fn value(self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    /// Multiply by a plain constant (no derivative).
    fn scale(self, c: f64) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn from_f64(v: f64) -> Self {
        v
    }
    #[inline]
    fn value(self) -> f64 {
        self
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
    #[inline]
    fn scale(self, c: f64) -> Self {
        self * c
    }
}

/// Dual number `re + du·ε` with `ε² = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual<T: Scalar> {
    pub re: T,
    pub du: T,
}

impl<T: Scalar> Dual<T> {
    #[inline]
    pub fn new(re: T, du: T) -> Self {
        Dual { re, du }
    }

    /// Lift a value with zero derivative.
    #[inline]
    pub fn constant(re: T) -> Self {
        Dual { re, du: T::zero() }
    }

    /// Lift a value seeded as the differentiation variable (derivative 1).
    #[inline]
    pub fn variable(re: T) -> Self {
        Dual { re, du: T::one() }
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Dual::new(self.re + rhs.re, self.du + rhs.du)
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Dual::new(self.re - rhs.re, self.du - rhs.du)
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Dual::new(self.re * rhs.re, self.re * rhs.du + self.du * rhs.re)
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        let inv = T::one() / rhs.re;
        Dual::new(
            self.re * inv,
            (self.du * rhs.re - self.re * rhs.du) * inv * inv,
        )
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.du)
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    #[inline]
    fn from_f64(v: f64) -> Self {
        Dual::constant(T::from_f64(v))
    }
    #[inline]
    fn value(self) -> f64 {
        self.re.value()
    }
    #[inline]
    fn sin(self) -> Self {
        Dual::new(self.re.sin(), self.du * self.re.cos())
    }
    #[inline]
    fn cos(self) -> Self {
        Dual::new(self.re.cos(), -(self.du * self.re.sin()))
    }
    #[inline]
    fn scale(self, c: f64) -> Self {
        Dual::new(self.re.scale(c), self.du.scale(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn first_derivative_of_product_and_trig() {
        // f(x) = x^2 * sin(x), f'(x) = 2x sin(x) + x^2 cos(x)
        let x = 0.7_f64;
        let d = Dual::variable(x);
        let f = d * d * d.sin();
        assert_relative_eq!(f.re, x * x * x.sin(), max_relative = 1e-15);
        assert_relative_eq!(
            f.du,
            2.0 * x * x.sin() + x * x * x.cos(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn nested_duals_give_second_derivatives() {
        // f(x) = sin(x) / x, f''(x) known in closed form.
        let x = 1.3_f64;
        let xi: Dual<Dual<f64>> = Dual::variable(Dual::variable(x));
        let f = xi.sin() / xi;
        let f2 = f.du.du; // d^2 f / dx^2
        let expected = -x.sin() / x + 2.0 * x.sin() / (x * x * x) - 2.0 * x.cos() / (x * x);
        assert_relative_eq!(f2, expected, max_relative = 1e-13);
    }

    #[test]
    fn division_rule() {
        let x = 2.0_f64;
        let d = Dual::variable(x);
        let f = Dual::constant(1.0) / (d * d + Dual::constant(1.0));
        // f = 1/(x^2+1), f' = -2x/(x^2+1)^2
        assert_relative_eq!(f.du, -2.0 * x / ((x * x + 1.0) * (x * x + 1.0)), max_relative = 1e-14);
    }
}
