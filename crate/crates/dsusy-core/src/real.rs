//! Generic scalar arithmetic with forward-mode duals.
//!
//! Every formula in this crate (superpotentials, deforming functions, `g`)
//! is written once, generically over [`Real`]. Plugging in `f64` evaluates
//! the value; plugging in nested [`Dual`] layers produces exact partial
//! derivatives to machine precision, which the identity checks need (finite
//! differences top out around 1e-8).

use core::ops::{Add, Div, Mul, Neg, Sub};

pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn lift(v: f64) -> Self;
    /// Underlying value with all infinitesimal parts stripped.
    fn primal(self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;

    fn recip(self) -> Self {
        Self::lift(1.0) / self
    }
    fn tan(self) -> Self {
        self.sin() / self.cos()
    }
    fn sinh(self) -> Self {
        let e = self.exp();
        (e - e.recip()) * Self::lift(0.5)
    }
    fn cosh(self) -> Self {
        let e = self.exp();
        (e + e.recip()) * Self::lift(0.5)
    }
    fn coth(self) -> Self {
        self.cosh() / self.sinh()
    }
    fn powi(self, n: i32) -> Self {
        let mut acc = Self::lift(1.0);
        let (mut base, mut k) = if n < 0 { (self.recip(), -n) } else { (self, n) };
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }
}

impl Real for f64 {
    fn lift(v: f64) -> f64 {
        v
    }
    fn primal(self) -> f64 {
        self
    }
    fn sin(self) -> f64 {
        libm::sin(self)
    }
    fn cos(self) -> f64 {
        libm::cos(self)
    }
    fn exp(self) -> f64 {
        libm::exp(self)
    }
    fn ln(self) -> f64 {
        libm::log(self)
    }
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }
}

/// First-order jet `re + du * eps` with `eps^2 = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub du: T,
}

impl<T: Real> Dual<T> {
    /// Seed as the differentiation variable (unit infinitesimal).
    pub fn var(v: T) -> Self {
        Dual { re: v, du: T::lift(1.0) }
    }
    /// Treat as a constant.
    pub fn con(v: T) -> Self {
        Dual { re: v, du: T::lift(0.0) }
    }
}

impl<T: Real> Add for Dual<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual { re: self.re + o.re, du: self.du + o.du }
    }
}

impl<T: Real> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual { re: self.re - o.re, du: self.du - o.du }
    }
}

impl<T: Real> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Dual {
            re: self.re * o.re,
            du: self.du * o.re + self.re * o.du,
        }
    }
}

impl<T: Real> Div for Dual<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = o.re.recip();
        Dual {
            re: self.re * inv,
            du: (self.du - self.re * inv * o.du) * inv,
        }
    }
}

impl<T: Real> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual { re: -self.re, du: -self.du }
    }
}

impl<T: Real> Real for Dual<T> {
    fn lift(v: f64) -> Self {
        Dual::con(T::lift(v))
    }
    fn primal(self) -> f64 {
        self.re.primal()
    }
    fn sin(self) -> Self {
        Dual { re: self.re.sin(), du: self.du * self.re.cos() }
    }
    fn cos(self) -> Self {
        Dual { re: self.re.cos(), du: -(self.du * self.re.sin()) }
    }
    fn exp(self) -> Self {
        let e = self.re.exp();
        Dual { re: e, du: self.du * e }
    }
    fn ln(self) -> Self {
        Dual { re: self.re.ln(), du: self.du / self.re }
    }
    fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        Dual { re: s, du: self.du / (s + s) }
    }
}

pub type D1 = Dual<f64>;
pub type D2 = Dual<Dual<f64>>;
pub type D3 = Dual<Dual<Dual<f64>>>;

/// d/dx of a single-variable expression.
pub fn deriv(f: impl Fn(D1) -> D1, x: f64) -> f64 {
    f(Dual::var(x)).du
}

/// (value, d/dx).
pub fn value_and_deriv(f: impl Fn(D1) -> D1, x: f64) -> (f64, f64) {
    let r = f(Dual::var(x));
    (r.re, r.du)
}

/// Mixed partial d2/dxdy of a two-variable expression.
pub fn deriv_xy(f: impl Fn(D2, D2) -> D2, x: f64, y: f64) -> f64 {
    let xx: D2 = Dual::con(Dual::var(x));
    let yy: D2 = Dual { re: Dual::con(y), du: Dual::con(1.0) };
    f(xx, yy).du.du
}

/// Third mixed partial d3/(dy^2 dx).
pub fn deriv_xyy(f: impl Fn(D3, D3) -> D3, x: f64, y: f64) -> f64 {
    let xx: D3 = Dual::con(Dual::con(Dual::var(x)));
    // y carries a unit infinitesimal in both outer layers
    let yy: D3 = Dual {
        re: Dual { re: Dual::con(y), du: Dual::con(1.0) },
        du: Dual { re: Dual::con(1.0), du: Dual::con(0.0) },
    };
    f(xx, yy).du.du.du
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_derivative_matches_analytic() {
        // d/dx [x^2 sin x] = 2x sin x + x^2 cos x
        let f = |x: D1| x * x * x.sin();
        let x = 0.7;
        let want = 2.0 * x * x.sin() + x * x * x.cos();
        assert!((deriv(f, x) - want).abs() < 1e-15);
    }

    #[test]
    fn chain_rules_through_transcendentals() {
        let f = |x: D1| (x.sqrt().ln() + x.exp().cos()).tan();
        let x = 1.3;
        let h = 1e-6;
        let g = |x: f64| (x.sqrt().ln() + x.exp().cos()).tan();
        let fd = (g(x + h) - g(x - h)) / (2.0 * h);
        assert!((deriv(f, x) - fd).abs() < 1e-8);
    }

    #[test]
    fn mixed_second_partial() {
        // w = x^2 y^3: d2w/dxdy = 6 x y^2
        let f = |x: D2, y: D2| x * x * y * y * y;
        assert!((deriv_xy(f, 2.0, 3.0) - 6.0 * 2.0 * 9.0).abs() < 1e-12);
    }

    #[test]
    fn third_mixed_partial() {
        // w = x sin(y^2): d3w/dy2dx = d2/dy2 sin(y^2) = 2cos(y^2) - 4y^2 sin(y^2)
        let f = |x: D3, y: D3| x * (y * y).sin();
        let y: f64 = 0.9;
        let want = 2.0 * (y * y).cos() - 4.0 * y * y * (y * y).sin();
        assert!((deriv_xyy(f, 1.7, y) - want).abs() < 1e-12);
    }

    #[test]
    fn affine_in_y_has_vanishing_third_mixed() {
        let f = |x: D3, y: D3| y * x.sin() + x.cos();
        assert!(deriv_xyy(f, 0.4, 2.2).abs() == 0.0);
    }

    #[test]
    fn powi_negative_exponents() {
        let x = 1.7_f64;
        assert!((x.powi(-3) - 1.0 / (x * x * x)).abs() < 1e-15);
    }
}
