//! Truncated univariate Taylor series with a fixed coefficient budget.
//!
//! All closed-form derivatives in the crate (the hyperbolic operator, q-derivatives
//! of Wigner functions, potential derivatives) are propagated through this type.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Maximum number of coefficients carried by a [`Taylor`] series.
pub const MAX_COEFFS: usize = 16;

/// Coefficients c_k of Σ c_k t^k, k = 0..=order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Taylor {
    c: [f64; MAX_COEFFS],
    n: usize,
}

impl Taylor {
    pub fn zero(order: usize) -> Self {
        assert!(order < MAX_COEFFS, "Taylor order {order} exceeds capacity");
        Self { c: [0.0; MAX_COEFFS], n: order + 1 }
    }

    pub fn constant(v: f64, order: usize) -> Self {
        let mut t = Self::zero(order);
        t.c[0] = v;
        t
    }

    /// The series of x0 + t.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut t = Self::constant(x0, order);
        if order > 0 {
            t.c[1] = 1.0;
        }
        t
    }

    pub fn from_coeffs(coeffs: &[f64]) -> Self {
        let mut t = Self::zero(coeffs.len() - 1);
        t.c[..coeffs.len()].copy_from_slice(coeffs);
        t
    }

    pub fn order(&self) -> usize {
        self.n - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c[..self.n]
    }

    pub fn coeff(&self, k: usize) -> f64 {
        if k < self.n {
            self.c[k]
        } else {
            0.0
        }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// k-th derivative at the expansion point, k! c_k.
    pub fn derivative(&self, k: usize) -> f64 {
        self.coeff(k) * factorial(k)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, a: f64) -> Self {
        let mut t = *self;
        for v in &mut t.c[..t.n] {
            *v *= a;
        }
        t
    }

    /// Substitutes t -> a t.
    pub fn rescale_variable(&self, a: f64) -> Self {
        let mut t = *self;
        let mut p = 1.0;
        for v in &mut t.c[..t.n] {
            *v *= p;
            p *= a;
        }
        t
    }

    pub fn recip(&self) -> Self {
        let a0 = self.c[0];
        let mut r = Self::zero(self.order());
        r.c[0] = 1.0 / a0;
        for k in 1..self.n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += self.c[j] * r.c[k - j];
            }
            r.c[k] = -acc / a0;
        }
        r
    }

    pub fn div(&self, den: &Self) -> Self {
        let n = self.n.min(den.n);
        let d0 = den.c[0];
        let mut r = Self::zero(n - 1);
        for k in 0..n {
            let mut acc = self.c[k];
            for j in 1..=k {
                acc -= den.c[j] * r.c[k - j];
            }
            r.c[k] = acc / d0;
        }
        r
    }

    pub fn square(&self) -> Self {
        *self * *self
    }

    /// Evaluates the truncated series at t.
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs().iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    /// sin(x0 + t) and cos(x0 + t).
    pub fn sin_cos_at(x0: f64, order: usize) -> (Self, Self) {
        let (s0, c0) = x0.sin_cos();
        let mut s = Self::zero(order);
        let mut c = Self::zero(order);
        let mut inv_fact = 1.0;
        for k in 0..=order {
            if k > 0 {
                inv_fact /= k as f64;
            }
            // d^k sin = sin(x + kπ/2)
            let (ds, dc) = match k % 4 {
                0 => (s0, c0),
                1 => (c0, -s0),
                2 => (-s0, -c0),
                _ => (-c0, s0),
            };
            s.c[k] = ds * inv_fact;
            c.c[k] = dc * inv_fact;
        }
        (s, c)
    }

    /// sinh(x0 + t) and cosh(x0 + t).
    pub fn sinh_cosh_at(x0: f64, order: usize) -> (Self, Self) {
        let (s0, c0) = (x0.sinh(), x0.cosh());
        let mut s = Self::zero(order);
        let mut c = Self::zero(order);
        let mut inv_fact = 1.0;
        for k in 0..=order {
            if k > 0 {
                inv_fact /= k as f64;
            }
            let (ds, dc) = if k % 2 == 0 { (s0, c0) } else { (c0, s0) };
            s.c[k] = ds * inv_fact;
            c.c[k] = dc * inv_fact;
        }
        (s, c)
    }

    /// sin(x)/x about x0, removable point included.
    pub fn sinc_at(x0: f64, order: usize) -> Self {
        if x0.abs() >= 1.0 {
            let (s, _) = Self::sin_cos_at(x0, order);
            return s.div(&Self::variable(x0, order));
        }
        even_series_at(x0, order, |j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign / factorial(2 * j + 1)
        })
    }

    /// sinh(x)/x about x0, removable point included.
    pub fn sinhc_at(x0: f64, order: usize) -> Self {
        if x0.abs() >= 1.0 {
            let (s, _) = Self::sinh_cosh_at(x0, order);
            return s.div(&Self::variable(x0, order));
        }
        even_series_at(x0, order, |j| 1.0 / factorial(2 * j + 1))
    }

    /// x/sinh(x) about x0, overflow-free for large |x0|.
    pub fn x_over_sinh_at(x0: f64, order: usize) -> Self {
        if x0 < 0.0 {
            return reflect(&Self::x_over_sinh_at(-x0, order));
        }
        if x0 < 20.0 {
            return Self::sinhc_at(x0, order).recip();
        }
        // 2x e^{-x} / (1 - e^{-2x})
        let e = exp_at(-x0, order).rescale_variable(-1.0);
        let e2 = exp_at(-2.0 * x0, order).rescale_variable(-2.0);
        let num = Self::variable(x0, order) * e.scale(2.0);
        num.div(&(Self::constant(1.0, order) - e2))
    }

    /// 1/cosh(x) about x0, overflow-free for large |x0|.
    pub fn sech_at(x0: f64, order: usize) -> Self {
        if x0 < 0.0 {
            return reflect(&Self::sech_at(-x0, order));
        }
        if x0 < 20.0 {
            return Self::sinh_cosh_at(x0, order).1.recip();
        }
        let e = exp_at(-x0, order).rescale_variable(-1.0);
        let e2 = exp_at(-2.0 * x0, order).rescale_variable(-2.0);
        e.scale(2.0).div(&(Self::constant(1.0, order) + e2))
    }
}

/// exp(x0 + t).
fn exp_at(x0: f64, order: usize) -> Taylor {
    let mut t = Taylor::zero(order);
    let e = x0.exp();
    let mut inv_fact = 1.0;
    for k in 0..=order {
        if k > 0 {
            inv_fact /= k as f64;
        }
        t.c[k] = e * inv_fact;
    }
    t
}

/// Coefficients of f(-x0 - t) from those of f(x0 + t), for even f.
fn reflect(t: &Taylor) -> Taylor {
    t.rescale_variable(-1.0)
}

/// Taylor coefficients about x0 of the even series Σ_j a_j x^{2j}, for |x0| < 1.
fn even_series_at(x0: f64, order: usize, a: impl Fn(usize) -> f64) -> Taylor {
    let mut out = Taylor::zero(order);
    let jmax = order / 2 + 24;
    for j in 0..=jmax {
        let aj = a(j);
        let deg = 2 * j;
        // d/dt^m of x^deg at x0, divided by m!: C(deg, m) x0^{deg-m}
        let mut binom = 1.0;
        for m in 0..=order.min(deg) {
            if m > 0 {
                binom *= (deg - m + 1) as f64 / m as f64;
            }
            out.c[m] += aj * binom * x0.powi((deg - m) as i32);
        }
    }
    out
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}

impl Add for Taylor {
    type Output = Taylor;
    fn add(mut self, rhs: Taylor) -> Taylor {
        let n = self.n.min(rhs.n);
        self.n = n;
        for k in 0..n {
            self.c[k] += rhs.c[k];
        }
        self
    }
}

impl AddAssign for Taylor {
    fn add_assign(&mut self, rhs: Taylor) {
        *self = *self + rhs;
    }
}

impl Sub for Taylor {
    type Output = Taylor;
    fn sub(self, rhs: Taylor) -> Taylor {
        self + (-rhs)
    }
}

impl Neg for Taylor {
    type Output = Taylor;
    fn neg(self) -> Taylor {
        self.scale(-1.0)
    }
}

impl Mul for Taylor {
    type Output = Taylor;
    fn mul(self, rhs: Taylor) -> Taylor {
        let n = self.n.min(rhs.n);
        let mut out = Taylor::zero(n - 1);
        for i in 0..n {
            if self.c[i] == 0.0 {
                continue;
            }
            for j in 0..n - i {
                out.c[i + j] += self.c[i] * rhs.c[j];
            }
        }
        out
    }
}

impl Mul<f64> for Taylor {
    type Output = Taylor;
    fn mul(self, rhs: f64) -> Taylor {
        self.scale(rhs)
    }
}

/// A function of (s0 + δs, q0 + δq) to first order in δs and to a fixed order in δq:
/// `v(δq) + δs · d(δq)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseJet {
    pub v: Taylor,
    pub d: Taylor,
}

impl PhaseJet {
    pub fn new(v: Taylor, d: Taylor) -> Self {
        Self { v, d }
    }

    /// A q-independent function with value `v` and s-slope `d`.
    pub fn from_s(v: f64, d: f64, q_order: usize) -> Self {
        Self { v: Taylor::constant(v, q_order), d: Taylor::constant(d, q_order) }
    }

    pub fn zero(q_order: usize) -> Self {
        Self::from_s(0.0, 0.0, q_order)
    }

    pub fn value(&self) -> f64 {
        self.v.value()
    }

    /// ∂_s of the function.
    pub fn ds(&self) -> f64 {
        self.d.value()
    }

    /// ∂_q^k of the function.
    pub fn dq(&self, k: usize) -> f64 {
        self.v.derivative(k)
    }

    /// ∂_s ∂_q^k of the function.
    pub fn ds_dq(&self, k: usize) -> f64 {
        self.d.derivative(k)
    }

    pub fn scale(&self, a: f64) -> Self {
        Self { v: self.v.scale(a), d: self.d.scale(a) }
    }

    pub fn q_order(&self) -> usize {
        self.v.order()
    }
}

impl Add for PhaseJet {
    type Output = PhaseJet;
    fn add(self, rhs: PhaseJet) -> PhaseJet {
        PhaseJet { v: self.v + rhs.v, d: self.d + rhs.d }
    }
}

impl Sub for PhaseJet {
    type Output = PhaseJet;
    fn sub(self, rhs: PhaseJet) -> PhaseJet {
        PhaseJet { v: self.v - rhs.v, d: self.d - rhs.d }
    }
}

impl Mul for PhaseJet {
    type Output = PhaseJet;
    fn mul(self, rhs: PhaseJet) -> PhaseJet {
        PhaseJet { v: self.v * rhs.v, d: self.v * rhs.d + self.d * rhs.v }
    }
}

impl Mul<f64> for PhaseJet {
    type Output = PhaseJet;
    fn mul(self, rhs: f64) -> PhaseJet {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Taylor, b: &[f64], tol: f64) {
        for (k, (x, y)) in a.coeffs().iter().zip(b).enumerate() {
            assert!((x - y).abs() <= tol * y.abs().max(1.0), "coeff {k}: {x} vs {y}");
        }
    }

    #[test]
    fn sinc_branches_agree() {
        // Both sides of the |x0| = 1 switch.
        let a = Taylor::sinc_at(0.999_999_999, 10);
        let b = Taylor::sinc_at(1.000_000_001, 10);
        close(&a, b.coeffs(), 1e-8);
        let z = Taylor::sinc_at(0.0, 6);
        close(&z, &[1.0, 0.0, -1.0 / 6.0, 0.0, 1.0 / 120.0, 0.0, -1.0 / 5040.0], 1e-15);
    }

    #[test]
    fn x_over_sinh_matches_reciprocal() {
        for &x0 in &[0.0, 0.3, 2.0, 19.9, 20.1, 35.0, -3.0, -25.0] {
            let direct = Taylor::x_over_sinh_at(x0, 8);
            let v0 = if x0 == 0.0 { 1.0 } else { x0 / f64::sinh(x0) };
            assert!((direct.value() - v0).abs() <= 1e-14 * v0.abs(), "x0={x0}");
            // derivative check by central difference
            let h = 1e-5;
            let f = |x: f64| if x == 0.0 { 1.0 } else { x / x.sinh() };
            let fd = (f(x0 + h) - f(x0 - h)) / (2.0 * h);
            assert!((direct.coeff(1) - fd).abs() <= 1e-8 * v0.abs().max(1e-30) + 1e-12, "x0={x0}");
        }
    }

    #[test]
    fn sech_large_argument() {
        let a = Taylor::sech_at(19.99, 6);
        let b = Taylor::sech_at(20.01, 6);
        let shift = b.eval(-0.02);
        assert!((a.value() - shift).abs() < 1e-12 * a.value());
        let n = Taylor::sech_at(-1.2, 4);
        let p = Taylor::sech_at(1.2, 4);
        assert!((n.coeff(1) + p.coeff(1)).abs() < 1e-15);
    }

    #[test]
    fn arithmetic_roundtrip() {
        let x = Taylor::variable(0.4, 9);
        let (s, c) = Taylor::sin_cos_at(0.4, 9);
        let one = s.square() + c.square();
        close(&one, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 1e-14);
        let back = (s * x).div(&x);
        close(&back, s.coeffs(), 1e-12);
    }
}
