//! The kernels f, g, h and the hyperbolic derivative operator 𝒟 = −(1/sinh 2s) d/ds.
//!
//! With u = cosh 2s the operator is 𝒟 = −2 d/du, so 𝒟ⁿF = (−2)ⁿ n! [uⁿ]F.
//! Each kernel is a q-dependent prefactor times an even function of s that
//! solves a hypergeometric-type ODE in u,
//!
//! ```text
//!   (u² − 1) y'' + (αu + β) y' + (γ₀ + q²) y = 0,
//! ```
//!
//! so its u-Taylor coefficients follow from a three-term recurrence. Near
//! u = 1 the regular power series in v = u − 1 is summed and re-expanded;
//! elsewhere the recurrence runs from the closed-form value and slope.
//! Coefficients are themselves Taylor series in δq, which yields the exact
//! q-derivatives needed by the current series.

use crate::error::{Error, Result};
use crate::taylor::{PhaseJet, Taylor};

/// Beyond this v = cosh 2s − 1 the recurrence at u0 is used instead of the series at u = 1.
const V_SERIES_MAX: f64 = 1.0;
const SERIES_MAX_TERMS: usize = 600;
/// Highest operator order served.
pub const MAX_OPERATOR_ORDER: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kernel {
    /// f = sin(2qs) / (sinh 2s · sinh πq)
    F,
    /// g = cos(2qs) / (2 cosh s · cosh πq)
    G,
    /// h = sin(2qs) / (2 sinh s · cosh πq)
    H,
}

impl Kernel {
    /// (α, β, γ₀) of the u-ODE and the value of the even factor at s = 0.
    fn ode(self) -> (f64, f64, f64, f64) {
        match self {
            Kernel::F => (3.0, 0.0, 1.0, 1.0),
            Kernel::G => (2.0, -1.0, 0.25, 1.0),
            Kernel::H => (2.0, 1.0, 0.25, 2.0),
        }
    }

    pub fn eval(self, s: f64, q: f64) -> f64 {
        match self {
            Kernel::F => kernel_f(s, q),
            Kernel::G => kernel_g(s, q),
            Kernel::H => kernel_h(s, q),
        }
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// x / sinh x, with the removable point.
fn x_over_sinh(x: f64) -> f64 {
    let a = x.abs();
    if a < 1e-4 {
        1.0 - x * x / 6.0
    } else if a > 20.0 {
        2.0 * a * (-a).exp() / (1.0 - (-2.0 * a).exp())
    } else {
        x / x.sinh()
    }
}

fn sech(x: f64) -> f64 {
    let a = x.abs();
    if a > 20.0 {
        2.0 * (-a).exp() / (1.0 + (-2.0 * a).exp())
    } else {
        1.0 / a.cosh()
    }
}

/// f(s, q) = sin(2qs) / (sinh 2s sinh πq); f(0, 0) = 1/π.
pub fn kernel_f(s: f64, q: f64) -> f64 {
    let two_s = 2.0 * s;
    x_over_sinh(two_s) * sinc(two_s * q) * x_over_sinh(std::f64::consts::PI * q) / std::f64::consts::PI
}

/// g(s, q) = cos(2qs) / (2 cosh s cosh πq); g(0, 0) = 1/2.
pub fn kernel_g(s: f64, q: f64) -> f64 {
    0.5 * (2.0 * q * s).cos() * sech(s) * sech(std::f64::consts::PI * q)
}

/// h(s, q) = sin(2qs) / (2 sinh s cosh πq); h(0, q) = q / cosh πq.
pub fn kernel_h(s: f64, q: f64) -> f64 {
    x_over_sinh(s) * sinc(2.0 * q * s) * q * sech(std::f64::consts::PI * q)
}

/// The three kernels as plain function values, for callers that want to pass them around.
#[derive(Clone, Copy)]
pub struct KernelTriple {
    pub f: fn(f64, f64) -> f64,
    pub g: fn(f64, f64) -> f64,
    pub h: fn(f64, f64) -> f64,
}

impl Default for KernelTriple {
    fn default() -> Self {
        Self { f: kernel_f, g: kernel_g, h: kernel_h }
    }
}

/// u-Taylor coefficients T[n] (n = 0..=u_order) of `kernel` at (s0, q0), each a series in δq.
pub fn kernel_u_table(kernel: Kernel, s0: f64, q0: f64, u_order: usize, q_order: usize) -> Result<Vec<Taylor>> {
    if u_order > MAX_OPERATOR_ORDER + 1 {
        return Err(Error::Unsupported(format!("operator order {u_order} exceeds {MAX_OPERATOR_ORDER}")));
    }
    let s = s0.abs();
    let sh = s.sinh();
    let v0 = 2.0 * sh * sh;
    let q = Taylor::variable(q0, q_order);
    let q2 = q.square();
    let mut table = if v0 <= V_SERIES_MAX {
        series_table(kernel, v0, &q2, u_order)?
    } else {
        recurrence_table(kernel, s, &q, &q2, u_order)
    };
    let pre = prefactor(kernel, q0, q_order);
    for t in &mut table {
        *t = *t * pre;
    }
    Ok(table)
}

/// The q-only factor multiplying the even part of each kernel.
fn prefactor(kernel: Kernel, q0: f64, q_order: usize) -> Taylor {
    use std::f64::consts::PI;
    match kernel {
        Kernel::F => Taylor::x_over_sinh_at(PI * q0, q_order).rescale_variable(PI).scale(1.0 / PI),
        Kernel::G => Taylor::sech_at(PI * q0, q_order).rescale_variable(PI).scale(0.5),
        Kernel::H => Taylor::sech_at(PI * q0, q_order).rescale_variable(PI).scale(0.5) * Taylor::variable(q0, q_order),
    }
}

/// Power series about u = 1 re-expanded at v0.
fn series_table(kernel: Kernel, v0: f64, q2: &Taylor, u_order: usize) -> Result<Vec<Taylor>> {
    let (alpha, beta, gamma0, a0) = kernel.ode();
    let q_order = q2.order();
    let mut table = vec![Taylor::zero(q_order); u_order + 1];
    let mut scale = vec![0.0_f64; u_order + 1];
    let mut a = Taylor::constant(a0, q_order);
    let mut quiet = 0;
    for k in 0..SERIES_MAX_TERMS {
        // contribution of a_k v^k to [δu^n]: C(k, n) v0^{k-n} a_k
        let mut biggest = 0.0_f64;
        let mut binom = 1.0;
        let top = k.min(u_order);
        for n in 0..=top {
            if n > 0 {
                binom *= (k - n + 1) as f64 / n as f64;
            }
            let w = binom * v0.powi((k - n) as i32);
            let term = a.scale(w);
            let mag = term.max_abs();
            scale[n] = scale[n].max(mag);
            if scale[n] > 0.0 {
                biggest = biggest.max(mag / scale[n]);
            }
            table[n] += term;
        }
        if k > u_order + 2 && biggest < 1e-18 {
            quiet += 1;
            if quiet >= 3 {
                return Ok(table);
            }
        } else {
            quiet = 0;
        }
        let kf = k as f64;
        let num = Taylor::constant(kf * (kf - 1.0) + alpha * kf + gamma0, q_order) + *q2;
        let den = (kf + 1.0) * (2.0 * kf + alpha + beta);
        a = (num * a).scale(-1.0 / den);
    }
    Err(Error::Precision(format!("kernel series at v = {v0} did not converge in {SERIES_MAX_TERMS} terms")))
}

/// Three-term recurrence at u0 = cosh 2s from closed-form value and u-slope.
fn recurrence_table(kernel: Kernel, s: f64, q: &Taylor, q2: &Taylor, u_order: usize) -> Vec<Taylor> {
    let (alpha, beta, gamma0, _) = kernel.ode();
    let q_order = q.order();
    let (sh, ch) = (s.sinh(), s.cosh());
    let u0 = (2.0 * s).cosh();
    let u2m1 = (2.0 * s).sinh().powi(2);
    let du_ds = 2.0 * (2.0 * s).sinh();
    let (sin2qs, cos2qs) = {
        let (sn, cs) = Taylor::sin_cos_at(2.0 * s * q.value(), q_order);
        (sn.rescale_variable(2.0 * s), cs.rescale_variable(2.0 * s))
    };
    let sinc2qs = Taylor::sinc_at(2.0 * s * q.value(), q_order).rescale_variable(2.0 * s);
    let (y0, dy) = match kernel {
        Kernel::F => {
            // P = sin(2qs) / (q sinh 2s);  dP/du = (cos 2qs − u P) / (u² − 1)
            let p = sinc2qs.scale(2.0 * s / (2.0 * s).sinh());
            let dp = (cos2qs - p.scale(u0)).scale(1.0 / u2m1);
            (p, dp)
        }
        Kernel::G => {
            // G = cos(2qs) / cosh s
            let g = cos2qs.scale(1.0 / ch);
            let dg_ds = (*q * sin2qs).scale(-2.0 / ch) - cos2qs.scale(sh / (ch * ch));
            (g, dg_ds.scale(1.0 / du_ds))
        }
        Kernel::H => {
            // H = sin(2qs) / (q sinh s)
            let h = sinc2qs.scale(2.0 * s / sh);
            let dh_ds = (cos2qs.scale(2.0) - h.scale(ch)).scale(1.0 / sh);
            (h, dh_ds.scale(1.0 / du_ds))
        }
    };
    let mut c = Vec::with_capacity(u_order + 2);
    c.push(y0);
    c.push(dy);
    for n in 0..u_order.saturating_sub(1) {
        let nf = n as f64;
        let lin = ((2.0 * nf + alpha) * u0 + beta) * (nf + 1.0);
        let cst = Taylor::constant(nf * (nf - 1.0) + nf * alpha + gamma0, q_order) + *q2;
        let next = (c[n + 1].scale(-lin) - cst * c[n]).scale(1.0 / (u2m1 * (nf + 2.0) * (nf + 1.0)));
        c.push(next);
    }
    c.truncate(u_order + 1);
    c
}

/// 𝒟ⁿ of a kernel as a phase jet, from its u-table (needs entries up to n + 1).
pub(crate) fn operator_jet(table: &[Taylor], n: usize, s0: f64) -> PhaseJet {
    let fact: f64 = (1..=n).fold(1.0, |a, k| a * k as f64);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let c = sign * 2f64.powi(n as i32) * fact;
    let du_ds = 2.0 * (2.0 * s0).sinh();
    PhaseJet { v: table[n].scale(c), d: table[n + 1].scale(c * (n as f64 + 1.0) * du_ds) }
}

/// 𝒟^order applied to a linear combination of kernels at (s, q).
pub fn hyperbolic_derivative_combination(order: usize, terms: &[(f64, Kernel)], s: f64, q: f64) -> Result<f64> {
    if order > MAX_OPERATOR_ORDER {
        return Err(Error::Unsupported(format!("operator order {order} exceeds {MAX_OPERATOR_ORDER}")));
    }
    let mut acc = 0.0;
    for &(c, k) in terms {
        let t = kernel_u_table(k, s, q, order, 0)?;
        let fact: f64 = (1..=order).fold(1.0, |a, j| a * j as f64);
        acc += c * (-2f64).powi(order as i32) * fact * t[order].value();
    }
    Ok(acc)
}

/// 𝒟^order F(s, q) for one of the three kernels, by exact Taylor propagation.
pub fn hyperbolic_derivative_operator(order: usize, kernel: Kernel, s: f64, q: f64) -> Result<f64> {
    hyperbolic_derivative_combination(order, &[(1.0, kernel)], s, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_breakpoints, QuadOptions};
    use std::f64::consts::PI;

    #[test]
    fn kernel_examples() {
        assert!((kernel_f(0.0, 0.0) - 1.0 / PI).abs() < 1e-16);
        assert!((kernel_f(1.0, 1.0) - 2f64.sin() / (2f64.sinh() * PI.sinh())).abs() < 1e-16);
        assert!((kernel_f(1.0, 1.0) - 0.021_709).abs() < 1e-6);
        assert!((kernel_f(0.0, 2.0) - 2.0 / (2.0 * PI).sinh()).abs() < 1e-17);
        assert!((kernel_g(0.0, 0.0) - 0.5).abs() < 1e-16);
        assert!((kernel_h(0.0, 1.0) - 1.0 / PI.cosh()).abs() < 1e-16);
        assert_eq!(kernel_h(0.7, 0.0), 0.0);
        let g11 = 2f64.cos() / (2.0 * 1f64.cosh() * PI.cosh());
        assert!((kernel_g(1.0, 1.0) - g11).abs() < 1e-17);
    }

    #[test]
    fn kernel_limits_are_continuous() {
        for &q in &[0.0, 0.3, 2.0] {
            assert!((kernel_f(1e-7, q) - kernel_f(0.0, q)).abs() < 1e-12);
            assert!((kernel_h(1e-7, q) - kernel_h(0.0, q)).abs() < 1e-12);
        }
        assert!((kernel_f(0.4, 1e-9) - 0.8 / (PI * 0.8f64.sinh())).abs() < 1e-12);
    }

    fn f_by_integral(s: f64, q: f64, n: usize) -> f64 {
        // 𝒟ⁿ f = 2ⁿ n! (2/π) ∫₀^∞ cos(2qy) / (u + cosh 2y)^{n+1} dy
        let u = (2.0 * s).cosh();
        let fact: f64 = (1..=n).fold(1.0, |a, k| a * k as f64);
        let pts: Vec<f64> = (0..=400).map(|k| k as f64 * 0.05).collect();
        let v = integrate_breakpoints(
            |y: f64| (2.0 * q * y).cos() / (u + (2.0 * y).cosh()).powi(n as i32 + 1),
            &pts,
            QuadOptions::default(),
        )
        .unwrap();
        2f64.powi(n as i32) * fact * 2.0 / PI * v
    }

    #[test]
    fn operator_matches_integral_representation() {
        for &(s, q) in &[(0.5, 0.3), (0.0, 0.0), (1.3, 1.1), (0.05, 2.0), (2.5, 0.7), (0.62, 0.0)] {
            for n in 0..8 {
                let got = hyperbolic_derivative_operator(n, Kernel::F, s, q).unwrap();
                let want = f_by_integral(s, q, n);
                assert!((got - want).abs() < 1e-10 * want.abs().max(1e-3), "s={s} q={q} n={n}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn order_zero_is_identity() {
        for k in [Kernel::F, Kernel::G, Kernel::H] {
            for &(s, q) in &[(0.0, 0.0), (0.3, -0.4), (1.5, 2.0), (-2.2, 0.1)] {
                let a = hyperbolic_derivative_operator(0, k, s, q).unwrap();
                let b = k.eval(s, q);
                assert!((a - b).abs() < 1e-14 * b.abs().max(1e-3), "{k:?} s={s} q={q}");
            }
        }
    }

    #[test]
    fn order_one_matches_finite_difference() {
        for k in [Kernel::F, Kernel::G, Kernel::H] {
            let (s, q) = (1.0, 1.0);
            let h = 1e-3;
            let d = |x: f64| k.eval(x, q);
            let fd = (-d(s + 2.0 * h) + 8.0 * d(s + h) - 8.0 * d(s - h) + d(s - 2.0 * h)) / (12.0 * h);
            let want = -fd / (2.0 * s).sinh();
            let got = hyperbolic_derivative_operator(1, k, s, q).unwrap();
            assert!((got - want).abs() < 1e-7, "{k:?}: {got} vs {want}");
        }
    }

    #[test]
    fn series_and_recurrence_agree_at_switch() {
        // v = 2 sinh² s = 1 at s = asinh(1/√2); both engines evaluated at the same point
        let s = (0.5f64.sqrt()).asinh();
        let v0 = 2.0 * s.sinh().powi(2);
        for k in [Kernel::F, Kernel::G, Kernel::H] {
            for &q0 in &[0.0, 0.7, 3.0] {
                let q = Taylor::variable(q0, 3);
                let q2 = q.square();
                let a = series_table(k, v0, &q2, 12).unwrap();
                let b = recurrence_table(k, s, &q, &q2, 12);
                for n in 0..=12 {
                    for d in 0..=3 {
                        let (x, y) = (a[n].coeff(d), b[n].coeff(d));
                        let scale = a[n].max_abs().max(1e-300);
                        assert!((x - y).abs() < 1e-9 * scale, "{k:?} q={q0} n={n} d={d}: {x} vs {y}");
                    }
                }
            }
        }
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn q_derivatives_match_finite_differences() {
        for k in [Kernel::F, Kernel::G, Kernel::H] {
            for &(s, q) in &[(0.3, 0.4), (1.4, -0.9), (0.0, 0.0)] {
                let t = kernel_u_table(k, s, q, 3, 6).unwrap();
                let h = 1e-3;
                for n in 0..3 {
                    let at = |x: f64| kernel_u_table(k, s, x, 3, 0).unwrap()[n].value();
                    let fd1 = (at(q + 1e-4) - at(q - 1e-4)) / 2e-4;
                    let fd2 = (at(q + h) - 2.0 * at(q) + at(q - h)) / (h * h);
                    assert!(
                        (t[n].derivative(1) - fd1).abs() < 1e-6 * (1.0 + fd1.abs()),
                        "{k:?} n={n} ({s},{q}): {} vs {fd1}",
                        t[n].derivative(1)
                    );
                    assert!((t[n].derivative(2) - fd2).abs() < 1e-4 * (1.0 + fd2.abs()), "{k:?} n={n}");
                }
            }
        }
    }

    #[test]
    fn parities() {
        for &(s, q) in &[(0.3, 0.4), (1.4, 0.9), (2.0, 1.7)] {
            // f and g even in both arguments, h even in s and odd in q
            assert_eq!(kernel_f(-s, q), kernel_f(s, q));
            assert_eq!(kernel_f(s, -q), kernel_f(s, q));
            assert_eq!(kernel_g(-s, q), kernel_g(s, q));
            assert_eq!(kernel_g(s, -q), kernel_g(s, q));
            assert_eq!(kernel_h(-s, q), kernel_h(s, q));
            assert_eq!(kernel_h(s, -q), -kernel_h(s, q));
        }
    }
}
