//! Adaptive Gauss-Kronrod (7/15) quadrature on finite intervals.
//!
//! Global adaptive bisection: the panel with the largest error estimate is
//! split until the summed estimate meets the tolerance. Panels are summed
//! in left-to-right order so results do not depend on the refinement history.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Values a quadrature can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-13, rel_tol: 1e-12, max_panels: 4000 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
}

fn gk15<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> Panel<T> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let sum = f(c - x) + f(c + x);
        kron = kron + sum * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + sum * WG[j / 2];
        }
    }
    let value = kron * h;
    let err = ((kron - gauss) * h).magnitude();
    Panel { a, b, value, err }
}

/// Integrates `f` over [a, b].
pub fn integrate<T: QuadValue, F: FnMut(f64) -> T>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<T> {
    integrate_breakpoints(f, &[a, b], opts)
}

/// Integrates `f` over [p0, p_last], seeding one panel per consecutive pair of breakpoints.
pub fn integrate_breakpoints<T: QuadValue, F: FnMut(f64) -> T>(
    mut f: F,
    points: &[f64],
    opts: QuadOptions,
) -> Result<T> {
    if points.len() < 2 {
        return Ok(T::zero());
    }
    let mut panels: Vec<Panel<T>> =
        points.windows(2).filter(|w| w[1] > w[0]).map(|w| gk15(&mut f, w[0], w[1])).collect();
    loop {
        let total = panels.iter().fold(T::zero(), |acc, p| acc + p.value);
        let err: f64 = panels.iter().map(|p| p.err).sum();
        let tol = opts.abs_tol.max(opts.rel_tol * total.magnitude());
        if err <= tol {
            panels.sort_by(|x, y| x.a.total_cmp(&y.a));
            return Ok(panels.iter().fold(T::zero(), |acc, p| acc + p.value));
        }
        if panels.len() >= opts.max_panels {
            return Err(Error::Quadrature(format!(
                "error estimate {err:.3e} above tolerance {tol:.3e} after {} panels",
                panels.len()
            )));
        }
        let (worst, _) = panels.iter().enumerate().max_by(|x, y| x.1.err.total_cmp(&y.1.err)).expect("non-empty");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            return Err(Error::Quadrature("panel width underflow".into()));
        }
        panels.push(gk15(&mut f, p.a, mid));
        panels.push(gk15(&mut f, mid, p.b));
    }
}

/// Integrates over [-half_width, half_width] seeded with `panels` equal panels,
/// so narrow features are never missed by the first sampling.
pub fn integrate_centered<T: QuadValue, F: FnMut(f64) -> T>(
    f: F,
    half_width: f64,
    panels: usize,
    opts: QuadOptions,
) -> Result<T> {
    let n = panels.max(1);
    let pts: Vec<f64> = (0..=n).map(|k| -half_width + 2.0 * half_width * k as f64 / n as f64).collect();
    integrate_breakpoints(f, &pts, opts)
}

/// Composite trapezoid weights for `n` uniform samples with spacing `h`.
pub fn trapezoid_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; n];
    if n > 0 {
        w[0] *= 0.5;
        w[n - 1] *= 0.5;
    }
    w
}
