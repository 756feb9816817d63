//! Gamma-family functions and associated Legendre polynomials of `tanh s`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const ZETA_TERMS: usize = 64;

/// Quantum numbers of a bound state: degree `lambda`, order `mu`, excitation `lambda - mu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenstateIndex {
    lambda: u32,
    mu: u32,
}

impl EigenstateIndex {
    pub fn new(lambda: u32, mu: u32) -> Result<Self> {
        if mu < 1 || mu > lambda {
            return domain(format!("need 1 <= mu <= lambda, got lambda={lambda}, mu={mu}"));
        }
        Ok(Self { lambda, mu })
    }

    /// Index of the n-th excited state of the well with depth parameter `lambda`.
    pub fn excited(lambda: u32, n: u32) -> Result<Self> {
        if n >= lambda {
            return domain(format!("lambda={lambda} has no bound state n={n}"));
        }
        Self::new(lambda, lambda - n)
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    pub fn excitation(&self) -> u32 {
        self.lambda - self.mu
    }
}

fn zeta_table() -> &'static [f64; ZETA_TERMS] {
    static TABLE: OnceLock<[f64; ZETA_TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Euler-Maclaurin with cutoff N = 10.
        const B2J_OVER_FACT: [f64; 7] = [
            1.0 / 12.0,
            -1.0 / 720.0,
            1.0 / 30240.0,
            -1.0 / 1209600.0,
            1.0 / 47900160.0,
            -691.0 / 1307674368000.0,
            1.0 / 74724249600.0,
        ];
        let mut out = [0.0; ZETA_TERMS];
        let n = 10.0_f64;
        for (k, slot) in out.iter_mut().enumerate().skip(2) {
            let kf = k as f64;
            let mut sum: f64 = (1..10).rev().map(|m| (m as f64).powf(-kf)).sum();
            sum += n.powf(1.0 - kf) / (kf - 1.0) + 0.5 * n.powf(-kf);
            let mut rising = kf;
            let mut npow = n.powf(-kf - 1.0);
            for (j, b) in B2J_OVER_FACT.iter().enumerate() {
                if j > 0 {
                    let a = kf + (2 * j - 1) as f64;
                    rising *= a * (a + 1.0);
                    npow /= n * n;
                }
                sum += b * rising * npow;
            }
            *slot = sum;
        }
        out
    })
}

/// ln Γ(1 + z) for |z| <= 1/2 by its Taylor series in zeta values.
fn ln_gamma_1p(z: f64) -> f64 {
    let zeta = zeta_table();
    let mut acc = 0.0;
    let mut zk = z;
    for (k, zk_coef) in zeta.iter().enumerate().skip(2) {
        zk *= -z;
        let term = zk_coef * zk / k as f64;
        acc += term;
        if term.abs() < 1e-18 * acc.abs().max(1e-300) {
            break;
        }
    }
    // zk runs through -(-z)^k, hence the sign flip
    -EULER_GAMMA * z - acc
}

fn ln_gamma_stirling(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    let series = r
        * (1.0 / 12.0
            + r2 * (-1.0 / 360.0
                + r2 * (1.0 / 1260.0
                    + r2 * (-1.0 / 1680.0 + r2 * (1.0 / 1188.0 + r2 * (-691.0 / 360360.0 + r2 / 156.0))))));
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series
}

/// Natural logarithm of the gamma function for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("log_gamma needs a positive finite argument, got {x}"));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        return ln_gamma_pos(x + 1.0) - x.ln();
    }
    if x <= 1.5 {
        return ln_gamma_1p(x - 1.0);
    }
    if x <= 2.5 {
        let z = x - 2.0;
        return z.ln_1p() + ln_gamma_1p(z);
    }
    if x >= 10.0 {
        return ln_gamma_stirling(x);
    }
    let mut y = x;
    let mut log_prod = 0.0;
    while y < 10.0 {
        log_prod += y.ln();
        y += 1.0;
    }
    ln_gamma_stirling(y) - log_prod
}

/// Γ(a)/Γ(b) evaluated through log-gamma.
pub fn gamma_ratio(a: f64, b: f64) -> Result<f64> {
    Ok((log_gamma(a)? - log_gamma(b)?).exp())
}

/// Digamma ψ(x) = d/dx ln Γ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("digamma needs a positive finite argument, got {x}"));
    }
    let mut y = x;
    let mut shift = 0.0;
    while y < 10.0 {
        shift += 1.0 / y;
        y += 1.0;
    }
    let r2 = 1.0 / (y * y);
    let tail = r2
        * (1.0 / 12.0
            - r2 * (1.0 / 120.0
                - r2 * (1.0 / 252.0 - r2 * (1.0 / 240.0 - r2 * (1.0 / 132.0 - r2 * (691.0 / 32760.0 - r2 / 12.0))))));
    Ok(y.ln() - 0.5 / y - tail - shift)
}

/// Trigamma ψ₁(x) = d²/dx² ln Γ(x) for x > 0.
pub fn trigamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("trigamma needs a positive finite argument, got {x}"));
    }
    let mut y = x;
    let mut shift = 0.0;
    while y < 10.0 {
        shift += 1.0 / (y * y);
        y += 1.0;
    }
    let r = 1.0 / y;
    let r2 = r * r;
    let tail = r
        + 0.5 * r2
        + r * r2
            * (1.0 / 6.0
                - r2 * (1.0 / 30.0
                    - r2 * (1.0 / 42.0
                        - r2 * (1.0 / 30.0 - r2 * (5.0 / 66.0 - r2 * (691.0 / 2730.0 - r2 * 7.0 / 6.0))))));
    Ok(tail + shift)
}

/// Associated Legendre polynomial 𝒫^μ_λ(tanh s), Condon-Shortley phase.
///
/// The factor (1 - u²)^{1/2} is taken as sech s, so large |s| keeps full relative accuracy.
pub fn assoc_legendre_tanh(idx: EigenstateIndex, s: f64) -> f64 {
    let (l, m) = (idx.lambda as i64, idx.mu as i64);
    let u = s.tanh();
    let w = 1.0 / s.cosh();
    // P_m^m = (-1)^m (2m-1)!! w^m
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= -((2 * k - 1) as f64) * w;
    }
    if l == m {
        return pmm;
    }
    let mut p_prev = pmm;
    let mut p = u * (2 * m + 1) as f64 * pmm;
    for deg in (m + 1)..l {
        let next = ((2 * deg + 1) as f64 * u * p - (deg + m) as f64 * p_prev) / (deg - m + 1) as f64;
        p_prev = p;
        p = next;
    }
    p
}

/// ∫ds 𝒫^μ_λ(tanh s)² = Γ(λ+μ+1) / (μ Γ(λ-μ+1)), the value confirmed by quadrature.
pub fn legendre_norm(idx: EigenstateIndex) -> f64 {
    let (l, m) = (idx.lambda as f64, idx.mu as f64);
    (ln_gamma_pos(l + m + 1.0) - ln_gamma_pos(l - m + 1.0)).exp() / m
}

/// The alternative constant Γ(λ+μ+1)/(Γ(λ-μ+1)Γ(μ+1)); agrees with [`legendre_norm`] only for μ ∈ {1, 2}.
pub fn legendre_norm_factorial(idx: EigenstateIndex) -> f64 {
    let (l, m) = (idx.lambda as f64, idx.mu as f64);
    (ln_gamma_pos(l + m + 1.0) - ln_gamma_pos(l - m + 1.0) - ln_gamma_pos(m + 1.0)).exp()
}
