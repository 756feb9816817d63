//! The hyperbolic Pöschl-Teller well in dimensionless units.
//!
//! H = q² − λ(λ+1) sech² s with [s, q] = i. Time τ is measured so that the
//! generator of the dynamics is H/2: ṡ = q, q̇ = −λ(λ+1) tanh s sech² s, and a
//! bound state of energy −μ² picks up the phase e^{iμ²τ/2}.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::ode::{self, OdeOptions};
use crate::specfun::{assoc_legendre_tanh, legendre_norm, ln_gamma_pos, EigenstateIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PTParams {
    lambda: u32,
}

impl PTParams {
    pub fn new(lambda: u32) -> Result<Self> {
        if lambda < 1 {
            return domain("lambda must be at least 1");
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn lambda_f64(&self) -> f64 {
        self.lambda as f64
    }

    /// Well depth λ(λ+1).
    pub fn depth(&self) -> f64 {
        let l = self.lambda_f64();
        l * (l + 1.0)
    }

    /// Fails unless the first excited state exists (λ ≥ 2).
    pub fn require_excited(&self) -> Result<()> {
        if self.lambda < 2 {
            return domain(format!("lambda = {} has no first excited state", self.lambda));
        }
        Ok(())
    }

    /// 𝒜² = Γ(λ+½) / (√π Γ(λ)).
    pub fn norm_sq(&self) -> f64 {
        let l = self.lambda_f64();
        (ln_gamma_pos(l + 0.5) - ln_gamma_pos(l)).exp() / std::f64::consts::PI.sqrt()
    }

    /// Binding parameter μ = λ − n of the state n ∈ {0, 1}.
    pub fn mu(&self, n: u32) -> f64 {
        self.lambda_f64() - n as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub s: f64,
    pub q: f64,
}

impl PhasePoint {
    pub fn new(s: f64, q: f64) -> Self {
        Self { s, q }
    }
}

/// Closed-form classical solutions, one per sign of μ².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ClassicalRegime {
    /// μ² = ℓ² > 0, started at s = 0, q = √ℓ. Solves the equations of motion when ℓ = λ.
    Bound { ell: f64 },
    /// μ² = 0. Solves the equations of motion when ℓ = λ.
    Separatrix { ell: f64 },
    /// μ² = −λ(λ+1), started at s = 0, q = √(2λ(λ+1)).
    Unbound { lambda: f64 },
}

impl ClassicalRegime {
    pub fn validate(&self) -> Result<()> {
        let p = match *self {
            ClassicalRegime::Bound { ell } | ClassicalRegime::Separatrix { ell } => ell,
            ClassicalRegime::Unbound { lambda } => lambda,
        };
        if !(p > 0.0) || !p.is_finite() {
            return domain(format!("regime parameter must be positive, got {p}"));
        }
        Ok(())
    }

    /// Well depth for which this trajectory is an exact solution.
    pub fn consistent_depth(&self) -> f64 {
        match *self {
            ClassicalRegime::Bound { ell } | ClassicalRegime::Separatrix { ell } => ell * (ell + 1.0),
            ClassicalRegime::Unbound { lambda } => lambda * (lambda + 1.0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClassicalRegime::Bound { .. } => "bound",
            ClassicalRegime::Separatrix { .. } => "separatrix",
            ClassicalRegime::Unbound { .. } => "unbound",
        }
    }
}

/// Two-level state built from ψ⁰ (weight sin²θ) and ψ¹ (weight cos²θ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TwoLevelState {
    /// sin θ e^{−iφ/2} ψ⁰ + cos θ e^{+iφ/2} ψ¹, with φ the relative phase at τ = 0.
    Pure { theta: f64, phi: f64 },
    /// Incoherent mixture with weights sin²θ, cos²θ.
    Mixed { theta: f64 },
}

impl TwoLevelState {
    pub fn ground() -> Self {
        TwoLevelState::Pure { theta: std::f64::consts::FRAC_PI_2, phi: 0.0 }
    }

    pub fn excited() -> Self {
        TwoLevelState::Pure { theta: 0.0, phi: 0.0 }
    }

    pub fn theta(&self) -> f64 {
        match *self {
            TwoLevelState::Pure { theta, .. } | TwoLevelState::Mixed { theta } => theta,
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, TwoLevelState::Pure { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            TwoLevelState::Pure { theta, phi } => theta.is_finite() && phi.is_finite(),
            TwoLevelState::Mixed { theta } => theta.is_finite(),
        };
        if !ok {
            return domain("state angles must be finite");
        }
        Ok(())
    }

    /// Ensemble weights (w₀, w₁) = (sin²θ, cos²θ).
    pub fn weights(&self) -> (f64, f64) {
        let (s, c) = self.theta().sin_cos();
        (s * s, c * c)
    }

    /// Relative phase at time τ. The excited component lags by (λ − ½) per unit τ.
    pub fn phase_at(&self, params: &PTParams, tau: f64) -> f64 {
        match *self {
            TwoLevelState::Pure { phi, .. } => phi - relative_phase_rate(params) * tau,
            TwoLevelState::Mixed { .. } => 0.0,
        }
    }

    /// Amplitudes (a₀, a₁) at time τ, up to a global phase. Mixed states have none.
    pub fn amplitudes(&self, params: &PTParams, tau: f64) -> Option<(Complex64, Complex64)> {
        match *self {
            TwoLevelState::Pure { theta, .. } => {
                let phi = self.phase_at(params, tau);
                let a0 = Complex64::from_polar(theta.sin(), -0.5 * phi);
                let a1 = Complex64::from_polar(theta.cos(), 0.5 * phi);
                Some((a0, a1))
            }
            TwoLevelState::Mixed { .. } => None,
        }
    }

    /// Whether the ψ¹ component enters with nonzero weight.
    pub fn uses_excited(&self) -> bool {
        self.theta().cos() != 0.0
    }
}

/// dφ/dτ magnitude; the sign convention is fixed in [`TwoLevelState::phase_at`].
fn relative_phase_rate(params: &PTParams) -> f64 {
    params.lambda_f64() - 0.5
}

pub fn potential(params: &PTParams, s: f64) -> f64 {
    let sech = 1.0 / s.cosh();
    -params.depth() * sech * sech
}

/// H = q² − λ(λ+1) sech² s.
pub fn energy(params: &PTParams, p: PhasePoint) -> f64 {
    p.q * p.q + potential(params, p.s)
}

/// Right-hand side (ṡ, q̇) of Hamilton's equations.
pub fn hamilton_rhs(params: &PTParams, p: PhasePoint) -> (f64, f64) {
    let sech = 1.0 / p.s.cosh();
    (p.q, -params.depth() * p.s.tanh() * sech * sech)
}

pub fn classical_trajectory(regime: ClassicalRegime, tau: f64) -> PhasePoint {
    match regime {
        ClassicalRegime::Unbound { lambda } => {
            let a = (lambda * (lambda + 1.0)).sqrt();
            let sh = (a * tau).sinh();
            let s = (std::f64::consts::SQRT_2 * sh).asinh();
            let q = std::f64::consts::SQRT_2 * a * ((1.0 + sh * sh) / (1.0 + 2.0 * sh * sh)).sqrt();
            PhasePoint { s, q }
        }
        ClassicalRegime::Separatrix { ell } => {
            let b2 = ell * (ell + 1.0);
            let s = (b2.sqrt() * tau).asinh();
            let q = (b2 / (1.0 + b2 * tau * tau)).sqrt();
            PhasePoint { s, q }
        }
        ClassicalRegime::Bound { ell } => {
            let (sn, cs) = (ell * tau).sin_cos();
            let s = (sn / ell.sqrt()).asinh();
            let q = ell * cs / (ell + sn * sn).sqrt();
            PhasePoint { s, q }
        }
    }
}

/// Integrates Hamilton's equations over `dtau` with an adaptive 5(4) pair at tolerance 1e−12.
pub fn classical_ode_step(params: &PTParams, p: PhasePoint, dtau: f64) -> Result<PhasePoint> {
    if !(dtau > 0.0) {
        return domain(format!("dtau must be positive, got {dtau}"));
    }
    let rhs = |_t: f64, y: &[f64; 2]| {
        let (ds, dq) = hamilton_rhs(params, PhasePoint { s: y[0], q: y[1] });
        [ds, dq]
    };
    let y = ode::integrate(rhs, 0.0, [p.s, p.q], dtau, OdeOptions::default())?;
    Ok(PhasePoint { s: y[0], q: y[1] })
}

/// Largest deviation between the closed form and the integrated equations of
/// motion at `samples` equally spaced times in [0, `tau_end`], and the largest
/// energy drift along the integrated path. The well depth is the one for which
/// the closed form is exact.
pub fn trajectory_deviation(regime: ClassicalRegime, tau_end: f64, samples: usize) -> Result<(f64, f64)> {
    regime.validate()?;
    if !(tau_end > 0.0) || samples == 0 {
        return domain("need tau_end > 0 and at least one sample");
    }
    let depth = regime.consistent_depth();
    let rhs = |_t: f64, y: &[f64; 2]| {
        let sech = 1.0 / y[0].cosh();
        [y[1], -depth * y[0].tanh() * sech * sech]
    };
    let h = |p: &[f64; 2]| p[1] * p[1] - depth / p[0].cosh().powi(2);
    let start = classical_trajectory(regime, 0.0);
    let mut y = [start.s, start.q];
    let e0 = h(&y);
    let dt = tau_end / samples as f64;
    let (mut dev, mut drift) = (0.0_f64, 0.0_f64);
    for k in 1..=samples {
        y = ode::integrate(rhs, (k - 1) as f64 * dt, y, k as f64 * dt, OdeOptions::default())?;
        let exact = classical_trajectory(regime, k as f64 * dt);
        dev = dev.max((y[0] - exact.s).abs()).max((y[1] - exact.q).abs());
        drift = drift.max((h(&y) - e0).abs());
    }
    Ok((dev, drift))
}

/// ψ⁰ = 𝒜 sech^λ s and ψ¹ = √(2(λ−1)) 𝒜 sinh s sech^λ s.
pub fn eigenstate(params: &PTParams, n: u32, s: f64) -> Result<f64> {
    Ok(eigenstate_derivatives(params, n, s)?[0])
}

/// ψ and its first four s-derivatives for n ∈ {0, 1}.
pub fn eigenstate_derivatives(params: &PTParams, n: u32, s: f64) -> Result<[f64; 5]> {
    let l = params.lambda_f64();
    let a = params.norm_sq().sqrt();
    let sech = 1.0 / s.cosh();
    let th = s.tanh();
    let (psi, dpsi) = match n {
        0 => {
            let v = a * sech.powf(l);
            (v, -l * th * v)
        }
        1 => {
            params.require_excited()?;
            let c = (2.0 * (l - 1.0)).sqrt() * a;
            let base = sech.powf(l - 1.0);
            (c * th * base, c * base * (1.0 - l * th * th))
        }
        _ => return domain(format!("only n = 0, 1 have closed forms, got n = {n}")),
    };
    let mu = params.mu(n);
    let sech2 = sech * sech;
    let u = -params.depth() * sech2;
    let du = 2.0 * params.depth() * sech2 * th;
    let d2u = 2.0 * params.depth() * (sech2 * sech2 - 2.0 * sech2 * th * th);
    let k = mu * mu + u;
    let d2 = k * psi;
    let d3 = du * psi + k * dpsi;
    let d4 = d2u * psi + 2.0 * du * dpsi + k * k * psi;
    Ok([psi, dpsi, d2, d3, d4])
}

/// Normalized bound state with general quantum numbers, built from 𝒫^μ_λ(tanh s).
pub fn eigenstate_general(idx: EigenstateIndex, s: f64) -> f64 {
    assoc_legendre_tanh(idx, s) / legendre_norm(idx).sqrt()
}

/// Bound (A, κ) with |ψ_n(s)| ≤ A e^{−κ|s|}.
pub fn eigenstate_envelope(params: &PTParams, n: u32) -> (f64, f64) {
    let l = params.lambda_f64();
    let a = params.norm_sq().sqrt();
    match n {
        0 => (a * 2f64.powf(l), l),
        _ => ((2.0 * (l - 1.0)).sqrt() * a * 2f64.powf(l - 1.0), l - 1.0),
    }
}

/// Dimensionless phase rate λ − ½ of the two-level system.
pub fn two_level_frequency(params: &PTParams) -> Result<f64> {
    params.require_excited()?;
    Ok(relative_phase_rate(params))
}

/// Bound-orbit parameter ℓ = λ − ½ whose frequency matches the two-level phase rate.
/// Used only for frequency comparisons; the trajectory itself solves the dynamics only for ℓ = λ.
pub fn frequency_matched_ell(params: &PTParams) -> f64 {
    params.lambda_f64() - 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_centered, QuadOptions};
    use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

    fn p(l: u32) -> PTParams {
        PTParams::new(l).unwrap()
    }

    #[test]
    fn potential_examples() {
        assert_eq!(potential(&p(1), 0.0), -2.0);
        assert_eq!(potential(&p(2), 0.0), -6.0);
        assert!((potential(&p(1), 1.0) + 0.839_948_4).abs() < 1e-6);
    }

    #[test]
    fn trajectory_examples() {
        let u = classical_trajectory(ClassicalRegime::Unbound { lambda: 1.0 }, 0.0);
        assert_eq!(u.s, 0.0);
        assert!((u.q - 2.0).abs() < 1e-15);
        let b = classical_trajectory(ClassicalRegime::Bound { ell: 2.0 }, 0.0);
        assert_eq!(b.s, 0.0);
        assert!((b.q - SQRT_2).abs() < 1e-15);
        let b2 = classical_trajectory(ClassicalRegime::Bound { ell: 2.0 }, FRAC_PI_2);
        assert!(b2.s.abs() < 1e-15 && (b2.q + SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn trajectories_conserve_energy() {
        for (regime, lam) in [
            (ClassicalRegime::Bound { ell: 2.0 }, 2),
            (ClassicalRegime::Bound { ell: 5.0 }, 5),
            (ClassicalRegime::Separatrix { ell: 3.0 }, 3),
            (ClassicalRegime::Unbound { lambda: 1.0 }, 1),
            (ClassicalRegime::Unbound { lambda: 4.0 }, 4),
        ] {
            let params = p(lam);
            let e0 = energy(&params, classical_trajectory(regime, 0.0));
            for k in 0..400 {
                let e = energy(&params, classical_trajectory(regime, k as f64 * 0.01));
                assert!((e - e0).abs() < 1e-9 * e0.abs().max(1.0), "{regime:?} k={k}");
            }
        }
    }

    #[test]
    fn bound_trajectory_is_periodic() {
        for ell in [1.0, 2.0, 3.5] {
            let r = ClassicalRegime::Bound { ell };
            let per = 2.0 * PI / ell;
            for k in 0..50 {
                let t = 0.137 * k as f64;
                let (a, b) = (classical_trajectory(r, t), classical_trajectory(r, t + per));
                assert!((a.s - b.s).abs() < 1e-12 && (a.q - b.q).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn closed_forms_solve_the_equations_of_motion() {
        for (r, t) in [
            (ClassicalRegime::Bound { ell: 2.0 }, PI),
            (ClassicalRegime::Separatrix { ell: 2.0 }, 3.0),
            (ClassicalRegime::Unbound { lambda: 1.0 }, 2.0),
        ] {
            let (dev, drift) = trajectory_deviation(r, t, 40).unwrap();
            assert!(dev < 1e-6 && drift < 1e-9, "{r:?}: {dev} {drift}");
        }
    }

    #[test]
    fn separatrix_decays_monotonically() {
        let r = ClassicalRegime::Separatrix { ell: 2.0 };
        let mut last = f64::INFINITY;
        for k in 0..100 {
            let q = classical_trajectory(r, 0.1 * k as f64).q;
            assert!(q < last);
            last = q;
        }
    }

    #[test]
    fn ode_energy_drift() {
        let params = p(2);
        let mut pt = PhasePoint::new(0.3, 1.1);
        let e0 = energy(&params, pt);
        for _ in 0..100 {
            pt = classical_ode_step(&params, pt, 0.1).unwrap();
        }
        assert!((energy(&params, pt) - e0).abs() < 1e-9);
        assert!(classical_ode_step(&params, pt, 0.0).is_err());
    }

    #[test]
    fn eigenstate_examples() {
        assert!((eigenstate(&p(2), 0, 0.0).unwrap() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        for l in 2..6 {
            assert_eq!(eigenstate(&p(l), 1, 0.0).unwrap(), 0.0);
        }
        assert!(eigenstate(&p(1), 1, 0.3).is_err());
    }

    #[test]
    fn eigenstates_are_normalized_and_have_parity() {
        for l in 2..=10 {
            let params = p(l);
            for n in 0..2 {
                let norm = integrate_centered(
                    |s: f64| eigenstate(&params, n, s).unwrap().powi(2),
                    40.0,
                    80,
                    QuadOptions::default(),
                )
                .unwrap();
                assert!((norm - 1.0).abs() < 1e-8, "lambda={l}, n={n}: {norm}");
                for &s in &[0.1, 0.7, 2.3] {
                    let (a, b) = (eigenstate(&params, n, s).unwrap(), eigenstate(&params, n, -s).unwrap());
                    let sign = if n == 0 { 1.0 } else { -1.0 };
                    assert_eq!(a, sign * b);
                }
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let params = p(3);
        let h = 1e-4;
        for n in 0..2 {
            for &s in &[-1.3, 0.2, 0.9] {
                let d = eigenstate_derivatives(&params, n, s).unwrap();
                let dp = eigenstate_derivatives(&params, n, s + h).unwrap();
                let dm = eigenstate_derivatives(&params, n, s - h).unwrap();
                for k in 0..4 {
                    let fd = (dp[k] - dm[k]) / (2.0 * h);
                    assert!((fd - d[k + 1]).abs() < 1e-6 * (1.0 + d[k + 1].abs()), "n={n} s={s} k={k}");
                }
            }
        }
    }

    #[test]
    fn general_eigenstates_reproduce_closed_forms() {
        for l in 2..6 {
            let params = p(l);
            for n in 0..2u32 {
                let idx = EigenstateIndex::excited(l, n).unwrap();
                for &s in &[-0.8, 0.0, 0.4, 1.7] {
                    let a = eigenstate_general(idx, s).abs();
                    let b = eigenstate(&params, n, s).unwrap().abs();
                    assert!((a - b).abs() < 1e-13, "lambda={l} n={n} s={s}");
                }
            }
        }
    }

    #[test]
    fn legendre_normalization_by_quadrature() {
        use crate::specfun::{legendre_norm, legendre_norm_factorial};
        for l in 1..=4 {
            for m in 1..=l {
                let idx = EigenstateIndex::new(l, m).unwrap();
                let v =
                    integrate_centered(|s: f64| assoc_legendre_tanh(idx, s).powi(2), 40.0, 80, QuadOptions::default())
                        .unwrap();
                assert!((v / legendre_norm(idx) - 1.0).abs() < 1e-8, "lambda={l} mu={m}");
                let factorial_form = (v / legendre_norm_factorial(idx) - 1.0).abs() < 1e-8;
                assert_eq!(factorial_form, m <= 2);
                for m2 in 1..=l {
                    if m2 != m {
                        let j = EigenstateIndex::new(l, m2).unwrap();
                        let o = integrate_centered(
                            |s: f64| assoc_legendre_tanh(idx, s) * assoc_legendre_tanh(j, s),
                            40.0,
                            80,
                            QuadOptions::default(),
                        )
                        .unwrap();
                        assert!(o.abs() < 1e-8 * v, "overlap lambda={l} mu={m},{m2}: {o}");
                    }
                }
            }
        }
    }

    #[test]
    fn frequency() {
        assert_eq!(two_level_frequency(&p(2)).unwrap(), 1.5);
        assert_eq!(two_level_frequency(&p(3)).unwrap(), 2.5);
        assert_eq!(two_level_frequency(&p(10)).unwrap(), 9.5);
        assert!(two_level_frequency(&p(1)).is_err());
    }

    #[test]
    fn amplitudes_are_normalized() {
        let st = TwoLevelState::Pure { theta: 0.3, phi: 1.1 };
        let (a0, a1) = st.amplitudes(&p(3), 0.7).unwrap();
        assert!((a0.norm_sqr() + a1.norm_sqr() - 1.0).abs() < 1e-15);
        let (w0, w1) = TwoLevelState::Mixed { theta: 0.3 }.weights();
        assert!((w0 + w1 - 1.0).abs() < 1e-15);
    }
}
