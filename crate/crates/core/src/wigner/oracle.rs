//! Direct quadrature of the Wigner transform, independent of the closed forms.

use num_complex::Complex64;

use crate::error::Result;
use crate::ptsystem::{eigenstate, eigenstate_envelope, PTParams, TwoLevelState};
use crate::quadrature::{integrate_breakpoints, integrate_centered, QuadOptions};

/// Exponential envelope |ψ(s)| ≤ amplitude · e^{−rate |s|}, used to truncate the y-integral.
#[derive(Debug, Clone, Copy)]
pub struct Envelope {
    pub amplitude: f64,
    pub rate: f64,
}

impl Envelope {
    fn combine(a: Envelope, b: Envelope) -> Envelope {
        Envelope { amplitude: a.amplitude * b.amplitude, rate: a.rate.min(b.rate) }
    }

    /// Half-width Y beyond which the two-sided tail of ψ_a(s+y)ψ_b(s−y) is below `tail`.
    fn cutoff(&self, tail: f64) -> f64 {
        // |ψa(s+y) ψb(s−y)| ≤ A e^{−2κ|y|}, tail mass A e^{−2κY}/κ
        let y = (self.amplitude / (self.rate * tail)).ln() / (2.0 * self.rate);
        y.max(1.0)
    }
}

const TAIL: f64 = 1e-13;

fn oracle_opts() -> QuadOptions {
    QuadOptions { abs_tol: 1e-14, rel_tol: 1e-13, max_panels: 20_000 }
}

fn breakpoints(y_max: f64, q: f64) -> Vec<f64> {
    // half-periods of e^{2iqy}, never coarser than 0.25
    let h = if q == 0.0 { 0.25 } else { (std::f64::consts::PI / (2.0 * q.abs())).min(0.25) };
    let n = (2.0 * y_max / h).ceil() as usize;
    (0..=n).map(|k| -y_max + 2.0 * y_max * k as f64 / n as f64).collect()
}

/// (1/π) ∫ dy e^{2iqy} ψa*(s+y) ψb(s−y).
/// `env_a`, `env_b` bound |ψa| and |ψb|.
pub fn wigner_cross_oracle<A, B>(
    psi_a: A,
    env_a: Envelope,
    psi_b: B,
    env_b: Envelope,
    s: f64,
    q: f64,
) -> Result<Complex64>
where
    A: Fn(f64) -> Complex64,
    B: Fn(f64) -> Complex64,
{
    let y_max = Envelope::combine(env_a, env_b).cutoff(TAIL);
    let pts = breakpoints(y_max, q);
    let v = integrate_breakpoints(
        |y: f64| Complex64::from_polar(1.0, 2.0 * q * y) * psi_a(s + y).conj() * psi_b(s - y),
        &pts,
        oracle_opts(),
    )?;
    Ok(v / std::f64::consts::PI)
}

/// Wigner function of a pure state ψ (bounded by `env`) by direct quadrature of its defining integral.
pub fn wigner_oracle<F: Fn(f64) -> Complex64>(psi: F, env: Envelope, s: f64, q: f64) -> Result<f64> {
    Ok(wigner_cross_oracle(&psi, env, &psi, env, s, q)?.re)
}

fn component_psi(params: PTParams, n: u32) -> impl Fn(f64) -> Complex64 {
    move |s| Complex64::new(eigenstate(&params, n, s).unwrap_or(0.0), 0.0)
}

fn component_env(params: &PTParams, n: u32) -> Envelope {
    let (amplitude, rate) = eigenstate_envelope(params, n);
    Envelope { amplitude, rate }
}

/// W^{ij} by quadrature, i, j ∈ {0, 1}.
pub fn wigner_component_oracle(params: &PTParams, i: u32, j: u32, s: f64, q: f64) -> Result<Complex64> {
    if i.max(j) == 1 {
        params.require_excited()?;
    }
    wigner_cross_oracle(
        component_psi(*params, i),
        component_env(params, i),
        component_psi(*params, j),
        component_env(params, j),
        s,
        q,
    )
}

/// Total two-level Wigner function by quadrature on the wave function itself.
pub fn wigner_total_oracle(params: &PTParams, state: &TwoLevelState, tau: f64, s: f64, q: f64) -> Result<f64> {
    let e0 = component_env(params, 0);
    let env = if state.uses_excited() && params.lambda() >= 2 {
        let e1 = component_env(params, 1);
        Envelope { amplitude: e0.amplitude + e1.amplitude, rate: e1.rate }
    } else {
        e0
    };
    match state.amplitudes(params, tau) {
        Some((a0, a1)) => {
            let p = *params;
            let with_excited = state.uses_excited();
            let psi = move |x: f64| {
                let mut v = a0 * eigenstate(&p, 0, x).unwrap_or(0.0);
                if with_excited {
                    v += a1 * eigenstate(&p, 1, x).unwrap_or(0.0);
                }
                v
            };
            wigner_oracle(psi, env, s, q)
        }
        None => {
            let (w0, w1) = state.weights();
            let mut v = w0 * wigner_component_oracle(params, 0, 0, s, q)?.re;
            if w1 != 0.0 {
                v += w1 * wigner_component_oracle(params, 1, 1, s, q)?.re;
            }
            Ok(v)
        }
    }
}

/// |ψ̃(q)|² with ψ̃(q) = (2π)^{−1/2} ∫ ds e^{−iqs} ψ(s).
pub fn momentum_density_oracle<F: Fn(f64) -> Complex64>(psi: F, env: Envelope, q: f64) -> Result<f64> {
    let s_max = ((env.amplitude / (env.rate * TAIL)).ln() / env.rate).max(1.0);
    let panels = ((2.0 * s_max) / 0.25).ceil() as usize;
    let v =
        integrate_centered(|x: f64| Complex64::from_polar(1.0, -q * x) * psi(x), s_max, panels.max(8), oracle_opts())?;
    Ok(v.norm_sqr() / (2.0 * std::f64::consts::PI))
}

/// Momentum density of an eigenstate component n ∈ {0, 1}.
pub fn eigenstate_momentum_density(params: &PTParams, n: u32, q: f64) -> Result<f64> {
    if n == 1 {
        params.require_excited()?;
    }
    momentum_density_oracle(component_psi(*params, n), component_env(params, n), q)
}

/// Exact (non-truncated) potential term of the Wigner equation,
/// (1/π) ∫ dy e^{2iqy} (−i)[V(s−y) − V(s+y)] ψ*(s+y) ψ(s−y), for V = −½λ(λ+1) sech².
/// Together with −q ∂W/∂s it gives ∂W/∂τ.
pub fn potential_term_oracle(params: &PTParams, state: &TwoLevelState, tau: f64, s: f64, q: f64) -> Result<f64> {
    let (a0, a1) = match state.amplitudes(params, tau) {
        Some(a) => a,
        None => {
            let (w0, w1) = state.weights();
            (Complex64::new(w0.sqrt(), 0.0), Complex64::new(w1.sqrt(), 0.0))
        }
    };
    let p = *params;
    let l = params.lambda_f64();
    let v = move |x: f64| -0.5 * l * (l + 1.0) / x.cosh().powi(2);
    let psi = move |x: f64| {
        let mut out = a0 * eigenstate(&p, 0, x).unwrap_or(0.0);
        if p.lambda() >= 2 {
            out += a1 * eigenstate(&p, 1, x).unwrap_or(0.0);
        }
        out
    };
    let e0 = component_env(params, 0);
    let y_max = Envelope::combine(e0, e0).cutoff(TAIL).max(if params.lambda() >= 2 {
        let e1 = component_env(params, 1);
        Envelope::combine(e1, e1).cutoff(TAIL)
    } else {
        1.0
    });
    let pts = breakpoints(y_max, q);
    let val = integrate_breakpoints(
        |y: f64| {
            Complex64::from_polar(1.0, 2.0 * q * y)
                * Complex64::new(0.0, -(v(s - y) - v(s + y)))
                * psi(s + y).conj()
                * psi(s - y)
        },
        &pts,
        oracle_opts(),
    )?;
    Ok(val.re / std::f64::consts::PI)
}
