//! Wigner functions of the ψ⁰/ψ¹ two-level family.

mod components;
mod field;
pub mod kernels;
pub mod oracle;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::ptsystem::{PTParams, TwoLevelState};
use crate::taylor::PhaseJet;

pub use components::LAMBDA_MAX_CLOSED;
pub use field::{sample_component_field, sample_field, FieldMeta, Grid, WignerField};
pub use kernels::{
    hyperbolic_derivative_combination, hyperbolic_derivative_operator, kernel_f, kernel_g, kernel_h, Kernel,
    KernelTriple,
};
pub use oracle::{
    eigenstate_momentum_density, momentum_density_oracle, potential_term_oracle, wigner_component_oracle,
    wigner_cross_oracle, wigner_oracle, wigner_total_oracle, Envelope,
};

use components::{component_jets, Needs};

/// A phase-space density that can report exact local jets: value, ∂_s, and a
/// q-Taylor expansion of both.
pub trait PhaseDensity: Sync {
    fn jet(&self, s: f64, q: f64, q_order: usize) -> Result<PhaseJet>;

    fn value(&self, s: f64, q: f64) -> Result<f64> {
        Ok(self.jet(s, q, 0)?.value())
    }

    /// ∂W/∂τ; zero for stationary densities.
    fn time_derivative(&self, _s: f64, _q: f64) -> Result<f64> {
        Ok(0.0)
    }
}

/// Closed-form component W^{ij}(s, q).
pub fn wigner_component(params: &PTParams, i: u32, j: u32, s: f64, q: f64) -> Result<Complex64> {
    if i > 1 || j > 1 {
        return domain(format!("component indices must be 0 or 1, got ({i}, {j})"));
    }
    if i.max(j) == 1 {
        params.require_excited()?;
    }
    let needs = Needs { diagonal: i == j, cross: i != j };
    let c = component_jets(params, s, q, 0, needs)?;
    Ok(match (i, j) {
        (0, 0) => Complex64::new(c.w00.value(), 0.0),
        (1, 1) => Complex64::new(c.w11.value(), 0.0),
        (1, 0) => Complex64::new(c.w10_re.value(), c.w10_im.value()),
        _ => Complex64::new(c.w10_re.value(), -c.w10_im.value()),
    })
}

/// The two-level Wigner function W^C at time τ.
pub fn wigner_total(params: &PTParams, state: &TwoLevelState, tau: f64, s: f64, q: f64) -> Result<f64> {
    TwoLevelWigner::new(*params, *state, tau)?.value(s, q)
}

/// W^C for fixed (λ, state, τ), evaluated through component jets.
#[derive(Debug, Clone, Copy)]
pub struct TwoLevelWigner {
    params: PTParams,
    state: TwoLevelState,
    tau: f64,
}

impl TwoLevelWigner {
    pub fn new(params: PTParams, state: TwoLevelState, tau: f64) -> Result<Self> {
        state.validate()?;
        if state.uses_excited() {
            params.require_excited()?;
        }
        components::check_supported(&params)?;
        Ok(Self { params, state, tau })
    }

    pub fn params(&self) -> &PTParams {
        &self.params
    }

    pub fn state(&self) -> &TwoLevelState {
        &self.state
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    fn needs(&self) -> Needs {
        let cross = self.state.is_pure() && (2.0 * self.state.theta()).sin() != 0.0;
        Needs { diagonal: true, cross }
    }

    /// (sin²θ, cos²θ, sin 2θ cos φ, sin 2θ sin φ) at time τ.
    fn coefficients(&self) -> (f64, f64, f64, f64) {
        let (w0, w1) = self.state.weights();
        match self.state {
            TwoLevelState::Pure { theta, .. } => {
                let phi = self.state.phase_at(&self.params, self.tau);
                let s2 = (2.0 * theta).sin();
                (w0, w1, s2 * phi.cos(), s2 * phi.sin())
            }
            TwoLevelState::Mixed { .. } => (w0, w1, 0.0, 0.0),
        }
    }
}

impl PhaseDensity for TwoLevelWigner {
    fn jet(&self, s: f64, q: f64, q_order: usize) -> Result<PhaseJet> {
        let needs = self.needs();
        let c = component_jets(&self.params, s, q, q_order, needs)?;
        let (w0, w1, cre, cim) = self.coefficients();
        let mut w = c.w00.scale(w0);
        if w1 != 0.0 {
            w = w + c.w11.scale(w1);
        }
        if needs.cross {
            w = w + c.w10_re.scale(cre) + c.w10_im.scale(cim);
        }
        Ok(w)
    }

    fn time_derivative(&self, s: f64, q: f64) -> Result<f64> {
        let needs = self.needs();
        if !needs.cross {
            return Ok(0.0);
        }
        let c = component_jets(&self.params, s, q, 0, Needs { diagonal: false, cross: true })?;
        let (_, _, cre, cim) = self.coefficients();
        // dφ/dτ = −(λ − ½); ∂φ of (cos φ Re + sin φ Im) = −sin φ Re + cos φ Im
        let rate = -(self.params.lambda_f64() - 0.5);
        Ok(rate * (-cim * c.w10_re.value() + cre * c.w10_im.value()))
    }
}

/// A single component W^{ij} as a density (real part for the cross term, `imaginary` selects Im).
#[derive(Debug, Clone, Copy)]
pub struct ComponentDensity {
    pub params: PTParams,
    pub i: u32,
    pub j: u32,
    pub imaginary: bool,
}

impl PhaseDensity for ComponentDensity {
    fn jet(&self, s: f64, q: f64, q_order: usize) -> Result<PhaseJet> {
        let diag = self.i == self.j;
        let c = component_jets(&self.params, s, q, q_order, Needs { diagonal: diag, cross: !diag })?;
        Ok(match (self.i, self.j, self.imaginary) {
            (0, 0, _) => c.w00,
            (1, 1, _) => c.w11,
            (_, _, false) => c.w10_re,
            (1, 0, true) => c.w10_im,
            _ => c.w10_im.scale(-1.0),
        })
    }
}
