//! Closed-form Wigner components as phase jets.
//!
//! ```text
//!   W⁰⁰ = 2 𝒜²/Γ(λ) · 𝒟^{λ−1} f
//!   W¹¹ = 4(λ−1) 𝒜² [ u 𝒟^{λ−1} f / Γ(λ) − 𝒟^{λ−2} f / Γ(λ−1) ],   u = cosh 2s
//!   W¹⁰ = √(8(λ−1)) 𝒜²/Γ(λ) · [ sinh s 𝒟^{λ−1} g + i cosh s 𝒟^{λ−1} h ]
//! ```
//!
//! with W^{ij}(s, q) = (1/π) ∫ dy e^{2iqy} ψᵢ(s+y) ψⱼ(s−y).

use crate::error::{Error, Result};
use crate::ptsystem::PTParams;
use crate::specfun::ln_gamma_pos;
use crate::taylor::PhaseJet;

use super::kernels::{kernel_u_table, operator_jet, Kernel};

/// Largest λ served by the closed forms; larger wells go through the quadrature oracle.
pub const LAMBDA_MAX_CLOSED: u32 = 12;

#[derive(Debug, Clone, Copy, Default)]
pub struct Needs {
    pub diagonal: bool,
    pub cross: bool,
}

/// Component jets at one phase-space point. Absent components are left at zero.
#[derive(Debug, Clone, Copy)]
pub struct ComponentJets {
    pub w00: PhaseJet,
    pub w11: PhaseJet,
    pub w10_re: PhaseJet,
    pub w10_im: PhaseJet,
}

pub fn check_supported(params: &PTParams) -> Result<()> {
    if params.lambda() > LAMBDA_MAX_CLOSED {
        return Err(Error::Unsupported(format!(
            "closed forms cover 2 <= lambda <= {LAMBDA_MAX_CLOSED}; lambda = {} needs the oracle",
            params.lambda()
        )));
    }
    Ok(())
}

pub fn component_jets(params: &PTParams, s: f64, q: f64, q_order: usize, needs: Needs) -> Result<ComponentJets> {
    check_supported(params)?;
    let lam = params.lambda() as usize;
    let l = params.lambda_f64();
    let a2 = params.norm_sq();
    let inv_gamma_l = (-ln_gamma_pos(l)).exp();
    let zero = PhaseJet::zero(q_order);
    let mut out = ComponentJets { w00: zero, w11: zero, w10_re: zero, w10_im: zero };
    let excited = params.lambda() >= 2;
    if needs.diagonal {
        let tf = kernel_u_table(Kernel::F, s, q, lam, q_order)?;
        let d_top = operator_jet(&tf, lam - 1, s);
        out.w00 = d_top.scale(2.0 * a2 * inv_gamma_l);
        if excited {
            let d_low = operator_jet(&tf, lam - 2, s);
            let u = PhaseJet::from_s((2.0 * s).cosh(), 2.0 * (2.0 * s).sinh(), q_order);
            let inv_gamma_lm1 = (-ln_gamma_pos(l - 1.0)).exp();
            let c = 4.0 * (l - 1.0) * a2;
            out.w11 = ((u * d_top).scale(inv_gamma_l) - d_low.scale(inv_gamma_lm1)).scale(c);
        }
    }
    if needs.cross && excited {
        let c = (8.0 * (l - 1.0)).sqrt() * a2 * inv_gamma_l;
        let tg = kernel_u_table(Kernel::G, s, q, lam, q_order)?;
        let th = kernel_u_table(Kernel::H, s, q, lam, q_order)?;
        let sinh_s = PhaseJet::from_s(s.sinh(), s.cosh(), q_order);
        let cosh_s = PhaseJet::from_s(s.cosh(), s.sinh(), q_order);
        out.w10_re = (sinh_s * operator_jet(&tg, lam - 1, s)).scale(c);
        out.w10_im = (cosh_s * operator_jet(&th, lam - 1, s)).scale(c);
    }
    Ok(out)
}
