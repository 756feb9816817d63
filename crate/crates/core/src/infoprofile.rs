//! One-mode quantifiers: moments, kurtosis, covariance, entropic
//! non-Gaussianity and the negativity volume.
//!
//! Moments of the two-level state are assembled from component moments
//! ∫ ξⁿ W^{ij}, which reduce to one-dimensional integrals of the wave functions:
//!
//! ```text
//!   ∫ sⁿ W^{ij} = ∫ xⁿ ψᵢ ψⱼ dx
//!   ∫ qⁿ W^{ij} = (−2i)^{−n} Σ_k C(n,k) (−1)^{n−k} ∫ ψᵢ^{(k)} ψⱼ^{(n−k)} dx
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ptsystem::{eigenstate_derivatives, eigenstate_envelope, PTParams, TwoLevelState};
use crate::quadrature::{integrate_centered, QuadOptions};
use crate::specfun::{ln_gamma_pos, trigamma};
use crate::wigner::WignerField;

/// Where a moment came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moment {
    pub value: f64,
    pub provenance: Provenance,
}

impl Moment {
    fn closed(value: f64) -> Self {
        Self { value, provenance: Provenance::ClosedForm }
    }

    fn quad(value: f64) -> Self {
        Self { value, provenance: Provenance::Quadrature }
    }
}

/// Raw (non-central) moments of s and q; `cross_sq` is ⟨{s, q}⟩/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    pub mean_s: Moment,
    pub mean_q: Moment,
    pub m2_s: Moment,
    pub m2_q: Moment,
    pub cross_sq: Moment,
    pub m3_s: Option<Moment>,
    pub m3_q: Option<Moment>,
    pub m4_s: Option<Moment>,
    pub m4_q: Option<Moment>,
}

impl MomentTable {
    pub fn var_s(&self) -> f64 {
        self.m2_s.value - self.mean_s.value.powi(2)
    }

    pub fn var_q(&self) -> f64 {
        self.m2_q.value - self.mean_q.value.powi(2)
    }

    /// Moments of a sampled field by 2-D trapezoid quadrature.
    pub fn from_field(field: &WignerField) -> Self {
        let g = &field.grid;
        let w = g.weights();
        let mut acc = [0.0; 9];
        for j in 0..g.nq {
            let q = g.q(j);
            for i in 0..g.ns {
                let s = g.s(i);
                let k = g.index(i, j);
                let m = w[k] * field.values[k];
                let terms = [s, q, s * s, q * q, s * q, s * s * s, q * q * q, s.powi(4), q.powi(4)];
                for (a, t) in acc.iter_mut().zip(terms) {
                    *a += m * t;
                }
            }
        }
        let q = Moment::quad;
        MomentTable {
            mean_s: q(acc[0]),
            mean_q: q(acc[1]),
            m2_s: q(acc[2]),
            m2_q: q(acc[3]),
            cross_sq: q(acc[4]),
            m3_s: Some(q(acc[5])),
            m3_q: Some(q(acc[6])),
            m4_s: Some(q(acc[7])),
            m4_q: Some(q(acc[8])),
        }
    }
}

fn check_state(params: &PTParams, state: &TwoLevelState) -> Result<()> {
    state.validate()?;
    if state.uses_excited() {
        params.require_excited()?;
    }
    Ok(())
}

/// ⟨s²⟩ of ψ⁰: ψ₁(λ)/2.
pub fn s2_ground(params: &PTParams) -> f64 {
    0.5 * trigamma(params.lambda_f64()).expect("λ ≥ 1")
}

/// ⟨s²⟩ of ψ¹: [ψ₁(λ) + (2λ−1)/(λ−1)²]/2.
pub fn s2_excited(params: &PTParams) -> Result<f64> {
    params.require_excited()?;
    let l = params.lambda_f64();
    Ok(0.5 * (trigamma(l)? + (2.0 * l - 1.0) / (l - 1.0).powi(2)))
}

/// ⟨q²⟩ of ψ⁰: λ²/(2λ+1).
pub fn q2_ground(params: &PTParams) -> f64 {
    let l = params.lambda_f64();
    l * l / (2.0 * l + 1.0)
}

/// ⟨q²⟩ of ψ¹: (λ−1)(3λ+1)/(2λ+1).
pub fn q2_excited(params: &PTParams) -> Result<f64> {
    params.require_excited()?;
    let l = params.lambda_f64();
    Ok((l - 1.0) * (3.0 * l + 1.0) / (2.0 * l + 1.0))
}

/// ∫ s W¹⁰ = ⟨ψ⁰|s|ψ¹⟩ = √((λ−1)/2) Γ²(λ−½)/Γ²(λ).
pub fn s_transition(params: &PTParams) -> Result<f64> {
    params.require_excited()?;
    let l = params.lambda_f64();
    let ratio = (ln_gamma_pos(l - 0.5) - ln_gamma_pos(l)).exp();
    Ok(((l - 1.0) / 2.0).sqrt() * ratio * ratio)
}

/// ∫ q W¹⁰ = i (λ − ½) ⟨ψ⁰|s|ψ¹⟩.
pub fn q_transition(params: &PTParams) -> Result<Complex64> {
    Ok(Complex64::new(0.0, (params.lambda_f64() - 0.5) * s_transition(params)?))
}

fn moment_opts() -> QuadOptions {
    QuadOptions { abs_tol: 1e-13, rel_tol: 1e-13, max_panels: 20_000 }
}

/// q-derivatives of the wave functions grow like λ per order, so the absolute
/// tolerance follows the natural scale of ∫ qⁿ W.
fn q_moment_opts(params: &PTParams, n: usize) -> QuadOptions {
    let scale = (1.0 + params.lambda_f64()).powf(0.5 * n as f64);
    QuadOptions { abs_tol: 1e-13 * scale, ..moment_opts() }
}

/// Half-width beyond which x⁴ ψᵢ ψⱼ (and derivative products) are negligible.
fn support(params: &PTParams, i: u32, j: u32) -> f64 {
    let (ai, ki) = eigenstate_envelope(params, i);
    let (aj, kj) = eigenstate_envelope(params, j);
    let (a, k) = (ai * aj * (1.0 + params.depth()).powi(2), ki + kj);
    let mut x = 5.0 / k;
    for _ in 0..4 {
        x = ((a / 1e-18).ln() + 4.0 * x.max(1.0).ln()) / k;
    }
    x.max(4.0 / k.sqrt())
}

/// Component moment ∫ sⁿ W^{ij} (n ≤ 4), a real number.
pub fn component_s_moment(params: &PTParams, i: u32, j: u32, n: u32) -> Result<f64> {
    if i.max(j) == 1 {
        params.require_excited()?;
    }
    let x_max = support(params, i, j);
    integrate_centered(
        |x: f64| {
            let a = eigenstate_derivatives(params, i, x).map(|d| d[0]).unwrap_or(0.0);
            let b = eigenstate_derivatives(params, j, x).map(|d| d[0]).unwrap_or(0.0);
            x.powi(n as i32) * a * b
        },
        x_max,
        200,
        moment_opts(),
    )
}

/// Component moment ∫ qⁿ W^{ij} (n ≤ 4).
pub fn component_q_moment(params: &PTParams, i: u32, j: u32, n: u32) -> Result<Complex64> {
    if n > 4 {
        return Err(Error::Domain(format!("q-moments are available up to order 4, got {n}")));
    }
    if i.max(j) == 1 {
        params.require_excited()?;
    }
    let n = n as usize;
    let x_max = support(params, i, j);
    let real = integrate_centered(
        |x: f64| {
            let a = eigenstate_derivatives(params, i, x).unwrap_or([0.0; 5]);
            let b = eigenstate_derivatives(params, j, x).unwrap_or([0.0; 5]);
            let mut binom = 1.0;
            let mut acc = 0.0;
            for k in 0..=n {
                if k > 0 {
                    binom *= (n - k + 1) as f64 / k as f64;
                }
                let sign = if (n - k).is_multiple_of(2) { 1.0 } else { -1.0 };
                acc += binom * sign * a[k] * b[n - k];
            }
            acc
        },
        x_max,
        200,
        q_moment_opts(params, n),
    )?;
    // (−2i)^{−n}
    let factor = Complex64::new(0.0, -2.0).powi(-(n as i32));
    Ok(factor * real)
}

/// Combines component moments with the state's weights and interference coefficients.
fn combine(params: &PTParams, state: &TwoLevelState, tau: f64, diag: [f64; 2], cross: Complex64) -> f64 {
    let (w0, w1) = state.weights();
    let mut v = w0 * diag[0] + w1 * diag[1];
    if let TwoLevelState::Pure { theta, .. } = *state {
        let phi = state.phase_at(params, tau);
        v += (2.0 * theta).sin() * (phi.cos() * cross.re + phi.sin() * cross.im);
    }
    v
}

fn quadrature_moment(params: &PTParams, state: &TwoLevelState, tau: f64, var: char, n: u32) -> Result<f64> {
    let excited = state.uses_excited();
    let cross_needed = state.is_pure() && excited && (2.0 * state.theta()).sin() != 0.0;
    let comp = |i: u32, j: u32| -> Result<Complex64> {
        match var {
            's' => component_s_moment(params, i, j, n).map(|v| Complex64::new(v, 0.0)),
            _ => component_q_moment(params, i, j, n),
        }
    };
    let d0 = comp(0, 0)?.re;
    let d1 = if excited { comp(1, 1)?.re } else { 0.0 };
    let c = if cross_needed { comp(1, 0)? } else { Complex64::new(0.0, 0.0) };
    Ok(combine(params, state, tau, [d0, d1], c))
}

/// Moment table of a two-level state at time τ.
/// Second moments and means come from closed forms, third and fourth
/// (when `max_order` ≥ 3, 4) from quadrature.
pub fn moments(params: &PTParams, state: &TwoLevelState, tau: f64, max_order: u32) -> Result<MomentTable> {
    check_state(params, state)?;
    let (s2_1, q2_1, st, qt) = if params.lambda() >= 2 {
        (s2_excited(params)?, q2_excited(params)?, s_transition(params)?, q_transition(params)?)
    } else {
        (0.0, 0.0, 0.0, Complex64::new(0.0, 0.0))
    };
    let c = |diag: [f64; 2], cross: Complex64| Moment::closed(combine(params, state, tau, diag, cross));
    let zero = Complex64::new(0.0, 0.0);
    let higher = |var: char, n: u32| -> Result<Option<Moment>> {
        if max_order >= n {
            Ok(Some(Moment::quad(quadrature_moment(params, state, tau, var, n)?)))
        } else {
            Ok(None)
        }
    };
    Ok(MomentTable {
        mean_s: c([0.0, 0.0], Complex64::new(st, 0.0)),
        mean_q: c([0.0, 0.0], qt),
        m2_s: c([s2_ground(params), s2_1], zero),
        m2_q: c([q2_ground(params), q2_1], zero),
        // every component is even or odd in a way that kills ∫ s q W
        cross_sq: Moment::closed(0.0),
        m3_s: higher('s', 3)?,
        m3_q: higher('q', 3)?,
        m4_s: higher('s', 4)?,
        m4_q: higher('q', 4)?,
    })
}

/// Every entry of the table by one-dimensional quadrature of the wave functions.
pub fn quadrature_moments(params: &PTParams, state: &TwoLevelState, tau: f64) -> Result<MomentTable> {
    check_state(params, state)?;
    let m = |var: char, n: u32| quadrature_moment(params, state, tau, var, n).map(Moment::quad);
    let cross = {
        // ∫ s q W^{ij} = Re of the symmetrized x-space integral; zero for this family, kept as a check
        let comps = |i: u32, j: u32| -> Result<Complex64> {
            let x_max = support(params, i, j);
            // (−2i)^{−1} ∫ x (ψᵢ' ψⱼ − ψᵢ ψⱼ') dx
            let v = integrate_centered(
                |x: f64| {
                    let a = eigenstate_derivatives(params, i, x).unwrap_or([0.0; 5]);
                    let b = eigenstate_derivatives(params, j, x).unwrap_or([0.0; 5]);
                    x * (a[1] * b[0] - a[0] * b[1])
                },
                x_max,
                200,
                moment_opts(),
            )?;
            Ok(Complex64::new(0.0, 0.5) * v)
        };
        let excited = state.uses_excited();
        let d0 = comps(0, 0)?.re;
        let d1 = if excited { comps(1, 1)?.re } else { 0.0 };
        let c = if state.is_pure() && excited { comps(1, 0)? } else { Complex64::new(0.0, 0.0) };
        Moment::quad(combine(params, state, tau, [d0, d1], c))
    };
    Ok(MomentTable {
        mean_s: m('s', 1)?,
        mean_q: m('q', 1)?,
        m2_s: m('s', 2)?,
        m2_q: m('q', 2)?,
        cross_sq: cross,
        m3_s: Some(m('s', 3)?),
        m3_q: Some(m('q', 3)?),
        m4_s: Some(m('s', 4)?),
        m4_q: Some(m('q', 4)?),
    })
}

/// Kurtosis in three readings, for s and for q.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kurtosis {
    /// (⟨ξ⁴⟩ − ⟨ξ⟩⁴)/(⟨ξ²⟩ − ⟨ξ⟩²)² − 3
    pub regularized_s: f64,
    pub regularized_q: f64,
    /// central fourth moment over variance², minus 3
    pub excess_s: f64,
    pub excess_q: f64,
    /// central fourth moment over variance²
    pub ratio_s: f64,
    pub ratio_q: f64,
}

fn kurt_one(mean: f64, m2: f64, m3: f64, m4: f64) -> Result<(f64, f64, f64)> {
    let var = m2 - mean * mean;
    if !(var > 0.0) {
        return Err(Error::Domain(format!("degenerate variance {var}")));
    }
    let regularized = (m4 - mean.powi(4)) / (var * var) - 3.0;
    let central4 = m4 - 4.0 * mean * m3 + 6.0 * mean * mean * m2 - 3.0 * mean.powi(4);
    let ratio = central4 / (var * var);
    Ok((regularized, ratio - 3.0, ratio))
}

/// Kurtosis from a table holding fourth moments.
pub fn kurtosis(t: &MomentTable) -> Result<Kurtosis> {
    let need = |m: Option<Moment>| m.map(|m| m.value).ok_or_else(|| Error::Domain("fourth moments missing".into()));
    let (rs, es, xs) = kurt_one(t.mean_s.value, t.m2_s.value, need(t.m3_s)?, need(t.m4_s)?)?;
    let (rq, eq, xq) = kurt_one(t.mean_q.value, t.m2_q.value, need(t.m3_q)?, need(t.m4_q)?)?;
    Ok(Kurtosis { regularized_s: rs, regularized_q: rq, excess_s: es, excess_q: eq, ratio_s: xs, ratio_q: xq })
}

/// 2×2 covariance σ_ij = ½⟨{ξᵢ, ξⱼ}⟩ − ⟨ξᵢ⟩⟨ξⱼ⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceData {
    pub sigma: [[f64; 2]; 2],
    pub det: f64,
}

pub fn covariance(t: &MomentTable) -> CovarianceData {
    let ss = t.var_s();
    let qq = t.var_q();
    let sq = t.cross_sq.value - t.mean_s.value * t.mean_q.value;
    CovarianceData { sigma: [[ss, sq], [sq, qq]], det: ss * qq - sq * sq }
}

/// h(z) = (z+½)ln(z+½) − (z−½)ln(z−½), z ≥ ½.
pub fn gaussian_entropy(z: f64) -> Result<f64> {
    if !(z >= 0.5) {
        return Err(Error::Domain(format!("symplectic value {z} below 1/2")));
    }
    let lo = z - 0.5;
    let tail = if lo > 0.0 { lo * lo.ln() } else { 0.0 };
    Ok((z + 0.5) * (z + 0.5).ln() - tail)
}

/// δ = S_G − S. S is zero for pure states and the ensemble Shannon entropy for mixtures.
pub fn entropic_nongaussianity(cov: &CovarianceData, state: &TwoLevelState) -> Result<f64> {
    const TOL: f64 = 1e-10;
    if cov.det < 0.25 - TOL {
        return Err(Error::Domain(format!("covariance determinant {} below 1/4", cov.det)));
    }
    let s_gauss = gaussian_entropy(cov.det.max(0.25).sqrt())?;
    let s = match state {
        TwoLevelState::Pure { .. } => 0.0,
        TwoLevelState::Mixed { .. } => {
            let (w0, w1) = state.weights();
            [w0, w1].iter().filter(|w| **w > 0.0).map(|w| -w * w.ln()).sum()
        }
    };
    Ok(s_gauss - s)
}

/// ∬ (|W| − W)/2 over the grid. Cells whose corners change sign are
/// resolved on a bilinear 16×16 sub-grid so nodal lines do not smear.
pub fn negativity_volume(field: &WignerField) -> f64 {
    const SUB: usize = 16;
    let g = &field.grid;
    let (hs, hq) = (g.hs(), g.hq());
    let neg = |w: f64| if w < 0.0 { -w } else { 0.0 };
    let mut total = 0.0;
    for j in 0..g.nq - 1 {
        for i in 0..g.ns - 1 {
            let c = [field.at(i, j), field.at(i + 1, j), field.at(i, j + 1), field.at(i + 1, j + 1)];
            let all_pos = c.iter().all(|&v| v >= 0.0);
            let all_neg = c.iter().all(|&v| v <= 0.0);
            if all_pos {
                continue;
            }
            if all_neg {
                total += 0.25 * (c[0] + c[1] + c[2] + c[3]).abs() * hs * hq;
                continue;
            }
            let mut acc = 0.0;
            for b in 0..SUB {
                let y = (b as f64 + 0.5) / SUB as f64;
                for a in 0..SUB {
                    let x = (a as f64 + 0.5) / SUB as f64;
                    let v = c[0] * (1.0 - x) * (1.0 - y) + c[1] * x * (1.0 - y) + c[2] * (1.0 - x) * y + c[3] * x * y;
                    acc += neg(v);
                }
            }
            total += acc * hs * hq / (SUB * SUB) as f64;
        }
    }
    total
}
