//! Wigner currents from the truncated Moyal series, continuity residuals, the
//! non-Liouvillian quantifier and stagnation points of the current.
//!
//! With the dynamics generated by p²/2 + V(s) (ħ = 1):
//!
//! ```text
//!   J_s = q W
//!   J_q = −Σ_{k≤K} (−1)^k / (4^k (2k+1)!) · V^{(2k+1)}(s) · ∂_q^{2k} W
//! ```
//!
//! For the hyperbolic well V = −½λ(λ+1) sech² s.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ptsystem::{PTParams, PhasePoint, TwoLevelState};
use crate::taylor::{factorial, Taylor, MAX_COEFFS};
use crate::wigner::{Grid, PhaseDensity, TwoLevelWigner};

/// Largest supported truncation order K.
pub const MAX_TRUNCATION: usize = 6;
/// Default truncation order.
pub const DEFAULT_TRUNCATION: usize = 3;
/// Relative floor below which |W| is masked in the quantifier.
pub const MASK_FLOOR: f64 = 1e-10;

const NEWTON_TOL: f64 = 1e-8;
const NEWTON_MAX_ITER: usize = 60;
const WINDING_SAMPLES: usize = 16;

/// A potential that can report its Taylor expansion about any s.
pub trait Potential: Sync {
    fn taylor(&self, s: f64, order: usize) -> Taylor;
}

/// V(s) = −½λ(λ+1) sech² s.
#[derive(Debug, Clone, Copy)]
pub struct HyperbolicWell {
    pub params: PTParams,
}

impl Potential for HyperbolicWell {
    fn taylor(&self, s: f64, order: usize) -> Taylor {
        let l = self.params.lambda_f64();
        Taylor::sech_at(s, order).square().scale(-0.5 * l * (l + 1.0))
    }
}

/// V(s) = ω² s² / 2.
#[derive(Debug, Clone, Copy)]
pub struct Harmonic {
    pub omega: f64,
}

impl Potential for Harmonic {
    fn taylor(&self, s: f64, order: usize) -> Taylor {
        let w2 = self.omega * self.omega;
        let mut c = vec![0.0; order + 1];
        for (k, v) in [0.5 * w2 * s * s, w2 * s, 0.5 * w2].into_iter().enumerate().take(order + 1) {
            c[k] = v;
        }
        Taylor::from_coeffs(&c)
    }
}

/// Current and its first derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFlow {
    pub w: f64,
    pub dw_ds: f64,
    pub dw_dq: f64,
    pub js: f64,
    pub jq: f64,
    /// [[∂s Js, ∂q Js], [∂s Jq, ∂q Jq]]
    pub jacobian: [[f64; 2]; 2],
}

impl LocalFlow {
    pub fn divergence(&self) -> f64 {
        self.jacobian[0][0] + self.jacobian[1][1]
    }

    /// ∇·(J/W), or `None` where |W| ≤ `w_floor`.
    pub fn velocity_divergence(&self, w_floor: f64) -> Option<f64> {
        if self.w.abs() <= w_floor {
            return None;
        }
        let jgrad = self.js * self.dw_ds + self.jq * self.dw_dq;
        Some((self.w * self.divergence() - jgrad) / (self.w * self.w))
    }
}

/// Moyal-series flow of a density in a potential, truncated at order K.
#[derive(Debug, Clone, Copy)]
pub struct Flow<D, P> {
    density: D,
    potential: P,
    truncation: usize,
}

impl<D: PhaseDensity, P: Potential> Flow<D, P> {
    pub fn new(density: D, potential: P, truncation: usize) -> Result<Self> {
        if truncation > MAX_TRUNCATION {
            return Err(Error::Domain(format!("truncation K = {truncation} exceeds {MAX_TRUNCATION}")));
        }
        Ok(Self { density, potential, truncation })
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn density(&self) -> &D {
        &self.density
    }

    pub fn local(&self, s: f64, q: f64) -> Result<LocalFlow> {
        let k_max = self.truncation;
        let jet = self.density.jet(s, q, 2 * k_max + 1)?;
        let v = self.potential.taylor(s, (2 * k_max + 2).min(MAX_COEFFS - 1));
        let w = jet.value();
        let (mut jq, mut djq_ds, mut djq_dq) = (0.0, 0.0, 0.0);
        for k in 0..=k_max {
            let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
            let c = sign / (4f64.powi(k as i32) * factorial(2 * k + 1));
            let v1 = v.derivative(2 * k + 1);
            let v2 = v.derivative(2 * k + 2);
            jq += c * v1 * jet.dq(2 * k);
            djq_ds += c * (v2 * jet.dq(2 * k) + v1 * jet.ds_dq(2 * k));
            djq_dq += c * v1 * jet.dq(2 * k + 1);
        }
        let (dw_ds, dw_dq) = (jet.ds(), jet.dq(1));
        Ok(LocalFlow { w, dw_ds, dw_dq, js: q * w, jq, jacobian: [[q * dw_ds, w + q * dw_dq], [djq_ds, djq_dq]] })
    }

    pub fn current(&self, s: f64, q: f64) -> Result<(f64, f64)> {
        let l = self.local(s, q)?;
        Ok((l.js, l.jq))
    }

    /// ∂W/∂τ + ∇·J.
    pub fn residual(&self, s: f64, q: f64) -> Result<f64> {
        Ok(self.density.time_derivative(s, q)? + self.local(s, q)?.divergence())
    }

    /// Currents on a grid.
    pub fn sample(&self, grid: &Grid) -> Result<(Vec<f64>, Vec<f64>)> {
        let rows = per_row(grid, |s, q| self.current(s, q))?;
        Ok(rows.into_iter().unzip())
    }

    /// Continuity residual on a grid with its sup-norm.
    pub fn residual_field(&self, grid: &Grid) -> Result<ScalarField> {
        let values = per_row(grid, |s, q| self.residual(s, q))?;
        Ok(ScalarField::new(*grid, values))
    }

    /// Divergence of J alone on a grid.
    pub fn divergence_field(&self, grid: &Grid) -> Result<ScalarField> {
        let values = per_row(grid, |s, q| Ok(self.local(s, q)?.divergence()))?;
        Ok(ScalarField::new(*grid, values))
    }

    /// arctan(∇·u) on a grid, `None` where |W| ≤ 1e−10 · max|W|.
    pub fn liouvillian_field(&self, grid: &Grid) -> Result<LiouvillianField> {
        let locals = per_row(grid, |s, q| self.local(s, q))?;
        let w_max = locals.iter().fold(0.0_f64, |m, l| m.max(l.w.abs()));
        let floor = MASK_FLOOR * w_max;
        let values = locals.iter().map(|l| l.velocity_divergence(floor).map(f64::atan)).collect();
        Ok(LiouvillianField { grid: *grid, values, w_floor: floor })
    }

    /// Zeros of J in a sampled field, refined and classified.
    pub fn stagnation_points(&self, field: &FlowField) -> Result<Vec<StagnationPoint>> {
        let g = &field.grid;
        let cells: Vec<(usize, usize)> = (0..g.nq - 1)
            .flat_map(|j| (0..g.ns - 1).map(move |i| (i, j)))
            .filter(|&(i, j)| {
                let idx = [g.index(i, j), g.index(i + 1, j), g.index(i, j + 1), g.index(i + 1, j + 1)];
                straddles(idx.map(|k| field.js[k])) && straddles(idx.map(|k| field.jq[k]))
            })
            .collect();
        let found: Vec<Option<StagnationPoint>> =
            cells.par_iter().map(|&(i, j)| self.refine_cell(g, i, j)).collect::<Result<Vec<_>>>()?;
        // neighbouring cells often refine onto the same zero
        let mut points: Vec<StagnationPoint> = Vec::new();
        for sp in found.into_iter().flatten() {
            let tol = 1e-6 * (1.0 + sp.location.s.abs().max(sp.location.q.abs()));
            let seen = points
                .iter()
                .any(|o| (o.location.s - sp.location.s).abs() < tol && (o.location.q - sp.location.q).abs() < tol);
            if !seen {
                points.push(sp);
            }
        }
        // quantized key so rounding noise in s cannot reorder points that share an abscissa
        let key = |p: &StagnationPoint| ((p.location.s * 1e8).round() as i64, (p.location.q * 1e8).round() as i64);
        points.sort_by_key(key);
        Ok(points)
    }

    fn refine_cell(&self, g: &Grid, i: usize, j: usize) -> Result<Option<StagnationPoint>> {
        let (hs, hq) = (g.hs(), g.hq());
        let (s0, q0) = (g.s(i), g.q(j));
        let inside = |p: PhasePoint| {
            p.s >= s0 - 0.5 * hs && p.s <= s0 + 1.5 * hs && p.q >= q0 - 0.5 * hq && p.q <= q0 + 1.5 * hq
        };
        match self.newton(s0 + 0.5 * hs, q0 + 0.5 * hq)? {
            Some(p) if inside(p) => {
                let radius = 0.05 * hs.min(hq);
                let index = self.winding(p, radius)?;
                match StagnationKind::from_index(index) {
                    Some(kind) => Ok(Some(StagnationPoint { location: p, poincare_index: index, kind })),
                    None => Err(Error::Refinement { i, j }),
                }
            }
            Some(_) => Ok(None),
            None => {
                // no convergence: only an error if the cell really encloses net index
                let boundary = self.cell_winding(s0, q0, hs, hq)?;
                if boundary == 0 {
                    Ok(None)
                } else {
                    Err(Error::Refinement { i, j })
                }
            }
        }
    }

    /// Damped Newton on J = 0. `None` if it fails to converge.
    fn newton(&self, mut s: f64, mut q: f64) -> Result<Option<PhasePoint>> {
        let mut l = self.local(s, q)?;
        let mut norm = l.js.hypot(l.jq);
        for _ in 0..NEWTON_MAX_ITER {
            if norm < NEWTON_TOL {
                return Ok(Some(PhasePoint::new(s, q)));
            }
            let [[a, b], [c, d]] = l.jacobian;
            let det = a * d - b * c;
            if det == 0.0 || !det.is_finite() {
                return Ok(None);
            }
            let ds = (d * l.js - b * l.jq) / det;
            let dq = (a * l.jq - c * l.js) / det;
            let mut t = 1.0;
            loop {
                let (sn, qn) = (s - t * ds, q - t * dq);
                let ln = self.local(sn, qn)?;
                let nn = ln.js.hypot(ln.jq);
                if nn < norm || t < 1e-6 {
                    s = sn;
                    q = qn;
                    l = ln;
                    norm = nn;
                    break;
                }
                t *= 0.5;
            }
        }
        Ok(if norm < NEWTON_TOL { Some(PhasePoint::new(s, q)) } else { None })
    }

    /// Poincaré index from the winding of J over a circle.
    pub fn winding(&self, center: PhasePoint, radius: f64) -> Result<i32> {
        let pts: Vec<(f64, f64)> = (0..WINDING_SAMPLES)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / WINDING_SAMPLES as f64;
                (center.s + radius * a.cos(), center.q + radius * a.sin())
            })
            .collect();
        self.winding_along(&pts)
    }

    fn cell_winding(&self, s0: f64, q0: f64, hs: f64, hq: f64) -> Result<i32> {
        let n = 8;
        let mut pts = Vec::with_capacity(4 * n);
        for k in 0..n {
            pts.push((s0 + hs * k as f64 / n as f64, q0));
        }
        for k in 0..n {
            pts.push((s0 + hs, q0 + hq * k as f64 / n as f64));
        }
        for k in 0..n {
            pts.push((s0 + hs - hs * k as f64 / n as f64, q0 + hq));
        }
        for k in 0..n {
            pts.push((s0, q0 + hq - hq * k as f64 / n as f64));
        }
        self.winding_along(&pts)
    }

    /// Net winding of J along a closed polygon.
    pub fn winding_along(&self, pts: &[(f64, f64)]) -> Result<i32> {
        let angles =
            pts.iter().map(|&(s, q)| self.current(s, q).map(|(js, jq)| jq.atan2(js))).collect::<Result<Vec<f64>>>()?;
        let mut total = 0.0;
        for k in 0..angles.len() {
            let mut d = angles[(k + 1) % angles.len()] - angles[k];
            while d > PI {
                d -= 2.0 * PI;
            }
            while d < -PI {
                d += 2.0 * PI;
            }
            total += d;
        }
        Ok((total / (2.0 * PI)).round() as i32)
    }
}

fn straddles(v: [f64; 4]) -> bool {
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    lo <= 0.0 && hi >= 0.0
}

fn per_row<T: Send>(grid: &Grid, f: impl Fn(f64, f64) -> Result<T> + Sync) -> Result<Vec<T>> {
    grid.validate()?;
    let rows = (0..grid.nq)
        .into_par_iter()
        .map(|j| (0..grid.ns).map(|i| f(grid.s(i), grid.q(j))).collect::<Result<Vec<T>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// A real field on a grid plus its sup-norm.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub sup_norm: f64,
}

impl ScalarField {
    fn new(grid: Grid, values: Vec<f64>) -> Self {
        let sup_norm = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        Self { grid, values, sup_norm }
    }
}

/// arctan(∇·u) on a grid; masked entries are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiouvillianField {
    pub grid: Grid,
    pub values: Vec<Option<f64>>,
    pub w_floor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowMeta {
    pub params: PTParams,
    pub state: TwoLevelState,
    pub tau: f64,
}

/// Sampled current, flat arrays with s fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowField {
    pub grid: Grid,
    pub js: Vec<f64>,
    pub jq: Vec<f64>,
    pub truncation: usize,
    pub meta: FlowMeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StagnationKind {
    Vortex,
    Saddle,
}

impl StagnationKind {
    pub fn from_index(index: i32) -> Option<Self> {
        match index {
            1 => Some(Self::Vortex),
            -1 => Some(Self::Saddle),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StagnationPoint {
    pub location: PhasePoint,
    pub poincare_index: i32,
    pub kind: StagnationKind,
}

fn pt_flow(
    params: &PTParams,
    state: &TwoLevelState,
    tau: f64,
    k: usize,
) -> Result<Flow<TwoLevelWigner, HyperbolicWell>> {
    Flow::new(TwoLevelWigner::new(*params, *state, tau)?, HyperbolicWell { params: *params }, k)
}

/// (J_s, J_q) of the two-level Wigner function at one point.
pub fn current(params: &PTParams, state: &TwoLevelState, tau: f64, k: usize, s: f64, q: f64) -> Result<(f64, f64)> {
    pt_flow(params, state, tau, k)?.current(s, q)
}

/// ∂W/∂τ + ∇·J over a grid.
pub fn continuity_residual(
    params: &PTParams,
    state: &TwoLevelState,
    grid: &Grid,
    tau: f64,
    k: usize,
) -> Result<ScalarField> {
    pt_flow(params, state, tau, k)?.residual_field(grid)
}

/// arctan(∇·u) at one point, `None` where |W| ≤ `w_floor`.
pub fn nonliouvillian_quantifier(
    params: &PTParams,
    state: &TwoLevelState,
    tau: f64,
    k: usize,
    s: f64,
    q: f64,
    w_floor: f64,
) -> Result<Option<f64>> {
    Ok(pt_flow(params, state, tau, k)?.local(s, q)?.velocity_divergence(w_floor).map(f64::atan))
}

/// Current of the two-level Wigner function on a grid.
pub fn flow_field(params: &PTParams, state: &TwoLevelState, tau: f64, k: usize, grid: &Grid) -> Result<FlowField> {
    let (js, jq) = pt_flow(params, state, tau, k)?.sample(grid)?;
    Ok(FlowField { grid: *grid, js, jq, truncation: k, meta: FlowMeta { params: *params, state: *state, tau } })
}

/// W, current and first derivatives at every grid node, s fastest.
pub fn local_flow_grid(
    params: &PTParams,
    state: &TwoLevelState,
    tau: f64,
    k: usize,
    grid: &Grid,
) -> Result<Vec<LocalFlow>> {
    let flow = pt_flow(params, state, tau, k)?;
    per_row(grid, |s, q| flow.local(s, q))
}

/// arctan(∇·u) of the two-level flow on a grid.
pub fn liouvillian_field(
    params: &PTParams,
    state: &TwoLevelState,
    tau: f64,
    k: usize,
    grid: &Grid,
) -> Result<LiouvillianField> {
    pt_flow(params, state, tau, k)?.liouvillian_field(grid)
}

/// Stagnation points of a sampled two-level flow field.
pub fn find_stagnation_points(flow: &FlowField) -> Result<Vec<StagnationPoint>> {
    let m = &flow.meta;
    pt_flow(&m.params, &m.state, m.tau, flow.truncation)?.stagnation_points(flow)
}
