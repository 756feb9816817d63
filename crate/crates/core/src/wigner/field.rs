use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ptsystem::{PTParams, TwoLevelState};
use crate::quadrature::trapezoid_weights;

use super::{ComponentDensity, PhaseDensity, TwoLevelWigner};

/// Uniform rectangular phase-space grid, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub s_min: f64,
    pub s_max: f64,
    pub ns: usize,
    pub q_min: f64,
    pub q_max: f64,
    pub nq: usize,
}

impl Grid {
    pub fn new(s_min: f64, s_max: f64, ns: usize, q_min: f64, q_max: f64, nq: usize) -> Result<Self> {
        let g = Self { s_min, s_max, ns, q_min, q_max, nq };
        g.validate()?;
        Ok(g)
    }

    /// Square grid [−half, half]² with n points per axis.
    pub fn symmetric(half_s: f64, ns: usize, half_q: f64, nq: usize) -> Result<Self> {
        Self::new(-half_s, half_s, ns, -half_q, half_q, nq)
    }

    pub fn validate(&self) -> Result<()> {
        let ok_axis = |lo: f64, hi: f64, n: usize| lo.is_finite() && hi.is_finite() && lo < hi && n >= 2;
        if !ok_axis(self.s_min, self.s_max, self.ns) {
            return Err(Error::InvalidGrid(format!(
                "s axis {}:{}:{} needs finite min < max and at least 2 points",
                self.s_min, self.s_max, self.ns
            )));
        }
        if !ok_axis(self.q_min, self.q_max, self.nq) {
            return Err(Error::InvalidGrid(format!(
                "q axis {}:{}:{} needs finite min < max and at least 2 points",
                self.q_min, self.q_max, self.nq
            )));
        }
        Ok(())
    }

    pub fn hs(&self) -> f64 {
        (self.s_max - self.s_min) / (self.ns - 1) as f64
    }

    pub fn hq(&self) -> f64 {
        (self.q_max - self.q_min) / (self.nq - 1) as f64
    }

    pub fn s(&self, i: usize) -> f64 {
        if i + 1 == self.ns {
            self.s_max
        } else {
            self.s_min + i as f64 * self.hs()
        }
    }

    pub fn q(&self, j: usize) -> f64 {
        if j + 1 == self.nq {
            self.q_max
        } else {
            self.q_min + j as f64 * self.hq()
        }
    }

    pub fn len(&self) -> usize {
        self.ns * self.nq
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index, s fastest.
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.ns + i
    }

    /// Trapezoid weights over the whole grid, flat and s-fastest.
    pub fn weights(&self) -> Vec<f64> {
        let ws = trapezoid_weights(self.ns, self.hs());
        let wq = trapezoid_weights(self.nq, self.hq());
        let mut w = Vec::with_capacity(self.len());
        for b in &wq {
            for a in &ws {
                w.push(a * b);
            }
        }
        w
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{},{}:{}:{}", self.s_min, self.s_max, self.ns, self.q_min, self.q_max, self.nq)
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `smin:smax:ns,qmin:qmax:nq`
    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::InvalidGrid(format!("expected smin:smax:ns,qmin:qmax:nq, got '{text}'"));
        let (sa, qa) = text.split_once(',').ok_or_else(bad)?;
        let axis = |part: &str| -> Result<(f64, f64, usize)> {
            let v: Vec<&str> = part.trim().split(':').collect();
            if v.len() != 3 {
                return Err(bad());
            }
            let lo = v[0].trim().parse::<f64>().map_err(|_| bad())?;
            let hi = v[1].trim().parse::<f64>().map_err(|_| bad())?;
            let n = v[2].trim().parse::<usize>().map_err(|_| bad())?;
            Ok((lo, hi, n))
        };
        let (s0, s1, ns) = axis(sa)?;
        let (q0, q1, nq) = axis(qa)?;
        Grid::new(s0, s1, ns, q0, q1, nq)
    }
}

/// What a sampled field represents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub lambda: u32,
    pub label: String,
    pub tau: f64,
}

/// Sampled phase-space function, values flat with s fastest (index `j * ns + i`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerField {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub meta: FieldMeta,
}

impl WignerField {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// ∬ W ds dq (trapezoid).
    pub fn normalization(&self) -> f64 {
        self.grid.weights().iter().zip(&self.values).map(|(w, v)| w * v).sum()
    }

    /// 2π ∬ W² ds dq.
    pub fn purity(&self) -> f64 {
        let sum: f64 = self.grid.weights().iter().zip(&self.values).map(|(w, v)| w * v * v).sum();
        2.0 * std::f64::consts::PI * sum
    }

    /// ∫ W dq at each grid s.
    pub fn s_marginal(&self) -> Vec<f64> {
        let wq = trapezoid_weights(self.grid.nq, self.grid.hq());
        (0..self.grid.ns).map(|i| (0..self.grid.nq).map(|j| wq[j] * self.at(i, j)).sum()).collect()
    }

    /// ∫ W ds at each grid q.
    pub fn q_marginal(&self) -> Vec<f64> {
        let ws = trapezoid_weights(self.grid.ns, self.grid.hs());
        (0..self.grid.nq).map(|j| (0..self.grid.ns).map(|i| ws[i] * self.at(i, j)).sum()).collect()
    }

    /// ∬ |W| over the border cells, a crude measure of what the box misses.
    pub fn edge_mass(&self) -> f64 {
        let g = &self.grid;
        let w = g.weights();
        let mut m = 0.0;
        for j in 0..g.nq {
            for i in 0..g.ns {
                if i == 0 || j == 0 || i + 1 == g.ns || j + 1 == g.nq {
                    let k = g.index(i, j);
                    m += (w[k] * self.values[k]).abs();
                }
            }
        }
        m
    }
}

/// Samples any density on the grid. Rows are computed in parallel, output order is fixed.
pub fn sample_density<D: PhaseDensity>(density: &D, grid: &Grid, meta: FieldMeta) -> Result<WignerField> {
    grid.validate()?;
    let rows: Vec<Vec<f64>> = (0..grid.nq)
        .into_par_iter()
        .map(|j| {
            let q = grid.q(j);
            (0..grid.ns).map(|i| density.value(grid.s(i), q)).collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WignerField { grid: *grid, values: rows.concat(), meta })
}

/// W^C of a two-level state at time τ on a grid.
pub fn sample_field(params: &PTParams, state: &TwoLevelState, tau: f64, grid: &Grid) -> Result<WignerField> {
    let w = TwoLevelWigner::new(*params, *state, tau)?;
    let meta = FieldMeta { lambda: params.lambda(), label: "W".into(), tau };
    sample_density(&w, grid, meta)
}

/// One component on a grid: (i, j) ∈ {0, 1}², `imaginary` picks Im of the cross term.
pub fn sample_component_field(params: &PTParams, i: u32, j: u32, imaginary: bool, grid: &Grid) -> Result<WignerField> {
    if i > 1 || j > 1 {
        return Err(Error::Domain(format!("component indices must be 0 or 1, got ({i}, {j})")));
    }
    if i.max(j) == 1 {
        params.require_excited()?;
    }
    super::components::check_supported(params)?;
    let part = if i == j {
        ""
    } else if imaginary {
        ".im"
    } else {
        ".re"
    };
    let meta = FieldMeta { lambda: params.lambda(), label: format!("W{i}{j}{part}"), tau: 0.0 };
    sample_density(&ComponentDensity { params: *params, i, j, imaginary }, grid, meta)
}
