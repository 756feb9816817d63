use std::path::PathBuf;

use anyhow::Result;
use serde_json::json;

use ptphase::bipartite::{
    bipartite_covariance, build_moments_matrix, oracle_grid, quadrature_moments_matrix, separability_report,
    symplectic_eigenvalues, symplectic_from_invariants, symplectic_numeric,
};
use ptphase::flow::{continuity_residual, find_stagnation_points, liouvillian_field, local_flow_grid, FlowMeta};
use ptphase::infoprofile::{
    component_q_moment, component_s_moment, covariance, entropic_nongaussianity, kurtosis, moments, q2_excited,
    q2_ground, s2_excited, s2_ground, s_transition,
};
use ptphase::ptsystem::{classical_trajectory, energy, trajectory_deviation};
use ptphase::wigner::{sample_component_field, sample_field, wigner_component, wigner_component_oracle};
use ptphase::{FlowField, PTParams, TwoLevelState};

use crate::config::{Command, ScenarioConfig};
use crate::output::{derived_path, emit, sidecar, Cell, Table};

pub fn run(cfg: &ScenarioConfig) -> Result<bool> {
    match cfg.command {
        Command::Classical => classical(cfg).map(|_| true),
        Command::Wigner => wigner(cfg).map(|_| true),
        Command::Flow => flow(cfg).map(|_| true),
        Command::Liouvillian => liouvillian(cfg).map(|_| true),
        Command::Infoprofile => infoprofile(cfg).map(|_| true),
        Command::Bipartite => bipartite(cfg).map(|_| true),
        Command::Validate => validate(cfg),
    }
}

fn params(cfg: &ScenarioConfig) -> Result<PTParams> {
    Ok(PTParams::new(cfg.lambda())?)
}

/// Output path of step k of a τ sweep; `None` means stdout.
fn step_path(cfg: &ScenarioConfig, k: usize) -> Option<PathBuf> {
    let base = cfg.out.as_deref()?;
    Some(if cfg.tau_steps == 0 { base.to_path_buf() } else { derived_path(base, &format!("_t{k}"), None) })
}

fn grid_cells(cfg: &ScenarioConfig, i: usize, j: usize) -> [Cell; 2] {
    [Cell::F(cfg.grid.s(i)), Cell::F(cfg.grid.q(j))]
}

fn classical(cfg: &ScenarioConfig) -> Result<()> {
    let params = PTParams::new(cfg.lambda())?;
    let mut t = Table::new(&["regime", "tau", "s", "q", "H"]);
    for regime in cfg.regimes() {
        regime.validate()?;
        for k in 0..=cfg.tau_steps {
            let tau = k as f64 * cfg.tau;
            let p = classical_trajectory(regime, tau);
            t.push(vec![Cell::S(regime.name().into()), tau.into(), p.s.into(), p.q.into(), energy(&params, p).into()]);
        }
    }
    emit(cfg, None, &t.render(cfg))
}

fn wigner(cfg: &ScenarioConfig) -> Result<()> {
    let params = params(cfg)?;
    for (k, tau) in cfg.taus().into_iter().enumerate() {
        let field = match cfg.component {
            Some(c) => {
                let (i, j, im) = c.indices();
                sample_component_field(&params, i, j, im, &cfg.grid)?
            }
            None => sample_field(&params, &cfg.state(), tau, &cfg.grid)?,
        };
        let mut t = Table::new(&["s", "q", "W"]).note("field", &field.meta.label).note("tau", tau);
        for j in 0..cfg.grid.nq {
            for i in 0..cfg.grid.ns {
                let [s, q] = grid_cells(cfg, i, j);
                t.push(vec![s, q, field.at(i, j).into()]);
            }
        }
        emit(cfg, step_path(cfg, k).as_deref(), &t.render(cfg))?;
    }
    Ok(())
}

fn flow(cfg: &ScenarioConfig) -> Result<()> {
    let params = params(cfg)?;
    let state = cfg.state();
    let g = cfg.grid;
    for (k, tau) in cfg.taus().into_iter().enumerate() {
        let locals = local_flow_grid(&params, &state, tau, cfg.truncation_k, &g)?;
        let residual = continuity_residual(&params, &state, &g, tau, cfg.truncation_k)?;
        let mut t = Table::new(&["s", "q", "W", "J_s", "J_q", "div_J", "residual"])
            .note("tau", tau)
            .note("truncation_K", cfg.truncation_k)
            .note("residual_sup", residual.sup_norm);
        for j in 0..g.nq {
            for i in 0..g.ns {
                let n = g.index(i, j);
                let l = &locals[n];
                let [s, q] = grid_cells(cfg, i, j);
                t.push(vec![
                    s,
                    q,
                    l.w.into(),
                    l.js.into(),
                    l.jq.into(),
                    l.divergence().into(),
                    residual.values[n].into(),
                ]);
            }
        }
        let path = step_path(cfg, k);
        emit(cfg, path.as_deref(), &t.render(cfg))?;

        let field = FlowField {
            grid: g,
            js: locals.iter().map(|l| l.js).collect(),
            jq: locals.iter().map(|l| l.jq).collect(),
            truncation: cfg.truncation_k,
            meta: FlowMeta { params, state, tau },
        };
        let points = find_stagnation_points(&field)?;
        match path {
            Some(p) => {
                let doc = sidecar(cfg, "stagnation-points", json!({ "tau": tau, "points": points }));
                emit(cfg, Some(&derived_path(&p, ".stagnation", Some("json"))), &doc)?;
            }
            None => eprintln!("{} stagnation points at tau = {tau} (use --out to write them)", points.len()),
        }
    }
    Ok(())
}

fn liouvillian(cfg: &ScenarioConfig) -> Result<()> {
    let params = params(cfg)?;
    let state = cfg.state();
    let g = cfg.grid;
    for (k, tau) in cfg.taus().into_iter().enumerate() {
        let locals = local_flow_grid(&params, &state, tau, cfg.truncation_k, &g)?;
        let field = liouvillian_field(&params, &state, tau, cfg.truncation_k, &g)?;
        let mut t = Table::new(&["s", "q", "W", "atan_div_u", "mask"])
            .note("tau", tau)
            .note("truncation_K", cfg.truncation_k)
            .note("w_floor", field.w_floor);
        for j in 0..g.nq {
            for i in 0..g.ns {
                let n = g.index(i, j);
                let [s, q] = grid_cells(cfg, i, j);
                let (v, mask) = match field.values[n] {
                    Some(v) => (v, 0),
                    None => (f64::NAN, 1),
                };
                t.push(vec![s, q, locals[n].w.into(), v.into(), Cell::I(mask)]);
            }
        }
        emit(cfg, step_path(cfg, k).as_deref(), &t.render(cfg))?;
    }
    Ok(())
}

fn infoprofile(cfg: &ScenarioConfig) -> Result<()> {
    let cols = [
        "lambda",
        "state",
        "mean_s",
        "mean_q",
        "var_s",
        "var_q",
        "m4_s",
        "m4_q",
        "kurtosis_excess_s",
        "kurtosis_excess_q",
        "kurtosis_ratio_s",
        "kurtosis_ratio_q",
        "kurtosis_regularized_s",
        "kurtosis_regularized_q",
        "det_sigma",
        "delta",
    ];
    let mut t = Table::new(&cols).note("tau", cfg.tau);
    let states = [
        ("ground", TwoLevelState::ground()),
        ("excited", TwoLevelState::excited()),
        ("mixed", TwoLevelState::Mixed { theta: cfg.theta }),
        ("pure", TwoLevelState::Pure { theta: cfg.theta, phi: cfg.phi }),
    ];
    for l in cfg.lambda_lo..=cfg.lambda_hi {
        let params = PTParams::new(l)?;
        for (name, st) in &states {
            let m = moments(&params, st, cfg.tau, 4)?;
            let k = kurtosis(&m)?;
            let cov = covariance(&m);
            let delta = entropic_nongaussianity(&cov, st)?;
            let m4 = |x: Option<ptphase::infoprofile::Moment>| x.map_or(f64::NAN, |m| m.value);
            t.push(vec![
                Cell::I(l as i64),
                Cell::S((*name).into()),
                m.mean_s.value.into(),
                m.mean_q.value.into(),
                m.var_s().into(),
                m.var_q().into(),
                m4(m.m4_s).into(),
                m4(m.m4_q).into(),
                k.excess_s.into(),
                k.excess_q.into(),
                k.ratio_s.into(),
                k.ratio_q.into(),
                k.regularized_s.into(),
                k.regularized_q.into(),
                cov.det.into(),
                delta.into(),
            ]);
        }
    }
    emit(cfg, None, &t.render(cfg))
}

fn verdict(ok: bool) -> Cell {
    Cell::S(if ok { "separable-consistent" } else { "entangled" }.into())
}

fn bipartite(cfg: &ScenarioConfig) -> Result<()> {
    let cols = [
        "lambda",
        "alpha_s",
        "alpha_q",
        "gamma_s",
        "gamma_q",
        "d_minus",
        "d_plus",
        "d_tilde_minus",
        "d_tilde_plus",
        "det_moments_ppt",
        "det_simon_mod",
        "det_duan",
        "uncertainty",
        "verdict_ppt",
        "verdict_moments",
        "verdict_simon_mod",
        "verdict_duan",
    ];
    let mut t = Table::new(&cols);
    let mut reports = Vec::new();
    for l in cfg.lambda_lo..=cfg.lambda_hi {
        let params = PTParams::new(l)?;
        let c = bipartite_covariance(&params)?;
        let r = separability_report(&params)?;
        t.push(vec![
            Cell::I(l as i64),
            c.alpha_s.into(),
            c.alpha_q.into(),
            c.gamma_s.into(),
            c.gamma_q.into(),
            r.d_minus.into(),
            r.d_plus.into(),
            r.d_tilde_minus.into(),
            r.d_tilde_plus.into(),
            r.det_m_ppt.into(),
            r.det_simon_mod.into(),
            r.det_duan.into(),
            Cell::S(if r.uncertainty_ok { "ok" } else { "violated" }.into()),
            verdict(r.ppt_separable),
            verdict(r.moments_ppt_nonnegative),
            verdict(r.simon_mod_nonnegative),
            verdict(r.duan_nonnegative),
        ]);
        reports.push(json!({ "report": r, "covariance": c, "separable_consistent": r.separable_consistent() }));
    }
    emit(cfg, None, &t.render(cfg))?;
    if let Some(out) = &cfg.out {
        emit(cfg, Some(&derived_path(out, ".report", Some("json"))), &sidecar(cfg, "separability", json!(reports)))?;
    }
    Ok(())
}

struct Check {
    name: &'static str,
    error: f64,
    tolerance: f64,
}

fn max_over<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    it.into_iter().try_fold(0.0_f64, |m, v| Ok(m.max(v?)))
}

/// Closed forms against their independent oracles. Returns false if any check fails.
fn validate(cfg: &ScenarioConfig) -> Result<bool> {
    let pts = [(0.0, 0.0), (0.5, -0.4), (-1.2, 0.9), (2.1, -0.3), (0.6, 1.8)];
    let mut checks = Vec::new();

    let comp = max_over([2u32, 3, 4].iter().flat_map(|&l| {
        pts.iter().flat_map(move |&(s, q)| {
            [(0, 0), (1, 1), (1, 0)].into_iter().map(move |(i, j)| -> Result<f64> {
                let p = PTParams::new(l)?;
                Ok((wigner_component(&p, i, j, s, q)? - wigner_component_oracle(&p, i, j, s, q)?).norm())
            })
        })
    }))?;
    checks.push(Check { name: "wigner_components_vs_quadrature", error: comp, tolerance: 1e-8 });

    let origin = max_over((2u32..=8).map(|l| -> Result<f64> {
        let p = PTParams::new(l)?;
        let pi = std::f64::consts::PI;
        let a = (wigner_component(&p, 0, 0, 0.0, 0.0)?.re - 1.0 / pi).abs();
        let b = (wigner_component(&p, 1, 1, 0.0, 0.0)?.re + 1.0 / pi).abs();
        Ok(a.max(b))
    }))?;
    checks.push(Check { name: "origin_values", error: origin, tolerance: 1e-10 });

    let mom = max_over([2u32, 3, 5, 8].into_iter().map(|l| -> Result<f64> {
        let p = PTParams::new(l)?;
        let e = [
            s2_ground(&p) - component_s_moment(&p, 0, 0, 2)?,
            s2_excited(&p)? - component_s_moment(&p, 1, 1, 2)?,
            q2_ground(&p) - component_q_moment(&p, 0, 0, 2)?.re,
            q2_excited(&p)? - component_q_moment(&p, 1, 1, 2)?.re,
            s_transition(&p)? - component_s_moment(&p, 1, 0, 1)?,
        ];
        Ok(e.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
    }))?;
    checks.push(Check { name: "moments_closed_vs_quadrature", error: mom, tolerance: 1e-6 });

    use ptphase::ClassicalRegime as R;
    let (b_dev, b_drift) = trajectory_deviation(R::Bound { ell: 2.0 }, std::f64::consts::PI, 64)?;
    let (u_dev, u_drift) = trajectory_deviation(R::Unbound { lambda: 1.0 }, 2.0, 64)?;
    checks.push(Check { name: "classical_vs_ode", error: b_dev.max(u_dev), tolerance: 1e-6 });
    checks.push(Check { name: "classical_energy_drift", error: b_drift.max(u_drift), tolerance: 1e-9 });

    let symp = max_over((2u32..=20).map(|l| -> Result<f64> {
        let c = bipartite_covariance(&PTParams::new(l)?)?;
        let sp = symplectic_eigenvalues(&c)?;
        let (a, b) = symplectic_from_invariants(&c)?;
        let (x, y) = symplectic_numeric(&c.matrix())?;
        Ok([a - sp.d_minus, b - sp.d_plus, x - sp.d_minus, y - sp.d_plus].iter().fold(0.0_f64, |m, v| m.max(v.abs())))
    }))?;
    checks.push(Check { name: "symplectic_three_routes", error: symp, tolerance: 1e-9 });

    let p2 = PTParams::new(2)?;
    let exact = build_moments_matrix(&p2, true)?;
    let (quad, _) = quadrature_moments_matrix(&p2, true, &oracle_grid())?;
    let mm = (exact.m - quad.m).iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    checks.push(Check { name: "moments_matrix_vs_4d_quadrature", error: mm, tolerance: 1e-3 });

    let mut t = Table::new(&["check", "max_error", "tolerance", "verdict"]);
    let mut all = true;
    for c in &checks {
        let ok = c.error <= c.tolerance;
        all &= ok;
        t.push(vec![
            Cell::S(c.name.into()),
            c.error.into(),
            c.tolerance.into(),
            Cell::S(if ok { "pass" } else { "fail" }.into()),
        ]);
    }
    emit(cfg, None, &t.render(cfg))?;
    Ok(all)
}
