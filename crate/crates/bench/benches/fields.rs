use criterion::{criterion_group, criterion_main, Criterion};

use ptphase::bipartite::{oracle_grid, quadrature_moments_matrix, separability_report};
use ptphase::flow::{find_stagnation_points, flow_field};
use ptphase::infoprofile::{kurtosis, moments};
use ptphase::wigner::sample_field;
use ptphase::{Grid, PTParams, TwoLevelState};

fn fields(c: &mut Criterion) {
    let p = PTParams::new(2).unwrap();
    let st = TwoLevelState::Pure { theta: std::f64::consts::FRAC_PI_6, phi: 0.0 };
    let grid = Grid::symmetric(3.0, 101, 3.0, 101).unwrap();
    c.bench_function("wigner field 101x101", |b| b.iter(|| sample_field(&p, &st, 0.0, &grid).unwrap()));
    c.bench_function("flow field 101x101 K=3", |b| b.iter(|| flow_field(&p, &st, 0.0, 3, &grid).unwrap()));
    let f = flow_field(&p, &st, 0.0, 3, &grid).unwrap();
    c.bench_function("stagnation points 101x101", |b| b.iter(|| find_stagnation_points(&f).unwrap()));
}

fn sweeps(c: &mut Criterion) {
    let mut g = c.benchmark_group("sweeps");
    g.sample_size(10);
    g.bench_function("kurtosis lambda 50", |b| {
        let p = PTParams::new(50).unwrap();
        b.iter(|| kurtosis(&moments(&p, &TwoLevelState::excited(), 0.0, 4).unwrap()).unwrap())
    });
    g.bench_function("separability lambda 2..20", |b| {
        b.iter(|| (2..=20).map(|l| separability_report(&PTParams::new(l).unwrap()).unwrap().det_m_ppt).sum::<f64>())
    });
    g.bench_function("4-D moments quadrature", |b| {
        let p = PTParams::new(2).unwrap();
        let grid = oracle_grid();
        b.iter(|| quadrature_moments_matrix(&p, true, &grid).unwrap())
    });
    g.finish();
}

criterion_group!(benches, fields, sweeps);
criterion_main!(benches);
