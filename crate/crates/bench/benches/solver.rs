use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use noflow::grid::{Boundary, Grid};
use noflow::limiters::LimiterKind;
use noflow::models::{kk_initial_state, kk_radial_slopes, kk_step_with_slopes, Burgers, FluxModel, LwrNonlocal};
use noflow::scheme::{noflow_slopes, nsle_step_with_slopes, reconstruct_edges, select_dt, SchemeConfig};
use noflow_bench::sine_field;
use std::hint::black_box;

fn bench_reconstruction(c: &mut Criterion) {
    let mut group = c.benchmark_group("reconstruct_edges");
    for n in [1024usize, 16384] {
        let u = sine_field(n);
        group.throughput(Throughput::Elements(n as u64));
        for (name, limiter) in [
            ("mm2", LimiterKind::MinMod2),
            ("mm3", LimiterKind::minmod3_default()),
            ("uno", LimiterKind::Uno),
        ] {
            group.bench_with_input(BenchmarkId::new(name, n), &u, |b, u| {
                b.iter(|| reconstruct_edges(black_box(u), limiter))
            });
        }
    }
    group.finish();
}

fn bench_burgers_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("nsle_step/burgers");
    for n in [1024usize, 8192, 65536] {
        let u = sine_field(n);
        let cfg = SchemeConfig::default();
        let f = noflow_slopes(&u, &Burgers, cfg.limiter, 0.0).unwrap();
        let dt = select_dt(&f, u.grid().h(), &cfg, 0.0, None);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &u, |b, u| {
            b.iter(|| {
                let f = noflow_slopes(black_box(u), &Burgers, cfg.limiter, 0.0).unwrap();
                nsle_step_with_slopes(u, &f, 0.0, dt).unwrap()
            })
        });
    }
    group.finish();
}

fn bench_kk_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("kk_step");
    group.sample_size(20);
    for n in [4096usize, 65536] {
        let grid = Grid::new(-1.0, 1.0, n, Boundary::Periodic);
        let state = kk_initial_state(grid);
        let cfg = SchemeConfig::default();
        let f = kk_radial_slopes(&state, &cfg).unwrap();
        let dt = select_dt(&f, grid.h(), &cfg, 0.0, None);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &state, |b, state| {
            b.iter(|| {
                let f = kk_radial_slopes(black_box(state), &cfg).unwrap();
                kk_step_with_slopes(state, &f, 0.0, dt).unwrap()
            })
        });
    }
    group.finish();
}

fn bench_lwr_convolution(c: &mut Criterion) {
    let mut group = c.benchmark_group("lwr_pre_step");
    group.sample_size(30);
    for n in [2048usize, 8192] {
        let grid = Grid::new(-5.0, 5.0, n, Boundary::ConstantExtension);
        let mut model = LwrNonlocal::new(0.25, 0.0, 1.0, grid).unwrap();
        let rho = noflow::grid::CellField::from_fn(grid, |x| 0.5 + 0.4 * (x * 0.9).sin().abs());
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &rho, |b, rho| {
            b.iter(|| model.pre_step(black_box(rho), 0.0))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_reconstruction, bench_burgers_step, bench_kk_step, bench_lwr_convolution);
criterion_main!(benches);
