use std::hint::black_box;

use conicray::convergence::{run_sweep, SweepConfig};
use conicray::optics::intersect_ray;
use conicray::{exact_return, two_step, Orientation};
use conicray_bench::{cassegrain, ellipse, focal_fan, hyperbola, parabola, query_points};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("construction");
    for (name, conic) in [("ellipse", ellipse()), ("parabola", parabola()), ("hyperbola", hyperbola())] {
        let a = conic.point_at(0.7);
        group.bench_function(BenchmarkId::new("two_step", name), |b| {
            b.iter(|| two_step(black_box(&conic), black_box(a), 0.01, Orientation::Forward))
        });
        group.bench_function(BenchmarkId::new("exact_return", name), |b| {
            b.iter(|| exact_return(black_box(&conic), black_box(a), 0.01, Orientation::Forward))
        });
    }
    group.finish();
}

fn optics(c: &mut Criterion) {
    let e = ellipse();
    let rays = focal_fan(256);
    c.bench_function("intersect_ray/ellipse_fan_256", |b| {
        b.iter(|| rays.iter().map(|r| intersect_ray(&e, black_box(r)).len()).sum::<usize>())
    });
    let scene = cassegrain();
    c.bench_function("cassegrain_spot/100", |b| b.iter(|| scene.cassegrain_spot(black_box(100), 1.0)));
}

fn projection(c: &mut Criterion) {
    let points = query_points(64);
    let mut group = c.benchmark_group("project_to_curve");
    for (name, conic) in [("ellipse", ellipse()), ("parabola", parabola()), ("hyperbola", hyperbola())] {
        group.bench_function(name, |b| {
            b.iter(|| points.iter().map(|&q| conic.project_to_curve(black_box(q))).filter(Result::is_ok).count())
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let e = ellipse();
    let cfg = SweepConfig::new(e, e.point_at(1.0), 0.1, 6);
    c.bench_function("run_sweep/ellipse_6", |b| b.iter(|| run_sweep(black_box(&cfg))));
}

criterion_group!(benches, construction, optics, projection, sweep);
criterion_main!(benches);
