use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mmpfloer::ainfty::verify_ainfty;
use mmpfloer::mmp::{polygon_transition_times, run_mmp, Geometry};
use mmpfloer::novikov::matrix;
use mmpfloer::polytope::shapes;
use mmpfloer::potential::{critical_points_leading, newton_lift};
use mmpfloer::rational::qi;
use mmpfloer_bench::*;

fn novikov(c: &mut Criterion) {
    let a = dense_unit(8, 4);
    let b = dense_unit(6, 4);
    c.bench_function("series_mul_dense", |x| x.iter(|| black_box(&a).mul(black_box(&b)).unwrap()));
    c.bench_function("series_invert_unit", |x| x.iter(|| black_box(&a).invert_unit().unwrap()));
    let m: Vec<Vec<_>> = (0..5).map(|i| (0..5).map(|j| dense_unit(2 + ((i + j) % 3) as i64, 2)).collect()).collect();
    c.bench_function("det_5x5_exact", |x| x.iter(|| matrix::det(black_box(&m)).unwrap()));
}

fn polytopes(c: &mut Criterion) {
    let p = octagon();
    c.bench_function("octagon_running", |x| x.iter(|| run_mmp(&Geometry::Toric(black_box(p.clone()))).unwrap()));
    c.bench_function("flip_4d_vertices", |x| x.iter(shapes::flip_4d));
    let lengths: Vec<_> = [10, 10, 12, 13, 14, 15, 16].iter().map(|&l| qi(l)).collect();
    c.bench_function("heptagon_times", |x| x.iter(|| polygon_transition_times(black_box(&lengths)).unwrap()));
}

fn potentials(c: &mut Criterion) {
    let w = exceptional(5, 2);
    c.bench_function("exceptional_5_2_roots", |x| x.iter(|| critical_points_leading(black_box(&w)).unwrap()));
    let w = perturbed_square(4);
    let seeds = critical_points_leading(&w.leading_part().unwrap()).unwrap();
    c.bench_function("newton_lift_square_e4", |x| x.iter(|| newton_lift(black_box(&w), &seeds[0], qi(4)).unwrap()));
}

fn ainfty(c: &mut Criterion) {
    let a = exterior_algebra(3);
    c.bench_function("verify_exterior_3", |x| x.iter(|| verify_ainfty(black_box(&a))));
}

criterion_group!(kernels, novikov, polytopes, potentials, ainfty);
criterion_main!(kernels);
