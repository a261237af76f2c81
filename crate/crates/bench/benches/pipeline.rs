use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use twistorlab_bench::{base_point, chart_point, spec};
use twistorlab_core::chern::chern_data;
use twistorlab_core::dsl::eval_jet2;
use twistorlab_core::lambda2::blocks_from_frame_curvature;
use twistorlab_core::oracle::{compare_dk, section_frame, verify_structure_equations};
use twistorlab_core::twistor::twistor_defects;
use twistorlab_core::{analyze_point, OracleOptions, Sign};

fn point_pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("point");
    for name in ["sphere4", "cp2_fs", "perturbed_flat"] {
        let spec = spec(name);
        let x = base_point(&spec);
        group.bench_function(format!("jets/{name}"), |b| b.iter(|| eval_jet2(black_box(&spec), black_box(&x))));
        group.bench_function(format!("analyze/{name}"), |b| {
            b.iter(|| {
                let geo = analyze_point(black_box(&spec), x).unwrap();
                let blocks = blocks_from_frame_curvature(&geo.curvature).unwrap();
                (twistor_defects(&blocks, 1.0), chern_data(&blocks, &geo.curvature))
            })
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(20);
    let spec = spec("cp2_fs");
    let p = chart_point(&spec);
    let opts = OracleOptions::default();
    group.bench_function("section_frame", |b| b.iter(|| section_frame(black_box(&spec), p, 1.0, opts)));
    group.bench_function("compare_dk", |b| b.iter(|| compare_dk(&spec, black_box(p), 1.0, Sign::Plus, 1e-3, opts)));
    group.bench_function("structure_equations", |b| {
        b.iter(|| verify_structure_equations(&spec, black_box(p), 1.0, 1e-3, opts))
    });
    group.finish();
}

criterion_group!(benches, point_pipeline, oracle);
criterion_main!(benches);
