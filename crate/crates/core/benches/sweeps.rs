use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gammaforge::amalgam::{
    build_stage, enumerate_extensions, schanuel_sweep, Cap, CatalogOptions, Filter,
};
use gammaforge::gamma::{is_strongly_rotund, BasePresentation, GammaPresentation, SweepOptions};
use gammaforge::par::{set_exec, Exec};
use gammaforge::poly::Budget;

const MODES: [(&str, Exec); 2] = [("parallel", Exec::Auto), ("sequential", Exec::Sequential)];

fn rotundity(c: &mut Criterion) {
    let base = Arc::new(BasePresentation::rational());
    let curve = GammaPresentation::parse(
        base.clone(),
        1,
        &["x1 - y1 + 1".to_string()],
        3,
        &Budget::default(),
    )
    .unwrap();
    let amalgam = gammaforge::amalgam::free_amalgam(
        &base,
        &curve,
        &GammaPresentation::generic(base.clone(), 2),
    )
    .unwrap();
    let opts = SweepOptions {
        height: 2,
        skip_freeness: true,
        g2_bound: 4,
        budget: Budget::default(),
    };
    let mut g = c.benchmark_group("strong_rotundity_n3_h2");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |bch| {
            set_exec(mode);
            bch.iter(|| is_strongly_rotund(&amalgam, &opts).unwrap())
        });
    }
    g.finish();
    set_exec(Exec::Auto);
}

fn stage_sweep(c: &mut Criterion) {
    let base = Arc::new(BasePresentation::rational());
    let opts = CatalogOptions::default();
    let stage = build_stage(&base, 1, &opts).unwrap();
    let mut g = c.benchmark_group("schanuel_stage1_h2");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |bch| {
            set_exec(mode);
            bch.iter(|| schanuel_sweep(&stage.current, 2, &opts.budget).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("catalog_k1");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |bch| {
            set_exec(mode);
            bch.iter(|| enumerate_extensions(&base, Cap::uniform(1), Filter::All, &opts).unwrap())
        });
    }
    g.finish();
    set_exec(Exec::Auto);
}

criterion_group!(benches, rotundity, stage_sweep);
criterion_main!(benches);
