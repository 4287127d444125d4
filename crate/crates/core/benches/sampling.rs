use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use heightdyn::builtins::{self, Builtin};
use heightdyn::dynamics::{estimate_mu, kawaguchi_experiment, MuConfig};
use heightdyn::Exec;

fn mu_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimate_mu");
    group.sample_size(10);
    for b in [Builtin::PowerD2, Builtin::InversionN3] {
        let phi = b.map();
        let exclude = b.exclusion();
        for exec in [Exec::Sequential, Exec::Parallel] {
            let config = MuConfig {
                tiers: vec![1_000, 1_000_000],
                samples_per_tier: 500,
                exec,
                ..MuConfig::default()
            };
            group.bench_with_input(BenchmarkId::new(b.name(), format!("{exec:?}")), &config, |bch, cfg| {
                bch.iter(|| estimate_mu(&phi, &exclude, cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn kawaguchi(c: &mut Criterion) {
    let a = builtins::henon(1).unwrap();
    let mut group = c.benchmark_group("kawaguchi_experiment");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        group.bench_function(format!("{exec:?}"), |bch| {
            bch.iter(|| kawaguchi_experiment(&a, 10_000, 1000, 0, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, mu_sampling, kawaguchi);
criterion_main!(benches);
