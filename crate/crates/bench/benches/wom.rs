use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use womgeo::geo_wom::{EgCode, Pg22Code};
use womgeo::multilevel::{LiftedCode, Scheme, Strategy};
use womgeo::simulate::{monte_carlo, SimConfig};
use womgeo::wom::{encode_sequence, rivest_shamir};

fn bench_encode(c: &mut Criterion) {
    let pg = Pg22Code::new();
    c.bench_function("pg22 four-write encode", |b| {
        b.iter(|| encode_sequence(&pg, &[0, 1, 2, 3]).unwrap())
    });
    let eg4 = EgCode::new(4).unwrap();
    c.bench_function("eg4 eight-write encode", |b| {
        b.iter(|| encode_sequence(&eg4, &[0, 5, 9, 2, 8, 12, 14, 11]).unwrap())
    });
}

fn bench_strategies(c: &mut Criterion) {
    let code = LiftedCode::new(Arc::new(rivest_shamir()), 6).unwrap();
    let msgs: Vec<usize> = (0..10).map(|i| 1 + i % 3).collect();
    c.bench_function("rs strategy-b q6 sequence", |b| {
        b.iter(|| code.encode_sequence(Scheme::Strategy(Strategy::B), &msgs).unwrap())
    });
}

fn bench_monte_carlo(c: &mut Criterion) {
    let config = SimConfig {
        scheme: Scheme::Strategy(Strategy::B),
        q: 4,
        trials: 1_000,
        seed: 7,
        parallel: false,
    };
    c.bench_function("rs monte-carlo 1k trials", |b| {
        b.iter(|| monte_carlo(Arc::new(rivest_shamir()), &config).unwrap())
    });
}

criterion_group!(benches, bench_encode, bench_strategies, bench_monte_carlo);
criterion_main!(benches);
