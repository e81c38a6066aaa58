use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use outsplit_core::generators::{random_k_partite_tournament, rotational_tournament, stream_rng};
use outsplit_core::lll::moser_tardos_split;
use outsplit_core::pairing::{count_bad_with, random_pairing, sample_coins};
use outsplit_core::peeling::{minimal_core, uniform_threshold};
use outsplit_core::probability::{binomial_tail, expected_bad_exact};
use outsplit_core::{Epsilon, Threshold};
use std::hint::black_box;

fn tails(c: &mut Criterion) {
    c.bench_function("binomial_tail(500, 199)", |b| {
        b.iter(|| binomial_tail(black_box(500), black_box(199)))
    });
    let g = rotational_tournament(201).unwrap();
    let pairing = random_pairing(201, 1);
    let th = Threshold::Relative(Epsilon::new(0.2).unwrap());
    c.bench_function("expected_bad_exact rotational 201", |b| {
        b.iter(|| expected_bad_exact(&g, &pairing, &th))
    });
}

fn sampling(c: &mut Criterion) {
    let g = rotational_tournament(1001).unwrap();
    let thresholds = Threshold::Relative(Epsilon::new(0.2).unwrap()).for_digraph(&g);
    let pairing = random_pairing(1001, 3);
    let mut rng = stream_rng(3, 1);
    c.bench_function("sample + count bad, rotational 1001", |b| {
        b.iter(|| {
            let bip = pairing.split(&sample_coins(&pairing, &mut rng));
            count_bad_with(&g, &bip, &thresholds)
        })
    });
    let small = rotational_tournament(301).unwrap();
    let th = Threshold::Relative(Epsilon::new(0.3).unwrap());
    let mut seed = 0;
    c.bench_function("moser-tardos rotational 301 eps 0.3", |b| {
        b.iter_batched(
            || {
                seed += 1;
                seed
            },
            |s| moser_tardos_split(&small, &th, s, 1_000_000),
            BatchSize::SmallInput,
        )
    });
}

fn peeling(c: &mut Criterion) {
    let g = random_k_partite_tournament(&[200, 200], 7).unwrap();
    let theta = uniform_threshold(&g, 2);
    let all: Vec<usize> = (0..g.n()).collect();
    c.bench_function("minimal_core bipartite 200+200, s=2", |b| {
        b.iter(|| minimal_core(&g, &all, &theta).unwrap())
    });
}

criterion_group!(benches, tails, sampling, peeling);
criterion_main!(benches);
