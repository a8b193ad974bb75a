use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use grand_core::channel::{compute_llrs, transmit, ChannelParams};
use grand_core::code::by_name;
use grand_core::decoder::{decode, DecoderConfig};
use grand_core::sim::{random_message, run_point, trial_rng, StoppingRule};

fn decode_benches(c: &mut Criterion) {
    let code = by_name("ebch-32-21").unwrap();
    let params = ChannelParams::new(code.rate(), 4.0);
    let mut group = c.benchmark_group("decode_ebch_32_21_4db");
    for (name, cfg) in [
        ("orbgrand", DecoderConfig::orbgrand()),
        ("sygrand_0.71_3", DecoderConfig::sygrand(0.71, 3)),
        ("ordept_50_3", DecoderConfig::ordept(50, 3)),
    ] {
        group.bench_function(name, |b| {
            let mut trial = 0u64;
            b.iter_batched(
                || {
                    trial += 1;
                    let mut rng = trial_rng(0xbe5eed, 0, trial, 0);
                    let msg = random_message(code.k(), &mut rng);
                    let sent = code.encode(&msg);
                    compute_llrs(&transmit(&sent, &params, &mut rng), &params)
                },
                |llr| black_box(decode(&code, &llr, &cfg)),
                BatchSize::SmallInput,
            );
        });
    }
    group.finish();
}

/// Sequential vs data-parallel execution of the same deterministic point.
fn run_point_benches(c: &mut Criterion) {
    let code = by_name("ebch-32-21").unwrap();
    let stop = StoppingRule::fixed_trials(2_000);
    let cfg = DecoderConfig::sygrand(0.71, 3);
    let mut group = c.benchmark_group("run_point_ebch_32_21_4db_2000_trials");
    group.sample_size(10);
    group.bench_function("workers_1", |b| {
        b.iter(|| black_box(run_point(&code, &cfg, 4.0, &stop, 1, 0, 0, 1)));
    });
    let workers = std::thread::available_parallelism().map_or(2, |n| n.get());
    group.bench_function(format!("workers_{workers}"), |b| {
        b.iter(|| black_box(run_point(&code, &cfg, 4.0, &stop, 1, 0, 0, workers)));
    });
    group.finish();
}

criterion_group!(benches, decode_benches, run_point_benches);
criterion_main!(benches);
