use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use ikep_core::enumeration::{CycleCatalog, CycleKind};
use ikep_core::generator::{gen_instance, GenConfig};
use ikep_core::mechanisms::{mech_nat, mech_order_distribution, Order, OrderMechanism, OrderMode};
use ikep_core::simharness::{run_experiment, CorpusEntry, ExperimentConfig, MechKind};
use ikep_core::verification::check_ic;
use ikep_core::{Bound, Config, Execution, GammaParams, Instance};

fn modes() -> [(&'static str, Config); 2] {
    [
        ("parallel", Config::default().with_execution(Execution::Parallel)),
        ("sequential", Config::default().with_execution(Execution::Sequential)),
    ]
}

fn instance(sizes: Vec<usize>, p_nat: f64, p_int: f64, icl: u32, seed: u64) -> Instance {
    let n = sizes.len();
    gen_instance(&GenConfig {
        country_sizes: sizes,
        arc_probability_national: p_nat,
        arc_probability_international: p_int,
        gamma: GammaParams::uniform(n, Bound::Finite(icl), Bound::Finite(3), Bound::Finite(2), Bound::Finite(2)).unwrap(),
        seed,
    })
    .unwrap()
}

/// Seeded instance whose international pool after the national stage has
/// exactly `size` cycles.
fn instance_with_pool(size: usize) -> Instance {
    (0..)
        .map(|seed| instance(vec![4, 4, 4], 0.15, 0.2, 4, seed))
        .find(|inst| {
            let cfg = Config::default();
            let nat = mech_nat(inst, &cfg).unwrap();
            let mut rest = inst.all_vertices();
            rest.difference_with(&nat.covered(inst.vertex_count()));
            CycleCatalog::build_on(inst, &rest, &cfg).unwrap().international_all.len() == size
        })
        .unwrap()
}

fn enumeration(c: &mut Criterion) {
    let inst = instance(vec![20, 20, 20], 0.08, 0.06, 5, 1);
    let mut group = c.benchmark_group("enumerate_cycles");
    for (name, cfg) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                ikep_core::enumeration::enumerate_cycles(
                    black_box(&inst),
                    &inst.all_vertices(),
                    5,
                    CycleKind::Any,
                    &cfg,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn exact_order(c: &mut Criterion) {
    let inst = instance_with_pool(12);
    let mut group = c.benchmark_group("order_exact_distribution");
    group.sample_size(20);
    for (name, cfg) in modes() {
        let cfg = Config { max_permutations: u64::MAX, ..cfg };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| mech_order_distribution(black_box(&inst), OrderMode::Exact, &cfg).unwrap())
        });
    }
    group.finish();
}

fn ic_check(c: &mut Criterion) {
    let inst = instance_with_pool(9);
    let mech = Order(OrderMechanism::default());
    let mut group = c.benchmark_group("check_ic");
    group.sample_size(20);
    for (name, cfg) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| check_ic(&mech, black_box(&inst), &cfg).unwrap())
        });
    }
    group.finish();
}

fn corpus(c: &mut Criterion) {
    let base = GenConfig {
        country_sizes: vec![8, 8, 8],
        arc_probability_national: 0.15,
        arc_probability_international: 0.08,
        gamma: GammaParams::uniform(3, Bound::Finite(4), Bound::Finite(3), Bound::Finite(2), Bound::Finite(1)).unwrap(),
        seed: 100,
    };
    let exp = ExperimentConfig {
        corpus: vec![CorpusEntry::Batch { count: 30, base }],
        mechanisms: MechKind::ALL.to_vec(),
        order_runs_per_instance: 5,
        sweep: None,
        output_path: None,
        seed: 0,
    };
    let mut group = c.benchmark_group("experiment_30x24");
    group.sample_size(10);
    for (name, cfg) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| run_experiment(&exp, &cfg).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, enumeration, exact_order, ic_check, corpus);
criterion_main!(benches);
