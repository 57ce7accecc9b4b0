use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use covermech::decomposition::{rdim_mechanism, DecompositionOptions};
use covermech::instance::generate::{generate_random_vc_instance, generate_ring_ufl};
use covermech::instance::VcInstance;
use covermech::par::Exec;
use covermech::threshold::{ax_mechanism, run_threshold_mechanism, ScalingVector};
use covermech::ufl::{run_ufl_mechanism, UflOptions};
use covermech::verify::{allocation_of_result, wmon_check};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Exec); 2] = [
    ("parallel", Exec::Parallel),
    ("sequential", Exec::Sequential),
];

fn decomposition(c: &mut Criterion) {
    let inst = generate_random_vc_instance(32, 0.2, 3, 1).unwrap();
    let mut group = c.benchmark_group("rdim_n32_r3");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = DecompositionOptions {
            exec,
            ..Default::default()
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| rdim_mechanism(&inst, 7, opts).unwrap())
        });
    }
    group.finish();
}

fn ufl(c: &mut Criterion) {
    let inst = generate_ring_ufl(7, 4, 3).unwrap();
    let mut group = c.benchmark_group("ufl_ring7_agents4");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = UflOptions {
            exec,
            ..Default::default()
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_ufl_mechanism(&inst, 1, opts).unwrap())
        });
    }
    group.finish();
}

fn sample(rng: &mut ChaCha8Rng) -> VcInstance {
    generate_random_vc_instance(10, 0.4, 2, rng.gen()).unwrap()
}

fn wmon(c: &mut Criterion) {
    let alg = |inst: &VcInstance| {
        let r = run_threshold_mechanism(
            &ax_mechanism(inst.graph(), &ScalingVector::ones(inst.graph().n())),
            inst,
        )?;
        Ok(allocation_of_result(&r, inst.ownership().agent_count()))
    };
    let mut group = c.benchmark_group("wmon_2000_probes");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| wmon_check(&alg, &sample, 2000, 5, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, decomposition, ufl, wmon);
criterion_main!(benches);
