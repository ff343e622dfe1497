//! Pipeline benchmarks: chain-complex assembly and exact homology, run once
//! with the default `parallel` feature and once with
//! `--no-default-features` for the sequential fallback. Benchmark IDs carry
//! the active mode, so both runs land side by side in the criterion report:
//!
//! ```text
//! cargo bench -p bredon
//! cargo bench -p bredon --no-default-features
//! ```

use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use bredon::coeff::builtin_mackey;
use bredon::group::Group;
use bredon::homology::{chain_complex, reduced_homology};
use bredon::orbit::OrbitCategory;
use bredon::ring::Ring;
use bredon::simplicial::{builtin_space, wedge, SimplicialGSet};

const MODE: &str = if cfg!(feature = "parallel") { "parallel" } else { "sequential" };

/// A wedge of `count` copies of the antipodal 2-sphere: three nonzero chain
/// degrees whose Smith normal forms dominate the runtime.
fn sphere_bouquet(count: usize) -> Arc<SimplicialGSet> {
    let group = Arc::new(Group::cyclic(2));
    let sphere = Arc::new(builtin_space("sphere2_antipodal", &group).expect("builtin"));
    let mut out = sphere.clone();
    for _ in 1..count {
        out = wedge(&out, &sphere).expect("wedge").0;
    }
    out
}

fn pipeline(c: &mut Criterion) {
    let group = Arc::new(Group::cyclic(2));
    let orbit = Arc::new(OrbitCategory::new(group.clone()));
    let m = builtin_mackey("linearization", orbit, Ring::Integers).expect("builtin");
    let sphere = builtin_space("sphere2_antipodal", &group).expect("builtin");
    let bouquet = sphere_bouquet(8);

    let mut g = c.benchmark_group("chain_complex");
    g.bench_function(BenchmarkId::new("sphere_bouquet", MODE), |b| {
        b.iter(|| chain_complex(black_box(&bouquet), m.covariant()).expect("complex"))
    });
    g.finish();

    let mut g = c.benchmark_group("homology");
    g.bench_function(BenchmarkId::new("sphere", MODE), |b| {
        b.iter(|| reduced_homology(black_box(&sphere), m.covariant()).expect("homology"))
    });
    g.sample_size(20);
    g.bench_function(BenchmarkId::new("sphere_bouquet", MODE), |b| {
        b.iter(|| reduced_homology(black_box(&bouquet), m.covariant()).expect("homology"))
    });
    g.finish();
}

criterion_group!(benches, pipeline);
criterion_main!(benches);
