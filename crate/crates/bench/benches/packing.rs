use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use treepack::constructive::{ConstructiveOptions, PreparedHost};
use treepack::degree::compute_b_sets;
use treepack::graph::{complete_graph, mycielski, random_min_degree};
use treepack::tree::all_families;
use treepack::{pack_exhaustive, SearchOptions};
use treepack_bench::tractable_families;

fn constructive(c: &mut Criterion) {
    let opts = ConstructiveOptions::default();
    for (name, g, k) in [("K7", complete_graph(7), 7), ("M5", mycielski(5), 5)] {
        let host = PreparedHost::new(&g, k, &opts).unwrap();
        let families = tractable_families(k);
        c.bench_function(&format!("constructive {name} all families"), |b| {
            b.iter(|| {
                for f in &families {
                    black_box(host.pack(f, &opts).unwrap());
                }
            })
        });
    }
}

fn search(c: &mut Criterion) {
    let g = complete_graph(7);
    let families: Vec<_> = all_families(7)
        .unwrap()
        .into_iter()
        .map(|(_, f)| f)
        .collect();
    let opts = SearchOptions::default();
    c.bench_function("search K7 all 396 families", |b| {
        b.iter(|| {
            for f in &families {
                black_box(pack_exhaustive(&g, f, &opts));
            }
        })
    });
}

fn b_sets(c: &mut Criterion) {
    let g = random_min_degree(400, 5, &mut ChaCha8Rng::seed_from_u64(1));
    c.bench_function("b-sets n=400 k=6", |b| {
        b.iter(|| black_box(compute_b_sets(&g, 6)))
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = constructive, search, b_sets
}
criterion_main!(benches);
