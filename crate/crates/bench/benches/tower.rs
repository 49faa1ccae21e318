use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use slicetower::homology::bredon_homology;
use slicetower::tower::{tower, verify_tower};
use slicetower_bench::{group, verifier_sphere, TOWER_CASES, VERIFY_CASES};

fn generation(c: &mut Criterion) {
    let mut g = c.benchmark_group("tower");
    for &(p, k, n) in TOWER_CASES {
        let grp = group(p, k);
        g.bench_with_input(BenchmarkId::from_parameter(format!("C{p}^{k}/n={n}")), &n, |b, &n| {
            b.iter(|| tower(black_box(n), &grp).unwrap())
        });
    }
    g.finish();
}

fn verification(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_tower");
    g.sample_size(10);
    for &(p, k, n) in VERIFY_CASES {
        let t = tower(n, &group(p, k)).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(format!("C{p}^{k}/n={n}")), &t, |b, t| {
            b.iter(|| verify_tower(black_box(t)).unwrap())
        });
    }
    g.finish();
}

fn homology(c: &mut Criterion) {
    let mut g = c.benchmark_group("bredon_homology");
    for (p, k, n, t) in [(3, 1, 2, 2), (3, 2, 4, 1), (5, 2, 10, 2)] {
        let grp = group(p, k);
        let (v, m) = verifier_sphere(&grp, n, t);
        let diff = v.split();
        g.bench_function(format!("C{p}^{k}/S^({v})"), |b| b.iter(|| bredon_homology(black_box(&diff), &m, -1).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, generation, verification, homology);
criterion_main!(benches);
