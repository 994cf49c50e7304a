//! Parallel vs sequential throughput on batches of Riemann problems and on
//! profile sampling.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swe_riemann_core::{
    sample_profile, solve, solve_many, solve_many_seq, GravityContext, InterfaceSide,
    ProfileRequest, RiemannProblem, SolverOptions, State,
};

fn random_problems(n: usize, seed: u64) -> Vec<RiemannProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            RiemannProblem::new(
                State::new(rng.gen_range(0.1..5.0), rng.gen_range(-5.0..5.0), 0.0),
                State::new(
                    rng.gen_range(0.1..5.0),
                    rng.gen_range(-5.0..5.0),
                    rng.gen_range(0.0..1.0),
                ),
            )
        })
        .collect()
}

fn bench_batch_solve(c: &mut Criterion) {
    let ctx = GravityContext::default();
    let opts = SolverOptions { scan_grid: 128 };
    let mut group = c.benchmark_group("batch_solve");
    for &n in &[64usize, 256] {
        let problems = random_problems(n, 7);
        group.bench_with_input(BenchmarkId::new("parallel", n), &problems, |b, p| {
            b.iter(|| solve_many(p, &ctx, &opts))
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &problems, |b, p| {
            b.iter(|| solve_many_seq(p, &ctx, &opts))
        });
    }
    group.finish();
}

fn bench_profile(c: &mut Criterion) {
    let ctx = GravityContext::default();
    let opts = SolverOptions::default();
    let dam = RiemannProblem::new(State::new(2.0, 0.0, 0.0), State::new(1.0, 0.0, 0.0));
    let sol = solve(&dam, &ctx, &opts).unwrap().solutions.remove(0);
    let req = ProfileRequest {
        x_min: -10.0,
        x_max: 10.0,
        t: 1.0,
        n: 100_000,
        side_at_zero: InterfaceSide::Right,
    };
    c.bench_function("profile_100k_rows", |b| {
        b.iter(|| sample_profile(&sol, &req, &ctx).unwrap())
    });
}

criterion_group!(benches, bench_batch_solve, bench_profile);
criterion_main!(benches);
