#include <benchmark/benchmark.h>

#include <random>

#include "tkrylov/bench/generators.hpp"
#include "tkrylov/recursions.hpp"
#include "tkrylov/subspace.hpp"
#include "tkrylov/tensor_ops.hpp"
#include "tkrylov/tucker.hpp"

using namespace tkrylov;

namespace {

DenseTensor3 dense_cube(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    DenseTensor3 A(n, n, n);
    for (double& x : A.data()) x = normal(rng);
    return A;
}

void BM_tvv_dense(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const DenseTensor3 A = dense_cube(n, 1);
    std::mt19937_64 rng(2);
    const Eigen::VectorXd u = random_unit_vector(n, rng);
    const Eigen::VectorXd v = random_unit_vector(n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(tvv(A, Mode::one, Mode::two, u, v));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n) * n * n);
}
BENCHMARK(BM_tvv_dense)->Arg(32)->Arg(64)->Arg(128);

void BM_tvv_sparse(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SparseTensor3 A = bench::gen_sparse({n, n, n}, state.range(1), 3);
    std::mt19937_64 rng(4);
    const Eigen::VectorXd u = random_unit_vector(n, rng);
    const Eigen::VectorXd v = random_unit_vector(n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(tvv(A, Mode::one, Mode::two, u, v));
    state.SetItemsProcessed(state.iterations() * A.nnz());
}
BENCHMARK(BM_tvv_sparse)->Args({256, 50000})->Args({512, 100000});

void BM_gram_matvec_sparse(benchmark::State& state) {
    const int n = 400;
    const SparseTensor3 A = bench::gen_sparse({n, n, n}, 80000, 5);
    std::mt19937_64 rng(6);
    const Eigen::VectorXd u = random_unit_vector(n, rng);
    const Mode mode = mode_from_index(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(gram_matvec(A, mode, u));
    state.SetItemsProcessed(state.iterations() * A.nnz());
}
BENCHMARK(BM_gram_matvec_sparse)->Arg(1)->Arg(2)->Arg(3);

void BM_minimal_recursion_sparse(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const SparseTensor3 A = bench::gen_sparse({300, 300, 300}, 50000, 7);
    const StartVectors start = StartVectors::random(A.dims(), 8);
    for (auto _ : state) benchmark::DoNotOptimize(minimal_recursion(A, start, k));
}
BENCHMARK(BM_minimal_recursion_sparse)->Arg(10)->Arg(25)->Arg(50);

void BM_hosvd_direct(benchmark::State& state) {
    const auto t = bench::gen_low_rank({120, 140, 100}, {10, 10, 10}, 9);
    for (auto _ : state) benchmark::DoNotOptimize(truncated_hosvd(t.tensor, {10, 10, 10}));
}
BENCHMARK(BM_hosvd_direct)->Unit(benchmark::kMillisecond);

void BM_hosvd_via_krylov(benchmark::State& state) {
    const auto t = bench::gen_low_rank({120, 140, 100}, {10, 10, 10}, 9);
    for (auto _ : state) benchmark::DoNotOptimize(hosvd_via_krylov(t.tensor, {10, 10, 10}));
}
BENCHMARK(BM_hosvd_via_krylov)->Unit(benchmark::kMillisecond);

void BM_best_rank111(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const DenseTensor3 C = dense_cube(n, 10);
    for (auto _ : state) benchmark::DoNotOptimize(best_rank111(C));
}
BENCHMARK(BM_best_rank111)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
