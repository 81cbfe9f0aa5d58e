#include <random>

#include <Eigen/QR>
#include <benchmark/benchmark.h>

#include "ttsl/npe.hpp"
#include "ttsl/pca.hpp"
#include "ttsl/stiefel.hpp"
#include "ttsl/tensor.hpp"

using namespace ttsl;

namespace {

std::mt19937_64 g_rng(12345);

Matrix random_matrix(Index rows, Index cols) {
    std::normal_distribution<double> dist;
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = dist(g_rng);
    return m;
}

Matrix random_orthonormal(Index rows, Index cols) {
    return Eigen::HouseholderQR<Matrix>(random_matrix(rows, cols)).householderQ() *
           Matrix::Identity(rows, cols);
}

DenseTensor random_core(Index r_prev, Index mid, Index r_next) {
    DenseTensor t({r_prev, mid, r_next});
    std::normal_distribution<double> dist;
    for (Index i = 0; i < t.size(); ++i) t.data()[i] = dist(g_rng);
    return t;
}

void bm_connect_product(benchmark::State& state) {
    const Index r = state.range(0);
    const DenseTensor u = random_core(1, 16, r);
    const DenseTensor v = random_core(r, 16, r);
    const DenseTensor w = random_core(r, 16, r);
    for (auto _ : state) {
        benchmark::DoNotOptimize(connect_product({u, v, w}));
    }
}
BENCHMARK(bm_connect_product)->Arg(2)->Arg(4)->Arg(8);

void bm_ttpca_fit(benchmark::State& state) {
    const Index n_samples = state.range(0);
    const Matrix d = random_matrix(256, n_samples);
    TTPCAConfig cfg;
    cfg.ranks = std::vector<Index>{4, 4, 4, 4};
    for (auto _ : state) {
        benchmark::DoNotOptimize(ttpca_fit(d, {4, 4, 4, 4}, cfg));
    }
}
BENCHMARK(bm_ttpca_fit)->Arg(100)->Arg(400);

void bm_stiefel_minimize(benchmark::State& state) {
    const Index m = state.range(0), q = 4;
    StiefelProblem prob;
    prob.A = random_matrix(2 * m, m);
    prob.B = random_matrix(q, 8);
    prob.C = random_matrix(2 * m, 8);
    const Matrix x0 = random_orthonormal(m, q);
    StiefelOptions opts;
    opts.max_iters = 50;
    for (auto _ : state) {
        benchmark::DoNotOptimize(stiefel_minimize(prob, x0, opts));
    }
}
BENCHMARK(bm_stiefel_minimize)->Arg(16)->Arg(64);

void bm_build_affinity(benchmark::State& state) {
    const Index n = state.range(0);
    const Matrix d = random_matrix(64, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_affinity(d, 5));
    }
}
BENCHMARK(bm_build_affinity)->Arg(200)->Arg(800);

} // namespace

BENCHMARK_MAIN();
