#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "parabolic/bmo.hpp"
#include "parabolic/kernels.hpp"
#include "parabolic/lattice.hpp"
#include "parabolic/sparse.hpp"

using namespace parabolic;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

// Periodic 5-point Laplacian on an n x n torus.
CsrMatrix laplacian(int n)
{
    std::vector<Triplet> t;
    auto id = [n](int i, int j) { return static_cast<std::size_t>(((i + n) % n) + n * ((j + n) % n)); };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            t.push_back({id(i, j), id(i, j), -4.0});
            t.push_back({id(i, j), id(i + 1, j), 1.0});
            t.push_back({id(i, j), id(i - 1, j), 1.0});
            t.push_back({id(i, j), id(i, j + 1), 1.0});
            t.push_back({id(i, j), id(i, j - 1), 1.0});
        }
    const auto N = static_cast<std::size_t>(n) * n;
    return build_csr(N, N, std::move(t));
}

template <bool Omp>
void BM_dot(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_vector(n, 1), b = random_vector(n, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(Omp ? kernels::omp::dot(a, b) : kernels::serial::dot(a, b));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <bool Omp>
void BM_axpy(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = random_vector(n, 1);
    auto y = random_vector(n, 2);
    for (auto _ : state) {
        if (Omp) kernels::omp::axpy(1e-9, x, y);
        else kernels::serial::axpy(1e-9, x, y);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <bool Omp>
void BM_spmv(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const auto a = laplacian(n);
    const auto x = random_vector(a.cols, 3);
    std::vector<double> y(a.rows);
    for (auto _ : state) {
        if (Omp) kernels::omp::spmv(a, x, y);
        else kernels::serial::spmv(a, x, y);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.nnz()));
}

template <bool Omp>
void BM_bmo(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const Grid grid = Grid::make(2, 1, 1.0, n, 1.0 / (n * n), 0.0, 1.0);
    const auto phi = random_vector(grid.nodes(), 4);
    for (auto _ : state) benchmark::DoNotOptimize(Omp ? bmo_norm(grid, phi) : bmo_norm_serial(grid, phi));
}

} // namespace

BENCHMARK(BM_dot<false>)->Name("dot/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_dot<true>)->Name("dot/omp")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_axpy<false>)->Name("axpy/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_axpy<true>)->Name("axpy/omp")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_spmv<false>)->Name("spmv/serial")->Arg(256)->Arg(1024);
BENCHMARK(BM_spmv<true>)->Name("spmv/omp")->Arg(256)->Arg(1024);
BENCHMARK(BM_bmo<false>)->Name("bmo/serial")->Arg(32)->Arg(64);
BENCHMARK(BM_bmo<true>)->Name("bmo/omp")->Arg(32)->Arg(64);

BENCHMARK_MAIN();
