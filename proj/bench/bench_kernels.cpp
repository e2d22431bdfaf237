// Serial reference vs OpenMP form of the three parallel kernels.
// Run with OMP_NUM_THREADS set to compare thread counts.

#include "bmgame/analyzer.hpp"
#include "bmgame/corpus.hpp"

#include <benchmark/benchmark.h>

using namespace bmg;

namespace {

void BM_MonteCarloSerial(benchmark::State& st)
{
    const auto m = uniform_complete(2);
    const Condition w = triangular_truncation(6);
    for (auto _ : st) benchmark::DoNotOptimize(monte_carlo_serial(*m, w, 0, 24, st.range(0), 1));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_MonteCarloParallel(benchmark::State& st)
{
    const auto m = uniform_complete(2);
    const Condition w = triangular_truncation(6);
    for (auto _ : st) benchmark::DoNotOptimize(monte_carlo(*m, w, 0, 24, st.range(0), 1));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_BruteForceSerial(benchmark::State& st)
{
    const auto m = uniform_complete(2);
    const auto w = triangular_truncation(5);
    for (auto _ : st) benchmark::DoNotOptimize(brute_force_open_mass_serial(*m, w, 0, st.range(0)));
}

void BM_BruteForceParallel(benchmark::State& st)
{
    const auto m = uniform_complete(2);
    const auto w = triangular_truncation(5);
    for (auto _ : st) benchmark::DoNotOptimize(brute_force_open_mass_parallel(*m, w, 0, st.range(0)));
}

// Diagonally dominant integer system with small rational entries.
std::pair<std::vector<std::vector<Rational>>, std::vector<Rational>> system(std::size_t n)
{
    Rng rng(5);
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    std::vector<Rational> b(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(static_cast<long>(rng() % 9) - 4);
        a[i][i] += Rational(static_cast<long>(4 * n));
        b[i] = Rational(static_cast<long>(rng() % 21) - 10);
    }
    return {a, b};
}

void BM_SolveSerial(benchmark::State& st)
{
    const auto [a, b] = system(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(solve_linear_serial(a, b));
}

void BM_SolveParallel(benchmark::State& st)
{
    const auto [a, b] = system(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(solve_linear_parallel(a, b));
}

} // namespace

BENCHMARK(BM_MonteCarloSerial)->Arg(1 << 12)->Arg(1 << 15)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloParallel)->Arg(1 << 12)->Arg(1 << 15)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BruteForceSerial)->Arg(14)->Arg(18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteForceParallel)->Arg(14)->Arg(18)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SolveSerial)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveParallel)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
