#include <benchmark/benchmark.h>

#include "spsreg/baselines.hpp"
#include "spsreg/eoa.hpp"
#include "spsreg/rng.hpp"
#include "spsreg/sps.hpp"

using namespace spsreg;

namespace {

Dataset make_instance(long n, int d, std::uint64_t seed) {
    RngStream rng(seed);
    Dataset ds;
    ds.regressors.resize(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j) ds.regressors(i, j) = rng.normal();
    Eigen::VectorXd theta = Eigen::VectorXd::Constant(d, 5.0);
    Eigen::VectorXd noise(n);
    for (Eigen::Index i = 0; i < n; ++i) noise(i) = rng.uniform(-3.0, 3.0);
    ds.outputs = ds.regressors * theta + noise;
    return ds;
}

void bm_dual_solve(benchmark::State& state) {
    const long n = state.range(0);
    const int d = static_cast<int>(state.range(1));
    const Dataset ds = make_instance(n, d, 7);
    const SpsConfig cfg = sps_initialize(2, 1, n, 8);
    const EoaFactors factors = make_eoa_factors(ds);
    for (auto _ : state) {
        const DualProblem dual = build_dual(ds, cfg, factors, 1);
        if (dual.bounded) benchmark::DoNotOptimize(solve_dual(dual));
    }
}
BENCHMARK(bm_dual_solve)
    ->Args({250, 2})
    ->Args({1000, 2})
    ->Args({250, 20})
    ->Args({1000, 20})
    ->Args({1000, 40});

void bm_outer_approximation(benchmark::State& state) {
    const long n = state.range(0);
    const Dataset ds = make_instance(n, 2, 9);
    const SpsConfig cfg = sps_initialize(10, 1, n, 10);
    for (auto _ : state) benchmark::DoNotOptimize(eoa(ds, cfg));
}
BENCHMARK(bm_outer_approximation)->Arg(500)->Arg(2000);

void bm_indicator(benchmark::State& state) {
    const long n = state.range(0);
    const Dataset ds = make_instance(n, 2, 11);
    const SpsConfig cfg = sps_initialize(10, 1, n, 12);
    const SqrtCache cache = make_sqrt_cache(ds);
    const Eigen::VectorXd theta = Eigen::Vector2d(5.0, 5.0);
    for (auto _ : state) benchmark::DoNotOptimize(indicator(ds, cfg, cache, theta));
}
BENCHMARK(bm_indicator)->Arg(100)->Arg(2000);

void bm_set_membership(benchmark::State& state) {
    const Dataset ds = make_instance(state.range(0), 2, 13);
    for (auto _ : state) benchmark::DoNotOptimize(set_membership_run(ds, 3.0));
}
BENCHMARK(bm_set_membership)->Arg(2000);

} // namespace

BENCHMARK_MAIN();
