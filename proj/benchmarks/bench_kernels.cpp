#include <benchmark/benchmark.h>

#include <cmath>

#include "sgfield/bump.hpp"
#include "sgfield/field.hpp"
#include "sgfield/slnd.hpp"
#include "sgfield/special_functions.hpp"
#include "sgfield/variogram.hpp"

namespace {

void BM_LegendreBatch(benchmark::State& state) {
    const int l_max = int(state.range(0));
    std::vector<double> out(l_max + 1);
    for (auto _ : state) {
        sgfield::legendre_batch(l_max, 0.37, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * l_max);
}
BENCHMARK(BM_LegendreBatch)->Arg(1024)->Arg(4096)->Arg(1 << 16);

void BM_Variogram(benchmark::State& state) {
    sgfield::PowerSpectrum spec(3.0, int(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sgfield::variogram(spec, 1e-3).value);
}
BENCHMARK(BM_Variogram)->Arg(4096)->Arg(1 << 18);

void BM_SynthesisPoint(benchmark::State& state) {
    sgfield::PowerSpectrum spec(3.0, int(state.range(0)));
    auto realization = sgfield::sample_realization(spec, 7, 0);
    auto p = sgfield::SpherePoint::from_angles(1.1, 2.2);
    for (auto _ : state) benchmark::DoNotOptimize(sgfield::evaluate_at(realization, p));
}
BENCHMARK(BM_SynthesisPoint)->Arg(64)->Arg(256)->Arg(1024);

void BM_RingEvaluate(benchmark::State& state) {
    sgfield::PowerSpectrum spec(3.0, int(state.range(0)));
    auto realization = sgfield::sample_realization(spec, 7, 0);
    sgfield::RingEvaluator ring(realization, M_PI / 2);
    double phi = 0.0;
    for (auto _ : state) {
        phi += 1e-3;
        benchmark::DoNotOptimize(ring(phi));
    }
}
BENCHMARK(BM_RingEvaluate)->Arg(1024)->Arg(2048);

void BM_BumpCoefficient(benchmark::State& state) {
    sgfield::SmoothingKernel kernel(2);
    const int ell = int(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sgfield::b_ell(kernel, 0.1, ell));
}
BENCHMARK(BM_BumpCoefficient)->Arg(16)->Arg(512)->Arg(4096);

void BM_ConditionalVariance(benchmark::State& state) {
    sgfield::PowerSpectrum spec(3.0, 256);
    sgfield::RngStream rng(11, 0, "bench");
    sgfield::ConditioningConfig config{sgfield::SpherePoint::north_pole(), {}, spec};
    for (int j = 0; j < int(state.range(0)); ++j)
        config.points.push_back(sgfield::random_point(rng));
    for (auto _ : state) benchmark::DoNotOptimize(sgfield::conditional_variance(config));
}
BENCHMARK(BM_ConditionalVariance)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
