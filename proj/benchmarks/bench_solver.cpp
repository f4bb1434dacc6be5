#include <benchmark/benchmark.h>

#include "speigen/features.hpp"
#include "speigen/potential.hpp"
#include "speigen/solver.hpp"

namespace {

speigen::EigenState solved(int n) {
    speigen::SolverConfig cfg;
    cfg.n = n;
    return speigen::solve_stationary_state(cfg);
}

// shared fixture so the per-feature benchmarks don't re-pay the solve
const speigen::EigenState& state8() {
    static const speigen::EigenState s = solved(8);
    return s;
}

void BM_SolveGround(benchmark::State& bench) {
    for (auto _ : bench) {
        auto s = solved(0);
        benchmark::DoNotOptimize(s.epsilon);
    }
}
BENCHMARK(BM_SolveGround)->Unit(benchmark::kMillisecond);

void BM_SolveExcited(benchmark::State& bench) {
    for (auto _ : bench) {
        auto s = solved(8);
        benchmark::DoNotOptimize(s.epsilon);
    }
}
BENCHMARK(BM_SolveExcited)->Unit(benchmark::kMillisecond);

void BM_Poisson(benchmark::State& bench) {
    const auto& s = state8();
    speigen::RadialProfile density(s.f.grid, s.f.values);
    for (auto& v : density.values) v *= v;
    for (auto _ : bench) {
        auto phi = speigen::poisson_potential(density, speigen::Quadrature::trapezoid);
        benchmark::DoNotOptimize(phi.values.data());
    }
}
BENCHMARK(BM_Poisson)->Unit(benchmark::kMicrosecond);

void BM_ExtractFeatures(benchmark::State& bench) {
    const auto& s = state8();
    for (auto _ : bench) {
        auto feats = speigen::extract_features(s);
        benchmark::DoNotOptimize(feats.nodes.data());
    }
}
BENCHMARK(BM_ExtractFeatures)->Unit(benchmark::kMicrosecond);

void BM_VelocityCurve(benchmark::State& bench) {
    const auto& s = state8();
    for (auto _ : bench) {
        auto curve = speigen::velocity_curve(s);
        benchmark::DoNotOptimize(curve.v.values.data());
    }
}
BENCHMARK(BM_VelocityCurve)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
