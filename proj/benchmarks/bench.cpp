#include <benchmark/benchmark.h>

#include <vector>

#include "axifb/classify.hpp"
#include "axifb/eos.hpp"
#include "axifb/functionals.hpp"
#include "axifb/legendre.hpp"
#include "axifb/profiles.hpp"
#include "axifb/solver.hpp"

using namespace axifb;

static void BM_GammaInvert(benchmark::State& state) {
    GammaLaw m(EosParams{});
    double t = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(m.invert(t, 0.2));
        t = t < 0.05 ? t + 1e-4 : 0.01;
    }
}
BENCHMARK(BM_GammaInvert);

static void BM_GammaF(benchmark::State& state) {
    GammaLaw m(EosParams{});
    double t = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(m.F(t, 0.2));
        t = t < 0.05 ? t + 1e-4 : 0.01;
    }
}
BENCHMARK(BM_GammaF);

static void BM_LegendreP(benchmark::State& state) {
    double s = -0.9;
    for (auto _ : state) {
        benchmark::DoNotOptimize(legendre_P(1.5, s));
        s = s < 0.9 ? s + 1e-3 : -0.9;
    }
}
BENCHMARK(BM_LegendreP);

static void BM_BallMoments(benchmark::State& state) {
    Incompressible m(1.0);
    ProfileField st(stokes_corner_physical(1.0));
    GridField g = GridField::sample(GridSpec::box(0.75, 1.25, -0.25, 0.25, 1.0 / state.range(0)), st);
    for (auto _ : state) benchmark::DoNotOptimize(ball_moments(g, m, {1, 0}, 0.1));
}
BENCHMARK(BM_BallMoments)->Arg(128)->Arg(256);

static void BM_EnergyGradient(benchmark::State& state) {
    Incompressible m(1.0);
    ProfileField st(stokes_corner_physical(1.0));
    GridSpec grid = GridSpec::box(0.75, 1.25, -0.25, 0.25, 1.0 / state.range(0));
    GridField g = GridField::sample(grid, st);
    std::vector<double> v = g.values(), grad;
    for (auto _ : state) benchmark::DoNotOptimize(discrete_energy(grid, v, m, grid.h / 10, &grad));
}
BENCHMARK(BM_EnergyGradient)->Arg(64)->Arg(128);

static void BM_Minimize(benchmark::State& state) {
    Incompressible m(1.0);
    ProfileField st(stokes_corner_physical(1.0));
    MinimizeConfig cfg;
    cfg.grid = GridSpec::box(0.75, 1.25, -0.25, 0.25, 1.0 / 64);
    cfg.boundary = [&](Point x) { return st.value(x); };
    for (auto _ : state) benchmark::DoNotOptimize(minimize_EF(cfg, m));
}
BENCHMARK(BM_Minimize)->Unit(benchmark::kMillisecond);

static void BM_Classify(benchmark::State& state) {
    ProfileField st(stokes_corner_physical(1.0));
    GridField g = GridField::sample(GridSpec::box(0.75, 1.25, -0.25, 0.25, 1.0 / 256), st);
    for (auto _ : state) benchmark::DoNotOptimize(classify(g, {1, 0}, PointKind::Stagnation));
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
