#include <benchmark/benchmark.h>

#include <cmath>

#include <w3j/exact.hpp>
#include <w3j/geometry.hpp>
#include <w3j/quantization.hpp>
#include <w3j/schwinger.hpp>
#include <w3j/semiclassical.hpp>

using namespace w3j;

// Single exact evaluation at growing j; the factorial cache is warm after
// the first iteration, which is the regime the budgets are written for.
static void BM_ExactThreej(benchmark::State& state) {
    const int j = static_cast<int>(state.range(0));
    const ThreeJArgs a{j, j, j, 13, -2, -11};
    for (auto _ : state) benchmark::DoNotOptimize(threej_float(a));
}
BENCHMARK(BM_ExactThreej)->Arg(50)->Arg(100)->Arg(250)->Arg(500);

static void BM_ExactSurd(benchmark::State& state) {
    const int j = static_cast<int>(state.range(0));
    const ThreeJArgs a{j, j, j, 1, 2, -3};
    for (auto _ : state) benchmark::DoNotOptimize(exact_threej(a).sign);
}
BENCHMARK(BM_ExactSurd)->Arg(100)->Arg(500);

// Full m2 row by recursion, sign-anchored to one exact evaluation.
static void BM_MRow(benchmark::State& state) {
    const int j = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(threej_m_row(j, j + 10, j + 5, 3).values.front());
}
BENCHMARK(BM_MRow)->Arg(100)->Arg(500);

static void BM_Asymptotic(benchmark::State& state) {
    const ThreeJArgs a{100, 110, 120, 10, -50, 40};
    for (auto _ : state) benchmark::DoNotOptimize(asymptotic_threej(a).value);
}
BENCHMARK(BM_Asymptotic);

static void BM_ClassifyRegion(benchmark::State& state) {
    const ContourTriple j{100.5, 110.5, 120.5};
    const MagneticTriple m{10, -50, 40};
    for (auto _ : state) benchmark::DoNotOptimize(classify_region(j, m));
}
BENCHMARK(BM_ClassifyRegion);

static void BM_OrthogonalityResidual(benchmark::State& state) {
    const int tj = static_cast<int>(state.range(0));
    const auto j = HalfInt::from_twice(tj);
    for (auto _ : state)
        benchmark::DoNotOptimize(orthogonality_residual(j, j, j).get_num());
}
BENCHMARK(BM_OrthogonalityResidual)->Arg(10)->Arg(20);

static void BM_MaslovWinding(benchmark::State& state) {
    const SpinorConfig base = wigner_reference(ContourTriple{2, 3, 4});
    const ContourSpec spec{Manifold::Wigner, ContourKind::C4, 0, base, {0, 0, 1}};
    for (auto _ : state) benchmark::DoNotOptimize(maslov_winding(spec));
}
BENCHMARK(BM_MaslovWinding);

BENCHMARK_MAIN();
