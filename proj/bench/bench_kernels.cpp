#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "pconn/liouville.hpp"
#include "pconn/series.hpp"

using namespace pconn;

namespace {

std::vector<PadicScalar> random_coeffs(const Ctx& ctx, long deg, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::vector<PadicScalar> c;
    c.reserve(deg + 1);
    for (long i = 0; i <= deg; ++i) {
        long num = static_cast<long>(rng() % 4096) - 2048;
        long den = 2 * static_cast<long>(rng() % 8) + 1;
        c.push_back(PadicScalar::from_rational(ctx, num, den));
    }
    return c;
}

void bm_series_mul(benchmark::State& state, Exec policy) {
    Ctx ctx = make_context(2, 256);
    auto a = random_coeffs(ctx, 256, 11);
    auto b = random_coeffs(ctx, 256, 12);
    for (auto _ : state) {
        auto c = kernels::series_mul(ctx, a, b, policy);
        benchmark::DoNotOptimize(c);
    }
}

void bm_valuation_scan(benchmark::State& state, Exec policy) {
    Ctx ctx = make_context(2, 1024);
    PadicScalar lambda = gap_number(ctx, 4).lambda;
    for (auto _ : state) {
        auto vs = kernels::valuation_scan(lambda, 2000, policy);
        benchmark::DoNotOptimize(vs);
    }
}

} // namespace

BENCHMARK_CAPTURE(bm_series_mul, serial, Exec::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_series_mul, parallel, Exec::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_valuation_scan, serial, Exec::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_valuation_scan, parallel, Exec::Parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
