#include <doctest.h>

#include <random>

#include "pconn/liouville.hpp"
#include "pconn/series.hpp"

using namespace pconn;

namespace {

ValuedSeries random_series(const Ctx& ctx, long trunc, std::mt19937_64& rng) {
    std::vector<PadicScalar> c;
    c.reserve(trunc + 1);
    for (long i = 0; i <= trunc; ++i)
        c.push_back(PadicScalar::from_integer(ctx, static_cast<long>(rng() % 4096) - 2048));
    return ValuedSeries(ctx, std::move(c));
}

} // namespace

TEST_CASE("parallel Cauchy product matches the serial reference") {
    Ctx q2 = make_context(2, 128);
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        ValuedSeries f = random_series(q2, 128, rng);
        ValuedSeries g = random_series(q2, 100, rng);
        std::vector<PadicScalar> ca, cb;
        for (long i = 0; i <= f.trunc(); ++i) ca.push_back(f.coeff(i));
        for (long i = 0; i <= g.trunc(); ++i) cb.push_back(g.coeff(i));
        auto serial = kernels::series_mul_serial(q2, ca, cb);
        auto parallel = kernels::series_mul_parallel(q2, ca, cb);
        auto automatic = kernels::series_mul(q2, ca, cb, Exec::Auto);
        REQUIRE(serial.size() == parallel.size());
        REQUIRE(serial.size() == automatic.size());
        for (size_t i = 0; i < serial.size(); ++i) {
            CHECK(eq_at_precision(serial[i], parallel[i]));
            CHECK(eq_at_precision(serial[i], automatic[i]));
        }
    }
}

TEST_CASE("parallel valuation scan matches the serial reference") {
    Ctx q2 = make_context(2, 1024);
    PadicScalar lambda = gap_number(q2, 4).lambda;
    auto serial = kernels::valuation_scan_serial(lambda, 1000);
    auto parallel = kernels::valuation_scan_parallel(lambda, 1000);
    CHECK(serial == parallel);
    CHECK(serial == kernels::valuation_scan(lambda, 1000, Exec::Auto));
    CHECK(serial[261] == 768);
}
