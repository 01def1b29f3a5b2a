#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pconn/errors.hpp"
#include "pconn/liouville.hpp"

using namespace pconn;

namespace {

bool has_spike(const std::vector<TypeSpike>& table, long m, long v) {
    return std::any_of(table.begin(), table.end(),
                       [&](const TypeSpike& s) { return s.m == m && s.v == v; });
}

} // namespace

TEST_CASE("gap numbers follow the tower recurrence") {
    Ctx q2 = make_context(2, 1024);
    GapNumber g = gap_number(q2, 4);
    CHECK(g.exponents == std::vector<long>{1, 2, 8, 768});
    CHECK(g.lambda.v() == 1);
    mpz_class low = g.lambda.integer_value() % (mpz_class(1) << 20);
    CHECK(low == 262);

    CHECK(gap_number(q2, 1).lambda.integer_value() == 2);

    Ctx q3 = make_context(3, 256);
    CHECK(gap_number(q3, 3).exponents == std::vector<long>{1, 3, 54});

    Ctx small = make_context(2, 256);
    CHECK_THROWS_AS(gap_number(small, 4), PrecisionTooSmall);
}

TEST_CASE("type estimate flags the gap-number spike and nothing else") {
    Ctx q2 = make_context(2, 1024);
    GapNumber g = gap_number(q2, 4);

    TypeEstimate est = estimate_type(g.lambda, 300);
    CHECK(est.has_significant);
    REQUIRE(est.significant.size() == 2);
    CHECK(has_spike(est.significant, 6, 8));
    CHECK(has_spike(est.significant, 262, 768));
    CHECK(has_spike(est.spikes, 262, 768));
    CHECK(est.observed_sup == Rational(768, 262));
    CHECK(est.bound <= std::pow(2.0, -768.0 / 262.0) + 1e-12);

    TypeEstimate neg = estimate_type(-g.lambda, 300);
    CHECK_FALSE(neg.has_significant);
    CHECK(neg.bound == 1.0);
}

TEST_CASE("integer lambda saturates at itself and stays type-1-looking") {
    Ctx q3 = make_context(3, 256);
    TypeEstimate est = estimate_type(PadicScalar::from_integer(q3, 5), 200);
    REQUIRE(est.saturated.size() == 1);
    CHECK(est.saturated[0] == 5);
    CHECK(est.bound == 1.0);
}

TEST_CASE("the bound is monotone non-increasing in the horizon") {
    Ctx q2 = make_context(2, 1024);
    GapNumber g = gap_number(q2, 4);
    double b150 = estimate_type(g.lambda, 150).bound;
    double b300 = estimate_type(g.lambda, 300).bound;
    double b500 = estimate_type(g.lambda, 500).bound;
    CHECK(b300 <= b150);
    CHECK(b500 <= b300);
}

TEST_CASE("slope criterion separates bounded from Liouville-suspect growth") {
    Ctx q2 = make_context(2, 1024);
    GapNumber g = gap_number(q2, 4);

    SlopeReport wild = slope_criterion(g.lambda, 300);
    CHECK(wild.verdict == SlopeVerdict::LiouvilleSuspect);
    CHECK(wild.s_star > 3.0);

    SlopeReport tame = slope_criterion(PadicScalar::from_rational(q2, Rational(1, 3)), 300);
    CHECK(tame.verdict == SlopeVerdict::PositiveTypeConsistent);

    SlopeReport small = slope_criterion(PadicScalar::from_integer(q2, 7), 5);
    CHECK(small.verdict == SlopeVerdict::PositiveTypeConsistent);
    CHECK(small.s_star <= 1.5);
}

TEST_CASE("classification of exponent lists") {
    Ctx q2 = make_context(2, 1024);

    ClassifyReport plain = classify_exponents(
        {PadicScalar::from_integer(q2, 0), PadicScalar::from_rational(q2, Rational(1, 3))},
        200);
    CHECK_FALSE(plain.one_sided_suspect);
    CHECK_FALSE(plain.pairwise_suspect);

    GapNumber g = gap_number(q2, 4);
    PadicScalar lam = -g.lambda;
    ClassifyReport confuse = classify_exponents({lam, lam + PadicScalar::one(q2)}, 300);
    CHECK(confuse.one_sided_suspect);
    CHECK_FALSE(confuse.pairwise_suspect);

    ClassifyReport single = classify_exponents({PadicScalar::from_integer(q2, 0)}, 100);
    CHECK_FALSE(single.one_sided_suspect);
    CHECK_FALSE(single.pairwise_suspect);

    // equal pair: the difference is zero at precision, reported as
    // identity rather than scanned for spikes
    PadicScalar third = PadicScalar::from_rational(q2, Rational(1, 3));
    ClassifyReport twin = classify_exponents({third, third}, 100);
    CHECK_FALSE(twin.pairwise_suspect);
    REQUIRE(twin.pairwise.size() == 2);
    CHECK(twin.pairwise[0].second.identical_at_precision);
}

TEST_CASE("ratio profile clamps saturated terms to the precision") {
    Ctx q2 = make_context(2, 64);
    std::vector<Rational> ratios =
        liouville_ratio_profile(PadicScalar::from_integer(q2, 2), 4);
    REQUIRE(ratios.size() == 4);
    // V_2 includes v(2 - 2) clamped to N = 64
    CHECK(ratios[1] >= Rational(64, 2));
}

TEST_CASE("estimating the type of a zero-at-precision scalar is refused") {
    Ctx q2 = make_context(2, 64);
    CHECK_THROWS_AS(estimate_type(PadicScalar::zero(q2), 10), PrecisionExhausted);
}
