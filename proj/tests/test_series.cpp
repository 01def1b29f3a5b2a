#include <doctest.h>

#include <random>

#include "pconn/errors.hpp"
#include "pconn/series.hpp"

using namespace pconn;

namespace {

ValuedSeries random_series(const Ctx& ctx, long trunc, std::mt19937_64& rng) {
    std::vector<PadicScalar> c;
    c.reserve(trunc + 1);
    for (long i = 0; i <= trunc; ++i) {
        long num = static_cast<long>(rng() % 2048) - 1024;
        long den = 1 + 2 * static_cast<long>(rng() % 8);
        c.push_back(PadicScalar::from_rational(ctx, Rational(num, den)));
    }
    return ValuedSeries(ctx, std::move(c));
}

} // namespace

TEST_CASE("vn is the prefix infimum of coefficient valuations") {
    Ctx q3 = make_context(3, 20);
    std::vector<PadicScalar> c{PadicScalar::from_integer(q3, 3),
                               PadicScalar::from_integer(q3, 9),
                               PadicScalar::from_rational(q3, 1, 3)};
    ValuedSeries f(q3, c);
    CHECK(f.vn(0) == Val::exact(1));
    CHECK(f.vn(1) == Val::exact(1));
    CHECK(f.vn(2) == Val::exact(-1));
    CHECK_THROWS_AS(f.vn(3), IndexBeyondTruncation);

    ValuedSeries zk = ValuedSeries::monomial(q3, 6, 4, PadicScalar::one(q3));
    CHECK(zk.vn(3) == Val::at_least(20));
    CHECK(zk.vn(4) == Val::exact(0));
}

TEST_CASE("vr equals the termwise infimum with a witness") {
    Ctx q3 = make_context(3, 20);
    std::vector<PadicScalar> c{PadicScalar::from_integer(q3, 3),
                               PadicScalar::from_integer(q3, 9),
                               PadicScalar::from_rational(q3, 1, 3)};
    ValuedSeries f(q3, c);
    auto [val, witness] = f.vr(Rational(2));
    CHECK(val == Val::exact(1));
    CHECK(witness == 0);

    ValuedSeries z = ValuedSeries::monomial(q3, 6, 1, PadicScalar::one(q3));
    auto [vz, wz] = z.vr(Rational(5, 7));
    CHECK(vz == Val::exact(Rational(5, 7)));
    CHECK(wz == 1);
}

TEST_CASE("vr matches the definitional prefix formula on random series") {
    Ctx q2 = make_context(2, 64);
    std::mt19937_64 rng(5);
    const Rational rs[] = {Rational(1, 2), Rational(1), Rational(3, 2), Rational(1, 3)};
    for (int trial = 0; trial < 200; ++trial) {
        ValuedSeries f = random_series(q2, 30, rng);
        for (const Rational& r : rs) {
            Val termwise = f.vr(r).first;
            Val definitional = f.vn(0);
            for (long n = 0; n <= 30; ++n)
                definitional = vmin(definitional, f.vn(n) + Rational(n) * r);
            CHECK(termwise == definitional);
        }
    }
}

TEST_CASE("multiplication is the Cauchy product") {
    Ctx q2 = make_context(2, 32);
    std::vector<PadicScalar> one_z{PadicScalar::one(q2), PadicScalar::one(q2)};
    std::vector<PadicScalar> one_mz{PadicScalar::one(q2), -PadicScalar::one(q2)};
    ValuedSeries prod = ValuedSeries(q2, one_z) * ValuedSeries(q2, one_mz);
    CHECK(eq_at_precision(prod.coeff(0), PadicScalar::one(q2)));
    CHECK(prod.coeff(1).is_zero_at_precision());
    CHECK(prod.trunc() == 1);

    ValuedSeries f = ValuedSeries::ones(q2, 10);
    CHECK((f + (-f)).coeff(7).is_zero_at_precision());
}

TEST_CASE("theta obeys the Leibniz rule") {
    Ctx q2 = make_context(2, 48);
    ValuedSeries zk = ValuedSeries::monomial(q2, 8, 5, PadicScalar::one(q2));
    CHECK(eq_at_precision(zk.theta().coeff(5), PadicScalar::from_integer(q2, 5)));
    ValuedSeries c = ValuedSeries::monomial(q2, 8, 0, PadicScalar::from_integer(q2, 9));
    CHECK(c.theta().coeff(0).is_zero_at_precision());

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        ValuedSeries f = random_series(q2, 12, rng);
        ValuedSeries g = random_series(q2, 12, rng);
        ValuedSeries lhs = (f * g).theta();
        ValuedSeries rhs = f.theta() * g + f * g.theta();
        for (long i = 0; i <= lhs.trunc(); ++i)
            CHECK(eq_at_precision(lhs.coeff(i), rhs.coeff(i)));
    }
}

TEST_CASE("series inversion") {
    Ctx q2 = make_context(2, 32);
    ValuedSeries f = ValuedSeries::zero(q2, 12);
    f.set_coeff(0, PadicScalar::one(q2));
    f.set_coeff(1, -PadicScalar::one(q2));
    ValuedSeries g = f.invert();
    for (long i = 0; i <= g.trunc(); ++i)
        CHECK(eq_at_precision(g.coeff(i), PadicScalar::one(q2)));

    ValuedSeries h = ValuedSeries::zero(q2, 12);
    h.set_coeff(0, PadicScalar::one(q2));
    h.set_coeff(1, PadicScalar::from_rational(q2, Rational(-1, 2)));
    ValuedSeries hg = h.invert();
    for (long i = 0; i <= hg.trunc(); ++i) CHECK(hg.coeff(i).v() == -i);

    ValuedSeries z = ValuedSeries::monomial(q2, 4, 1, PadicScalar::one(q2));
    CHECK_THROWS_AS(z.invert(), NonUnitConstantTerm);

    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        ValuedSeries u = random_series(q2, 10, rng);
        if (u.coeff(0).is_zero_at_precision()) continue;
        ValuedSeries prod = u * u.invert();
        CHECK(eq_at_precision(prod.coeff(0), PadicScalar::one(q2)));
        for (long i = 1; i <= prod.trunc(); ++i)
            CHECK(prod.coeff(i).is_zero_at_precision());
    }
}

TEST_CASE("convolution inequality for coefficient valuations") {
    Ctx q2 = make_context(2, 64);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        ValuedSeries f = random_series(q2, 16, rng);
        ValuedSeries g = random_series(q2, 16, rng);
        ValuedSeries fg = f * g;
        for (long n = 0; n <= fg.trunc(); ++n) {
            Val bound = f.coeff(0).valuation() + g.coeff(n).valuation();
            for (long i = 1; i <= n; ++i)
                bound = vmin(bound, f.coeff(i).valuation() + g.coeff(n - i).valuation());
            CHECK(fg.coeff(n).valuation() >= bound);
        }
    }
}
