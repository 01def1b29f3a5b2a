#include <doctest.h>

#include <random>

#include "pconn/errors.hpp"
#include "pconn/hensel.hpp"
#include "pconn/matrix.hpp"
#include "pconn/padic.hpp"

using namespace pconn;

TEST_CASE("from_rational normalizes into p^v * unit") {
    Ctx q3 = make_context(3, 10);
    PadicScalar x = PadicScalar::from_rational(q3, 6, 1);
    CHECK(x.v() == 1);
    CHECK(x.unit() == 2);

    Ctx q2 = make_context(2, 8);
    PadicScalar third = PadicScalar::from_rational(q2, 1, 3);
    CHECK(third.v() == 0);
    CHECK(third.unit() == 171);

    Ctx q5 = make_context(5, 6);
    CHECK(PadicScalar::from_rational(q5, 0, 5).is_zero_at_precision());
    CHECK_THROWS_AS(PadicScalar::from_rational(q5, 1, 0), ZeroDenominator);
}

TEST_CASE("arithmetic tracks valuations and cancellation") {
    Ctx q3 = make_context(3, 12);
    PadicScalar a = PadicScalar::from_integer(q3, 6);  // 3 * 2
    PadicScalar b = PadicScalar::from_integer(q3, 9);  // 3^2
    CHECK((a * b).v() == 3);

    PadicScalar x = PadicScalar::from_integer(q3, 1234);
    CHECK((x + (-x)).is_zero_at_precision());
    CHECK((x - x).is_zero_at_precision());

    Ctx q2 = make_context(2, 8);
    PadicScalar inv3 = PadicScalar::from_integer(q2, 3).invert();
    CHECK(inv3.v() == 0);
    CHECK(inv3.unit() == 171);

    CHECK_THROWS_AS(PadicScalar::zero(q2).invert(), PrecisionExhausted);

    Ctx other = make_context(5, 8);
    CHECK_THROWS_AS(PadicScalar::one(q2) + PadicScalar::one(other), MixedContext);
}

TEST_CASE("precision bookkeeping survives negative effective precision") {
    Ctx q2 = make_context(2, 8);
    PadicScalar x = PadicScalar::from_integer(q2, 64).invert();
    CHECK(x.v() == -6);
    CHECK(x.precision() == -4);
    CHECK_FALSE(x.is_zero_at_precision());
    // exact rational input keeps the full absolute precision
    PadicScalar y = PadicScalar::from_rational(q2, 1, 64);
    CHECK(y.v() == -6);
    CHECK(y.precision() == 8);
}

TEST_CASE("valuation of zero-at-precision is a floor, not a number") {
    Ctx q2 = make_context(2, 16);
    PadicScalar z = PadicScalar::at_least(q2, 7);
    CHECK(z.valuation() == Val::at_least(7));
    CHECK_THROWS_AS(z.v(), PrecisionExhausted);
    CHECK(vmin(Val::at_least(7), Val::exact(7)) == Val::exact(7));
    CHECK(Val::at_least(7) > Val::exact(7));
    CHECK(Val::at_least(7) < Val::exact(8));
}

TEST_CASE("hensel lifting finds exactly the simple Z_p roots") {
    Ctx q5 = make_context(5, 10);
    HenselResult r1 = hensel_zp_roots(q5, std::vector<Rational>{-1, 0, 1});  // x^2 - 1
    REQUIRE(r1.roots.size() == 2);
    CHECK(r1.unresolved.empty());
    mpz_class sum = r1.roots[0].integer_value() + r1.roots[1].integer_value();
    mpz_class mod = 1;
    for (int i = 0; i < 10; ++i) mod *= 5;
    CHECK(sum % mod == 0);

    Ctx q7 = make_context(7, 10);
    HenselResult r2 = hensel_zp_roots(q7, std::vector<Rational>{-2, 0, 1});  // x^2 - 2
    REQUIRE(r2.roots.size() == 2);
    mpz_class m7 = 1;
    for (int i = 0; i < 10; ++i) m7 *= 7;
    for (const PadicScalar& root : r2.roots) {
        mpz_class rv = root.integer_value();
        CHECK((rv * rv - 2) % m7 == 0);
    }
    CHECK((r2.roots[0].integer_value() == 266983762 ||
           r2.roots[0].integer_value() == 15491487));

    HenselResult r3 = hensel_zp_roots(q5, std::vector<Rational>{-2, 0, 1});
    CHECK(r3.roots.empty());
    CHECK(r3.unresolved.empty());

    // (x - 1)^2 has a double root mod p: nothing certified
    HenselResult r4 = hensel_zp_roots(q5, std::vector<Rational>{1, -2, 1});
    CHECK(r4.roots.empty());
    REQUIRE(r4.unresolved.size() == 1);
    CHECK(r4.unresolved[0] == 1);
}

TEST_CASE("matrix solve pivots by valuation and reports determinant loss") {
    Ctx q2 = make_context(2, 32);
    Mat a = Mat::zeros(q2, 2, 2);
    a.at(0, 0) = PadicScalar::from_integer(q2, 2);
    a.at(1, 1) = PadicScalar::one(q2);
    SolveResult r = matrix_solve(a, Mat::identity(q2, 2));
    CHECK(r.det_valuation == 1);
    CHECK(eq_at_precision(r.x.at(0, 0), PadicScalar::from_rational(q2, 1, 2)));
    CHECK(eq_at_precision(r.x.at(1, 1), PadicScalar::one(q2)));

    Mat sing = Mat::zeros(q2, 2, 2);
    sing.at(0, 0) = PadicScalar::one(q2);
    sing.at(0, 1) = PadicScalar::one(q2);
    sing.at(1, 0) = PadicScalar::one(q2);
    sing.at(1, 1) = PadicScalar::one(q2);
    CHECK_THROWS_AS(matrix_solve(sing, Mat::identity(q2, 2)), SingularAtPrecision);
}

TEST_CASE("random solves satisfy AX = B at precision") {
    Ctx q2 = make_context(2, 64);
    std::mt19937_64 rng(11);
    int solved = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Mat a = Mat::zeros(q2, 3, 3);
        Mat b = Mat::zeros(q2, 3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                a.at(i, j) = PadicScalar::from_integer(q2, static_cast<long>(rng() % 64));
                b.at(i, j) = PadicScalar::from_integer(q2, static_cast<long>(rng() % 64));
            }
        try {
            SolveResult r = matrix_solve(a, b);
            CHECK((a * r.x - b).is_zero_at_precision());
            ++solved;
        } catch (const SingularAtPrecision&) {
        }
    }
    CHECK(solved >= 80);
}

TEST_CASE("rank computation refuses ambiguous pivots") {
    Ctx q2 = make_context(2, 32);
    Mat a = Mat::zeros(q2, 2, 2);
    a.at(0, 0) = PadicScalar::from_integer(q2, mpz_class(1) << 20);  // v = 20 >= N/2
    CHECK_THROWS_AS(rank_and_kernel(a), RankAmbiguousAtPrecision);

    Mat ok = Mat::zeros(q2, 2, 2);
    ok.at(0, 0) = PadicScalar::from_integer(q2, 6);
    RankResult r = rank_and_kernel(ok);
    CHECK(r.rank == 1);
    REQUIRE(r.kernel.size() == 1);
}
