#ifndef PCONN_SERIES_HPP
#define PCONN_SERIES_HPP

#include <utility>
#include <vector>

#include "pconn/padic.hpp"

namespace pconn {

// Execution policy for the data-parallel kernels. Auto picks the
// parallel path for large inputs when OpenMP is compiled in. Results are
// bit-identical across policies (exact arithmetic, per-slot outputs).
enum class Exec { Serial, Parallel, Auto };

// Truncated power series with p-adic coefficients, indexed 0..trunc().
// Coefficient questions beyond the truncation order are refused rather
// than answered with a silent zero.
class ValuedSeries {
public:
    ValuedSeries() = default;
    ValuedSeries(Ctx ctx, long trunc);
    ValuedSeries(Ctx ctx, std::vector<PadicScalar> coeffs);

    static ValuedSeries zero(const Ctx& ctx, long trunc) { return ValuedSeries(ctx, trunc); }
    static ValuedSeries ones(const Ctx& ctx, long trunc);
    static ValuedSeries monomial(const Ctx& ctx, long trunc, long degree,
                                 const PadicScalar& c);

    long trunc() const { return static_cast<long>(c_.size()) - 1; }
    const Ctx& context() const { return ctx_; }

    const PadicScalar& coeff(long i) const;
    void set_coeff(long i, const PadicScalar& v);

    // Gauss valuation: min over all stored coefficients.
    Val gauss_valuation() const;
    // v_n: min over coefficients of degree <= n.
    Val vn(long n) const;
    // Weighted valuation min_i { v(a_i) + i*r } together with the
    // smallest index attaining it.
    std::pair<Val, long> vr(const Rational& r) const;

    ValuedSeries operator+(const ValuedSeries& o) const;
    ValuedSeries operator-(const ValuedSeries& o) const;
    ValuedSeries operator*(const ValuedSeries& o) const;
    ValuedSeries scaled(const PadicScalar& c) const;
    ValuedSeries operator-() const { return scaled(-PadicScalar::one(ctx_)); }

    // z d/dz.
    ValuedSeries theta() const;
    // Multiplication by z^k (degrees above the truncation fall off).
    ValuedSeries shift(long k) const;
    // Inverse; the constant term must be a unit (NonUnitConstantTerm).
    ValuedSeries invert() const;

private:
    Ctx ctx_;
    std::vector<PadicScalar> c_;
};

namespace kernels {

// Cauchy product, output truncated at min(trunc_a, trunc_b). Each output
// coefficient is an independent reduction, which is what the parallel
// path exploits.
std::vector<PadicScalar> series_mul_serial(const Ctx& ctx,
                                           const std::vector<PadicScalar>& a,
                                           const std::vector<PadicScalar>& b);
std::vector<PadicScalar> series_mul_parallel(const Ctx& ctx,
                                             const std::vector<PadicScalar>& a,
                                             const std::vector<PadicScalar>& b);
std::vector<PadicScalar> series_mul(const Ctx& ctx, const std::vector<PadicScalar>& a,
                                    const std::vector<PadicScalar>& b,
                                    Exec policy = Exec::Auto);

} // namespace kernels

} // namespace pconn

#endif
