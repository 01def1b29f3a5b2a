#include "pconn/series.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pconn {

ValuedSeries::ValuedSeries(Ctx ctx, long trunc) : ctx_(std::move(ctx)) {
    if (trunc < 0) throw IndexBeyondTruncation("truncation order must be >= 0");
    c_.assign(trunc + 1, PadicScalar::zero(ctx_));
}

ValuedSeries::ValuedSeries(Ctx ctx, std::vector<PadicScalar> coeffs)
    : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
    if (c_.empty()) throw IndexBeyondTruncation("series needs at least one coefficient");
}

ValuedSeries ValuedSeries::ones(const Ctx& ctx, long trunc) {
    ValuedSeries s(ctx, trunc);
    for (auto& c : s.c_) c = PadicScalar::one(ctx);
    return s;
}

ValuedSeries ValuedSeries::monomial(const Ctx& ctx, long trunc, long degree,
                                    const PadicScalar& c) {
    ValuedSeries s(ctx, trunc);
    s.set_coeff(degree, c);
    return s;
}

const PadicScalar& ValuedSeries::coeff(long i) const {
    if (i < 0 || i > trunc())
        throw IndexBeyondTruncation("coefficient " + std::to_string(i) +
                                    " beyond truncation order " + std::to_string(trunc()));
    return c_[i];
}

void ValuedSeries::set_coeff(long i, const PadicScalar& v) {
    if (i < 0 || i > trunc())
        throw IndexBeyondTruncation("coefficient " + std::to_string(i) +
                                    " beyond truncation order " + std::to_string(trunc()));
    c_[i] = v;
}

Val ValuedSeries::gauss_valuation() const { return vn(trunc()); }

Val ValuedSeries::vn(long n) const {
    if (n < 0 || n > trunc())
        throw IndexBeyondTruncation("v_n for n = " + std::to_string(n) +
                                    " beyond truncation order " + std::to_string(trunc()));
    Val m = c_[0].valuation();
    for (long i = 1; i <= n; ++i) m = vmin(m, c_[i].valuation());
    return m;
}

std::pair<Val, long> ValuedSeries::vr(const Rational& r) const {
    Val best = c_[0].valuation();
    long witness = 0;
    for (long i = 1; i <= trunc(); ++i) {
        Val cand = c_[i].valuation() + (r * i);
        if (cand < best) {
            best = cand;
            witness = i;
        }
    }
    return {best, witness};
}

ValuedSeries ValuedSeries::operator+(const ValuedSeries& o) const {
    long t = std::min(trunc(), o.trunc());
    ValuedSeries s(ctx_, t);
    for (long i = 0; i <= t; ++i) s.c_[i] = c_[i] + o.c_[i];
    return s;
}

ValuedSeries ValuedSeries::operator-(const ValuedSeries& o) const {
    long t = std::min(trunc(), o.trunc());
    ValuedSeries s(ctx_, t);
    for (long i = 0; i <= t; ++i) s.c_[i] = c_[i] - o.c_[i];
    return s;
}

ValuedSeries ValuedSeries::operator*(const ValuedSeries& o) const {
    return ValuedSeries(ctx_, kernels::series_mul(ctx_, c_, o.c_));
}

ValuedSeries ValuedSeries::scaled(const PadicScalar& c) const {
    ValuedSeries s(ctx_, trunc());
    for (long i = 0; i <= trunc(); ++i) s.c_[i] = c_[i] * c;
    return s;
}

ValuedSeries ValuedSeries::theta() const {
    ValuedSeries s(ctx_, trunc());
    for (long i = 0; i <= trunc(); ++i) s.c_[i] = c_[i].mul_integer(i);
    return s;
}

ValuedSeries ValuedSeries::shift(long k) const {
    ValuedSeries s(ctx_, trunc());
    for (long i = 0; i + k <= trunc(); ++i)
        if (i + k >= 0) s.c_[i + k] = c_[i];
    return s;
}

ValuedSeries ValuedSeries::invert() const {
    const PadicScalar& a0 = c_[0];
    if (a0.is_zero_at_precision())
        throw NonUnitConstantTerm("series inverse needs an invertible constant term, got " +
                                  a0.to_string());
    PadicScalar inv0 = a0.invert();
    ValuedSeries g(ctx_, trunc());
    g.c_[0] = inv0;
    for (long n = 1; n <= trunc(); ++n) {
        PadicScalar s = PadicScalar::zero(ctx_);
        for (long j = 1; j <= n; ++j) s += c_[j] * g.c_[n - j];
        g.c_[n] = -(s * inv0);
    }
    return g;
}

namespace kernels {

namespace {

PadicScalar cauchy_coeff(const Ctx& ctx, const std::vector<PadicScalar>& a,
                         const std::vector<PadicScalar>& b, long n) {
    PadicScalar s = PadicScalar::zero(ctx);
    long lo = std::max<long>(0, n - (static_cast<long>(b.size()) - 1));
    long hi = std::min<long>(n, static_cast<long>(a.size()) - 1);
    for (long i = lo; i <= hi; ++i) s += a[i] * b[n - i];
    return s;
}

} // namespace

std::vector<PadicScalar> series_mul_serial(const Ctx& ctx,
                                           const std::vector<PadicScalar>& a,
                                           const std::vector<PadicScalar>& b) {
    long t = std::min(a.size(), b.size());
    std::vector<PadicScalar> out(t);
    for (long n = 0; n < t; ++n) out[n] = cauchy_coeff(ctx, a, b, n);
    return out;
}

std::vector<PadicScalar> series_mul_parallel(const Ctx& ctx,
                                             const std::vector<PadicScalar>& a,
                                             const std::vector<PadicScalar>& b) {
    long t = std::min(a.size(), b.size());
    std::vector<PadicScalar> out(t);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (long n = 0; n < t; ++n) out[n] = cauchy_coeff(ctx, a, b, n);
    return out;
}

std::vector<PadicScalar> series_mul(const Ctx& ctx, const std::vector<PadicScalar>& a,
                                    const std::vector<PadicScalar>& b, Exec policy) {
    bool parallel = false;
    switch (policy) {
        case Exec::Serial: parallel = false; break;
        case Exec::Parallel: parallel = true; break;
        case Exec::Auto:
#ifdef _OPENMP
            parallel = std::min(a.size(), b.size()) >= 64;
#endif
            break;
    }
    return parallel ? series_mul_parallel(ctx, a, b) : series_mul_serial(ctx, a, b);
}

} // namespace kernels

} // namespace pconn
