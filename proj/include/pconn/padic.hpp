#ifndef PCONN_PADIC_HPP
#define PCONN_PADIC_HPP

#include <gmpxx.h>

#include <memory>
#include <string>
#include <vector>

#include "pconn/errors.hpp"
#include "pconn/rational.hpp"
#include "pconn/val.hpp"

namespace pconn {

// Shared computation context: the prime p and the ambient absolute
// precision N. Power tables are built eagerly so lookups are safe from
// parallel sections.
class PadicContext {
public:
    PadicContext(unsigned long p, long precision);

    unsigned long p() const { return p_; }
    long precision() const { return n_; }

    // p^k for k >= 0. Cached up to 2N + 128, computed on the fly beyond.
    mpz_class pow(long k) const;

    bool compatible(const PadicContext& o) const {
        return p_ == o.p_ && n_ == o.n_;
    }

private:
    unsigned long p_;
    long n_;
    std::vector<mpz_class> cache_;
};

using Ctx = std::shared_ptr<const PadicContext>;

Ctx make_context(unsigned long p, long precision);

// Element of Q_p known to some absolute precision. Representation:
//   value = p^v * u with p not dividing u, u reduced mod p^(prec - v),
// where prec <= N is the effective absolute precision of this particular
// result (N for exact inputs; arithmetic lowers it by the usual
// capped-absolute rules, which is the per-result loss accounting).
// A scalar indistinguishable from zero at its precision carries only the
// floor: "zero_at_precision" with bound prec, printed as ">=prec".
class PadicScalar {
public:
    PadicScalar() = default;

    static PadicScalar zero(const Ctx& ctx) { return at_least(ctx, ctx->precision()); }
    static PadicScalar one(const Ctx& ctx) { return from_integer(ctx, 1); }
    static PadicScalar at_least(const Ctx& ctx, long floor);
    static PadicScalar from_integer(const Ctx& ctx, const mpz_class& n);
    static PadicScalar from_integer(const Ctx& ctx, long n) {
        return from_integer(ctx, mpz_class(n));
    }
    // den == 0 raises ZeroDenominator. p | den is fine (negative valuation).
    static PadicScalar from_rational(const Ctx& ctx, const mpz_class& num,
                                     const mpz_class& den);
    static PadicScalar from_rational(const Ctx& ctx, const Rational& r) {
        return from_rational(ctx, mpz_class(static_cast<long>(r.numerator())),
                             mpz_class(static_cast<long>(r.denominator())));
    }

    const Ctx& context() const { return ctx_; }

    bool is_zero_at_precision() const { return at_least_; }
    // Valuation as a Val: exact v, or the floor for zero-at-precision.
    Val valuation() const {
        return at_least_ ? Val::at_least(prec_) : Val::exact(v_);
    }
    // Exact valuation; caller must have checked is_zero_at_precision().
    long v() const;
    long precision() const { return prec_; }
    const mpz_class& unit() const { return u_; }

    PadicScalar operator-() const;
    PadicScalar operator+(const PadicScalar& o) const;
    PadicScalar operator-(const PadicScalar& o) const { return *this + (-o); }
    PadicScalar operator*(const PadicScalar& o) const;
    PadicScalar& operator+=(const PadicScalar& o) { return *this = *this + o; }
    PadicScalar& operator-=(const PadicScalar& o) { return *this = *this - o; }
    PadicScalar& operator*=(const PadicScalar& o) { return *this = *this * o; }

    // Multiplicative inverse. Relative precision is preserved, so the
    // absolute precision drops to prec - 2v. Inverting a scalar that is
    // zero at precision raises PrecisionExhausted.
    PadicScalar invert() const;
    PadicScalar operator/(const PadicScalar& o) const { return *this * o.invert(); }

    PadicScalar mul_integer(long k) const { return *this * from_integer(ctx_, k); }

    // True when a - b is zero at the common precision.
    friend bool eq_at_precision(const PadicScalar& a, const PadicScalar& b) {
        return (a - b).is_zero_at_precision();
    }

    // Canonical representative p^v * u as an integer; requires v >= 0.
    mpz_class integer_value() const;

    std::string to_string() const;

private:
    PadicScalar(Ctx ctx, bool at_least, long v, long prec, mpz_class u)
        : ctx_(std::move(ctx)), at_least_(at_least), v_(v), prec_(prec), u_(std::move(u)) {}
    static PadicScalar normalized(const Ctx& ctx, const mpz_class& value, long shift,
                                  long prec);
    void check_ctx(const PadicScalar& o) const;

    Ctx ctx_;
    bool at_least_ = true;
    long v_ = 0;
    long prec_ = 0;
    mpz_class u_ = 0;
};

// Valuation of an ordinary integer, exact in Z (no precision cap);
// returns a large sentinel for n = 0 callers must not hit.
long integer_valuation(unsigned long p, const mpz_class& n);

} // namespace pconn

#endif
