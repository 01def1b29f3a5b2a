#include "pconn/padic.hpp"

#include <sstream>

namespace pconn {

PadicContext::PadicContext(unsigned long p, long precision) : p_(p), n_(precision) {
    if (p < 2) throw PrecisionTooSmall("prime must be >= 2");
    if (precision < 1) throw PrecisionTooSmall("precision must be >= 1");
    long top = 2 * n_ + 128;
    cache_.reserve(top + 1);
    mpz_class v = 1;
    for (long k = 0; k <= top; ++k) {
        cache_.push_back(v);
        v *= static_cast<unsigned long>(p_);
    }
}

mpz_class PadicContext::pow(long k) const {
    if (k < 0) throw PrecisionTooSmall("negative power of p requested");
    if (k < static_cast<long>(cache_.size())) return cache_[k];
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), p_, static_cast<unsigned long>(k));
    return r;
}

Ctx make_context(unsigned long p, long precision) {
    return std::make_shared<const PadicContext>(p, precision);
}

long integer_valuation(unsigned long p, const mpz_class& n) {
    if (n == 0) return 1L << 40;
    mpz_class q, r = n;
    long v = 0;
    while (mpz_divisible_ui_p(r.get_mpz_t(), p)) {
        mpz_divexact_ui(q.get_mpz_t(), r.get_mpz_t(), p);
        r = q;
        ++v;
    }
    return v;
}

void PadicScalar::check_ctx(const PadicScalar& o) const {
    if (!ctx_ || !o.ctx_) throw MixedContext("scalar without context");
    if (ctx_ == o.ctx_) return;
    if (!ctx_->compatible(*o.ctx_))
        throw MixedContext("operands belong to different (p, N) contexts");
}

PadicScalar PadicScalar::at_least(const Ctx& ctx, long floor) {
    long f = std::min(floor, ctx->precision());
    return PadicScalar(ctx, true, 0, f, 0);
}

// Reduce p^shift * value to canonical form at absolute precision prec.
PadicScalar PadicScalar::normalized(const Ctx& ctx, const mpz_class& value, long shift,
                                    long prec) {
    prec = std::min(prec, ctx->precision());
    if (value == 0) return at_least(ctx, prec);
    long t = integer_valuation(ctx->p(), value);
    long v = shift + t;
    if (v >= prec) return at_least(ctx, prec);
    long digits = prec - v;
    mpz_class u;
    mpz_divexact(u.get_mpz_t(), value.get_mpz_t(), ctx->pow(t).get_mpz_t());
    mpz_class m = ctx->pow(digits);
    mpz_mod(u.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t());
    if (u == 0) return at_least(ctx, prec);
    // mod can reintroduce p-divisibility only if digits were exhausted above
    long extra = integer_valuation(ctx->p(), u);
    if (extra > 0) return normalized(ctx, u, v, prec);
    return PadicScalar(ctx, false, v, prec, std::move(u));
}

PadicScalar PadicScalar::from_integer(const Ctx& ctx, const mpz_class& n) {
    return normalized(ctx, n, 0, ctx->precision());
}

PadicScalar PadicScalar::from_rational(const Ctx& ctx, const mpz_class& num,
                                       const mpz_class& den) {
    if (den == 0) throw ZeroDenominator("rational with zero denominator");
    if (num == 0) return zero(ctx);
    long a = integer_valuation(ctx->p(), num);
    long b = integer_valuation(ctx->p(), den);
    long v = a - b;
    mpz_class nu, du;
    mpz_divexact(nu.get_mpz_t(), num.get_mpz_t(), ctx->pow(a).get_mpz_t());
    mpz_divexact(du.get_mpz_t(), den.get_mpz_t(), ctx->pow(b).get_mpz_t());
    long digits = ctx->precision() - v;
    if (digits <= 0) return at_least(ctx, ctx->precision());
    mpz_class m = ctx->pow(digits);
    mpz_class dinv;
    if (mpz_invert(dinv.get_mpz_t(), du.get_mpz_t(), m.get_mpz_t()) == 0)
        throw ZeroDenominator("denominator not invertible mod p^k");
    mpz_class u = nu * dinv;
    mpz_mod(u.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t());
    return normalized(ctx, u, v, ctx->precision());
}

long PadicScalar::v() const {
    if (at_least_)
        throw PrecisionExhausted("valuation of a scalar that is zero at precision " +
                                 std::to_string(prec_));
    return v_;
}

PadicScalar PadicScalar::operator-() const {
    if (at_least_) return *this;
    mpz_class nu = ctx_->pow(prec_ - v_) - u_;
    return PadicScalar(ctx_, false, v_, prec_, std::move(nu));
}

PadicScalar PadicScalar::operator+(const PadicScalar& o) const {
    check_ctx(o);
    if (at_least_ && o.at_least_) return at_least(ctx_, std::min(prec_, o.prec_));
    if (at_least_) return o + *this;
    if (o.at_least_) {
        // adding an unknown below p^o.prec_ caps the precision there
        long prec = std::min(prec_, o.prec_);
        if (v_ >= prec) return at_least(ctx_, prec);
        mpz_class m = ctx_->pow(prec - v_);
        mpz_class u = u_;
        mpz_mod(u.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t());
        return normalized(ctx_, u, v_, prec);
    }
    long prec = std::min(prec_, o.prec_);
    long m = std::min(v_, o.v_);
    mpz_class s = u_ * ctx_->pow(v_ - m) + o.u_ * ctx_->pow(o.v_ - m);
    return normalized(ctx_, s, m, prec);
}

PadicScalar PadicScalar::operator*(const PadicScalar& o) const {
    check_ctx(o);
    if (at_least_ || o.at_least_) {
        long fa = at_least_ ? prec_ : v_;
        long fb = o.at_least_ ? o.prec_ : o.v_;
        return at_least(ctx_, fa + fb);
    }
    long prec = std::min(prec_ + o.v_, o.prec_ + v_);
    mpz_class u = u_ * o.u_;
    return normalized(ctx_, u, v_ + o.v_, prec);
}

PadicScalar PadicScalar::invert() const {
    if (at_least_)
        throw PrecisionExhausted("scalar is zero at precision " + std::to_string(prec_) +
                                 "; cannot invert");
    long rel = prec_ - v_;
    mpz_class m = ctx_->pow(rel);
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), u_.get_mpz_t(), m.get_mpz_t()) == 0)
        throw ZeroDenominator("unit not invertible (internal)");
    return PadicScalar(ctx_, false, -v_, prec_ - 2 * v_, std::move(inv));
}

mpz_class PadicScalar::integer_value() const {
    if (at_least_) return 0;
    if (v_ < 0)
        throw PrecisionExhausted("negative-valuation scalar has no integer representative");
    return ctx_->pow(v_) * u_;
}

std::string PadicScalar::to_string() const {
    std::ostringstream os;
    if (at_least_) {
        os << "O(p^" << prec_ << ")";
        return os.str();
    }
    os << "p^" << v_ << "*" << u_.get_str(10) << " (mod p^" << prec_ << ")";
    return os.str();
}

} // namespace pconn
