#include "pconn/hensel.hpp"

namespace pconn {

namespace {

PadicScalar eval_poly(const std::vector<PadicScalar>& c, const PadicScalar& x) {
    PadicScalar acc = PadicScalar::zero(x.context());
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::vector<PadicScalar> derivative(const Ctx& ctx, const std::vector<PadicScalar>& c) {
    std::vector<PadicScalar> d;
    for (size_t i = 1; i < c.size(); ++i)
        d.push_back(c[i].mul_integer(static_cast<long>(i)));
    if (d.empty()) d.push_back(PadicScalar::zero(ctx));
    return d;
}

} // namespace

HenselResult hensel_zp_roots(const Ctx& ctx, const std::vector<PadicScalar>& coeffs) {
    if (coeffs.empty()) throw UnsupportedExponentField("empty polynomial");
    for (const auto& c : coeffs)
        if (!c.is_zero_at_precision() && c.v() < 0)
            throw UnsupportedExponentField(
                "polynomial coefficient has negative valuation; roots need not lie in Z_p");
    const PadicScalar& lead = coeffs.back();
    if (lead.is_zero_at_precision() || lead.v() != 0)
        throw UnsupportedExponentField("polynomial is not monic up to a unit");

    unsigned long p = ctx->p();
    auto residue = [&](const PadicScalar& s) -> unsigned long {
        if (s.is_zero_at_precision() || s.v() > 0) return 0;
        mpz_class r;
        mpz_mod_ui(r.get_mpz_t(), s.unit().get_mpz_t(), p);
        return r.get_ui();
    };

    std::vector<PadicScalar> deriv = derivative(ctx, coeffs);
    HenselResult out;
    for (unsigned long a = 0; a < p; ++a) {
        // evaluate mod p using plain residues
        unsigned long fa = 0, pw = 1;
        unsigned long da = 0, dw = 1;
        for (size_t i = 0; i < coeffs.size(); ++i) {
            fa = (fa + residue(coeffs[i]) * pw) % p;
            pw = (pw * a) % p;
        }
        for (size_t i = 0; i < deriv.size(); ++i) {
            da = (da + residue(deriv[i]) * dw) % p;
            dw = (dw * a) % p;
        }
        if (fa != 0) continue;
        if (da == 0) {
            out.unresolved.push_back(a);
            continue;
        }
        // Newton iteration; value valuation doubles per step
        PadicScalar x = PadicScalar::from_integer(ctx, static_cast<long>(a));
        for (int it = 0; it < 64; ++it) {
            PadicScalar fx = eval_poly(coeffs, x);
            if (fx.is_zero_at_precision()) break;
            x = x - fx / eval_poly(deriv, x);
        }
        out.roots.push_back(x);
    }
    return out;
}

HenselResult hensel_zp_roots(const Ctx& ctx, const std::vector<Rational>& coeffs) {
    std::vector<PadicScalar> c;
    c.reserve(coeffs.size());
    for (const auto& r : coeffs) c.push_back(PadicScalar::from_rational(ctx, r));
    return hensel_zp_roots(ctx, c);
}

} // namespace pconn
