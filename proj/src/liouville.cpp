#include "pconn/liouville.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pconn {

GapNumber gap_number(const Ctx& ctx, int k) {
    if (k < 1) throw PrecisionTooSmall("gap index must be >= 1");
    std::vector<long> exps;
    long e = 1;
    for (int j = 1; j <= k; ++j) {
        if (e >= ctx->precision())
            throw PrecisionTooSmall("gap exponent " + std::to_string(e) +
                                    " not representable at precision " +
                                    std::to_string(ctx->precision()));
        exps.push_back(e);
        if (j == k) break;
        // e' = j * p^e; guard the magnitude before computing
        double bits = static_cast<double>(e) * std::log2(static_cast<double>(ctx->p()));
        if (bits > 48)
            throw PrecisionTooSmall("next gap exponent exceeds any usable precision");
        long next = j;
        for (long t = 0; t < e; ++t) next *= static_cast<long>(ctx->p());
        e = next;
    }
    mpz_class lam = 0;
    for (long ej : exps) lam += ctx->pow(ej);
    return GapNumber{std::move(exps), PadicScalar::from_integer(ctx, lam)};
}

namespace kernels {

namespace {

long scan_one(const PadicScalar& lambda, long m) {
    PadicScalar d = lambda - PadicScalar::from_integer(lambda.context(), m);
    if (d.is_zero_at_precision()) return SATURATED_SENTINEL;
    return d.v();
}

} // namespace

std::vector<long> valuation_scan_serial(const PadicScalar& lambda, long horizon) {
    std::vector<long> vals(horizon);
    for (long m = 1; m <= horizon; ++m) vals[m - 1] = scan_one(lambda, m);
    return vals;
}

std::vector<long> valuation_scan_parallel(const PadicScalar& lambda, long horizon) {
    std::vector<long> vals(horizon);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long m = 1; m <= horizon; ++m) vals[m - 1] = scan_one(lambda, m);
    return vals;
}

std::vector<long> valuation_scan(const PadicScalar& lambda, long horizon, Exec policy) {
    bool parallel = false;
    switch (policy) {
        case Exec::Serial: parallel = false; break;
        case Exec::Parallel: parallel = true; break;
        case Exec::Auto:
#ifdef _OPENMP
            parallel = horizon >= 128;
#endif
            break;
    }
    return parallel ? valuation_scan_parallel(lambda, horizon)
                    : valuation_scan_serial(lambda, horizon);
}

} // namespace kernels

TypeEstimate estimate_type(const PadicScalar& lambda, long horizon, Exec policy) {
    if (horizon < 1) throw PrecisionTooSmall("horizon must be >= 1");
    if (lambda.is_zero_at_precision())
        throw PrecisionExhausted("type of a scalar that is zero at precision");
    const Ctx& ctx = lambda.context();
    TypeEstimate out;
    out.horizon = horizon;
    std::vector<long> vals = kernels::valuation_scan(lambda, horizon, policy);
    for (long m = 1; m <= horizon; ++m) {
        long v = vals[m - 1];
        if (v == kernels::SATURATED_SENTINEL) {
            out.saturated.push_back(m);
            continue;
        }
        if (v < 1) continue;
        out.spikes.push_back({m, v});
        // significant iff p^v > (m+1)^2, checked exactly
        mpz_class rhs = mpz_class(m + 1) * (m + 1);
        if (v >= 0 && ctx->pow(v) > rhs) {
            out.significant.push_back({m, v});
            Rational ratio(v, m);
            if (!out.has_significant || ratio > out.observed_sup) out.observed_sup = ratio;
            out.has_significant = true;
        }
    }
    out.bound = std::exp2(-to_double(out.observed_sup) *
                          std::log2(static_cast<double>(ctx->p())));
    return out;
}

std::vector<Rational> liouville_ratio_profile(const PadicScalar& lambda, long horizon) {
    std::vector<long> vals = kernels::valuation_scan(lambda, horizon);
    long long acc = 0;
    if (!lambda.is_zero_at_precision())
        acc = lambda.v(); // j = 0 term
    else
        acc = lambda.precision();
    std::vector<Rational> ratios;
    ratios.reserve(horizon);
    for (long m = 1; m <= horizon; ++m) {
        long v = vals[m - 1];
        acc += (v == kernels::SATURATED_SENTINEL) ? lambda.context()->precision() : v;
        ratios.emplace_back(acc, m);
    }
    return ratios;
}

SlopeReport slope_criterion(const std::vector<Rational>& ratios, double margin) {
    SlopeReport rep{SlopeVerdict::PositiveTypeConsistent, 0.0, 0.0, 0.0, margin};
    if (ratios.empty()) return rep;
    size_t third = std::max<size_t>(1, ratios.size() / 3);
    double run = to_double(ratios[0]);
    for (size_t i = 0; i < third; ++i) run = std::max(run, to_double(ratios[i]));
    rep.early_max = run;
    rep.late_max = run;
    for (size_t i = third; i < ratios.size(); ++i)
        rep.late_max = std::max(rep.late_max, to_double(ratios[i]));
    rep.s_star = std::max(rep.early_max, rep.late_max);
    if (rep.late_max > rep.early_max + margin) rep.verdict = SlopeVerdict::LiouvilleSuspect;
    return rep;
}

SlopeReport slope_criterion(const PadicScalar& lambda, long horizon, double margin) {
    return slope_criterion(liouville_ratio_profile(lambda, horizon), margin);
}

namespace {

// type(0) = 1: the excluded m = 0 aside, v(0 - m) = v(m) never spikes.
TypeEstimate estimate_or_identity(const PadicScalar& lambda, long horizon, Exec policy) {
    if (lambda.is_zero_at_precision()) {
        TypeEstimate e;
        e.horizon = horizon;
        e.identical_at_precision = true;
        return e;
    }
    return estimate_type(lambda, horizon, policy);
}

} // namespace

ClassifyReport classify_exponents(const std::vector<PadicScalar>& exponents, long horizon,
                                  double threshold, Exec policy) {
    ClassifyReport rep;
    rep.threshold = threshold;
    for (const auto& lam : exponents) {
        TypeEstimate e = estimate_or_identity(-lam, horizon, policy);
        if (e.bound < threshold) rep.one_sided_suspect = true;
        rep.one_sided.push_back(std::move(e));
    }
    int n = static_cast<int>(exponents.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            TypeEstimate e =
                estimate_or_identity(exponents[i] - exponents[j], horizon, policy);
            if (e.bound < threshold) rep.pairwise_suspect = true;
            rep.pairwise.push_back({{i, j}, std::move(e)});
        }
    return rep;
}

} // namespace pconn
