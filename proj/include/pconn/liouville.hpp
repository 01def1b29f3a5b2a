#ifndef PCONN_LIOUVILLE_HPP
#define PCONN_LIOUVILLE_HPP

#include <vector>

#include "pconn/padic.hpp"
#include "pconn/series.hpp"

namespace pconn {

// lambda = sum of p^{e_j} over the gap exponents e_1 = 1,
// e_{j+1} = j * p^{e_j}. The one-sided Liouville landmark: the partial
// sums approximate lambda so well that v(lambda - m) spikes to e_{j+1}
// at m = sum of the first j powers, while -lambda stays far from the
// nonnegative integers.
struct GapNumber {
    std::vector<long> exponents;
    PadicScalar lambda;
};

// Requires p^{e_k} representable at the context precision
// (PrecisionTooSmall otherwise).
GapNumber gap_number(const Ctx& ctx, int k);

struct TypeSpike {
    long m;
    long v; // v(lambda - m)
};

// Horizon scan of v(lambda - m) for 1 <= m <= M. The bound p^{-sup} only
// counts *significant* spikes, i.e. v > 2 log_p(m+1): generic integers
// already produce v up to about log_p m, and counting those would make
// every estimate spuriously small (and horizon-dependent). Significance
// is a per-spike test, so enlarging M can only add spikes: the bound is
// monotone non-increasing in M by construction.
struct TypeEstimate {
    long horizon = 0;
    Rational observed_sup = Rational(0); // max v/m over significant spikes
    bool has_significant = false;
    double bound = 1.0; // p^{-observed_sup}, upper bound for the type
    std::vector<TypeSpike> spikes;      // every m with v >= 1
    std::vector<TypeSpike> significant; // the ones that count
    std::vector<long> saturated; // m where lambda - m is zero at precision
    // Set when the input itself was zero at precision (exactly-equal
    // exponent pairs): v(0 - m) = v(m) never spikes, bound 1.
    bool identical_at_precision = false;
};

TypeEstimate estimate_type(const PadicScalar& lambda, long horizon,
                           Exec policy = Exec::Auto);

namespace kernels {
// vals[m-1] = v(lambda - m), or SATURATED_SENTINEL when lambda - m is
// zero at precision. Independent per m; parallel path splits the range.
inline constexpr long SATURATED_SENTINEL = -(1L << 40);
std::vector<long> valuation_scan_serial(const PadicScalar& lambda, long horizon);
std::vector<long> valuation_scan_parallel(const PadicScalar& lambda, long horizon);
std::vector<long> valuation_scan(const PadicScalar& lambda, long horizon,
                                 Exec policy = Exec::Auto);
} // namespace kernels

// Ratios V_m / m for V_m = sum of v(lambda - j), 0 <= j <= m (saturated
// terms clamped to the precision). Bounded ratios certify positive type;
// a growing running max is the divergence fingerprint.
std::vector<Rational> liouville_ratio_profile(const PadicScalar& lambda, long horizon);

enum class SlopeVerdict { PositiveTypeConsistent, LiouvilleSuspect };

struct SlopeReport {
    SlopeVerdict verdict;
    double s_star;    // max V_m / m over the whole horizon
    double early_max; // running max over the first third
    double late_max;  // running max over the rest
    double margin;
};

// Suspect when the running max of the ratio data grows by more than
// `margin` after the first third of the horizon.
SlopeReport slope_criterion(const std::vector<Rational>& ratios, double margin = 0.5);
SlopeReport slope_criterion(const PadicScalar& lambda, long horizon, double margin = 0.5);

// Exponent hygiene for connections: the one-sided hypothesis needs
// type(-lambda_i) > 0 for every exponent, the two-sided one
// type(lambda_i - lambda_j) > 0 for every pair. An estimate counts as
// suspect when its bound drops below the threshold.
struct ClassifyReport {
    double threshold = 0.5;
    std::vector<TypeEstimate> one_sided;                      // for -lambda_i
    std::vector<std::pair<std::pair<int, int>, TypeEstimate>> pairwise; // (i, j), i != j
    bool one_sided_suspect = false;
    bool pairwise_suspect = false;
};

ClassifyReport classify_exponents(const std::vector<PadicScalar>& exponents,
                                  long horizon, double threshold = 0.5,
                                  Exec policy = Exec::Auto);

} // namespace pconn

#endif
