#ifndef PCONN_CONNECTION_HPP
#define PCONN_CONNECTION_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pconn/liouville.hpp"
#include "pconn/matrix.hpp"
#include "pconn/padic.hpp"

namespace pconn {

// Degree-indexed list of coefficient matrices. Connection matrices are
// polynomial data (degrees beyond the stored range are exactly zero);
// solution series are truncated (degrees beyond the range are unknown).
using SeriesMat = std::vector<Mat>;

SeriesMat smat_zero(const Ctx& ctx, int rows, int cols, long trunc);
// Product with every output degree <= out_trunc; missing input degrees
// count as zero, so the caller owns the truncation semantics.
SeriesMat smat_mul(const SeriesMat& a, const SeriesMat& b, long out_trunc);
SeriesMat smat_add(const SeriesMat& a, const SeriesMat& b, long out_trunc);
SeriesMat smat_sub(const SeriesMat& a, const SeriesMat& b, long out_trunc);
SeriesMat smat_theta(const SeriesMat& u);
bool smat_is_zero_at_precision(const SeriesMat& s);
long smat_min_precision(const SeriesMat& s);
PadicScalar smat_det_constant_term(const SeriesMat& s);

// Rank-r module over truncated series with the logarithmic derivation
// theta = +z d/dz. Sections are column coordinate vectors a(z); the
// connection acts by a |-> theta(a) + A(z) a. Exponents are the residue
// eigenvalues, i.e. of A(0).
//
// Sign conventions used throughout: the one-sided non-Liouville
// hypothesis asks type(-lambda_i) > 0 (note the minus), the two-sided
// one asks type(lambda_i - lambda_j) > 0 for all pairs.
struct RegularConnection {
    Ctx ctx;
    int rank = 0;
    SeriesMat a; // a[d] is the degree-d coefficient matrix, exact data
    std::optional<std::vector<PadicScalar>> declared_exponents;

    long trunc() const { return static_cast<long>(a.size()) - 1; }
    const Mat& residue() const { return a[0]; }
};

RegularConnection make_connection(const Ctx& ctx, SeriesMat a,
                                  std::optional<std::vector<PadicScalar>> declared = {});

// Scalar rank-1 connection z^n O: matrix is the constant n.
RegularConnection twist(const RegularConnection& m, long n);

// Internal hom with sections T: M -> N, phi(T) = B T - T A + theta(T).
// Exponents are mu_j - lambda_i.
RegularConnection hom_connection(const RegularConnection& m, const RegularConnection& n);
RegularConnection dual(const RegularConnection& m);
RegularConnection tensor(const RegularConnection& m, const RegularConnection& n);

// Integer membership at precision: the scalar counts as the integer n,
// |n| <= window, when v(x - n) >= N/2.
std::optional<long> integer_in_window(const PadicScalar& x, long window);
bool near_equal(const PadicScalar& x, const PadicScalar& y);

enum class ExponentSource { Declared, Triangular, Hensel };

struct ExponentReport {
    std::vector<PadicScalar> exponents; // with multiplicity, size = rank
    ExponentSource source = ExponentSource::Declared;
    long window = 64;
    std::vector<std::optional<long>> integer_in_window_hits; // per exponent
    // (i, j, n): lambda_i - lambda_j is the integer n at precision,
    // |n| <= window. n = 0 entries witness equal-at-precision pairs.
    std::vector<std::tuple<int, int, long>> integer_differences;
    bool weakly_prepared = true; // no nonzero integer difference in window
};

// Eigenvalues of the residue: declared ones win; else the diagonal of a
// triangular residue; else Hensel lifting of the characteristic
// polynomial (simple roots only: UnresolvedFactor / UnsupportedExponentField
// when the spectrum cannot be certified).
ExponentReport exponents(const RegularConnection& m, long window = 64);

// No difference lambda_i - lambda_j equals -(k'+1) for any k' >= k
// (within the window): the Sylvester operators at degrees > k stay
// invertible, so degree-k data determines everything above.
bool k_weakly_prepared(const ExponentReport& rep, long k);

// Truncates the matrix at degree k. Requires (k+1)-weak preparedness.
RegularConnection polynomial_model(const RegularConnection& m, long k, long window = 64);

struct CohomologyReport {
    long h0 = 0;
    long h1 = 0;
    long n_used = 0; // smallest n with no exponent equal to -m for m >= n
};

// Kernel/cokernel dimensions of the connection map. The operator is an
// isomorphism beyond degree n_used, so the truncated square operator on
// M / z^n M computes both dimensions.
CohomologyReport cohomology_dims(const RegularConnection& m, long window = 64);

// The operator theta + A on coordinates truncated mod z^n, as an
// (n*rank) x (n*rank) block lower-triangular matrix with diagonal
// blocks A(0) + m I.
Mat truncated_operator(const RegularConnection& m, long n);

enum class Verdict { Convergent, DivergenceSuspect, PrecisionExhausted };

std::string verdict_name(Verdict v);

struct ProfilePoint {
    long degree;
    Val valuation; // min entry valuation of the degree-d coefficient
};

struct WindowSlope {
    int window;
    long degree_begin, degree_end; // half-open
    double slope; // max over the window of (c0 - v(a_i)) / i
};

inline constexpr int kCertificateWindows = 6;
inline constexpr double kDivergenceMargin = 0.5;

// Convergence evidence for a computed solution series.
//  - Convergent(slope s*, intercept c0): v(a_i) >= c0 - s*. i for every
//    computed degree; s* is the slope of the final edge of the lower
//    convex hull of the valuation profile (the observed decay rate).
//  - DivergenceSuspect: a window in the late half of the profile shows a
//    slope exceeding the running max of all earlier windows by more than
//    kDivergenceMargin; `slope` then reports the offending window slope.
//  - PrecisionExhausted(at): coefficients lost all usable precision.
// `loss` is N minus the smallest effective precision across the residual
// of the defining identity: the residual entries vanish to at least
// precision N - loss.
struct SolveCertificate {
    Verdict verdict = Verdict::Convergent;
    Rational slope = Rational(0);
    Rational intercept = Rational(0);
    std::vector<ProfilePoint> profile;
    std::vector<WindowSlope> window_slopes;
    long loss = 0;
    long exhausted_at = -1;
};

SolveCertificate certify_profile(const std::vector<ProfilePoint>& profile, long loss,
                                 long exhausted_at);

// Horizontal section transport: solves A(z) U + theta(U) = U A(0) with
// U(0) = I degree by degree; degree i requires the Sylvester operator
// X |-> iX + A(0)X - XA(0) to be invertible (weak preparedness).
struct FuchsResult {
    SeriesMat u;
    SeriesMat residual; // A U + theta(U) - U A(0), zero at precision
    SolveCertificate cert;
};

FuchsResult fuchs_solution(const RegularConnection& m, long deg, long window = 64);

// Solves theta(a) + A(z) a = b for a coordinate column a given b.
// Degree m divides by A(0) + mI, so no exponent may sit in {0,-1,-2,...}
// within the window (twist first otherwise). Divergence of the solution
// for Liouville-close exponents is the phenomenon the certificate
// reports; see the windowed slopes.
struct ClarkResult {
    SeriesMat a;        // r x 1 columns per degree
    SeriesMat residual; // theta(a) + A a - b
    SolveCertificate cert;
};

ClarkResult clark_solve(const RegularConnection& m, const SeriesMat& b, long deg,
                        long window = 64);

// Independent reference: assembles the full (deg+1)r square system for
// theta(a) + A a = b and solves it in one shot.
SeriesMat dense_oracle_solve(const RegularConnection& m, const SeriesMat& b, long deg);

// Reconstructs the isomorphism T with theta(T) + B T - T A = 0 and
// T == I mod z^(k+1) between connections that agree mod z^(k+1)
// (NotCongruentModZk otherwise) with (k+1)-weakly prepared exponents
// (NotKWeaklyPrepared otherwise).
struct GaugeResult {
    SeriesMat t;
    SeriesMat residual; // theta(T) + B T - T A
    SolveCertificate cert;
    bool det_constant_unit = false;
};

GaugeResult gauge_equivalence(const RegularConnection& a, const RegularConnection& b,
                              long k, long deg, long window = 64);

// theta(T) + B T - T A for T mapping coordinates of `from` (matrix A)
// into coordinates of `to` (matrix B); zero at precision iff T
// intertwines the connections.
SeriesMat intertwiner_residual(const RegularConnection& to, const RegularConnection& from,
                               const SeriesMat& t, long out_trunc);

// One shearing move: passes to the lattice generated by z * (generalized
// c-eigenblock) and the rest, shifting the exponent c to c + 1 and
// leaving the others. The transform T = C diag(z I_k, I) satisfies
// theta(T) + A T - T A' = 0. Truncation drops by one.
struct ShearStep {
    RegularConnection out;
    SeriesMat transform;
    PadicScalar sheared_exponent;
    int multiplicity = 0;
};

ShearStep shear_step(const RegularConnection& m, const PadicScalar& c, long window = 64);

// Iterates shear_step until no pair of exponents differs by a nonzero
// integer in the window. Each step shears the largest exponent that has
// an integer-larger partner, which never merges eigenvalues needlessly.
struct ShearReport {
    RegularConnection out;
    SeriesMat transform; // accumulated, original coords <- final coords
    long steps = 0;
    std::vector<PadicScalar> final_exponents;
};

ShearReport shear_to_prepared(const RegularConnection& m, long window = 64,
                              long max_steps = 64);

} // namespace pconn

#endif
