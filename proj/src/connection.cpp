#include "pconn/connection.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "pconn/errors.hpp"
#include "pconn/hensel.hpp"

namespace pconn {

namespace {

constexpr long kBudgetHeadroom = 64;

Mat coeff_or_zero(const SeriesMat& s, long d, const Ctx& ctx, int rows, int cols) {
    if (d >= 0 && d < static_cast<long>(s.size())) return s[d];
    return Mat::zeros(ctx, rows, cols);
}

// Column-major vectorisation, so that
//   (I (x) P) vec(X) = vec(P X)  and  (Q^T (x) I) vec(X) = vec(X Q).
Mat vec_col(const Mat& x) {
    Mat v(x.context(), x.rows() * x.cols(), 1);
    for (int j = 0; j < x.cols(); ++j)
        for (int i = 0; i < x.rows(); ++i) v.at(j * x.rows() + i, 0) = x.at(i, j);
    return v;
}

Mat unvec_col(const Mat& v, int rows, int cols) {
    Mat x(v.context(), rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) x.at(i, j) = v.at(j * rows + i, 0);
    return x;
}

// X |-> B0 X - X A0 as a matrix on column-major vec.
Mat sylvester_base(const Mat& b0, const Mat& a0) {
    const Ctx& ctx = b0.context();
    return kronecker(Mat::identity(ctx, a0.rows()), b0) -
           kronecker(a0.transpose(), Mat::identity(ctx, b0.rows()));
}

// A coefficient matrix whose entries all sit below the precision floor
// carries no usable digits: the recursion has to stop.
bool mat_exhausted(const Mat& x) {
    long min_prec = std::numeric_limits<long>::max();
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) {
            const PadicScalar& e = x.at(i, j);
            if (!e.is_zero_at_precision()) return false;
            min_prec = std::min(min_prec, e.precision());
        }
    return min_prec <= 0;
}

std::vector<ProfilePoint> valuation_profile(const SeriesMat& s) {
    std::vector<ProfilePoint> prof;
    prof.reserve(s.size());
    for (long d = 0; d < static_cast<long>(s.size()); ++d)
        prof.push_back({d, s[d].min_valuation()});
    return prof;
}

long residual_loss(const Ctx& ctx, const SeriesMat& residual) {
    return std::max(0L, ctx->precision() - smat_min_precision(residual));
}

// --- polynomial helpers for the characteristic polynomial -------------

using Poly = std::vector<PadicScalar>; // lowest degree first

Poly poly_add(const Ctx& ctx, const Poly& a, const Poly& b) {
    Poly out(std::max(a.size(), b.size()), PadicScalar::zero(ctx));
    for (size_t i = 0; i < a.size(); ++i) out[i] = out[i] + a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] = out[i] + b[i];
    return out;
}

Poly poly_mul(const Ctx& ctx, const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, PadicScalar::zero(ctx));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
    return out;
}

// det(x I - A), monic, by Laplace expansion with a subset DP over
// columns: O(2^r r) polynomial products, no division.
Poly char_poly(const Mat& a) {
    const Ctx& ctx = a.context();
    int r = a.rows();
    std::vector<Poly> entry(static_cast<size_t>(r) * r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            Poly p{-a.at(i, j)};
            if (i == j) p.push_back(PadicScalar::one(ctx));
            entry[static_cast<size_t>(i) * r + j] = std::move(p);
        }
    std::vector<Poly> dp(1u << r);
    dp[0] = Poly{PadicScalar::one(ctx)};
    for (unsigned mask = 1; mask < (1u << r); ++mask) {
        int k = std::popcount(mask); // submatrix rows 0..k-1, columns = mask
        Poly acc; // expanded along row k-1
        int pos = 0;
        for (int j = 0; j < r; ++j) {
            if (!(mask & (1u << j))) continue;
            Poly term = poly_mul(ctx, entry[static_cast<size_t>(k - 1) * r + j],
                                 dp[mask ^ (1u << j)]);
            if ((k - 1 + pos) % 2 != 0)
                for (auto& c : term) c = -c;
            acc = acc.empty() ? std::move(term) : poly_add(ctx, acc, term);
            ++pos;
        }
        dp[mask] = std::move(acc);
    }
    return dp[(1u << r) - 1];
}

bool strictly_lower_zero(const Mat& a) {
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < i; ++j)
            if (!a.at(i, j).is_zero_at_precision()) return false;
    return true;
}

Mat mat_pow(const Mat& a, int e) {
    Mat out = Mat::identity(a.context(), a.rows());
    for (int i = 0; i < e; ++i) out = out * a;
    return out;
}

} // namespace

// --- series-matrix helpers ---------------------------------------------

SeriesMat smat_zero(const Ctx& ctx, int rows, int cols, long trunc) {
    SeriesMat s;
    s.reserve(static_cast<size_t>(trunc) + 1);
    for (long d = 0; d <= trunc; ++d) s.push_back(Mat::zeros(ctx, rows, cols));
    return s;
}

SeriesMat smat_mul(const SeriesMat& a, const SeriesMat& b, long out_trunc) {
    const Ctx& ctx = a.at(0).context();
    int rows = a[0].rows(), cols = b.at(0).cols();
    SeriesMat out = smat_zero(ctx, rows, cols, out_trunc);
    for (long d = 0; d <= out_trunc; ++d) {
        Mat acc = Mat::zeros(ctx, rows, cols);
        long jmax = std::min<long>(d, static_cast<long>(a.size()) - 1);
        for (long j = 0; j <= jmax; ++j) {
            if (d - j >= static_cast<long>(b.size())) continue;
            acc = acc + a[j] * b[d - j];
        }
        out[d] = acc;
    }
    return out;
}

SeriesMat smat_add(const SeriesMat& a, const SeriesMat& b, long out_trunc) {
    const Ctx& ctx = a.at(0).context();
    int rows = a[0].rows(), cols = a[0].cols();
    SeriesMat out;
    out.reserve(static_cast<size_t>(out_trunc) + 1);
    for (long d = 0; d <= out_trunc; ++d)
        out.push_back(coeff_or_zero(a, d, ctx, rows, cols) +
                      coeff_or_zero(b, d, ctx, rows, cols));
    return out;
}

SeriesMat smat_sub(const SeriesMat& a, const SeriesMat& b, long out_trunc) {
    const Ctx& ctx = a.at(0).context();
    int rows = a[0].rows(), cols = a[0].cols();
    SeriesMat out;
    out.reserve(static_cast<size_t>(out_trunc) + 1);
    for (long d = 0; d <= out_trunc; ++d)
        out.push_back(coeff_or_zero(a, d, ctx, rows, cols) -
                      coeff_or_zero(b, d, ctx, rows, cols));
    return out;
}

SeriesMat smat_theta(const SeriesMat& u) {
    SeriesMat out;
    out.reserve(u.size());
    for (long d = 0; d < static_cast<long>(u.size()); ++d)
        out.push_back(u[d].scaled(PadicScalar::from_integer(u[d].context(), d)));
    return out;
}

bool smat_is_zero_at_precision(const SeriesMat& s) {
    for (const Mat& m : s)
        if (!m.is_zero_at_precision()) return false;
    return true;
}

long smat_min_precision(const SeriesMat& s) {
    long p = std::numeric_limits<long>::max();
    for (const Mat& m : s) p = std::min(p, m.min_entry_precision());
    return p;
}

PadicScalar smat_det_constant_term(const SeriesMat& s) { return determinant(s.at(0)); }

// --- connection constructors -------------------------------------------

RegularConnection make_connection(const Ctx& ctx, SeriesMat a,
                                  std::optional<std::vector<PadicScalar>> declared) {
    if (a.empty()) throw std::invalid_argument("connection needs a degree-0 coefficient");
    int r = a[0].rows();
    for (const Mat& m : a)
        if (m.rows() != r || m.cols() != r)
            throw std::invalid_argument("connection coefficients must be square of equal rank");
    if (declared && static_cast<int>(declared->size()) != r)
        throw std::invalid_argument("declared exponent count differs from rank");
    RegularConnection c;
    c.ctx = ctx;
    c.rank = r;
    c.a = std::move(a);
    c.declared_exponents = std::move(declared);
    return c;
}

RegularConnection twist(const RegularConnection& m, long n) {
    RegularConnection out = m;
    out.a[0] = out.a[0].plus_diagonal(PadicScalar::from_integer(m.ctx, n));
    if (out.declared_exponents) {
        PadicScalar shift = PadicScalar::from_integer(m.ctx, n);
        for (auto& e : *out.declared_exponents) e = e + shift;
    }
    return out;
}

RegularConnection hom_connection(const RegularConnection& m, const RegularConnection& n) {
    if (!m.ctx->compatible(*n.ctx))
        throw MixedContext("hom of connections over different contexts");
    const Ctx& ctx = m.ctx;
    long trunc = std::min(m.trunc(), n.trunc());
    Mat ia = Mat::identity(ctx, m.rank), ib = Mat::identity(ctx, n.rank);
    SeriesMat h;
    h.reserve(static_cast<size_t>(trunc) + 1);
    for (long d = 0; d <= trunc; ++d)
        h.push_back(kronecker(ia, n.a[d]) - kronecker(m.a[d].transpose(), ib));
    std::optional<std::vector<PadicScalar>> declared;
    if (m.declared_exponents && n.declared_exponents) {
        declared.emplace();
        for (const auto& la : *m.declared_exponents)
            for (const auto& mu : *n.declared_exponents) declared->push_back(mu - la);
    }
    return make_connection(ctx, std::move(h), std::move(declared));
}

RegularConnection dual(const RegularConnection& m) {
    SeriesMat triv = smat_zero(m.ctx, 1, 1, m.trunc());
    std::vector<PadicScalar> zero_exp{PadicScalar::from_integer(m.ctx, 0)};
    return hom_connection(m, make_connection(m.ctx, std::move(triv), zero_exp));
}

RegularConnection tensor(const RegularConnection& m, const RegularConnection& n) {
    if (!m.ctx->compatible(*n.ctx))
        throw MixedContext("tensor of connections over different contexts");
    const Ctx& ctx = m.ctx;
    long trunc = std::min(m.trunc(), n.trunc());
    Mat ia = Mat::identity(ctx, m.rank), ib = Mat::identity(ctx, n.rank);
    SeriesMat h;
    h.reserve(static_cast<size_t>(trunc) + 1);
    for (long d = 0; d <= trunc; ++d)
        h.push_back(kronecker(m.a[d], ib) + kronecker(ia, n.a[d]));
    std::optional<std::vector<PadicScalar>> declared;
    if (m.declared_exponents && n.declared_exponents) {
        declared.emplace();
        for (const auto& la : *m.declared_exponents)
            for (const auto& mu : *n.declared_exponents) declared->push_back(la + mu);
    }
    return make_connection(ctx, std::move(h), std::move(declared));
}

// --- exponents -----------------------------------------------------------

bool near_equal(const PadicScalar& x, const PadicScalar& y) {
    PadicScalar d = x - y;
    if (d.is_zero_at_precision()) return true;
    return 2 * d.v() >= x.context()->precision();
}

std::optional<long> integer_in_window(const PadicScalar& x, long window) {
    const Ctx& ctx = x.context();
    for (long n = 0; n <= window; ++n) {
        if (near_equal(x, PadicScalar::from_integer(ctx, n))) return n;
        if (n > 0 && near_equal(x, PadicScalar::from_integer(ctx, -n))) return -n;
    }
    return std::nullopt;
}

ExponentReport exponents(const RegularConnection& m, long window) {
    const Ctx& ctx = m.ctx;
    ExponentReport rep;
    rep.window = window;
    if (m.declared_exponents) {
        rep.exponents = *m.declared_exponents;
        rep.source = ExponentSource::Declared;
    } else {
        const Mat& a0 = m.residue();
        bool lower_clear = strictly_lower_zero(a0);
        bool upper_clear = strictly_lower_zero(a0.transpose());
        if (lower_clear || upper_clear) {
            for (int i = 0; i < m.rank; ++i) rep.exponents.push_back(a0.at(i, i));
            rep.source = ExponentSource::Triangular;
        } else {
            if (m.rank > 12)
                throw UnsupportedExponentField(
                    "rank too large for characteristic polynomial extraction; "
                    "declare exponents explicitly");
            HenselResult h = hensel_zp_roots(ctx, char_poly(a0));
            if (!h.unresolved.empty()) {
                std::ostringstream os;
                os << "characteristic polynomial of the residue has a repeated "
                      "root mod p at residue";
                for (unsigned long u : h.unresolved) os << ' ' << u;
                os << "; declare exponents explicitly";
                throw UnresolvedFactor(os.str());
            }
            if (static_cast<int>(h.roots.size()) != m.rank)
                throw UnsupportedExponentField(
                    "characteristic polynomial of the residue does not split "
                    "into Z_p roots; declare exponents explicitly");
            rep.exponents = std::move(h.roots);
            rep.source = ExponentSource::Hensel;
        }
    }
    rep.integer_in_window_hits.reserve(rep.exponents.size());
    for (const auto& e : rep.exponents)
        rep.integer_in_window_hits.push_back(integer_in_window(e, window));
    for (int i = 0; i < static_cast<int>(rep.exponents.size()); ++i)
        for (int j = 0; j < static_cast<int>(rep.exponents.size()); ++j) {
            if (i == j) continue;
            auto n = integer_in_window(rep.exponents[i] - rep.exponents[j], window);
            if (n) {
                rep.integer_differences.emplace_back(i, j, *n);
                if (*n != 0) rep.weakly_prepared = false;
            }
        }
    return rep;
}

bool k_weakly_prepared(const ExponentReport& rep, long k) {
    for (const auto& [i, j, n] : rep.integer_differences)
        if (n <= -(k + 1)) return false;
    return true;
}

RegularConnection polynomial_model(const RegularConnection& m, long k, long window) {
    ExponentReport rep = exponents(m, window);
    if (!k_weakly_prepared(rep, k))
        throw NotKWeaklyPrepared("an exponent difference equals -(k'+1) for some k' >= " +
                                 std::to_string(k) +
                                 "; the degree-" + std::to_string(k) +
                                 " truncation does not determine the connection");
    RegularConnection out = m;
    for (long d = k + 1; d <= out.trunc(); ++d)
        out.a[d] = Mat::zeros(m.ctx, m.rank, m.rank);
    return out;
}

// --- cohomology -----------------------------------------------------------

Mat truncated_operator(const RegularConnection& m, long n) {
    const Ctx& ctx = m.ctx;
    int r = m.rank;
    Mat l(ctx, static_cast<int>(n) * r, static_cast<int>(n) * r);
    for (long d = 0; d < n; ++d) {
        Mat diag = m.a[0].plus_diagonal(PadicScalar::from_integer(ctx, d));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                l.at(static_cast<int>(d) * r + i, static_cast<int>(d) * r + j) =
                    diag.at(i, j);
        for (long e = 0; e < d; ++e) {
            long k = d - e;
            if (k > m.trunc()) continue;
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j)
                    l.at(static_cast<int>(d) * r + i, static_cast<int>(e) * r + j) =
                        m.a[k].at(i, j);
        }
    }
    return l;
}

CohomologyReport cohomology_dims(const RegularConnection& m, long window) {
    ExponentReport rep = exponents(m, window);
    long n_used = 0;
    for (const auto& hit : rep.integer_in_window_hits)
        if (hit && *hit <= 0) n_used = std::max(n_used, 1 - *hit);
    CohomologyReport out;
    out.n_used = n_used;
    if (n_used == 0) return out; // the operator is bijective degreewise
    RankResult rk = rank_and_kernel(truncated_operator(m, n_used));
    long dim = n_used * m.rank;
    out.h0 = dim - rk.rank;
    out.h1 = dim - rk.rank; // square operator: dim ker = dim coker
    return out;
}

// --- certificates ----------------------------------------------------------

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Convergent: return "CONVERGENT_UP_TO_D";
        case Verdict::DivergenceSuspect: return "DIVERGENCE_SUSPECT";
        case Verdict::PrecisionExhausted: return "PRECISION_EXHAUSTED";
    }
    return "?";
}

SolveCertificate certify_profile(const std::vector<ProfilePoint>& profile, long loss,
                                 long exhausted_at) {
    SolveCertificate cert;
    cert.profile = profile;
    cert.loss = loss;
    cert.exhausted_at = exhausted_at;
    if (exhausted_at >= 0) cert.verdict = Verdict::PrecisionExhausted;

    std::vector<std::pair<long, Rational>> pts; // exact valuations only
    for (const auto& p : profile)
        if (p.valuation.is_exact()) pts.emplace_back(p.degree, p.valuation.bound());
    if (pts.empty()) return cert;

    Rational c0_ref = pts.front().second;
    long d_max = profile.back().degree;

    // windowed slopes over degrees [1, d_max]
    std::vector<Rational> wslope(kCertificateWindows, Rational(0));
    std::vector<bool> wseen(kCertificateWindows, false);
    if (d_max >= 1) {
        long width = (d_max + kCertificateWindows - 1) / kCertificateWindows;
        for (const auto& [i, v] : pts) {
            if (i < 1) continue;
            int w = static_cast<int>((i - 1) / width);
            Rational s = (c0_ref - v) / Rational(i);
            if (!wseen[w] || s > wslope[w]) {
                wslope[w] = s;
                wseen[w] = true;
            }
        }
        for (int w = 0; w < kCertificateWindows; ++w) {
            if (!wseen[w]) continue;
            long begin = 1 + static_cast<long>(w) * width;
            long end = std::min(d_max + 1, begin + width);
            cert.window_slopes.push_back({w, begin, end, to_double(wslope[w])});
        }
    }

    // A window in the late half whose slope beats everything seen before
    // by more than the margin is evidence that the decay rate itself
    // grows: the hallmark of a Liouville-type divergence.
    if (cert.verdict != Verdict::PrecisionExhausted) {
        bool have_run = false;
        Rational run_max(0);
        for (int w = 0; w < kCertificateWindows; ++w) {
            if (!wseen[w]) continue;
            if (w >= kCertificateWindows / 2 && have_run) {
                double excess = to_double(wslope[w] - run_max);
                if (excess > kDivergenceMargin) {
                    cert.verdict = Verdict::DivergenceSuspect;
                    cert.slope = wslope[w];
                    cert.intercept = c0_ref;
                    break;
                }
            }
            if (!have_run || wslope[w] > run_max) {
                run_max = wslope[w];
                have_run = true;
            }
        }
    }

    if (cert.verdict == Verdict::DivergenceSuspect) return cert;

    // Convergent (or exhausted prefix): fit the observed decay rate as the
    // final edge of the lower convex hull of the exact profile points.
    std::vector<std::pair<long, Rational>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& [x1, y1] = hull[hull.size() - 2];
            const auto& [x2, y2] = hull[hull.size() - 1];
            // keep the chain convex from below: pop if (x2,y2) lies on or
            // above the segment (x1,y1)-(pt)
            Rational lhs = (y2 - y1) * Rational(pt.first - x1);
            Rational rhs = (pt.second - y1) * Rational(x2 - x1);
            if (lhs >= rhs)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }
    Rational s_star(0);
    if (hull.size() >= 2) {
        const auto& [x1, y1] = hull[hull.size() - 2];
        const auto& [x2, y2] = hull[hull.size() - 1];
        Rational edge = (y2 - y1) / Rational(x2 - x1);
        if (edge < Rational(0)) s_star = -edge;
    }
    cert.slope = s_star;
    Rational c0 = pts.front().second + s_star * Rational(pts.front().first);
    for (const auto& [i, v] : pts) c0 = std::min(c0, v + s_star * Rational(i));
    cert.intercept = c0;
    return cert;
}

// --- degreewise solvers ------------------------------------------------------

namespace {

std::optional<ExponentReport> try_exponents(const RegularConnection& m, long window) {
    try {
        return exponents(m, window);
    } catch (const Error&) {
        return std::nullopt;
    }
}

// Worst-case valuation budget of a single Sylvester step, from the
// eigenvalues i + lambda_a - lambda_b when the spectrum is known,
// from an elimination determinant otherwise. Raises SylvesterSingular
// for a step that is singular at precision.
long sylvester_step_valuation(const Ctx& ctx, const Mat& base, long i,
                              const std::optional<ExponentReport>& rep) {
    if (rep) {
        long dv = 0;
        PadicScalar iscal = PadicScalar::from_integer(ctx, i);
        for (const auto& la : rep->exponents)
            for (const auto& lb : rep->exponents) {
                PadicScalar s = iscal + la - lb;
                if (s.is_zero_at_precision())
                    throw SylvesterSingular(i, "degree-" + std::to_string(i) +
                                                   " step is singular: exponent "
                                                   "difference equals " +
                                                   std::to_string(i));
                dv += s.v();
            }
        return dv;
    }
    PadicScalar det = determinant(base.plus_diagonal(PadicScalar::from_integer(ctx, i)));
    if (det.is_zero_at_precision())
        throw SylvesterSingular(i, "degree-" + std::to_string(i) +
                                       " step is singular at precision");
    return det.v();
}

long residue_step_valuation(const Ctx& ctx, const Mat& a0, long m,
                            const std::optional<ExponentReport>& rep) {
    if (rep) {
        long dv = 0;
        PadicScalar mscal = PadicScalar::from_integer(ctx, m);
        for (const auto& la : rep->exponents) {
            PadicScalar s = la + mscal;
            if (s.is_zero_at_precision())
                throw ResidueShiftSingular(m, "A(0) + " + std::to_string(m) +
                                                  " I is singular: an exponent "
                                                  "equals -" + std::to_string(m));
            dv += s.v();
        }
        return dv;
    }
    PadicScalar det = determinant(a0.plus_diagonal(PadicScalar::from_integer(ctx, m)));
    if (det.is_zero_at_precision())
        throw ResidueShiftSingular(m, "A(0) + " + std::to_string(m) +
                                          " I is singular at precision");
    return det.v();
}

void check_budget(const Ctx& ctx, long worst, long at) {
    if (worst >= ctx->precision() - kBudgetHeadroom)
        throw PrecisionExhausted(
            "the step at degree " + std::to_string(at) + " would consume " +
            std::to_string(worst) + " digits of the ambient precision " +
            std::to_string(ctx->precision()) + "; raise the precision");
}

} // namespace

FuchsResult fuchs_solution(const RegularConnection& m, long deg, long window) {
    const Ctx& ctx = m.ctx;
    int r = m.rank;
    auto rep = try_exponents(m, window);
    if (rep) {
        long first_bad = 0;
        for (const auto& [i, j, n] : rep->integer_differences)
            if (n >= 1 && n <= deg && (first_bad == 0 || n < first_bad)) first_bad = n;
        if (first_bad > 0)
            throw SylvesterSingular(first_bad,
                                    "two exponents differ by the integer " +
                                        std::to_string(first_bad) +
                                        "; shear to a prepared model first");
    }

    Mat base = sylvester_base(m.residue(), m.residue());
    long worst = 0, worst_at = 1;
    for (long i = 1; i <= deg; ++i) {
        long dv = sylvester_step_valuation(ctx, base, i, rep);
        if (dv > worst) {
            worst = dv;
            worst_at = i;
        }
    }
    check_budget(ctx, worst, worst_at);

    SeriesMat u;
    u.reserve(static_cast<size_t>(deg) + 1);
    u.push_back(Mat::identity(ctx, r));
    long exhausted_at = -1;
    for (long i = 1; i <= deg; ++i) {
        Mat rhs = Mat::zeros(ctx, r, r);
        long jmax = std::min(i, m.trunc());
        for (long j = 1; j <= jmax; ++j) rhs = rhs - m.a[j] * u[i - j];
        Mat li = base.plus_diagonal(PadicScalar::from_integer(ctx, i));
        Mat x = unvec_col(matrix_solve(li, vec_col(rhs)).x, r, r);
        if (mat_exhausted(x)) {
            exhausted_at = i;
            break;
        }
        u.push_back(std::move(x));
    }

    long solved = static_cast<long>(u.size()) - 1;
    SeriesMat residual = smat_add(smat_mul(m.a, u, solved), smat_theta(u), solved);
    residual = smat_sub(residual, smat_mul(u, SeriesMat{m.residue()}, solved), solved);

    FuchsResult out{std::move(u), std::move(residual), {}};
    out.cert = certify_profile(valuation_profile(out.u),
                               residual_loss(ctx, out.residual), exhausted_at);
    return out;
}

ClarkResult clark_solve(const RegularConnection& m, const SeriesMat& b, long deg,
                        long window) {
    const Ctx& ctx = m.ctx;
    int r = m.rank;
    if (static_cast<long>(b.size()) <= deg)
        throw IndexBeyondTruncation("right-hand side is truncated below the requested degree");
    if (b[0].cols() != 1 || b[0].rows() != r)
        throw std::invalid_argument("right-hand side must be a rank-sized column");

    auto rep = try_exponents(m, window);
    if (rep) {
        for (size_t i = 0; i < rep->exponents.size(); ++i) {
            const auto& hit = rep->integer_in_window_hits[i];
            if (hit && *hit <= 0 && -*hit <= deg)
                throw ResidueShiftSingular(-*hit,
                                           "an exponent equals " + std::to_string(*hit) +
                                               "; twist the connection first");
        }
    }

    long worst = 0, worst_at = 0;
    for (long d = 0; d <= deg; ++d) {
        long dv = residue_step_valuation(ctx, m.residue(), d, rep);
        if (dv > worst) {
            worst = dv;
            worst_at = d;
        }
    }
    check_budget(ctx, worst, worst_at);

    SeriesMat a;
    a.reserve(static_cast<size_t>(deg) + 1);
    long exhausted_at = -1;
    for (long d = 0; d <= deg; ++d) {
        Mat rhs = b[d];
        long jmax = std::min(d, m.trunc());
        for (long j = 1; j <= jmax; ++j) rhs = rhs - m.a[j] * a[d - j];
        Mat step = m.residue().plus_diagonal(PadicScalar::from_integer(ctx, d));
        Mat x = matrix_solve(step, rhs).x;
        if (mat_exhausted(x)) {
            exhausted_at = d;
            break;
        }
        a.push_back(std::move(x));
    }

    if (a.empty()) {
        ClarkResult out;
        out.cert = certify_profile({}, 0, exhausted_at);
        return out;
    }
    long solved = static_cast<long>(a.size()) - 1;
    SeriesMat residual =
        smat_sub(smat_add(smat_theta(a), smat_mul(m.a, a, solved), solved), b, solved);

    ClarkResult out{std::move(a), std::move(residual), {}};
    out.cert = certify_profile(valuation_profile(out.a),
                               residual_loss(ctx, out.residual), exhausted_at);
    return out;
}

SeriesMat dense_oracle_solve(const RegularConnection& m, const SeriesMat& b, long deg) {
    const Ctx& ctx = m.ctx;
    int r = m.rank;
    if (static_cast<long>(b.size()) <= deg)
        throw IndexBeyondTruncation("right-hand side is truncated below the requested degree");
    long n = deg + 1;
    Mat l = truncated_operator(m, n);
    Mat rhs(ctx, static_cast<int>(n) * r, 1);
    for (long d = 0; d < n; ++d)
        for (int i = 0; i < r; ++i) rhs.at(static_cast<int>(d) * r + i, 0) = b[d].at(i, 0);
    Mat x = matrix_solve(l, rhs).x;
    SeriesMat a;
    a.reserve(static_cast<size_t>(n));
    for (long d = 0; d < n; ++d) {
        Mat col(ctx, r, 1);
        for (int i = 0; i < r; ++i) col.at(i, 0) = x.at(static_cast<int>(d) * r + i, 0);
        a.push_back(std::move(col));
    }
    return a;
}

// --- gauge equivalence -------------------------------------------------------

SeriesMat intertwiner_residual(const RegularConnection& to, const RegularConnection& from,
                               const SeriesMat& t, long out_trunc) {
    SeriesMat res = smat_add(smat_theta(t), smat_mul(to.a, t, out_trunc), out_trunc);
    return smat_sub(res, smat_mul(t, from.a, out_trunc), out_trunc);
}

GaugeResult gauge_equivalence(const RegularConnection& a, const RegularConnection& b,
                              long k, long deg, long window) {
    const Ctx& ctx = a.ctx;
    if (!ctx->compatible(*b.ctx))
        throw MixedContext("gauge comparison over different contexts");
    if (a.rank != b.rank) throw std::invalid_argument("gauge comparison needs equal ranks");
    if (k < 0 || deg <= k) throw std::invalid_argument("need 0 <= k < deg");
    int r = a.rank;

    for (long j = 0; j <= k; ++j) {
        Mat diff = coeff_or_zero(a.a, j, ctx, r, r) - coeff_or_zero(b.a, j, ctx, r, r);
        if (!diff.is_zero_at_precision())
            throw NotCongruentModZk("matrices differ at degree " + std::to_string(j) +
                                    " <= k = " + std::to_string(k));
    }

    auto rep = try_exponents(a, window);
    if (rep && !k_weakly_prepared(*rep, k))
        throw NotKWeaklyPrepared(
            "an exponent difference equals -(k'+1) for some k' >= " + std::to_string(k) +
            "; degree-" + std::to_string(k) + " agreement cannot pin down the gauge");

    Mat base = sylvester_base(b.residue(), a.residue());
    long worst = 0, worst_at = k + 1;
    for (long i = k + 1; i <= deg; ++i) {
        long dv = sylvester_step_valuation(ctx, base, i, rep);
        if (dv > worst) {
            worst = dv;
            worst_at = i;
        }
    }
    check_budget(ctx, worst, worst_at);

    SeriesMat t;
    t.reserve(static_cast<size_t>(deg) + 1);
    t.push_back(Mat::identity(ctx, r));
    for (long i = 1; i <= k; ++i) t.push_back(Mat::zeros(ctx, r, r));
    long exhausted_at = -1;
    for (long i = k + 1; i <= deg; ++i) {
        Mat rhs = Mat::zeros(ctx, r, r);
        for (long j = 1; j <= i; ++j) {
            bool has_b = j <= b.trunc(), has_a = j <= a.trunc();
            if (!has_b && !has_a) continue;
            if (has_b) rhs = rhs - b.a[j] * t[i - j];
            if (has_a) rhs = rhs + t[i - j] * a.a[j];
        }
        Mat li = base.plus_diagonal(PadicScalar::from_integer(ctx, i));
        Mat x = unvec_col(matrix_solve(li, vec_col(rhs)).x, r, r);
        if (mat_exhausted(x)) {
            exhausted_at = i;
            break;
        }
        t.push_back(std::move(x));
    }

    long solved = static_cast<long>(t.size()) - 1;
    GaugeResult out;
    out.residual = intertwiner_residual(b, a, t, solved);
    out.t = std::move(t);
    PadicScalar det0 = determinant(out.t[0]);
    out.det_constant_unit = !det0.is_zero_at_precision() && det0.v() == 0;
    out.cert = certify_profile(valuation_profile(out.t),
                               residual_loss(ctx, out.residual), exhausted_at);
    return out;
}

// --- shearing ----------------------------------------------------------------

ShearStep shear_step(const RegularConnection& m, const PadicScalar& c, long window) {
    const Ctx& ctx = m.ctx;
    int r = m.rank;
    if (m.trunc() < 1)
        throw PrecisionTooSmall("shearing consumes one degree of truncation; "
                                "the matrix has none to spare");
    ExponentReport rep = exponents(m, window);

    int k = 0;
    for (const auto& e : rep.exponents)
        if (near_equal(e, c)) ++k;
    if (k == 0)
        throw EigenspaceSplitFailure("no exponent equals the requested value at precision");

    Mat shifted = m.residue().plus_diagonal(-c);
    RankResult kc = rank_and_kernel(mat_pow(shifted, r));
    if (static_cast<int>(kc.kernel.size()) != k)
        throw EigenspaceSplitFailure(
            "generalized eigenspace dimension " + std::to_string(kc.kernel.size()) +
            " does not match the exponent multiplicity " + std::to_string(k));

    std::vector<PadicScalar> others;
    for (const auto& e : rep.exponents) {
        if (near_equal(e, c)) continue;
        bool seen = false;
        for (const auto& o : others) seen = seen || near_equal(e, o);
        if (!seen) others.push_back(e);
    }
    Mat prod = Mat::identity(ctx, r);
    for (const auto& o : others) prod = prod * mat_pow(m.residue().plus_diagonal(-o), r);
    RankResult wc = rank_and_kernel(prod);
    if (others.empty()) wc.kernel.clear();
    if (static_cast<int>(kc.kernel.size() + wc.kernel.size()) != r)
        throw EigenspaceSplitFailure("eigenspaces do not span: " +
                                     std::to_string(kc.kernel.size()) + " + " +
                                     std::to_string(wc.kernel.size()) +
                                     " != " + std::to_string(r));

    Mat cmat(ctx, r, r);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < r; ++i) cmat.at(i, j) = kc.kernel[j][i];
    for (int j = k; j < r; ++j)
        for (int i = 0; i < r; ++i) cmat.at(i, j) = wc.kernel[j - k][i];
    PadicScalar detc = determinant(cmat);
    if (detc.is_zero_at_precision() || 2 * detc.v() >= ctx->precision())
        throw EigenspaceSplitFailure("the eigenbasis is singular at precision");

    Mat cinv = matrix_solve(cmat, Mat::identity(ctx, r)).x;
    long trunc = m.trunc();
    SeriesMat bconj;
    bconj.reserve(static_cast<size_t>(trunc) + 1);
    for (long d = 0; d <= trunc; ++d) bconj.push_back(cinv * m.a[d] * cmat);

    for (int i = 0; i < k; ++i)
        for (int j = k; j < r; ++j)
            if (!bconj[0].at(i, j).is_zero_at_precision() ||
                !bconj[0].at(j, i).is_zero_at_precision())
                throw EigenspaceSplitFailure("residue is not block diagonal in the "
                                             "computed eigenbasis");

    long out_trunc = trunc - 1;
    SeriesMat na = smat_zero(ctx, r, r, out_trunc);
    for (long d = 0; d <= out_trunc; ++d) {
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) na[d].at(i, j) = bconj[d].at(i, j);
            for (int j = k; j < r; ++j) na[d].at(i, j) = bconj[d + 1].at(i, j);
        }
        for (int i = k; i < r; ++i) {
            for (int j = 0; j < k; ++j)
                na[d].at(i, j) = d >= 1 ? bconj[d - 1].at(i, j)
                                        : PadicScalar::zero(ctx);
            for (int j = k; j < r; ++j) na[d].at(i, j) = bconj[d].at(i, j);
        }
        for (int i = 0; i < k; ++i)
            if (d == 0) na[d].at(i, i) = na[d].at(i, i) + PadicScalar::one(ctx);
    }

    std::vector<PadicScalar> declared;
    PadicScalar cp1 = c + PadicScalar::one(ctx);
    for (const auto& e : rep.exponents)
        declared.push_back(near_equal(e, c) ? cp1 : e);

    Mat t0 = Mat::zeros(ctx, r, r), t1 = Mat::zeros(ctx, r, r);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < k; ++j) t1.at(i, j) = cmat.at(i, j);
        for (int j = k; j < r; ++j) t0.at(i, j) = cmat.at(i, j);
    }

    ShearStep out;
    out.out = make_connection(ctx, std::move(na), std::move(declared));
    out.transform = SeriesMat{std::move(t0), std::move(t1)};
    out.sheared_exponent = c;
    out.multiplicity = k;
    return out;
}

ShearReport shear_to_prepared(const RegularConnection& m, long window, long max_steps) {
    const Ctx& ctx = m.ctx;
    RegularConnection current = m;
    SeriesMat acc{Mat::identity(ctx, m.rank)};
    long steps = 0;
    ExponentReport rep = exponents(current, window);
    while (true) {
        // candidates: exponents with an integer-larger partner
        std::vector<PadicScalar> cands;
        for (const auto& [i, j, n] : rep.integer_differences) {
            if (n < 1) continue;
            bool seen = false;
            for (const auto& cnd : cands) seen = seen || near_equal(cnd, rep.exponents[j]);
            if (!seen) cands.push_back(rep.exponents[j]);
        }
        if (cands.empty()) break;
        if (steps >= max_steps)
            throw MaxStepsExceeded("shearing did not reach a prepared model within " +
                                   std::to_string(max_steps) + " steps");
        // shear the largest candidate in its integer-translation class, so
        // that it climbs toward its partner instead of dragging the whole
        // class past it
        PadicScalar best = cands[0];
        for (const auto& cnd : cands) {
            auto d = integer_in_window(cnd - best, window);
            if (d && *d > 0) best = cnd;
        }
        ShearStep st = shear_step(current, best, window);
        acc = smat_mul(acc, st.transform, steps + 1);
        current = std::move(st.out);
        ++steps;
        rep = exponents(current, window);
    }
    ShearReport out;
    out.final_exponents = rep.exponents;
    out.out = std::move(current);
    out.transform = std::move(acc);
    out.steps = steps;
    return out;
}

} // namespace pconn
