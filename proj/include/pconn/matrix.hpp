#ifndef PCONN_MATRIX_HPP
#define PCONN_MATRIX_HPP

#include <functional>
#include <vector>

#include "pconn/padic.hpp"

namespace pconn {

// Dense matrix over PadicScalar. Ranks are small (a handful for
// connections, a few hundred for assembled degree-truncated operators),
// so cubic elimination is fine everywhere.
class Mat {
public:
    Mat() = default;
    Mat(Ctx ctx, int rows, int cols);

    static Mat identity(const Ctx& ctx, int n);
    static Mat zeros(const Ctx& ctx, int rows, int cols) { return Mat(ctx, rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Ctx& context() const { return ctx_; }

    PadicScalar& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const PadicScalar& at(int i, int j) const {
        return a_[static_cast<size_t>(i) * cols_ + j];
    }

    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat operator*(const Mat& o) const;
    Mat operator-() const;
    Mat scaled(const PadicScalar& c) const;
    Mat transpose() const;

    // Adds c to every diagonal entry.
    Mat plus_diagonal(const PadicScalar& c) const;

    bool is_zero_at_precision() const;
    // Smallest effective precision among zero-at-precision entries and
    // full precision bookkeeping for reports: min over entries of
    // (prec of entry). Entries that are exact keep prec as stored.
    long min_entry_precision() const;
    // Min over entries of valuation (as Val).
    Val min_valuation() const;

    std::string to_string() const;

private:
    Ctx ctx_;
    int rows_ = 0, cols_ = 0;
    std::vector<PadicScalar> a_;
};

Mat kronecker(const Mat& p, const Mat& q);

struct SolveResult {
    Mat x;
    long det_valuation; // v_p(det A): sum of pivot valuations
};

// Solves A X = B by elimination with minimal-valuation pivoting.
// Raises SingularAtPrecision when some pivot column offers only
// zero-at-precision candidates. Per-entry precision of X carries the
// actual loss; det_valuation is the classical worst-case bound v_p(det).
SolveResult matrix_solve(const Mat& a, const Mat& b);

// v_p(det A); raises SingularAtPrecision if the matrix is singular at
// its precision.
long det_valuation(const Mat& a);

// Determinant via elimination (exact at the tracked precision).
PadicScalar determinant(const Mat& a);

struct RankResult {
    int rank;
    std::vector<std::vector<PadicScalar>> kernel; // column vectors
};

// Rank and kernel at precision. An elimination pivot whose valuation
// reaches ambiguity_floor (default N/2) means the zero/nonzero decision
// is not trustworthy: RankAmbiguousAtPrecision.
RankResult rank_and_kernel(const Mat& a, long ambiguity_floor = -1);

} // namespace pconn

#endif
