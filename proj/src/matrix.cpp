#include "pconn/matrix.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace pconn {

Mat::Mat(Ctx ctx, int rows, int cols) : ctx_(std::move(ctx)), rows_(rows), cols_(cols) {
    a_.assign(static_cast<size_t>(rows) * cols, PadicScalar::zero(ctx_));
}

Mat Mat::identity(const Ctx& ctx, int n) {
    Mat m(ctx, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = PadicScalar::one(ctx);
    return m;
}

Mat Mat::operator+(const Mat& o) const {
    Mat r(ctx_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

Mat Mat::operator-(const Mat& o) const {
    Mat r(ctx_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

Mat Mat::operator-() const {
    Mat r(ctx_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = -a_[i];
    return r;
}

Mat Mat::operator*(const Mat& o) const {
    Mat r(ctx_, rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < o.cols_; ++j) {
            PadicScalar s = PadicScalar::zero(ctx_);
            for (int k = 0; k < cols_; ++k) s += at(i, k) * o.at(k, j);
            r.at(i, j) = s;
        }
    return r;
}

Mat Mat::scaled(const PadicScalar& c) const {
    Mat r(ctx_, rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * c;
    return r;
}

Mat Mat::transpose() const {
    Mat r(ctx_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

Mat Mat::plus_diagonal(const PadicScalar& c) const {
    Mat r = *this;
    for (int i = 0; i < std::min(rows_, cols_); ++i) r.at(i, i) = r.at(i, i) + c;
    return r;
}

bool Mat::is_zero_at_precision() const {
    return std::all_of(a_.begin(), a_.end(),
                       [](const PadicScalar& s) { return s.is_zero_at_precision(); });
}

long Mat::min_entry_precision() const {
    long m = ctx_ ? ctx_->precision() : 0;
    for (const auto& s : a_) m = std::min(m, s.precision());
    return m;
}

Val Mat::min_valuation() const {
    Val m = Val::at_least(ctx_->precision());
    for (const auto& s : a_) m = vmin(m, s.valuation());
    return m;
}

std::string Mat::to_string() const {
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
        os << (i ? "\n[" : "[");
        for (int j = 0; j < cols_; ++j) os << (j ? ", " : "") << at(i, j).to_string();
        os << "]";
    }
    return os.str();
}

Mat kronecker(const Mat& p, const Mat& q) {
    Mat r(p.context(), p.rows() * q.rows(), p.cols() * q.cols());
    for (int i = 0; i < p.rows(); ++i)
        for (int j = 0; j < p.cols(); ++j)
            for (int k = 0; k < q.rows(); ++k)
                for (int l = 0; l < q.cols(); ++l)
                    r.at(i * q.rows() + k, j * q.cols() + l) = p.at(i, j) * q.at(k, l);
    return r;
}

namespace {

// Picks the row >= k whose column-k entry has minimal exact valuation.
int pick_pivot_row(const Mat& w, int k, int nrows) {
    int best = -1;
    long best_v = 0;
    for (int i = k; i < nrows; ++i) {
        const PadicScalar& e = w.at(i, k);
        if (e.is_zero_at_precision()) continue;
        if (best < 0 || e.v() < best_v) {
            best = i;
            best_v = e.v();
        }
    }
    return best;
}

void swap_rows(Mat& w, int a, int b) {
    if (a == b) return;
    for (int j = 0; j < w.cols(); ++j) std::swap(w.at(a, j), w.at(b, j));
}

} // namespace

SolveResult matrix_solve(const Mat& a, const Mat& b) {
    int n = a.rows();
    Mat w(a.context(), n, n + b.cols());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) w.at(i, j) = a.at(i, j);
        for (int j = 0; j < b.cols(); ++j) w.at(i, n + j) = b.at(i, j);
    }
    long det_v = 0;
    for (int k = 0; k < n; ++k) {
        int pr = pick_pivot_row(w, k, n);
        if (pr < 0)
            throw SingularAtPrecision("no usable pivot in column " + std::to_string(k));
        swap_rows(w, k, pr);
        det_v += w.at(k, k).v();
        PadicScalar inv = w.at(k, k).invert();
        for (int j = k; j < w.cols(); ++j) w.at(k, j) = w.at(k, j) * inv;
        for (int i = 0; i < n; ++i) {
            if (i == k || w.at(i, k).is_zero_at_precision()) continue;
            PadicScalar f = w.at(i, k);
            for (int j = k; j < w.cols(); ++j)
                w.at(i, j) = w.at(i, j) - f * w.at(k, j);
        }
    }
    Mat x(a.context(), n, b.cols());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < b.cols(); ++j) x.at(i, j) = w.at(i, n + j);
    return SolveResult{std::move(x), det_v};
}

PadicScalar determinant(const Mat& a) {
    int n = a.rows();
    Mat w = a;
    bool neg = false;
    PadicScalar det = PadicScalar::one(a.context());
    for (int k = 0; k < n; ++k) {
        int pr = pick_pivot_row(w, k, n);
        if (pr < 0) {
            // zero at precision: floor = accumulated pivots + best column floor
            long floor = det.is_zero_at_precision() ? det.precision() : det.v();
            long col_floor = a.context()->precision();
            for (int i = k; i < n; ++i)
                col_floor = std::min(col_floor, w.at(i, k).precision());
            return PadicScalar::at_least(a.context(), floor + col_floor);
        }
        if (pr != k) neg = !neg;
        swap_rows(w, k, pr);
        det = det * w.at(k, k);
        PadicScalar inv = w.at(k, k).invert();
        for (int i = k + 1; i < n; ++i) {
            if (w.at(i, k).is_zero_at_precision()) continue;
            PadicScalar f = w.at(i, k) * inv;
            for (int j = k; j < n; ++j) w.at(i, j) = w.at(i, j) - f * w.at(k, j);
        }
    }
    return neg ? -det : det;
}

long det_valuation(const Mat& a) {
    PadicScalar d = determinant(a);
    if (d.is_zero_at_precision())
        throw SingularAtPrecision("determinant is zero at precision " +
                                  std::to_string(d.precision()));
    return d.v();
}

RankResult rank_and_kernel(const Mat& a, long ambiguity_floor) {
    const Ctx& ctx = a.context();
    if (ambiguity_floor < 0) ambiguity_floor = ctx->precision() / 2;
    int nr = a.rows(), nc = a.cols();
    Mat w = a;
    std::vector<int> colperm(nc);
    std::iota(colperm.begin(), colperm.end(), 0);
    int r = 0;
    while (r < nr && r < nc) {
        // full pivoting over the remaining submatrix
        int pi = -1, pj = -1;
        long best_v = 0;
        for (int i = r; i < nr; ++i)
            for (int j = r; j < nc; ++j) {
                const PadicScalar& e = w.at(i, j);
                if (e.is_zero_at_precision()) continue;
                if (pi < 0 || e.v() < best_v) {
                    pi = i;
                    pj = j;
                    best_v = e.v();
                }
            }
        if (pi < 0) break;
        if (best_v >= ambiguity_floor)
            throw RankAmbiguousAtPrecision(
                "pivot valuation " + std::to_string(best_v) +
                " reaches the ambiguity floor " + std::to_string(ambiguity_floor));
        swap_rows(w, r, pi);
        if (pj != r) {
            for (int i = 0; i < nr; ++i) std::swap(w.at(i, r), w.at(i, pj));
            std::swap(colperm[r], colperm[pj]);
        }
        PadicScalar inv = w.at(r, r).invert();
        for (int j = r; j < nc; ++j) w.at(r, j) = w.at(r, j) * inv;
        for (int i = 0; i < nr; ++i) {
            if (i == r || w.at(i, r).is_zero_at_precision()) continue;
            PadicScalar f = w.at(i, r);
            for (int j = r; j < nc; ++j) w.at(i, j) = w.at(i, j) - f * w.at(r, j);
        }
        ++r;
    }
    // certify that everything left is zero to a trustworthy precision
    for (int i = r; i < nr; ++i)
        for (int j = r; j < nc; ++j)
            if (w.at(i, j).precision() < ambiguity_floor)
                throw RankAmbiguousAtPrecision(
                    "residual entry only vanishes to precision " +
                    std::to_string(w.at(i, j).precision()));
    RankResult res;
    res.rank = r;
    for (int f = r; f < nc; ++f) {
        std::vector<PadicScalar> x(nc, PadicScalar::zero(ctx));
        x[colperm[f]] = PadicScalar::one(ctx);
        for (int i = 0; i < r; ++i) x[colperm[i]] = -w.at(i, f);
        res.kernel.push_back(std::move(x));
    }
    return res;
}

} // namespace pconn
