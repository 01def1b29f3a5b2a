#ifndef PCONN_VAL_HPP
#define PCONN_VAL_HPP

#include <string>

#include "pconn/rational.hpp"

namespace pconn {

// A valuation that is either known exactly or only known to be at least
// some bound (the value sits below the precision floor). AtLeast(b) is
// ordered as b + epsilon: min(Exact a, AtLeast b) is Exact a when a <= b
// and stays a floor otherwise, and comparisons treat the unknown tail as
// infinitesimally above its bound.
class Val {
public:
    static Val exact(Rational r) { return Val(false, r); }
    static Val exact(long long n) { return Val(false, Rational(n)); }
    static Val at_least(Rational r) { return Val(true, r); }
    static Val at_least(long long n) { return Val(true, Rational(n)); }

    bool is_exact() const { return !at_least_; }
    bool is_at_least() const { return at_least_; }
    const Rational& bound() const { return r_; }

    Val operator+(const Rational& shift) const { return Val(at_least_, r_ + shift); }
    Val operator+(const Val& o) const { return Val(at_least_ || o.at_least_, r_ + o.r_); }

    friend bool operator==(const Val& a, const Val& b) {
        return a.at_least_ == b.at_least_ && a.r_ == b.r_;
    }
    friend bool operator!=(const Val& a, const Val& b) { return !(a == b); }
    friend bool operator<(const Val& a, const Val& b) {
        if (a.r_ != b.r_) return a.r_ < b.r_;
        return !a.at_least_ && b.at_least_;
    }
    friend bool operator<=(const Val& a, const Val& b) { return a < b || a == b; }
    friend bool operator>(const Val& a, const Val& b) { return b < a; }
    friend bool operator>=(const Val& a, const Val& b) { return b <= a; }

    friend Val vmin(const Val& a, const Val& b) { return a < b ? a : b; }

    std::string to_string() const {
        if (at_least_) return ">=" + rational_to_string(r_);
        return rational_to_string(r_);
    }

private:
    Val(bool at_least, Rational r) : at_least_(at_least), r_(r) {}
    bool at_least_;
    Rational r_;
};

} // namespace pconn

#endif
