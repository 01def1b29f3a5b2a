#ifndef PCONN_RATIONAL_HPP
#define PCONN_RATIONAL_HPP

#include <boost/rational.hpp>
#include <string>

#include "pconn/errors.hpp"

namespace pconn {

// Exact rationals for valuations, slopes and type exponents. Magnitudes
// stay tiny (valuations within a few thousand, degrees within a few
// hundred), so machine words suffice.
using Rational = boost::rational<long long>;

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline bool is_integer(const Rational& r) { return r.denominator() == 1; }

inline long long floor_rational(const Rational& r) {
    long long q = r.numerator() / r.denominator();
    if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
    return q;
}

std::string rational_to_string(const Rational& r);

// Accepts "n", "-n", "n/d". Throws ZeroDenominator on a zero denominator
// and std::invalid_argument on malformed text.
Rational rational_from_string(const std::string& s);

} // namespace pconn

#endif
