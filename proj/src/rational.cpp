#include "pconn/rational.hpp"

#include <cstdlib>
#include <stdexcept>

namespace pconn {

std::string rational_to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational rational_from_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational");
    auto slash = s.find('/');
    auto parse_ll = [](const std::string& t) {
        size_t pos = 0;
        long long v = std::stoll(t, &pos);
        if (pos != t.size()) throw std::invalid_argument("malformed rational: " + t);
        return v;
    };
    if (slash == std::string::npos) return Rational(parse_ll(s));
    long long num = parse_ll(s.substr(0, slash));
    long long den = parse_ll(s.substr(slash + 1));
    if (den == 0) throw ZeroDenominator("rational with zero denominator: " + s);
    return Rational(num, den);
}

} // namespace pconn
