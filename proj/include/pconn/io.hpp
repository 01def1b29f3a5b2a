#ifndef PCONN_IO_HPP
#define PCONN_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pconn/connection.hpp"
#include "pconn/liouville.hpp"
#include "pconn/padic.hpp"

namespace pconn::io {

using json = nlohmann::json;

// {"v": 3, "u": "17"} encodes 17 * p^3. A scalar that is zero at
// precision becomes {"v": ">=512", "u": "0"}. A "prec" field appears
// only when the tracked precision sits below the context default, so
// exact data stays compact and round-trips unchanged.
json scalar_to_json(const PadicScalar& x);
PadicScalar scalar_from_json(const Ctx& ctx, const json& j);

// "num" or "num/den" with arbitrary-size decimal digits.
PadicScalar scalar_from_rational_string(const Ctx& ctx, const std::string& s);
// Canonical rational representative at precision: u * p^v as "num" for
// v >= 0, "u/p^-v" otherwise, "0" for zero at precision.
std::string scalar_to_rational_string(const PadicScalar& x);

// {"p": 2, "precision": 512, "trunc": 400, "rank": 2,
//  "matrix": [[["0","1"],["0","3"]], ...], "exponents": ["0","3"]}
// matrix[d] is the degree-d coefficient matrix; entries are rational
// strings or scalar objects; "exponents" is optional.
json connection_to_json(const RegularConnection& m);
RegularConnection connection_from_json(const json& j);
RegularConnection load_connection(const std::string& path);
void save_connection(const RegularConnection& m, const std::string& path);

// RFC 4180: header "degree,valuation", CRLF line endings. Valuations
// print as exact rationals or ">=bound".
void write_profile_csv(std::ostream& os, const std::vector<ProfilePoint>& profile);
void write_profile_csv(const std::string& path, const std::vector<ProfilePoint>& profile);

json certificate_to_json(const SolveCertificate& c);
json type_estimate_to_json(const TypeEstimate& e);
json slope_report_to_json(const SlopeReport& r);
json classify_to_json(const ClassifyReport& r);
json cohomology_to_json(const CohomologyReport& r);
json exponent_report_to_json(const ExponentReport& r);

} // namespace pconn::io

#endif
