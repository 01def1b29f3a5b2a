#ifndef PCONN_HENSEL_HPP
#define PCONN_HENSEL_HPP

#include <vector>

#include "pconn/padic.hpp"

namespace pconn {

struct HenselResult {
    std::vector<PadicScalar> roots;      // certified simple roots in Z_p
    std::vector<unsigned long> unresolved; // residues mod p where f and f' both vanish
};

// All Z_p roots of a monic polynomial with Z_p coefficients that are
// simple mod p, Newton-lifted to the context precision. Coefficients are
// lowest-degree first including the leading 1. Residues where the
// reduction has a multiple root cannot be certified and are reported in
// `unresolved`; an empty root list with no unresolved residues just means
// the reduction has no roots mod p.
HenselResult hensel_zp_roots(const Ctx& ctx, const std::vector<PadicScalar>& coeffs);

// Convenience entry point from rationals with p-free denominators.
HenselResult hensel_zp_roots(const Ctx& ctx, const std::vector<Rational>& coeffs);

} // namespace pconn

#endif
