#ifndef PCONN_ERRORS_HPP
#define PCONN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pconn {

// Base class for all refusals with a stable machine-readable code.
// Anything derived from Error maps to CLI exit code 1; usage/IO problems
// (bad flags, unreadable files) map to exit code 2 and are not Errors.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

#define PCONN_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                   \
    public:                                                       \
        explicit Name(const std::string& what) : Error(#Name, what) {} \
    }

PCONN_DEFINE_ERROR(ZeroDenominator);
PCONN_DEFINE_ERROR(PrecisionExhausted);
PCONN_DEFINE_ERROR(MixedContext);
PCONN_DEFINE_ERROR(UnresolvedFactor);
PCONN_DEFINE_ERROR(SingularAtPrecision);
PCONN_DEFINE_ERROR(IndexBeyondTruncation);
PCONN_DEFINE_ERROR(NonUnitConstantTerm);
PCONN_DEFINE_ERROR(PrecisionTooSmall);
PCONN_DEFINE_ERROR(UnsupportedExponentField);
PCONN_DEFINE_ERROR(EigenspaceSplitFailure);
PCONN_DEFINE_ERROR(MaxStepsExceeded);
PCONN_DEFINE_ERROR(RankAmbiguousAtPrecision);
PCONN_DEFINE_ERROR(NotKWeaklyPrepared);
PCONN_DEFINE_ERROR(NotCongruentModZk);

#undef PCONN_DEFINE_ERROR

// Degree-indexed singularities keep the offending index.
class SylvesterSingular : public Error {
public:
    SylvesterSingular(long degree, const std::string& what)
        : Error("SylvesterSingular", what), degree_(degree) {}
    long degree() const { return degree_; }

private:
    long degree_;
};

class ResidueShiftSingular : public Error {
public:
    ResidueShiftSingular(long shift, const std::string& what)
        : Error("ResidueShiftSingular", what), shift_(shift) {}
    long shift() const { return shift_; }

private:
    long shift_;
};

} // namespace pconn

#endif
