#pragma once

#include <stdexcept>
#include <string>

namespace wc {

// Every failure raised by the library carries one of these codes so that the
// runner can map it to a report row or an exit status.
enum class Errc {
    NotPrime,
    FieldTooLarge,
    NotASubfield,
    NotInSubfield,
    ZeroElement,
    NotNormOne,
    WrongIndex,
    NotCoprimeToP,
    NotFiniteOrder,
    RootNotInDatum,
    InconsistentEvaluation,
    InvalidDatum,
    SpaceMismatch,
    DegreeMismatch,
    NotSymplectic,
    NotSemisimple,
    NotAPolarization,
    LinearizationFailed,
    ZeroAverage,
    DimensionMismatch,
    BlockMismatch,
    NotNormalized,
    ElementNotInTorus,
    HasFixedPoint,
    NotIsotropic,
    LineNotFixed,
    NotInvariantPolarization,
    InvalidAction,
    InconsistentDegrees,
    FormDegenerate,
    ConstraintViolated,
    UnsupportedBranch,
    ToleranceExceeded,
    NormConditionViolated,
    IncompleteScenarioCover,
    FRegimeViolated,
    NotUnitModulus,
    ParseError,
    ValidationError,
    CapExceeded,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

}  // namespace wc
