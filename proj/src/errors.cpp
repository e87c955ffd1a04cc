#include "weilchar/errors.hpp"

namespace wc {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NotPrime: return "NotPrime";
        case Errc::FieldTooLarge: return "FieldTooLarge";
        case Errc::NotASubfield: return "NotASubfield";
        case Errc::NotInSubfield: return "NotInSubfield";
        case Errc::ZeroElement: return "ZeroElement";
        case Errc::NotNormOne: return "NotNormOne";
        case Errc::WrongIndex: return "WrongIndex";
        case Errc::NotCoprimeToP: return "NotCoprimeToP";
        case Errc::NotFiniteOrder: return "NotFiniteOrder";
        case Errc::RootNotInDatum: return "RootNotInDatum";
        case Errc::InconsistentEvaluation: return "InconsistentEvaluation";
        case Errc::InvalidDatum: return "InvalidDatum";
        case Errc::SpaceMismatch: return "SpaceMismatch";
        case Errc::DegreeMismatch: return "DegreeMismatch";
        case Errc::NotSymplectic: return "NotSymplectic";
        case Errc::NotSemisimple: return "NotSemisimple";
        case Errc::NotAPolarization: return "NotAPolarization";
        case Errc::LinearizationFailed: return "LinearizationFailed";
        case Errc::ZeroAverage: return "ZeroAverage";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::BlockMismatch: return "BlockMismatch";
        case Errc::NotNormalized: return "NotNormalized";
        case Errc::ElementNotInTorus: return "ElementNotInTorus";
        case Errc::HasFixedPoint: return "HasFixedPoint";
        case Errc::NotIsotropic: return "NotIsotropic";
        case Errc::LineNotFixed: return "LineNotFixed";
        case Errc::NotInvariantPolarization: return "NotInvariantPolarization";
        case Errc::InvalidAction: return "InvalidAction";
        case Errc::InconsistentDegrees: return "InconsistentDegrees";
        case Errc::FormDegenerate: return "FormDegenerate";
        case Errc::ConstraintViolated: return "ConstraintViolated";
        case Errc::UnsupportedBranch: return "UnsupportedBranch";
        case Errc::ToleranceExceeded: return "ToleranceExceeded";
        case Errc::NormConditionViolated: return "NormConditionViolated";
        case Errc::IncompleteScenarioCover: return "IncompleteScenarioCover";
        case Errc::FRegimeViolated: return "FRegimeViolated";
        case Errc::NotUnitModulus: return "NotUnitModulus";
        case Errc::ParseError: return "ParseError";
        case Errc::ValidationError: return "ValidationError";
        case Errc::CapExceeded: return "CapExceeded";
    }
    return "Unknown";
}

}  // namespace wc
