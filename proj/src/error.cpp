#include "cimmino/error.hpp"

namespace cimmino {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NotSymmetric: return "NotSymmetric";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::SingularMatrix: return "SingularMatrix";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::PoleOfGamma: return "PoleOfGamma";
        case ErrorKind::NonPositiveX: return "NonPositiveX";
        case ErrorKind::TooManyPoints: return "TooManyPoints";
        case ErrorKind::DegenerateGrid: return "DegenerateGrid";
        case ErrorKind::OutsideConvergence: return "OutsideConvergence";
        case ErrorKind::TooCloseToPole: return "TooCloseToPole";
        case ErrorKind::NotConverged: return "NotConverged";
        case ErrorKind::EvaluationFailure: return "EvaluationFailure";
        case ErrorKind::NonFiniteIntegrand: return "NonFiniteIntegrand";
        case ErrorKind::DegenerateQuadrature: return "DegenerateQuadrature";
        case ErrorKind::NumericalInconsistency: return "NumericalInconsistency";
        case ErrorKind::Validation: return "Validation";
    }
    return "Unknown";
}

}  // namespace cimmino
