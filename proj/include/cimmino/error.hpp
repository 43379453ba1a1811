#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cimmino {

enum class ErrorKind {
    DimensionMismatch,
    NotSymmetric,
    NotPositiveDefinite,
    SingularMatrix,
    InvalidArgument,
    PoleOfGamma,
    NonPositiveX,
    TooManyPoints,
    DegenerateGrid,
    OutsideConvergence,
    TooCloseToPole,
    NotConverged,
    EvaluationFailure,
    NonFiniteIntegrand,
    DegenerateQuadrature,
    NumericalInconsistency,
    Validation,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace cimmino
