#pragma once

// JSON forms: matrices {"n": int, "rows": [[...], ...]}, vectors {"v": [...]},
// complex numbers as a bare number or {"re": x, "im": y}.

#include <json.hpp>

#include "cimmino/linalg.hpp"
#include "cimmino/solver.hpp"
#include "cimmino/specfun.hpp"
#include "cimmino/spherequad.hpp"

namespace cimmino::io {

using Json = nlohmann::json;

/// All parsers throw Error(Validation) on malformed input.
Matrix matrix_from_json(const Json& j);
Vector vector_from_json(const Json& j);
Complex complex_from_json(const Json& j);
QuadratureSpec quadrature_from_json(const Json& j);

Json to_json(const Matrix& m);
Json to_json(const SymMatrix& m);
Json vector_to_json(std::span<const double> v);
Json to_json(Complex z);
Json to_json(const QuadratureSpec& spec);
Json to_json(const SolveReport& r);

std::string to_string(QuadMethod m);
QuadMethod quad_method_from_string(const std::string& s);

}  // namespace cimmino::io
