#include "cimmino/io.hpp"

#include <cmath>
#include <string>

#include "cimmino/error.hpp"

namespace cimmino::io {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::Validation, what); }

double number(const Json& j, const char* what) {
    if (!j.is_number()) invalid(std::string(what) + " must be a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) invalid(std::string(what) + " must be finite");
    return x;
}

void only_keys(const Json& j, std::initializer_list<const char*> keys, const char* what) {
    if (!j.is_object()) invalid(std::string(what) + " must be an object");
    for (const auto& [k, v] : j.items()) {
        bool known = false;
        for (const char* key : keys) known = known || k == key;
        if (!known) invalid(std::string("unknown field '") + k + "' in " + what);
    }
}

}  // namespace

Matrix matrix_from_json(const Json& j) {
    only_keys(j, {"n", "rows"}, "matrix");
    if (!j.contains("n") || !j.contains("rows")) invalid("matrix needs 'n' and 'rows'");
    if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1) invalid("matrix 'n' must be a positive integer");
    const auto n = static_cast<std::size_t>(j["n"].get<long long>());
    const Json& rows = j["rows"];
    if (!rows.is_array() || rows.size() != n) invalid("matrix must have n rows");
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != n) invalid("matrix rows must have n entries");
        for (std::size_t k = 0; k < n; ++k) m(i, k) = number(rows[i][k], "matrix entry");
    }
    return m;
}

Vector vector_from_json(const Json& j) {
    only_keys(j, {"v"}, "vector");
    if (!j.contains("v") || !j["v"].is_array() || j["v"].empty()) invalid("vector needs a non-empty 'v' array");
    Vector v;
    for (const auto& x : j["v"]) v.push_back(number(x, "vector entry"));
    return v;
}

Complex complex_from_json(const Json& j) {
    if (j.is_number()) return {number(j, "s"), 0.0};
    only_keys(j, {"re", "im"}, "complex number");
    if (!j.contains("re")) invalid("complex number needs 're'");
    return {number(j["re"], "re"), j.contains("im") ? number(j["im"], "im") : 0.0};
}

std::string to_string(QuadMethod m) {
    switch (m) {
        case QuadMethod::circle_trapezoid: return "circle_trapezoid";
        case QuadMethod::product_gauss: return "product_gauss";
        case QuadMethod::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

QuadMethod quad_method_from_string(const std::string& s) {
    if (s == "circle_trapezoid") return QuadMethod::circle_trapezoid;
    if (s == "product_gauss") return QuadMethod::product_gauss;
    if (s == "monte_carlo") return QuadMethod::monte_carlo;
    invalid("unknown quadrature method '" + s + "'");
}

QuadratureSpec quadrature_from_json(const Json& j) {
    only_keys(j, {"method", "nodes", "seed"}, "quadrature");
    QuadratureSpec spec;
    if (!j.contains("method") || !j["method"].is_string()) invalid("quadrature needs a 'method' string");
    spec.method = quad_method_from_string(j["method"].get<std::string>());
    if (j.contains("nodes")) {
        if (!j["nodes"].is_number_integer() || j["nodes"].get<long long>() < 1)
            invalid("quadrature 'nodes' must be a positive integer");
        spec.nodes = static_cast<std::size_t>(j["nodes"].get<long long>());
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() || j["seed"].get<long long>() < 0)
            invalid("quadrature 'seed' must be a non-negative integer");
        spec.seed = j["seed"].get<std::uint64_t>();
    }
    return spec;
}

Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) rows.push_back(Json(std::vector<double>(m.row(i).begin(), m.row(i).end())));
    return {{"n", m.dim()}, {"rows", rows}};
}

Json to_json(const SymMatrix& m) { return to_json(m.matrix()); }

Json vector_to_json(std::span<const double> v) { return {{"v", std::vector<double>(v.begin(), v.end())}}; }

Json to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

Json to_json(const QuadratureSpec& spec) {
    return {{"method", to_string(spec.method)}, {"nodes", spec.nodes}, {"seed", spec.seed}};
}

Json to_json(const SolveReport& r) {
    Json j;
    j["route"] = to_string(r.route);
    j["x"] = vector_to_json(r.x);
    j["x_reference"] = vector_to_json(r.x_reference);
    j["R"] = r.R;
    j["Ri"] = vector_to_json(r.Ri);
    j["per_component_rel_err"] = vector_to_json(r.per_component_rel_err);
    j["x_error_estimate"] = vector_to_json(r.x_error_estimate);
    j["max_rel_err"] = r.max_rel_err();
    j["condition_estimate"] = r.condition_estimate;
    j["quadrature"] = r.quadrature ? to_json(*r.quadrature) : Json(nullptr);
    j["warnings"] = r.warnings;
    return j;
}

}  // namespace cimmino::io
