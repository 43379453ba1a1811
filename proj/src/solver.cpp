#include "cimmino/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "cimmino/error.hpp"
#include "cimmino/tolerances.hpp"
#include "cimmino/zeta.hpp"

namespace cimmino {

namespace {

void require_system(const Matrix& a, std::span<const double> b) {
    if (a.dim() == 0) throw Error(ErrorKind::DimensionMismatch, "empty system");
    if (b.size() != a.dim()) throw Error(ErrorKind::DimensionMismatch, "right-hand side dimension");
}

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

SolveReport start_report(const Matrix& a, std::span<const double> b, SolveRoute route) {
    SolveReport r;
    r.route = route;
    r.x_reference = solve_direct(a, b);
    r.condition_estimate = condition_number_1(a);
    if (r.condition_estimate > tol::condition_warning)
        r.warnings.push_back("condition number " + std::to_string(r.condition_estimate) + " exceeds 1e6");
    return r;
}

void finish_report(SolveReport& r) {
    if (!(r.R > 0.0)) throw Error(ErrorKind::DegenerateQuadrature, "R must be positive");
    r.x.resize(r.Ri.size());
    for (std::size_t i = 0; i < r.Ri.size(); ++i) r.x[i] = r.Ri[i] / r.R;
    r.per_component_rel_err = relative_errors(r.x, r.x_reference);
    if (r.x_error_estimate.empty()) r.x_error_estimate.assign(r.x.size(), 0.0);
}

}  // namespace

std::string to_string(SolveRoute route) {
    switch (route) {
        case SolveRoute::residues: return "residues";
        case SolveRoute::integrals: return "integrals";
        case SolveRoute::numeric_residues: return "numeric_residues";
    }
    return "unknown";
}

double SolveReport::max_rel_err() const noexcept {
    double m = 0.0;
    for (double e : per_component_rel_err) m = std::max(m, e);
    return m;
}

Vector relative_errors(std::span<const double> x, std::span<const double> ref) {
    if (x.size() != ref.size()) throw Error(ErrorKind::DimensionMismatch, "relative error dimension");
    const double scale = inf_norm(ref) > 0.0 ? inf_norm(ref) : 1.0;
    Vector e(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double den = ref[i] != 0.0 ? std::abs(ref[i]) : scale;
        e[i] = std::abs(x[i] - ref[i]) / den;
    }
    return e;
}

double condition_number_1(const Matrix& a) { return norm1(a) * norm1(inverse(a)); }

QuadratureSpec suggested_quadrature(const Matrix& a) {
    const std::size_t n = a.dim();
    const QuadratureSpec mc{QuadMethod::monte_carlo, 1000000, 42};
    if (n < 2 || n > 5) return mc;
    const double cond = condition_number_1(a);
    if (n == 2) {
        const double want = std::clamp(64.0 * cond, 1024.0, 1048576.0);
        return {QuadMethod::circle_trapezoid, std::bit_ceil(static_cast<std::size_t>(std::ceil(want))), 0};
    }
    const std::size_t cap = n == 3 ? 2048 : n == 4 ? 256 : 48;
    const double want = std::max(48.0, 20.0 * cond);
    if (want > static_cast<double>(cap)) return n == 3 ? QuadratureSpec{QuadMethod::product_gauss, cap, 0} : mc;
    const auto m = static_cast<std::size_t>(std::ceil(want / 8.0)) * 8;
    return {QuadMethod::product_gauss, m, 0};
}

Vector solve_direct(const Matrix& a, std::span<const double> b) {
    require_system(a, b);
    const LUFactors lu = lu_decompose(a);
    const double det = lu.det();
    if (!(std::abs(det) > tol::singular_det)) throw Error(ErrorKind::SingularMatrix, "matrix is singular");
    const double cond = condition_number_1(a);
    if (!(cond < 1.0 / std::numeric_limits<double>::epsilon()))
        throw Error(ErrorKind::SingularMatrix, "matrix is singular to working precision");
    Vector x = lu.solve(b);
    const std::size_t n = a.dim();
    if (n <= 3) {
        const double scale = std::max(inf_norm(x), std::numeric_limits<double>::min());
        for (std::size_t i = 0; i < n; ++i) {
            Matrix ai = a;
            for (std::size_t r = 0; r < n; ++r) ai(r, i) = b[r];
            const double xi = determinant(ai) / det;
            if (std::abs(xi - x[i]) > tol::cramer_agreement * cond * scale)
                throw Error(ErrorKind::NumericalInconsistency, "LU and Cramer solutions disagree");
        }
    }
    return x;
}

SphereIntegralResult cimmino_R_integral(const Matrix& a, const QuadratureSpec& spec) {
    const std::size_t n = a.dim();
    const Matrix at = a.transpose();
    const double p = -static_cast<double>(n);
    return sphere_integrate([&](std::span<const double> u) { return std::pow(norm2(at * u), p); }, n, spec);
}

SphereIntegralResult cimmino_Ri_integral(const Matrix& a, std::span<const double> b, std::size_t i,
                                         const QuadratureSpec& spec) {
    require_system(a, b);
    const std::size_t n = a.dim();
    if (i >= n) throw Error(ErrorKind::InvalidArgument, "component index out of range");
    const Matrix at = a.transpose();
    const double p = -static_cast<double>(n) - 2.0;
    const double dn = static_cast<double>(n);
    return sphere_integrate(
        [&](std::span<const double> u) {
            const Vector v = at * u;
            return dn * std::pow(norm2(v), p) * dot(b, u) * v[i];
        },
        n, spec);
}

SolveReport solve_via_integrals(const Matrix& a, std::span<const double> b, const QuadratureSpec& spec) {
    require_system(a, b);
    SolveReport r = start_report(a, b, SolveRoute::integrals);
    r.quadrature = spec;
    const std::size_t n = a.dim();
    const Matrix at = a.transpose();
    const double dn = static_cast<double>(n);
    // Output 0 is R, outputs 1..n are R_i; all share one evaluation of A^T u.
    const auto res = sphere_integrate_vector(
        [&](std::span<const double> u, std::span<double> out) {
            const Vector v = at * u;
            const double len = norm2(v);
            const double base = std::pow(len, -dn);
            out[0] = base;
            const double w = dn * base / (len * len) * dot(b, u);
            for (std::size_t i = 0; i < n; ++i) out[i + 1] = w * v[i];
        },
        n, n + 1, spec);
    r.R = res.values[0];
    r.Ri.assign(res.values.begin() + 1, res.values.end());
    finish_report(r);
    const std::size_t k = n + 1;
    r.x_error_estimate.clear();
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = r.x[i];
        if (!res.covariance.empty()) {
            // Delta method for the ratio of correlated estimates.
            const double var = res.covariance[(i + 1) * k + (i + 1)] - 2.0 * xi * res.covariance[(i + 1) * k] +
                               xi * xi * res.covariance[0];
            r.x_error_estimate.push_back(3.0 * std::sqrt(std::max(var, 0.0)) / r.R);
        } else {
            r.x_error_estimate.push_back((res.error_estimates[i + 1] + std::abs(xi) * res.error_estimates[0]) / r.R);
        }
    }
    return r;
}

SolveReport solve_via_residues(const Matrix& a, std::span<const double> b) {
    require_system(a, b);
    SolveReport r = start_report(a, b, SolveRoute::residues);
    const std::size_t n = a.dim();
    const Matrix at = a.transpose();
    r.R = 2.0 * residue_epstein(Lattice(at), cholesky(SymMatrix::identity(n))).residue[0].real();
    const PoleReport v = residue_vector(at, b);
    for (const Complex& c : v.residue) r.Ri.push_back(2.0 * static_cast<double>(n) * c.real());
    finish_report(r);
    return r;
}

SolveReport numeric_residue_solve(const Matrix& a, std::span<const double> b) {
    require_system(a, b);
    const std::size_t n = a.dim();
    if (n > 3) throw Error(ErrorKind::InvalidArgument, "numeric residue route is limited to n <= 3");
    SolveReport r = start_report(a, b, SolveRoute::numeric_residues);
    const Matrix at = a.transpose();
    const SPDForm q = cholesky(gram_transform(SymMatrix::identity(n), at));
    const double dn = static_cast<double>(n);
    const PoleReport pr = residue_numeric(
        [&](Complex s) { return std::vector<Complex>{epstein_continued(q, 0.5 * s).value}; }, dn);
    const PoleReport pv = residue_numeric(
        [&](Complex s) {
            std::vector<Complex> out;
            for (const auto& z : vector_zeta(at, b, 0.5 * s)) out.push_back(z.value);
            return out;
        },
        dn + 2.0);
    r.R = pr.residue[0].real();
    for (const Complex& c : pv.residue) r.Ri.push_back(dn * c.real());
    finish_report(r);
    return r;
}

}  // namespace cimmino
