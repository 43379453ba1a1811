#pragma once

// Linear systems A x = b solved as ratios x_i = R_i / R of sphere integrals or
// of zeta residues, checked against an LU solve.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cimmino/linalg.hpp"
#include "cimmino/spherequad.hpp"

namespace cimmino {

enum class SolveRoute { residues, integrals, numeric_residues };

std::string to_string(SolveRoute route);

struct SolveReport {
    Vector x;
    Vector x_reference;
    double R = 0.0;
    Vector Ri;
    Vector per_component_rel_err;
    /// Uncertainty of each x_i: 3 sigma for Monte Carlo, propagated rule deltas
    /// for deterministic quadrature, zero for the residue routes.
    Vector x_error_estimate;
    SolveRoute route = SolveRoute::residues;
    std::optional<QuadratureSpec> quadrature;
    double condition_estimate = 0.0;
    std::vector<std::string> warnings;

    double max_rel_err() const noexcept;
};

/// 1-norm condition number ||A||_1 ||A^-1||_1.
double condition_number_1(const Matrix& a);

/// LU with partial pivoting; for n <= 3 also cross-checked against Cramer's rule.
/// Throws SingularMatrix or NumericalInconsistency.
Vector solve_direct(const Matrix& a, std::span<const double> b);

/// integral over S^{n-1} of ||A^T u||^{-n}.
SphereIntegralResult cimmino_R_integral(const Matrix& a, const QuadratureSpec& spec);
/// n times the integral over S^{n-1} of ||A^T u||^{-n-2} <b, u> (A^T u)_i, i zero-based.
SphereIntegralResult cimmino_Ri_integral(const Matrix& a, std::span<const double> b, std::size_t i,
                                         const QuadratureSpec& spec);

/// Default rule for the integral route. The integrands peak with width about
/// 1/cond(A), so deterministic node counts grow linearly with the 1-norm
/// condition estimate; Monte Carlo (1e6 directions, seed 42) is used once the
/// product rule would exceed its per-dimension cost cap.
QuadratureSpec suggested_quadrature(const Matrix& a);

SolveReport solve_via_integrals(const Matrix& a, std::span<const double> b, const QuadratureSpec& spec);
SolveReport solve_via_residues(const Matrix& a, std::span<const double> b);
/// Residues taken numerically from the continued zeta functions; n <= 3.
SolveReport numeric_residue_solve(const Matrix& a, std::span<const double> b);

/// Relative error with |ref_i| as denominator, falling back to ||ref||_inf (then 1)
/// when ref_i is zero.
Vector relative_errors(std::span<const double> x, std::span<const double> ref);

}  // namespace cimmino
