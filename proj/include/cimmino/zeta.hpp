#pragma once

// Epstein, weighted, lattice and vector-valued zeta functions of positive
// definite forms, with residues and functional-equation checks.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cimmino/linalg.hpp"
#include "cimmino/specfun.hpp"
#include "cimmino/tolerances.hpp"

namespace cimmino {

struct ZetaValue {
    Complex value;
    double abs_error = 0.0;
};

/// G(s) = scalar * pi^{-(s + pi_shift)} * Gamma(s + gamma_shift).
struct GammaFactorSpec {
    double scalar = 1.0;
    double pi_shift = 0.0;
    double gamma_shift = 0.0;

    Complex operator()(Complex s) const;
    /// Residue of G at its k-th pole s = -gamma_shift - k.
    double residue_at_pole(int k) const;
};

enum class ResidueSource { analytic, numeric };

struct PoleReport {
    double location = 0.0;
    std::vector<Complex> residue;  // one entry for scalar zeta functions
    ResidueSource source = ResidueSource::analytic;
};

struct FuncEqResidual {
    Complex s;
    Complex lhs;
    Complex rhs;
    double residual = 0.0;
};

// Direct summation. Valid only in the half-plane of absolute convergence.
// These use a smooth radial cutoff plus the asymptotic shell correction and
// report the change between radii R/2 and R as the error estimate.

ZetaValue epstein_direct(const SPDForm& q, Complex s, double tol);
ZetaValue weighted_direct(const SPDForm& q, const SymMatrix& b, Complex s, double tol);
/// Literal sum' ||A w||^{-2s} <b, w> A w, one value per component.
std::vector<ZetaValue> vector_zeta_direct(const Matrix& a, std::span<const double> b, Complex s, double tol);

// Analytic continuation to the whole plane except the poles.

ZetaValue epstein_continued(const SPDForm& q, Complex s);
ZetaValue weighted_continued(const SPDForm& q, const SymMatrix& b, Complex s);
/// Several weights against one form, sharing all incomplete gamma evaluations.
std::vector<ZetaValue> weighted_continued_multi(const SPDForm& q, std::span<const SymMatrix> bs, Complex s);

ZetaValue lattice_zeta(const Lattice& l, const SPDForm& q, Complex s);
ZetaValue lattice_weighted_zeta(const Lattice& l, const SPDForm& q, const SymMatrix& b, Complex s);

/// sum' ||A w||^{-2s} <b, w> A w.
std::vector<ZetaValue> vector_zeta(const Matrix& a, std::span<const double> b, Complex s);
/// sum' ||A w||^{-2s}.
ZetaValue norm_zeta(const Matrix& a, Complex s);

PoleReport residue_epstein(const Lattice& l, const SPDForm& q);
PoleReport residue_weighted(const Lattice& l, const SPDForm& q, const SymMatrix& b);
PoleReport residue_vector(const Matrix& a, std::span<const double> b);

using ZetaEvaluator = std::function<std::vector<Complex>(Complex)>;

/// Trapezoid rule for (1 / 2 pi i) times the contour integral over |s - s0| = rho.
PoleReport residue_numeric(const ZetaEvaluator& f, double s0, double rho = tol::residue_radius,
                           int m = tol::residue_nodes);

FuncEqResidual funceq_residual_lattice(const Lattice& l, const SPDForm& q, Complex s);
FuncEqResidual funceq_residual_weighted(const Lattice& l, const SPDForm& q, const SymMatrix& b, Complex s);
FuncEqResidual funceq_residual_vector(const Matrix& a, std::span<const double> b, std::span<const double> c,
                                      Complex s);

/// Volume of the unit ball in R^n.
double unit_ball_volume(std::size_t n);

}  // namespace cimmino
