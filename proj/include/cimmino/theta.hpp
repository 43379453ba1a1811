#pragma once

// Lattice point enumeration in ellipsoids and theta series of the Gaussian
// families x -> e^{-pi q_Q(x)} and x -> q_B(x) e^{-pi q_Q(x)}.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cimmino/linalg.hpp"
#include "cimmino/tolerances.hpp"

namespace cimmino {

/// Nonzero integer points with q(omega) <= radius, sorted by (q, omega lexicographic).
struct EllipsoidPoints {
    SPDForm form;
    double radius = 0.0;
    std::vector<std::int64_t> coords;  // size() * dim, row per point
    std::vector<double> q;

    std::size_t size() const noexcept { return q.size(); }
    std::size_t dim() const noexcept { return form.dim(); }
    std::span<const std::int64_t> omega(std::size_t i) const noexcept {
        return {coords.data() + i * dim(), dim()};
    }
};

using PointVisitor = std::function<void(std::span<const std::int64_t> omega, double q)>;

/// Streams every nonzero omega with q(omega) <= radius in enumeration order
/// (not sorted). q is evaluated directly from the form, so q(-omega) == q(omega)
/// bit for bit.
void visit_ellipsoid(const SPDForm& form, double radius, const PointVisitor& visit);

/// Counts points without storing them; stops early once the count exceeds cap.
std::size_t count_ellipsoid(const SPDForm& form, double radius, std::size_t cap);

/// Throws TooManyPoints when more than cap points would be produced.
EllipsoidPoints enumerate_ellipsoid(const SPDForm& form, double radius,
                                    std::size_t cap = tol::default_point_cap);

/// x -> coeff * q_B(x) * e^{-pi q_Q(x)}, or coeff * e^{-pi q_Q(x)} without weight.
struct GaussianPolyFunction {
    double coeff = 1.0;
    std::optional<SymMatrix> weight;
    SPDForm form;

    double operator()(std::span<const double> x) const;
};

/// Fourier transforms of the Gaussian family: one term without B, two with B.
std::vector<GaussianPolyFunction> fourier_gaussian_weighted(const SPDForm& q,
                                                            const std::optional<SymMatrix>& b = std::nullopt);

/// sum' e^{-pi t q(omega)} with truncation error below tol.
double theta_star_gaussian(const SPDForm& q, double t, double tol);

/// sum' t q_B(omega) e^{-pi t q(omega)} with truncation error below tol.
double theta_star_weighted(const SPDForm& q, const SymMatrix& b, double t, double tol);

/// |theta(g_Q, t) - t^{-n/2} det^{-1/2} theta(g_{Q^-1}, 1/t)| with theta = theta* + 1.
double theta_transform_residual(const SPDForm& q, double t);

struct AsymptoticFit {
    double alpha;
    double residue;
};

/// Least-squares fit of theta(g_Q, t) ~ R t^{-alpha} over small t. The fit is
/// done on log(theta* + 1), whose small-t expansion has no constant offset.
AsymptoticFit theta_asymptotic_fit(const SPDForm& q, std::span<const double> t_grid);

}  // namespace cimmino
