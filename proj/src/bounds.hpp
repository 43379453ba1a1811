#pragma once

// Tail bounds for lattice sums of Gaussian-decaying terms.

#include <cstddef>
#include <functional>

namespace cimmino::detail {

/// Upper bound on sum over omega in Z^n with q(omega) > r of q^k e^{-c q},
/// for a form with smallest eigenvalue >= lambda. Valid when q^k e^{-c eta q}
/// decreases on [r, inf), i.e. r >= k / (c eta). Returned as a logarithm.
double log_gaussian_tail(double c, double k, double lambda, std::size_t n, double r, double eta);

/// Smallest r >= r_min (up to bisection accuracy) with log_bound(r) <= log_target,
/// for log_bound non-increasing on [r_min, inf).
double smallest_radius(const std::function<double(double)>& log_bound, double r_min, double log_target);

struct TailRadius {
    double radius;
    double bound;
};

/// Radius R with sum_{q > R} coef * q^k e^{-c q} <= target, optimised over the
/// split parameter eta.
TailRadius gaussian_tail_radius(double c, double k, double coef, double lambda, std::size_t n, double target);

/// Radius R such that the terms |q_B| |x^-a Gamma(a, x)|, x = pi q, summed over
/// q > R stay below target. weight_coef bounds |q_B| / q (0 for an unweighted sum).
TailRadius incomplete_gamma_tail_radius(double re_a, double weight_coef, double lambda, std::size_t n,
                                        double target);

}  // namespace cimmino::detail
