#pragma once

#include <cstddef>

// Every fixed numerical threshold used by the library lives here.
namespace cimmino::tol {

// linalg
inline constexpr double symmetry = 1e-12;          // |a_ij - a_ji| / max(1, max|a|)
inline constexpr double cholesky_pivot = 1e-14;    // pivot <= n * this * max|Q_ij| fails
inline constexpr double singular_det = 1e-300;     // |det A| at or below is singular

// specfun
inline constexpr double gamma_pole = 1e-12;        // distance to a non-positive integer
inline constexpr double series_eps = 1e-17;        // relative term size ending a series / CF
inline constexpr int max_series_terms = 200000;
inline constexpr double igamma_integer_zone = 0.25;  // Cauchy-circle fallback radius trigger
inline constexpr double igamma_circle_radius = 0.5;
inline constexpr int igamma_circle_nodes = 64;

// lattice enumeration
inline constexpr std::size_t default_point_cap = 100'000'000;

// zeta
inline constexpr double pole_exclusion = 1e-6;
inline constexpr double continued_tail = 1e-17;    // absolute tail bound per termwise sum
inline constexpr double residue_radius = 0.25;
inline constexpr int residue_nodes = 16;
inline constexpr std::size_t direct_point_cap = 40'000'000;

// solver
inline constexpr double cramer_agreement = 1e-12;
inline constexpr double condition_warning = 1e6;

}  // namespace cimmino::tol
