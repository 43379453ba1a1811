#pragma once

#include <cstddef>
#include <vector>

namespace cimmino::detail {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// m-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_m).
GaussRule gauss_legendre(std::size_t m);

/// The same rule mapped to [a, b].
GaussRule gauss_legendre(std::size_t m, double a, double b);

}  // namespace cimmino::detail
