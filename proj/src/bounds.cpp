#include "bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cimmino::detail {

namespace {
constexpr double kEtas[] = {0.5, 0.6, 0.7, 0.8, 0.85, 0.9, 0.95};
}

double log_gaussian_tail(double c, double k, double lambda, std::size_t n, double r, double eta) {
    const double per_axis = 1.0 + std::sqrt(std::numbers::pi / (c * (1.0 - eta) * lambda));
    const double lr = k == 0.0 ? 0.0 : k * std::log(r);
    return lr - c * eta * r + static_cast<double>(n) * std::log(per_axis);
}

double smallest_radius(const std::function<double(double)>& log_bound, double r_min, double log_target) {
    double lo = r_min;
    if (log_bound(lo) <= log_target) return lo;
    double hi = std::max(2.0 * lo, 1.0);
    while (log_bound(hi) > log_target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) return std::numeric_limits<double>::infinity();
    }
    for (int i = 0; i < 100 && hi - lo > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (log_bound(mid) <= log_target ? hi : lo) = mid;
    }
    return hi;
}

TailRadius gaussian_tail_radius(double c, double k, double coef, double lambda, std::size_t n, double target) {
    TailRadius best{std::numeric_limits<double>::infinity(), 0.0};
    if (coef <= 0.0) return {0.0, 0.0};
    const double log_target = std::log(target / coef);
    for (double eta : kEtas) {
        const double r_min = std::max(k / (c * eta), 1e-3 / c);
        auto lb = [&](double r) { return log_gaussian_tail(c, k, lambda, n, r, eta); };
        const double r = smallest_radius(lb, r_min, log_target);
        if (r < best.radius) best = {r, coef * std::exp(lb(r))};
    }
    return best;
}

TailRadius incomplete_gamma_tail_radius(double re_a, double weight_coef, double lambda, std::size_t n,
                                        double target) {
    // |x^-a Gamma(a,x)| <= 2 e^-x / x once x >= 2 (Re a - 1); with x = pi q > pi R
    // the tail is at most (2 / (pi R)) sum_{q>R} w(q) e^{-pi q}.
    const double pi = std::numbers::pi;
    const double k = weight_coef > 0.0 ? 1.0 : 0.0;
    const double coef = weight_coef > 0.0 ? weight_coef : 1.0;
    const double r_floor = std::max({2.0 * (re_a - 1.0) / pi, 1e-3});
    TailRadius best{std::numeric_limits<double>::infinity(), 0.0};
    for (double eta : kEtas) {
        const double r_min = std::max(r_floor, k / (pi * eta));
        auto lb = [&](double r) {
            return std::log(2.0 * coef / (pi * r)) + log_gaussian_tail(pi, k, lambda, n, r, eta);
        };
        const double r = smallest_radius(lb, r_min, std::log(target));
        if (r < best.radius) best = {r, std::exp(lb(r))};
    }
    return best;
}

}  // namespace cimmino::detail
