#include "cimmino/theta.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "bounds.hpp"
#include "cimmino/error.hpp"
#include "summation.hpp"

namespace cimmino {

namespace {

constexpr double kPi = std::numbers::pi;

double qeval_int(const SymMatrix& q, std::span<const std::int64_t> x, std::vector<double>& buf) {
    for (std::size_t i = 0; i < x.size(); ++i) buf[i] = static_cast<double>(x[i]);
    return qeval(q, buf);
}

// Fincke-Pohst style search using q(x) = ||L^T x||^2, fixing coordinates from
// the last one down. Returns false if the visitor asked to stop.
template <class Visitor>
bool enumerate_impl(const SPDForm& form, double radius, Visitor&& visit) {
    const std::size_t n = form.dim();
    const Matrix& l = form.chol();
    std::vector<std::int64_t> x(n, 0);
    std::vector<double> buf(n);
    const double budget = radius * (1.0 + 1e-10) + 1e-300;

    auto rec = [&](auto&& self, std::size_t i, double partial) -> bool {
        double c = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) c += l(j, i) * static_cast<double>(x[j]);
        const double rem = budget - partial;
        if (rem < 0.0) return true;
        const double uii = l(i, i);
        const double w = std::sqrt(rem) / uii;
        const double centre = -c / uii;
        const auto lo = static_cast<std::int64_t>(std::ceil(centre - w));
        const auto hi = static_cast<std::int64_t>(std::floor(centre + w));
        for (std::int64_t xi = lo; xi <= hi; ++xi) {
            x[i] = xi;
            const double v = uii * static_cast<double>(xi) + c;
            const double p = partial + v * v;
            if (i == 0) {
                if (std::all_of(x.begin(), x.end(), [](std::int64_t e) { return e == 0; })) continue;
                const double q = qeval_int(form.base(), x, buf);
                if (q <= radius && !visit(std::span<const std::int64_t>(x), q)) return false;
            } else if (!self(self, i - 1, p)) {
                return false;
            }
        }
        x[i] = 0;
        return true;
    };
    return rec(rec, n - 1, 0.0);
}

}  // namespace

void visit_ellipsoid(const SPDForm& form, double radius, const PointVisitor& visit) {
    if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
    enumerate_impl(form, radius, [&](std::span<const std::int64_t> w, double q) {
        visit(w, q);
        return true;
    });
}

std::size_t count_ellipsoid(const SPDForm& form, double radius, std::size_t cap) {
    if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
    std::size_t count = 0;
    enumerate_impl(form, radius, [&](std::span<const std::int64_t>, double) { return ++count <= cap; });
    return count;
}

EllipsoidPoints enumerate_ellipsoid(const SPDForm& form, double radius, std::size_t cap) {
    const std::size_t count = count_ellipsoid(form, radius, cap);
    if (count > cap)
        throw Error(ErrorKind::TooManyPoints, "more than " + std::to_string(cap) + " points within radius " +
                                                  std::to_string(radius));
    const std::size_t n = form.dim();
    std::vector<std::int64_t> coords;
    std::vector<double> qs;
    coords.reserve(count * n);
    qs.reserve(count);
    enumerate_impl(form, radius, [&](std::span<const std::int64_t> w, double q) {
        coords.insert(coords.end(), w.begin(), w.end());
        qs.push_back(q);
        return true;
    });

    std::vector<std::size_t> order(qs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (qs[a] != qs[b]) return qs[a] < qs[b];
        return std::lexicographical_compare(coords.begin() + a * n, coords.begin() + (a + 1) * n,
                                            coords.begin() + b * n, coords.begin() + (b + 1) * n);
    });

    EllipsoidPoints out{form, radius, {}, {}};
    out.coords.reserve(coords.size());
    out.q.reserve(qs.size());
    for (std::size_t idx : order) {
        out.coords.insert(out.coords.end(), coords.begin() + idx * n, coords.begin() + (idx + 1) * n);
        out.q.push_back(qs[idx]);
    }
    return out;
}

double GaussianPolyFunction::operator()(std::span<const double> x) const {
    const double w = weight ? qeval(*weight, x) : 1.0;
    return coeff * w * std::exp(-kPi * qeval(form.base(), x));
}

std::vector<GaussianPolyFunction> fourier_gaussian_weighted(const SPDForm& q, const std::optional<SymMatrix>& b) {
    const SPDForm dual = q.inverse_form();
    const double root_det = std::sqrt(q.det());
    if (!b) return {GaussianPolyFunction{1.0 / root_det, std::nullopt, dual}};
    if (b->dim() != q.dim()) throw Error(ErrorKind::DimensionMismatch, "weight dimension");
    const SymMatrix c = gram_transform(*b, q.inv().matrix());
    const double tr = trace_product(q, *b);
    return {GaussianPolyFunction{-1.0 / root_det, c, dual},
            GaussianPolyFunction{tr / (2.0 * kPi * root_det), std::nullopt, dual}};
}

double theta_star_gaussian(const SPDForm& q, double t, double tol) {
    if (!(t > 0.0) || !(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "t and tol must be positive");
    const auto tail = detail::gaussian_tail_radius(kPi * t, 0.0, 1.0, q.lambda_min_lower(), q.dim(), tol / 10.0);
    const EllipsoidPoints pts = enumerate_ellipsoid(q, tail.radius);
    detail::CompensatedSum sum;
    for (double qi : pts.q) sum.add(std::exp(-kPi * t * qi));
    return sum.value();
}

double theta_star_weighted(const SPDForm& q, const SymMatrix& b, double t, double tol) {
    if (!(t > 0.0) || !(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "t and tol must be positive");
    if (b.dim() != q.dim()) throw Error(ErrorKind::DimensionMismatch, "weight dimension");
    const double coef = t * norm_inf(b.matrix()) / q.lambda_min_lower();
    if (coef == 0.0) return 0.0;
    const auto tail = detail::gaussian_tail_radius(kPi * t, 1.0, coef, q.lambda_min_lower(), q.dim(), tol / 10.0);
    const EllipsoidPoints pts = enumerate_ellipsoid(q, tail.radius);
    detail::CompensatedSum sum;
    std::vector<double> buf(q.dim());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto w = pts.omega(i);
        for (std::size_t k = 0; k < w.size(); ++k) buf[k] = static_cast<double>(w[k]);
        sum.add(t * qeval(b, buf) * std::exp(-kPi * t * pts.q[i]));
    }
    return sum.value();
}

double theta_transform_residual(const SPDForm& q, double t) {
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "t must be positive");
    const double half_n = 0.5 * static_cast<double>(q.dim());
    const double factor = std::pow(t, -half_n) / std::sqrt(q.det());
    const double scale = std::max(1.0, factor);
    const double lhs = 1.0 + theta_star_gaussian(q, t, 1e-17 * scale);
    const double rhs = factor * (1.0 + theta_star_gaussian(q.inverse_form(), 1.0 / t, 1e-17 * scale / factor));
    return std::abs(lhs - rhs);
}

AsymptoticFit theta_asymptotic_fit(const SPDForm& q, std::span<const double> t_grid) {
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] < t_grid[i - 1])) throw Error(ErrorKind::InvalidArgument, "t grid must be decreasing");
    std::vector<double> xs, ys;
    for (double t : t_grid) {
        if (!(t > 0.0 && t <= 0.2)) continue;
        const double theta = theta_star_gaussian(q, t, 1e-14);
        if (!(theta > 0.0) || !std::isfinite(theta)) continue;
        xs.push_back(std::log(t));
        ys.push_back(std::log(theta + 1.0));
    }
    if (xs.size() < 4) throw Error(ErrorKind::DegenerateGrid, "fewer than 4 usable grid points");
    const double m = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw Error(ErrorKind::DegenerateGrid, "grid has no spread");
    const double slope = sxy / sxx;
    return {-slope, std::exp(my - slope * mx)};
}

}  // namespace cimmino
