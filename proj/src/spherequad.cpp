#include "cimmino/spherequad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cimmino/error.hpp"
#include "gauss_legendre.hpp"

namespace cimmino {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kBlockSeedMix = 0xD1B54A32D192ED03ULL;

std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

void check_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) throw Error(ErrorKind::NonFiniteIntegrand, "integrand returned a non-finite value");
}

// Calls visit(u, weight) for every node of a deterministic rule.
template <class Visit>
void circle_rule(std::size_t nodes, Visit&& visit) {
    std::vector<double> u(2);
    const double w = 2.0 * kPi / static_cast<double>(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        const double th = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(nodes);
        u[0] = std::cos(th);
        u[1] = std::sin(th);
        visit(u, w);
    }
}

// Spherical coordinates: polar angles theta_1..theta_{n-2} on [0, pi] with
// Gauss-Legendre order m (density sin^{n-1-i}), azimuth with 2m trapezoid points.
template <class Visit>
void product_rule(std::size_t n, std::size_t m, Visit&& visit) {
    const detail::GaussRule g = detail::gauss_legendre(m, 0.0, kPi);
    const std::size_t polar = n - 2;
    const std::size_t az = 2 * m;
    std::vector<double> sin_t(m), cos_t(m);
    for (std::size_t i = 0; i < m; ++i) {
        sin_t[i] = std::sin(g.nodes[i]);
        cos_t[i] = std::cos(g.nodes[i]);
    }
    std::vector<std::size_t> idx(polar, 0);
    std::vector<double> u(n);
    const double w_az = 2.0 * kPi / static_cast<double>(az);
    while (true) {
        double w = w_az;
        double radius = 1.0;
        for (std::size_t a = 0; a < polar; ++a) {
            const std::size_t i = idx[a];
            u[a] = radius * cos_t[i];
            w *= g.weights[i] * std::pow(sin_t[i], static_cast<double>(n - 2 - a));
            radius *= sin_t[i];
        }
        for (std::size_t k = 0; k < az; ++k) {
            const double phi = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(az);
            u[n - 2] = radius * std::cos(phi);
            u[n - 1] = radius * std::sin(phi);
            visit(u, w);
        }
        std::size_t a = 0;
        while (a < polar && ++idx[a] == m) idx[a++] = 0;
        if (a == polar) break;
    }
}

std::vector<double> deterministic_pass(const SphereVectorIntegrand& f, std::size_t n, std::size_t outputs,
                                       QuadMethod method, std::size_t nodes) {
    std::vector<double> acc(outputs, 0.0), val(outputs);
    auto visit = [&](std::span<const double> u, double w) {
        f(u, val);
        check_finite(val);
        for (std::size_t j = 0; j < outputs; ++j) acc[j] += w * val[j];
    };
    if (method == QuadMethod::circle_trapezoid)
        circle_rule(nodes, visit);
    else
        product_rule(n, nodes, visit);
    return acc;
}

// Running mean and co-moment matrix, merged blockwise in a fixed order.
struct Moments {
    double count = 0.0;
    std::vector<double> mean;
    std::vector<double> comoment;

    explicit Moments(std::size_t k) : mean(k, 0.0), comoment(k * k, 0.0) {}

    void add(std::span<const double> y) {
        const std::size_t k = mean.size();
        count += 1.0;
        std::vector<double> d(k);
        for (std::size_t i = 0; i < k; ++i) {
            d[i] = y[i] - mean[i];
            mean[i] += d[i] / count;
        }
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) comoment[i * k + j] += d[i] * (y[j] - mean[j]);
    }

    void merge(const Moments& o) {
        if (o.count == 0.0) return;
        const std::size_t k = mean.size();
        const double total = count + o.count;
        std::vector<double> d(k);
        for (std::size_t i = 0; i < k; ++i) d[i] = o.mean[i] - mean[i];
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                comoment[i * k + j] += o.comoment[i * k + j] + d[i] * d[j] * count * o.count / total;
        for (std::size_t i = 0; i < k; ++i) mean[i] += d[i] * o.count / total;
        count = total;
    }
};

SphereVectorResult monte_carlo(const SphereVectorIntegrand& f, std::size_t n, std::size_t outputs,
                               const QuadratureSpec& spec) {
    if (spec.nodes < 2) throw Error(ErrorKind::InvalidArgument, "Monte Carlo needs at least 2 samples");
    const std::size_t pairs = spec.nodes;
    const std::size_t blocks = (pairs + kMonteCarloBlock - 1) / kMonteCarloBlock;
    Moments total(outputs);
    std::vector<double> plus(outputs), minus(outputs), y(outputs), neg(n);
    for (std::size_t b = 0; b < blocks; ++b) {
        Xoshiro256 rng(spec.seed ^ (static_cast<std::uint64_t>(b) * kBlockSeedMix));
        Moments block(outputs);
        const std::size_t count = std::min(kMonteCarloBlock, pairs - b * kMonteCarloBlock);
        for (std::size_t p = 0; p < count; ++p) {
            const Vector u = gaussian_direction(rng, n);
            for (std::size_t i = 0; i < n; ++i) neg[i] = -u[i];
            f(u, plus);
            f(neg, minus);
            check_finite(plus);
            check_finite(minus);
            for (std::size_t j = 0; j < outputs; ++j) y[j] = 0.5 * (plus[j] + minus[j]);
            block.add(y);
        }
        total.merge(block);
    }
    const double area = sphere_surface_measure(n);
    const double np = total.count;
    SphereVectorResult r;
    r.covariance.resize(outputs * outputs);
    for (std::size_t i = 0; i < outputs * outputs; ++i) r.covariance[i] = area * area * total.comoment[i] / ((np - 1.0) * np);
    for (std::size_t j = 0; j < outputs; ++j) {
        r.values.push_back(area * total.mean[j]);
        r.error_estimates.push_back(3.0 * std::sqrt(r.covariance[j * outputs + j]));
    }
    return r;
}

void validate(std::size_t n, const QuadratureSpec& spec) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "sphere dimension must be at least 1");
    if (spec.nodes == 0) throw Error(ErrorKind::InvalidArgument, "quadrature needs at least one node");
    if (n == 1) return;
    switch (spec.method) {
        case QuadMethod::circle_trapezoid:
            if (n != 2) throw Error(ErrorKind::InvalidArgument, "circle_trapezoid requires n = 2");
            break;
        case QuadMethod::product_gauss:
            if (n < 3 || n > 5) throw Error(ErrorKind::InvalidArgument, "product_gauss requires 3 <= n <= 5");
            break;
        case QuadMethod::monte_carlo:
            break;
    }
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Xoshiro256::Xoshiro256(std::uint64_t seed) {
    for (auto& w : s_) w = splitmix64(seed);
}

std::uint64_t Xoshiro256::next() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Xoshiro256::uniform() noexcept { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

double Xoshiro256::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double th = 2.0 * kPi * uniform();
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
}

Vector gaussian_direction(Xoshiro256& rng, std::size_t n) {
    Vector u(n);
    while (true) {
        for (double& x : u) x = rng.normal();
        const double len = norm2(u);
        if (len > 0.0) {
            for (double& x : u) x /= len;
            return u;
        }
    }
}

double sphere_surface_measure(std::size_t n) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "sphere dimension must be at least 1");
    if (n == 1) return 2.0;
    const double h = 0.5 * static_cast<double>(n);
    return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

SphereVectorResult sphere_integrate_vector(const SphereVectorIntegrand& f, std::size_t n, std::size_t outputs,
                                           const QuadratureSpec& spec) {
    validate(n, spec);
    if (n == 1) {
        std::vector<double> a(outputs), b(outputs);
        const double up[1] = {1.0}, down[1] = {-1.0};
        f(up, a);
        f(down, b);
        check_finite(a);
        check_finite(b);
        SphereVectorResult r{std::vector<double>(outputs), std::vector<double>(outputs, 0.0), {}};
        for (std::size_t j = 0; j < outputs; ++j) r.values[j] = a[j] + b[j];
        if (spec.method == QuadMethod::monte_carlo) r.covariance.assign(outputs * outputs, 0.0);
        return r;
    }
    if (spec.method == QuadMethod::monte_carlo) return monte_carlo(f, n, outputs, spec);

    SphereVectorResult r;
    r.values = deterministic_pass(f, n, outputs, spec.method, spec.nodes);
    const std::vector<double> coarse =
        deterministic_pass(f, n, outputs, spec.method, std::max<std::size_t>(1, spec.nodes / 2));
    for (std::size_t j = 0; j < outputs; ++j) r.error_estimates.push_back(std::abs(r.values[j] - coarse[j]));
    return r;
}

SphereIntegralResult sphere_integrate(const SphereIntegrand& f, std::size_t n, const QuadratureSpec& spec) {
    const auto r = sphere_integrate_vector([&](std::span<const double> u, std::span<double> out) { out[0] = f(u); },
                                           n, 1, spec);
    return {r.values[0], r.error_estimates[0]};
}

SphereIntegralResult epstein_residue_integral(const Matrix& a, const SymMatrix& q, const QuadratureSpec& spec) {
    const std::size_t n = a.dim();
    if (q.dim() != n) throw Error(ErrorKind::DimensionMismatch, "form dimension");
    const double p = -0.5 * static_cast<double>(n);
    return sphere_integrate([&](std::span<const double> u) { return std::pow(qeval(q, a * u), p); }, n, spec);
}

SphereIntegralResult weighted_residue_integral(const Matrix& a, const SymMatrix& q, const SymMatrix& b,
                                               const QuadratureSpec& spec) {
    const std::size_t n = a.dim();
    if (q.dim() != n || b.dim() != n) throw Error(ErrorKind::DimensionMismatch, "form dimension");
    const double p = -(0.5 * static_cast<double>(n) + 1.0);
    return sphere_integrate(
        [&](std::span<const double> u) {
            const Vector x = a * u;
            return qeval(b, x) * std::pow(qeval(q, x), p);
        },
        n, spec);
}

}  // namespace cimmino
