#pragma once

// Integration over the unit sphere S^{n-1} with its unnormalised surface measure.
//
// Monte Carlo generator, fixed so results are reproducible bit for bit:
//   * splitmix64: z += 0x9E3779B97F4A7C15; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//     z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31).
//   * xoshiro256**: state words s0..s3 filled by four splitmix64 outputs;
//     result = rotl(s1 * 5, 7) * 9, then the standard xoshiro256 state update.
//   * uniform in (0, 1]: ((x >> 11) + 1) * 2^-53.
//   * normals: Box-Muller, both outputs used (cos branch first).
//   * each of the `nodes` sampled directions u is evaluated together with -u;
//     samples are split into blocks of kMonteCarloBlock such pairs; block b
//     is seeded with seed ^ (b * 0xD1B54A32D192ED03) and blocks are reduced in
//     index order.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cimmino/linalg.hpp"

namespace cimmino {

enum class QuadMethod { circle_trapezoid, product_gauss, monte_carlo };

struct QuadratureSpec {
    QuadMethod method = QuadMethod::circle_trapezoid;
    std::size_t nodes = 512;  // trapezoid points, Gauss order per polar angle, or MC directions
    std::uint64_t seed = 0;
};

struct SphereIntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;  // MC: 3 standard errors; otherwise the change from a coarser rule
};

/// Several integrals computed from the same nodes or samples.
struct SphereVectorResult {
    std::vector<double> values;
    std::vector<double> error_estimates;
    /// Covariance of the estimates (k x k, row-major); Monte Carlo only.
    std::vector<double> covariance;
};

constexpr std::size_t kMonteCarloBlock = 4096;

class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed);
    std::uint64_t next() noexcept;
    /// Uniform in (0, 1].
    double uniform() noexcept;
    double normal() noexcept;

private:
    std::uint64_t s_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Uniformly distributed unit vector (normalised standard Gaussian).
Vector gaussian_direction(Xoshiro256& rng, std::size_t n);

/// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2); 2 for n = 1.
double sphere_surface_measure(std::size_t n);

using SphereIntegrand = std::function<double(std::span<const double>)>;
using SphereVectorIntegrand = std::function<void(std::span<const double> u, std::span<double> out)>;

/// Throws InvalidArgument for a method unsuited to n, NonFiniteIntegrand on a bad value.
SphereIntegralResult sphere_integrate(const SphereIntegrand& f, std::size_t n, const QuadratureSpec& spec);
SphereVectorResult sphere_integrate_vector(const SphereVectorIntegrand& f, std::size_t n, std::size_t outputs,
                                           const QuadratureSpec& spec);

/// integral of q_Q(A u)^{-n/2} over the sphere.
SphereIntegralResult epstein_residue_integral(const Matrix& a, const SymMatrix& q, const QuadratureSpec& spec);
/// integral of q_B(A u) q_Q(A u)^{-(n/2+1)} over the sphere.
SphereIntegralResult weighted_residue_integral(const Matrix& a, const SymMatrix& q, const SymMatrix& b,
                                               const QuadratureSpec& spec);

}  // namespace cimmino
