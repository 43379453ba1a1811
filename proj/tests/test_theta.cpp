#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "cimmino/error.hpp"
#include "cimmino/theta.hpp"

using namespace cimmino;

namespace {

constexpr double kPi = std::numbers::pi;

using Point = std::vector<std::int64_t>;

std::set<Point> brute_force(const SymMatrix& q, double radius, std::int64_t box) {
    const std::size_t n = q.dim();
    std::set<Point> out;
    Point w(n, -box);
    while (true) {
        Vector x(w.begin(), w.end());
        const bool zero = std::all_of(w.begin(), w.end(), [](std::int64_t v) { return v == 0; });
        if (!zero && qeval(q, x) <= radius) out.insert(w);
        std::size_t k = 0;
        while (k < n && w[k] == box) w[k++] = -box;
        if (k == n) break;
        ++w[k];
    }
    return out;
}

std::set<Point> as_set(const EllipsoidPoints& pts) {
    std::set<Point> out;
    for (std::size_t i = 0; i < pts.size(); ++i) out.insert(Point(pts.omega(i).begin(), pts.omega(i).end()));
    return out;
}

const SymMatrix kQ213{{2, 1}, {1, 3}};

}  // namespace

TEST(Enumerate, Examples) {
    EXPECT_EQ(enumerate_ellipsoid(cholesky(SymMatrix::identity(2)), 1.0).size(), 4u);
    EXPECT_EQ(enumerate_ellipsoid(cholesky(SymMatrix::identity(2)), 2.0).size(), 8u);
    const EllipsoidPoints p = enumerate_ellipsoid(cholesky(SymMatrix::diagonal({1, 4})), 4.0);
    const std::set<Point> want{{1, 0}, {-1, 0}, {2, 0}, {-2, 0}, {0, 1}, {0, -1}};
    EXPECT_EQ(as_set(p), want);
}

TEST(Enumerate, SortedWithLexicographicTies) {
    const EllipsoidPoints p = enumerate_ellipsoid(cholesky(kQ213), 25.0);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        ASSERT_LE(p.q[i], p.q[i + 1]);
        if (p.q[i] == p.q[i + 1]) {
            const auto a = p.omega(i), b = p.omega(i + 1);
            EXPECT_TRUE(std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()));
        }
        EXPECT_LE(p.q[i], 25.0);
    }
}

TEST(Enumerate, MatchesBruteForce) {
    const std::vector<SymMatrix> forms{
        SymMatrix::identity(1), SymMatrix::diagonal({0.7}), SymMatrix::identity(2), kQ213,
        SymMatrix{{1, 0.45}, {0.45, 0.3}}, SymMatrix::identity(3),
        SymMatrix{{2, 0.5, -0.3}, {0.5, 1.5, 0.2}, {-0.3, 0.2, 1}}};
    for (const auto& q : forms) {
        const SPDForm f = cholesky(q);
        for (double radius : {0.5, 3.0, 12.0, 30.0}) {
            // Box half-width from q(x) >= lambda_min |x|^2.
            const auto box = static_cast<std::int64_t>(std::ceil(std::sqrt(radius / f.lambda_min_lower())));
            const EllipsoidPoints p = enumerate_ellipsoid(f, radius);
            EXPECT_EQ(as_set(p), brute_force(q, radius, box)) << q.dim() << ' ' << radius;
            EXPECT_EQ(p.size(), as_set(p).size());
            EXPECT_EQ(count_ellipsoid(f, radius, 1u << 30), p.size());
        }
    }
}

TEST(Enumerate, SymmetricUnderNegation) {
    const EllipsoidPoints p = enumerate_ellipsoid(cholesky(SymMatrix{{2, 0.5, -0.3}, {0.5, 1.5, 0.2}, {-0.3, 0.2, 1}}), 20.0);
    const std::set<Point> s = as_set(p);
    for (const auto& w : s) {
        Point m(w);
        for (auto& v : m) v = -v;
        EXPECT_TRUE(s.count(m));
    }
}

TEST(Enumerate, PointCap) {
    try {
        (void)enumerate_ellipsoid(cholesky(SymMatrix::identity(2)), 100.0, 10);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooManyPoints);
    }
    EXPECT_EQ(count_ellipsoid(cholesky(SymMatrix::identity(2)), 100.0, 10), 11u);
}

TEST(ThetaGaussian, Examples) {
    // jtheta(3, 0, e^-pi) - 1 and its square minus one (mpmath).
    EXPECT_NEAR(theta_star_gaussian(cholesky(SymMatrix::identity(1)), 1.0, 1e-16), 0.086434811213308014575, 1e-15);
    EXPECT_NEAR(theta_star_gaussian(cholesky(SymMatrix::identity(2)), 1.0, 1e-16), 0.18034059901609622605, 1e-15);
    const double big_t = theta_star_gaussian(cholesky(SymMatrix::identity(2)), 50.0, 1e-300);
    const double lead = 4.0 * std::exp(-50.0 * kPi);
    EXPECT_LT(std::abs(big_t - lead) / lead, 1e-10);
    EXPECT_NEAR(theta_star_gaussian(cholesky(kQ213), 0.7, 1e-16), 0.030054999520278433201, 1e-15);
}

TEST(ThetaWeighted, Examples) {
    const SPDForm i1 = cholesky(SymMatrix::identity(1));
    EXPECT_EQ(theta_star_weighted(cholesky(kQ213), SymMatrix::zero(2), 0.8, 1e-14), 0.0);
    EXPECT_NEAR(theta_star_weighted(i1, SymMatrix::identity(1), 1.0, 1e-16), 0.086455735275854044834, 1e-15);
    EXPECT_NEAR(theta_star_weighted(i1, SymMatrix::identity(1), 1.0, 1e-16), 0.0865036, 1e-4);

    const SPDForm i2 = cholesky(SymMatrix::identity(2));
    const double h = 1e-5;
    const double fd = -(theta_star_gaussian(i2, 1.0 + h, 1e-16) - theta_star_gaussian(i2, 1.0 - h, 1e-16)) / (2 * h) / kPi;
    EXPECT_NEAR(theta_star_weighted(i2, SymMatrix::identity(2), 1.0, 1e-16), fd, 1e-6);
}

TEST(Fourier, Examples) {
    const auto plain = fourier_gaussian_weighted(cholesky(SymMatrix::identity(2)));
    ASSERT_EQ(plain.size(), 1u);
    EXPECT_DOUBLE_EQ(plain[0].coeff, 1.0);
    EXPECT_FALSE(plain[0].weight);
    EXPECT_EQ(plain[0].form.base(), SymMatrix::identity(2));

    const auto w = fourier_gaussian_weighted(cholesky(SymMatrix::identity(2)), SymMatrix::identity(2));
    ASSERT_EQ(w.size(), 2u);
    EXPECT_DOUBLE_EQ(w[0].coeff, -1.0);
    ASSERT_TRUE(w[0].weight);
    EXPECT_EQ(*w[0].weight, SymMatrix::identity(2));
    EXPECT_EQ(w[0].form.base(), SymMatrix::identity(2));
    EXPECT_NEAR(w[1].coeff, 1.0 / kPi, 1e-15);
    EXPECT_FALSE(w[1].weight);

    const auto d = fourier_gaussian_weighted(cholesky(SymMatrix::diagonal({2, 2})));
    EXPECT_DOUBLE_EQ(d[0].coeff, 0.5);
    EXPECT_NEAR(d[0].form.base()(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(d[0].form.base()(1, 1), 0.5, 1e-15);
    EXPECT_EQ(d[0].form.base()(0, 1), 0.0);
}

TEST(Fourier, ValueAtOrigin) {
    const SPDForm f = cholesky(kQ213);
    const Vector zero{0, 0};
    EXPECT_DOUBLE_EQ((GaussianPolyFunction{2.5, std::nullopt, f})(zero), 2.5);
    EXPECT_DOUBLE_EQ((GaussianPolyFunction{2.5, SymMatrix::identity(2), f})(zero), 0.0);
    const Vector x{0.3, -0.2};
    EXPECT_NEAR((GaussianPolyFunction{1.0, SymMatrix::identity(2), f})(x),
                0.13 * std::exp(-kPi * qeval(kQ213, x)), 1e-16);
}

TEST(ThetaTransform, Examples) {
    EXPECT_LT(theta_transform_residual(cholesky(SymMatrix::identity(1)), 1.0), 1e-12);
    EXPECT_LT(theta_transform_residual(cholesky(SymMatrix::identity(2)), 2.0), 1e-12);
    EXPECT_LT(theta_transform_residual(cholesky(SymMatrix::diagonal({1, 4})), 0.5), 1e-12);
}

TEST(ThetaTransform, Grid) {
    for (const auto& q : {SymMatrix::identity(2), SymMatrix::diagonal({1, 4}), kQ213}) {
        const SPDForm f = cholesky(q);
        for (double t : {0.01, 0.5, 1.0, 2.0, 100.0}) EXPECT_LT(theta_transform_residual(f, t), 1e-12) << t;
    }
}

TEST(AsymptoticFit, Examples) {
    const std::vector<double> grid{0.1, 0.05, 0.02, 0.01};
    const AsymptoticFit a = theta_asymptotic_fit(cholesky(SymMatrix::identity(2)), grid);
    EXPECT_NEAR(a.alpha, 1.0, 1e-3);
    EXPECT_NEAR(a.residue, 1.0, 1e-3);
    const AsymptoticFit b = theta_asymptotic_fit(cholesky(SymMatrix::diagonal({4, 4})), grid);
    EXPECT_NEAR(b.alpha, 1.0, 1e-3);
    EXPECT_NEAR(b.residue, 0.25, 1e-3);
    const AsymptoticFit c = theta_asymptotic_fit(cholesky(SymMatrix::identity(1)), grid);
    EXPECT_NEAR(c.alpha, 0.5, 1e-3);
    EXPECT_NEAR(c.residue, 1.0, 1e-3);
}

TEST(AsymptoticFit, GridValidation) {
    const SPDForm f = cholesky(SymMatrix::identity(2));
    auto kind = [&](std::vector<double> g) {
        try {
            (void)theta_asymptotic_fit(f, g);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::EvaluationFailure;
    };
    EXPECT_EQ(kind({0.1, 0.05, 0.02}), ErrorKind::DegenerateGrid);
    EXPECT_EQ(kind({0.5, 0.3, 0.1, 0.05, 0.02}), ErrorKind::DegenerateGrid);
    EXPECT_EQ(kind({0.01, 0.02, 0.05, 0.1}), ErrorKind::InvalidArgument);
}

TEST(ThetaProperties, Scaling) {
    for (const auto& q : {SymMatrix::identity(2), kQ213, SymMatrix{{1, 0.2, 0}, {0.2, 2, 0.1}, {0, 0.1, 0.5}}}) {
        for (double t : {0.3, 1.0, 2.5}) {
            const double a = theta_star_gaussian(cholesky(q), t, 1e-16);
            const double b = theta_star_gaussian(cholesky(q.scaled(t)), 1.0, 1e-16);
            EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, a));
        }
    }
}

TEST(ThetaProperties, PermutationInvariance) {
    const SymMatrix q{{2, 0.5, -0.3}, {0.5, 1.5, 0.2}, {-0.3, 0.2, 1}};
    const SymMatrix b{{1, 0.1, 0}, {0.1, -2, 0.4}, {0, 0.4, 0.5}};
    const Matrix p = Matrix::from_rows({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
    const SymMatrix qp = gram_transform(q, p), bp = gram_transform(b, p);
    EXPECT_NEAR(theta_star_gaussian(cholesky(q), 0.4, 1e-15), theta_star_gaussian(cholesky(qp), 0.4, 1e-15), 1e-13);
    EXPECT_NEAR(theta_star_weighted(cholesky(q), b, 0.4, 1e-15), theta_star_weighted(cholesky(qp), bp, 0.4, 1e-15),
                1e-13);
}

TEST(ThetaProperties, StrictlyDecreasing) {
    const SPDForm f = cholesky(kQ213);
    double prev = theta_star_gaussian(f, 0.05, 1e-14);
    for (double t = 0.1; t < 8.0; t *= 1.5) {
        const double v = theta_star_gaussian(f, t, 1e-16);
        EXPECT_LT(v, prev) << t;
        prev = v;
    }
}

TEST(ThetaProperties, Deterministic) {
    const SPDForm f = cholesky(SymMatrix{{1, 0.2, 0}, {0.2, 2, 0.1}, {0, 0.1, 0.5}});
    EXPECT_EQ(theta_star_gaussian(f, 0.2, 1e-14), theta_star_gaussian(f, 0.2, 1e-14));
}
