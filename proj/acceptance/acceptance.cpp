// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cimmino/error.hpp"
#include "cimmino/io.hpp"
#include "cimmino/solver.hpp"
#include "cimmino/spherequad.hpp"
#include "cimmino/theta.hpp"
#include "cimmino/zeta.hpp"

using namespace cimmino;

namespace {

constexpr double kPi = std::numbers::pi;

// Tracks the worst ratio measured/bound over all checks of one criterion.
class Criterion {
public:
    explicit Criterion(int id) : id_(id), start_(std::chrono::steady_clock::now()) {}

    void check(const std::string& what, double measured, double bound) {
        ++checks_;
        const double ratio = measured / bound;
        if (!(std::isfinite(measured) && measured <= bound)) {
            ++failures_;
            if (failures_ <= 5) std::printf("    fail: %s measured %.3e bound %.1e\n", what.c_str(), measured, bound);
        }
        if (!std::isfinite(ratio) || ratio > worst_ratio_) {
            worst_ratio_ = std::isfinite(ratio) ? ratio : 1e300;
            worst_ = what;
            worst_measured_ = measured;
            worst_bound_ = bound;
        }
    }

    void require(const std::string& what, bool ok) {
        ++checks_;
        if (!ok) {
            ++failures_;
            if (failures_ <= 5) std::printf("    fail: %s\n", what.c_str());
        }
    }

    void error(const std::string& what, const std::exception& e) {
        ++checks_;
        ++failures_;
        std::printf("    fail: %s threw %s\n", what.c_str(), e.what());
    }

    bool report(const std::string& title) const {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        const bool pass = failures_ == 0 && checks_ > 0;
        std::printf("criterion %d: %s  %s  (%d checks, %d failed; worst %s: %.3e vs %.1e; %.1fs)\n", id_,
                    pass ? "PASS" : "FAIL", title.c_str(), checks_, failures_, worst_.c_str(), worst_measured_,
                    worst_bound_, secs);
        std::fflush(stdout);
        return pass;
    }

private:
    int id_;
    std::chrono::steady_clock::time_point start_;
    int checks_ = 0;
    int failures_ = 0;
    double worst_ratio_ = -1.0;
    std::string worst_ = "none";
    double worst_measured_ = 0.0;
    double worst_bound_ = 0.0;
};

std::string str(Complex s) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%g%+gi)", s.real(), s.imag());
    return buf;
}

// ---------------------------------------------------------------------------
// test forms and lattices

struct FormCase {
    std::string name;
    SymMatrix q;
    Lattice lattice;
};

SymMatrix random_spd(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = 0.5 * u(rng) + (i == j ? 1.0 : 0.0);
    Matrix g = m.transpose() * m;
    for (std::size_t i = 0; i < n; ++i) g(i, i) += 0.3;
    return SymMatrix(g);
}

Matrix random_generator(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0), scale(0.7, 1.5);
    Matrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = i == j ? scale(rng) : 0.3 * u(rng);
    return a;
}

SymMatrix random_sym(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = u(rng);
    return SymMatrix(m);
}

// Ten random forms on random lattices, n = 1..4, plus the standard examples.
std::vector<FormCase> random_cases() {
    std::mt19937_64 rng(20240601);
    std::vector<FormCase> out;
    const std::size_t dims[] = {1, 1, 2, 2, 2, 3, 3, 3, 4, 4};
    for (std::size_t k = 0; k < 10; ++k) {
        const std::size_t n = dims[k];
        out.push_back({"random" + std::to_string(k) + "_n" + std::to_string(n), random_spd(rng, n),
                       Lattice(random_generator(rng, n))});
    }
    return out;
}

std::vector<FormCase> standard_cases() {
    return {
        {"I2_Z2", SymMatrix::identity(2), Lattice::integer(2)},
        {"I1_Z1", SymMatrix::identity(1), Lattice::integer(1)},
        {"I2_diag23", SymMatrix::identity(2), Lattice(Matrix::diagonal({2, 3}))},
        {"diag14_Z2", SymMatrix::diagonal({1, 4}), Lattice::integer(2)},
        {"Q213_Z2", SymMatrix{{2, 1}, {1, 3}}, Lattice::integer(2)},
        {"Q213_shear", SymMatrix{{2, 1}, {1, 3}}, Lattice(Matrix::from_rows({{1, 1}, {0, 1}}))},
        {"I3_Z3", SymMatrix::identity(3), Lattice::integer(3)},
    };
}

std::vector<FormCase> all_cases() {
    auto a = standard_cases();
    auto b = random_cases();
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

double lattice_volume(const Lattice& l) { return l.volume(); }

// ---------------------------------------------------------------------------

bool criterion1() {
    Criterion c(1);
    for (const auto& fc : all_cases()) {
        try {
            const SPDForm f = cholesky(fc.q);
            const double n = static_cast<double>(fc.q.dim());
            const double want =
                std::pow(kPi, n / 2) / (gamma_complex(n / 2).real() * lattice_volume(fc.lattice) * std::sqrt(f.det()));
            const PoleReport num = residue_numeric(
                [&](Complex s) { return std::vector<Complex>{lattice_zeta(fc.lattice, f, s).value}; }, n / 2);
            c.check(fc.name + " numeric", std::abs(num.residue[0] - want), 1e-8);
            c.check(fc.name + " analytic", std::abs(residue_epstein(fc.lattice, f).residue[0] - want), 1e-12 * want);
        } catch (const std::exception& e) {
            c.error(fc.name, e);
        }
    }
    const SPDForm i2 = cholesky(SymMatrix::identity(2));
    const PoleReport r = residue_numeric([&](Complex s) { return std::vector<Complex>{epstein_continued(i2, s).value}; }, 1.0);
    c.check("I2_Z2 equals pi", std::abs(r.residue[0] - kPi), 1e-8);
    return c.report("Epstein residue at n/2, numeric vs closed form");
}

bool criterion2() {
    Criterion c(2);
    for (const auto& fc : all_cases()) {
        try {
            const SPDForm g = cholesky(gram_transform(fc.q, fc.lattice.gen()));
            c.check(fc.name, std::abs(epstein_continued(g, 0.0).value + 1.0), 1e-10);
            c.check(fc.name + " lattice", std::abs(lattice_zeta(fc.lattice, cholesky(fc.q), 0.0).value + 1.0), 1e-10);
            // The value at 0 is a limit of the continued formula; its circle mean must agree.
            constexpr int m = 16;
            Complex mean = 0.0;
            for (int k = 0; k < m; ++k) mean += epstein_continued(g, 0.1 * std::polar(1.0, 2 * kPi * k / m)).value;
            c.check(fc.name + " circle mean", std::abs(mean / double(m) + 1.0), 1e-10);
        } catch (const std::exception& e) {
            c.error(fc.name, e);
        }
    }
    return c.report("zeta(Q, 0) = -1");
}

bool criterion3() {
    Criterion c(3);
    std::mt19937_64 rng(77);
    for (const auto& fc : all_cases()) {
        try {
            const SPDForm f = cholesky(fc.q);
            const std::size_t dim = fc.q.dim();
            const double n = static_cast<double>(dim);
            const double base = std::pow(kPi, n / 2) / (gamma_complex(n / 2 + 1).real() * lattice_volume(fc.lattice) *
                                                         std::sqrt(f.det()));
            for (const SymMatrix& b : {random_sym(rng, dim), fc.q}) {
                const double want = 0.5 * base * trace_product(f, b);
                const PoleReport num = residue_numeric(
                    [&](Complex s) { return std::vector<Complex>{lattice_weighted_zeta(fc.lattice, f, b, s).value}; },
                    n / 2 + 1);
                const bool shift = &b == &fc.q;
                c.check(fc.name + (shift ? " B=Q" : " random B"), std::abs(num.residue[0] - want), 1e-8);
                c.check(fc.name + " analytic", std::abs(residue_weighted(fc.lattice, f, b).residue[0] - want),
                        1e-12 * std::max(1.0, std::abs(want)));
                if (shift) {
                    // Shift identity: the B = Q residue is the Epstein residue at n/2.
                    const Complex epstein = residue_epstein(fc.lattice, f).residue[0];
                    c.check(fc.name + " B=Q vs Epstein", std::abs(num.residue[0] - epstein), 1e-8);
                }
            }
        } catch (const std::exception& e) {
            c.error(fc.name, e);
        }
    }
    return c.report("weighted residue at n/2+1, numeric vs closed form");
}

bool criterion4() {
    Criterion c(4);
    const std::vector<Complex> grid{{0.3, 0.5}, {0.6, -1.2}, {-0.4, 2.0}, {1.3, 0.7}, {0.8, -0.1}};
    std::mt19937_64 rng(91);
    for (const auto& fc : all_cases()) {
        const SPDForm f = cholesky(fc.q);
        const std::size_t n = fc.q.dim();
        const SymMatrix b = random_sym(rng, n);
        for (const Complex s : grid) {
            try {
                c.check(fc.name + " lattice " + str(s), funceq_residual_lattice(fc.lattice, f, s).residual, 1e-8);
                c.check(fc.name + " weighted " + str(s), funceq_residual_weighted(fc.lattice, f, b, s).residual, 1e-8);
            } catch (const std::exception& e) {
                c.error(fc.name + " " + str(s), e);
            }
        }
    }
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n = 1; n <= 4; ++n) {
        const Matrix a = random_generator(rng, n);
        Vector b(n), cv(n);
        for (std::size_t i = 0; i < n; ++i) b[i] = u(rng), cv[i] = u(rng);
        for (const Complex s : grid) {
            try {
                c.check("vector n=" + std::to_string(n) + " " + str(s), funceq_residual_vector(a, b, cv, s).residual, 1e-8);
            } catch (const std::exception& e) {
                c.error("vector " + str(s), e);
            }
        }
    }
    return c.report("functional equations, lattice / weighted / vector");
}

bool criterion5() {
    Criterion c(5);
    const std::vector<std::pair<std::string, SymMatrix>> forms{
        {"I2", SymMatrix::identity(2)}, {"diag14", SymMatrix::diagonal({1, 4})}, {"Q213", SymMatrix{{2, 1}, {1, 3}}}};
    for (const auto& [name, q] : forms)
        for (double t : {0.5, 1.0, 2.0}) c.check(name + " t=" + std::to_string(t), theta_transform_residual(cholesky(q), t), 1e-12);

    const std::vector<double> grid{0.1, 0.05, 0.02, 0.01};
    const std::vector<std::pair<std::string, SymMatrix>> fits{
        {"I1", SymMatrix::identity(1)},       {"I2", SymMatrix::identity(2)},
        {"diag44", SymMatrix::diagonal({4, 4})}, {"Q213", SymMatrix{{2, 1}, {1, 3}}},
        {"I3", SymMatrix::identity(3)}};
    for (const auto& [name, q] : fits) {
        try {
            const SPDForm f = cholesky(q);
            const AsymptoticFit fit = theta_asymptotic_fit(f, grid);
            c.check(name + " alpha", std::abs(fit.alpha - 0.5 * q.dim()), 1e-3);
            c.check(name + " residue", std::abs(fit.residue - 1.0 / std::sqrt(f.det())), 1e-3);
        } catch (const std::exception& e) {
            c.error(name, e);
        }
    }
    return c.report("theta transformation and small-t asymptotics");
}

bool criterion6() {
    Criterion c(6);
    std::mt19937_64 rng(606);
    const QuadratureSpec circle{QuadMethod::circle_trapezoid, 512, 0};
    const QuadratureSpec gauss{QuadMethod::product_gauss, 48, 0};
    for (std::size_t n = 2; n <= 6; ++n) {
        for (int rep = 0; rep < 2; ++rep) {
            const Matrix a = random_generator(rng, n);
            const SymMatrix q = rep == 0 ? SymMatrix::identity(n) : random_spd(rng, n);
            const SymMatrix b = random_spd(rng, n);
            const std::string tag = "n=" + std::to_string(n) + " #" + std::to_string(rep);
            try {
                const SPDForm f = cholesky(q);
                const Lattice l(a);
                const double re = 2.0 * residue_epstein(l, f).residue[0].real();
                const double rw = 2.0 * residue_weighted(l, f, b).residue[0].real();
                if (n <= 3) {
                    const QuadratureSpec spec = n == 2 ? circle : gauss;
                    const double bound = n == 2 ? 1e-10 : 1e-8;
                    c.check(tag + " epstein", std::abs(epstein_residue_integral(a, q, spec).value - re) / re, bound);
                    c.check(tag + " weighted", std::abs(weighted_residue_integral(a, q, b, spec).value - rw) / std::abs(rw),
                            bound);
                } else {
                    const QuadratureSpec mc{QuadMethod::monte_carlo, 1'000'000, 1000u + n * 10 + rep};
                    const SphereIntegralResult e = epstein_residue_integral(a, q, mc);
                    const SphereIntegralResult w = weighted_residue_integral(a, q, b, mc);
                    c.check(tag + " epstein (|err|/3sigma)", std::abs(e.value - re) / e.error_estimate, 1.0);
                    c.check(tag + " weighted (|err|/3sigma)", std::abs(w.value - rw) / w.error_estimate, 1.0);
                }
            } catch (const std::exception& e) {
                c.error(tag, e);
            }
        }
    }
    return c.report("sphere integrals equal twice the residues");
}

// ---------------------------------------------------------------------------
// linear systems

struct System {
    Matrix a;
    Vector b;
    double cond;
};

// A = D + E: D has diagonal entries spread geometrically over [1, ratio] in
// random order, E is a small dense perturbation. x has entries of magnitude in
// [0.5, 1] so that relative errors are not dominated by tiny x_i.
System make_system(std::mt19937_64& rng, std::size_t n, double ratio) {
    std::uniform_real_distribution<double> u(-1.0, 1.0), mag(0.5, 1.0);
    std::bernoulli_distribution sign(0.5);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = std::pow(ratio, n == 1 ? 0.0 : double(i) / double(n - 1));
    std::shuffle(d.begin(), d.end(), rng);
    Matrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = i == j ? d[i] : 0.25 * u(rng);
    Vector x(n);
    for (auto& v : x) v = sign(rng) ? mag(rng) : -mag(rng);
    const Vector b = a * x;
    return {a, b, condition_number_1(a)};
}

// Four systems per n = 2..6. For n <= 3 two of them are strongly scaled; the
// Monte Carlo dimensions use mild scaling since the 3 sigma band grows with
// the spread of |A^T u| over the sphere.
std::vector<System> solver_suite() {
    std::mt19937_64 rng(7);
    std::vector<System> out;
    const double scaled[] = {1.5, 1.5, 10.0, 40.0};
    for (std::size_t n = 2; n <= 6; ++n)
        for (int k = 0; k < 4; ++k) out.push_back(make_system(rng, n, n <= 3 ? scaled[k] : 1.5));
    return out;
}

bool covered(const SolveReport& r) {
    for (std::size_t i = 0; i < r.x.size(); ++i)
        if (std::abs(r.x[i] - r.x_reference[i]) > r.x_error_estimate[i]) return false;
    return true;
}

bool criterion7() {
    Criterion c(7);
    const auto suite = solver_suite();
    double max_cond = 0.0;
    for (std::size_t k = 0; k < suite.size(); ++k) {
        const System& sys = suite[k];
        const std::size_t n = sys.a.dim();
        const std::string tag = "system " + std::to_string(k) + " n=" + std::to_string(n);
        max_cond = std::max(max_cond, sys.cond);
        c.check(tag + " cond", sys.cond, 100.0);
        try {
            c.check(tag + " residues", solve_via_residues(sys.a, sys.b).max_rel_err(), 1e-12);
            if (n <= 3) {
                const QuadratureSpec spec = suggested_quadrature(sys.a);
                c.check(tag + " integrals " + io::to_string(spec.method) + "(" + std::to_string(spec.nodes) + ")", solve_via_integrals(sys.a, sys.b, spec).max_rel_err(), 1e-8);
                c.check(tag + " numeric residues", numeric_residue_solve(sys.a, sys.b).max_rel_err(), 1e-7);
            } else {
                const SolveReport r = solve_via_integrals(sys.a, sys.b, {QuadMethod::monte_carlo, 1'000'000, 42});
                c.check(tag + " monte carlo", r.max_rel_err(), 1e-2);
            }
        } catch (const std::exception& e) {
            c.error(tag, e);
        }
    }
    // Coverage: for the first system of each n = 4, 5, 6, fifty seeds.
    for (std::size_t n = 4; n <= 6; ++n) {
        const System& sys = suite[(n - 2) * 4];
        int inside = 0;
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            const SolveReport r = solve_via_integrals(sys.a, sys.b, {QuadMethod::monte_carlo, 1'000'000, seed});
            inside += covered(r) ? 1 : 0;
        }
        std::printf("    coverage n=%zu: %d/50 inside 3 sigma\n", n, inside);
        c.require("coverage n=" + std::to_string(n) + " >= 47/50", inside >= 47);
    }
    std::printf("    20 systems, max 1-norm condition %.1f\n", max_cond);
    return c.report("Cimmino solve by residues, integrals and numeric residues");
}

// ---------------------------------------------------------------------------

using Point = std::vector<std::int64_t>;

std::set<Point> brute_force(const SymMatrix& q, double radius, std::int64_t box) {
    const std::size_t n = q.dim();
    std::set<Point> out;
    Point w(n, -box);
    while (true) {
        const Vector x(w.begin(), w.end());
        if (std::any_of(w.begin(), w.end(), [](std::int64_t v) { return v != 0; }) && qeval(q, x) <= radius) out.insert(w);
        std::size_t k = 0;
        while (k < n && w[k] == box) w[k++] = -box;
        if (k == n) break;
        ++w[k];
    }
    return out;
}

bool criterion8() {
    Criterion c(8);
    std::mt19937_64 rng(88);
    std::uniform_real_distribution<double> im(-8.0, 8.0), u(-1.0, 1.0);
    auto rel = [](Complex a, Complex b) { return std::abs(a - b) / std::abs(b); };
    for (const auto& fc : all_cases()) {
        const std::size_t dim = fc.q.dim();
        const double n = static_cast<double>(dim);
        const SPDForm g = cholesky(gram_transform(fc.q, fc.lattice.gen()));
        Vector uu(dim), vv(dim);
        for (std::size_t i = 0; i < dim; ++i) uu[i] = u(rng), vv[i] = u(rng);
        const SymMatrix gb = gram_transform(sym_outer(uu, vv), fc.lattice.gen());
        for (int k = 0; k < 3; ++k) {
            const Complex s(n / 2 + 2, k == 0 ? 0.0 : im(rng));
            try {
                const Complex ce = lattice_zeta(fc.lattice, cholesky(fc.q), s).value;
                c.check(fc.name + " epstein " + str(s), rel(epstein_direct(g, s, 1e-12 * std::abs(ce)).value, ce), 1e-11);
                for (const SymMatrix& b : {g.base(), SymMatrix::identity(dim), gb}) {
                    const Complex cw = weighted_continued(g, b, s).value;
                    c.check(fc.name + " weighted " + str(s), rel(weighted_direct(g, b, s, 1e-12 * std::abs(cw)).value, cw),
                            1e-11);
                }
                const Matrix& a = fc.lattice.gen();
                const auto cv = vector_zeta(a, uu, s);
                double scale = 0.0;
                for (const auto& z : cv) scale = std::max(scale, std::abs(z.value));
                const auto dv = vector_zeta_direct(a, uu, s, 1e-12 * scale);
                for (std::size_t j = 0; j < dim; ++j)
                    c.check(fc.name + " vector " + str(s), std::abs(cv[j].value - dv[j].value) / scale, 1e-11);
            } catch (const std::exception& e) {
                c.error(fc.name + " " + str(s), e);
            }
        }
    }
    std::size_t enumerated = 0;
    for (const auto& fc : all_cases()) {
        if (fc.q.dim() > 3) continue;
        const SPDForm f = cholesky(fc.q);
        for (double radius : {1.0, 5.0, 17.5, 30.0}) {
            const auto box = static_cast<std::int64_t>(std::ceil(std::sqrt(radius / f.lambda_min_lower())));
            const EllipsoidPoints pts = enumerate_ellipsoid(f, radius);
            std::set<Point> got;
            for (std::size_t i = 0; i < pts.size(); ++i) got.insert(Point(pts.omega(i).begin(), pts.omega(i).end()));
            enumerated += pts.size();
            c.require(fc.name + " R=" + std::to_string(radius) + " enumeration",
                      got.size() == pts.size() && got == brute_force(fc.q, radius, box));
        }
    }
    std::printf("    %zu enumerated points compared against box brute force\n", enumerated);
    return c.report("continued vs direct overlap; ellipsoid enumeration");
}

bool criterion9() {
    Criterion c(9);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ua(-20.0, 20.0), ux(0.1, 50.0);
    for (int k = 0; k < 200;) {
        const Complex a(ua(rng), ua(rng));
        if (std::abs(a) > 20.0) continue;
        const double x = ux(rng);
        const Complex lhs = upper_incomplete_gamma(a + 1.0, x);
        const Complex rhs = a * upper_incomplete_gamma(a, x) + std::exp(a * std::log(x) - x);
        c.check("incomplete gamma a=" + str(a) + " x=" + std::to_string(x), std::abs(lhs - rhs) / std::abs(lhs), 1e-12);
        ++k;
    }
    for (int k = 0; k < 200;) {
        const Complex s(ua(rng), ua(rng));
        if (std::abs(s) > 20.0) continue;
        const Complex lhs = gamma_complex(s + 1.0);
        c.check("gamma s=" + str(s), std::abs(lhs - s * gamma_complex(s)) / std::abs(lhs), 1e-12);
        ++k;
    }
    return c.report("incomplete gamma and gamma recurrences");
}

}  // namespace

int main() {
    const std::vector<std::function<bool()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                      criterion6, criterion7, criterion8, criterion9};
    int failed = 0;
    for (const auto& run : criteria) {
        try {
            failed += run() ? 0 : 1;
        } catch (const std::exception& e) {
            std::printf("criterion aborted: %s\n", e.what());
            ++failed;
        }
    }
    std::printf("%s: %d of %zu criteria passed\n", failed == 0 ? "ALL PASS" : "FAILURES",
                static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
