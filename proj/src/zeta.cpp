#include "cimmino/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bounds.hpp"
#include "cimmino/error.hpp"
#include "cimmino/theta.hpp"
#include "gauss_legendre.hpp"
#include "summation.hpp"

namespace cimmino {

namespace {

constexpr double kPi = std::numbers::pi;
const double kLogPi = std::log(kPi);

Complex pi_pow(Complex s) { return std::exp(s * kLogPi); }

void require_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw Error(ErrorKind::DimensionMismatch, what);
}

void require_off_pole(Complex s, double pole) {
    if (std::abs(s - pole) <= tol::pole_exclusion)
        throw Error(ErrorKind::TooCloseToPole, "s is within the exclusion zone of the pole at " + std::to_string(pole));
}

struct ShellSums {
    std::vector<Complex> sums;
    double bound = 0.0;
};

// sum' w_j(omega) * (pi q)^-a Gamma(a, pi q) for each weight w_j (or a single
// unweighted sum when weights is empty). Points on one shell share one
// incomplete gamma evaluation.
ShellSums incomplete_gamma_sums(const SPDForm& form, Complex a, std::span<const SymMatrix> weights) {
    const std::size_t n = form.dim();
    double weight_coef = 0.0;
    for (const auto& w : weights) weight_coef = std::max(weight_coef, norm_inf(w.matrix()) / form.lambda_min_lower());
    const bool weighted = !weights.empty();
    const auto tail = detail::incomplete_gamma_tail_radius(a.real(), weighted ? weight_coef : 0.0,
                                                           form.lambda_min_lower(), n, tol::continued_tail);
    const std::size_t outputs = weighted ? weights.size() : 1;
    ShellSums out{std::vector<Complex>(outputs, 0.0), tail.bound};
    if (weighted && weight_coef == 0.0) {
        out.bound = 0.0;
        return out;
    }
    const EllipsoidPoints pts = enumerate_ellipsoid(form, tail.radius);
    std::vector<detail::CompensatedComplexSum> acc(outputs);
    std::vector<double> x(n);
    double last_q = -1.0;
    Complex g = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double q = pts.q[i];
        if (q != last_q) {
            g = upper_incomplete_gamma_scaled(a, kPi * q);
            last_q = q;
        }
        if (!weighted) {
            acc[0].add(g);
            continue;
        }
        const auto w = pts.omega(i);
        for (std::size_t k = 0; k < n; ++k) x[k] = static_cast<double>(w[k]);
        for (std::size_t j = 0; j < outputs; ++j) acc[j].add(qeval(weights[j], x) * g);
    }
    for (std::size_t j = 0; j < outputs; ++j) out.sums[j] = acc[j].value();
    return out;
}

// Splits Q = c * Qn with det Qn = 1, which balances the two lattice sums.
struct Normalized {
    double c;
    SPDForm form;
};

Normalized normalize(const SPDForm& q) {
    const double c = std::pow(q.det(), 1.0 / static_cast<double>(q.dim()));
    return {c, q.scaled(1.0 / c)};
}

// Smooth radial cutoff: 1 below 0.1, 0 above 1, an erfc ramp in between.
constexpr double kCutLo = 0.1;
constexpr double kCutMid = 0.55;
constexpr double kCutWidth = 0.45 / 6.5;

double cutoff(double u) {
    if (u <= kCutLo) return 1.0;
    if (u >= 1.0) return 0.0;
    return 0.5 * std::erfc((u - kCutMid) / kCutWidth);
}

// integral_0^inf u^kappa (1 - cutoff(u)) du for Re kappa < -1.
Complex cutoff_moment(Complex kappa) {
    static const detail::GaussRule rule = detail::gauss_legendre(200, kCutLo, 1.0);
    detail::CompensatedComplexSum acc;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = rule.nodes[i];
        acc.add(rule.weights[i] * std::exp(kappa * std::log(u)) * (1.0 - cutoff(u)));
    }
    return acc.value() - 1.0 / (kappa + 1.0);
}

// Smoothly truncated sum' f(omega) where f ~ (weight) q^{-s}; the asymptotic
// shell density gives the correction coef_j * R^{kappa+1} * moment(kappa).
// The radius doubles until the error estimate drops below tol.
using TermFn = std::function<void(std::span<const std::int64_t>, double, std::vector<Complex>&)>;

std::vector<ZetaValue> direct_smooth(const SPDForm& form, std::size_t outputs, Complex kappa,
                                     std::span<const double> coefs, double tol, const TermFn& term) {
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
    const std::size_t n = form.dim();
    const double density = unit_ball_volume(n) / std::sqrt(form.det());
    auto points_within = [&](double r) { return density * std::pow(r, 0.5 * static_cast<double>(n)); };
    const double r0 = std::pow(2.0e4 / density, 2.0 / static_cast<double>(n));
    double r = r0;
    const Complex moment = cutoff_moment(kappa);
    std::vector<Complex> f(outputs);
    while (true) {
        if (points_within(r) > static_cast<double>(tol::direct_point_cap))
            throw Error(ErrorKind::NotConverged, "direct summation did not reach the tolerance");
        std::vector<detail::CompensatedComplexSum> fine(outputs), coarse(outputs), coarsest(outputs);
        visit_ellipsoid(form, r, [&](std::span<const std::int64_t> w, double q) {
            const double phi_fine = cutoff(q / r);
            if (phi_fine == 0.0) return;
            const double phi_coarse = cutoff(2.0 * q / r);
            const double phi_coarsest = cutoff(4.0 * q / r);
            term(w, q, f);
            for (std::size_t j = 0; j < outputs; ++j) {
                fine[j].add(phi_fine * f[j]);
                if (phi_coarse != 0.0) coarse[j].add(phi_coarse * f[j]);
                if (phi_coarsest != 0.0) coarsest[j].add(phi_coarsest * f[j]);
            }
        });
        std::vector<ZetaValue> out(outputs);
        double worst = 0.0;
        auto shell = [&](double radius) { return std::exp((kappa + 1.0) * std::log(radius)) * moment; };
        const Complex c1 = shell(r), c2 = shell(0.5 * r), c4 = shell(0.25 * r);
        for (std::size_t j = 0; j < outputs; ++j) {
            const Complex v1 = fine[j].value() + coefs[j] * c1;
            const Complex v2 = coarse[j].value() + coefs[j] * c2;
            const Complex v4 = coarsest[j].value() + coefs[j] * c4;
            // Once r/4 is past the starting radius the cutoff error decays like
            // exp(-c r): d1 ~ e(r/2), d0 ~ e(r/4), and d1^2/d0 still overestimates e(r).
            const double d1 = std::abs(v1 - v2), d0 = std::abs(v2 - v4);
            const bool asymptotic = r >= 4.0 * r0 && d1 < 0.25 * d0;
            const double err = std::max(asymptotic ? d1 * d1 / d0 : d1,
                                        4.0 * std::numeric_limits<double>::epsilon() * std::abs(v1));
            out[j] = {v1, err};
            worst = std::max(worst, err);
        }
        if (worst < tol) return out;
        r *= 2.0;
    }
}

}  // namespace

double unit_ball_volume(std::size_t n) {
    const double h = 0.5 * static_cast<double>(n);
    return std::pow(kPi, h) / std::tgamma(h + 1.0);
}

Complex GammaFactorSpec::operator()(Complex s) const {
    return scalar * pi_pow(-(s + pi_shift)) * gamma_complex(s + gamma_shift);
}

double GammaFactorSpec::residue_at_pole(int k) const {
    if (k < 0) throw Error(ErrorKind::InvalidArgument, "pole index must be non-negative");
    const double pole = -gamma_shift - k;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return scalar * std::pow(kPi, -(pole + pi_shift)) * sign / std::tgamma(k + 1.0);
}

ZetaValue epstein_direct(const SPDForm& q, Complex s, double tol) {
    const std::size_t n = q.dim();
    const double h = 0.5 * static_cast<double>(n);
    if (s.real() < h + 0.5) throw Error(ErrorKind::OutsideConvergence, "direct sum needs Re s >= n/2 + 1/2");
    const double coef = h * unit_ball_volume(n) / std::sqrt(q.det());
    auto term = [&](std::span<const std::int64_t>, double qv, std::vector<Complex>& f) {
        f[0] = std::exp(-s * std::log(qv));
    };
    return direct_smooth(q, 1, h - 1.0 - s, std::span<const double>(&coef, 1), tol, term)[0];
}

ZetaValue weighted_direct(const SPDForm& q, const SymMatrix& b, Complex s, double tol) {
    const std::size_t n = q.dim();
    require_dim(b.dim(), n, "weight dimension");
    const double h = 0.5 * static_cast<double>(n);
    if (s.real() < h + 1.5) throw Error(ErrorKind::OutsideConvergence, "direct sum needs Re s >= n/2 + 3/2");
    if (max_abs(b.matrix()) == 0.0) return {0.0, 0.0};
    const double coef = 0.5 * trace_product(q, b) * unit_ball_volume(n) / std::sqrt(q.det());
    std::vector<double> x(n);
    auto term = [&](std::span<const std::int64_t> w, double qv, std::vector<Complex>& f) {
        for (std::size_t k = 0; k < n; ++k) x[k] = static_cast<double>(w[k]);
        f[0] = qeval(b, x) * std::exp(-s * std::log(qv));
    };
    return direct_smooth(q, 1, h - s, std::span<const double>(&coef, 1), tol, term)[0];
}

std::vector<ZetaValue> vector_zeta_direct(const Matrix& a, std::span<const double> b, Complex s, double tol) {
    const std::size_t n = a.dim();
    require_dim(b.size(), n, "vector dimension");
    const double h = 0.5 * static_cast<double>(n);
    if (s.real() < h + 1.5) throw Error(ErrorKind::OutsideConvergence, "direct sum needs Re s >= n/2 + 3/2");
    const Lattice lat(a);
    const SPDForm form = cholesky(gram_transform(SymMatrix::identity(n), a));
    const Vector u = lat.dual_gen() * b;
    std::vector<double> coefs(n);
    for (std::size_t j = 0; j < n; ++j) coefs[j] = 0.5 * u[j] * unit_ball_volume(n) / lat.volume();
    std::vector<double> x(n);
    auto term = [&](std::span<const std::int64_t> w, double qv, std::vector<Complex>& f) {
        for (std::size_t k = 0; k < n; ++k) x[k] = static_cast<double>(w[k]);
        const Vector ax = a * x;
        const Complex base = dot(b, x) * std::exp(-s * std::log(qv));
        for (std::size_t j = 0; j < n; ++j) f[j] = base * ax[j];
    };
    return direct_smooth(form, n, h - s, coefs, tol, term);
}

ZetaValue epstein_continued(const SPDForm& q, Complex s) {
    const std::size_t n = q.dim();
    const double h = 0.5 * static_cast<double>(n);
    require_off_pole(s, h);
    const auto [c, qn] = normalize(q);
    const double d = 1.0 / std::sqrt(qn.det());
    const ShellSums s1 = incomplete_gamma_sums(qn, s, {});
    const ShellSums s2 = incomplete_gamma_sums(qn.inverse_form(), h - s, {});
    const Complex pre = pi_pow(s);
    const Complex rg = rgamma_complex(s);
    const Complex bracket = s1.sums[0] + d * s2.sums[0] + d / (s - h);
    const Complex scale = std::exp(-s * std::log(c));
    const Complex value = pre * (rg * bracket - rgamma_complex(s + 1.0)) * scale;
    const double err = std::abs(pre * rg * scale) * (s1.bound + d * s2.bound);
    return {value, err};
}

std::vector<ZetaValue> weighted_continued_multi(const SPDForm& q, std::span<const SymMatrix> bs, Complex s) {
    const std::size_t n = q.dim();
    for (const auto& b : bs) require_dim(b.dim(), n, "weight dimension");
    const double h = 0.5 * static_cast<double>(n);
    require_off_pole(s, h + 1.0);
    if (bs.empty()) return {};
    const auto [c, qn] = normalize(q);
    const SPDForm dual = qn.inverse_form();
    const double d = 1.0 / std::sqrt(qn.det());
    const Complex sigma = s - 1.0;

    std::vector<SymMatrix> cs;
    std::vector<double> ts;
    for (const auto& b : bs) {
        cs.push_back(gram_transform(b, qn.inv().matrix()));
        ts.push_back(trace_product(qn, b) * d / (2.0 * kPi));
    }
    const ShellSums s1 = incomplete_gamma_sums(qn, s, bs);
    const ShellSums s2 = incomplete_gamma_sums(dual, h - sigma + 1.0, cs);
    const bool any_trace = std::any_of(ts.begin(), ts.end(), [](double t) { return t != 0.0; });
    const ShellSums s3 = any_trace ? incomplete_gamma_sums(dual, h - sigma, {}) : ShellSums{{0.0}, 0.0};

    const Complex pre = pi_pow(s) * rgamma_complex(s) * std::exp(-s * std::log(c));
    std::vector<ZetaValue> out(bs.size());
    for (std::size_t j = 0; j < bs.size(); ++j) {
        const Complex bracket = s1.sums[j] - d * s2.sums[j] + ts[j] * s3.sums[0] + ts[j] / (sigma - h);
        out[j].value = pre * bracket;
        out[j].abs_error = std::abs(pre) * (s1.bound + d * s2.bound + std::abs(ts[j]) * s3.bound);
    }
    return out;
}

ZetaValue weighted_continued(const SPDForm& q, const SymMatrix& b, Complex s) {
    return weighted_continued_multi(q, std::span<const SymMatrix>(&b, 1), s)[0];
}

ZetaValue lattice_zeta(const Lattice& l, const SPDForm& q, Complex s) {
    require_dim(l.dim(), q.dim(), "lattice dimension");
    return epstein_continued(cholesky(gram_transform(q.base(), l.gen())), s);
}

ZetaValue lattice_weighted_zeta(const Lattice& l, const SPDForm& q, const SymMatrix& b, Complex s) {
    require_dim(l.dim(), q.dim(), "lattice dimension");
    return weighted_continued(cholesky(gram_transform(q.base(), l.gen())), gram_transform(b, l.gen()), s);
}

std::vector<ZetaValue> vector_zeta(const Matrix& a, std::span<const double> b, Complex s) {
    const std::size_t n = a.dim();
    require_dim(b.size(), n, "vector dimension");
    const Lattice lat(a);
    require_off_pole(s, 0.5 * static_cast<double>(n) + 1.0);
    const Vector u = lat.dual_gen() * b;
    std::vector<SymMatrix> weights;
    for (std::size_t j = 0; j < n; ++j) weights.push_back(gram_transform(sym_outer(u, unit_vector(n, j)), a));
    return weighted_continued_multi(cholesky(gram_transform(SymMatrix::identity(n), a)), weights, s);
}

ZetaValue norm_zeta(const Matrix& a, Complex s) {
    const Lattice lat(a);
    return epstein_continued(cholesky(gram_transform(SymMatrix::identity(a.dim()), a)), s);
}

PoleReport residue_epstein(const Lattice& l, const SPDForm& q) {
    require_dim(l.dim(), q.dim(), "lattice dimension");
    const std::size_t n = q.dim();
    const double h = 0.5 * static_cast<double>(n);
    const double r = h * unit_ball_volume(n) / (l.volume() * std::sqrt(q.det()));
    return {h, {Complex(r, 0.0)}, ResidueSource::analytic};
}

PoleReport residue_weighted(const Lattice& l, const SPDForm& q, const SymMatrix& b) {
    require_dim(l.dim(), q.dim(), "lattice dimension");
    require_dim(b.dim(), q.dim(), "weight dimension");
    const std::size_t n = q.dim();
    const double r = 0.5 * unit_ball_volume(n) * trace_product(q, b) / (l.volume() * std::sqrt(q.det()));
    return {0.5 * static_cast<double>(n) + 1.0, {Complex(r, 0.0)}, ResidueSource::analytic};
}

PoleReport residue_vector(const Matrix& a, std::span<const double> b) {
    const std::size_t n = a.dim();
    require_dim(b.size(), n, "vector dimension");
    const Lattice lat(a);
    const Vector u = lat.dual_gen() * b;
    const double f = 0.5 * unit_ball_volume(n) / lat.volume();
    PoleReport rep{0.5 * static_cast<double>(n) + 1.0, {}, ResidueSource::analytic};
    for (double x : u) rep.residue.emplace_back(f * x, 0.0);
    return rep;
}

PoleReport residue_numeric(const ZetaEvaluator& f, double s0, double rho, int m) {
    if (!(rho > 0.0) || m < 2) throw Error(ErrorKind::InvalidArgument, "circle radius and node count");
    std::vector<detail::CompensatedComplexSum> acc;
    for (int k = 0; k < m; ++k) {
        const double th = 2.0 * kPi * k / m;
        const Complex e(std::cos(th), std::sin(th));
        std::vector<Complex> v;
        try {
            v = f(s0 + rho * e);
        } catch (const Error& err) {
            throw Error(ErrorKind::EvaluationFailure, std::string("node ") + std::to_string(k) + ": " + err.what());
        }
        if (acc.empty()) acc.resize(v.size());
        if (v.size() != acc.size()) throw Error(ErrorKind::EvaluationFailure, "evaluator changed output size");
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (!std::isfinite(v[j].real()) || !std::isfinite(v[j].imag()))
                throw Error(ErrorKind::EvaluationFailure, "non-finite value at node " + std::to_string(k));
            acc[j].add(v[j] * e);
        }
    }
    PoleReport rep{s0, {}, ResidueSource::numeric};
    for (const auto& a : acc) rep.residue.push_back(a.value() * (rho / m));
    return rep;
}

FuncEqResidual funceq_residual_lattice(const Lattice& l, const SPDForm& q, Complex s) {
    const double h = 0.5 * static_cast<double>(q.dim());
    const Complex lhs = pi_pow(-(h - s)) * gamma_complex(h - s) * lattice_zeta(l, q, h - s).value;
    const Complex rhs = pi_pow(-s) * gamma_complex(s) * lattice_zeta(dual_lattice(l), q.inverse_form(), s).value /
                        (l.volume() * std::sqrt(q.det()));
    return {s, lhs, rhs, std::abs(lhs - rhs)};
}

FuncEqResidual funceq_residual_weighted(const Lattice& l, const SPDForm& q, const SymMatrix& b, Complex s) {
    const double h = 0.5 * static_cast<double>(q.dim());
    const double vol = l.volume() * std::sqrt(q.det());
    const Lattice dual = dual_lattice(l);
    const SPDForm qinv = q.inverse_form();
    const SymMatrix c = gram_transform(b, q.inv().matrix());
    const Complex lhs =
        pi_pow(-(h - s)) * gamma_complex(h + 1.0 - s) * lattice_weighted_zeta(l, q, b, h + 1.0 - s).value +
        pi_pow(-s) * gamma_complex(s + 1.0) * lattice_weighted_zeta(dual, qinv, c, s + 1.0).value / vol;
    const double tr = trace_product(q, b);
    const Complex rhs =
        tr == 0.0 ? Complex(0.0) : tr / (2.0 * vol) * pi_pow(-s) * gamma_complex(s) * lattice_zeta(dual, qinv, s).value;
    return {s, lhs, rhs, std::abs(lhs - rhs)};
}

FuncEqResidual funceq_residual_vector(const Matrix& a, std::span<const double> b, std::span<const double> c,
                                      Complex s) {
    const std::size_t n = a.dim();
    require_dim(b.size(), n, "vector dimension");
    require_dim(c.size(), n, "vector dimension");
    const double h = 0.5 * static_cast<double>(n);
    const Lattice lat(a);
    const Matrix& ahat = lat.dual_gen();
    const Vector ac = a * c;
    const Vector ahat_b = ahat * b;
    const auto z1 = vector_zeta(a, b, h + 1.0 - s);
    const auto z2 = vector_zeta(ahat, c, s + 1.0);
    Complex p1 = 0.0, p2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        p1 += z1[j].value * ac[j];
        p2 += ahat_b[j] * z2[j].value;
    }
    const Complex lhs = pi_pow(-(h - s)) * gamma_complex(h + 1.0 - s) * p1 +
                        pi_pow(-s) / lat.volume() * gamma_complex(s + 1.0) * p2;
    const double bc = dot(b, c);
    const Complex rhs =
        bc == 0.0 ? Complex(0.0) : bc / (2.0 * lat.volume()) * pi_pow(-s) * gamma_complex(s) * norm_zeta(ahat, s).value;
    return {s, lhs, rhs, std::abs(lhs - rhs)};
}

}  // namespace cimmino
