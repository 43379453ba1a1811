#include "cimmino/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "cimmino/error.hpp"
#include "cimmino/tolerances.hpp"

namespace cimmino {

namespace {

constexpr double kPi = std::numbers::pi;

// Godfrey's Lanczos coefficients, g = 607/128.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5,
};

// Gamma(z) for Re z >= 1/2.
Complex lanczos_gamma(Complex z) {
    z -= 1.0;
    Complex x = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    const Complex t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * kPi) * std::exp((z + 0.5) * std::log(t) - t) * x;
}

bool near_nonpositive_integer(Complex a, double radius, double& centre) {
    if (a.real() > radius) return false;
    centre = std::round(a.real());
    if (centre > 0.0) return false;
    return std::abs(a - Complex(centre, 0.0)) < radius;
}

// Modified Lentz evaluation of the Legendre continued fraction; returns h with
// Gamma(a,x) = x^a e^-x h.
Complex igamma_cf(Complex a, double x) {
    constexpr double tiny = 1e-300;
    Complex b = x + 1.0 - a;
    Complex c = 1.0 / tiny;
    Complex d = 1.0 / b;
    Complex h = d;
    for (int i = 1; i < tol::max_series_terms; ++i) {
        const Complex an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const Complex del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < tol::series_eps) return h;
    }
    throw Error(ErrorKind::NotConverged, "incomplete gamma continued fraction");
}

// e^-x sum_k x^k / (a)_{k+1}, so that gamma(a,x) = x^a times this.
Complex lower_series(Complex a, double x) {
    Complex term = 1.0 / a;
    Complex sum = term;
    for (int k = 1; k < tol::max_series_terms; ++k) {
        term *= x / (a + static_cast<double>(k));
        sum += term;
        if (std::abs(term) < tol::series_eps * std::abs(sum)) return sum * std::exp(-x);
    }
    throw Error(ErrorKind::NotConverged, "incomplete gamma series");
}

Complex scaled_impl(Complex a, double x);

Complex scaled_regular(Complex a, double x) {
    if (x > std::abs(a) + 1.0 || (x > 1.5 && a.real() < 0.5)) return std::exp(-x) * igamma_cf(a, x);
    if (a.real() >= 0.5) return gamma_complex(a) * std::exp(-a * std::log(x)) - lower_series(a, x);
    // Shift a up into the series region, then recur downward:
    // G(a) = (x G(a+1) - e^-x) / a in scaled form.
    const int m = static_cast<int>(std::ceil(0.5 - a.real()));
    Complex g = scaled_impl(a + static_cast<double>(m), x);
    const double ex = std::exp(-x);
    for (int k = m - 1; k >= 0; --k) {
        const Complex ak = a + static_cast<double>(k);
        g = (x * g - ex) / ak;
    }
    return g;
}

Complex scaled_impl(Complex a, double x) {
    double centre = 0.0;
    if (x <= std::abs(a) + 1.0 && near_nonpositive_integer(a, tol::igamma_integer_zone, centre)) {
        // Gamma(a,x) is entire in a; interpolate from a circle around the integer.
        const int m = tol::igamma_circle_nodes;
        const Complex c(centre, 0.0);
        Complex acc = 0.0;
        for (int k = 0; k < m; ++k) {
            const double th = 2.0 * kPi * (k + 0.5) / m;
            const Complex dz = tol::igamma_circle_radius * Complex(std::cos(th), std::sin(th));
            const Complex z = c + dz;
            acc += scaled_regular(z, x) * dz / (z - a);
        }
        return acc / static_cast<double>(m);
    }
    return scaled_regular(a, x);
}

}  // namespace

Complex sin_pi(Complex z) {
    // Reduce the real part into [-1, 1) so integer arguments give exact zeros.
    double r = std::fmod(z.real(), 2.0);
    if (r >= 1.0) r -= 2.0;
    if (r < -1.0) r += 2.0;
    double sr, cr;
    if (r == 0.0 || r == -1.0) {
        sr = 0.0;
        cr = (r == 0.0) ? 1.0 : -1.0;
    } else if (r == 0.5) {
        sr = 1.0;
        cr = 0.0;
    } else if (r == -0.5) {
        sr = -1.0;
        cr = 0.0;
    } else {
        sr = std::sin(kPi * r);
        cr = std::cos(kPi * r);
    }
    const double y = kPi * z.imag();
    return {sr * std::cosh(y), cr * std::sinh(y)};
}

Complex gamma_complex(Complex s) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw Error(ErrorKind::InvalidArgument, "non-finite argument to gamma");
    double centre = 0.0;
    if (near_nonpositive_integer(s, tol::gamma_pole, centre))
        throw Error(ErrorKind::PoleOfGamma, "gamma pole at " + std::to_string(centre));
    if (s.real() < 0.5) return kPi / (sin_pi(s) * lanczos_gamma(1.0 - s));
    return lanczos_gamma(s);
}

Complex rgamma_complex(Complex s) {
    if (s.real() < 0.5) return sin_pi(s) * lanczos_gamma(1.0 - s) / kPi;
    return 1.0 / lanczos_gamma(s);
}

Complex upper_incomplete_gamma_scaled(Complex a, double x) {
    if (!(x > 0.0)) throw Error(ErrorKind::NonPositiveX, "x must be positive");
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw Error(ErrorKind::InvalidArgument, "non-finite parameter");
    return scaled_impl(a, x);
}

Complex upper_incomplete_gamma(Complex a, double x) {
    const Complex g = upper_incomplete_gamma_scaled(a, x);
    if (g == 0.0) return 0.0;
    const Complex r = std::exp(a * std::log(x) + std::log(g));
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) return g * std::exp(a * std::log(x));
    return r;
}

}  // namespace cimmino
