#pragma once

#include <complex>

namespace cimmino {

using Complex = std::complex<double>;

/// Gamma function. Throws PoleOfGamma within tol::gamma_pole of 0, -1, -2, ...
Complex gamma_complex(Complex s);

/// 1/Gamma(s); entire, exactly zero at the non-positive integers.
Complex rgamma_complex(Complex s);

/// sin(pi z) with exact zeros at the integers.
Complex sin_pi(Complex z);

/// Upper incomplete gamma Gamma(a, x) for real x > 0 and any complex a.
/// Throws NonPositiveX for x <= 0. Returns exactly 0 on underflow.
Complex upper_incomplete_gamma(Complex a, double x);

/// x^-a Gamma(a, x), the combination the lattice sums actually use. Avoids
/// forming x^a when it would overflow or underflow.
Complex upper_incomplete_gamma_scaled(Complex a, double x);

}  // namespace cimmino
