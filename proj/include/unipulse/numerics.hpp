#pragma once

#include "unipulse/errors.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace unipulse {

//==============================================================================
// Special functions
//==============================================================================

//! Square root on the branch with Im r >= 0. Negative reals map to +i*sqrt|w|,
//! non-negative reals to the non-negative real root.
Complex complex_sqrt_upper(Complex w);

//! Bessel function of the first kind, order zero, for real argument.
//! Absolute error below 1e-12 for |x| <= 1e4.
double bessel_j0(double x);

//==============================================================================
// Quadrature
//==============================================================================

using ComplexIntegrand = std::function<Complex(double)>;

struct QuadratureOptions {
  //! Target: error <= tol * max(scale, |value|). The default scale of 1 gives
  //! an absolute tolerance for small integrals; a tiny scale makes it relative.
  double tol = 1e-10;
  double scale = 1.0;
  std::size_t max_evaluations = 1'000'000;
};

//! Single 10/21-point Gauss-Kronrod panel. Returns the Kronrod value and
//! |K - G| as error estimate.
QuadratureResult gauss_kronrod_21(const ComplexIntegrand &f, double a, double b);

//! Globally adaptive bisection over [a, b] (QUADPACK qag style), complex
//! values integrated componentwise.
//! Throws ToleranceNotReached when the evaluation budget is exhausted.
QuadratureResult integrate_adaptive(const ComplexIntegrand &f, double a,
                                    double b, const QuadratureOptions &opts);

inline QuadratureResult integrate_adaptive(const ComplexIntegrand &f, double a,
                                           double b, double tol) {
  return integrate_adaptive(f, a, b, QuadratureOptions{tol});
}

//! Integral over [start, inf) for integrands bounded by C*exp(-decay_hint*x).
//! Panels of geometrically growing width are added until two consecutive
//! panels fall below the tolerance.
QuadratureResult integrate_semi_infinite(const ComplexIntegrand &f,
                                         double decay_hint,
                                         const QuadratureOptions &opts,
                                         double start = 0.0);

inline QuadratureResult integrate_semi_infinite(const ComplexIntegrand &f,
                                                double tol, double decay_hint) {
  return integrate_semi_infinite(f, decay_hint, QuadratureOptions{tol});
}

//==============================================================================
// Limit extrapolation
//==============================================================================

struct ExtrapolationSample {
  double h; //!< step, > 0, strictly decreasing along the sequence
  Complex value;
};

struct ExtrapolationResult {
  Complex value;
  //! |last extrapolant - previous extrapolant|
  double stability = 0.0;
  enum class Scheme { polynomial, rational } scheme = Scheme::polynomial;
};

//! Estimates lim_{h->0} v(h) for v = v0 + c1 h + c2 h^2 + ...
//! Both the Richardson (polynomial) and Bulirsch-Stoer (rational) tableaux are
//! built; the one whose last two diagonal entries agree better wins.
//! Throws ExtrapolationUnstable when the extrapolants diverge.
ExtrapolationResult limit_extrapolate(std::span<const ExtrapolationSample> samples);

//! Polynomial (Neville) tableau evaluated at h = 0. Returns the successive
//! diagonal extrapolants, the last being the highest order one.
std::vector<Complex>
richardson_diagonal(std::span<const ExtrapolationSample> samples);

//! Rational (Bulirsch-Stoer) counterpart of richardson_diagonal. Empty result
//! if the tableau hits a pole.
std::vector<Complex>
rational_diagonal(std::span<const ExtrapolationSample> samples);

} // namespace unipulse
