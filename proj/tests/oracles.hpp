#pragma once
// Test-only reference implementations in 50-digit arithmetic. They share no
// code with the library.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <complex>

namespace oracle {

using Real = boost::multiprecision::cpp_bin_float_50;

struct BigComplex {
  Real re, im;
};

inline BigComplex mul(const BigComplex &a, const BigComplex &b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline BigComplex sub(const BigComplex &a, const BigComplex &b) {
  return {a.re - b.re, a.im - b.im};
}

inline BigComplex inv(const BigComplex &a) {
  const Real d = a.re * a.re + a.im * a.im;
  return {a.re / d, -a.im / d};
}

//! Square root with Im >= 0 (principal root, negated when its Im < 0).
inline BigComplex sqrt_upper(const BigComplex &w) {
  using boost::multiprecision::sqrt;
  const Real mod = sqrt(w.re * w.re + w.im * w.im);
  Real re = sqrt((mod + w.re) / 2);
  Real im = sqrt((mod - w.re) / 2);
  if (w.im < 0)
    im = -im;
  if (im < 0) {
    re = -re;
    im = -im;
  }
  return {re, im};
}

inline std::complex<double> to_double(const BigComplex &z) {
  return {static_cast<double>(z.re), static_cast<double>(z.im)};
}

//! J0 by its Maclaurin series; 50 digits leave ~30 after cancellation for
//! |x| <= 60.
inline double bessel_j0_series(double xd) {
  const Real x = xd;
  const Real q = -(x * x) / 4;
  Real term = 1, sum = 1;
  for (int m = 1; m < 400; ++m) {
    term *= q / (Real(m) * m);
    sum += term;
    if (abs(term) < Real("1e-45"))
      break;
  }
  return static_cast<double>(sum);
}

//! S = sqrt_upper(c^2 (t + i tau)^2 - rho^2)
inline BigComplex s_function(double c, double tau, double t, double rho) {
  const BigComplex ct_star{Real(c) * t, Real(c) * tau};
  const BigComplex w = sub(mul(ct_star, ct_star), BigComplex{Real(rho) * rho, 0});
  return sqrt_upper(w);
}

//! 1 / (S (S - z - i zeta))
inline std::complex<double> simple_pulse(double c, double tau, double zeta, double t,
                                         double rho, double z) {
  const BigComplex S = s_function(c, tau, t, rho);
  return to_double(inv(mul(S, sub(S, BigComplex{Real(z), Real(zeta)}))));
}

} // namespace oracle
