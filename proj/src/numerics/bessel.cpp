#include "unipulse/numerics.hpp"

#include <cmath>
#include <numbers>

namespace unipulse {

namespace {

// Maclaurin series; all terms below 4 in magnitude for |x| < 4 so there is no
// appreciable cancellation.
double j0_series(double x) {
  const double q = -0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < 60; ++m) {
    term *= q / (double(m) * double(m));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum))
      break;
  }
  return sum;
}

// Miller's backward recurrence normalised with J0 + 2 sum_k J_2k = 1.
double j0_miller(double x) {
  const int start = 2 * (static_cast<int>(0.6 * x + 25.0 + 2.0 * std::cbrt(x)) + 1);
  const double two_over_x = 2.0 / x;
  double jp1 = 0.0; // J_{n+1}
  double j = 1e-30; // J_n
  double norm = 0.0;
  double j0 = 0.0;
  for (int n = start; n > 0; --n) {
    const double jm1 = n * two_over_x * j - jp1;
    jp1 = j;
    j = jm1;
    if ((n - 1) % 2 == 0 && n - 1 > 0)
      norm += 2.0 * j;
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      norm *= 1e-250;
    }
  }
  j0 = j;
  norm += j0;
  return j0 / norm;
}

// Hankel asymptotic expansion, J0 = sqrt(2/(pi x)) (P cos(x - pi/4) - Q sin(x - pi/4)).
// Summed until the terms stop decreasing or drop below 1e-17.
double j0_asymptotic(double x) {
  const double inv8x = 1.0 / (8.0 * x);
  double p = 1.0;
  double q = 0.0;
  double term = 1.0; // a_k / x^k with a_k = prod (2j-1)^2 / (k! 8^k), signs applied below
  double prev = 2.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * odd * odd * inv8x / k;
    if (next > prev || next < 1e-17)
      break;
    prev = term = next;
    // k = 1 -> Q gets -1/(8x); k = 2 -> P gets -9/(128 x^2); alternating thereafter.
    const int r = k % 4;
    if (r == 1)
      q -= term;
    else if (r == 2)
      p -= term;
    else if (r == 3)
      q += term;
    else
      p += term;
  }
  const double s = std::sin(x);
  const double c = std::cos(x);
  const double cos_shift = (c + s) * std::numbers::sqrt2 * 0.5;
  const double sin_shift = (s - c) * std::numbers::sqrt2 * 0.5;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_shift - q * sin_shift);
}

} // namespace

double bessel_j0(double x) {
  x = std::abs(x);
  if (x < 4.0)
    return j0_series(x);
  if (x < 25.0)
    return j0_miller(x);
  return j0_asymptotic(x);
}

} // namespace unipulse
