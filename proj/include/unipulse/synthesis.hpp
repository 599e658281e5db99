#pragma once

#include "unipulse/farfield.hpp"
#include "unipulse/fields.hpp"
#include "unipulse/numerics.hpp"

#include <cstdint>
#include <functional>

namespace unipulse {

//! Plane-wave vector; omega = c k.
struct WaveVector {
  double kx = 0.0, ky = 0.0, kz = 0.0;
  double k() const { return std::sqrt(kx * kx + ky * ky + kz * kz); }
};

//! Fourier-Bessel weight A(kz, omega) of
//!   u = int_0^inf domega e^{i omega t} int_0^{omega/c} dkz A e^{-i kz z} J0(rho sqrt(omega^2/c^2 - kz^2)).
//! Calling it outside 0 <= kz <= omega/c yields zero (Heaviside continuation).
struct SpectralWeight {
  std::function<Complex(double kz, double omega)> A;
  double c = 1.0;
  //! |A| <= C exp(-decay_rate * omega)
  double decay_rate = 1.0;
  //! A vanishes for kz below this value.
  double kz_onset = 0.0;

  Complex operator()(double kz, double omega) const {
    if (kz < 0.0 || kz > omega / c)
      return {0.0, 0.0};
    return A(kz, omega);
  }
};

//! A(kz, omega) = -(i/c) exp(-(omega/c - kz) b) fhat(kz).
//! Throws OutOfSupport unless 0 <= kz <= omega/c.
Complex spectral_weight(double kz, double omega, const PulseParams &params,
                        const Waveform &w);

SpectralWeight make_spectral_weight(const PulseParams &params, WaveformPtr w);

//! u(t, R) = (1/2 pi) \oint F'(N.R - ct, N) d^2N over the unit sphere.
//! Adaptive in cos(X) on [-1, 0] and [0, 1] (the far field may jump at the
//! equator), periodic trapezoid in phi doubled until converged.
QuadratureResult reconstruct_bmp(const FarfieldProfile &F_deriv, const SpacetimePoint &p,
                                 double c, double tol);

//! Superposition of non-stationary plane waves over the forward hemisphere,
//!   u = -(1/2 pi) \int dphi \int_0^1 dp/p^2 f'(((ct + ib) - (z + ib) p - rho cos(phi) sqrt(1 - p^2)) / p),
//! with p = cos X and geometric panels toward p = 0.
QuadratureResult reconstruct_hemisphere(const PulseParams &params, const Waveform &w,
                                        const SpacetimePoint &p, double tol);

//! u = -i \int_0^inf dk e^{ik(ct + ib)} \int_0^k dkz fhat(kz) J0(rho sqrt(k^2 - kz^2)) e^{-i kz (z + ib)}.
QuadratureResult reconstruct_fourier_bessel(const PulseParams &params, const Waveform &w,
                                            const SpacetimePoint &p, double tol);

struct FromWeightOptions {
  double tol = 1e-8;
  //! Lower end of the kz integral. Values below zero only integrate the
  //! weight's zero continuation.
  double kz_lower = 0.0;
};

//! Evaluates the Fourier-Bessel integral for an arbitrary weight.
QuadratureResult reconstruct_from_weight(const SpectralWeight &A, const SpacetimePoint &p,
                                         const FromWeightOptions &opts);

inline QuadratureResult reconstruct_from_weight(const SpectralWeight &A,
                                                const SpacetimePoint &p, double tol) {
  return reconstruct_from_weight(A, p, FromWeightOptions{tol, 0.0});
}

//------------------------------------------------------------------------------
// Monte-Carlo estimate of the Cartesian plane-wave integral
//   u = -(i/2 pi) \int_{kz > 0} fhat(kz) e^{i[k(ct + ib) - kz(z + ib) - kx x - ky y]} / k d^3k.

struct McEstimate {
  Complex value;
  double stderr_ = 0.0;
  std::size_t samples = 0;
};

//! Counter-based uniform variate in [0, 1): a pure function of (seed, counter).
double counter_uniform(std::uint64_t seed, std::uint64_t counter);

//! Importance sampling with k ~ Exp(lambda), lambda = min(b, decay_rate), and
//! direction uniform on the forward hemisphere. Samples are processed in
//! fixed blocks so the estimate is bitwise independent of the thread count.
//! Throws std::invalid_argument for n_samples < 1e4.
McEstimate reconstruct_cartesian_mc(const PulseParams &params, const Waveform &w,
                                    const SpacetimePoint &p, std::size_t n_samples,
                                    std::uint64_t seed);

} // namespace unipulse
