#include "unipulse/synthesis.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace unipulse {

namespace {
constexpr Complex I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

void accumulate(QuadratureResult &total, const QuadratureResult &r) {
  total.value += r.value;
  total.error_estimate += r.error_estimate;
  total.evaluations += r.evaluations;
}

// Integrates g over (0, 1] on panels [2^-(j+1), 2^-j]. Stops once two
// consecutive panels are below tol/10; the remaining sliver [0, 2^-J] gets a
// single Gauss-Kronrod panel.
QuadratureResult integrate_toward_zero(const ComplexIntegrand &g, double tol) {
  QuadratureResult total;
  double hi = 1.0;
  int quiet = 0;
  for (int j = 0; j < 60; ++j) {
    const double lo = 0.5 * hi;
    QuadratureOptions q;
    q.tol = tol * std::max(1.0, std::abs(total.value)) / 4.0;
    const QuadratureResult r = integrate_adaptive(g, lo, hi, q);
    accumulate(total, r);
    hi = lo;
    if (std::abs(r.value) + r.error_estimate < 0.1 * tol) {
      if (++quiet == 2)
        break;
    } else {
      quiet = 0;
    }
  }
  accumulate(total, gauss_kronrod_21(g, 0.0, hi));
  return total;
}
} // namespace

//------------------------------------------------------------------------------

Complex spectral_weight(double kz, double omega, const PulseParams &params,
                        const Waveform &w) {
  const double c = params.c();
  if (kz < 0.0 || kz > omega / c)
    throw OutOfSupport(fmt::format(
        "spectral_weight: kz={} outside [0, omega/c={}]", kz, omega / c));
  return -(I / c) * std::exp(-(omega / c - kz) * params.b()) * w.spectrum(kz);
}

SpectralWeight make_spectral_weight(const PulseParams &params, WaveformPtr w) {
  SpectralWeight A;
  A.c = params.c();
  A.decay_rate = std::min(params.b(), w->decay_rate()) / params.c();
  A.kz_onset = w->spectral_onset();
  A.A = [params, w = std::move(w)](double kz, double omega) {
    return spectral_weight(kz, omega, params, *w);
  };
  return A;
}

//------------------------------------------------------------------------------

QuadratureResult reconstruct_bmp(const FarfieldProfile &F_deriv, const SpacetimePoint &p,
                                 double c, double tol) {
  const double ct = c * p.t;
  // Periodic trapezoid in phi, doubled until two successive levels agree.
  const auto phi_integral = [&](double mu) -> Complex {
    const double chi = std::acos(std::clamp(mu, -1.0, 1.0));
    const double sin_chi = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    const auto at = [&](double phi) {
      const double s = sin_chi * (p.x * std::cos(phi) + p.y * std::sin(phi)) + mu * p.z - ct;
      return F_deriv(s, Direction{chi, phi});
    };
    std::size_t n = 8;
    Complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i)
      sum += at(2.0 * kPi * double(i) / double(n));
    Complex estimate = sum * (2.0 * kPi / double(n));
    for (int level = 0; level < 14; ++level) {
      for (std::size_t i = 0; i < n; ++i)
        sum += at(2.0 * kPi * (double(i) + 0.5) / double(n));
      n *= 2;
      const Complex refined = sum * (2.0 * kPi / double(n));
      const double diff = std::abs(refined - estimate);
      estimate = refined;
      if (diff < 0.1 * tol * std::max(1.0, std::abs(refined)) && level >= 1)
        return estimate;
    }
    return estimate;
  };

  QuadratureResult total;
  // Forward and backward halves separately; each refined toward the equator.
  accumulate(total, integrate_toward_zero(phi_integral, tol));
  accumulate(total, integrate_toward_zero([&](double m) { return phi_integral(-m); }, tol));
  total.value /= 2.0 * kPi;
  total.error_estimate /= 2.0 * kPi;
  return total;
}

QuadratureResult reconstruct_hemisphere(const PulseParams &params, const Waveform &w,
                                        const SpacetimePoint &p, double tol) {
  const Complex ct_star{params.c() * p.t, params.b()};
  const Complex z_star{p.z, params.b()};
  const double rho = p.rho();

  // Integrand in psi = phi - phi_0 depends on cos(psi) only: integrate [0, pi]
  // and double.
  const auto psi_integral = [&](double q) -> Complex {
    const double sin_x = std::sqrt(std::max(0.0, 1.0 - q * q));
    const auto g = [&](double psi) {
      const Complex arg = (ct_star - z_star * q - rho * std::cos(psi) * sin_x) / q;
      return w.deriv(arg) / (q * q);
    };
    if (rho == 0.0)
      return kPi * g(0.0);
    QuadratureOptions opts;
    opts.tol = 0.1 * tol;
    return integrate_adaptive(g, 0.0, kPi, opts).value;
  };

  QuadratureResult r = integrate_toward_zero(psi_integral, tol);
  // -(1/2 pi) * 2 * (integral over [0, pi])
  r.value *= -1.0 / kPi;
  r.error_estimate /= kPi;
  return r;
}

QuadratureResult reconstruct_fourier_bessel(const PulseParams &params, const Waveform &w,
                                            const SpacetimePoint &p, double tol) {
  const double ct = params.c() * p.t;
  const double b = params.b();
  const double rho = p.rho();
  const double onset = w.spectral_onset();

  const auto inner = [&](double k) -> Complex {
    if (k <= onset)
      return {0.0, 0.0};
    // e^{ik(ct+ib)} e^{-ikz(z+ib)} = e^{i(k ct - kz z)} e^{-(k - kz) b}
    const auto g = [&](double kz) -> Complex {
      const double radial = std::sqrt(std::max(0.0, (k - kz) * (k + kz)));
      return w.spectrum(kz) * bessel_j0(rho * radial) *
             std::exp(Complex{-(k - kz) * b, k * ct - kz * p.z});
    };
    QuadratureOptions opts;
    opts.tol = 0.1 * tol;
    return integrate_adaptive(g, onset, k, opts).value;
  };

  const double decay = std::min(b, w.decay_rate());
  QuadratureOptions outer;
  outer.tol = tol;
  QuadratureResult r = integrate_semi_infinite(inner, decay, outer, onset);
  r.value *= -I;
  return r;
}

QuadratureResult reconstruct_from_weight(const SpectralWeight &A, const SpacetimePoint &p,
                                         const FromWeightOptions &opts) {
  const double c = A.c;
  const double onset = std::max(0.0, A.kz_onset);
  const double lower = std::min(opts.kz_lower, onset);

  const auto inner = [&](double omega) -> Complex {
    const double kmax = omega / c;
    if (kmax <= lower)
      return {0.0, 0.0};
    const auto g = [&](double kz) -> Complex {
      const double radial = std::sqrt(std::max(0.0, (kmax - kz) * (kmax + kz)));
      return A(kz, omega) * std::exp(Complex{0.0, -kz * p.z}) *
             bessel_j0(p.rho() * radial);
    };
    QuadratureOptions q;
    q.tol = 0.1 * opts.tol;
    QuadratureResult sum;
    // The weight may jump at its onset.
    if (lower < onset && onset < kmax) {
      accumulate(sum, integrate_adaptive(g, lower, onset, q));
      accumulate(sum, integrate_adaptive(g, onset, kmax, q));
    } else {
      accumulate(sum, integrate_adaptive(g, lower, kmax, q));
    }
    return sum.value * std::exp(Complex{0.0, omega * p.t});
  };

  QuadratureOptions outer;
  outer.tol = opts.tol;
  return integrate_semi_infinite(inner, A.decay_rate, outer, onset * c);
}

} // namespace unipulse
