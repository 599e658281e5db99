#include "unipulse/fields.hpp"
#include "unipulse/numerics.hpp"

#include <fmt/format.h>
#include <stdexcept>

namespace unipulse {

namespace {
constexpr Complex I{0.0, 1.0};
constexpr double kSingularGuard = 1e-300;
} // namespace

PulseParams::PulseParams(double c, double tau, double zeta)
    : m_c(c), m_tau(tau), m_zeta(zeta), m_b(c * tau) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw std::invalid_argument(fmt::format("pulse: c must be > 0 (got {})", c));
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument(fmt::format("pulse: tau must be > 0 (got {})", tau));
  if (!std::isfinite(zeta))
    throw std::invalid_argument("pulse: zeta must be finite");
}

Complex s_function(const SpacetimePoint &p, const PulseParams &params) {
  const double ct = params.c() * p.t;
  const double b = params.b();
  const double rho = p.rho();
  // c^2 t*^2 - rho^2 with the real part factored to limit cancellation.
  const Complex w{(ct - rho) * (ct + rho) - b * b, 2.0 * b * ct};
  return complex_sqrt_upper(w);
}

Complex phase_theta(const SpacetimePoint &p, const PulseParams &params) {
  return s_function(p, params) - p.z - I * params.b();
}

Complex eval_simple_pulse(const SpacetimePoint &p, const PulseParams &params) {
  const Complex S = s_function(p, params);
  const Complex denom = S * (S - p.z - I * params.zeta());
  if (std::abs(denom) < kSingularGuard)
    throw SingularPoint(fmt::format(
        "simple pulse is singular at (t={}, rho={}, z={}); zeta={} >= c tau={}", p.t,
        p.rho(), p.z, params.zeta(), params.b()));
  return 1.0 / denom;
}

Complex eval_quasi_spherical(const SpacetimePoint &p, const PulseParams &params,
                             const Waveform &w) {
  const Complex S = s_function(p, params);
  const Complex theta = S - p.z - I * params.b();
  return w.eval(theta) / S;
}

Complex eval_spherical_reference(const SpacetimePoint &p, double c, const Waveform &w,
                                 double b_ref) {
  const double R = p.R();
  if (!(R > 0.0))
    throw SingularPoint("spherical reference wave is singular at R = 0");
  return w.eval(Complex{R - c * p.t, b_ref}) / R;
}

FieldEvaluator make_simple_pulse(const PulseParams &params) {
  return [params](const SpacetimePoint &p) { return eval_simple_pulse(p, params); };
}

FieldEvaluator make_quasi_spherical(const PulseParams &params, WaveformPtr w) {
  return [params, w = std::move(w)](const SpacetimePoint &p) {
    return eval_quasi_spherical(p, params, *w);
  };
}

FieldEvaluator make_spherical_reference(double c, WaveformPtr w, double b_ref) {
  if (!(b_ref >= 0.0))
    throw std::invalid_argument("spherical reference: b_ref must be >= 0");
  return [c, w = std::move(w), b_ref](const SpacetimePoint &p) {
    return eval_spherical_reference(p, c, *w, b_ref);
  };
}

} // namespace unipulse
