#include "unipulse/fields.hpp"
#include "unipulse/numerics.hpp"

#include <cmath>
#include <fmt/format.h>
#include <numbers>
#include <vector>

namespace unipulse {

namespace {

double energy_density(const FieldEvaluator &u, double t, double rho, double z, double h,
                      double c) {
  // Derivatives at (x = rho, y = 0); d/dy vanishes there for axisymmetric fields.
  const double dt = h / c;
  const Complex du_ct = (u({t + dt, rho, 0.0, z}) - u({t - dt, rho, 0.0, z})) / (2.0 * h);
  const Complex du_x = (u({t, rho + h, 0.0, z}) - u({t, rho - h, 0.0, z})) / (2.0 * h);
  const Complex du_z = (u({t, rho, 0.0, z + h}) - u({t, rho, 0.0, z - h})) / (2.0 * h);
  return std::norm(du_ct) + std::norm(du_x) + std::norm(du_z);
}

// Breakpoints for a [lo, hi] integral whose integrand may be concentrated
// within `width` of either end.
std::vector<double> end_refined_breaks(double lo, double hi, double width) {
  std::vector<double> left;
  const double half = 0.5 * (hi - lo);
  for (double w = 0.5 * half; w > 0.01 * width; w *= 0.5)
    left.push_back(w);
  std::vector<double> breaks{lo};
  for (auto it = left.rbegin(); it != left.rend(); ++it)
    breaks.push_back(lo + *it);
  breaks.push_back(lo + half);
  for (double w : left)
    breaks.push_back(hi - w);
  breaks.push_back(hi);
  return breaks;
}

} // namespace

double energy_shell(const FieldEvaluator &u, double t, double R, const EnergyOptions &opts) {
  if (R == 0.0)
    return 0.0;
  const double h = 1e-5 * (opts.length_scale + R);
  const auto integrand = [&](double chi) -> Complex {
    return energy_density(u, t, R * std::sin(chi), R * std::cos(chi), h, opts.c) *
           std::sin(chi);
  };
  // Near the axis the field of a focused pulse falls off over an angle ~ L/R.
  const double width = std::min(1.0, opts.length_scale / R);
  const auto breaks = end_refined_breaks(0.0, std::numbers::pi, width);
  QuadratureOptions q;
  q.tol = 0.1 * opts.tol;
  q.scale = 1e-300;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    sum += integrate_adaptive(integrand, breaks[i], breaks[i + 1], q).value.real();
  return 2.0 * std::numbers::pi * R * R * sum;
}

EnergyResult energy_estimate(const FieldEvaluator &u, double t, const EnergyOptions &opts) {
  if (!(opts.cutoff_radius > 4.0 * opts.length_scale))
    throw std::invalid_argument("energy_estimate: cutoff radius must exceed 4 length scales");
  EnergyResult out;
  const auto shell = [&](double R) -> Complex {
    ++out.evaluations;
    return energy_shell(u, t, R, opts);
  };

  // Geometric radial panels [0, L], [L, 2L], ... up to the cutoff. Panel
  // results are summed with a relative tolerance.
  QuadratureOptions q;
  q.tol = opts.tol;
  q.scale = 1e-300;
  double lo = 0.0;
  double hi = opts.length_scale;
  while (lo < opts.cutoff_radius) {
    hi = std::min(hi, opts.cutoff_radius);
    out.truncated += integrate_adaptive(shell, lo, hi, q).value.real();
    lo = hi;
    hi *= 2.0;
  }

  // Tail: shell(R) ~ C R^-p beyond the cutoff.
  const double Rc = opts.cutoff_radius;
  const double g1 = shell(0.25 * Rc).real();
  const double g2 = shell(0.5 * Rc).real();
  const double g3 = shell(Rc).real();
  const double p_inner = std::log(g1 / g2) / std::log(2.0);
  const double p_outer = std::log(g2 / g3) / std::log(2.0);
  out.decay_exponent = p_outer;
  if (!std::isfinite(p_outer) || p_outer < 1.5 || std::abs(p_outer - p_inner) > 0.25)
    throw ToleranceNotReached(
        fmt::format("energy_estimate: shell integrand not in its power-law regime at "
                    "R={} (local exponents {:.3f}, {:.3f}); increase the cutoff",
                    Rc, p_inner, p_outer),
        {Complex{out.truncated, 0.0}, std::abs(out.truncated), out.evaluations});
  out.tail = g3 * Rc / (p_outer - 1.0);
  out.total = out.truncated + out.tail;
  return out;
}

EnergyResult energy_estimate(double t, const PulseParams &params, const Waveform &w,
                             double cutoff_radius, double tol) {
  if (!params.regular())
    throw std::invalid_argument("energy_estimate: pulse is not regular (zeta >= c tau)");
  EnergyOptions opts;
  opts.c = params.c();
  opts.length_scale = params.b();
  opts.cutoff_radius = cutoff_radius;
  opts.tol = tol;
  const FieldEvaluator u = [&](const SpacetimePoint &p) {
    return eval_quasi_spherical(p, params, w);
  };
  return energy_estimate(u, t, opts);
}

} // namespace unipulse
