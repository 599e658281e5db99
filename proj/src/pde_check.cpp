#include "unipulse/pde_check.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <stdexcept>

namespace unipulse {

ResidualReport wave_residual(const FieldEvaluator &u, const SpacetimePoint &p, double h,
                             double c) {
  if (!(h > 0.0))
    throw std::invalid_argument("wave_residual: h must be > 0");
  const Complex centre = u(p);
  double magnitude_sum = 0.0;
  const auto second = [&](SpacetimePoint minus, SpacetimePoint plus) {
    const Complex um = u(minus);
    const Complex up = u(plus);
    magnitude_sum += std::abs(um) + std::abs(up) + 2.0 * std::abs(centre);
    return (up - 2.0 * centre + um) / (h * h);
  };
  const double dt = h / c;
  const Complex uxx = second({p.t, p.x - h, p.y, p.z}, {p.t, p.x + h, p.y, p.z});
  const Complex uyy = second({p.t, p.x, p.y - h, p.z}, {p.t, p.x, p.y + h, p.z});
  const Complex uzz = second({p.t, p.x, p.y, p.z - h}, {p.t, p.x, p.y, p.z + h});
  // d^2/d(ct)^2 = u_tt / c^2
  const Complex utt = second({p.t - dt, p.x, p.y, p.z}, {p.t + dt, p.x, p.y, p.z});

  ResidualReport r;
  r.point = p;
  r.h = h;
  r.residual = uxx + uyy + uzz - utt;
  r.field_scale = std::abs(uxx) + std::abs(uyy) + std::abs(uzz) + std::abs(utt);
  if (!(r.field_scale > 0.0))
    r.field_scale = std::numeric_limits<double>::min();
  r.noise_floor = std::numeric_limits<double>::epsilon() * magnitude_sum / (h * h);
  return r;
}

ConvergenceReport convergence_order(const FieldEvaluator &u, const SpacetimePoint &p,
                                    std::span<const double> h_list, double c) {
  if (h_list.size() < 3)
    throw std::invalid_argument("convergence_order: need at least 3 steps");
  const bool descending = h_list[1] < h_list[0];
  for (std::size_t i = 1; i < h_list.size(); ++i) {
    const double ratio = descending ? h_list[i - 1] / h_list[i] : h_list[i] / h_list[i - 1];
    if (!(h_list[i] > 0.0) || std::abs(ratio - 2.0) > 1e-9)
      throw std::invalid_argument(
          fmt::format("convergence_order: steps must form a ratio-2 sequence (got {} then {})",
                      h_list[i - 1], h_list[i]));
  }

  ConvergenceReport out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double h : h_list) {
    auto r = wave_residual(u, p, h, c);
    const double mag = std::abs(r.residual);
    if (mag < 10.0 * r.noise_floor)
      out.below_noise_floor = true;
    const double x = std::log(h);
    const double y = std::log(std::max(mag, std::numeric_limits<double>::min()));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    out.residuals.push_back(std::move(r));
  }
  const double n = double(h_list.size());
  out.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

} // namespace unipulse
