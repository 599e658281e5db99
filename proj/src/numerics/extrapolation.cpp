#include "unipulse/numerics.hpp"

#include <cmath>
#include <fmt/format.h>

namespace unipulse {

namespace {

void validate(std::span<const ExtrapolationSample> samples) {
  if (samples.size() < 3)
    throw std::invalid_argument("limit_extrapolate: need at least 3 samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].h > 0.0))
      throw std::invalid_argument("limit_extrapolate: steps must be positive");
    if (i > 0 && !(samples[i].h < samples[i - 1].h))
      throw std::invalid_argument("limit_extrapolate: steps must strictly decrease");
  }
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace

std::vector<Complex>
richardson_diagonal(std::span<const ExtrapolationSample> samples) {
  // T[i] holds the interpolant through samples i..i+k evaluated at h = 0.
  std::vector<Complex> t;
  t.reserve(samples.size());
  for (const auto &s : samples)
    t.push_back(s.value);
  std::vector<Complex> diagonal{t.back()};
  const std::size_t n = samples.size();
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = 0; i + k < n; ++i) {
      const double hi = samples[i].h;
      const double hk = samples[i + k].h;
      t[i] = (hi * t[i + 1] - hk * t[i]) / (hi - hk);
    }
    diagonal.push_back(t[n - k - 1]);
  }
  return diagonal;
}

std::vector<Complex>
rational_diagonal(std::span<const ExtrapolationSample> samples) {
  // Bulirsch-Stoer rational extrapolation to h = 0, Stoer & Bulirsch form:
  //   R(i,k) = R(i+1,k-1) + (R(i+1,k-1) - R(i,k-1)) /
  //            [ (h_i/h_{i+k}) (1 - (R(i+1,k-1) - R(i,k-1)) / (R(i+1,k-1) - R(i+1,k-2))) - 1 ]
  const std::size_t n = samples.size();
  std::vector<Complex> prev2(n + 1, Complex{0.0, 0.0}); // R(.,k-2), R(.,-1) = 0
  std::vector<Complex> prev(n);
  for (std::size_t i = 0; i < n; ++i)
    prev[i] = samples[i].value;
  std::vector<Complex> diagonal{prev.back()};
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<Complex> cur(n - k);
    for (std::size_t i = 0; i + k < n; ++i) {
      const Complex diff = prev[i + 1] - prev[i];
      const Complex lower = prev[i + 1] - prev2[i + 1];
      const double ratio = samples[i].h / samples[i + k].h;
      if (diff == Complex{0.0, 0.0}) {
        cur[i] = prev[i + 1];
        continue;
      }
      if (lower == Complex{0.0, 0.0})
        return {};
      const Complex denom = ratio * (1.0 - diff / lower) - 1.0;
      if (std::abs(denom) == 0.0)
        return {};
      cur[i] = prev[i + 1] + diff / denom;
      if (!finite(cur[i]))
        return {};
    }
    prev2 = prev;
    prev = std::move(cur);
    diagonal.push_back(prev[n - k - 1]);
  }
  return diagonal;
}

ExtrapolationResult limit_extrapolate(std::span<const ExtrapolationSample> samples) {
  validate(samples);

  const auto poly = richardson_diagonal(samples);
  const auto rat = rational_diagonal(samples);
  auto spread = [](const std::vector<Complex> &d) {
    return std::abs(d[d.size() - 1] - d[d.size() - 2]);
  };

  ExtrapolationResult out;
  out.value = poly.back();
  out.stability = spread(poly);
  out.scheme = ExtrapolationResult::Scheme::polynomial;
  if (!rat.empty() && spread(rat) < out.stability) {
    out.value = rat.back();
    out.stability = spread(rat);
    out.scheme = ExtrapolationResult::Scheme::rational;
  }

  // Divergence tests: the extrapolants must settle faster than the raw
  // samples move, and successive polynomial corrections must not grow.
  const double scale = std::max({std::abs(out.value), std::abs(samples.back().value), 1e-300});
  const std::size_t n = samples.size();
  const double raw_step = std::abs(samples[n - 1].value - samples[n - 2].value);
  if (out.stability > 0.5 * raw_step && out.stability > 1e-10 * scale)
    throw ExtrapolationUnstable(
        fmt::format("limit_extrapolate: extrapolant spread {:.3g} exceeds half the last sample "
                    "change {:.3g}",
                    out.stability, raw_step),
        out.value, out.stability);
  if (poly.size() >= 3) {
    const double last = std::abs(poly[poly.size() - 1] - poly[poly.size() - 2]);
    const double before = std::abs(poly[poly.size() - 2] - poly[poly.size() - 3]);
    if (last > before && last > 1e-10 * scale && out.stability > 1e-10 * scale)
      throw ExtrapolationUnstable(
          fmt::format("limit_extrapolate: extrapolants diverge (last correction {:.3g} "
                      "exceeds previous {:.3g})",
                      last, before),
          out.value, out.stability);
  }
  if (!finite(out.value))
    throw ExtrapolationUnstable("limit_extrapolate: non-finite extrapolant",
                                out.value, out.stability);
  return out;
}

} // namespace unipulse
