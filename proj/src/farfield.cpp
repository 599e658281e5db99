#include "unipulse/farfield.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace unipulse {

namespace {
constexpr Complex I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

// Argument of f in the far field, (-s + i b (1 - cos chi)) / cos chi.
Complex farfield_argument(double s, double cos_chi, double b) {
  return Complex{-s, b * (1.0 - cos_chi)} / cos_chi;
}
} // namespace

std::vector<double> default_t_schedule(const PulseParams &params) {
  const double unit = params.b() / params.c();
  return {1e2 * unit, 1e3 * unit, 1e4 * unit};
}

ExtrapolationResult farfield_numeric(const FieldEvaluator &u, double c, double s,
                                     const Direction &n,
                                     std::span<const double> t_schedule) {
  if (t_schedule.size() < 3)
    throw std::invalid_argument("farfield_numeric: t_schedule needs at least 3 times");
  const auto e = n.unit();
  std::vector<ExtrapolationSample> samples;
  samples.reserve(t_schedule.size());
  for (std::size_t i = 0; i < t_schedule.size(); ++i) {
    const double t = t_schedule[i];
    if (i > 0 && !(t > t_schedule[i - 1]))
      throw std::invalid_argument("farfield_numeric: t_schedule must be increasing");
    const double ct = c * t;
    const double R = ct + s;
    if (!(ct > 0.0) || !(R > 0.0))
      throw std::invalid_argument(
          fmt::format("farfield_numeric: need ct > 0 and ct + s > 0 (t={}, s={})", t, s));
    const Complex v = ct * u({t, R * e[0], R * e[1], R * e[2]});
    samples.push_back({1.0 / ct, v});
  }
  return limit_extrapolate(samples);
}

Complex farfield_analytic(double s, const Direction &n, const PulseParams &params,
                          const Waveform &w) {
  const double cos_chi = std::cos(n.chi);
  if (!(cos_chi > 0.0) || n.chi >= 0.5 * kPi)
    return {0.0, 0.0};
  return w.eval(farfield_argument(s, cos_chi, params.b())) / cos_chi;
}

Complex farfield_deriv(double s, const Direction &n, const PulseParams &params,
                       const Waveform &w) {
  const double cos_chi = std::cos(n.chi);
  if (!(cos_chi > 0.0) || n.chi >= 0.5 * kPi)
    return {0.0, 0.0};
  return -w.deriv(farfield_argument(s, cos_chi, params.b())) / (cos_chi * cos_chi);
}

FarfieldProfile make_analytic_farfield(const PulseParams &params, WaveformPtr w) {
  return {[params, w = std::move(w)](double s, const Direction &n) {
            return farfield_analytic(s, n, params, *w);
          },
          FarfieldProfile::Provenance::analytic};
}

FarfieldProfile make_analytic_farfield_deriv(const PulseParams &params, WaveformPtr w) {
  return {[params, w = std::move(w)](double s, const Direction &n) {
            return farfield_deriv(s, n, params, *w);
          },
          FarfieldProfile::Provenance::analytic};
}

FarfieldProfile make_numeric_farfield(FieldEvaluator u, double c,
                                      std::vector<double> t_schedule) {
  return {[u = std::move(u), c, sched = std::move(t_schedule)](double s, const Direction &n) {
            return farfield_numeric(u, c, s, n, sched).value;
          },
          FarfieldProfile::Provenance::numeric};
}

//------------------------------------------------------------------------------

std::string to_string(Verdict v) {
  switch (v) {
  case Verdict::pass:
    return "PASS";
  case Verdict::fail:
    return "FAIL";
  case Verdict::warn:
    return "WARN";
  }
  return "?";
}

std::vector<Direction> default_backward_directions() {
  std::vector<Direction> dirs;
  for (double chi : {5.0 * kPi / 8.0, 3.0 * kPi / 4.0, 7.0 * kPi / 8.0, kPi})
    for (double phi : {0.0, kPi})
      dirs.push_back({chi, phi});
  return dirs;
}

std::vector<double> default_s_samples(const PulseParams &params) {
  const double b = params.b();
  return {-2.0 * b, -1.0 * b, 0.0, 1.0 * b, 2.0 * b};
}

std::vector<double> default_unidirectional_schedule(const PulseParams &params) {
  const double unit = params.b() / params.c();
  return {1e4 * unit, 1e5 * unit, 1e6 * unit, 1e7 * unit, 1e8 * unit};
}

UnidirectionalityReport check_unidirectional(const FieldEvaluator &u, double c,
                                             std::span<const double> s_samples,
                                             std::span<const Direction> backward,
                                             double tol,
                                             std::span<const double> t_schedule) {
  if (s_samples.empty() || backward.empty())
    throw std::invalid_argument("check_unidirectional: need s samples and directions");
  UnidirectionalityReport report;
  report.s_samples.assign(s_samples.begin(), s_samples.end());
  report.t_schedule.assign(t_schedule.begin(), t_schedule.end());
  report.c = c;
  report.tol = tol;

  bool any_fail = false, any_warn = false;
  double worst_value = -1.0;
  for (const Direction &n : backward) {
    if (!(n.chi > 0.5 * kPi) || n.chi > kPi)
      throw std::invalid_argument(
          fmt::format("check_unidirectional: direction chi={} is not backward", n.chi));
    UnidirectionalityEntry entry;
    entry.direction = n;
    for (double s : s_samples) {
      try {
        const double mag = std::abs(farfield_numeric(u, c, s, n, t_schedule).value);
        if (mag > entry.max_abs_F) {
          entry.max_abs_F = mag;
          entry.worst_s = s;
        }
      } catch (const ExtrapolationUnstable &e) {
        entry.status = Verdict::warn;
        entry.message = fmt::format("s={}: {}", s, e.what());
        const double mag = std::abs(e.last_estimate());
        if (mag > entry.max_abs_F) {
          entry.max_abs_F = mag;
          entry.worst_s = s;
        }
      }
    }
    if (entry.max_abs_F > tol)
      entry.status = Verdict::fail;
    any_fail |= entry.status == Verdict::fail;
    any_warn |= entry.status == Verdict::warn;
    if (entry.max_abs_F > worst_value) {
      worst_value = entry.max_abs_F;
      report.worst = report.entries.size();
    }
    report.entries.push_back(std::move(entry));
  }
  report.verdict = any_fail ? Verdict::fail : (any_warn ? Verdict::warn : Verdict::pass);
  return report;
}

std::string UnidirectionalityReport::to_json() const {
  nlohmann::ordered_json j;
  j["verdict"] = to_string(verdict);
  j["tol"] = tol;
  j["c"] = c;
  j["t_schedule"] = t_schedule;
  j["s_samples"] = s_samples;
  j["worst"] = worst;
  auto &dirs = j["directions"] = nlohmann::ordered_json::array();
  for (const auto &e : entries)
    dirs.push_back({{"chi", e.direction.chi},
                    {"phi", e.direction.phi},
                    {"max_abs_F", e.max_abs_F},
                    {"worst_s", e.worst_s},
                    {"status", to_string(e.status)},
                    {"message", e.message}});
  return j.dump(2);
}

} // namespace unipulse
