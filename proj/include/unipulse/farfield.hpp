#pragma once

#include "unipulse/fields.hpp"
#include "unipulse/numerics.hpp"

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace unipulse {

//! Unit direction from polar angle chi (from +z) and azimuth phi.
struct Direction {
  double chi = 0.0;
  double phi = 0.0;

  std::array<double, 3> unit() const {
    return {std::sin(chi) * std::cos(phi), std::sin(chi) * std::sin(phi), std::cos(chi)};
  }
};

//! Far-field amplitude F(s, n), or its s-derivative, as a callable.
struct FarfieldProfile {
  enum class Provenance { numeric, analytic };
  std::function<Complex(double s, const Direction &n)> F;
  Provenance provenance = Provenance::analytic;

  Complex operator()(double s, const Direction &n) const { return F(s, n); }
};

//! Times {1e2, 1e3, 1e4} b / c.
std::vector<double> default_t_schedule(const PulseParams &params);

//! lim_{t->inf} ct u(t, (ct + s) n), extrapolated in h = 1/(ct) from the
//! values along t_schedule (increasing, >= 3 entries, ct + s > 0).
ExtrapolationResult farfield_numeric(const FieldEvaluator &u, double c, double s,
                                     const Direction &n,
                                     std::span<const double> t_schedule);

//! Closed-form far field of the quasi-spherical wave f(theta)/S:
//!   F = H(cos chi)/cos chi * f((-s + i b (1 - cos chi)) / cos chi),
//! with H(0) = 0.
Complex farfield_analytic(double s, const Direction &n, const PulseParams &params,
                          const Waveform &w);

//! dF/ds = -H(cos chi)/cos^2 chi * f'((-s + i b (1 - cos chi)) / cos chi).
Complex farfield_deriv(double s, const Direction &n, const PulseParams &params,
                       const Waveform &w);

FarfieldProfile make_analytic_farfield(const PulseParams &params, WaveformPtr w);
FarfieldProfile make_analytic_farfield_deriv(const PulseParams &params, WaveformPtr w);
FarfieldProfile make_numeric_farfield(FieldEvaluator u, double c,
                                      std::vector<double> t_schedule);

//------------------------------------------------------------------------------
// Unidirectionality certificate: the far field must vanish on the backward
// hemisphere.

enum class Verdict { pass, fail, warn };
std::string to_string(Verdict v);

struct UnidirectionalityEntry {
  Direction direction;
  double max_abs_F = 0.0;
  double worst_s = 0.0;
  Verdict status = Verdict::pass;
  std::string message; //!< extrapolation failure detail for warn entries
};

struct UnidirectionalityReport {
  std::vector<UnidirectionalityEntry> entries;
  std::vector<double> s_samples;
  std::vector<double> t_schedule;
  double c = 1.0;
  double tol = 0.0;
  Verdict verdict = Verdict::pass;
  //! Index of the entry with the largest |F|.
  std::size_t worst = 0;

  //! {"verdict", "tol", "c", "t_schedule", "s_samples", "worst",
  //!  "directions": [{"chi", "phi", "max_abs_F", "worst_s", "status", "message"}]}
  std::string to_json() const;
};

//! Eight directions chi in {5pi/8, 3pi/4, 7pi/8, pi} x phi in {0, pi}.
std::vector<Direction> default_backward_directions();
//! s in {-2, -1, 0, 1, 2} b.
std::vector<double> default_s_samples(const PulseParams &params);
//! Times {1e4, ..., 1e8} b / c. The longer ladder lets oscillating
//! backward tails (K > 0 waveforms) fall below the tolerance.
std::vector<double> default_unidirectional_schedule(const PulseParams &params);

//! PASS iff every backward |F| <= tol. Extrapolation failures are recorded as
//! warn entries, and a report with any warn entry and no fail entry is warn.
//! Throws std::invalid_argument if a direction has chi <= pi/2.
UnidirectionalityReport check_unidirectional(const FieldEvaluator &u, double c,
                                             std::span<const double> s_samples,
                                             std::span<const Direction> backward,
                                             double tol,
                                             std::span<const double> t_schedule);

} // namespace unipulse
