#pragma once

#include "unipulse/errors.hpp"
#include "unipulse/waveforms.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace unipulse {

//==============================================================================
//! Physical constants of one pulse family: wave speed c, imaginary time shift
//! tau and imaginary z shift zeta. b = c tau is derived.
class PulseParams {
public:
  //! Throws std::invalid_argument unless c > 0, tau > 0 and all are finite.
  PulseParams(double c, double tau, double zeta);
  PulseParams() : PulseParams(1.0, 1.0, 0.0) {}

  double c() const { return m_c; }
  double tau() const { return m_tau; }
  double zeta() const { return m_zeta; }
  double b() const { return m_b; }
  //! zeta < c tau: the simple pulse has no singularities and finite energy.
  bool regular() const { return m_zeta < m_b; }

private:
  double m_c, m_tau, m_zeta, m_b;
};

struct SpacetimePoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double rho() const { return std::hypot(x, y); }
  double R() const { return std::sqrt(x * x + y * y + z * z); }

  static SpacetimePoint axisymmetric(double t, double rho, double z) {
    return {t, rho, 0.0, z};
  }
};

using FieldEvaluator = std::function<Complex(const SpacetimePoint &)>;

//==============================================================================
// Closed forms

//! S = sqrt(c^2 (t + i tau)^2 - rho^2), branch with Im S >= c tau.
Complex s_function(const SpacetimePoint &p, const PulseParams &params);

//! Quasi-spherical phase theta = S - z - i b; Im theta >= 0.
Complex phase_theta(const SpacetimePoint &p, const PulseParams &params);

//! u = 1 / (S (S - z - i zeta)). Throws SingularPoint when the denominator
//! vanishes, which can only happen for zeta >= c tau.
Complex eval_simple_pulse(const SpacetimePoint &p, const PulseParams &params);

//! u = f(theta) / S.
Complex eval_quasi_spherical(const SpacetimePoint &p, const PulseParams &params,
                             const Waveform &w);

//! Outgoing spherical wave u = f(R - ct + i b_ref) / R. The shift b_ref >= 0
//! keeps the waveform argument in the upper half-plane. Throws SingularPoint
//! at R = 0.
Complex eval_spherical_reference(const SpacetimePoint &p, double c,
                                 const Waveform &w, double b_ref = 0.0);

FieldEvaluator make_simple_pulse(const PulseParams &params);
FieldEvaluator make_quasi_spherical(const PulseParams &params, WaveformPtr w);
FieldEvaluator make_spherical_reference(double c, WaveformPtr w, double b_ref = 0.0);

//==============================================================================
// Grids

struct GridAxis {
  std::string name; //!< one of t, x, y, z, rho
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;

  double coordinate(std::size_t i) const {
    return count == 1 ? min : min + (max - min) * double(i) / double(count - 1);
  }
};

struct GridSpec {
  std::vector<GridAxis> axes; //!< 1 to 3 axes, first axis varies slowest
  //! Coordinates held fixed; any of t, x, y, z, rho not on an axis. Missing
  //! coordinates default to 0.
  std::map<std::string, double> fixed;

  //! Throws std::invalid_argument for bad names, duplicates, rho combined with
  //! x or y, or zero counts.
  void validate() const;
  std::size_t size() const;
  //! Row-major multi-index of a flat index.
  std::vector<std::size_t> unflatten(std::size_t flat) const;
  SpacetimePoint point(std::size_t flat) const;
};

struct FieldGrid {
  GridSpec spec;
  std::vector<Complex> values;
  // metadata
  std::optional<PulseParams> params;
  std::string waveform;
  std::string field_kind;
};

//! Thrown by sample_grid when the evaluator fails; names the grid index.
class GridEvaluationError : public NumericError {
public:
  GridEvaluationError(const std::string &what, std::size_t index)
      : NumericError(what), m_index(index) {}
  std::size_t index() const { return m_index; }

private:
  std::size_t m_index;
};

//! Evaluates on every grid point (row-major), in parallel, with output
//! identical to a serial loop.
FieldGrid sample_grid(const GridSpec &spec, const FieldEvaluator &evaluator);

//! CSV: one column per axis, then re, im, abs. 17 significant digits.
void write_grid_csv(const FieldGrid &grid, std::ostream &out);

//! JSON header (axes, fixed coordinates, metadata, binary layout) at
//! header_path; values as little-endian float64 pairs (re, im) at data_path.
void write_grid_binary(const FieldGrid &grid, const std::string &header_path,
                       const std::string &data_path);

//==============================================================================
// Energy

struct EnergyOptions {
  double c = 1.0;
  //! Length scale of the field near the origin (b for the shipped pulses).
  double length_scale = 1.0;
  double cutoff_radius = 1000.0;
  double tol = 1e-6;
};

struct EnergyResult {
  double total = 0.0;     //!< truncated + tail
  double truncated = 0.0; //!< integral over R <= cutoff
  double tail = 0.0;      //!< power-law tail estimate beyond the cutoff
  double decay_exponent = 0.0; //!< p in shell(R) ~ R^-p at the cutoff
  std::size_t evaluations = 0;
};

//! Energy density of the shell of radius R:
//!   R^2 \int (|du/d(ct)|^2 + |grad u|^2) dOmega,
//! derivatives by central differences, axisymmetry assumed.
double energy_shell(const FieldEvaluator &u, double t, double R,
                    const EnergyOptions &opts);

//! int (|du/d(ct)|^2 + |grad u|^2) dV for an axisymmetric field at time t.
//! Throws ToleranceNotReached if the shell integrand is not yet in its
//! power-law regime at the cutoff.
EnergyResult energy_estimate(const FieldEvaluator &u, double t,
                             const EnergyOptions &opts);

EnergyResult energy_estimate(double t, const PulseParams &params, const Waveform &w,
                             double cutoff_radius, double tol);

} // namespace unipulse
