#pragma once

#include "unipulse/fields.hpp"

#include <span>
#include <vector>

namespace unipulse {

//! Second-order finite-difference residual of
//!   u_xx + u_yy + u_zz - u_tt / c^2
//! at one point. All four axes use the same length step h (time step h / c).
struct ResidualReport {
  SpacetimePoint point;
  double h = 0.0;
  Complex residual;
  //! |u_xx| + |u_yy| + |u_zz| + |u_tt|/c^2 from the same differences; the size
  //! of the terms that cancel in a true solution.
  double field_scale = 0.0;
  //! Rounding level of the residual: eps * (sum of |stencil values|) / h^2.
  double noise_floor = 0.0;

  double normalized() const { return std::abs(residual) / field_scale; }
};

ResidualReport wave_residual(const FieldEvaluator &u, const SpacetimePoint &p, double h,
                             double c);

struct ConvergenceReport {
  //! Least-squares slope of log|residual| against log h.
  double order = 0.0;
  std::vector<ResidualReport> residuals;
  //! Some residual is within 10x of its rounding level; the slope is then
  //! not meaningful.
  bool below_noise_floor = false;
};

//! h_list: geometric with ratio 2 (either order), at least 3 entries.
ConvergenceReport convergence_order(const FieldEvaluator &u, const SpacetimePoint &p,
                                    std::span<const double> h_list, double c);

} // namespace unipulse
