#include "unipulse/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <queue>

namespace unipulse {

namespace {

// 10-point Gauss / 21-point Kronrod abscissae and weights (QUADPACK dqk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd Kronrod abscissae kXgk[1], kXgk[3], ..., kXgk[9].
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kMinTol = 50.0 * std::numeric_limits<double>::epsilon();

struct Panel {
  double a, b;
  QuadratureResult r;
  bool operator<(const Panel &o) const { return r.error_estimate < o.r.error_estimate; }
};

double target(const QuadratureOptions &o, Complex value) {
  return o.tol * std::max(o.scale, std::abs(value));
}

} // namespace

QuadratureResult gauss_kronrod_21(const ComplexIntegrand &f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Complex fc = f(centre);
  Complex resk = fc * kWgk[10];
  Complex resg{0.0, 0.0};
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const Complex sum = f(centre - dx) + f(centre + dx);
    resk += kWgk[j] * sum;
    if (j % 2 == 1)
      resg += kWg[j / 2] * sum;
  }
  QuadratureResult r;
  r.value = resk * half;
  r.error_estimate = std::abs((resk - resg) * half);
  r.evaluations = 21;
  return r;
}

QuadratureResult integrate_adaptive(const ComplexIntegrand &f, double a,
                                    double b, const QuadratureOptions &opts) {
  if (!(a < b) || !(opts.tol > 0.0))
    throw std::invalid_argument(
        fmt::format("integrate_adaptive: need a < b and tol > 0 (a={}, b={}, tol={})",
                    a, b, opts.tol));

  QuadratureResult total = gauss_kronrod_21(f, a, b);
  if (!std::isfinite(total.value.real()) || !std::isfinite(total.value.imag()))
    throw NumericError("integrate_adaptive: integrand is not finite");
  if (opts.tol < kMinTol)
    throw ToleranceNotReached(
        fmt::format("requested tolerance {:.3g} is below the rounding limit {:.3g}",
                    opts.tol, kMinTol),
        total);
  if (total.error_estimate <= target(opts, total.value))
    return total;

  std::priority_queue<Panel> panels;
  panels.push({a, b, total});
  Complex sum = total.value;
  double err = total.error_estimate;
  std::size_t evals = total.evaluations;

  while (err > target(opts, sum)) {
    if (evals + 42 > opts.max_evaluations)
      throw ToleranceNotReached(
          fmt::format("integrate_adaptive: budget of {} evaluations exhausted on "
                      "[{}, {}], error estimate {:.3g}",
                      opts.max_evaluations, a, b, err),
          {sum, err, evals});
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b))
      throw ToleranceNotReached(
          fmt::format("integrate_adaptive: interval collapsed near x={}", mid),
          {sum, err, evals});
    const QuadratureResult left = gauss_kronrod_21(f, worst.a, mid);
    const QuadratureResult right = gauss_kronrod_21(f, mid, worst.b);
    evals += 42;
    sum += left.value + right.value - worst.r.value;
    err += left.error_estimate + right.error_estimate - worst.r.error_estimate;
    panels.push({worst.a, mid, left});
    panels.push({mid, worst.b, right});

    // Recompute the running sums occasionally to stop drift from the
    // incremental updates.
    if (panels.size() % 64 == 0) {
      auto copy = panels;
      sum = {0.0, 0.0};
      err = 0.0;
      while (!copy.empty()) {
        sum += copy.top().r.value;
        err += copy.top().r.error_estimate;
        copy.pop();
      }
    }
  }
  if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag()))
    throw NumericError("integrate_adaptive: integrand is not finite");
  return {sum, err, evals};
}

QuadratureResult integrate_semi_infinite(const ComplexIntegrand &f,
                                         double decay_hint,
                                         const QuadratureOptions &opts,
                                         double start) {
  if (!(decay_hint > 0.0))
    throw std::invalid_argument("integrate_semi_infinite: decay_hint must be > 0");

  QuadratureResult total;
  double lo = start;
  double width = 1.0 / decay_hint;
  int quiet = 0;
  for (int panel = 0; panel < 200; ++panel) {
    const double hi = lo + width;
    QuadratureOptions local = opts;
    local.max_evaluations = opts.max_evaluations - std::min(opts.max_evaluations, total.evaluations);
    if (local.max_evaluations < 21)
      throw ToleranceNotReached("integrate_semi_infinite: evaluation budget exhausted", total);
    QuadratureResult r;
    try {
      // Each panel is measured against the running total.
      local.scale = std::max(opts.scale, std::abs(total.value));
      local.tol = opts.tol / 4.0;
      r = integrate_adaptive(f, lo, hi, local);
    } catch (const ToleranceNotReached &e) {
      QuadratureResult best = total;
      best.value += e.best().value;
      best.error_estimate += e.best().error_estimate;
      best.evaluations += e.best().evaluations;
      throw ToleranceNotReached(e.what(), best);
    }
    total.value += r.value;
    total.error_estimate += r.error_estimate;
    total.evaluations += r.evaluations;

    const double tail_scale = std::abs(r.value) + r.error_estimate;
    if (tail_scale < 0.1 * opts.tol * std::max(opts.scale, std::abs(total.value)) &&
        (hi - start) * decay_hint > 4.0) {
      if (++quiet == 2)
        return total;
    } else {
      quiet = 0;
    }
    lo = hi;
    if ((hi - start) * decay_hint >= 8.0)
      width *= 2.0;
  }
  throw ToleranceNotReached("integrate_semi_infinite: tail did not decay", total);
}

} // namespace unipulse
