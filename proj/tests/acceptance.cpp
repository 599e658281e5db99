// Acceptance run: one PASS/FAIL line per criterion, with its runtime budget.
// Exit status is the number of failed criteria.

#include "unipulse/farfield.hpp"
#include "unipulse/pde_check.hpp"
#include "unipulse/synthesis.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>

using namespace unipulse;
using namespace std::complex_literals;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failed = 0;

void criterion(int id, const std::string &name, double budget_s,
               const std::function<Outcome()> &body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception &e) {
    o = {false, fmt::format("exception: {}", e.what())};
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = elapsed < budget_s;
  const bool pass = o.pass && in_time;
  if (!pass)
    ++g_failed;
  fmt::print("[{}] {}. {}: {}; {:.2f} s (budget {} s{})\n", pass ? "PASS" : "FAIL", id, name,
             o.detail, elapsed, budget_s, in_time ? "" : ", exceeded");
  std::fflush(stdout);
}

const PulseParams kUnit(1, 1, 0);

struct Pulse {
  std::string name;
  PulseParams params;
  WaveformPtr waveform;
  FieldEvaluator u;
};

// The two shipped pulses: the simple pulse (rational waveform) and the
// Lekner-type quasi-spherical pulse.
std::vector<Pulse> shipped_pulses(const PulseParams &p = kUnit) {
  auto rational = std::make_shared<RationalWaveform>(p.b() - p.zeta());
  auto lekner = std::make_shared<LeknerWaveform>(1.0, 2.0);
  return {{"simple pulse", p, rational, make_simple_pulse(p)},
          {"lekner(a=1,K=2)", p, lekner, make_quasi_spherical(p, lekner)}};
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

} // namespace

int main() {
  std::mt19937_64 rng(20240601);

  criterion(1, "closed-form identity", 1.0, [&] {
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    double worst = 0.0;
    for (double zeta : {0.0, 0.5}) {
      const PulseParams p(1, 1, zeta);
      const RationalWaveform w(p.b() - zeta);
      for (int i = 0; i < 1000; ++i) {
        const SpacetimePoint q{u(rng), u(rng), u(rng), u(rng)};
        worst = std::max(worst, rel(eval_quasi_spherical(q, p, w), eval_simple_pulse(q, p)));
      }
    }
    return Outcome{worst <= 1e-13, fmt::format("max relative error {:.2e} (limit 1e-13)", worst)};
  });

  criterion(2, "branch invariants", 5.0, [&] {
    std::uniform_real_distribution<double> t(-10.0, 10.0), rho(0.0, 10.0), z(-10.0, 10.0);
    double worst_s = INFINITY, worst_theta = INFINITY;
    for (int i = 0; i < 100000; ++i) {
      const auto q = SpacetimePoint::axisymmetric(t(rng), rho(rng), z(rng));
      worst_s = std::min(worst_s, s_function(q, kUnit).imag() - kUnit.b());
      worst_theta = std::min(worst_theta, phase_theta(q, kUnit).imag());
    }
    const bool ok = worst_s >= -1e-12 && worst_theta >= -1e-12;
    return Outcome{ok, fmt::format("min(Im S - c tau) = {:.2e}, min Im theta = {:.2e}", worst_s,
                                   worst_theta)};
  });

  criterion(3, "wave-equation residual order", 10.0, [&] {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const std::vector<double> h = {4e-3 * kUnit.b(), 2e-3 * kUnit.b(), 1e-3 * kUnit.b()};
    double lo = INFINITY, hi = -INFINITY;
    int noisy = 0;
    for (const auto &pulse : shipped_pulses())
      for (int i = 0; i < 20; ++i) {
        const SpacetimePoint q{u(rng), u(rng), u(rng), u(rng)};
        const auto rep = convergence_order(pulse.u, q, h, kUnit.c());
        lo = std::min(lo, rep.order);
        hi = std::max(hi, rep.order);
        noisy += rep.below_noise_floor;
      }
    return Outcome{lo >= 1.8 && hi <= 2.2,
                   fmt::format("orders in [{:.4f}, {:.4f}] (limit [1.8, 2.2]), {} near rounding floor",
                               lo, hi, noisy)};
  });

  criterion(4, "far-field agreement", 10.0, [&] {
    const std::vector<double> sched = {1e2, 1e3, 1e4};
    double worst = 0.0;
    for (const auto &pulse : shipped_pulses())
      for (double chi : {0.0, kPi / 6, kPi / 3})
        for (double s : {-1.0, 0.0, 1.0}) {
          const Direction n{chi, 0.0};
          const Complex num = farfield_numeric(pulse.u, kUnit.c(), s, n, sched).value;
          const Complex exact = farfield_analytic(s, n, kUnit, *pulse.waveform);
          worst = std::max(worst, rel(num, exact));
        }
    return Outcome{worst <= 1e-6, fmt::format("max relative error {:.2e} (limit 1e-6)", worst)};
  });

  criterion(5, "unidirectionality certificate", 10.0, [&] {
    const auto s = default_s_samples(kUnit);
    const auto dirs = default_backward_directions();
    const auto sched = default_unidirectional_schedule(kUnit);
    bool ok = true;
    std::string detail;
    for (const auto &pulse : shipped_pulses()) {
      const auto rep = check_unidirectional(pulse.u, kUnit.c(), s, dirs, 1e-6, sched);
      ok &= rep.verdict == Verdict::pass;
      detail += fmt::format("{} {} (max |F| {:.2e}), ", pulse.name, to_string(rep.verdict),
                            rep.entries[rep.worst].max_abs_F);
    }
    const auto sph = make_spherical_reference(kUnit.c(), std::make_shared<RationalWaveform>(1.0), 1.0);
    const auto rep = check_unidirectional(sph, kUnit.c(), s, dirs, 1e-6, sched);
    ok &= rep.verdict == Verdict::fail;
    detail += fmt::format("spherical reference {} (max |F| {:.2e})", to_string(rep.verdict),
                          rep.entries[rep.worst].max_abs_F);
    return Outcome{ok, detail};
  });

  criterion(6, "route agreement", 120.0, [&] {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double tol = 1e-8;
    double worst_h = 0.0, worst_fb = 0.0, worst_w = 0.0;
    for (const auto &pulse : shipped_pulses()) {
      const auto A = make_spectral_weight(pulse.params, pulse.waveform);
      for (int i = 0; i < 5; ++i) {
        const SpacetimePoint q{u(rng), u(rng), u(rng), u(rng)};
        const Complex exact = pulse.u(q);
        worst_h = std::max(worst_h,
                           std::abs(reconstruct_hemisphere(pulse.params, *pulse.waveform, q, tol).value - exact));
        worst_fb = std::max(worst_fb, std::abs(reconstruct_fourier_bessel(pulse.params, *pulse.waveform, q, tol).value - exact));
        worst_w = std::max(worst_w, std::abs(reconstruct_from_weight(A, q, tol).value - exact));
      }
    }
    const bool ok = worst_h <= 1e-5 && worst_fb <= 1e-5 && worst_w <= 1e-5;
    return Outcome{ok, fmt::format("max |error|: hemisphere {:.2e}, Fourier-Bessel {:.2e}, "
                                   "spectral weight {:.2e} (limit 1e-5)",
                                   worst_h, worst_fb, worst_w)};
  });

  criterion(7, "Monte-Carlo Cartesian check", 60.0, [&] {
    const std::vector<SpacetimePoint> points = {SpacetimePoint::axisymmetric(0.0, 0.5, 0.0),
                                                {0.3, 0.2, -0.1, 0.4}};
    const RationalWaveform w(1.0);
    bool ok = true;
    std::string detail;
    for (const auto &q : points) {
      const auto a = reconstruct_cartesian_mc(kUnit, w, q, 1'000'000, 7);
      const auto b = reconstruct_cartesian_mc(kUnit, w, q, 1'000'000, 7);
      const double z = std::abs(a.value - eval_simple_pulse(q, kUnit)) / a.stderr_;
      const bool same = a.value == b.value && a.stderr_ == b.stderr_;
      ok &= z <= 3.0 && same;
      detail += fmt::format("{:.2f} sigma{}; ", z, same ? "" : " (not reproducible)");
    }
    detail += "limit 3 sigma, reruns identical";
    return Outcome{ok, detail};
  });

  criterion(8, "spectrum round trip", 5.0, [&] {
    std::uniform_real_distribution<double> re(-10.0, 10.0), im(0.1, 10.0);
    double worst = 0.0;
    for (const auto &pulse : shipped_pulses()) {
      const Waveform &w = *pulse.waveform;
      for (int i = 0; i < 100;) {
        const Complex theta{re(rng), im(rng)};
        if (std::abs(theta) > 10.0)
          continue;
        ++i;
        QuadratureOptions opts;
        opts.tol = 1e-11;
        opts.scale = 1e-3;
        const auto g = [&](double k) { return w.spectrum(k) * std::exp(1i * k * theta); };
        const Complex back =
            integrate_semi_infinite(g, w.decay_rate() + theta.imag(), opts, w.spectral_onset()).value;
        worst = std::max(worst, std::abs(back - w.eval(theta)));
      }
    }
    return Outcome{worst <= 1e-8, fmt::format("max |error| {:.2e} (limit 1e-8)", worst)};
  });

  criterion(9, "energy sanity", 120.0, [&] {
    const RationalWaveform w(kUnit.b() - kUnit.zeta());
    const auto e0 = energy_estimate(0.0, kUnit, w, 1000.0 * kUnit.b(), 1e-6);
    const auto e1 = energy_estimate(1.0, kUnit, w, 1000.0 * kUnit.b(), 1e-6);
    const double drift = std::abs(e1.total - e0.total) / e0.total;
    const bool ok = std::isfinite(e0.total) && std::isfinite(e1.total) && drift <= 1e-3;
    return Outcome{ok, fmt::format("E(0) = {:.10g}, E(1) = {:.10g}, relative drift {:.2e} (limit 1e-3)",
                                   e0.total, e1.total, drift)};
  });

  fmt::print("{} of 9 criteria passed\n", 9 - g_failed);
  return g_failed;
}
