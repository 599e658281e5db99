#include "oracles.hpp"

#include "unipulse/fields.hpp"
#include "unipulse/waveforms.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace unipulse;
using namespace std::complex_literals;

namespace {

std::vector<SpacetimePoint> random_points(int n, unsigned seed, double extent = 5.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-extent, extent);
  std::vector<SpacetimePoint> out;
  for (int i = 0; i < n; ++i)
    out.push_back({u(rng), u(rng), u(rng), u(rng)});
  return out;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST_SUITE("pulse parameters") {
  TEST_CASE("derived b and regularity") {
    const PulseParams p(2.0, 0.75, 1.0);
    CHECK(p.b() == 1.5);
    CHECK(p.regular());
    CHECK_FALSE(PulseParams(1.0, 1.0, 1.0).regular());
  }

  TEST_CASE("validation") {
    CHECK_THROWS_AS(PulseParams(0.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PulseParams(1.0, -1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PulseParams(1.0, 1.0, INFINITY), std::invalid_argument);
  }
}

TEST_SUITE("s_function and phase") {
  TEST_CASE("on axis") {
    CHECK(std::abs(s_function({2.0, 0, 0, 0}, PulseParams(1, 1, 0)) - Complex{2.0, 1.0}) <= 1e-15);
  }

  TEST_CASE("negative radicand") {
    const Complex s = s_function(SpacetimePoint::axisymmetric(0.0, 1.0, 0.0), PulseParams(1, 1, 0));
    CHECK(std::abs(s - Complex{0.0, std::sqrt(2.0)}) <= 1e-15);
  }

  TEST_CASE("generic point against the oracle") {
    const Complex s = s_function(SpacetimePoint::axisymmetric(1.0, 0.5, 0.0), PulseParams(1, 0.3, 0));
    const Complex expected = oracle::to_double(oracle::s_function(1.0, 0.3, 1.0, 0.5));
    CHECK(std::abs(s - expected) <= 2e-16 * std::abs(expected));
  }

  TEST_CASE("theta on axis and at the origin") {
    const PulseParams p(1, 1, 0);
    const Complex th = phase_theta({1.7, 0, 0, 0.4}, p);
    CHECK(std::abs(th.imag()) <= 1e-12);
    CHECK(std::abs(th.real() - 1.3) <= 1e-15);
    CHECK(std::abs(phase_theta({}, p)) <= 1e-16);
  }

  TEST_CASE("theta off axis against the oracle") {
    const Complex th = phase_theta(SpacetimePoint::axisymmetric(1.0, 1.0, 0.5), PulseParams(1, 1, 0));
    const oracle::BigComplex S = oracle::s_function(1.0, 1.0, 1.0, 1.0);
    const Complex expected = oracle::to_double(oracle::sub(S, {oracle::Real(0.5), oracle::Real(1)}));
    CHECK(th.imag() > 0.0);
    CHECK(std::abs(th - expected) <= 1e-15);
  }

  TEST_CASE("branch invariants on random points") {
    const PulseParams p(1.3, 0.6, 0.2);
    for (const auto &q : random_points(2000, 1, 10.0)) {
      CHECK(s_function(q, p).imag() >= p.b() - 1e-12);
      CHECK(phase_theta(q, p).imag() >= -1e-12);
    }
  }
}

TEST_SUITE("simple pulse") {
  TEST_CASE("origin and axis values") {
    const PulseParams p(1, 1, 0);
    CHECK(std::abs(eval_simple_pulse({}, p) - (-1.0)) <= 1e-15);
    CHECK(std::abs(eval_simple_pulse({1.0, 0, 0, 0}, p) - (-0.5i)) <= 1e-15);
  }

  TEST_CASE("generic point against the oracle") {
    const PulseParams p(1.0, 0.8, 0.2);
    const Complex u = eval_simple_pulse(SpacetimePoint::axisymmetric(0.7, 1.2, -0.4), p);
    const Complex expected = oracle::simple_pulse(1.0, 0.8, 0.2, 0.7, 1.2, -0.4);
    CHECK(rel(u, expected) <= 1e-14);
  }

  TEST_CASE("singular point of a non-regular pulse") {
    CHECK_THROWS_AS(eval_simple_pulse({}, PulseParams(1, 1, 1)), SingularPoint);
  }

  TEST_CASE("axisymmetry") {
    const PulseParams p(1, 1, 0.3);
    for (const auto &q : random_points(200, 2)) {
      const Complex a = eval_simple_pulse(q, p);
      const Complex b = eval_simple_pulse(SpacetimePoint::axisymmetric(q.t, q.rho(), q.z), p);
      CHECK(rel(a, b) <= 1e-15);
    }
  }
}

TEST_SUITE("quasi-spherical wave") {
  TEST_CASE("rational waveform reproduces the simple pulse") {
    for (double zeta : {0.0, 0.5}) {
      const PulseParams p(1, 1, zeta);
      const RationalWaveform w(p.b() - zeta);
      double worst = 0.0;
      for (const auto &q : random_points(1000, 17))
        worst = std::max(worst, rel(eval_quasi_spherical(q, p, w), eval_simple_pulse(q, p)));
      CHECK(worst <= 1e-13);
    }
  }

  TEST_CASE("lekner with K = 0 is the rational case") {
    const PulseParams p(1, 1, 0);
    for (const auto &q : random_points(100, 4))
      CHECK(eval_quasi_spherical(q, p, LeknerWaveform(1.0, 0.0)) ==
            eval_quasi_spherical(q, p, RationalWaveform(1.0)));
  }

  TEST_CASE("lekner at the origin") {
    // theta = 0 and S = i there
    const Complex u = eval_quasi_spherical({}, PulseParams(1, 1, 0), LeknerWaveform(1.0, 2.0));
    CHECK(std::abs(u - (-1.0)) <= 1e-15);
  }

  TEST_CASE("lekner off axis against the oracle") {
    const PulseParams p(1, 1, 0);
    const auto q = SpacetimePoint::axisymmetric(0.4, 0.9, -0.3);
    const oracle::BigComplex S = oracle::s_function(1.0, 1.0, 0.4, 0.9);
    const Complex th = oracle::to_double(oracle::sub(S, {oracle::Real(-0.3), oracle::Real(1)}));
    const Complex expected = std::exp(2i * th) / ((th + 1i) * oracle::to_double(S));
    CHECK(rel(eval_quasi_spherical(q, p, LeknerWaveform(1.0, 2.0)), expected) <= 1e-14);
  }
}

TEST_SUITE("spherical reference") {
  TEST_CASE("values") {
    const RationalWaveform w(1.0);
    CHECK(std::abs(eval_spherical_reference({0, 1, 0, 0}, 1.0, w) - Complex{0.5, -0.5}) <= 1e-16);
    CHECK(std::abs(eval_spherical_reference({2, 0, 0, 2}, 1.0, w, 0.5) - w.eval(0.5i) / 2.0) <=
          1e-16);
  }

  TEST_CASE("singular at the origin") {
    CHECK_THROWS_AS(eval_spherical_reference({}, 1.0, RationalWaveform(1.0)), SingularPoint);
    CHECK_THROWS_AS(make_spherical_reference(1.0, std::make_shared<RationalWaveform>(1.0), -1.0),
                    std::invalid_argument);
  }
}

TEST_SUITE("grids") {
  const PulseParams kParams(1, 1, 0);

  TEST_CASE("single point") {
    GridSpec spec;
    spec.axes = {{"z", 0.5, 0.5, 1}};
    spec.fixed = {{"t", 0.25}, {"rho", 0.1}};
    int calls = 0;
    const auto g = sample_grid(spec, [&](const SpacetimePoint &p) {
      ++calls;
      return eval_simple_pulse(p, kParams);
    });
    REQUIRE(g.values.size() == 1);
    CHECK(calls == 1);
    CHECK(g.values[0] == eval_simple_pulse(SpacetimePoint::axisymmetric(0.25, 0.1, 0.5), kParams));
  }

  TEST_CASE("2x2 grid matches direct calls in row-major order") {
    GridSpec spec;
    spec.axes = {{"rho", 0.0, 1.0, 2}, {"z", -1.0, 1.0, 2}};
    spec.fixed = {{"t", 0.3}};
    const auto g = sample_grid(spec, make_simple_pulse(kParams));
    const std::vector<std::pair<double, double>> order = {{0, -1}, {0, 1}, {1, -1}, {1, 1}};
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(g.values[i] == eval_simple_pulse(
                               SpacetimePoint::axisymmetric(0.3, order[i].first, order[i].second),
                               kParams));
  }

  TEST_CASE("maximum of the focused snapshot is at the origin") {
    GridSpec spec;
    spec.axes = {{"rho", 0.0, 5.0, 101}, {"z", -5.0, 5.0, 101}};
    const auto g = sample_grid(spec, make_simple_pulse(kParams));
    std::size_t best = 0;
    for (std::size_t i = 1; i < g.values.size(); ++i)
      if (std::abs(g.values[i]) > std::abs(g.values[best]))
        best = i;
    const auto p = spec.point(best);
    CHECK(p.rho() == 0.0);
    CHECK(p.z == 0.0);
  }

  TEST_CASE("result does not depend on the thread count") {
    GridSpec spec;
    spec.axes = {{"t", -1.0, 1.0, 7}, {"x", -2.0, 2.0, 9}, {"z", -1.0, 3.0, 5}};
    spec.fixed = {{"y", 0.2}};
    const auto u = make_quasi_spherical(kParams, std::make_shared<LeknerWaveform>(1.0, 2.0));
    ::setenv("UNIPULSE_THREADS", "1", 1);
    const auto serial = sample_grid(spec, u);
    ::setenv("UNIPULSE_THREADS", "4", 1);
    const auto parallel = sample_grid(spec, u);
    ::unsetenv("UNIPULSE_THREADS");
    CHECK(serial.values == parallel.values);
  }

  TEST_CASE("evaluation failures name the grid index") {
    GridSpec spec;
    spec.axes = {{"z", -1.0, 1.0, 3}};
    const auto u = make_spherical_reference(1.0, std::make_shared<RationalWaveform>(1.0));
    try {
      (void)sample_grid(spec, u);
      FAIL("expected GridEvaluationError");
    } catch (const GridEvaluationError &e) {
      CHECK(e.index() == 1);
      CHECK(std::string(e.what()).find("grid index 1") != std::string::npos);
    }
  }

  TEST_CASE("grid layout validation") {
    GridSpec spec;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.axes = {{"w", 0, 1, 2}};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.axes = {{"rho", 0, 1, 2}, {"x", 0, 1, 2}};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.axes = {{"z", 0, 1, 0}};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.axes = {{"z", 0, 1, 2}};
    spec.fixed = {{"z", 1.0}};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  }

  TEST_CASE("csv layout") {
    GridSpec spec;
    spec.axes = {{"rho", 0.0, 1.0, 3}, {"z", 0.0, 1.0, 2}};
    auto g = sample_grid(spec, make_simple_pulse(kParams));
    std::ostringstream out;
    write_grid_csv(g, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "rho,z,re,im,abs");
    int rows = 0;
    while (std::getline(in, line))
      ++rows;
    CHECK(rows == 6);
    // first data row is the origin, where u = -1
    std::istringstream rows_in(out.str());
    std::getline(rows_in, line);
    std::getline(rows_in, line);
    double rho = 1, z = 1, re = 0, im = 1, abs = 0;
    char sep;
    std::istringstream fields(line);
    fields >> rho >> sep >> z >> sep >> re >> sep >> im >> sep >> abs;
    CHECK(rho == 0.0);
    CHECK(z == 0.0);
    CHECK(re == -1.0);
    CHECK(std::abs(im) <= 1e-16);
    CHECK(abs == 1.0);
  }

  TEST_CASE("binary layout round trips") {
    GridSpec spec;
    spec.axes = {{"x", -1.0, 1.0, 4}, {"z", 0.0, 1.0, 3}};
    spec.fixed = {{"t", 0.5}};
    auto g = sample_grid(spec, make_simple_pulse(kParams));
    g.params = kParams;
    g.field_kind = "simple_pulse";
    const auto dir = std::filesystem::temp_directory_path() / "unipulse_test_fields";
    std::filesystem::create_directories(dir);
    const auto header = (dir / "grid.json").string();
    const auto data = (dir / "grid.bin").string();
    write_grid_binary(g, header, data);

    std::ifstream hin(header);
    const auto h = nlohmann::json::parse(hin);
    CHECK(h.at("data").at("count") == 12);
    CHECK(h.at("axes").size() == 2);
    CHECK(h.at("fixed").at("t") == 0.5);
    CHECK(h.at("pulse").at("tau") == 1.0);

    std::ifstream din(data, std::ios::binary);
    std::vector<double> raw(24);
    din.read(reinterpret_cast<char *>(raw.data()), 24 * sizeof(double));
    CHECK(din.gcount() == 24 * sizeof(double));
    for (std::size_t i = 0; i < 12; ++i)
      CHECK(Complex{raw[2 * i], raw[2 * i + 1]} == g.values[i]);
    std::filesystem::remove_all(dir);
  }
}

TEST_SUITE("energy") {
  TEST_CASE("conserved between t = 0 and t = 1") {
    const PulseParams p(1, 1, 0);
    const RationalWaveform w(1.0);
    const auto e0 = energy_estimate(0.0, p, w, 1000.0, 1e-6);
    const auto e1 = energy_estimate(1.0, p, w, 1000.0, 1e-6);
    CHECK(std::isfinite(e0.total));
    CHECK(e0.total > 0.0);
    CHECK(std::abs(e1.total - e0.total) <= 1e-3 * e0.total);
    CHECK(e0.total == doctest::Approx(e0.truncated + e0.tail));
  }

  TEST_CASE("shell integrand decays at least as 1/R^2") {
    const auto e = energy_estimate(0.0, PulseParams(1, 1, 0), RationalWaveform(1.0), 1000.0, 1e-6);
    CHECK(e.decay_exponent >= 2.0 - 0.01);
  }

  TEST_CASE("quadratic in the amplitude") {
    const PulseParams p(1, 1, 0.3);
    const auto u = make_simple_pulse(p);
    const FieldEvaluator u2 = [&](const SpacetimePoint &q) { return 2.0 * u(q); };
    EnergyOptions opts;
    opts.length_scale = p.b();
    const double e1 = energy_estimate(u, 0.0, opts).total;
    const double e2 = energy_estimate(u2, 0.0, opts).total;
    CHECK(e2 == doctest::Approx(4.0 * e1).epsilon(1e-9));
  }

  TEST_CASE("non-decaying shells are rejected") {
    const FieldEvaluator u = [](const SpacetimePoint &q) {
      return std::exp(Complex{0.0, q.R()}) / (1.0 + q.R());
    };
    CHECK_THROWS_AS(energy_estimate(u, 0.0, EnergyOptions{}), ToleranceNotReached);
  }

  TEST_CASE("non-regular pulses are rejected") {
    CHECK_THROWS_AS(energy_estimate(0.0, PulseParams(1, 1, 1.5), RationalWaveform(1.0), 1000.0, 1e-6),
                    std::invalid_argument);
  }
}
