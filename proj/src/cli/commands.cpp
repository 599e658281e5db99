#include "unipulse/cli.hpp"
#include "unipulse/farfield.hpp"
#include "unipulse/parallel.hpp"
#include "unipulse/pde_check.hpp"
#include "unipulse/synthesis.hpp"

#include <fmt/format.h>

#include <fstream>
#include <functional>
#include <map>
#include <ostream>

namespace unipulse::cli {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

ordered_json to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

ordered_json to_json(const SpacetimePoint &p) {
  return {{"t", p.t}, {"x", p.x}, {"y", p.y}, {"z", p.z}};
}

std::vector<double> number_list(const json &block, const std::string &key,
                                const std::string &path, std::vector<double> fallback) {
  if (!block.contains(key))
    return fallback;
  const json &v = block.at(key);
  if (!v.is_array())
    throw ConfigError(fmt::format("{}/{}: expected a list of numbers", path, key));
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number())
      throw ConfigError(fmt::format("{}/{}/{}: expected a number", path, key, i));
    out.push_back(v[i].get<double>());
  }
  return out;
}

double number(const json &block, const std::string &key, const std::string &path,
              double fallback) {
  if (!block.contains(key))
    return fallback;
  if (!block.at(key).is_number())
    throw ConfigError(fmt::format("{}/{}: expected a number", path, key));
  return block.at(key).get<double>();
}

std::vector<SpacetimePoint> point_list(const json &block, const std::string &path) {
  if (!block.contains("points") || !block.at("points").is_array())
    throw ConfigError(fmt::format("{}/points: expected a list of points", path));
  const json &pts = block.at("points");
  if (pts.empty())
    throw ConfigError(fmt::format("{}/points: list is empty", path));
  std::vector<SpacetimePoint> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string where = fmt::format("{}/points/{}", path, i);
    const json &p = pts[i];
    if (!p.is_object())
      throw ConfigError(where + ": expected an object");
    for (const auto &[key, value] : p.items()) {
      if (key != "t" && key != "x" && key != "y" && key != "z" && key != "rho")
        throw ConfigError(fmt::format("{}/{}: unknown key", where, key));
      if (!value.is_number())
        throw ConfigError(fmt::format("{}/{}: expected a number", where, key));
    }
    if (p.contains("rho") && (p.contains("x") || p.contains("y")))
      throw ConfigError(where + ": rho cannot be combined with x or y");
    SpacetimePoint sp{p.value("t", 0.0), p.value("x", 0.0), p.value("y", 0.0), p.value("z", 0.0)};
    if (p.contains("rho")) {
      sp.x = p.at("rho").get<double>();
      if (sp.x < 0.0)
        throw ConfigError(where + "/rho: must be >= 0");
    }
    out.push_back(sp);
  }
  return out;
}

GridAxis axis_spec(const json &v, const std::string &where, const std::string &name) {
  if (!v.is_object())
    throw ConfigError(where + ": expected {min, max, count}");
  for (const auto &[key, value] : v.items())
    if (key != "min" && key != "max" && key != "count" && key != "name")
      throw ConfigError(fmt::format("{}/{}: unknown key", where, key));
  GridAxis ax;
  ax.name = v.contains("name") ? v.at("name").get<std::string>() : name;
  ax.min = number(v, "min", where, 0.0);
  ax.max = number(v, "max", where, ax.min);
  if (!v.contains("count") || !v.at("count").is_number_integer() || v.at("count").get<long>() < 1)
    throw ConfigError(where + "/count: expected an integer >= 1");
  ax.count = v.at("count").get<std::size_t>();
  return ax;
}

// Writes to the configured output file, or to `fallback`.
class Sink {
public:
  Sink(const std::optional<std::string> &path, std::ostream &fallback) : m_out(&fallback) {
    if (path) {
      m_file.open(*path);
      if (!m_file)
        throw ConfigError(fmt::format("cannot open output '{}'", *path));
      m_out = &m_file;
    }
  }
  std::ostream &stream() { return *m_out; }

private:
  std::ofstream m_file;
  std::ostream *m_out;
};

struct Context {
  RunConfig cfg;
  RunOptions opts;
  std::ostream &out;
  std::ostream &err;

  std::optional<std::string> output() const { return opts.out ? opts.out : cfg.output; }
};

//------------------------------------------------------------------------------

int cmd_sample(Context &ctx) {
  const json &g = ctx.cfg.block;
  GridSpec spec;
  if (!g.contains("axes") || !g.at("axes").is_array())
    throw ConfigError("/grid/axes: expected a list of axes");
  for (std::size_t i = 0; i < g.at("axes").size(); ++i) {
    const std::string where = fmt::format("/grid/axes/{}", i);
    if (!g.at("axes")[i].contains("name"))
      throw ConfigError(where + "/name: missing");
    spec.axes.push_back(axis_spec(g.at("axes")[i], where, ""));
  }
  if (g.contains("fixed")) {
    if (!g.at("fixed").is_object())
      throw ConfigError("/grid/fixed: expected an object");
    for (const auto &[key, value] : g.at("fixed").items()) {
      if (!value.is_number())
        throw ConfigError(fmt::format("/grid/fixed/{}: expected a number", key));
      spec.fixed[key] = value.get<double>();
    }
  }
  const std::string format = g.value("format", std::string("csv"));
  if (format != "csv" && format != "binary")
    throw ConfigError("/grid/format: expected csv or binary");
  try {
    spec.validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(fmt::format("/grid: {}", e.what()));
  }

  FieldGrid grid = sample_grid(spec, make_evaluator(ctx.cfg));
  grid.params = ctx.cfg.pulse;
  grid.waveform = ctx.cfg.waveform_descriptor;
  grid.field_kind = to_string(ctx.cfg.field);

  if (format == "binary") {
    const auto path = ctx.output();
    if (!path)
      throw ConfigError("/grid/format: binary output needs --out or /output");
    write_grid_binary(grid, *path, *path + ".bin");
  } else {
    Sink sink(ctx.output(), ctx.out);
    write_grid_csv(grid, sink.stream());
  }
  return ok;
}

int cmd_compare(Context &ctx) {
  const json &blk = ctx.cfg.block;
  if (ctx.cfg.field == FieldKind::spherical_reference)
    throw ConfigError("/field: compare needs a quasi-spherical field");
  const auto points = point_list(blk, "/compare");
  const double tol = number(blk, "tol", "/compare", 1e-8);
  const double bound = number(blk, "bound", "/compare", 1e-5);
  const double mc_sigmas = number(blk, "mc_sigmas", "/compare", 4.0);
  const double mc_samples = number(blk, "mc_samples", "/compare", 0.0);
  if (!(tol > 0.0))
    throw ConfigError("/compare/tol: must be > 0");
  if (mc_samples != 0.0 && mc_samples < 1e4)
    throw ConfigError("/compare/mc_samples: must be 0 or >= 10000");
  std::uint64_t seed = static_cast<std::uint64_t>(number(blk, "seed", "/compare", 1.0));
  if (ctx.opts.seed)
    seed = *ctx.opts.seed;

  const auto &params = ctx.cfg.pulse;
  const auto &w = *ctx.cfg.waveform;
  const FieldEvaluator closed = make_evaluator(ctx.cfg);
  const SpectralWeight weight = make_spectral_weight(params, ctx.cfg.waveform);

  struct Row {
    Complex closed, hemi, fb, fw;
    McEstimate mc;
    double max_discrepancy = 0.0;
    bool mc_ok = true;
  };
  std::vector<Row> rows(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    Row &r = rows[i];
    r.closed = closed(points[i]);
    r.hemi = reconstruct_hemisphere(params, w, points[i], tol).value;
    r.fb = reconstruct_fourier_bessel(params, w, points[i], tol).value;
    r.fw = reconstruct_from_weight(weight, points[i], tol).value;
    r.max_discrepancy = std::max({std::abs(r.hemi - r.closed), std::abs(r.fb - r.closed),
                                  std::abs(r.fw - r.closed)});
    if (mc_samples > 0.0) {
      r.mc = reconstruct_cartesian_mc(params, w, points[i],
                                      static_cast<std::size_t>(mc_samples), seed);
      r.mc_ok = std::abs(r.mc.value - r.closed) <= mc_sigmas * r.mc.stderr_;
    }
  });

  bool all_ok = true;
  ordered_json doc;
  doc["waveform"] = ctx.cfg.waveform_descriptor;
  doc["field"] = to_string(ctx.cfg.field);
  doc["tol"] = tol;
  doc["bound"] = bound;
  auto &out_rows = doc["rows"] = ordered_json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row &r = rows[i];
    ordered_json row;
    row["point"] = to_json(points[i]);
    row["closed_form"] = to_json(r.closed);
    row["hemisphere"] = to_json(r.hemi);
    row["fourier_bessel"] = to_json(r.fb);
    row["spectral_weight"] = to_json(r.fw);
    if (mc_samples > 0.0) {
      row["mc_estimate"] = to_json(r.mc.value);
      row["mc_stderr"] = r.mc.stderr_;
    } else {
      row["mc_estimate"] = nullptr;
      row["mc_stderr"] = nullptr;
    }
    row["max_discrepancy"] = r.max_discrepancy;
    const bool ok_row = r.max_discrepancy <= bound && r.mc_ok;
    row["within_bounds"] = ok_row;
    all_ok &= ok_row;
    out_rows.push_back(row);
  }
  Sink sink(ctx.output(), ctx.out);
  sink.stream() << doc.dump(2) << '\n';
  if (!all_ok) {
    ctx.err << fmt::format("compare: route disagreement above bound {} (mc: {} sigma)\n", bound,
                           mc_sigmas);
    return check_failed;
  }
  return ok;
}

std::vector<Direction> direction_list(const json &blk, const std::string &path,
                                      std::vector<Direction> fallback) {
  if (!blk.contains("directions"))
    return fallback;
  const json &d = blk.at("directions");
  if (!d.is_array() || d.empty())
    throw ConfigError(path + "/directions: expected a non-empty list of {chi, phi}");
  std::vector<Direction> out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const std::string where = fmt::format("{}/directions/{}", path, i);
    if (!d[i].is_object())
      throw ConfigError(where + ": expected {chi, phi}");
    for (const auto &[key, value] : d[i].items())
      if (key != "chi" && key != "phi")
        throw ConfigError(fmt::format("{}/{}: unknown key", where, key));
    const Direction n{number(d[i], "chi", where, 0.0), number(d[i], "phi", where, 0.0)};
    if (n.chi < 0.0 || n.chi > std::numbers::pi)
      throw ConfigError(where + "/chi: must lie in [0, pi]");
    out.push_back(n);
  }
  return out;
}

std::vector<double> schedule(const json &blk, const std::string &path,
                             std::vector<double> fallback) {
  auto s = number_list(blk, "t_schedule", path, std::move(fallback));
  if (s.size() < 3)
    throw ConfigError(path + "/t_schedule: need at least 3 times");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i] > s[i - 1]) || !(s[0] > 0.0))
      throw ConfigError(path + "/t_schedule: must be positive and increasing");
  return s;
}

int cmd_farfield(Context &ctx) {
  const json &blk = ctx.cfg.block;
  const auto &params = ctx.cfg.pulse;
  const auto s_values = number_list(blk, "s", "/farfield", default_s_samples(params));
  const auto dirs = direction_list(blk, "/farfield", {{0.0, 0.0}});
  const auto sched = schedule(blk, "/farfield", default_t_schedule(params));
  const bool check = blk.contains("bound");
  const double bound = number(blk, "bound", "/farfield", 0.0);

  const FieldEvaluator u = make_evaluator(ctx.cfg);
  WaveformPtr w = ctx.cfg.waveform;
  if (ctx.cfg.field == FieldKind::simple_pulse)
    w = std::make_shared<RationalWaveform>(params.b() - params.zeta());
  const auto analytic = [&](double s, const Direction &n) -> Complex {
    if (ctx.cfg.field == FieldKind::spherical_reference)
      return w->eval(Complex{s, ctx.cfg.b_ref});
    return farfield_analytic(s, n, params, *w);
  };

  ordered_json doc;
  doc["field"] = to_string(ctx.cfg.field);
  doc["t_schedule"] = sched;
  auto &rows = doc["rows"] = ordered_json::array();
  double worst = 0.0;
  for (const auto &n : dirs) {
    for (double s : s_values) {
      const auto r = farfield_numeric(u, params.c(), s, n, sched);
      const Complex a = analytic(s, n);
      const double diff = std::abs(r.value - a);
      worst = std::max(worst, diff);
      rows.push_back({{"s", s},
                     {"chi", n.chi},
                     {"phi", n.phi},
                     {"numeric", to_json(r.value)},
                     {"stability", r.stability},
                     {"analytic", to_json(a)},
                     {"abs_diff", diff}});
    }
  }
  Sink sink(ctx.output(), ctx.out);
  sink.stream() << doc.dump(2) << '\n';
  if (check && worst > bound) {
    ctx.err << fmt::format("farfield: |numeric - analytic| = {} exceeds bound {}\n", worst, bound);
    return check_failed;
  }
  return ok;
}

int cmd_unidir(Context &ctx) {
  const json &blk = ctx.cfg.block;
  const auto &params = ctx.cfg.pulse;
  const auto s_values = number_list(blk, "s", "/unidir", default_s_samples(params));
  const auto dirs = direction_list(blk, "/unidir", default_backward_directions());
  for (std::size_t i = 0; i < dirs.size(); ++i)
    if (!(dirs[i].chi > 0.5 * std::numbers::pi))
      throw ConfigError(fmt::format("/unidir/directions/{}/chi: must exceed pi/2", i));
  const double tol = number(blk, "tol", "/unidir", 1e-6);
  const auto sched = schedule(blk, "/unidir", default_unidirectional_schedule(params));
  if (s_values.empty())
    throw ConfigError("/unidir/s: list is empty");

  const auto report = check_unidirectional(make_evaluator(ctx.cfg), params.c(), s_values,
                                           dirs, tol, sched);
  Sink sink(ctx.output(), ctx.out);
  sink.stream() << report.to_json() << '\n';
  ctx.err << fmt::format("unidir: {} (max |F| = {:.3g}, tol {})\n", to_string(report.verdict),
                         report.entries[report.worst].max_abs_F, tol);
  switch (report.verdict) {
  case Verdict::pass:
    return ok;
  case Verdict::fail:
    return check_failed;
  case Verdict::warn:
    return numeric_failure;
  }
  return numeric_failure;
}

int cmd_spectrum(Context &ctx) {
  const json &blk = ctx.cfg.block;
  if (!blk.contains("kz") || !blk.contains("omega"))
    throw ConfigError("/spectrum: needs kz and omega axes");
  const GridAxis kz = axis_spec(blk.at("kz"), "/spectrum/kz", "kz");
  const GridAxis om = axis_spec(blk.at("omega"), "/spectrum/omega", "omega");
  const auto &params = ctx.cfg.pulse;

  Sink sink(ctx.output(), ctx.out);
  auto &os = sink.stream();
  os << "kz,omega,in_support,re,im,abs\n";
  for (std::size_t i = 0; i < kz.count; ++i) {
    for (std::size_t j = 0; j < om.count; ++j) {
      const double k = kz.coordinate(i);
      const double w = om.coordinate(j);
      Complex A{0.0, 0.0};
      bool inside = true;
      try {
        A = spectral_weight(k, w, params, *ctx.cfg.waveform);
      } catch (const OutOfSupport &) {
        inside = false;
      }
      os << num(k) << ',' << num(w) << ',' << (inside ? 1 : 0) << ',' << num(A.real()) << ','
         << num(A.imag()) << ',' << num(std::abs(A)) << '\n';
    }
  }
  return ok;
}

int cmd_residual(Context &ctx) {
  const json &blk = ctx.cfg.block;
  const auto points = point_list(blk, "/residual");
  const auto h_units = number_list(blk, "h", "/residual", {4e-3, 2e-3, 1e-3});
  std::vector<double> range = number_list(blk, "order_range", "/residual", {});
  if (!range.empty() && range.size() != 2)
    throw ConfigError("/residual/order_range: expected [lo, hi]");
  const double b = ctx.cfg.pulse.b();
  std::vector<double> h;
  for (double v : h_units)
    h.push_back(v * b);

  const FieldEvaluator u = make_evaluator(ctx.cfg);
  std::vector<ConvergenceReport> reports(points.size());
  try {
    parallel_for(points.size(), [&](std::size_t i) {
      reports[i] = convergence_order(u, points[i], h, ctx.cfg.pulse.c());
    });
  } catch (const std::invalid_argument &e) {
    throw ConfigError(fmt::format("/residual/h: {}", e.what()));
  }

  Sink sink(ctx.output(), ctx.out);
  auto &os = sink.stream();
  os << "t,x,y,z,h,abs_residual,normalized_residual,order,below_noise_floor\n";
  bool all_ok = true;
  for (const auto &rep : reports) {
    for (const auto &r : rep.residuals)
      os << num(r.point.t) << ',' << num(r.point.x) << ',' << num(r.point.y) << ','
         << num(r.point.z) << ',' << num(r.h) << ',' << num(std::abs(r.residual)) << ','
         << num(r.normalized()) << ',' << num(rep.order) << ','
         << (rep.below_noise_floor ? 1 : 0) << '\n';
    if (!range.empty() && !rep.below_noise_floor &&
        (rep.order < range[0] || rep.order > range[1]))
      all_ok = false;
  }
  if (!all_ok) {
    ctx.err << fmt::format("residual: fitted order outside [{}, {}]\n", range[0], range[1]);
    return check_failed;
  }
  return ok;
}

int cmd_energy(Context &ctx) {
  const json &blk = ctx.cfg.block;
  const auto &params = ctx.cfg.pulse;
  if (!params.regular())
    throw ConfigError("/pulse/zeta: energy needs a regular pulse (zeta < c tau)");
  const auto times = number_list(blk, "times", "/energy", {0.0, 1.0});
  if (times.empty())
    throw ConfigError("/energy/times: list is empty");
  EnergyOptions opts;
  opts.c = params.c();
  opts.length_scale = params.b();
  opts.cutoff_radius = number(blk, "cutoff_radius", "/energy", 1000.0 * params.b());
  opts.tol = number(blk, "tol", "/energy", 1e-6);
  if (!(opts.cutoff_radius > 4.0 * params.b()))
    throw ConfigError("/energy/cutoff_radius: must exceed 4 b");
  if (!(opts.tol > 0.0))
    throw ConfigError("/energy/tol: must be > 0");
  const bool check = blk.contains("conservation_bound");
  const double bound = number(blk, "conservation_bound", "/energy", 0.0);

  const FieldEvaluator u = make_evaluator(ctx.cfg);
  std::vector<EnergyResult> results(times.size());
  parallel_for(times.size(), [&](std::size_t i) { results[i] = energy_estimate(u, times[i], opts); });

  ordered_json doc;
  doc["times"] = times;
  auto &rows = doc["results"] = ordered_json::array();
  double lo = results[0].total, hi = results[0].total;
  for (std::size_t i = 0; i < times.size(); ++i) {
    rows.push_back({{"t", times[i]},
                    {"energy", results[i].total},
                    {"truncated", results[i].truncated},
                    {"tail", results[i].tail},
                    {"decay_exponent", results[i].decay_exponent}});
    lo = std::min(lo, results[i].total);
    hi = std::max(hi, results[i].total);
  }
  const double drift = (hi - lo) / std::abs(results[0].total);
  doc["relative_drift"] = drift;
  Sink sink(ctx.output(), ctx.out);
  sink.stream() << doc.dump(2) << '\n';
  if (check && drift > bound) {
    ctx.err << fmt::format("energy: relative drift {} exceeds bound {}\n", drift, bound);
    return check_failed;
  }
  return ok;
}

const std::map<std::string, std::function<int(Context &)>> kCommands = {
    {"sample", cmd_sample},     {"compare", cmd_compare},   {"farfield", cmd_farfield},
    {"unidir", cmd_unidir},     {"spectrum", cmd_spectrum}, {"residual", cmd_residual},
    {"energy", cmd_energy},
};

} // namespace

int run_command(const std::string &command, const std::string &config_path,
                const RunOptions &opts, std::ostream &out, std::ostream &err) {
  const auto it = kCommands.find(command);
  if (it == kCommands.end()) {
    err << fmt::format("unknown command '{}'\n", command);
    return config_error;
  }
  try {
    Context ctx{load_config(config_path, command), opts, out, err};
    return it->second(ctx);
  } catch (const ConfigError &e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const ToleranceNotReached &e) {
    err << fmt::format("numeric failure: ToleranceNotReached: {} (best {} +/- {:.3g})\n",
                       e.what(), num(std::abs(e.best().value)), e.best().error_estimate);
    return numeric_failure;
  } catch (const ExtrapolationUnstable &e) {
    err << "numeric failure: ExtrapolationUnstable: " << e.what() << '\n';
    return numeric_failure;
  } catch (const NumericError &e) {
    err << "numeric failure: " << e.what() << '\n';
    return numeric_failure;
  } catch (const std::invalid_argument &e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return numeric_failure;
  }
}

} // namespace unipulse::cli
