#include "unipulse/cli.hpp"

#include <fmt/format.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace unipulse::cli {

using nlohmann::json;

namespace {

const std::vector<KeyDoc> kCommonKeys = {
    {"pulse.c", "wave speed, > 0 (default 1)"},
    {"pulse.tau", "imaginary time shift, > 0 (default 1)"},
    {"pulse.zeta", "imaginary z shift (default 0)"},
    {"waveform", "rational(a=<real>) or lekner(a=<real>,K=<real>) (default rational(a=b-zeta))"},
    {"field", "quasi_spherical | simple_pulse | spherical_reference (default quasi_spherical)"},
    {"b_ref", "imaginary shift of the spherical reference wave, >= 0 (default 0)"},
    {"output", "output path (overridden by --out; default standard output)"},
};

const std::map<std::string, std::vector<KeyDoc>> kCommandKeys = {
    {"sample",
     {{"grid.axes", "1-3 axes [{name: t|x|y|z|rho, min, max, count}], first varies slowest"},
      {"grid.fixed", "object of fixed coordinates (t, x, y, z, rho), default 0"},
      {"grid.format", "csv | binary (binary writes <output> JSON header + <output>.bin)"}}},
    {"compare",
     {{"compare.points", "non-empty list of {t, x, y, z} or {t, rho, z}"},
      {"compare.tol", "quadrature tolerance (default 1e-8)"},
      {"compare.bound", "allowed |route - closed form| (default 1e-5)"},
      {"compare.mc_samples", "Monte-Carlo samples per point, 0 disables (default 0)"},
      {"compare.mc_sigmas", "allowed Monte-Carlo deviation in standard errors (default 4)"},
      {"compare.seed", "Monte-Carlo seed (overridden by --seed; default 1)"}}},
    {"farfield",
     {{"farfield.s", "list of retarded coordinates s"},
      {"farfield.directions", "list of {chi, phi}"},
      {"farfield.t_schedule", "increasing times (default {1e2,1e3,1e4} b/c)"},
      {"farfield.bound", "optional: fail (exit 4) if |numeric - analytic| exceeds it"}}},
    {"unidir",
     {{"unidir.s", "list of s values (default {-2,-1,0,1,2} b)"},
      {"unidir.directions", "backward directions {chi, phi}, chi > pi/2 (default 8)"},
      {"unidir.tol", "PASS threshold on max |F| (default 1e-6)"},
      {"unidir.t_schedule", "increasing times (default {1e4,...,1e8} b/c)"}}},
    {"spectrum",
     {{"spectrum.kz", "{min, max, count} axis of k_z"},
      {"spectrum.omega", "{min, max, count} axis of omega"}}},
    {"residual",
     {{"residual.points", "non-empty list of {t, x, y, z} or {t, rho, z}"},
      {"residual.h", "ratio-2 steps in units of b (default [4e-3, 2e-3, 1e-3])"},
      {"residual.order_range", "optional [lo, hi]: fail (exit 4) if a fitted order falls outside"}}},
    {"energy",
     {{"energy.times", "list of times (default [0, 1])"},
      {"energy.cutoff_radius", "radial cutoff (default 1000 b)"},
      {"energy.tol", "relative quadrature tolerance (default 1e-6)"},
      {"energy.conservation_bound", "optional: fail (exit 4) if relative drift exceeds it"}}},
};

const std::map<std::string, std::string> kSummaries = {
    {"sample", "sample the field over a grid to CSV or JSON+binary"},
    {"compare", "compare closed form with the plane-wave and Fourier-Bessel syntheses"},
    {"farfield", "numeric and analytic far-field amplitude F(s, n)"},
    {"unidir", "certify that the far field vanishes on the backward hemisphere"},
    {"spectrum", "tabulate the Fourier-Bessel weight A(k_z, omega)"},
    {"residual", "finite-difference wave-equation residual and convergence order"},
    {"energy", "field energy at several times"},
};

std::string block_name(const std::string &command) {
  return command == "sample" ? "grid" : command;
}

void check_keys(const json &obj, const std::string &path, const std::set<std::string> &allowed) {
  if (!obj.is_object())
    throw ConfigError(fmt::format("{}: expected an object", path.empty() ? "/" : path));
  for (const auto &[key, value] : obj.items())
    if (!allowed.count(key))
      throw ConfigError(fmt::format("{}/{}: unknown key", path, key));
}

double get_number(const json &obj, const std::string &key, const std::string &path,
                  double fallback) {
  if (!obj.contains(key))
    return fallback;
  const json &v = obj.at(key);
  if (!v.is_number())
    throw ConfigError(fmt::format("{}/{}: expected a number", path, key));
  return v.get<double>();
}

} // namespace

const std::vector<std::string> &command_names() {
  static const std::vector<std::string> names = {"sample", "compare", "farfield", "unidir",
                                                 "spectrum", "residual", "energy"};
  return names;
}

std::string command_summary(const std::string &command) { return kSummaries.at(command); }

std::vector<KeyDoc> config_keys(const std::string &command) {
  std::vector<KeyDoc> keys = kCommonKeys;
  const auto &own = kCommandKeys.at(command);
  keys.insert(keys.end(), own.begin(), own.end());
  return keys;
}

std::string to_string(FieldKind kind) {
  switch (kind) {
  case FieldKind::quasi_spherical:
    return "quasi_spherical";
  case FieldKind::simple_pulse:
    return "simple_pulse";
  case FieldKind::spherical_reference:
    return "spherical_reference";
  }
  return "?";
}

RunConfig parse_config(const std::string &text, const std::string &command) {
  if (!kCommandKeys.count(command))
    throw ConfigError(fmt::format("unknown command '{}'", command));

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }

  // Top-level and block key sets follow from the key table.
  std::set<std::string> top;
  std::set<std::string> block_keys;
  std::set<std::string> pulse_keys;
  for (const auto &kd : config_keys(command)) {
    const auto dot = kd.key.find('.');
    const std::string head = kd.key.substr(0, dot);
    top.insert(head);
    if (dot != std::string::npos) {
      if (head == "pulse")
        pulse_keys.insert(kd.key.substr(dot + 1));
      else
        block_keys.insert(kd.key.substr(dot + 1));
    }
  }
  check_keys(doc, "", top);

  RunConfig cfg;
  cfg.command = command;

  double c = 1.0, tau = 1.0, zeta = 0.0;
  if (doc.contains("pulse")) {
    const json &p = doc.at("pulse");
    check_keys(p, "/pulse", pulse_keys);
    c = get_number(p, "c", "/pulse", c);
    tau = get_number(p, "tau", "/pulse", tau);
    zeta = get_number(p, "zeta", "/pulse", zeta);
  }
  if (!(c > 0.0))
    throw ConfigError(fmt::format("/pulse/c: must be > 0 (got {})", c));
  if (!(tau > 0.0))
    throw ConfigError(fmt::format("/pulse/tau: must be > 0 (got {})", tau));
  cfg.pulse = PulseParams(c, tau, zeta);

  if (doc.contains("waveform")) {
    if (!doc.at("waveform").is_string())
      throw ConfigError("/waveform: expected a string");
    cfg.waveform_descriptor = doc.at("waveform").get<std::string>();
  } else {
    const double a = cfg.pulse.b() - cfg.pulse.zeta();
    if (!(a > 0.0))
      throw ConfigError(
          "/waveform: required when zeta >= c tau (default rational(a=b-zeta) needs a > 0)");
    cfg.waveform_descriptor = fmt::format("rational(a={:.17g})", a);
  }
  try {
    cfg.waveform = parse_waveform(cfg.waveform_descriptor);
  } catch (const std::invalid_argument &e) {
    throw ConfigError(fmt::format("/waveform: {}", e.what()));
  }
  cfg.waveform_descriptor = cfg.waveform->descriptor();

  if (doc.contains("field")) {
    const json &f = doc.at("field");
    const std::string name = f.is_string() ? f.get<std::string>() : "";
    if (name == "quasi_spherical")
      cfg.field = FieldKind::quasi_spherical;
    else if (name == "simple_pulse")
      cfg.field = FieldKind::simple_pulse;
    else if (name == "spherical_reference")
      cfg.field = FieldKind::spherical_reference;
    else
      throw ConfigError(
          "/field: expected quasi_spherical, simple_pulse or spherical_reference");
  }
  cfg.b_ref = get_number(doc, "b_ref", "", 0.0);
  if (!(cfg.b_ref >= 0.0))
    throw ConfigError(fmt::format("/b_ref: must be >= 0 (got {})", cfg.b_ref));

  if (doc.contains("output")) {
    if (!doc.at("output").is_string())
      throw ConfigError("/output: expected a string");
    cfg.output = doc.at("output").get<std::string>();
  }

  const std::string name = block_name(command);
  if (doc.contains(name)) {
    check_keys(doc.at(name), "/" + name, block_keys);
    cfg.block = doc.at(name);
  } else {
    cfg.block = json::object();
  }
  return cfg;
}

RunConfig load_config(const std::string &path, const std::string &command) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError(fmt::format("cannot read config '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), command);
}

FieldEvaluator make_evaluator(const RunConfig &cfg) {
  switch (cfg.field) {
  case FieldKind::simple_pulse:
    return make_simple_pulse(cfg.pulse);
  case FieldKind::spherical_reference:
    return make_spherical_reference(cfg.pulse.c(), cfg.waveform, cfg.b_ref);
  case FieldKind::quasi_spherical:
    break;
  }
  return make_quasi_spherical(cfg.pulse, cfg.waveform);
}

} // namespace unipulse::cli
