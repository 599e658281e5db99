#include "unipulse/fields.hpp"
#include "unipulse/parallel.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>

namespace unipulse {

namespace {

const std::set<std::string> kCoordinateNames = {"t", "x", "y", "z", "rho"};

std::string num(double v) { return fmt::format("{:.17g}", v); }

} // namespace

void GridSpec::validate() const {
  if (axes.empty() || axes.size() > 3)
    throw std::invalid_argument(
        fmt::format("grid: need 1 to 3 axes (got {})", axes.size()));
  std::set<std::string> used;
  for (const auto &ax : axes) {
    if (!kCoordinateNames.count(ax.name))
      throw std::invalid_argument(fmt::format("grid: unknown axis '{}'", ax.name));
    if (!used.insert(ax.name).second)
      throw std::invalid_argument(fmt::format("grid: axis '{}' repeated", ax.name));
    if (ax.count == 0)
      throw std::invalid_argument(fmt::format("grid: axis '{}' has zero points", ax.name));
    if (!std::isfinite(ax.min) || !std::isfinite(ax.max))
      throw std::invalid_argument(fmt::format("grid: axis '{}' bounds not finite", ax.name));
    if (ax.name == "rho" && ax.min < 0.0)
      throw std::invalid_argument("grid: rho axis must be non-negative");
  }
  for (const auto &[name, value] : fixed) {
    if (!kCoordinateNames.count(name))
      throw std::invalid_argument(fmt::format("grid: unknown fixed coordinate '{}'", name));
    if (used.count(name))
      throw std::invalid_argument(
          fmt::format("grid: '{}' is both an axis and a fixed coordinate", name));
    if (!std::isfinite(value))
      throw std::invalid_argument(fmt::format("grid: fixed '{}' not finite", name));
    used.insert(name);
  }
  if (used.count("rho") && (used.count("x") || used.count("y")))
    throw std::invalid_argument("grid: rho cannot be combined with x or y");
}

std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (const auto &ax : axes)
    n *= ax.count;
  return n;
}

std::vector<std::size_t> GridSpec::unflatten(std::size_t flat) const {
  std::vector<std::size_t> idx(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    idx[k] = flat % axes[k].count;
    flat /= axes[k].count;
  }
  return idx;
}

SpacetimePoint GridSpec::point(std::size_t flat) const {
  std::map<std::string, double> coords = fixed;
  const auto idx = unflatten(flat);
  for (std::size_t k = 0; k < axes.size(); ++k)
    coords[axes[k].name] = axes[k].coordinate(idx[k]);
  auto get = [&](const char *name) {
    const auto it = coords.find(name);
    return it == coords.end() ? 0.0 : it->second;
  };
  SpacetimePoint p{get("t"), get("x"), get("y"), get("z")};
  if (coords.count("rho")) {
    p.x = get("rho");
    p.y = 0.0;
  }
  return p;
}

FieldGrid sample_grid(const GridSpec &spec, const FieldEvaluator &evaluator) {
  spec.validate();
  FieldGrid grid;
  grid.spec = spec;
  grid.values.resize(spec.size());
  parallel_for(grid.values.size(), [&](std::size_t i) {
    try {
      grid.values[i] = evaluator(spec.point(i));
    } catch (const std::exception &e) {
      throw GridEvaluationError(fmt::format("grid index {}: {}", i, e.what()), i);
    }
  });
  return grid;
}

void write_grid_csv(const FieldGrid &grid, std::ostream &out) {
  for (const auto &ax : grid.spec.axes)
    out << ax.name << ',';
  out << "re,im,abs\n";
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    const auto idx = grid.spec.unflatten(i);
    for (std::size_t k = 0; k < idx.size(); ++k)
      out << num(grid.spec.axes[k].coordinate(idx[k])) << ',';
    const Complex v = grid.values[i];
    out << num(v.real()) << ',' << num(v.imag()) << ',' << num(std::abs(v)) << '\n';
  }
}

void write_grid_binary(const FieldGrid &grid, const std::string &header_path,
                       const std::string &data_path) {
  nlohmann::ordered_json header;
  header["format"] = "unipulse-grid";
  header["version"] = 1;
  auto &axes = header["axes"] = nlohmann::ordered_json::array();
  for (const auto &ax : grid.spec.axes)
    axes.push_back({{"name", ax.name}, {"min", ax.min}, {"max", ax.max}, {"count", ax.count}});
  header["fixed"] = grid.spec.fixed;
  if (grid.params)
    header["pulse"] = {{"c", grid.params->c()},
                       {"tau", grid.params->tau()},
                       {"zeta", grid.params->zeta()}};
  header["waveform"] = grid.waveform;
  header["field"] = grid.field_kind;
  header["data"] = {{"file", data_path},
                    {"dtype", "float64"},
                    {"endianness", "little"},
                    {"layout", "row-major, interleaved (re, im)"},
                    {"count", grid.values.size()}};

  std::ofstream hdr(header_path);
  if (!hdr)
    throw std::runtime_error(fmt::format("cannot write '{}'", header_path));
  hdr << header.dump(2) << '\n';

  std::ofstream bin(data_path, std::ios::binary);
  if (!bin)
    throw std::runtime_error(fmt::format("cannot write '{}'", data_path));
  for (const Complex v : grid.values) {
    for (const double d : {v.real(), v.imag()}) {
      std::array<unsigned char, 8> bytes;
      std::memcpy(bytes.data(), &d, 8);
      if constexpr (std::endian::native == std::endian::big)
        std::reverse(bytes.begin(), bytes.end());
      bin.write(reinterpret_cast<const char *>(bytes.data()), 8);
    }
  }
}

} // namespace unipulse
