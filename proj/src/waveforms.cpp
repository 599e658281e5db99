#include "unipulse/waveforms.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

namespace unipulse {

namespace {
constexpr Complex I{0.0, 1.0};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
    ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
    --e;
  return std::string(s.substr(b, e - b));
}
} // namespace

//------------------------------------------------------------------------------
RationalWaveform::RationalWaveform(double a) : m_a(a) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw std::invalid_argument(fmt::format("rational waveform: a must be > 0 (got {})", a));
}

Complex RationalWaveform::eval(Complex theta) const { return 1.0 / (theta + I * m_a); }

Complex RationalWaveform::deriv(Complex theta) const {
  const Complex d = theta + I * m_a;
  return -1.0 / (d * d);
}

Complex RationalWaveform::spectrum(double kappa) const {
  return -I * std::exp(-m_a * kappa);
}

std::string RationalWaveform::descriptor() const {
  return fmt::format("rational(a={:.17g})", m_a);
}

//------------------------------------------------------------------------------
LeknerWaveform::LeknerWaveform(double a, double K) : m_a(a), m_K(K) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw std::invalid_argument(fmt::format("lekner waveform: a must be > 0 (got {})", a));
  if (!(K >= 0.0) || !std::isfinite(K))
    throw std::invalid_argument(fmt::format("lekner waveform: K must be >= 0 (got {})", K));
}

Complex LeknerWaveform::eval(Complex theta) const {
  return std::exp(I * m_K * theta) / (theta + I * m_a);
}

Complex LeknerWaveform::deriv(Complex theta) const {
  const Complex d = 1.0 / (theta + I * m_a);
  return (I * m_K - d) * std::exp(I * m_K * theta) * d;
}

Complex LeknerWaveform::spectrum(double kappa) const {
  if (kappa < m_K)
    return {0.0, 0.0};
  return -I * std::exp(-m_a * (kappa - m_K));
}

std::string LeknerWaveform::descriptor() const {
  return fmt::format("lekner(a={:.17g},K={:.17g})", m_a, m_K);
}

//------------------------------------------------------------------------------
WaveformRegistry WaveformRegistry::with_builtins() {
  WaveformRegistry reg;
  reg.add("rational", {"a"}, [](const std::map<std::string, double> &kv) {
    return std::make_shared<RationalWaveform>(kv.at("a"));
  });
  reg.add("lekner", {"a", "K"}, [](const std::map<std::string, double> &kv) {
    return std::make_shared<LeknerWaveform>(kv.at("a"), kv.at("K"));
  });
  return reg;
}

void WaveformRegistry::add(const std::string &name, std::vector<std::string> keys,
                           WaveformFactory factory) {
  m_entries[name] = Entry{std::move(keys), std::move(factory)};
}

std::vector<std::string> WaveformRegistry::names() const {
  std::vector<std::string> out;
  for (const auto &[name, entry] : m_entries)
    out.push_back(name);
  return out;
}

WaveformPtr WaveformRegistry::parse(const std::string &descriptor) const {
  const auto open = descriptor.find('(');
  const auto close = descriptor.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open ||
      !trim(descriptor.substr(close + 1)).empty())
    throw std::invalid_argument(
        fmt::format("waveform '{}': expected name(key=value,...)", descriptor));

  const std::string name = trim(descriptor.substr(0, open));
  const auto it = m_entries.find(name);
  if (it == m_entries.end())
    throw std::invalid_argument(fmt::format("waveform '{}': unknown name '{}'", descriptor, name));

  std::map<std::string, double> kv;
  const std::string body = descriptor.substr(open + 1, close - open - 1);
  std::size_t pos = 0;
  while (pos <= body.size() && !trim(body).empty()) {
    const auto comma = std::min(body.find(',', pos), body.size());
    const std::string item = body.substr(pos, comma - pos);
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(
          fmt::format("waveform '{}': expected key=value, got '{}'", descriptor, trim(item)));
    const std::string key = trim(item.substr(0, eq));
    const std::string text = trim(item.substr(eq + 1));
    const auto &keys = it->second.keys;
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw std::invalid_argument(
          fmt::format("waveform '{}': unknown parameter '{}'", descriptor, key));
    if (kv.count(key))
      throw std::invalid_argument(
          fmt::format("waveform '{}': parameter '{}' given twice", descriptor, key));
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
      throw std::invalid_argument(
          fmt::format("waveform '{}': '{}' is not a number", descriptor, text));
    kv[key] = value;
    if (comma >= body.size())
      break;
    pos = comma + 1;
  }
  for (const auto &key : it->second.keys)
    if (!kv.count(key))
      throw std::invalid_argument(
          fmt::format("waveform '{}': missing parameter '{}'", descriptor, key));
  return it->second.factory(kv);
}

WaveformPtr parse_waveform(const std::string &descriptor) {
  static const WaveformRegistry registry = WaveformRegistry::with_builtins();
  return registry.parse(descriptor);
}

} // namespace unipulse
