#pragma once

#include "unipulse/errors.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace unipulse {

//==============================================================================
//! Waveform f(theta) of a quasi-spherical wave u = f(theta)/S.
/*!
  Implementations must be analytic in the closed upper half-plane, decay no
  slower than 1/|theta| there, and admit a positive-frequency representation

      f(theta) = int_0^inf spectrum(kappa) exp(i kappa theta) dkappa,

  with |spectrum(kappa)| <= C exp(-decay_rate() * kappa). Objects are
  immutable once constructed.
*/
class Waveform {
public:
  virtual ~Waveform() = default;

  //! f(theta), Im theta >= 0.
  virtual Complex eval(Complex theta) const = 0;
  //! f'(theta), Im theta >= 0.
  virtual Complex deriv(Complex theta) const = 0;
  //! Spectral density at kappa >= 0.
  virtual Complex spectrum(double kappa) const = 0;
  //! Exponential decay rate of |spectrum|; used as quadrature decay hint.
  virtual double decay_rate() const = 0;
  //! Spectrum vanishes for kappa below this value (and may jump there).
  virtual double spectral_onset() const { return 0.0; }
  //! Canonical descriptor, e.g. "lekner(a=1,K=2)".
  virtual std::string descriptor() const = 0;
};

using WaveformPtr = std::shared_ptr<const Waveform>;

//! f(theta) = 1 / (theta + i a). With a = b - zeta, f(theta)/S is the simple
//! pulse 1/(S (S - z - i zeta)).
class RationalWaveform final : public Waveform {
public:
  explicit RationalWaveform(double a);

  Complex eval(Complex theta) const override;
  Complex deriv(Complex theta) const override;
  //! -i exp(-a kappa)
  Complex spectrum(double kappa) const override;
  double decay_rate() const override { return m_a; }
  std::string descriptor() const override;

  double a() const { return m_a; }

private:
  double m_a;
};

//! f(theta) = exp(i K theta) / (theta + i a), K >= 0. K = 0 is the rational
//! waveform. Angular localization grows with K.
class LeknerWaveform final : public Waveform {
public:
  LeknerWaveform(double a, double K);

  Complex eval(Complex theta) const override;
  Complex deriv(Complex theta) const override;
  //! -i exp(-a (kappa - K)) for kappa >= K, 0 below.
  Complex spectrum(double kappa) const override;
  double decay_rate() const override { return m_a; }
  double spectral_onset() const override { return m_K; }
  std::string descriptor() const override;

  double a() const { return m_a; }
  double K() const { return m_K; }

private:
  double m_a;
  double m_K;
};

//------------------------------------------------------------------------------
// Registry: descriptors of the form name(key=value,...)

using WaveformFactory =
    std::function<WaveformPtr(const std::map<std::string, double> &)>;

class WaveformRegistry {
public:
  //! Registry pre-populated with "rational" and "lekner".
  static WaveformRegistry with_builtins();

  void add(const std::string &name, std::vector<std::string> keys,
           WaveformFactory factory);
  //! Parses e.g. "lekner(a=1, K=2)". Throws std::invalid_argument with the
  //! offending token on malformed input, unknown names or unknown/missing keys.
  WaveformPtr parse(const std::string &descriptor) const;
  std::vector<std::string> names() const;

private:
  struct Entry {
    std::vector<std::string> keys;
    WaveformFactory factory;
  };
  std::map<std::string, Entry> m_entries;
};

//! WaveformRegistry::with_builtins().parse(descriptor)
WaveformPtr parse_waveform(const std::string &descriptor);

} // namespace unipulse
