#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace unipulse {

using Complex = std::complex<double>;

//! Base class for failures of a numerical procedure (as opposed to bad input,
//! which is reported with std::invalid_argument).
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

//! Outcome of a one-dimensional (or nested) quadrature.
struct QuadratureResult {
  Complex value{0.0, 0.0};
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

//! Adaptive integration gave up before meeting its tolerance. The best value
//! found so far travels with the exception.
class ToleranceNotReached : public NumericError {
public:
  ToleranceNotReached(const std::string &what, QuadratureResult best)
      : NumericError(what), m_best(best) {}
  const QuadratureResult &best() const noexcept { return m_best; }

private:
  QuadratureResult m_best;
};

class ExtrapolationUnstable : public NumericError {
public:
  ExtrapolationUnstable(const std::string &what, Complex last_estimate,
                        double spread)
      : NumericError(what), m_last(last_estimate), m_spread(spread) {}
  Complex last_estimate() const noexcept { return m_last; }
  double spread() const noexcept { return m_spread; }

private:
  Complex m_last;
  double m_spread;
};

class SingularPoint : public NumericError {
public:
  using NumericError::NumericError;
};

class OutOfSupport : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

} // namespace unipulse
