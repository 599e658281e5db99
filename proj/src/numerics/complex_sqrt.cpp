#include "unipulse/numerics.hpp"

#include <cmath>

namespace unipulse {

Complex complex_sqrt_upper(Complex w) {
  // std::sqrt is the principal branch (Re r >= 0) and honours the sign of a
  // zero imaginary part, so -x - 0i comes back as -i sqrt(x). Flip into the
  // upper half-plane in that case too.
  const Complex r = std::sqrt(w);
  if (r.imag() < 0.0 || (r.imag() == 0.0 && std::signbit(r.imag()) && r.real() == 0.0))
    return -r;
  if (r.imag() == 0.0)
    return {r.real(), 0.0};
  return r;
}

} // namespace unipulse
