#pragma once

// Real/complex pairing used by the templated solver. Double precision is the
// scan path; gscat/precision.hpp adds a 113-bit mantissa type for re-checks.

#include <complex>
#include <limits>
#include <numbers>

#include "gscat/momentum.hpp"

namespace gscat {

template <class R>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  using real = double;
  using complex = std::complex<double>;
  static real pi() { return std::numbers::pi; }
  static complex polar(real r, real theta) { return std::polar(r, theta); }
  static real epsilon() { return std::numeric_limits<double>::epsilon(); }
};

template <class R>
using Complex = typename ScalarTraits<R>::complex;

template <class R>
R momentum_value(const Momentum& k) {
  return ScalarTraits<R>::pi() * R(k.p()) / R(k.q());
}

}  // namespace gscat
