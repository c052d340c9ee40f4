#pragma once

// 113-bit mantissa scalars for re-solving catalogued witnesses.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "gscat/scalar.hpp"

namespace gscat {

using quad = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<113, boost::multiprecision::digit_base_2,
                                                                                 void, std::int16_t, -16382, 16383>,
                                           boost::multiprecision::et_off>;
using quad_complex =
    boost::multiprecision::number<boost::multiprecision::complex_adaptor<quad::backend_type>, boost::multiprecision::et_off>;

template <>
struct ScalarTraits<quad> {
  using real = quad;
  using complex = quad_complex;
  static real pi() { return boost::math::constants::pi<quad>(); }
  static complex polar(real r, real theta) { return boost::multiprecision::polar(r, theta); }
  static real epsilon() { return std::numeric_limits<quad>::epsilon(); }
};

}  // namespace gscat
