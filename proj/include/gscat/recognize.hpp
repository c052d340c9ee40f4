#pragma once

// Closed-form recognition for rotation angles and effective lengths.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>

namespace gscat {

struct Rational {
  long p = 0;
  long q = 1;

  double value() const { return double(p) / double(q); }
  std::string str() const { return q == 1 ? std::to_string(p) : std::to_string(p) + "/" + std::to_string(q); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

inline Rational make_rational(long p, long q) {
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const long g = std::gcd(std::labs(p), q);
  return g > 1 ? Rational{p / g, q / g} : Rational{p, q};
}

/// Smallest-denominator continued-fraction convergent p/q of x with
/// q <= q_max and |x - p/q| <= eps.
inline std::optional<Rational> recognize_rational(double x, long q_max, double eps) {
  if (!std::isfinite(x)) return std::nullopt;
  // Convergent recurrences h_n = a_n h_{n-1} + h_{n-2}, likewise k_n.
  long h_prev = 1, h_prev2 = 0;
  long k_prev = 0, k_prev2 = 1;
  double rest = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(rest);
    if (std::fabs(a) > 1e15) break;
    const long ai = long(a);
    const long h = ai * h_prev + h_prev2;
    const long k = ai * k_prev + k_prev2;
    if (k > q_max) break;
    if (std::fabs(x - double(h) / double(k)) <= eps) return make_rational(h, k);
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    const double frac = rest - a;
    if (frac == 0.0) break;
    rest = 1.0 / frac;
  }
  return std::nullopt;
}

/// x = rational + coefficient * sqrt(radicand), the root of A x^2 + B x + C.
struct QuadraticSurd {
  long a = 0;
  long b = 0;
  long c = 0;
  Rational rational;
  Rational coefficient;  // zero when x is rational
  long radicand = 1;     // squarefree

  bool is_rational() const { return coefficient.p == 0; }

  double value() const { return rational.value() + coefficient.value() * std::sqrt(double(radicand)); }

  std::string str() const {
    if (is_rational()) return rational.str();
    std::string out = rational.p == 0 ? "" : rational.str();
    const long cp = coefficient.p;
    std::string mag;
    if (std::labs(cp) != 1 || coefficient.q != 1) mag = std::to_string(std::labs(cp)) + "*";
    mag += "sqrt(" + std::to_string(radicand) + ")";
    if (coefficient.q != 1) mag += "/" + std::to_string(coefficient.q);
    if (cp < 0) return out + "-" + mag;
    return out.empty() ? mag : out + "+" + mag;
  }
};

namespace detail {

inline QuadraticSurd surd_from_relation(long a, long b, long c, double x) {
  QuadraticSurd s;
  const long g = std::gcd(std::gcd(std::labs(a), std::labs(b)), std::labs(c));
  a /= g;
  b /= g;
  c /= g;
  if (a < 0 || (a == 0 && b < 0)) {
    a = -a;
    b = -b;
    c = -c;
  }
  s.a = a;
  s.b = b;
  s.c = c;
  if (a == 0) {
    s.rational = make_rational(-c, b);
    s.coefficient = {0, 1};
    return s;
  }
  const long disc = b * b - 4 * a * c;
  // Split disc = f^2 * d with d squarefree.
  long f = 1;
  long d = disc;
  for (long p = 2; p * p <= d; ++p)
    while (d % (p * p) == 0) {
      d /= p * p;
      f *= p;
    }
  const double root_plus = (-double(b) + double(f) * std::sqrt(double(d))) / (2.0 * double(a));
  const double root_minus = (-double(b) - double(f) * std::sqrt(double(d))) / (2.0 * double(a));
  const long sign = std::fabs(x - root_plus) <= std::fabs(x - root_minus) ? 1 : -1;
  s.rational = make_rational(-b, 2 * a);
  if (d == 1) {
    s.rational = make_rational(-b + sign * f, 2 * a);
    s.coefficient = {0, 1};
  } else {
    s.coefficient = make_rational(sign * f, 2 * a);
    s.radicand = d;
  }
  return s;
}

}  // namespace detail

/// Integer relation A x^2 + B x + C = 0 with |A|, |B|, |C| <= bound and
/// minimal |A| + |B| + |C|. The residual test is relative:
/// |A x^2 + B x + C| <= eps * max(1, |A| x^2, |B x|, |C|).
///
/// The screening pass runs in double precision; candidates are confirmed in
/// the precision of `x` (pass a 113-bit value for a meaningful tight eps).
template <class R>
std::optional<QuadraticSurd> recognize_quadratic_surd(const R& x, long bound, double eps) {
  using std::fabs;
  const double xd = static_cast<double>(x);
  if (!std::isfinite(xd) || bound < 1) return std::nullopt;
  const double screen = std::max(eps, 1e-12);
  const double x2 = xd * xd;
  long best_cost = 3 * bound + 1;
  long ba = 0, bb = 0, bc = 0;
  for (long a = 0; a <= bound && a < best_cost; ++a) {
    long b_lo = -bound;
    long b_hi = bound;
    if (std::fabs(xd) > 1.0) {
      // |C| <= bound confines B x to [-bound - a x^2, bound - a x^2].
      const double lo = (-double(bound) - double(a) * x2) / xd;
      const double hi = (double(bound) - double(a) * x2) / xd;
      b_lo = std::max(b_lo, long(std::floor(std::min(lo, hi))) - 1);
      b_hi = std::min(b_hi, long(std::ceil(std::max(lo, hi))) + 1);
    }
    for (long b = b_lo; b <= b_hi; ++b) {
      if (a == 0 && b <= 0) continue;
      if (a + std::labs(b) >= best_cost) continue;
      const double t = double(a) * x2 + double(b) * xd;
      const double cd = -std::nearbyint(t);
      if (std::fabs(cd) > double(bound)) continue;
      const long c = long(cd);
      const long cost = a + std::labs(b) + std::labs(c);
      if (cost >= best_cost) continue;
      const double scale = std::max({1.0, double(a) * x2, std::fabs(double(b) * xd), std::fabs(cd)});
      if (std::fabs(t + cd) > screen * scale) continue;
      const R exact = R(a) * x * x + R(b) * x + R(c);
      using std::abs;
      if (static_cast<double>(abs(exact)) > eps * scale) continue;
      best_cost = cost;
      ba = a;
      bb = b;
      bc = c;
    }
  }
  if (best_cost > 3 * bound) return std::nullopt;
  return detail::surd_from_relation(ba, bb, bc, xd);
}

}  // namespace gscat
