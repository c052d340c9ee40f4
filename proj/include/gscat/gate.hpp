#pragma once

// Gate detection from the tail scattering matrix and classification of the
// resulting 2x2 operator as a Bloch-sphere rotation.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>

#include "gscat/ports.hpp"
#include "gscat/recognize.hpp"
#include "gscat/scatter.hpp"

namespace gscat {

using cplx = std::complex<double>;

struct Mat2 {
  std::array<cplx, 4> a{};  // row-major

  cplx& operator()(int i, int j) { return a[std::size_t(2 * i + j)]; }
  const cplx& operator()(int i, int j) const { return a[std::size_t(2 * i + j)]; }

  static Mat2 identity() { return {{cplx(1), cplx(0), cplx(0), cplx(1)}}; }
  static Mat2 pauli_x() { return {{cplx(0), cplx(1), cplx(1), cplx(0)}}; }
  static Mat2 pauli_y() { return {{cplx(0), cplx(0, -1), cplx(0, 1), cplx(0)}}; }
  static Mat2 pauli_z() { return {{cplx(1), cplx(0), cplx(0), cplx(-1)}}; }

  /// exp(-i angle/2 n.sigma) for the unit axis (theta, phi).
  static Mat2 rotation(double theta, double phi, double angle) {
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    const double nx = std::sin(theta) * std::cos(phi);
    const double ny = std::sin(theta) * std::sin(phi);
    const double nz = std::cos(theta);
    return {{cplx(c, -s * nz), cplx(-s * ny, -s * nx), cplx(s * ny, -s * nx), cplx(c, s * nz)}};
  }

  Mat2 adjoint() const { return {{std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])}}; }
  Mat2 transpose() const { return {{a[0], a[2], a[1], a[3]}}; }
  cplx trace() const { return a[0] + a[3]; }
  cplx det() const { return a[0] * a[3] - a[1] * a[2]; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j);
    return r;
  }
  friend Mat2 operator*(cplx s, const Mat2& x) { return {{s * x.a[0], s * x.a[1], s * x.a[2], s * x.a[3]}}; }
};

/// max |(U^dagger U - I)_ij|
inline double unitarity_defect(const Mat2& u) {
  const Mat2 p = u.adjoint() * u;
  double worst = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(p(i, j) - cplx(i == j ? 1.0 : 0.0)));
  return worst;
}

/// 1 - |tr(U^dagger V)| / 2 <= eps.
inline bool equal_up_to_phase(const Mat2& u, const Mat2& v, double eps) {
  return 1.0 - std::abs((u.adjoint() * v).trace()) / 2.0 <= eps;
}

/// Operator entries t_{j_out, i_in} for an assignment, read off a tail matrix.
template <class R>
std::array<Complex<R>, 4> operator_entries(const TailMatrix<R>& s, const PortAssignment& p) {
  const auto in0 = std::size_t(p.tail_index(Role::in0));
  const auto in1 = std::size_t(p.tail_index(Role::in1));
  const auto out0 = std::size_t(p.tail_index(Role::out0));
  const auto out1 = std::size_t(p.tail_index(Role::out1));
  return {s[out0][in0], s[out0][in1], s[out1][in0], s[out1][in1]};
}

/// The four quantities that must vanish: r_0in, t_{1in,0in}, r_1in, t_{0in,1in},
/// in the order they are examined.
template <class R>
std::array<R, 4> unitarity_residuals(const TailMatrix<R>& s, const PortAssignment& p) {
  using std::abs;
  const auto in0 = std::size_t(p.tail_index(Role::in0));
  const auto in1 = std::size_t(p.tail_index(Role::in1));
  return {R(abs(s[in0][in0])), R(abs(s[in1][in0])), R(abs(s[in1][in1])), R(abs(s[in0][in1]))};
}

struct GateCandidate {
  PortAssignment ports;
  Mat2 op;
};

/// Checks the no-reflection / no-cross-input conditions for the assignment.
/// The first input is examined before the second, mirroring a two-pass solve.
inline std::optional<GateCandidate> detect_gate(const TailMatrix<double>& s, const PortAssignment& p, double eps_gate) {
  const auto res = unitarity_residuals<double>(s, p);
  if (res[0] > eps_gate || res[1] > eps_gate) return std::nullopt;
  if (res[2] > eps_gate || res[3] > eps_gate) return std::nullopt;
  const auto e = operator_entries<double>(s, p);
  GateCandidate c{p, {{e[0], e[1], e[2], e[3]}}};
  if (unitarity_defect(c.op) > eps_gate) return std::nullopt;
  return c;
}

/// Same test from per-vertex solutions (as returned by solve_all_incoming).
inline std::optional<GateCandidate> detect_gate(const std::vector<ScatteringSolution<double>>& solutions,
                                                const PortAssignment& p, double eps_gate) {
  auto amplitude = [&](Role from, Role to) -> cplx {
    const Port in = p.port(from);
    const Port out = p.port(to);
    for (const auto& sol : solutions) {
      if (sol.incoming.vertex != in.vertex) continue;
      const cplx psi = sol.psi[std::size_t(out.vertex)];
      return (in == out) ? psi - 1.0 : psi;
    }
    throw std::out_of_range("detect_gate: missing solution for input vertex");
  };
  if (std::abs(amplitude(Role::in0, Role::in0)) > eps_gate || std::abs(amplitude(Role::in0, Role::in1)) > eps_gate)
    return std::nullopt;
  if (std::abs(amplitude(Role::in1, Role::in1)) > eps_gate || std::abs(amplitude(Role::in1, Role::in0)) > eps_gate)
    return std::nullopt;
  GateCandidate c{p,
                  {{amplitude(Role::in0, Role::out0), amplitude(Role::in1, Role::out0), amplitude(Role::in0, Role::out1),
                    amplitude(Role::in1, Role::out1)}}};
  if (unitarity_defect(c.op) > eps_gate) return std::nullopt;
  return c;
}

enum class GateKind { identity, rotation };

struct GateClass {
  Mat2 representative;  // first entry with |.| > 1e-6 made real positive
  GateKind kind = GateKind::identity;
  double theta = 0;  // polar angle of the axis, [0, pi/2]
  double phi = 0;    // azimuth, (-pi, pi]; [0, pi) on the equator
  double angle = 0;  // rotation angle, (-pi, pi]
  std::optional<Rational> angle_over_pi;

  std::string angle_form() const {
    if (kind == GateKind::identity) return "0";
    return angle_over_pi ? angle_over_pi->str() + "*pi" : "irrational-candidate";
  }

  /// Cartesian unit axis.
  std::array<double, 3> axis() const {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
  }
};

struct ClassifyTolerances {
  double eps_gate = 1e-9;
  long q_max = 64;
  double eps_rat = 1e-8;
};

inline Mat2 phase_fixed(const Mat2& u) {
  for (const cplx& z : u.a)
    if (std::abs(z) > 1e-6) return std::polar(1.0, -std::arg(z)) * u;
  return u;
}

class NonUnitaryGate : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Axis/angle form of U ~ cos(a/2) I - i sin(a/2) n.sigma, with the axis on
/// the upper hemisphere (n and -n with the angle negated are identified).
inline GateClass classify(const Mat2& op, const ClassifyTolerances& tol = {}) {
  if (unitarity_defect(op) > std::sqrt(tol.eps_gate)) throw NonUnitaryGate("classify: operator is not unitary");
  GateClass g;
  g.representative = phase_fixed(op);
  const cplx root = std::sqrt(op.det());
  const Mat2 su = (1.0 / root) * op;
  double c = su(0, 0).real() * 0.5 + su(1, 1).real() * 0.5;
  // n * sin(a/2) from the traceless part.
  double wx = -(su(0, 1).imag() + su(1, 0).imag()) / 2;
  double wy = (su(1, 0).real() - su(0, 1).real()) / 2;
  double wz = -(su(0, 0).imag() - su(1, 1).imag()) / 2;
  if (c < 0) {
    c = -c;
    wx = -wx;
    wy = -wy;
    wz = -wz;
  }
  const double s = std::sqrt(wx * wx + wy * wy + wz * wz);
  if (1.0 - std::min(1.0, std::abs(op.trace()) / 2.0) <= tol.eps_gate || s < 1e-12) {
    g.kind = GateKind::identity;
    g.angle_over_pi = Rational{0, 1};
    return g;
  }
  g.kind = GateKind::rotation;
  double angle = 2 * std::atan2(s, c);  // [0, pi]
  double nx = wx / s, ny = wy / s, nz = wz / s;
  constexpr double kEquator = 1e-9;
  if (std::abs(nz) <= kEquator) {
    nz = 0;
    double phi = std::atan2(ny, nx);
    if (phi < -kEquator || phi >= std::numbers::pi - kEquator) {  // phi = -0 from rounding is the +x side
      nx = -nx;
      ny = -ny;
      angle = -angle;
    }
  } else if (nz < 0) {
    nx = -nx;
    ny = -ny;
    nz = -nz;
    angle = -angle;
  }
  if (angle <= -std::numbers::pi + 1e-12) angle = std::numbers::pi;
  if (angle >= std::numbers::pi - 1e-12) angle = std::numbers::pi;
  g.angle = angle;
  if (std::hypot(nx, ny) <= kEquator) nx = ny = 0, nz = 1;
  g.theta = std::acos(std::clamp(nz, -1.0, 1.0));
  g.phi = (nx == 0 && ny == 0) ? 0.0 : std::atan2(ny, nx) + 0.0;
  if (nz == 0 && g.phi < 0) g.phi += std::numbers::pi;  // -0.0 corner
  if (nz == 0 && g.phi >= std::numbers::pi - kEquator) g.phi = 0.0;
  g.angle_over_pi = recognize_rational(g.angle / std::numbers::pi, tol.q_max, tol.eps_rat);
  return g;
}

/// Axes equal as lines through the origin.
inline bool parallel_axes(const GateClass& a, const GateClass& b, double eps = 1e-9) {
  const auto u = a.axis();
  const auto v = b.axis();
  return 1.0 - std::abs(u[0] * v[0] + u[1] * v[1] + u[2] * v[2]) <= eps;
}

}  // namespace gscat
