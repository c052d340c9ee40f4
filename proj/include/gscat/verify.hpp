#pragma once

// Independent re-solve of catalogued witnesses, in double or 113-bit
// precision, plus closed-form recognition of lengths from the 113-bit values.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gscat/catalog.hpp"
#include "gscat/efflen.hpp"
#include "gscat/gate.hpp"
#include "gscat/graph6.hpp"
#include "gscat/precision.hpp"
#include "gscat/recognize.hpp"
#include "gscat/scatter.hpp"

namespace gscat {

template <class R>
struct WitnessSolve {
  TailMatrix<R> s{};
  std::array<Complex<R>, 4> op{};   // (out0,in0), (out0,in1), (out1,in0), (out1,in1)
  std::array<R, 4> zeros{};         // the four quantities that must vanish
  std::vector<R> lengths;           // analytic lengths over transmitting paths
  R scale{};                        // max |S_ij|
};

template <class R>
WitnessSolve<R> resolve_witness(const Witness& w, const Momentum& k, double eps_path = 1e-9) {
  using std::abs;
  const Graph g = parse_graph6(w.graph6);
  const PortAssignment pa(w.vertices);
  const TailMultiset m = pa.multiset(g.order());
  const ScatteringSystem<R> sys(g, m, momentum_value<R>(k));
  WitnessSolve<R> out;
  out.s = sys.tail_matrix();
  out.op = operator_entries<R>(out.s, pa);
  out.zeros = unitarity_residuals<R>(out.s, pa);
  out.scale = R(0);
  for (const auto& row : out.s)
    for (const auto& z : row) out.scale = std::max(out.scale, R(abs(z)));
  const std::array<Role, 2> ins = {Role::in0, Role::in1};
  const std::array<Role, 2> outs = {Role::out0, Role::out1};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      if (!(R(abs(out.op[std::size_t(2 * j + i)])) > R(eps_path))) continue;
      out.lengths.push_back(analytic_length(sys, pa.port(ins[std::size_t(i)]), pa.port(outs[std::size_t(j)])));
    }
  return out;
}

inline Mat2 to_mat2(const std::array<quad_complex, 4>& op) {
  Mat2 m;
  for (std::size_t i = 0; i < 4; ++i) m.a[i] = cplx(static_cast<double>(op[i].real()), static_cast<double>(op[i].imag()));
  return m;
}

inline Mat2 to_mat2(const std::array<cplx, 4>& op) { return {op}; }

/// |rotation angle| in [0, pi] of a 2x2 unitary, in the operator's precision.
template <class C>
auto rotation_magnitude(const std::array<C, 4>& op) {
  using std::abs;
  using std::atan2;
  using std::sqrt;
  const C det = op[0] * op[3] - op[1] * op[2];
  const C root = sqrt(det);
  std::array<C, 4> su;
  for (std::size_t i = 0; i < 4; ++i) su[i] = op[i] / root;
  const auto c = abs(real(su[0]) + real(su[3])) / 2;
  const auto wx = (imag(su[1]) + imag(su[2])) / 2;
  const auto wy = (real(su[2]) - real(su[1])) / 2;
  const auto wz = (imag(su[0]) - imag(su[3])) / 2;
  return 2 * atan2(sqrt(wx * wx + wy * wy + wz * wz), c);
}

/// Effective length of an entry's smallest witness at 113 bits.
inline quad witness_length_quad(const CatalogEntry& e) {
  const auto sol = resolve_witness<quad>(e.witness, e.momentum);
  if (sol.lengths.empty()) throw std::runtime_error("witness has no transmitting path");
  quad sum = 0;
  for (const quad& l : sol.lengths) sum += l;
  return sum / quad(sol.lengths.size());
}

/// Attaches a quadratic-surd closed form to every entry whose 113-bit length
/// satisfies a small integer relation.
inline void attach_length_forms(Catalog& cat, long coeff_bound, double eps_surd) {
  for (CatalogEntry& e : cat.entries()) e.length_form = recognize_quadratic_surd(witness_length_quad(e), coeff_bound, eps_surd);
}

struct VerifyTolerances {
  double zero_extended = 1e-20;  // scaled, 113-bit re-solve
  double zero_double = 1e-9;
  double matrix = 1e-12;         // 1 - |tr(U^dagger V)|/2
  double length = 1e-9;          // relative to max(1, |l|)
  double angle = 1e-9;
  double identity = 1e-9;        // same threshold as classify
};

struct EntryCheck {
  std::size_t id = 0;
  bool ok = true;
  std::string reason;
  double max_zero = 0;
  double length = 0;
};

template <class R>
EntryCheck check_entry(const CatalogEntry& e, std::size_t id, double zero_tol, const VerifyTolerances& tol) {
  EntryCheck c;
  c.id = id;
  auto fail = [&](std::string why) {
    if (c.ok) c.reason = std::move(why);
    c.ok = false;
  };
  WitnessSolve<R> sol;
  try {
    sol = resolve_witness<R>(e.witness, e.momentum);
  } catch (const std::exception& ex) {
    fail(std::string("re-solve failed: ") + ex.what());
    return c;
  }
  const R scale = std::max(sol.scale, R(1));
  R worst = R(0);
  for (const R& z : sol.zeros) worst = std::max(worst, R(z / scale));
  c.max_zero = static_cast<double>(worst);
  if (c.max_zero > zero_tol) fail("unitarity zeros not confirmed");
  const Mat2 op = to_mat2(sol.op);
  if (!equal_up_to_phase(op, e.gate.representative, tol.matrix)) fail("operator differs from recorded matrix");
  if (sol.lengths.empty()) {
    fail("no transmitting path");
  } else {
    R lo = sol.lengths.front(), hi = lo, sum = R(0);
    for (const R& l : sol.lengths) {
      lo = std::min(lo, l);
      hi = std::max(hi, l);
      sum += l;
    }
    c.length = static_cast<double>(R(sum / R(sol.lengths.size())));
    const double bound = tol.length * std::max(1.0, std::abs(e.length));
    if (static_cast<double>(R(hi - lo)) > bound) fail("path lengths disagree");
    if (std::abs(c.length - e.length) > bound) fail("length differs from recorded value");
  }
  if (e.length_form && std::abs(e.length_form->value() - e.length) > tol.length * std::max(1.0, std::abs(e.length)))
    fail("closed form does not match length");
  const double mag = static_cast<double>(rotation_magnitude(sol.op));
  if (std::abs(mag - std::abs(e.gate.angle)) > tol.angle) fail("rotation angle differs");
  if ((e.gate.kind == GateKind::identity) != (1.0 - std::cos(mag / 2) <= tol.identity)) fail("identity classification differs");
  return c;
}

/// Re-solves every entry's smallest witness. `extended` switches to 113-bit
/// arithmetic with the tight zero threshold.
inline std::vector<EntryCheck> verify_catalog(const Catalog& cat, bool extended, const VerifyTolerances& tol = {}) {
  std::vector<EntryCheck> out;
  for (std::size_t i = 0; i < cat.size(); ++i) {
    const CatalogEntry& e = cat.entries()[i];
    out.push_back(extended ? check_entry<quad>(e, i, tol.zero_extended, tol)
                           : check_entry<double>(e, i, tol.zero_double, tol));
  }
  return out;
}

}  // namespace gscat
