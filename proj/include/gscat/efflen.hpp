#pragma once

// Effective length l = d/dk arg t for each transmitting (input, output) pair
// of a gate, computed by differentiating the linear system and cross-checked
// with a nine-point central difference of the unwrapped phase.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "gscat/gate.hpp"
#include "gscat/ports.hpp"
#include "gscat/scatter.hpp"

namespace gscat {

struct LengthTolerances {
  double eps_gate = 1e-9;   // |t| below this: path undefined
  double eps_len = 1e-6;    // path agreement, and analytic vs stencil
  double stencil_h = 1e-2;
  double stencil_h_min = 1e-5;  // halving floor when successive stencils disagree
};

struct PathLength {
  Role input = Role::in0;
  Role output = Role::out0;
  double analytic = 0;
  std::optional<double> stencil;  // empty when t vanishes on a node or k +- 4h leaves (0, pi)
  double stencil_step = 0;        // h of the accepted stencil
};

struct LengthReport {
  std::vector<PathLength> paths;
  double length = 0;     // mean of analytic path lengths
  double residual = 0;   // max pairwise spread of analytic lengths
  double stencil_gap = 0;  // max |analytic - stencil| over paths with a stencil value
  bool stencil_complete = false;
};

/// Im(t'/t) for transmission into the tail at `out` from a wave incoming on
/// the tail at `in`. Throws std::domain_error when |t| <= eps.
template <class R>
R analytic_length(const ScatteringSystem<R>& s, Port in, Port out, double eps = 0) {
  using std::abs;
  using std::imag;
  const auto psi = s.amplitudes(in.vertex);
  const auto dpsi = s.amplitude_derivative(in.vertex, psi);
  const auto t = psi[std::size_t(out.vertex)];
  if (in.vertex == out.vertex && in.slot == out.slot) throw std::invalid_argument("analytic_length: reflection path");
  if (!(R(abs(t)) > R(eps))) throw std::domain_error("analytic_length: vanishing transmission");
  return R(imag(dpsi[std::size_t(out.vertex)] / t));
}

namespace detail {

inline constexpr std::array<double, 9> kStencil = {1.0 / 280, -4.0 / 105, 1.0 / 5,  -4.0 / 5, 0.0,
                                                   4.0 / 5,   -1.0 / 5,   4.0 / 105, -1.0 / 280};

}  // namespace detail

/// Nine-point central difference of arg t around k, with nearest-2pi
/// continuation from the centre outwards.
inline std::optional<double> stencil_length(const Graph& g, const TailMultiset& m, Port in, Port out, double k,
                                            double h, double eps = 1e-9) {
  if (k - 4 * h <= 0 || k + 4 * h >= std::numbers::pi) return std::nullopt;
  std::array<double, 9> phase{};
  for (int j = 0; j < 9; ++j) {
    const ScatteringSystem<double> sys(g, m, k + (j - 4) * h);
    const auto psi = sys.amplitudes(in.vertex);
    const cplx t = psi[std::size_t(out.vertex)];
    if (std::abs(t) <= eps) return std::nullopt;
    phase[std::size_t(j)] = std::arg(t);
  }
  auto unwrap = [&](int from, int to) {
    const double d = phase[std::size_t(to)] - phase[std::size_t(from)];
    phase[std::size_t(to)] -= 2 * std::numbers::pi * std::nearbyint(d / (2 * std::numbers::pi));
  };
  for (int j = 5; j < 9; ++j) unwrap(j - 1, j);
  for (int j = 3; j >= 0; --j) unwrap(j + 1, j);
  double acc = 0;
  for (int j = 0; j < 9; ++j) acc += detail::kStencil[std::size_t(j)] * phase[std::size_t(j)];
  return acc / h;
}

struct StencilEstimate {
  double value = 0;
  double h = 0;
  bool converged = false;
};

/// Stencil at h, h/2, h/4, ... until two successive estimates agree within
/// `agree` or h drops below h_min. Near a resonance arg t bends on a scale
/// well below 1e-2 and the fixed-step value is off by O(1).
inline std::optional<StencilEstimate> refined_stencil_length(const Graph& g, const TailMultiset& m, Port in, Port out,
                                                             double k, double h, double h_min, double agree,
                                                             double eps = 1e-9) {
  auto prev = stencil_length(g, m, in, out, k, h, eps);
  if (!prev) return std::nullopt;
  StencilEstimate est{*prev, h, false};
  while (est.h / 2 >= h_min) {
    const auto next = stencil_length(g, m, in, out, k, est.h / 2, eps);
    if (!next) break;
    const double change = std::abs(*next - est.value);
    est = {*next, est.h / 2, change <= agree};
    if (est.converged) break;
  }
  return est;
}

/// Per-configuration path lengths, computed on demand and cached by
/// (input vertex, output vertex).
class PathLengths {
 public:
  PathLengths(const ScatteringSystem<double>& sys, const TailMultiset& m, double k, const LengthTolerances& tol = {},
              bool with_stencil = true)
      : sys_(sys), m_(m), k_(k), tol_(tol), stencil_(with_stencil) {}

  /// Empty when |t| <= eps_gate on this path.
  std::optional<PathLength> path(Port in, Port out) {
    auto& slot = cache_[std::size_t(in.vertex)][std::size_t(out.vertex)];
    if (!slot.done) {
      slot.done = true;
      auto& amp = amplitudes_[std::size_t(in.vertex)];
      if (amp.psi.empty()) {
        amp.psi = sys_.amplitudes(in.vertex);
        amp.dpsi = sys_.amplitude_derivative(in.vertex, amp.psi);
      }
      const cplx t = amp.psi[std::size_t(out.vertex)];
      if (std::abs(t) > tol_.eps_gate) {
        PathLength p;
        p.analytic = std::imag(amp.dpsi[std::size_t(out.vertex)] / t);
        if (stencil_) {
          const auto st = refined_stencil_length(sys_.graph(), m_, in, out, k_, tol_.stencil_h, tol_.stencil_h_min,
                                                 tol_.eps_len / 10, tol_.eps_gate);
          if (st) {
            p.stencil = st->value;
            p.stencil_step = st->h;
          }
        }
        slot.value = p;
      }
    }
    return slot.value;
  }

  /// Lengths over every (input, output) pair of the gate with |O_ji| > eps_gate.
  /// Empty when the defined paths disagree by more than eps_len.
  std::optional<LengthReport> consensus(const GateCandidate& gate) {
    LengthReport rep;
    const std::array<Role, 2> ins = {Role::in0, Role::in1};
    const std::array<Role, 2> outs = {Role::out0, Role::out1};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        if (std::abs(gate.op(j, i)) <= tol_.eps_gate) continue;
        auto p = path(gate.ports.port(ins[std::size_t(i)]), gate.ports.port(outs[std::size_t(j)]));
        if (!p) continue;
        p->input = ins[std::size_t(i)];
        p->output = outs[std::size_t(j)];
        rep.paths.push_back(*p);
      }
    if (rep.paths.empty()) return std::nullopt;
    double lo = rep.paths.front().analytic;
    double hi = lo;
    double sum = 0;
    rep.stencil_complete = stencil_;
    for (const auto& p : rep.paths) {
      lo = std::min(lo, p.analytic);
      hi = std::max(hi, p.analytic);
      sum += p.analytic;
      if (p.stencil)
        rep.stencil_gap = std::max(rep.stencil_gap, std::abs(*p.stencil - p.analytic));
      else
        rep.stencil_complete = false;
    }
    rep.residual = hi - lo;
    if (rep.residual > tol_.eps_len) return std::nullopt;
    rep.length = sum / double(rep.paths.size());
    return rep;
  }

 private:
  struct Slot {
    bool done = false;
    std::optional<PathLength> value;
  };
  struct Amplitudes {
    std::vector<cplx> psi, dpsi;
  };

  const ScatteringSystem<double>& sys_;
  const TailMultiset& m_;
  double k_;
  LengthTolerances tol_;
  bool stencil_;
  std::array<std::array<Slot, kMaxVertices>, kMaxVertices> cache_{};
  std::array<Amplitudes, kMaxVertices> amplitudes_{};
};

inline std::optional<LengthReport> consensus(const ScatteringSystem<double>& sys, const TailMultiset& m,
                                             const GateCandidate& gate, double k, const LengthTolerances& tol = {},
                                             bool with_stencil = true) {
  PathLengths paths(sys, m, k, tol, with_stencil);
  return paths.consensus(gate);
}

}  // namespace gscat
