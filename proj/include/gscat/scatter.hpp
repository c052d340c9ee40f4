#pragma once

// Stationary scattering off a finite graph with four semi-infinite tails.
//
// With H = -A and a plane wave e^{-ikj} incoming on one tail of vertex v, the
// amplitudes psi on the graph vertices solve
//
//   (A - 2 cos k + e^{ik} diag(M)) psi = 2i sin k e_v,
//
// after which the reflection on the incoming tail is psi_v - 1 and the
// transmission into any other tail attached at v' is psi_{v'}.
//
// Components of the graph that carry no tail decouple from the scattering
// state; their amplitudes are identically zero and they are left out of the
// factorized system.

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gscat/graph.hpp"
#include "gscat/lu.hpp"
#include "gscat/ports.hpp"
#include "gscat/scalar.hpp"

namespace gscat {

template <class R>
struct ScatteringSolution {
  using C = Complex<R>;

  Port incoming;
  std::vector<C> psi;  // amplitudes on all graph vertices
  C reflection;
  std::vector<std::pair<Port, C>> transmissions;  // every other tail

  /// |r|^2 + sum |t|^2 - 1.
  R flux_residual() const {
    using std::norm;
    R total = R(norm(reflection));
    for (const auto& t : transmissions) total += R(norm(t.second));
    return total - R(1);
  }

  C transmission_to(Port p) const {
    for (const auto& t : transmissions)
      if (t.first == p) return t.second;
    throw std::out_of_range("ScatteringSolution: no such tail");
  }
};

/// Scattering matrix over the four tails in TailMultiset::tail_vertices()
/// order: s[out][in], with reflections on the diagonal.
template <class R>
using TailMatrix = std::array<std::array<Complex<R>, kTails>, kTails>;

template <class R = double>
class ScatteringSystem {
 public:
  using C = Complex<R>;

  ScatteringSystem(const Graph& g, const TailMultiset& m, R k) : graph_(g), k_(k) {
    using std::cos;
    using std::sin;
    if (m.order() != g.order()) throw std::invalid_argument("ScatteringSystem: multiset size differs from graph order");
    const int n = g.order();
    cos_k_ = cos(k);
    sin_k_ = sin(k);
    phase_ = ScalarTraits<R>::polar(R(1), k);
    VertexMask tailed = 0;
    for (int v = 0; v < n; ++v) {
      counts_[std::size_t(v)] = m.count(v);
      if (m.count(v) > 0) tailed |= VertexMask(1U << v);
    }
    VertexMask active = 0;
    for (VertexMask comp : g.components())
      if (comp & tailed) active |= comp;
    local_.fill(-1);
    for (int v = 0; v < n; ++v)
      if ((active >> v) & 1U) {
        local_[std::size_t(v)] = nactive_;
        active_[std::size_t(nactive_++)] = v;
      }
    SquareMatrix<C> local(nactive_);
    for (int i = 0; i < nactive_; ++i) {
      const int vi = active_[std::size_t(i)];
      for (int j = 0; j < nactive_; ++j)
        if (g.has_edge(vi, active_[std::size_t(j)])) local(i, j) = C(1);
      local(i, i) = diagonal(vi);
    }
    lu_ = LuFactorization<R>(local);
    if (lu_.rank_deficient()) null_ = lu_.null_space();
  }

  const Graph& graph() const { return graph_; }
  R momentum() const { return k_; }
  int count(int v) const { return counts_[std::size_t(v)]; }

  /// True when the matrix is singular on the tailed components (a bound
  /// state with no weight on the attachment vertices); solves still succeed.
  bool bound_state() const { return lu_.rank_deficient(); }

  /// M(k) over all n vertices.
  SquareMatrix<C> matrix() const {
    const int n = graph_.order();
    SquareMatrix<C> out(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j)
        if (graph_.has_edge(i, j)) out(i, j) = C(1);
      out(i, i) = diagonal(i);
    }
    return out;
  }

  /// Graph amplitudes for a wave incoming on a tail at `v`; `psi` has n entries.
  void amplitudes(int v, std::span<C> psi) const {
    std::array<C, kMaxVertices> b{};
    std::array<C, kMaxVertices> x{};
    check_tail_vertex(v);
    b[std::size_t(local_[std::size_t(v)])] = C(R(0), R(2) * sin_k_);
    lu_.solve(std::span<const C>(b.data(), std::size_t(nactive_)), std::span<C>(x.data(), std::size_t(nactive_)));
    project_out_null(x);
    scatter_back(x, psi);
  }

  std::vector<C> amplitudes(int v) const {
    std::vector<C> psi(std::size_t(graph_.order()));
    amplitudes(v, psi);
    return psi;
  }

  /// d psi / dk for the incoming vertex `v`, given psi at this k.
  void amplitude_derivative(int v, std::span<const C> psi, std::span<C> dpsi) const {
    check_tail_vertex(v);
    std::array<C, kMaxVertices> rhs{};
    std::array<C, kMaxVertices> x{};
    const C i_phase = C(R(0), R(1)) * phase_;
    for (int i = 0; i < nactive_; ++i) {
      const int vi = active_[std::size_t(i)];
      const C dm = C(R(2) * sin_k_) + i_phase * R(counts_[std::size_t(vi)]);
      rhs[std::size_t(i)] = -dm * psi[std::size_t(vi)];
    }
    rhs[std::size_t(local_[std::size_t(v)])] += C(R(0), R(2) * cos_k_);
    lu_.solve(std::span<const C>(rhs.data(), std::size_t(nactive_)), std::span<C>(x.data(), std::size_t(nactive_)));
    // second-order consistency gives u^T psi' = 0 as well
    project_out_null(x);
    scatter_back(x, dpsi);
  }

  std::vector<C> amplitude_derivative(int v, const std::vector<C>& psi) const {
    std::vector<C> out(std::size_t(graph_.order()));
    amplitude_derivative(v, psi, out);
    return out;
  }

  ScatteringSolution<R> solve_incoming(Port port) const {
    if (port.vertex < 0 || port.vertex >= graph_.order() || port.slot < 0 || port.slot >= count(port.vertex))
      throw std::out_of_range("solve_incoming: no such tail");
    return solution_from(port, amplitudes(port.vertex));
  }

  /// One solve per distinct attachment vertex, ascending; the solution is
  /// reported for slot 0 and is the same for every tail on that vertex.
  std::vector<ScatteringSolution<R>> solve_all_incoming() const {
    std::vector<ScatteringSolution<R>> out;
    for (int v = 0; v < graph_.order(); ++v)
      if (count(v) > 0) out.push_back(solution_from({v, 0}, amplitudes(v)));
    return out;
  }

  /// Full 4x4 tail scattering matrix from one solve per attachment vertex.
  TailMatrix<R> tail_matrix() const {
    std::array<int, kTails> tv{};
    int t = 0;
    for (int v = 0; v < graph_.order(); ++v)
      for (int s = 0; s < count(v); ++s) tv[std::size_t(t++)] = v;
    TailMatrix<R> s{};
    std::array<C, kMaxVertices> psi{};
    for (int a = 0; a < kTails; ++a) {
      if (a > 0 && tv[std::size_t(a)] == tv[std::size_t(a - 1)]) {
        for (int b = 0; b < kTails; ++b) s[std::size_t(b)][std::size_t(a)] = s[std::size_t(b)][std::size_t(a - 1)];
        // Column a-1 had its reflection on row a-1; move it to row a.
        std::swap(s[std::size_t(a)][std::size_t(a)], s[std::size_t(a - 1)][std::size_t(a)]);
        continue;
      }
      amplitudes(tv[std::size_t(a)], std::span<C>(psi.data(), std::size_t(graph_.order())));
      for (int b = 0; b < kTails; ++b) s[std::size_t(b)][std::size_t(a)] = psi[std::size_t(tv[std::size_t(b)])];
      s[std::size_t(a)][std::size_t(a)] -= C(1);
    }
    return s;
  }

 private:
  // With a bound state psi is fixed only up to null vectors u (which vanish on
  // the tails). The continuous-in-k solution has u^T psi = 0 for every u; only
  // then is the derivative system consistent.
  void project_out_null(std::array<C, kMaxVertices>& x) const {
    const std::size_t d = null_.size();
    if (d == 0) return;
    auto dot = [&](const std::array<C, kMaxVertices>& a, const std::array<C, kMaxVertices>& b) {
      C acc(0);
      for (int i = 0; i < nactive_; ++i) acc += a[std::size_t(i)] * b[std::size_t(i)];
      return acc;
    };
    SquareMatrix<C> gram(static_cast<int>(d));
    std::array<C, kMaxVertices> rhs{}, c{};
    for (std::size_t i = 0; i < d; ++i) {
      rhs[i] = dot(null_[i], x);
      for (std::size_t j = 0; j < d; ++j) gram(int(i), int(j)) = dot(null_[i], null_[j]);
    }
    LuFactorization<R>(gram).solve(std::span<const C>(rhs.data(), d), std::span<C>(c.data(), d));
    for (std::size_t i = 0; i < d; ++i)
      for (int v = 0; v < nactive_; ++v) x[std::size_t(v)] -= c[i] * null_[i][std::size_t(v)];
  }

  C diagonal(int v) const { return C(R(-2) * cos_k_) + phase_ * R(counts_[std::size_t(v)]); }

  void check_tail_vertex(int v) const {
    if (v < 0 || v >= graph_.order() || counts_[std::size_t(v)] == 0)
      throw std::out_of_range("ScatteringSystem: no tail at vertex");
  }

  void scatter_back(const std::array<C, kMaxVertices>& x, std::span<C> out) const {
    for (int v = 0; v < graph_.order(); ++v) {
      const int l = local_[std::size_t(v)];
      out[std::size_t(v)] = l < 0 ? C(0) : x[std::size_t(l)];
    }
  }

  ScatteringSolution<R> solution_from(Port port, std::vector<C> psi) const {
    ScatteringSolution<R> sol;
    sol.incoming = port;
    sol.reflection = psi[std::size_t(port.vertex)] - C(1);
    for (int v = 0; v < graph_.order(); ++v)
      for (int s = 0; s < count(v); ++s)
        if (!(v == port.vertex && s == port.slot)) sol.transmissions.emplace_back(Port{v, s}, psi[std::size_t(v)]);
    sol.psi = std::move(psi);
    return sol;
  }

  Graph graph_;
  R k_;
  R cos_k_{};
  R sin_k_{};
  C phase_{};
  std::array<int, kMaxVertices> counts_{};
  std::array<int, kMaxVertices> local_{};
  std::array<int, kMaxVertices> active_{};
  int nactive_ = 0;
  LuFactorization<R> lu_;
  std::vector<std::array<C, kMaxVertices>> null_;
};

}  // namespace gscat
