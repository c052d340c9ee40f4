#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <numbers>
#include <random>

#include "gscat/enumerate.hpp"
#include "gscat/scatter.hpp"

using namespace gscat;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

Graph random_graph(std::mt19937& rng, int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng() & 1U) g.add_edge(u, v);
  return g;
}

TailMultiset random_multiset(std::mt19937& rng, int n) {
  std::vector<int> c(std::size_t(n), 0);
  for (int t = 0; t < kTails; ++t) ++c[rng() % unsigned(n)];
  return TailMultiset(c);
}

double max_abs_diff(const TailMatrix<double>& a, const TailMatrix<double>& b) {
  double d = 0;
  for (int i = 0; i < kTails; ++i)
    for (int j = 0; j < kTails; ++j) d = std::max(d, std::abs(a[i][j] - b[i][j]));
  return d;
}

}  // namespace

TEST(Scatter, LoneVertexClosedForm) {
  for (int m = 1; m <= 4; ++m) {
    std::vector<int> c{m};
    if (m < 4) c.push_back(4 - m);
    const Graph g(int(c.size()));
    for (double k : {0.3, 1.0, kPi / 2, 2.9}) {
      const ScatteringSystem<double> s(g, TailMultiset(c), k);
      const cd psi = cd(0, 2 * std::sin(k)) / (double(m) * std::polar(1.0, k) - 2 * std::cos(k));
      EXPECT_NEAR(std::abs(s.solve_incoming({0, 0}).reflection - (psi - 1.0)), 0, 1e-14);
    }
  }
  // four tails at k = pi/2: r = -1/2
  const ScatteringSystem<double> s(Graph(1), TailMultiset({4}), kPi / 2);
  EXPECT_NEAR(std::abs(s.solve_incoming({0, 0}).reflection - cd(-0.5, 0)), 0, 1e-15);
}

TEST(Scatter, TwoTailsOnOneVertexIsAWire) {
  const ScatteringSystem<double> s(Graph(2), TailMultiset({2, 2}), 1.0);
  const auto sol = s.solve_incoming({0, 0});
  EXPECT_NEAR(std::abs(sol.reflection), 0, 1e-15);
  EXPECT_NEAR(std::abs(sol.transmission_to({0, 1}) - 1.0), 0, 1e-15);
  EXPECT_NEAR(std::abs(sol.transmission_to({1, 0})), 0, 1e-15);
}

TEST(Scatter, FluxUnitarityAndReciprocityOnRandomConfigurations) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> kd(1e-3, kPi - 1e-3);
  double worst_flux = 0, worst_unitary = 0, worst_sym = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 1 + int(rng() % 9);
    const Graph g = random_graph(rng, n);
    const TailMultiset m = random_multiset(rng, n);
    const ScatteringSystem<double> s(g, m, kd(rng));
    for (const auto& sol : s.solve_all_incoming()) worst_flux = std::max(worst_flux, std::abs(sol.flux_residual()));
    const auto t = s.tail_matrix();
    for (int i = 0; i < kTails; ++i)
      for (int j = 0; j < kTails; ++j) {
        cd acc = 0;
        for (int b = 0; b < kTails; ++b) acc += std::conj(t[b][i]) * t[b][j];
        worst_unitary = std::max(worst_unitary, std::abs(acc - (i == j ? 1.0 : 0.0)));
        worst_sym = std::max(worst_sym, std::abs(t[i][j] - t[j][i]));
      }
  }
  EXPECT_LE(worst_flux, 1e-9);
  EXPECT_LE(worst_unitary, 1e-9);
  EXPECT_LE(worst_sym, 1e-9);
}

TEST(Scatter, NegatingMomentumConjugates) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> kd(0.05, kPi - 0.05);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + int(rng() % 8);
    const Graph g = random_graph(rng, n);
    const TailMultiset m = random_multiset(rng, n);
    const double k = kd(rng);
    auto plus = ScatteringSystem<double>(g, m, k).tail_matrix();
    const auto minus = ScatteringSystem<double>(g, m, -k).tail_matrix();
    for (auto& row : plus)
      for (auto& z : row) z = std::conj(z);
    ASSERT_LE(max_abs_diff(plus, minus), 1e-10) << write_graph6(g) << " k=" << k;
  }
}

TEST(Scatter, MatchesDenseInverseOnAllSmallConfigurations) {
  const double k = kPi / 3;
  std::size_t compared = 0, skipped = 0;
  double worst = 0;
  for (int n = 1; n <= 5; ++n)
    for (const Graph& g : enumerate_graphs(n))
      for (const TailMultiset& m : enumerate_multisets(n)) {
        const ScatteringSystem<double> s(g, m, k);
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j)
            if (g.has_edge(i, j)) M(i, j) = 1;
          M(i, i) = -2 * std::cos(k) + double(m.count(i)) * std::polar(1.0, k);
        }
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
        if (!lu.isInvertible()) {
          ++skipped;
          continue;
        }
        const Eigen::MatrixXcd inv = lu.inverse();
        for (int v = 0; v < n; ++v) {
          if (m.count(v) == 0) continue;
          const auto psi = s.amplitudes(v);
          for (int u = 0; u < n; ++u) worst = std::max(worst, std::abs(psi[u] - inv(u, v) * cd(0, 2 * std::sin(k))));
        }
        ++compared;
      }
  EXPECT_LE(worst, 1e-12);
  EXPECT_GT(compared, 10 * skipped);
}

// Star with both leaves on the centre's only neighbourhood: at k = pi/2 the
// leaves carry a bound state (1, -1) that vanishes on the tailed centre.
TEST(Scatter, BoundStateIsProjectedOut) {
  const Graph g(3, std::vector<std::pair<int, int>>{{0, 1}, {0, 2}});
  const TailMultiset m({4, 0, 0});
  const ScatteringSystem<double> s(g, m, kPi / 2);
  EXPECT_TRUE(s.bound_state());
  const auto psi = s.amplitudes(0);
  EXPECT_NEAR(std::abs(psi[1] - psi[2]), 0, 1e-14);
  EXPECT_NEAR(std::abs(s.solve_incoming({0, 0}).flux_residual()), 0, 1e-12);
  std::vector<cd> dpsi;
  ASSERT_NO_THROW(dpsi = s.amplitude_derivative(0, psi));
  // derivative of the continuous solution
  const double h = 1e-5;
  const cd up = ScatteringSystem<double>(g, m, kPi / 2 + h).amplitudes(0)[0];
  const cd down = ScatteringSystem<double>(g, m, kPi / 2 - h).amplitudes(0)[0];
  EXPECT_NEAR(std::abs(dpsi[0] - (up - down) / (2 * h)), 0, 1e-8);
  EXPECT_NEAR(std::abs(dpsi[1] - dpsi[2]), 0, 1e-12);
}

TEST(Scatter, TailFreeComponentsAreIgnored) {
  // a triangle with no tails next to a wire: the wire's S is unaffected
  const Graph g(5, std::vector<std::pair<int, int>>{{2, 3}, {3, 4}, {2, 4}});
  const ScatteringSystem<double> s(g, TailMultiset({2, 2, 0, 0, 0}), 2 * kPi / 3);
  const auto t = s.tail_matrix();
  EXPECT_NEAR(std::abs(t[1][0] - 1.0), 0, 1e-14);
  EXPECT_NEAR(std::abs(t[3][2] - 1.0), 0, 1e-14);
}

TEST(Scatter, RejectsMissingTail) {
  const ScatteringSystem<double> s(Graph(2), TailMultiset({4, 0}), 1.0);
  EXPECT_THROW(s.amplitudes(1), std::out_of_range);
  EXPECT_THROW(s.solve_incoming({0, 4}), std::out_of_range);
  EXPECT_THROW(ScatteringSystem<double>(Graph(3), TailMultiset({4, 0}), 1.0), std::invalid_argument);
}
