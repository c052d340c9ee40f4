#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "gscat/canon.hpp"
#include "gscat/enumerate.hpp"
#include "gscat/graph6.hpp"

using namespace gscat;

namespace {

Graph from_bits(int n, std::uint32_t bits) {
  Graph g(n);
  int b = 0;
  for (int v = 1; v < n; ++v)
    for (int u = 0; u < v; ++u, ++b)
      if ((bits >> b) & 1U) g.add_edge(u, v);
  return g;
}

std::uint32_t to_bits(const Graph& g) {
  std::uint32_t bits = 0;
  int b = 0;
  for (int v = 1; v < g.order(); ++v)
    for (int u = 0; u < v; ++u, ++b)
      if (g.has_edge(u, v)) bits |= 1U << b;
  return bits;
}

// minimum edge bitmask over all n! relabelings
std::uint32_t brute_canon(const Graph& g) {
  std::array<int, kMaxVertices> perm{};
  std::iota(perm.begin(), perm.begin() + g.order(), 0);
  std::uint32_t best = ~0U;
  do {
    best = std::min(best, to_bits(g.relabeled(perm)));
  } while (std::next_permutation(perm.begin(), perm.begin() + g.order()));
  return best;
}

}  // namespace

TEST(Graph6, KnownStrings) {
  EXPECT_EQ(write_graph6(Graph(1)), "@");
  EXPECT_EQ(write_graph6(Graph(2, std::vector<std::pair<int, int>>{{0, 1}})), "A_");
  EXPECT_EQ(write_graph6(Graph(3, std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}})), "Bw");
  // 5-cycle 0-1-2-3-4-0; upper triangle column-wise is 1010011001, padded to 12 bits
  EXPECT_EQ(write_graph6(Graph(5, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}})), "Dhc");
  const Graph p = parse_graph6("Dhc");
  EXPECT_EQ(p.edge_count(), 5);
  EXPECT_TRUE(p.has_edge(0, 4));
}

TEST(Graph6, RoundTripRandom) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + int(rng() % kMaxVertices);
    Graph g(n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng() & 1U) g.add_edge(u, v);
    EXPECT_EQ(parse_graph6(write_graph6(g)), g);
  }
}

TEST(Graph6, RejectsMalformed) {
  EXPECT_THROW(parse_graph6(""), Graph6Error);
  EXPECT_THROW(parse_graph6("A"), Graph6Error);       // missing edge byte
  EXPECT_THROW(parse_graph6("A_?"), Graph6Error);     // trailing byte
  EXPECT_THROW(parse_graph6("A\x7f"), Graph6Error);   // out of range
  EXPECT_THROW(parse_graph6("Aa"), Graph6Error);      // padding bits set
  EXPECT_THROW(parse_graph6("~??~"), Graph6Error);    // order beyond 12
}

TEST(Canon, MatchesBruteForceUpToSix) {
  for (int n = 1; n <= 6; ++n) {
    std::map<std::uint32_t, std::string> oracle_to_key;
    std::set<std::string> keys;
    const std::uint32_t total = 1U << (n * (n - 1) / 2);
    for (std::uint32_t bits = 0; bits < total; ++bits) {
      const Graph g = from_bits(n, bits);
      const std::string key = canonical_key(g).bytes();
      const auto [it, fresh] = oracle_to_key.emplace(brute_canon(g), key);
      if (!fresh) {
        ASSERT_EQ(it->second, key) << "n=" << n << " bits=" << bits;
      }
      keys.insert(key);
    }
    EXPECT_EQ(keys.size(), oracle_to_key.size()) << "n=" << n;
  }
}

TEST(Canon, ColouredKeysSeparateTailPlacements) {
  // path 0-1-2: tails on an end vs the middle differ, the two ends agree
  const Graph p(3, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
  const std::vector<int> end0{4, 0, 0}, end2{0, 0, 4}, mid{0, 4, 0};
  EXPECT_EQ(canonical_key(p, end0), canonical_key(p, end2));
  EXPECT_NE(canonical_key(p, end0), canonical_key(p, mid));
}

TEST(Enumerate, ClassCountsUpToSeven) {
  const std::vector<std::uint64_t> expected{1, 2, 4, 11, 34, 156, 1044};
  EXPECT_EQ(graph_counts(7), expected);
}

TEST(Enumerate, LevelsAreCanonicalAndDistinct) {
  for (int n = 1; n <= 6; ++n) {
    std::set<std::uint32_t> seen;
    for (const Graph& g : enumerate_graphs(n)) {
      EXPECT_EQ(canonical_form(g), g);
      EXPECT_TRUE(seen.insert(brute_canon(g)).second);
    }
  }
}

TEST(Enumerate, ThreadCountDoesNotChangeOrder) {
  const auto a = enumerate_graphs(7, 1);
  const auto b = enumerate_graphs(7, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}
