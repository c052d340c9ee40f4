#pragma once

// Non-isomorphic graph generation by canonical augmentation: each graph on
// n vertices is produced from exactly one parent on n - 1 vertices, namely
// the graph left after deleting its canonically last vertex. Duplicates can
// then only arise among siblings of one parent and are removed locally.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "gscat/canon.hpp"
#include "gscat/graph.hpp"

namespace gscat {

struct CanonicalGraph {
  AdjacencyCode code = 0;
  Graph graph;  // already in canonical form
};

namespace detail {

inline void augment(const CanonicalGraph& parent, std::vector<CanonicalGraph>& out) {
  const Graph& g = parent.graph;
  const int n = g.order() + 1;
  const int fresh = n - 1;
  const std::size_t first = out.size();
  for (unsigned mask = 0; mask < (1U << (n - 1)); ++mask) {
    const Graph child = g.with_vertex(VertexMask(mask));
    // The canonically last vertex lies in the last cell of the equitable
    // partition, whose vertices all have maximum degree.
    const int deg = child.degree(fresh);
    bool max_degree = true;
    for (int v = 0; v < fresh && max_degree; ++v) max_degree = child.degree(v) <= deg;
    if (!max_degree) continue;
    OrderedPartition root = unit_partition(child);
    refine(child, root);
    if (!((root.cells[root.size - 1] >> fresh) & 1U)) continue;

    const CanonicalLabeling lab = canonical_labeling(child);
    const int last = lab.order[n - 1];
    if (last != fresh) {
      bool same_orbit = false;
      for (const Labeling& gamma : lab.automorphisms) {
        if (gamma[fresh] == last) {
          same_orbit = true;
          break;
        }
      }
      if (!same_orbit) {
        const Graph reduced = child.without_vertex(last);
        if (canonical_labeling(reduced).code != parent.code) continue;
      }
    }
    out.push_back({lab.code, child.relabeled(lab.order)});
  }
  auto begin = out.begin() + std::ptrdiff_t(first);
  std::sort(begin, out.end(), [](const auto& a, const auto& b) { return a.code < b.code; });
  out.erase(std::unique(begin, out.end(), [](const auto& a, const auto& b) { return a.code == b.code; }), out.end());
}

inline std::vector<CanonicalGraph> next_level(const std::vector<CanonicalGraph>& parents, unsigned workers) {
  workers = std::max(1U, std::min<unsigned>(workers, unsigned(parents.size())));
  std::vector<std::vector<CanonicalGraph>> shards(workers);
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < parents.size(); i += workers) augment(parents[i], shards[w]);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::vector<CanonicalGraph> out;
  for (auto& s : shards) out.insert(out.end(), s.begin(), s.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.code < b.code; });
  return out;
}

}  // namespace detail

/// One canonical representative per isomorphism class on `n` vertices,
/// ordered by canonical key.
inline std::vector<CanonicalGraph> enumerate_canonical(int n, unsigned workers = 1) {
  if (n < 1 || n > kMaxVertices) throw std::out_of_range("enumerate_graphs: n must be in 1..12");
  std::vector<CanonicalGraph> level{{0, Graph(1)}};
  for (int m = 2; m <= n; ++m) level = detail::next_level(level, workers);
  return level;
}

inline std::vector<Graph> enumerate_graphs(int n, unsigned workers = 1) {
  std::vector<Graph> out;
  for (auto& c : enumerate_canonical(n, workers)) out.push_back(c.graph);
  return out;
}

/// Class counts N_1..N_n, generating each level once.
inline std::vector<std::uint64_t> graph_counts(int n_max, unsigned workers = 1) {
  if (n_max < 1 || n_max > kMaxVertices) throw std::out_of_range("graph_counts: n must be in 1..12");
  std::vector<std::uint64_t> counts{1};
  std::vector<CanonicalGraph> level{{0, Graph(1)}};
  for (int m = 2; m <= n_max; ++m) {
    level = detail::next_level(level, workers);
    counts.push_back(level.size());
  }
  return counts;
}

}  // namespace gscat
