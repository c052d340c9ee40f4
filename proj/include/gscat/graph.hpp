#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gscat {

inline constexpr int kMaxVertices = 12;

using VertexMask = std::uint16_t;

/// Simple undirected graph on at most kMaxVertices vertices.
///
/// Adjacency is held as one neighbour bitmask per vertex; the upper-triangle
/// bit sequence used by graph6 and by the canonical key is derived from it.
class Graph {
 public:
  Graph() = default;

  explicit Graph(int n) : n_(n) {
    if (n < 1 || n > kMaxVertices) {
      throw std::out_of_range("Graph: vertex count must be in 1..12");
    }
  }

  Graph(int n, std::span<const std::pair<int, int>> edges) : Graph(n) {
    for (auto [u, v] : edges) add_edge(u, v);
  }

  Graph(int n, std::initializer_list<std::pair<int, int>> edges)
      : Graph(n, std::span<const std::pair<int, int>>(edges.begin(), edges.size())) {}

  int order() const { return n_; }

  bool has_edge(int u, int v) const { return (rows_[u] >> v) & 1U; }

  void add_edge(int u, int v) {
    check_pair(u, v);
    rows_[u] |= VertexMask(1U << v);
    rows_[v] |= VertexMask(1U << u);
  }

  void remove_edge(int u, int v) {
    check_pair(u, v);
    rows_[u] &= VertexMask(~(1U << v));
    rows_[v] &= VertexMask(~(1U << u));
  }

  VertexMask neighbours(int v) const { return rows_[v]; }
  int degree(int v) const { return std::popcount(rows_[v]); }

  int edge_count() const {
    int twice = 0;
    for (int v = 0; v < n_; ++v) twice += degree(v);
    return twice / 2;
  }

  VertexMask all_vertices() const { return VertexMask((1U << n_) - 1U); }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int v = 1; v < n_; ++v)
      for (int u = 0; u < v; ++u)
        if (has_edge(u, v)) out.emplace_back(u, v);
    return out;
  }

  /// Graph with vertex `perm[i]` of this graph renamed to `i`.
  template <class Perm>
  Graph relabeled(const Perm& perm) const {
    Graph h(n_);
    for (int i = 0; i < n_; ++i) {
      VertexMask row = 0;
      for (int j = 0; j < n_; ++j)
        if (has_edge(perm[i], perm[j])) row |= VertexMask(1U << j);
      h.rows_[i] = row;
    }
    return h;
  }

  /// Copy with one extra vertex adjacent to `mask`.
  Graph with_vertex(VertexMask mask) const {
    Graph h(n_ + 1);
    for (int v = 0; v < n_; ++v) {
      h.rows_[v] = rows_[v];
      if ((mask >> v) & 1U) h.rows_[v] |= VertexMask(1U << n_);
    }
    h.rows_[n_] = mask;
    return h;
  }

  /// Copy with vertex `v` deleted; later vertices shift down by one.
  Graph without_vertex(int v) const {
    Graph h(n_ - 1);
    int a = 0;
    for (int i = 0; i < n_; ++i) {
      if (i == v) continue;
      int b = 0;
      for (int j = 0; j < n_; ++j) {
        if (j == v) continue;
        if (has_edge(i, j)) h.rows_[a] |= VertexMask(1U << b);
        ++b;
      }
      ++a;
    }
    return h;
  }

  /// Connected components as vertex masks, ordered by lowest vertex.
  std::vector<VertexMask> components() const {
    std::vector<VertexMask> out;
    VertexMask seen = 0;
    for (int s = 0; s < n_; ++s) {
      if ((seen >> s) & 1U) continue;
      VertexMask comp = VertexMask(1U << s);
      VertexMask frontier = comp;
      while (frontier) {
        VertexMask next = 0;
        for (VertexMask f = frontier; f; f &= VertexMask(f - 1))
          next |= rows_[std::countr_zero(f)];
        next &= VertexMask(~comp);
        comp |= next;
        frontier = next;
      }
      seen |= comp;
      out.push_back(comp);
    }
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    if (a.n_ != b.n_) return false;
    for (int v = 0; v < a.n_; ++v)
      if (a.rows_[v] != b.rows_[v]) return false;
    return true;
  }

 private:
  void check_pair(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) throw std::out_of_range("Graph: vertex index");
    if (u == v) throw std::invalid_argument("Graph: self-loops are not allowed");
  }

  int n_ = 1;
  std::array<VertexMask, kMaxVertices> rows_{};
};

}  // namespace gscat
