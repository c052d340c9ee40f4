#pragma once

// Canonical labeling by equitable refinement plus individualization search
// with automorphism pruning. Sized for n <= 12, where the search tree stays
// tiny once found automorphisms are used to skip equivalent branches.

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gscat/graph.hpp"
#include "gscat/graph6.hpp"

namespace gscat {

/// Upper-triangle adjacency bits in graph6 column order, most significant
/// first. 66 bits at n = 12, hence 128-bit storage.
using AdjacencyCode = unsigned __int128;

using Labeling = std::array<std::uint8_t, kMaxVertices>;

inline AdjacencyCode adjacency_code(const Graph& g, const Labeling& lab) {
  AdjacencyCode code = 0;
  const int n = g.order();
  for (int j = 1; j < n; ++j) {
    const VertexMask row = g.neighbours(lab[j]);
    for (int i = 0; i < j; ++i) code = (code << 1) | ((row >> lab[i]) & 1U);
  }
  return code;
}

inline AdjacencyCode adjacency_code(const Graph& g) {
  Labeling id{};
  for (int i = 0; i < kMaxVertices; ++i) id[i] = std::uint8_t(i);
  return adjacency_code(g, id);
}

/// Ordered partition of the vertex set; each cell is a bitmask.
struct OrderedPartition {
  std::array<VertexMask, kMaxVertices> cells{};
  int size = 0;

  bool discrete(int n) const { return size == n; }
};

namespace detail {

// Splits `x` by neighbour count into `w`, appending subcells in ascending
// count order. Returns true if `x` was split.
inline bool split_cell(const Graph& g, VertexMask x, VertexMask w, OrderedPartition& out) {
  if (std::has_single_bit(x)) {
    out.cells[out.size++] = x;
    return false;
  }
  std::array<VertexMask, kMaxVertices + 1> bucket{};
  VertexMask used = 0;  // bit c set when count c occurs
  for (VertexMask m = x; m; m &= VertexMask(m - 1)) {
    const int v = std::countr_zero(m);
    const int c = std::popcount(VertexMask(g.neighbours(v) & w));
    bucket[c] |= VertexMask(1U << v);
    used |= VertexMask(1U << c);
  }
  const bool split = !std::has_single_bit(used);
  for (VertexMask m = used; m; m &= VertexMask(m - 1)) out.cells[out.size++] = bucket[std::countr_zero(m)];
  return split;
}

}  // namespace detail

/// Refines `p` to the coarsest equitable partition below it. The result
/// depends only on the ordered partition and the graph, so it commutes with
/// relabeling.
inline void refine(const Graph& g, OrderedPartition& p) {
  for (int s = 0; s < p.size;) {
    const VertexMask w = p.cells[s];
    OrderedPartition q;
    bool changed = false;
    for (int c = 0; c < p.size; ++c) changed |= detail::split_cell(g, p.cells[c], w, q);
    if (changed) {
      p = q;
      s = 0;
    } else {
      ++s;
    }
  }
}

inline OrderedPartition unit_partition(const Graph& g) {
  OrderedPartition p;
  p.cells[0] = g.all_vertices();
  p.size = 1;
  return p;
}

/// Partition whose cells are colour classes in ascending colour order.
inline OrderedPartition colour_partition(const Graph& g, std::span<const int> colours) {
  std::vector<int> values(colours.begin(), colours.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  OrderedPartition p;
  for (int c : values) {
    VertexMask cell = 0;
    for (int v = 0; v < g.order(); ++v)
      if (colours[v] == c) cell |= VertexMask(1U << v);
    p.cells[p.size++] = cell;
  }
  return p;
}

struct CanonicalLabeling {
  Labeling order{};       // order[i] = original vertex placed at position i
  AdjacencyCode code = 0; // code of the relabeled graph
  std::vector<Labeling> automorphisms;  // generators found during search
};

namespace detail {

class CanonSearch {
 public:
  explicit CanonSearch(const Graph& g) : g_(g), n_(g.order()) {}

  CanonicalLabeling run(OrderedPartition p) {
    refine(g_, p);
    std::array<std::uint8_t, kMaxVertices> fixed{};
    descend(p, fixed, 0);
    return std::move(result_);
  }

 private:
  void leaf(const OrderedPartition& p) {
    Labeling lab{};
    for (int i = 0; i < n_; ++i) lab[i] = std::uint8_t(std::countr_zero(p.cells[i]));
    const AdjacencyCode code = adjacency_code(g_, lab);
    if (!have_best_ || code > result_.code) {
      have_best_ = true;
      result_.code = code;
      result_.order = lab;
    } else if (code == result_.code) {
      Labeling gamma{};
      for (int i = 0; i < n_; ++i) gamma[lab[i]] = result_.order[i];
      result_.automorphisms.push_back(gamma);
    }
  }

  // Orbit representatives of the group generated by the stored automorphisms
  // that fix every vertex in `fixed[0..depth)`.
  std::array<std::uint8_t, kMaxVertices> orbits(const std::array<std::uint8_t, kMaxVertices>& fixed,
                                                int depth) const {
    std::array<std::uint8_t, kMaxVertices> parent{};
    for (int i = 0; i < n_; ++i) parent[i] = std::uint8_t(i);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const Labeling& gamma : result_.automorphisms) {
      bool stabilises = true;
      for (int d = 0; d < depth && stabilises; ++d) stabilises = gamma[fixed[d]] == fixed[d];
      if (!stabilises) continue;
      for (int v = 0; v < n_; ++v) {
        const int a = find(v);
        const int b = find(gamma[v]);
        if (a != b) parent[std::max(a, b)] = std::uint8_t(std::min(a, b));
      }
    }
    for (int i = 0; i < n_; ++i) parent[i] = std::uint8_t(find(i));
    return parent;
  }

  void descend(const OrderedPartition& p, std::array<std::uint8_t, kMaxVertices>& fixed, int depth) {
    if (p.discrete(n_)) {
      leaf(p);
      return;
    }
    // Target cell: first non-singleton cell of minimum size.
    int target = -1;
    int best_size = kMaxVertices + 1;
    for (int c = 0; c < p.size; ++c) {
      const int sz = std::popcount(p.cells[c]);
      if (sz > 1 && sz < best_size) {
        best_size = sz;
        target = c;
      }
    }
    const VertexMask cell = p.cells[target];
    std::array<std::uint8_t, kMaxVertices> explored{};
    int nexplored = 0;
    for (VertexMask m = cell; m; m &= VertexMask(m - 1)) {
      const int w = std::countr_zero(m);
      const auto orb = orbits(fixed, depth);
      bool equivalent = false;
      for (int e = 0; e < nexplored && !equivalent; ++e) equivalent = orb[explored[e]] == orb[w];
      if (equivalent) continue;
      OrderedPartition child;
      for (int c = 0; c < p.size; ++c) {
        if (c == target) {
          child.cells[child.size++] = VertexMask(1U << w);
          child.cells[child.size++] = VertexMask(cell & ~(1U << w));
        } else {
          child.cells[child.size++] = p.cells[c];
        }
      }
      refine(g_, child);
      fixed[depth] = std::uint8_t(w);
      descend(child, fixed, depth + 1);
      explored[nexplored++] = std::uint8_t(w);
    }
  }

  const Graph& g_;
  int n_;
  bool have_best_ = false;
  CanonicalLabeling result_;
};

}  // namespace detail

inline CanonicalLabeling canonical_labeling(const Graph& g) {
  return detail::CanonSearch(g).run(unit_partition(g));
}

inline CanonicalLabeling canonical_labeling(const Graph& g, std::span<const int> colours) {
  return detail::CanonSearch(g).run(colour_partition(g, colours));
}

inline Graph canonical_form(const Graph& g) { return g.relabeled(canonical_labeling(g).order); }

/// Isomorphism-invariant key: graph6 text of the canonical form, optionally
/// followed by the vertex colours in canonical order.
class CanonicalKey {
 public:
  CanonicalKey() = default;
  explicit CanonicalKey(std::string bytes) : bytes_(std::move(bytes)) {}

  const std::string& bytes() const { return bytes_; }

  friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
  friend auto operator<=>(const CanonicalKey& a, const CanonicalKey& b) {
    // Shorter keys belong to smaller graphs; same-length keys compare bytewise.
    if (auto c = a.bytes_.size() <=> b.bytes_.size(); c != 0) return c;
    return a.bytes_ <=> b.bytes_;
  }

 private:
  std::string bytes_;
};

inline CanonicalKey canonical_key(const Graph& g) { return CanonicalKey(write_graph6(canonical_form(g))); }

inline CanonicalKey canonical_key(const Graph& g, std::span<const int> colours) {
  const CanonicalLabeling lab = canonical_labeling(g, colours);
  std::string bytes = write_graph6(g.relabeled(lab.order));
  bytes.push_back(':');
  for (int i = 0; i < g.order(); ++i) bytes += std::to_string(colours[lab.order[i]]) + (i + 1 < g.order() ? "," : "");
  return CanonicalKey(std::move(bytes));
}

}  // namespace gscat
