#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace gscat {

inline constexpr int kTails = 4;

/// How many tails sit on each vertex; the counts always sum to four.
class TailMultiset {
 public:
  TailMultiset() = default;

  explicit TailMultiset(std::vector<int> counts) : counts_(std::move(counts)) {
    if (counts_.empty()) throw std::invalid_argument("TailMultiset: no vertices");
    int total = 0;
    for (int c : counts_) {
      if (c < 0 || c > kTails) throw std::invalid_argument("TailMultiset: count out of range");
      total += c;
    }
    if (total != kTails) throw std::invalid_argument("TailMultiset: counts must sum to 4");
  }

  /// From the attachment vertex of each tail, in any order.
  static TailMultiset from_vertices(int n, const std::array<int, kTails>& vertices) {
    std::vector<int> counts(std::size_t(n), 0);
    for (int v : vertices) {
      if (v < 0 || v >= n) throw std::out_of_range("TailMultiset: vertex out of range");
      ++counts[std::size_t(v)];
    }
    return TailMultiset(std::move(counts));
  }

  int order() const { return int(counts_.size()); }
  int count(int v) const { return counts_[std::size_t(v)]; }
  const std::vector<int>& counts() const { return counts_; }

  /// Attachment vertex of each tail, ascending; tail i is slot
  /// (i - first index of that vertex) on its vertex.
  std::array<int, kTails> tail_vertices() const {
    std::array<int, kTails> out{};
    int i = 0;
    for (int v = 0; v < order(); ++v)
      for (int s = 0; s < count(v); ++s) out[std::size_t(i++)] = v;
    return out;
  }

  /// Distinct attachment vertices, ascending.
  std::vector<int> attachment_vertices() const {
    std::vector<int> out;
    for (int v = 0; v < order(); ++v)
      if (count(v) > 0) out.push_back(v);
    return out;
  }

  friend bool operator==(const TailMultiset&, const TailMultiset&) = default;

 private:
  std::vector<int> counts_;
};

/// All C(n+3, 4) multisets, in lexicographic order of their sorted tail
/// vertex tuples.
inline std::vector<TailMultiset> enumerate_multisets(int n) {
  if (n < 1) throw std::invalid_argument("enumerate_multisets: n must be positive");
  std::vector<TailMultiset> out;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      for (int c = b; c < n; ++c)
        for (int d = c; d < n; ++d) out.push_back(TailMultiset::from_vertices(n, {a, b, c, d}));
  return out;
}

enum class Role { in0 = 0, in1 = 1, out0 = 2, out1 = 3 };

struct Port {
  int vertex = 0;
  int slot = 0;
  friend bool operator==(const Port&, const Port&) = default;
};

/// Register roles (0_in, 1_in, 0_out, 1_out) mapped to tails. Tails on one
/// vertex are interchangeable, so slots are always numbered in role order:
/// the first role landing on a vertex takes slot 0, the next slot 1, and so on.
class PortAssignment {
 public:
  PortAssignment() = default;

  explicit PortAssignment(const std::array<int, kTails>& vertices) : vertices_(vertices) {
    for (int v : vertices_)
      if (v < 0) throw std::invalid_argument("PortAssignment: negative vertex");
  }

  const std::array<int, kTails>& vertices() const { return vertices_; }
  int vertex(Role r) const { return vertices_[std::size_t(r)]; }

  Port port(Role r) const {
    const auto i = std::size_t(r);
    int slot = 0;
    for (std::size_t j = 0; j < i; ++j) slot += vertices_[j] == vertices_[i];
    return {vertices_[i], slot};
  }

  /// Index of the role's tail within TailMultiset::tail_vertices().
  int tail_index(Role r) const {
    const Port p = port(r);
    int below = 0;
    for (int v : vertices_) below += v < p.vertex;
    return below + p.slot;
  }

  TailMultiset multiset(int n) const { return TailMultiset::from_vertices(n, vertices_); }

  friend bool operator==(const PortAssignment&, const PortAssignment&) = default;
  friend auto operator<=>(const PortAssignment&, const PortAssignment&) = default;

 private:
  std::array<int, kTails> vertices_{};
};

/// Every physically distinct role assignment over the multiset's tails:
/// 24 / prod(M_v!) of them, in lexicographic order of vertex tuples.
inline std::vector<PortAssignment> enumerate_role_assignments(const TailMultiset& m) {
  std::array<int, kTails> v = m.tail_vertices();
  std::vector<PortAssignment> out;
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

/// Inputs become outputs and vice versa: tail order (3, 4, 1, 2).
inline PortAssignment swap_io(const PortAssignment& p) {
  const auto& v = p.vertices();
  return PortAssignment({v[2], v[3], v[0], v[1]});
}

/// Exchanges the 0 and 1 labels on both sides: tail order (2, 1, 4, 3).
inline PortAssignment swap_labels(const PortAssignment& p) {
  const auto& v = p.vertices();
  return PortAssignment({v[1], v[0], v[3], v[2]});
}

}  // namespace gscat
